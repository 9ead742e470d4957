"""Command-line front end.

Usage::

    padic-ground SUBCOMMAND --config scenario.toml [--out DIR] [--seed N]
                 [--format csv|json]

Subcommands: fourier, kernel, groundstate, recurrence, walk, verify.
Exit codes: 0 success, 1 usage or config error, 2 no ground state,
3 numerical check failure.

Solver tolerances can be overridden from the environment (these win over the
config file): ``PADIC_GS_POWER_TOL``, ``PADIC_GS_POWER_MAX_ITER``,
``PADIC_GS_R_TOL``, ``PADIC_GS_LAMBDA_FLOOR``, ``PADIC_GS_KERNEL_TOL``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from .padic_core import GridSpec
from .radial_fourier import (DegenerateProfileError, RadialProfile,
                             ball_indicator_profile, fourier_radial,
                             inverse_radial_value, is_normalized,
                             power_law_profile)
from .recurrence import classify, green_series, return_probabilities
from .spectral_solver import (DegenerateKernelWarning, GroundState, Potential,
                              SolverTolerances, dissipativity_margins,
                              find_ground_state, green_kernel, quadratic_form,
                              q_matrix, spectral_radius)
from .walk_sim import WalkConfig, recurrence_estimate, simulate_walk

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_GROUND_STATE = 2
EXIT_CHECK_FAILED = 3

MAX_PRIME = 97
MAX_DIM = 4
MAX_FULL_GRID_CELLS = 2 ** 20

ENV_TOLERANCES = {
    "PADIC_GS_POWER_TOL": ("power_tol", float),
    "PADIC_GS_POWER_MAX_ITER": ("power_max_iter", int),
    "PADIC_GS_R_TOL": ("r_tol", float),
    "PADIC_GS_LAMBDA_FLOOR": ("lambda_floor", float),
    "PADIC_GS_KERNEL_TOL": ("kernel_rel_tol", float),
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Scenario config


@dataclass
class PotentialSpec:
    kind: str
    N: int = 0
    value: float = 1.0
    shells: dict[int, float] = field(default_factory=dict)
    cells: list[float] | None = None
    beta: float = 0.5

    def build(self, grid: GridSpec) -> Potential:
        if self.kind == "indicator_ball":
            return Potential.indicator_ball(grid, self.N, self.value)
        if self.kind == "radial":
            return Potential.from_radial(grid, self.shells)
        if len(self.cells) != grid.cell_count:
            raise ConfigError(f"[potential] file: {len(self.cells)} values "
                              f"for {grid.cell_count} cells")
        return Potential(grid, np.array(self.cells))


@dataclass
class ScenarioConfig:
    profile: RadialProfile
    potential: PotentialSpec | None = None
    grid: GridSpec | None = None
    tolerances: SolverTolerances = field(default_factory=SolverTolerances)
    method: str = "full"
    r_scan: tuple[float, ...] = (0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0)
    fourier_window: tuple[int, int] | None = None
    kernel_lambdas: tuple[float, ...] = (0.1, 1.0, 10.0)
    kernel_shells: int = 10
    recurrence: dict[str, int] = field(default_factory=dict)
    walk: dict[str, Any] = field(default_factory=dict)
    source: Path | None = None


def _get(table: dict, section: str, key: str, kind, default=None,
          required=False):
    if key not in table:
        if required:
            raise ConfigError(f"[{section}] missing required key '{key}'")
        return default
    val = table[key]
    try:
        if kind is int and (isinstance(val, bool) or
                            (isinstance(val, float) and not val.is_integer())):
            raise TypeError
        return kind(val)
    except (TypeError, ValueError):
        raise ConfigError(f"[{section}] {key}: expected {kind.__name__}, "
                          f"got {val!r}") from None


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _parse_profile(t: dict) -> RadialProfile:
    p = _get(t, "profile", "p", int, required=True)
    n = _get(t, "profile", "n", int, required=True)
    if not _is_prime(p) or p > MAX_PRIME:
        raise ConfigError(f"[profile] p: must be a prime <= {MAX_PRIME}, "
                          f"got {p}")
    if not 1 <= n <= MAX_DIM:
        raise ConfigError(f"[profile] n: must be in 1..{MAX_DIM}, got {n}")
    kind = _get(t, "profile", "kind", str, "table")
    try:
        if kind == "power_law":
            alpha = _get(t, "profile", "alpha", float, required=True)
            return power_law_profile(p, n, alpha)
        if kind == "ball_indicator":
            return ball_indicator_profile(p, n, _get(t, "profile", "N", int, 0))
        if kind == "table":
            return RadialProfile.from_dict(t)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"[profile] {exc}") from None
    raise ConfigError(f"[profile] kind: unknown kind {kind!r} "
                      "(power_law | ball_indicator | table)")


def _parse_potential(t: dict, base: Path | None) -> PotentialSpec:
    kind = _get(t, "potential", "kind", str, "indicator_ball")
    beta = _get(t, "potential", "beta", float, 0.5)
    if not 0 < beta <= 1:
        raise ConfigError("[potential] beta: must lie in (0, 1]")
    if kind == "indicator_ball":
        value = _get(t, "potential", "value", float, 1.0)
        if value == 0:
            raise ConfigError("[potential] value: V is identically zero")
        return PotentialSpec(kind, N=_get(t, "potential", "N", int, 0),
                             value=value, beta=beta)
    if kind == "radial":
        raw = t.get("shells")
        if not isinstance(raw, dict) or not raw:
            raise ConfigError("[potential] shells: expected a table of "
                              "shell = value entries")
        try:
            shells = {int(k): float(v) for k, v in raw.items()}
        except ValueError:
            raise ConfigError("[potential] shells: keys must be integers "
                              "and values numbers") from None
        if not any(shells.values()):
            raise ConfigError("[potential] shells: V is identically zero")
        return PotentialSpec(kind, shells=shells, beta=beta)
    if kind == "file":
        name = _get(t, "potential", "file", str, required=True)
        path = Path(name) if base is None else base / name
        if not path.is_file():
            raise ConfigError(f"[potential] file: {path} does not exist")
        try:
            cells = [float(tok) for tok in
                     path.read_text().replace(",", " ").split()]
        except ValueError as exc:
            raise ConfigError(f"[potential] file: {exc}") from None
        if not any(cells):
            raise ConfigError("[potential] file: V is identically zero")
        return PotentialSpec(kind, cells=cells, beta=beta)
    raise ConfigError(f"[potential] kind: unknown kind {kind!r} "
                      "(indicator_ball | radial | file)")


def _parse_tolerances(t: dict) -> SolverTolerances:
    tol = SolverTolerances()
    updates = {}
    for key in ("power_tol", "r_tol", "lambda_floor", "kernel_rel_tol"):
        val = _get(t, "solver", key, float)
        if val is not None:
            updates[key] = val
    for key in ("power_max_iter", "exterior_shells"):
        val = _get(t, "solver", key, int)
        if val is not None:
            updates[key] = val
    for env, (key, kind) in ENV_TOLERANCES.items():
        raw = os.environ.get(env)
        if raw is None:
            continue
        try:
            updates[key] = kind(raw)
        except ValueError:
            raise ConfigError(f"environment {env}: expected "
                              f"{kind.__name__}, got {raw!r}") from None
    for key, val in updates.items():
        if not val > 0:
            raise ConfigError(f"tolerance {key} must be > 0, got {val}")
    return replace(tol, **updates)


def parse_config(data: dict, source: Path | None = None) -> ScenarioConfig:
    if "profile" not in data:
        raise ConfigError("missing [profile] section")
    known = {"profile", "potential", "grid", "solver", "fourier", "kernel",
             "recurrence", "walk"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(extra))}")
    base = None if source is None else source.parent
    prof = _parse_profile(data["profile"])
    cfg = ScenarioConfig(profile=prof, source=source)

    if "grid" in data:
        g = data["grid"]
        M = _get(g, "grid", "M", int, required=True)
        K = _get(g, "grid", "K", int, required=True)
        if M + K < 0:
            raise ConfigError("[grid] need M + K >= 0")
        cfg.grid = GridSpec(prof.p, prof.n, M, K)
    if "potential" in data:
        cfg.potential = _parse_potential(data["potential"], base)
        if cfg.grid is None:
            raise ConfigError("[potential] given without a [grid] section")

    s = data.get("solver", {})
    cfg.tolerances = _parse_tolerances(s)
    cfg.method = _get(s, "solver", "method", str, "full")
    if cfg.method not in ("full", "radial"):
        raise ConfigError(f"[solver] method: expected 'full' or 'radial', "
                          f"got {cfg.method!r}")
    if "r_scan" in s:
        cfg.r_scan = tuple(float(x) for x in s["r_scan"])
    if cfg.grid is not None and cfg.method == "full":
        cells = cfg.grid.cell_count
        if cells > MAX_FULL_GRID_CELLS:
            raise ConfigError(f"[grid] {cells} cells exceeds the full-grid "
                              f"limit of {MAX_FULL_GRID_CELLS}")

    f = data.get("fourier", {})
    if "N_min" in f or "N_max" in f:
        lo = _get(f, "fourier", "N_min", int, required=True)
        hi = _get(f, "fourier", "N_max", int, required=True)
        if hi < lo:
            raise ConfigError("[fourier] N_max must be >= N_min")
        cfg.fourier_window = (lo, hi)

    k = data.get("kernel", {})
    if "lambdas" in k:
        cfg.kernel_lambdas = tuple(float(x) for x in k["lambdas"])
        if not all(x > 0 for x in cfg.kernel_lambdas):
            raise ConfigError("[kernel] lambdas: must be positive")
    cfg.kernel_shells = _get(k, "kernel", "shells", int, 10)

    r = data.get("recurrence", {})
    cfg.recurrence = {
        "l": _get(r, "recurrence", "l", int, 0),
        "N_max": _get(r, "recurrence", "N_max", int, 20),
        "ball": _get(r, "recurrence", "ball", int, 0),
        "m_max": _get(r, "recurrence", "m_max", int, 1000),
    }

    w = data.get("walk", {})
    cfg.walk = {
        "steps": _get(w, "walk", "steps", int, 10),
        "trials": _get(w, "walk", "trials", int, 100_000),
        "N": _get(w, "walk", "N", int, 0),
        "seed": _get(w, "walk", "seed", int, 0),
        "k_low": _get(w, "walk", "k_low", int),
        "k_high": _get(w, "walk", "k_high", int),
    }
    if cfg.walk["trials"] < 1:
        raise ConfigError("[walk] trials: must be >= 1")
    return cfg


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    try:
        data = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data, path)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Table:
    header: list[str]
    rows: list[list]


@dataclass
class Report:
    command: str
    summary: dict
    tables: dict[str, Table]
    primary: str
    exit_code: int = EXIT_OK

    def to_json(self) -> str:
        doc = {"schema_version": SCHEMA_VERSION, "command": self.command,
               **self.summary,
               "tables": {k: {"header": t.header, "rows": t.rows}
                          for k, t in self.tables.items()}}
        return json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"

    def to_csv(self, name: str | None = None) -> str:
        t = self.tables[name or self.primary]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.header)
        for row in t.rows:
            w.writerow([repr(x) if isinstance(x, float) else x
                        for x in _plain(row)])
        return buf.getvalue()

    def write(self, out: Path) -> None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{self.command}.json").write_text(self.to_json())
        for name in self.tables:
            (out / f"{self.command}_{name}.csv").write_text(self.to_csv(name))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# ---------------------------------------------------------------------------
# Commands


def cmd_fourier(cfg: ScenarioConfig) -> Report:
    a_hat = fourier_radial(cfg.profile, cfg.fourier_window)
    rows = [[N, v, d] for N, v, d in a_hat.rows()]
    summary = {
        "profile": cfg.profile.to_dict(),
        "N_min": a_hat.N_min, "N_max": a_hat.N_max,
        "limit_at_zero_frequency": a_hat.limit_at_zero_frequency,
        "tail_exponent_estimate": a_hat.tail_exponent_estimate,
    }
    return Report("fourier", summary,
                  {"transform": Table(["N", "a_hat", "one_minus_a_hat"], rows)},
                  "transform")


def cmd_kernel(cfg: ScenarioConfig) -> Report:
    a = cfg.profile
    if not is_normalized(a):
        raise ConfigError("[profile] kernel needs a density of total mass 1")
    a_hat = fourier_radial(a)
    K = cfg.grid.K if cfg.grid else 3
    M_ext = (cfg.grid.M if cfg.grid else 0) + cfg.kernel_shells
    rows, per_lambda = [], []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateKernelWarning)
        for lam in cfg.kernel_lambdas:
            kern = green_kernel(a_hat, lam, M_ext=M_ext, K=K,
                                rel_tol=cfg.tolerances.kernel_rel_tol)
            for m in range(kern.m_lo, M_ext + 1):
                rows.append([lam, m, kern.value(m), kern.ball_integral(m)])
            per_lambda.append({"lambda": lam, "mass": kern.mass(),
                               "inverse_lambda": 1.0 / lam,
                               "remainder_bound": kern.remainder_bound})
    return Report("kernel", {"profile": a.to_dict(), "kernels": per_lambda},
                  {"shells": Table(["lambda", "m", "G", "ball_integral"],
                                   rows)}, "shells")


def _require_solver_inputs(cfg: ScenarioConfig) -> Potential:
    if cfg.grid is None or cfg.potential is None:
        raise ConfigError("groundstate needs [grid] and [potential] sections")
    try:
        V = cfg.potential.build(cfg.grid)
    except ValueError as exc:
        raise ConfigError(f"[potential] {exc}") from None
    if V.is_zero:
        raise ConfigError("[potential] V is identically zero")
    if cfg.method == "radial":
        try:
            V.radial_values()
        except ValueError as exc:
            raise ConfigError(f"[solver] method = 'radial': {exc}") from None
    return V


def cmd_groundstate(cfg: ScenarioConfig) -> Report:
    V = _require_solver_inputs(cfg)
    a = cfg.profile
    if not is_normalized(a):
        raise ConfigError("[profile] ground states need a density of total "
                          "mass 1")
    if a.is_degenerate:
        raise ConfigError("[profile] ground states need a power tail")
    res = find_ground_state(a, V, tolerances=cfg.tolerances,
                            method=cfg.method)
    curve = Table(["lambda", "r"], [list(x) for x in res.r_curve])
    if not isinstance(res, GroundState):
        summary = {"status": "no_ground_state",
                   "lambda_floor": res.lambda_floor,
                   "r_at_floor": res.r_at_floor, "flags": res.flags}
        return Report("groundstate", summary, {"r_curve": curve}, "r_curve",
                      EXIT_NO_GROUND_STATE)
    shells = Table(["shell", "psi_max"],
                   [[m, v] for m, v in sorted(res.shell_maxima.items())])
    if res.method == "radial":
        psi_rows = [[m, float(v)] for m, v in
                    zip(range(-cfg.grid.K, cfg.grid.M + 1), res.psi)]
        psi = Table(["shell", "psi"], psi_rows)
    else:
        idx = cfg.grid.shell_index()
        psi = Table(["cell", "shell", "psi"],
                    [[i, int(idx[i]), float(v)] for i, v in enumerate(res.psi)])
    summary = {
        "status": "ground_state", "method": res.method,
        "lambda_star": res.lambda_star,
        "spectral_radius_at_solution": res.spectral_radius_at_solution,
        "eigen_residual": res.eigen_residual, "q_residual": res.q_residual,
        "psi_min": float(np.min(res.psi)),
        "exterior_shells": res.exterior_shells, "flags": res.flags,
        "grid": {"p": cfg.grid.p, "n": cfg.grid.n, "M": cfg.grid.M,
                 "K": cfg.grid.K},
    }
    return Report("groundstate", summary,
                  {"r_curve": curve, "shell_maxima": shells, "psi": psi},
                  "shell_maxima")


def cmd_recurrence(cfg: ScenarioConfig) -> Report:
    a = cfg.profile
    rc = cfg.recurrence
    try:
        rep = classify(a, rc["l"], rc["N_max"])
    except DegenerateProfileError as exc:
        raise ConfigError(f"[profile] {exc}") from None
    Ns = range(rc["l"], rc["N_max"] + 1)
    tables = {
        "criterion": Table(["N", "term", "integral_increment",
                            "integral_partial_sum"],
                           [[N, t, i, s] for N, t, i, s in
                            zip(Ns, rep.criterion_terms,
                                rep.integral_increments,
                                rep.integral_partial_sums)]),
    }
    summary = {
        "classification": rep.classification.value,
        "tail_exponent": rep.tail_exponent,
        "fitted_term_exponent": rep.fitted_term_exponent,
        "increment_ratio": rep.increment_ratio,
        "deficit_exponent": rep.deficit_exponent,
    }
    if rc["m_max"] > 0 and is_normalized(a):
        a_hat = fourier_radial(a)
        ms = np.arange(1, rc["m_max"] + 1)
        P = return_probabilities(a_hat, rc["ball"], ms)
        S = np.cumsum(P)
        tables["return_probability"] = Table(
            ["m", "P", "partial_sum"],
            [[int(m), float(p_), float(s_)] for m, p_, s_ in zip(ms, P, S)])
        summary["green_series_final"] = float(S[-1])
    return Report("recurrence", summary, tables, "criterion")


def _walk_config(cfg: ScenarioConfig, seed: int | None) -> WalkConfig:
    w = dict(cfg.walk)
    if seed is not None:
        w["seed"] = seed
    try:
        return WalkConfig(cfg.profile, **w)
    except ValueError as exc:
        raise ConfigError(f"[walk] {exc}") from None


def cmd_walk(cfg: ScenarioConfig, seed: int | None = None) -> Report:
    wc = _walk_config(cfg, seed)
    stats = simulate_walk(wc)
    est = recurrence_estimate(wc, stats)
    exact = return_probabilities(fourier_radial(wc.a), wc.N,
                                 np.arange(1, wc.steps + 1))
    rows = []
    for m in range(1, wc.steps + 1):
        mc, se = stats.return_probability(m)
        rows.append([m, mc, se, float(exact[m - 1])])
    summary = {
        "seed": wc.seed, "trials": wc.trials, "steps": wc.steps, "N": wc.N,
        "k_low": wc.k_low, "k_high": wc.k_high,
        "visits_mean": est.mean, "visits_standard_error": est.standard_error,
        "exact_partial_sum": float(exact.sum()),
        "resampled_shells": stats.resampled,
        "fold_back_probability": stats.fold_back_probability,
    }
    return Report("walk", summary,
                  {"return_probability": Table(["m", "mc", "se", "exact"],
                                               rows)},
                  "return_probability")


def _check(name: str, value: float, threshold: float, passed: bool) -> list:
    return [name, float(value), float(threshold), bool(passed)]


def cmd_verify(cfg: ScenarioConfig, seed: int | None = None) -> Report:
    """Run the invariant checks that apply to this scenario."""
    a = cfg.profile
    seed = cfg.walk.get("seed", 0) if seed is None else seed
    checks = []
    normalized = is_normalized(a)

    # Fourier round trip on the explicit window.
    a_hat = fourier_radial(a)
    err = max(abs(inverse_radial_value(a_hat, j) - a.value(j))
              / max(abs(a.value(j)), 1e-300)
              for j in range(a.j_min, a.j_max + 1))
    checks.append(_check("fourier_round_trip", err, 1e-10, err <= 1e-10))

    if normalized:
        grid = cfg.grid or GridSpec(a.p, a.n, 2, 2)
        if grid.cell_count <= 4096:
            margins = dissipativity_margins(a, grid, 100, seed=seed)
            worst = float(margins.min())
            checks.append(_check("dissipativity", worst, -1e-9,
                                 worst >= -1e-9))
        if not a.is_degenerate:
            prev = None
            for lam in cfg.kernel_lambdas:
                kern = green_kernel(a_hat, lam, M_ext=grid.M + 10, K=grid.K,
                                    rel_tol=cfg.tolerances.kernel_rel_tol)
                mass_err = abs(lam * kern.mass() - 1.0)
                checks.append(_check(f"kernel_mass[lambda={lam:g}]",
                                     mass_err, 1e-8, mass_err <= 1e-8))
                vmin = float(np.min(kern.shells))
                checks.append(_check(f"kernel_positive[lambda={lam:g}]",
                                     vmin, 0.0, vmin > 0))
                if prev is not None and prev[0] < lam:
                    gap = float(np.min(prev[1] - kern.shells))
                    checks.append(_check(
                        f"kernel_decreasing[lambda={prev[0]:g}->{lam:g}]",
                        gap, 0.0, gap > 0))
                prev = (lam, kern.shells)

    if cfg.grid is not None:
        grid = cfg.grid
        beta = cfg.potential.beta if cfg.potential else 0.5
        ratios, v_ok, positive_at = [], True, None
        for N in range(-grid.K, grid.M + 1):
            V = Potential.indicator_ball(grid, N, beta)
            l0, vt = quadratic_form(a, V, N, grid)
            vol = float(grid.p) ** (N * grid.n)
            v_ok &= abs(vt - beta * vol) <= 1e-12 * vol
            ratios.append(abs(l0) / vol)
            if positive_at is None and l0 + vt > 0:
                positive_at = N
        dec = all(b < r for r, b in zip(ratios, ratios[1:]))
        if not a.is_degenerate:
            checks.append(_check("quadratic_form_ratio_decreasing",
                                 ratios[-1], ratios[0], dec))
        checks.append(_check("quadratic_form_v_term", float(v_ok), 1.0, v_ok))

    if (cfg.grid is not None and cfg.potential is not None and normalized
            and not a.is_degenerate):
        V = _require_solver_inputs(cfg)
        prev_r = None
        mono = True
        for lam in sorted(cfg.r_scan):
            kern = green_kernel(a_hat, lam, cfg.grid,
                                rel_tol=cfg.tolerances.kernel_rel_tol)
            r = spectral_radius(q_matrix(kern, V).matrix,
                                cfg.tolerances.power_tol,
                                cfg.tolerances.power_max_iter).r
            mono &= prev_r is None or r < prev_r
            prev_r = r
        checks.append(_check("spectral_radius_decreasing", prev_r, 0.0, mono))

    if not a.is_degenerate:
        rep = classify(a, cfg.recurrence.get("l", 0),
                       cfg.recurrence.get("N_max", 20))
        consistent = (rep.tail_exponent >= 0) == (
            rep.increment_ratio is not None and rep.increment_ratio >= 1 - 1e-6)
        checks.append(_check("recurrence_views_agree",
                             rep.increment_ratio or 0.0, 1.0, consistent))

    ok = all(c[3] for c in checks)
    summary = {"passed": ok, "failed": [c[0] for c in checks if not c[3]]}
    return Report("verify", summary,
                  {"checks": Table(["check", "value", "threshold", "passed"],
                                   checks)},
                  "checks", EXIT_OK if ok else EXIT_CHECK_FAILED)


COMMANDS = {
    "fourier": cmd_fourier,
    "kernel": cmd_kernel,
    "groundstate": cmd_groundstate,
    "recurrence": cmd_recurrence,
    "walk": cmd_walk,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-ground",
        description="Ground states and random-walk recurrence for nonlocal "
                    "operators on Q_p^n.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, metavar="PATH",
                        help="scenario file (TOML)")
    parser.add_argument("--out", metavar="DIR",
                        help="write <command>.json and <command>_*.csv here")
    parser.add_argument("--seed", type=int, metavar="U64",
                        help="override the walk/verify seed")
    parser.add_argument("--format", choices=("csv", "json"), default="json",
                        help="what to print on stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = load_config(args.config)
        fn = COMMANDS[args.command]
        if args.command in ("walk", "verify"):
            report = fn(cfg, args.seed)
        else:
            report = fn(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        report.write(Path(args.out))
    sys.stdout.write(report.to_json() if args.format == "json"
                     else report.to_csv())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
