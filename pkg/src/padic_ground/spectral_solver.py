"""Green kernel, the operator Q_lambda on the coset grid, and the ground state.

All data (kernel, potential, test functions) are constant on the cells of a
:class:`~padic_ground.padic_core.GridSpec`.  Because ``||x - y||`` is constant
on every pair of distinct cells, integrating the kernel over a cell is a single
multiplication, so the matrices built here act on cell-constant functions
exactly; the only approximation is the certified truncation of the
low-frequency shell series inside :func:`green_kernel`.

Dual-shell index convention: ``N`` labels ``||xi|| = p^(-N)``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .padic_core import BELOW_RESOLUTION_EXP, GridSpec
from .radial_fourier import (DualProfile, RadialProfile, fourier_radial,
                             is_normalized, shell_suffix_sums)

log = logging.getLogger(__name__)


class GridMismatchError(ValueError):
    pass


class DegenerateKernelWarning(UserWarning):
    """The jump density has compact support; a~ = 1 off the origin."""


@dataclass(frozen=True)
class SolverTolerances:
    power_tol: float = 1e-12
    power_max_iter: int = 100_000
    r_tol: float = 1e-10
    lambda_floor: float = 1e-6
    kernel_rel_tol: float = 1e-16
    exterior_shells: int = 60


# ---------------------------------------------------------------------------
# Potential


@dataclass(frozen=True)
class Potential:
    """V = 1 - m as one value per cell of B_M; zero outside B_M."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.cell_count,):
            raise ValueError(f"expected {self.grid.cell_count} cell values, "
                             f"got shape {v.shape}")
        if np.any(v < 0) or np.any(v > 1):
            raise ValueError("potential values must lie in [0, 1]")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def indicator_ball(cls, grid: GridSpec, N: int,
                       value: float = 1.0) -> Potential:
        if N > grid.M:
            raise ValueError(f"B_{N} is not inside the domain B_{grid.M}")
        return cls(grid, np.where(grid.ball_mask(N), value, 0.0))

    @classmethod
    def from_radial(cls, grid: GridSpec,
                    shell_values: Mapping[int, float]) -> Potential:
        """Shell-indexed values; key ``-K`` is the central cell B_{-K}."""
        idx = grid.shell_index()
        v = np.array([float(shell_values.get(int(m), 0.0)) for m in idx])
        return cls(grid, v)

    def scaled(self, factor: float) -> Potential:
        return Potential(self.grid, self.values * factor)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    def radial_values(self, atol: float = 0.0) -> dict[int, float]:
        """Shell values if V is radial, else ValueError."""
        idx = self.grid.shell_index()
        out = {}
        for m in range(-self.grid.K, self.grid.M + 1):
            vals = self.values[idx == m]
            if np.ptp(vals) > atol:
                raise ValueError(f"potential is not radial on shell {m}")
            out[m] = float(vals[0])
        return out


# ---------------------------------------------------------------------------
# Green kernel


@dataclass(frozen=True)
class KernelTable:
    """Shell values of G_lambda for ``m_lo <= m <= M_ext`` and cell integrals.

    ``G(p^m)`` equals ``origin_value`` for every ``m <= m_lo``.
    """

    lam: float
    p: int
    n: int
    K: int
    m_lo: int
    M_ext: int
    shells: np.ndarray = field(repr=False)
    ball_integrals: np.ndarray = field(repr=False)
    diag_cell_integral: float
    far_mass: float
    remainder_bound: float
    sup_bound: float
    degenerate: bool

    def value(self, m: int) -> float:
        if m <= self.m_lo:
            return float(self.shells[0])
        if m > self.M_ext:
            raise ValueError(f"shell {m} beyond the table (M_ext={self.M_ext})")
        return float(self.shells[m - self.m_lo])

    @property
    def origin_value(self) -> float:
        return float(self.shells[0])

    def ball_integral(self, r: int) -> float:
        """Integral of G over B_r, from the closed-form dual-shell sum."""
        if r < self.m_lo:
            return float(self.p) ** (self.n * r) * self.origin_value
        return float(self.ball_integrals[r - self.m_lo])

    def shell_mass(self, m: int) -> float:
        pn = float(self.p) ** self.n
        return (1 - 1 / pn) * pn ** m * self.value(m)

    def mass(self) -> float:
        """Cell integral + window shells + far field; equals 1/lambda."""
        parts = [self.diag_cell_integral, self.far_mass]
        parts += [self.shell_mass(m) for m in range(-self.K + 1, self.M_ext + 1)]
        return math.fsum(parts)

    def values_at(self, exponents: np.ndarray) -> np.ndarray:
        """G at an array of norm exponents (sentinel entries map to G(0))."""
        idx = np.clip(exponents - self.m_lo, 0, None)
        if np.any(idx >= len(self.shells)):
            raise ValueError("exponent beyond kernel table")
        return self.shells[idx]


def green_kernel(a_hat: DualProfile, lam: float, grid: GridSpec | None = None,
                 M_ext: int | None = None, *, K: int | None = None,
                 rel_tol: float = 1e-16) -> KernelTable:
    """Tabulate the kernel of A_lambda with multiplier a~ / (lambda + 1 - a~).

    Shell values come from the radial inverse transform,
    ``G(p^m) = F(m) - p^(-mn) f_(m-1)`` with ``F(r) = sum_{N>=r} s_N f_N``;
    on the far side the equivalent deficit form
    ``G(p^m) = p^(-mn) h_(m-1) - H(m)``, ``h = 1/lambda - f``, is used to avoid
    cancellation.  ``H`` is summed to infinity with a certified remainder.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    f_prof = a_hat.profile
    p, n = f_prof.p, f_prof.n
    if grid is not None:
        if (grid.p, grid.n) != (p, n):
            raise GridMismatchError("grid and profile disagree on (p, n)")
        K = grid.K
        if M_ext is None:
            M_ext = grid.M
    if K is None or M_ext is None:
        raise ValueError("need a grid or explicit K and M_ext")
    degenerate = f_prof.is_degenerate
    if degenerate:
        warnings.warn("jump density has compact support: a~ = 1 off the "
                      "origin; the denominator reduces to lambda there",
                      DegenerateKernelWarning, stacklevel=2)
    if abs(a_hat.limit_at_zero_frequency - 1.0) > 1e-9:
        raise ValueError("green_kernel needs a normalized jump density")

    m_lo = min(-K, f_prof.j_min - 1)
    N_start = m_lo - 1
    N_top = M_ext + 1
    pn = float(p) ** n
    s = 1.0 - 1.0 / pn

    cache: dict[int, tuple[float, float]] = {}

    def fh(N: int) -> tuple[float, float]:
        if N not in cache:
            at = a_hat.at(N)
            d = a_hat.deficit(N)
            den = lam + d
            cache[N] = (at / den, (lam + 1.0) * d / (lam * den))
        return cache[N]

    def h_bound(N: int) -> float:
        return (lam + 1.0) * a_hat.deficit_bound(N) / lam ** 2

    H, remainder = shell_suffix_sums(p, n, N_start, N_top,
                                     lambda N: fh(N)[1], h_bound, rel_tol)

    # F(r) for r in [N_start, N_top]
    F = {N_top: pn ** (-N_top) / lam - H[N_top]}
    acc = F[N_top]
    for N in range(N_top - 1, N_start - 1, -1):
        acc += s * pn ** (-N) * fh(N)[0]
        F[N] = acc

    shells = np.empty(M_ext - m_lo + 1)
    balls = np.empty(M_ext - m_lo + 1)
    for m in range(m_lo, M_ext + 1):
        f_prev, h_prev = fh(m - 1)
        if h_prev <= abs(f_prev):
            g = pn ** (-m) * h_prev - H[m]
        else:
            g = F[m] - pn ** (-m) * f_prev
        shells[m - m_lo] = g
        balls[m - m_lo] = pn ** m * F[m]

    neg = math.fsum(s * pn ** (-N) * max(-fh(N)[0], 0.0)
                    for N in range(N_start, N_top + 1))
    table = KernelTable(
        lam=lam, p=p, n=n, K=K, m_lo=m_lo, M_ext=M_ext,
        shells=shells, ball_integrals=balls,
        diag_cell_integral=pn ** (-K) * F[-K] if -K >= m_lo else 0.0,
        far_mass=pn ** M_ext * H[M_ext],
        remainder_bound=remainder,
        sup_bound=float(shells[0]) + 2.0 * neg,
        degenerate=degenerate)
    return table


# ---------------------------------------------------------------------------
# Q_lambda on the grid


@dataclass(frozen=True)
class QMatrix:
    lam: float
    grid: GridSpec
    matrix: np.ndarray = field(repr=False)
    kernel: KernelTable = field(repr=False)
    potential: Potential = field(repr=False)


def _check_kernel_grid(kernel: KernelTable, grid: GridSpec) -> None:
    if (kernel.p, kernel.n, kernel.K) != (grid.p, grid.n, grid.K):
        raise GridMismatchError(
            f"kernel built for (p, n, K) = {(kernel.p, kernel.n, kernel.K)}, "
            f"grid is {(grid.p, grid.n, grid.K)}")
    if kernel.M_ext < grid.M:
        raise GridMismatchError("kernel table does not reach the domain radius")


def cell_integral_matrix(kernel: KernelTable, grid: GridSpec) -> np.ndarray:
    """I_ij = integral of G(x_i - y) over cell j."""
    _check_kernel_grid(kernel, grid)
    D = grid.distance_exponents()
    out = float(grid.cell_volume) * kernel.values_at(D)
    np.fill_diagonal(out, kernel.diag_cell_integral)
    return out


def q_matrix(kernel: KernelTable, V: Potential) -> QMatrix:
    grid = V.grid
    I = cell_integral_matrix(kernel, grid)
    v = V.values
    mat = (v[None, :] / (kernel.lam + 1.0 - v[:, None])) * I
    return QMatrix(kernel.lam, grid, mat, kernel, V)


@dataclass(frozen=True)
class SpectralResult:
    r: float
    vector: np.ndarray = field(repr=False)
    iterations: int
    converged: bool
    residual: float


def spectral_radius(Q, tol: float = 1e-12, max_iter: int = 100_000,
                    start: np.ndarray | None = None) -> SpectralResult:
    """Power iteration for a nonnegative matrix, sup-norm normalized.

    Stops when successive Rayleigh quotients agree to ``tol`` (relative).
    The returned vector has sup-norm 1.
    """
    A = Q.matrix if isinstance(Q, QMatrix) else np.asarray(Q, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("spectral_radius needs a square matrix")
    if np.any(A < 0):
        raise ValueError("matrix has negative entries")
    x = np.ones(A.shape[0]) if start is None else np.array(start, dtype=float)
    x /= np.max(np.abs(x))
    rq_prev = math.nan
    converged = False
    it = 0
    rq = 0.0
    for it in range(1, max_iter + 1):
        y = A @ x
        top = np.max(np.abs(y))
        if top == 0.0:
            return SpectralResult(0.0, x, it, True, 0.0)
        rq = float(x @ y) / float(x @ x)
        x = y / top
        if abs(rq - rq_prev) < tol * max(abs(rq), 1e-300):
            converged = True
            break
        rq_prev = rq
    residual = float(np.max(np.abs(A @ x - rq * x)))
    if not converged:
        log.warning("power iteration did not converge: residual %.3e", residual)
    return SpectralResult(rq, x, it, converged, residual)


def lower_bound_witness(Q, phi: np.ndarray, c0: float) -> bool:
    """True iff (Q phi) >= c0 phi on every cell, certifying r(Q) >= c0."""
    A = Q.matrix if isinstance(Q, QMatrix) else np.asarray(Q, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0):
        raise ValueError("test function must be nonnegative")
    return bool(np.all(A @ phi >= c0 * phi))


def best_witness_constant(Q, phi: np.ndarray) -> float:
    """Largest c0 passing :func:`lower_bound_witness` for this phi."""
    A = Q.matrix if isinstance(Q, QMatrix) else np.asarray(Q, dtype=float)
    phi = np.asarray(phi, dtype=float)
    support = phi > 0
    return float(np.min((A @ phi)[support] / phi[support]))


# ---------------------------------------------------------------------------
# L = L_0 + V on the grid


def convolution_matrix(a: RadialProfile, grid: GridSpec) -> np.ndarray:
    """J_ij = integral of a(x_i - y) over cell j."""
    if (a.p, a.n) != (grid.p, grid.n):
        raise GridMismatchError("profile and grid disagree on (p, n)")
    D = grid.distance_exponents()
    exps = np.unique(D)
    lookup = {int(e): a.value(int(e)) for e in exps
              if e != BELOW_RESOLUTION_EXP}
    J = np.vectorize(lambda e: lookup.get(int(e), 0.0), otypes=[float])(D)
    J *= float(grid.cell_volume)
    np.fill_diagonal(J, a.ball_mass(-grid.K))
    return J


def apply_L(a: RadialProfile, V: Potential, psi: np.ndarray,
            grid: GridSpec | None = None, exterior_term: float = 0.0,
            J: np.ndarray | None = None) -> np.ndarray:
    """(L_0 + V) psi on the cells of B_M.

    ``psi`` is cell-constant on B_M.  Outside B_M it is zero unless
    ``exterior_term`` supplies ``int_{||y|| > p^M} a(x - y) psi(y) dy``, which
    is the same for every ``x`` in B_M.
    """
    grid = V.grid if grid is None else grid
    if grid != V.grid:
        raise GridMismatchError("potential lives on a different grid")
    psi = np.asarray(psi, dtype=float)
    if psi.shape != (grid.cell_count,):
        raise GridMismatchError("psi does not match the grid")
    if J is None:
        J = convolution_matrix(a, grid)
    return J @ psi + exterior_term - psi + V.values * psi


def quadratic_form(a: RadialProfile, V: Potential, N: int,
                   grid: GridSpec | None = None) -> tuple[float, float]:
    """((L_0 f_N, f_N), (V f_N, f_N)) for f_N the indicator of B_N."""
    grid = V.grid if grid is None else grid
    if N > grid.M:
        raise ValueError(f"B_{N} exceeds the domain B_{grid.M}")
    l0 = -(float(a.p) ** (N * a.n)) * a.mass_above(N)
    mask = grid.ball_mask(N)
    v_term = float(np.sum(V.values[mask])) * float(grid.cell_volume)
    return l0, v_term


def dissipativity_margins(a: RadialProfile, grid: GridSpec, trials: int = 100,
                          lambdas: Sequence[float] = (0.1, 1.0, 10.0),
                          seed: int = 0) -> np.ndarray:
    """||lam f - L_0 f||_inf - lam ||f||_inf for random cell functions."""
    rng = np.random.default_rng(seed)
    J = convolution_matrix(a, grid)
    L0 = J - np.eye(grid.cell_count)
    out = []
    for _ in range(trials):
        f = rng.standard_normal(grid.cell_count)
        Lf = L0 @ f
        sup = np.max(np.abs(f))
        for lam in lambdas:
            out.append(np.max(np.abs(lam * f - Lf)) - lam * sup)
    return np.asarray(out)


def dissipativity_check(a: RadialProfile, grid: GridSpec, trials: int = 100,
                        lambdas: Sequence[float] = (0.1, 1.0, 10.0),
                        seed: int = 0, allowance: float = 1e-9) -> bool:
    margins = dissipativity_margins(a, grid, trials, lambdas, seed)
    return bool(np.all(margins >= -allowance))


# ---------------------------------------------------------------------------
# Radial reduction


@dataclass(frozen=True)
class RadialQMatrix:
    """Q_lambda restricted to radial functions, indexed by shells.

    Shell ``-K`` stands for the central ball B_{-K}.
    """

    lam: float
    shells: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)


def _shell_operator(ball_integral, shell_value, K: int, M: int, p: int,
                    n: int) -> np.ndarray:
    """S[m, m'] = integral over shell m' of k(x - y) dy for ||x|| = p^m."""
    pn = float(p) ** n
    shells = range(-K, M + 1)

    def conv_ball(m: int, r: int) -> float:
        # integral over B_r of k(x - y) dy for x on shell m
        if m <= r:
            return ball_integral(r)
        return pn ** r * shell_value(m)

    S = np.empty((M + K + 1, M + K + 1))
    for a, m in enumerate(shells):
        for b, mp in enumerate(shells):
            if mp == -K:
                S[a, b] = conv_ball(m, -K)
            else:
                S[a, b] = conv_ball(m, mp) - conv_ball(m, mp - 1)
    return S


def radial_q_matrix(kernel: KernelTable, V, M: int | None = None
                    ) -> RadialQMatrix:
    if isinstance(V, Potential):
        vr = V.radial_values()
        M = V.grid.M
    else:
        if M is None:
            raise ValueError("M is required for a shell-indexed potential")
        vr = {int(k): float(v) for k, v in V.items()}
        if any(k < -kernel.K or k > M for k in vr):
            raise ValueError("potential shell outside [-K, M]")
    if kernel.M_ext < M:
        raise GridMismatchError("kernel table does not reach the domain radius")
    S = _shell_operator(kernel.ball_integral, kernel.value, kernel.K, M,
                        kernel.p, kernel.n)
    shells = tuple(range(-kernel.K, M + 1))
    v = np.array([vr.get(m, 0.0) for m in shells])
    if np.any(v < 0) or np.any(v > 1):
        raise ValueError("potential values must lie in [0, 1]")
    T = (v[None, :] / (kernel.lam + 1.0 - v[:, None])) * S
    return RadialQMatrix(kernel.lam, shells, T)


def radial_convolution_matrix(a: RadialProfile, K: int, M: int) -> np.ndarray:
    return _shell_operator(a.ball_mass, a.value, K, M, a.p, a.n)


# ---------------------------------------------------------------------------
# Ground state search


@dataclass
class GroundState:
    lambda_star: float
    psi: np.ndarray = field(repr=False)
    spectral_radius_at_solution: float
    eigen_residual: float
    q_residual: float
    r_curve: list[tuple[float, float]]
    shell_maxima: dict[int, float]
    exterior_shells: dict[int, float]
    method: str = "full"
    flags: list[str] = field(default_factory=list)


@dataclass
class NoGroundStateDetected:
    lambda_floor: float
    r_at_floor: float
    r_curve: list[tuple[float, float]]
    flags: list[str] = field(default_factory=list)


class _RadiusCurve:
    """r(lambda) with memoized samples."""

    def __init__(self, a_hat: DualProfile, V: Potential, tol: SolverTolerances,
                 method: str):
        self.a_hat, self.V, self.tol, self.method = a_hat, V, tol, method
        self.samples: dict[float, SpectralResult] = {}
        self.flags: list[str] = []

    def operator(self, lam: float, M_ext: int | None = None) -> np.ndarray:
        grid = self.V.grid
        kern = green_kernel(self.a_hat, lam, grid, M_ext,
                            rel_tol=self.tol.kernel_rel_tol)
        if self.method == "radial":
            return radial_q_matrix(kern, self.V).matrix
        return q_matrix(kern, self.V).matrix

    def __call__(self, lam: float) -> float:
        if lam not in self.samples:
            res = spectral_radius(self.operator(lam), self.tol.power_tol,
                                  self.tol.power_max_iter)
            if not res.converged:
                self.flags.append(f"power iteration unconverged at "
                                  f"lambda={lam:.6g}")
            self.samples[lam] = res
        return self.samples[lam].r

    def curve(self) -> list[tuple[float, float]]:
        return sorted((lam, res.r) for lam, res in self.samples.items())


def _radial_index(grid: GridSpec) -> np.ndarray:
    return grid.shell_index() + grid.K


def find_ground_state(a: RadialProfile, V: Potential,
                      grid: GridSpec | None = None,
                      tolerances: SolverTolerances | None = None,
                      method: str = "full"):
    """Solve r(Q_lambda) = 1 by bracketing and bisection in lambda.

    Returns a :class:`GroundState`, or :class:`NoGroundStateDetected` when
    r(Q_lambda) <= 1 already at the lambda floor.
    """
    tol = tolerances or SolverTolerances()
    grid = V.grid if grid is None else grid
    if grid != V.grid:
        raise GridMismatchError("potential lives on a different grid")
    if not is_normalized(a):
        raise ValueError("jump density must be normalized")
    if a.is_degenerate:
        raise ValueError("jump density has compact support")
    if V.is_zero:
        raise ValueError("potential is identically zero")
    if method not in ("full", "radial"):
        raise ValueError(f"unknown method {method!r}")

    a_hat = fourier_radial(a)
    r = _RadiusCurve(a_hat, V, tol, method)

    hi = 1.0
    while r(hi) >= 1.0:
        hi *= 2.0
        if hi > 1e12:
            raise RuntimeError("spectral radius does not drop below 1")
    lo = hi
    while r(lo) <= 1.0:
        if lo <= tol.lambda_floor:
            return NoGroundStateDetected(tol.lambda_floor, r(lo), r.curve(),
                                         r.flags)
        hi = lo
        lo = max(lo / 10.0, tol.lambda_floor)

    lam = lo
    for _ in range(400):
        lam = math.sqrt(lo * hi) if hi > 2 * lo else 0.5 * (lo + hi)
        val = r(lam)
        if abs(val - 1.0) <= tol.r_tol:
            break
        if val > 1.0:
            lo = lam
        else:
            hi = lam
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            lam = lo if abs(r(lo) - 1) < abs(r(hi) - 1) else hi
            r.flags.append("bisection stalled at machine resolution")
            break

    curve = r.curve()
    rs = [v for _, v in curve]
    if any(b >= a_ for a_, b in zip(rs, rs[1:])):
        r.flags.append("non-monotone r(lambda) samples")

    res = r.samples[lam]
    psi = res.vector / np.max(res.vector)
    return _finish(a, V, grid, lam, psi, res.r, curve, r.flags, method, tol)


def _finish(a, V, grid, lam, psi, r_at, curve, flags, method, tol):
    M_ext = grid.M + tol.exterior_shells
    a_hat = fourier_radial(a)
    kern = green_kernel(a_hat, lam, grid, M_ext, rel_tol=tol.kernel_rel_tol)
    pn = float(grid.p) ** grid.n

    if method == "radial":
        Q = radial_q_matrix(kern, V).matrix
        vr = V.radial_values()
        shells = range(-grid.K, grid.M + 1)
        vol = {m: (pn ** m * (1 - 1 / pn) if m > -grid.K else pn ** m)
               for m in shells}
        phi_mass = sum(vol[m] * vr[m] * psi[i] for i, m in enumerate(shells))
        Vvec = np.array([vr[m] for m in shells])
    else:
        Q = q_matrix(kern, V).matrix
        phi_mass = float(grid.cell_volume) * float(V.values @ psi)
        Vvec = V.values

    # psi off B_M from psi = Q psi: V vanishes there and ||x - y|| = ||x||.
    ext = {j: kern.value(j) * phi_mass / (lam + 1.0)
           for j in range(grid.M + 1, M_ext + 1)}
    exterior = math.fsum(a.sphere_volume(j) * a.value(j) * ext[j]
                         for j in ext)
    exterior_bound = (kern.sup_bound * phi_mass / (lam + 1.0)
                      * a.mass_above(M_ext))
    if exterior_bound > 1e-14:
        flags.append(f"exterior truncation bound {exterior_bound:.2e}")

    if method == "radial":
        Jr = radial_convolution_matrix(a, grid.K, grid.M)
        Lpsi = Jr @ psi + exterior - psi + Vvec * psi
        shell_max = {m: float(psi[i])
                     for i, m in enumerate(range(-grid.K, grid.M + 1))}
    else:
        Lpsi = apply_L(a, V, psi, grid, exterior_term=exterior)
        idx = grid.shell_index()
        shell_max = {m: float(np.max(psi[idx == m]))
                     for m in range(-grid.K, grid.M + 1)}
    eigen_residual = float(np.max(np.abs(Lpsi - lam * psi)))
    q_residual = float(np.max(np.abs(Q @ psi - psi)))
    return GroundState(
        lambda_star=lam, psi=psi, spectral_radius_at_solution=r_at,
        eigen_residual=eigen_residual, q_residual=q_residual, r_curve=curve,
        shell_maxima=shell_max,
        exterior_shells={j: ext[j] for j in range(grid.M + 1, grid.M + 4)},
        method=method, flags=flags)
