"""Monte Carlo simulation of the random walk with radial step density ``a``.

Steps are drawn exactly from ``a``: a shell ``j`` is chosen with probability
``(1 - p^-n) p^(jn) A_j`` (head and tail families by geometric sampling), then
a point is drawn uniformly on the sphere ``||x|| = p^j``.  Points are stored
as truncated p-adic residues (see :mod:`padic_ground.padic_core`); the batch
simulator keeps residues in int64 arrays, so ``p^(k_low + k_high)`` must fit
in 62 bits.

Reproducibility: trials are split into blocks of ``BLOCK`` consecutive
trials; block ``b`` draws from ``PCG64(SeedSequence([seed, b]))``.  Results
therefore depend only on ``(seed, trial index)`` and the config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .padic_core import BELOW_RESOLUTION_EXP, PadicApprox
from .radial_fourier import RadialProfile, is_normalized

BLOCK = 4096
MAX_BITS = 62
GUARD_DIGITS = 8


def _shell_table(a: RadialProfile):
    """Region masses: head, one per window shell, tail."""
    pn = float(a.p) ** a.n
    head = a.values[0] * pn ** (a.j_min - 1)
    window = [a.sphere_volume(j) * a.value(j)
              for j in range(a.j_min, a.j_max + 1)]
    tail = a._tail_mass(a.j_max + 1, math.inf)
    return np.array([head, *window, tail])


def _rng_for_block(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(
        [seed, block])))


def sample_shells(a: RadialProfile, rng: np.random.Generator,
                  size: int) -> np.ndarray:
    """Shell exponents j with P(j) = (1 - p^-n) p^(jn) A_j."""
    masses = _shell_table(a)
    cdf = np.cumsum(masses)
    cdf /= cdf[-1]
    u = rng.random(size)
    region = np.minimum(np.searchsorted(cdf, u, side="right"), len(masses) - 1)
    j = np.empty(size, dtype=np.int64)
    head = region == 0
    tail = region == len(masses) - 1
    win = ~head & ~tail
    j[win] = a.j_min + region[win] - 1
    if head.any():
        q = 1.0 - float(a.p) ** -a.n
        j[head] = a.j_min - rng.geometric(q, head.sum())
    if tail.any():
        q = -math.expm1(-a.tail.alpha * math.log(a.p))
        j[tail] = a.j_max + rng.geometric(q, tail.sum())
    return j


def sample_step(a: RadialProfile, rng: np.random.Generator,
                k_low: int = GUARD_DIGITS, k_high: int = 40,
                max_tries: int = 10_000) -> tuple[PadicApprox, ...]:
    """One draw from ``a`` as an n-tuple of :class:`PadicApprox`.

    Shells above ``k_high`` are redrawn.  Shells at or below ``-k_low`` give
    the zero residue (the point is below resolution).
    """
    p, n = a.p, a.n
    for _ in range(max_tries):
        j = int(sample_shells(a, rng, 1)[0])
        if j <= k_high:
            break
    else:
        raise RuntimeError("could not draw a shell under the ceiling")
    e = j + k_low
    if e <= 0:
        return tuple(PadicApprox.zero(p, k_low, k_high) for _ in range(n))
    while True:
        coords = []
        for _ in range(n):
            digits = rng.integers(0, p, size=e)
            coords.append(sum(int(d) * p ** i for i, d in enumerate(digits)))
        if any(c % p for c in coords):
            break
    shift = p ** (k_high - j)
    return tuple(PadicApprox(p, k_low, k_high, c * shift) for c in coords)


@dataclass(frozen=True)
class WalkConfig:
    a: RadialProfile
    steps: int
    trials: int
    N: int = 0
    seed: int = 0
    k_low: int | None = None
    k_high: int | None = None
    record_paths: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not is_normalized(self.a, 1e-12):
            raise ValueError("step density must have total mass 1")
        if self.a.tail is not None and self.a.tail.c == 0:
            object.__setattr__(self, "a", RadialProfile(
                self.a.p, self.a.n, self.a.j_min, self.a.j_max,
                self.a.values, None))
        k_low = (max(-self.N, 0) + GUARD_DIGITS if self.k_low is None
                 else self.k_low)
        if k_low < -self.N:
            raise ValueError("precision floor cannot resolve the target ball")
        budget = int(MAX_BITS / math.log2(self.a.p))
        k_high = budget - k_low if self.k_high is None else self.k_high
        if k_high < self.N:
            raise ValueError("norm ceiling lies below the target ball")
        if (k_low + k_high) * math.log2(self.a.p) > MAX_BITS:
            raise ValueError(
                f"p^(k_low + k_high) exceeds {MAX_BITS} bits; lower k_high")
        object.__setattr__(self, "k_low", k_low)
        object.__setattr__(self, "k_high", k_high)


@dataclass
class WalkStats:
    config: WalkConfig
    hits_per_step: np.ndarray
    visits: np.ndarray
    resampled: int
    fold_back_probability: float
    indicators: np.ndarray | None = field(default=None, repr=False)
    norm_exponents: np.ndarray | None = field(default=None, repr=False)
    step_exponents: np.ndarray | None = field(default=None, repr=False)

    def return_probability(self, m: int) -> tuple[float, float]:
        """Estimate and standard error of P(S_m in B_N)."""
        T = self.config.trials
        est = self.hits_per_step[m - 1] / T
        return float(est), float(math.sqrt(est * (1 - est) / T))


def _valuation_exponents(res: np.ndarray, p: int, k_high: int) -> np.ndarray:
    """Max-norm exponent over the last axis; sentinel when all zero."""
    x = res.copy()
    v = np.zeros(x.shape, dtype=np.int64)
    zero = x == 0
    x[zero] = 1
    while True:
        div = x % p == 0
        if not div.any():
            break
        v[div] += 1
        x[div] //= p
    e = np.where(zero, BELOW_RESOLUTION_EXP, k_high - v)
    return e.max(axis=-1)


def _draw_points(a: RadialProfile, rng: np.random.Generator, size: int,
                 k_low: int, k_high: int):
    """Residue arrays (size, n), sampled shells, and redraw count."""
    p, n = a.p, a.n
    j = sample_shells(a, rng, size)
    redrawn = 0
    over = j > k_high
    while over.any():
        redrawn += int(over.sum())
        j[over] = sample_shells(a, rng, int(over.sum()))
        over = j > k_high
    e = j + k_low
    live = e > 0
    res = np.zeros((size, n), dtype=np.int64)
    if live.any():
        el = e[live]
        shift = np.power(np.int64(p), (k_high - j[live]).astype(np.int64))
        if n == 1:
            lead = rng.integers(1, p, size=el.size, dtype=np.int64)
            rest = rng.integers(0, np.power(np.int64(p), el - 1),
                                dtype=np.int64)
            res[live, 0] = (lead + p * rest) * shift
        else:
            high = np.power(np.int64(p), el)
            coords = rng.integers(0, high[:, None], size=(el.size, n),
                                  dtype=np.int64)
            bad = np.all(coords % p == 0, axis=1)
            while bad.any():
                coords[bad] = rng.integers(0, high[bad][:, None],
                                           size=(int(bad.sum()), n),
                                           dtype=np.int64)
                bad = np.all(coords % p == 0, axis=1)
            res[live] = coords * shift[:, None]
    return res, j, redrawn


def simulate_walk(config: WalkConfig) -> WalkStats:
    a = config.a
    p = a.p
    k_low, k_high = config.k_low, config.k_high
    mod = np.int64(p) ** np.int64(k_low + k_high)
    ball_step = np.int64(p) ** np.int64(k_high - config.N)
    T, steps = config.trials, config.steps

    hits = np.zeros(steps, dtype=np.int64)
    visits = np.zeros(T, dtype=np.int64)
    record = config.record_paths
    if record:
        indicators = np.zeros((T, steps), dtype=bool)
        norms = np.zeros((T, steps), dtype=np.int64)
        shells = np.zeros((T, steps), dtype=np.int64)
    redrawn = 0
    for b, start in enumerate(range(0, T, BLOCK)):
        stop = min(start + BLOCK, T)
        rng = _rng_for_block(config.seed, b)
        S = np.zeros((stop - start, a.n), dtype=np.int64)
        for m in range(steps):
            step, j, r = _draw_points(a, rng, stop - start, k_low, k_high)
            redrawn += r
            S = (S + step) % mod
            inside = np.all(S % ball_step == 0, axis=1)
            hits[m] += int(inside.sum())
            visits[start:stop] += inside
            if record:
                indicators[start:stop, m] = inside
                norms[start:stop, m] = _valuation_exponents(S, p, k_high)
                shells[start:stop, m] = j
    return WalkStats(
        config=config, hits_per_step=hits, visits=visits, resampled=redrawn,
        fold_back_probability=a.mass_above(k_high),
        indicators=indicators if record else None,
        norm_exponents=norms if record else None,
        step_exponents=shells if record else None)


@dataclass(frozen=True)
class RecurrenceEstimate:
    mean: float
    standard_error: float
    partial_means: np.ndarray = field(repr=False)


def recurrence_estimate(config: WalkConfig,
                        stats: WalkStats | None = None) -> RecurrenceEstimate:
    """Monte Carlo estimate of sum_{m <= steps} P(S_m in B_N)."""
    stats = simulate_walk(config) if stats is None else stats
    T = config.trials
    mean = float(stats.visits.mean())
    se = float(stats.visits.std(ddof=1) / math.sqrt(T)) if T > 1 else math.inf
    return RecurrenceEstimate(mean, se, np.cumsum(stats.hits_per_step) / T)
