"""Radial functions on Q_p^n and their exact Fourier transforms.

A radial function is stored by its shell values ``A_j`` (the value on the
sphere ``||x|| = p^j``) on an explicit window ``[j_min, j_max]``, extended by
a constant head below ``j_min`` and either nothing or an exact power law above
``j_max``.  Every infinite series over shells is then a geometric sum and is
evaluated in closed form.

Dual shells are indexed by ``N`` with ``||xi|| = p^(-N)``: large ``N`` is low
frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np


class DegenerateProfileError(ValueError):
    """The Fourier transform equals 1 away from the origin."""


@dataclass(frozen=True)
class PowerTail:
    """Shell values ``c * p**(-j*(n+alpha))`` beyond the explicit window."""

    c: float
    alpha: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("tail coefficient c must be >= 0")
        if not self.alpha > 0:
            raise ValueError("tail exponent alpha must be > 0")


def _geom(q: float, a: int, b: int) -> float:
    """sum_{j=a}^{b} q**j for 0 < q < 1 (zero when b < a)."""
    if b < a:
        return 0.0
    lq = math.log(q)
    return q ** a * (-math.expm1((b - a + 1) * lq)) / (-math.expm1(lq))


@dataclass(frozen=True)
class RadialProfile:
    p: int
    n: int
    j_min: int
    j_max: int
    values: tuple[float, ...]
    tail: PowerTail | None = None

    def __post_init__(self):
        if self.j_max < self.j_min:
            raise ValueError("j_max must be >= j_min")
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.j_max - self.j_min + 1:
            raise ValueError(
                f"expected {self.j_max - self.j_min + 1} shell values, "
                f"got {len(vals)}")
        if any(not v >= 0 for v in vals):
            raise ValueError("shell values must be nonnegative")

    # -- construction -------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping) -> RadialProfile:
        """Parse the profile literal: p, n, j_min, j_max, values, tail."""
        missing = [k for k in ("p", "n", "j_min", "j_max", "values")
                   if k not in data]
        if missing:
            raise KeyError(f"profile is missing keys: {', '.join(missing)}")
        tail_spec = data.get("tail", "zero")
        if tail_spec == "zero" or tail_spec is None:
            tail = None
        elif isinstance(tail_spec, Mapping):
            tail = PowerTail(float(Fraction(str(tail_spec["c"]))),
                             float(Fraction(str(tail_spec["alpha"]))))
        else:
            raise ValueError(f"tail must be 'zero' or {{c, alpha}}, "
                             f"got {tail_spec!r}")
        values = tuple(float(Fraction(str(v))) for v in data["values"])
        return cls(int(data["p"]), int(data["n"]), int(data["j_min"]),
                   int(data["j_max"]), values, tail)

    def to_dict(self) -> dict:
        out = {"p": self.p, "n": self.n, "j_min": self.j_min,
               "j_max": self.j_max, "values": list(self.values)}
        out["tail"] = ("zero" if self.tail is None else
                       {"c": self.tail.c, "alpha": self.tail.alpha})
        return out

    # -- shell data ---------------------------------------------------

    def value(self, j: int) -> float:
        if j < self.j_min:
            return self.values[0]
        if j <= self.j_max:
            return self.values[j - self.j_min]
        if self.tail is None:
            return 0.0
        return self.tail.c * float(self.p) ** (-j * (self.n + self.tail.alpha))

    def sphere_volume(self, j: int) -> float:
        return (1.0 - float(self.p) ** -self.n) * float(self.p) ** (j * self.n)

    @property
    def is_degenerate(self) -> bool:
        """Compact support: the transform is 1 on a punctured neighbourhood."""
        return self.tail is None or self.tail.c == 0

    @property
    def zero_set_empty(self) -> bool:
        return not self.is_degenerate and all(v > 0 for v in self.values)

    def scaled(self, factor: float) -> RadialProfile:
        tail = (None if self.tail is None
                else PowerTail(self.tail.c * factor, self.tail.alpha))
        return RadialProfile(self.p, self.n, self.j_min, self.j_max,
                             tuple(v * factor for v in self.values), tail)

    # -- closed-form shell sums ---------------------------------------

    def _window_mass(self, lo: int, hi: int) -> float:
        lo, hi = max(lo, self.j_min), min(hi, self.j_max)
        return math.fsum(self.sphere_volume(j) * self.values[j - self.j_min]
                         for j in range(lo, hi + 1))

    def _tail_mass(self, lo: int, hi: float) -> float:
        """Mass of tail shells lo..hi (hi may be +inf)."""
        if self.tail is None or self.tail.c == 0:
            return 0.0
        lo = max(lo, self.j_max + 1)
        q = float(self.p) ** -self.tail.alpha
        pref = (1.0 - float(self.p) ** -self.n) * self.tail.c
        if hi == math.inf:
            return pref * q ** lo / (-math.expm1(math.log(q)))
        return pref * _geom(q, lo, int(hi))

    def ball_mass(self, N: int) -> float:
        """Integral over the ball ||x|| <= p^N."""
        pn = float(self.p) ** self.n
        if N < self.j_min:
            return self.values[0] * pn ** N
        parts = [self.values[0] * pn ** (self.j_min - 1),
                 self._window_mass(self.j_min, N)]
        if N > self.j_max:
            parts.append(self._tail_mass(self.j_max + 1, N))
        return math.fsum(parts)

    def mass_above(self, N: int) -> float:
        """Integral over ||x|| > p^N, summed without cancellation."""
        pn = float(self.p) ** self.n
        parts = [self._tail_mass(N + 1, math.inf)]
        if N < self.j_max:
            parts.append(self._window_mass(N + 1, self.j_max))
        if N + 1 < self.j_min:
            parts.append(self.values[0] * (pn ** (self.j_min - 1) - pn ** N))
        return math.fsum(parts)

    def weighted_tail(self, N: int) -> float:
        """sum_{j>N} p^(jn) A_j, the upper bound on 1 - a~ at ||xi|| = p^-N."""
        return self.mass_above(N) / (1.0 - float(self.p) ** -self.n)

    def fourier_value(self, N: int) -> float:
        """a~ on the dual sphere ||xi|| = p^(-N)."""
        if N <= self.j_min - 2:
            return 0.0
        return (self.ball_mass(N)
                - float(self.p) ** (N * self.n) * self.value(N + 1))

    def fourier_deficit(self, N: int) -> float:
        """a~(0) - a~ at ||xi|| = p^(-N), from the complementary shell sum."""
        if N <= self.j_min - 2:
            return total_mass(self)
        return (self.mass_above(N)
                + float(self.p) ** (N * self.n) * self.value(N + 1))


def shell_character_integral(p: int, n: int, j: int, xi_norm) -> Fraction:
    """Integral of chi(xi . x) over the sphere ||x|| = p^j, exactly.

    ``xi_norm`` is ``||xi||``: zero or an integer power of ``p``.
    """
    q = Fraction(xi_norm)
    sphere = (1 - Fraction(1, p ** n)) * Fraction(p) ** (j * n)
    if q == 0 or q <= Fraction(p) ** (-j):
        return sphere
    if q == Fraction(p) ** (1 - j):
        return -Fraction(p) ** ((j - 1) * n)
    return Fraction(0)


def total_mass(f: RadialProfile) -> float:
    pn = float(f.p) ** f.n
    return math.fsum([f.values[0] * pn ** (f.j_min - 1),
                      f._window_mass(f.j_min, f.j_max),
                      f._tail_mass(f.j_max + 1, math.inf)])


def ball_mass(f: RadialProfile, N: int) -> float:
    return f.ball_mass(N)


def normalize(f: RadialProfile) -> RadialProfile:
    mass = total_mass(f)
    if not mass > 0:
        raise ValueError("cannot normalize a profile of zero mass")
    return f.scaled(1.0 / mass)


def is_normalized(f: RadialProfile, tol: float = 1e-9) -> bool:
    return abs(total_mass(f) - 1.0) <= tol


def power_law_profile(p: int, n: int, alpha: float) -> RadialProfile:
    """Normalized ``a(x) = C max(1, ||x||)^-(n+alpha)``."""
    f = RadialProfile(p, n, 0, 0, (1.0,), PowerTail(1.0, alpha))
    return normalize(f)


def ball_indicator_profile(p: int, n: int, N: int = 0) -> RadialProfile:
    """Indicator of B_N (mass p^(nN)); tail zero, hence degenerate."""
    return RadialProfile(p, n, N, N, (1.0,), None)


def one_minus_fourier(f: RadialProfile, N: int) -> float:
    """1 - a~ at ||xi|| = p^(-N) for a probability density ``f``."""
    if not is_normalized(f):
        raise ValueError("one_minus_fourier requires a normalized profile")
    return f.fourier_deficit(N)


@dataclass(frozen=True)
class DualProfile:
    """Shell values of a~ on the window ``N_min..N_max`` of dual spheres.

    Values outside the window are evaluated from the primal profile on
    demand through :meth:`at` and :meth:`deficit`.
    """

    profile: RadialProfile
    N_min: int
    N_max: int
    values: np.ndarray = field(repr=False)
    deficits: np.ndarray = field(repr=False)
    limit_at_zero_frequency: float
    tail_exponent_estimate: float | None

    @property
    def p(self) -> int:
        return self.profile.p

    @property
    def n(self) -> int:
        return self.profile.n

    def at(self, N: int) -> float:
        if self.N_min <= N <= self.N_max:
            return float(self.values[N - self.N_min])
        return self.profile.fourier_value(N)

    def deficit(self, N: int) -> float:
        """a~(0) - a~_N, cancellation-safe."""
        if self.N_min <= N <= self.N_max:
            return float(self.deficits[N - self.N_min])
        return self.profile.fourier_deficit(N)

    def deficit_bound(self, N: int) -> float:
        """Upper bound on ``deficit(M)`` for every ``M >= N``."""
        return self.profile.weighted_tail(N)

    def rows(self):
        for N in range(self.N_min, self.N_max + 1):
            yield N, self.at(N), self.deficit(N)


def fit_decay_exponent(p: int, Ns, values) -> float | None:
    """Least-squares rate r with values ~ p^(-r N); ``None`` if not fittable."""
    Ns = np.asarray(Ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(Ns) < 2 or np.any(values <= 0):
        return None
    slope = np.polyfit(Ns * math.log(p), np.log(values), 1)[0]
    return float(-slope)


def default_window(f: RadialProfile) -> tuple[int, int]:
    return f.j_min - 2, max(f.j_max, 0) + 30


def fourier_radial(f: RadialProfile,
                   N_window: tuple[int, int] | None = None) -> DualProfile:
    N_min, N_max = N_window if N_window is not None else default_window(f)
    if N_max < N_min:
        raise ValueError("empty frequency window")
    Ns = range(N_min, N_max + 1)
    vals = np.array([f.fourier_value(N) for N in Ns])
    defs = np.array([f.fourier_deficit(N) for N in Ns])
    last = list(Ns)[-10:]
    exponent = fit_decay_exponent(f.p, last, defs[-len(last):])
    return DualProfile(f, N_min, N_max, vals, defs, total_mass(f), exponent)


def shell_suffix_sums(p: int, n: int, N_start: int, N_need: int,
                      deficit: Callable[[int], float],
                      bound: Callable[[int], float],
                      rel_tol: float = 1e-16,
                      max_terms: int = 20000):
    """Suffix sums of ``(1 - p^-n) p^(-Nn) deficit(N)`` over ``N >= N0``.

    ``bound(N)`` must dominate ``deficit`` on ``[N, inf)``.  Terms are added
    until the certified remainder drops below ``rel_tol`` times the smallest
    requested suffix (the one starting at ``N_need``).

    Returns ``(suffix, remainder)`` where ``suffix[N]`` covers every ``N`` in
    ``[N_start, N_need]`` and ``remainder`` bounds the dropped part.
    """
    c = 1.0 - float(p) ** -n
    pn = float(p) ** n
    terms = []
    N = N_start
    remainder = math.inf
    while True:
        terms.append(c * pn ** (-N) * deficit(N))
        if N >= N_need:
            remainder = bound(N + 1) * pn ** (-(N + 1))
            tail = math.fsum(terms[N_need - N_start:])
            if remainder <= rel_tol * tail or remainder == 0.0:
                break
            if len(terms) >= max_terms:
                break
        N += 1
    # accumulate from the small end
    acc = []
    running = 0.0
    comp = 0.0
    for t in reversed(terms):
        # Kahan summation keeps every suffix accurate
        y = t - comp
        s = running + y
        comp = (s - running) - y
        running = s
        acc.append(running)
    acc.reverse()
    suffix = {N_start + i: acc[i] for i in range(N_need - N_start + 1)}
    return suffix, remainder


def inverse_radial_value(dual: DualProfile, m: int,
                         rel_tol: float = 1e-16) -> float:
    """Primal shell value at ||x|| = p^m recovered from the dual profile.

    ``A_m = sum_{N>=m} s_N a~_N - p^(-mn) a~_(m-1)`` with
    ``s_N = (1 - p^-n) p^(-Nn)``.  On the low-frequency side the same
    identity is used in deficit form, ``p^(-mn) D_(m-1) - sum s_N D_N``;
    whichever form subtracts the smaller term is taken.
    """
    p, n = dual.p, dual.n
    pn = float(p) ** n
    # Where a~ vanishes the deficit is the constant a~(0), and the leading
    # term telescopes against the first shells: p^(-mn) - sum s_N = p^(-rn).
    while dual.at(m - 1) == 0.0 and dual.at(m) == 0.0:
        m += 1
    if abs(dual.at(m - 1)) >= dual.deficit(m - 1):
        suffix, _ = shell_suffix_sums(p, n, m, m, dual.deficit,
                                      dual.deficit_bound, rel_tol)
        return pn ** (-m) * dual.deficit(m - 1) - suffix[m]
    # high-frequency side: sum a~ directly up to the crossover T, then
    # switch to the deficit form for the rest of the series
    T = m
    while abs(dual.at(T)) < dual.deficit(T):
        T += 1
    s = 1.0 - 1.0 / pn
    head = math.fsum(s * pn ** (-N) * dual.at(N) for N in range(m, T))
    suffix, _ = shell_suffix_sums(p, n, T, T, dual.deficit,
                                  dual.deficit_bound, rel_tol)
    tail = dual.limit_at_zero_frequency * pn ** (-T) - suffix[T]
    return head + tail - pn ** (-m) * dual.at(m - 1)
