"""Truncated p-adic arithmetic and the finite coset grid of a p-adic ball.

A :class:`PadicApprox` stores the coset ``p**(-k_high) * residue + B_{-k_low}``
of the ball ``B_{k_high}`` in Q_p: the digits at exponents ``-k_high`` up to
(excluding) ``k_low``.  Addition is modular addition of residues.  Carries in
Q_p run toward higher exponents (smaller norms), so dropping digits at or
above ``k_low`` never disturbs the retained digits.

A :class:`GridSpec` describes the partition of ``B_M`` in Q_p^n into cosets of
``B_{-K}``.  Cell ids are mixed-radix integers whose coordinates are the
residues of the canonical cell representatives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

# Exponent used in integer norm tables for "below grid resolution".
BELOW_RESOLUTION_EXP = -(10**9)


class ParameterMismatchError(ValueError):
    """Operands do not share the same (p, k_low, k_high)."""


class DomainError(ValueError):
    """A point lies outside the domain ball of a grid."""


@dataclass(frozen=True)
class BelowResolution:
    """Norm marker: the true norm is at most ``bound`` (possibly zero)."""

    bound: Fraction

    def __float__(self) -> float:
        return float(self.bound)


def valuation(m: int, p: int) -> int | None:
    """p-adic valuation of a nonzero integer; ``None`` for zero."""
    if m == 0:
        return None
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicApprox:
    p: int
    k_low: int
    k_high: int
    residue: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.k_low + self.k_high < 1:
            raise ValueError("k_low + k_high must be >= 1")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.modulus})")

    @property
    def modulus(self) -> int:
        return self.p ** (self.k_low + self.k_high)

    @classmethod
    def zero(cls, p: int, k_low: int, k_high: int) -> PadicApprox:
        return cls(p, k_low, k_high, 0)

    @classmethod
    def from_rational(cls, value, p: int, k_low: int,
                      k_high: int) -> PadicApprox:
        """Encode a rational number (int, Fraction or "a/b" string).

        Raises ValueError when the norm of ``value`` exceeds ``p**k_high``.
        """
        q = Fraction(value)
        mod = p ** (k_low + k_high)
        num, den = q.numerator, q.denominator
        e = 0
        while den % p == 0:
            den //= p
            e += 1
        if e > k_high:
            raise ValueError(
                f"|{q}|_{p} = {p}^{e} exceeds the ceiling {p}^{k_high}")
        scaled = num * p ** (k_high - e)
        return cls(p, k_low, k_high, scaled * pow(den, -1, mod) % mod)

    def _check_compatible(self, other: PadicApprox) -> None:
        if (self.p, self.k_low, self.k_high) != (other.p, other.k_low,
                                                 other.k_high):
            raise ParameterMismatchError(
                f"operands have (p, k_low, k_high) = "
                f"{(self.p, self.k_low, self.k_high)} and "
                f"{(other.p, other.k_low, other.k_high)}")

    def __add__(self, other: PadicApprox) -> PadicApprox:
        self._check_compatible(other)
        return PadicApprox(self.p, self.k_low, self.k_high,
                           (self.residue + other.residue) % self.modulus)

    def __neg__(self) -> PadicApprox:
        return PadicApprox(self.p, self.k_low, self.k_high,
                           (-self.residue) % self.modulus)

    def __sub__(self, other: PadicApprox) -> PadicApprox:
        return self + (-other)

    def valuation(self) -> int | None:
        """Valuation of the represented number, ``None`` below resolution."""
        v = valuation(self.residue, self.p)
        return None if v is None else v - self.k_high

    def norm_exponent(self) -> int | None:
        """``N`` with norm ``p**N``; ``None`` when below resolution."""
        v = valuation(self.residue, self.p)
        return None if v is None else self.k_high - v

    def scale(self, e: int) -> PadicApprox:
        """Multiply by ``p**e``; digits pushed past ``k_low`` are dropped."""
        if e >= 0:
            r = self.residue * self.p ** e % self.modulus
        else:
            step = self.p ** (-e)
            if self.residue % step:
                raise ValueError("scaling pushes the norm above the ceiling")
            r = self.residue // step
        return PadicApprox(self.p, self.k_low, self.k_high, r)

    def with_precision(self, k_low: int, k_high: int) -> PadicApprox:
        """Re-express at another precision.

        Lowering ``k_low`` truncates; raising it pads with zero digits (the
        canonical representative).  Lowering ``k_high`` requires the norm to
        fit under the new ceiling.
        """
        mod = self.p ** (k_low + k_high)
        shift = k_high - self.k_high
        if shift >= 0:
            r = self.residue * self.p ** shift
        else:
            step = self.p ** (-shift)
            if self.residue % step:
                raise DomainError(
                    f"norm exceeds the new ceiling {self.p}^{k_high}")
            r = self.residue // step
        return PadicApprox(self.p, k_low, k_high, r % mod)

    def fractional_part(self) -> Fraction:
        """``{x}_p``: the digits at negative exponents as a rational."""
        if self.k_high <= 0:
            return Fraction(0)
        scale = self.p ** self.k_high
        return Fraction(self.residue % scale, scale)

    def to_fraction(self) -> Fraction:
        """The canonical representative as a rational in [0, p^k_low)."""
        return Fraction(self.residue, self.p ** self.k_high)


def padic_norm(x: PadicApprox) -> Fraction | BelowResolution:
    """|x|_p as an exact power of p, or a below-resolution marker."""
    e = x.norm_exponent()
    if e is None:
        return BelowResolution(Fraction(x.p) ** (-x.k_low))
    return Fraction(x.p) ** e


def padic_add(x: PadicApprox, y: PadicApprox) -> PadicApprox:
    return x + y


def character_eval(x: PadicApprox) -> complex:
    """The additive character exp(2 pi i {x}_p); trivial on Z_p."""
    frac = x.fractional_part()
    if frac == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * math.pi * float(frac))


Point = tuple[PadicApprox, ...]


def point_norm_exponent(x: Sequence[PadicApprox]) -> int | None:
    """Max-norm exponent of a point in Q_p^n (``None`` below resolution)."""
    exps = [c.norm_exponent() for c in x]
    exps = [e for e in exps if e is not None]
    return max(exps) if exps else None


def point_norm(x: Sequence[PadicApprox]) -> Fraction | BelowResolution:
    e = point_norm_exponent(x)
    if e is None:
        return BelowResolution(Fraction(x[0].p) ** (-min(c.k_low for c in x)))
    return Fraction(x[0].p) ** e


def point_add(x: Sequence[PadicApprox], y: Sequence[PadicApprox]) -> Point:
    if len(x) != len(y):
        raise ParameterMismatchError("points have different dimensions")
    return tuple(a + b for a, b in zip(x, y))


def _valuation_table(p: int, size: int, offset: int) -> np.ndarray:
    """``offset - v_p(d)`` for d in [0, size); entry 0 is the sentinel."""
    table = np.full(size, BELOW_RESOLUTION_EXP, dtype=np.int64)
    d = np.arange(size, dtype=np.int64)
    v = np.zeros(size, dtype=np.int64)
    rest = d.copy()
    rest[0] = 1
    while True:
        div = rest % p == 0
        if not div.any():
            break
        v[div] += 1
        rest[div] //= p
    table[1:] = offset - v[1:]
    return table


@dataclass(frozen=True)
class GridSpec:
    """Cosets of ``B_{-K}`` partitioning ``B_M`` in Q_p^n."""

    p: int
    n: int
    M: int
    K: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be >= 2")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.K < 0:
            raise ValueError("K must be >= 0")
        if self.M + self.K < 1:
            raise ValueError("M + K must be >= 1")

    @property
    def side(self) -> int:
        """Cells per coordinate, p^(M+K)."""
        return self.p ** (self.M + self.K)

    @property
    def cell_count(self) -> int:
        return self.side ** self.n

    @property
    def cell_volume(self) -> Fraction:
        return Fraction(self.p) ** (-self.n * self.K)

    @property
    def ball_volume(self) -> Fraction:
        return Fraction(self.p) ** (self.n * self.M)

    def cell_coords(self, cell_id: int) -> tuple[int, ...]:
        if not 0 <= cell_id < self.cell_count:
            raise DomainError(f"cell id {cell_id} out of range")
        coords = []
        for _ in range(self.n):
            cell_id, c = divmod(cell_id, self.side)
            coords.append(c)
        return tuple(coords)

    def cell_representative(self, cell_id: int) -> Point:
        return tuple(PadicApprox(self.p, self.K, self.M, c)
                     for c in self.cell_coords(cell_id))

    def cell_index(self, x: Sequence[PadicApprox]) -> int:
        if len(x) != self.n:
            raise ParameterMismatchError(
                f"point has dimension {len(x)}, grid has {self.n}")
        cell_id = 0
        for c in reversed(x):
            if c.p != self.p:
                raise ParameterMismatchError("prime mismatch")
            if c.k_low < self.K:
                raise ValueError(
                    f"point precision floor {c.k_low} is coarser than the "
                    f"grid resolution {self.K}")
            e = c.norm_exponent()
            if e is not None and e > self.M:
                raise DomainError(
                    f"coordinate of norm {self.p}^{e} lies outside B_{self.M}")
            coord = c.with_precision(self.K, self.M).residue
            cell_id = cell_id * self.side + coord
        return cell_id

    def cell_distance(self, i: int, j: int) -> Fraction | BelowResolution:
        """||rep(i) - rep(j)||, exact on all of cell i x cell j when i != j."""
        e = int(self.distance_exponent(i, j))
        if e == BELOW_RESOLUTION_EXP:
            return BelowResolution(Fraction(self.p) ** (-self.K))
        return Fraction(self.p) ** e

    def distance_exponent(self, i: int, j: int) -> int:
        best = BELOW_RESOLUTION_EXP
        for a, b in zip(self.cell_coords(i), self.cell_coords(j)):
            v = valuation((a - b) % self.side, self.p)
            if v is not None:
                best = max(best, self.M - v)
        return best

    @cached_property
    def _coord_array(self) -> np.ndarray:
        ids = np.arange(self.cell_count, dtype=np.int64)
        out = np.empty((self.n, self.cell_count), dtype=np.int64)
        for t in range(self.n):
            ids, out[t] = np.divmod(ids, self.side)
        return out

    @cached_property
    def _table(self) -> np.ndarray:
        return _valuation_table(self.p, self.side, self.M)

    def distance_exponents(self) -> np.ndarray:
        """Matrix of norm exponents of rep(i) - rep(j).

        The diagonal holds ``BELOW_RESOLUTION_EXP``.
        """
        coords = self._coord_array
        out = np.full((self.cell_count, self.cell_count),
                      BELOW_RESOLUTION_EXP, dtype=np.int64)
        for t in range(self.n):
            c = coords[t]
            diff = (c[:, None] - c[None, :]) % self.side
            np.maximum(out, self._table[diff], out=out)
        return out

    def norm_exponents(self) -> np.ndarray:
        """Norm exponent of every cell representative (origin cell marked)."""
        out = np.full(self.cell_count, BELOW_RESOLUTION_EXP, dtype=np.int64)
        for t in range(self.n):
            np.maximum(out, self._table[self._coord_array[t]], out=out)
        return out

    def ball_mask(self, N: int) -> np.ndarray:
        """Cells contained in B_N (N <= M)."""
        return self.norm_exponents() <= N

    def shell_index(self) -> np.ndarray:
        """Radial index of each cell: the shell exponent, with the origin
        cell (the ball B_{-K}) labelled ``-K``."""
        e = self.norm_exponents()
        return np.where(e == BELOW_RESOLUTION_EXP, -self.K, e)
