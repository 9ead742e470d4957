from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from padic_ground.padic_core import (BelowResolution, DomainError, GridSpec,
                                     PadicApprox, ParameterMismatchError,
                                     character_eval, padic_add, padic_norm,
                                     point_add, point_norm_exponent,
                                     valuation)


def enc(q, p=2, k_low=8, k_high=4):
    return PadicApprox.from_rational(q, p, k_low, k_high)


def test_norm_of_minus_one_is_one():
    x = enc(-1, p=5, k_low=6, k_high=0)
    assert x.residue == 5 ** 6 - 1  # all digits p - 1
    assert padic_norm(x) == 1


def test_norm_of_twelve():
    assert padic_norm(enc(12, p=2, k_low=8, k_high=0)) == Fraction(1, 4)


def test_norm_of_zero_is_marker():
    out = padic_norm(PadicApprox.zero(3, 5, 2))
    assert isinstance(out, BelowResolution)
    assert out.bound == Fraction(1, 3 ** 5)


def test_norm_of_negative_power():
    assert padic_norm(enc(Fraction(3, 8))) == 8


def test_addition_examples():
    x = enc(Fraction(5, 4))
    assert padic_add(x, PadicApprox.zero(2, 8, 4)) == x
    assert (x + (-x)).residue == 0
    half = PadicApprox.from_rational(Fraction(1, 2), 2, 8, 1)
    one = half + half
    assert one == PadicApprox.from_rational(1, 2, 8, 1)
    assert padic_norm(one) == 1


def test_mismatched_parameters():
    with pytest.raises(ParameterMismatchError):
        enc(1) + enc(1, k_high=5)


def test_from_rational_rejects_large_norm():
    with pytest.raises(ValueError):
        PadicApprox.from_rational(Fraction(1, 32), 2, 8, 4)


def test_character_examples():
    assert character_eval(enc(7)) == 1
    assert character_eval(enc(Fraction(1, 2))) == pytest.approx(-1)
    assert character_eval(enc(Fraction(3, 4))) == pytest.approx(-1j)
    # -1/2 has fractional part 1/2 as well
    assert character_eval(enc(Fraction(-1, 2))) == pytest.approx(-1)


@given(st.integers(-10**6, 10**6), st.integers(0, 6),
       st.integers(-10**6, 10**6), st.integers(0, 6))
def test_character_is_multiplicative(a, e, b, f):
    x, y = enc(Fraction(a, 2 ** e), k_high=6), enc(Fraction(b, 2 ** f), k_high=6)
    assert abs(character_eval(x + y) - character_eval(x) * character_eval(y)) \
        < 1e-12


@given(st.integers(-3**9, 3**9), st.integers(0, 3))
def test_rational_round_trip(a, e):
    p = 3
    q = Fraction(a, p ** e)
    x = PadicApprox.from_rational(q, p, 12, 3)
    # the canonical representative agrees with q up to the precision floor
    diff = x.to_fraction() - q
    assert diff == 0 or valuation(diff.numerator, p) - \
        (valuation(diff.denominator, p) or 0) >= 12


def test_ultrametric_random_triples():
    rng = np.random.default_rng(5)
    p, k_low, k_high = 3, 6, 4
    mod = p ** (k_low + k_high)
    for _ in range(10_000):
        x = PadicApprox(p, k_low, k_high, int(rng.integers(mod)))
        y = PadicApprox(p, k_low, k_high, int(rng.integers(mod)))
        ex, ey, es = x.norm_exponent(), y.norm_exponent(), (x + y).norm_exponent()
        lo = -k_low
        ex, ey = (lo if ex is None else ex), (lo if ey is None else ey)
        es = lo if es is None else es
        assert es <= max(ex, ey)
        if ex != ey:
            assert es == max(ex, ey)


def test_scale_and_precision():
    x = enc(Fraction(3, 4))
    assert padic_norm(x.scale(2)) == 1
    assert padic_norm(x.scale(-1)) == 8
    y = x.with_precision(10, 5)
    assert y.to_fraction() == Fraction(3, 4)
    with pytest.raises(DomainError):
        x.with_precision(8, 1)


def test_grid_counts():
    g = GridSpec(2, 1, 1, 1)
    assert g.cell_count == 4
    for p, n, M, K in [(2, 1, 3, 3), (3, 2, 1, 1), (5, 1, 0, 2)]:
        g = GridSpec(p, n, M, K)
        assert g.cell_count == p ** (n * (M + K))
        assert g.cell_count * g.cell_volume == g.ball_volume == \
            Fraction(p) ** (n * M)


def test_cell_zero_is_origin():
    g = GridSpec(3, 2, 1, 1)
    assert all(c.residue == 0 for c in g.cell_representative(0))


@pytest.mark.parametrize("n", [1, 2])
def test_cell_round_trip(n):
    g = GridSpec(3, n, 1, 1)
    for i in range(g.cell_count):
        assert g.cell_index(g.cell_representative(i)) == i


def test_cell_index_same_cell_iff_close():
    g = GridSpec(2, 1, 2, 1)
    rng = np.random.default_rng(0)
    for _ in range(500):
        a, b = (int(v) for v in rng.integers(0, 2 ** 6, 2))
        x, y = PadicApprox(2, 4, 2, a), PadicApprox(2, 4, 2, b)
        d = (x - y).norm_exponent()
        close = d is None or d <= -g.K
        assert (g.cell_index((x,)) == g.cell_index((y,))) == close


def test_cell_index_outside_ball():
    g = GridSpec(2, 1, 1, 1)
    with pytest.raises(DomainError):
        g.cell_index((PadicApprox.from_rational(Fraction(1, 4), 2, 1, 2),))


def test_cell_distance_examples():
    g = GridSpec(2, 1, 1, 1)
    assert isinstance(g.cell_distance(2, 2), BelowResolution)
    # representatives 0 and 1/2 are cells 0 and 1 at M = 1
    assert g.cell_representative(1)[0].to_fraction() == Fraction(1, 2)
    assert g.cell_distance(0, 1) == 2


def test_cell_distance_symmetric_and_exact():
    g = GridSpec(3, 1, 1, 1)
    D = g.distance_exponents()
    assert np.array_equal(D, D.T)
    for i in range(g.cell_count):
        for j in range(g.cell_count):
            if i == j:
                continue
            assert g.cell_distance(i, j) == g.cell_distance(j, i) > \
                Fraction(1, 3)
            # every pair of points in the two cells has the same distance
            xi, xj = g.cell_representative(i)[0], g.cell_representative(j)[0]
            for s in range(3):
                shift = PadicApprox(3, 2, 1, s * 9)  # 3s, inside B_{-1}
                fine = (xi.with_precision(2, 1) + shift
                        - xj.with_precision(2, 1))
                assert Fraction(3) ** fine.norm_exponent() == \
                    g.cell_distance(i, j)


def test_vectorized_distances_match_scalar():
    g = GridSpec(2, 2, 1, 1)
    D = g.distance_exponents()
    for i in range(g.cell_count):
        for j in range(g.cell_count):
            assert D[i, j] == g.distance_exponent(i, j)


def test_point_helpers():
    x = (enc(Fraction(1, 2)), enc(3))
    y = (enc(Fraction(1, 2)), enc(1))
    assert point_norm_exponent(x) == 1
    assert point_norm_exponent(point_add(x, y)) == 0
