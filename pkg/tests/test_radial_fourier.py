from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_fourier_on_grid, brute_shell_character_integral
from padic_ground.radial_fourier import (DegenerateProfileError, PowerTail,
                                         RadialProfile, ball_indicator_profile,
                                         ball_mass, fourier_radial,
                                         inverse_radial_value, is_normalized,
                                         normalize, one_minus_fourier,
                                         power_law_profile,
                                         shell_character_integral, total_mass)


def random_profile(rng, p, n, normalized=True):
    j_min = int(rng.integers(-3, 1))
    j_max = j_min + int(rng.integers(0, 5))
    values = tuple(float(v) for v in rng.uniform(0.05, 1.0, j_max - j_min + 1))
    alpha = float(rng.uniform(0.3, 3.0))
    # attach the power tail at a level comparable to the last window shell
    c = values[-1] * float(p) ** ((j_max + 1) * (n + alpha)) * \
        float(rng.uniform(0.2, 2.0))
    tail = PowerTail(c, alpha)
    f = RadialProfile(p, n, j_min, j_max, values, tail)
    return normalize(f) if normalized else f


@pytest.fixture
def standard():
    return power_law_profile(2, 1, 1.0)


def test_shell_integral_examples():
    assert shell_character_integral(2, 1, 0, 1) == Fraction(1, 2)
    assert shell_character_integral(2, 1, 0, 2) == Fraction(-1, 2)
    assert shell_character_integral(2, 1, 0, 4) == 0
    assert shell_character_integral(3, 2, 1, 0) == Fraction(8, 9) * 9


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("j", range(-3, 4))
def test_shell_integral_matches_character_sums(p, j):
    for k in [None] + list(range(-5, 6)):
        xi = 0 if k is None else Fraction(p) ** k
        brute = brute_shell_character_integral(p, j, k)
        assert abs(brute - float(shell_character_integral(p, 1, j, xi))) \
            < 1e-12


def test_masses_of_examples(standard):
    ind = ball_indicator_profile(2, 1)
    assert total_mass(ind) == pytest.approx(1, abs=1e-15)
    assert standard.values[0] == pytest.approx(2 / 3, abs=1e-15)
    assert standard.tail.c == pytest.approx(2 / 3, abs=1e-15)
    assert total_mass(standard) == pytest.approx(1, abs=1e-15)
    assert ball_mass(standard, 0) == pytest.approx(2 / 3, abs=1e-15)


def test_ball_mass_monotone(standard):
    vals = [ball_mass(standard, N) for N in range(-20, 60)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1.0, abs=1e-15)
    assert vals[0] < 1e-6


def test_normalize_examples(standard):
    again = normalize(standard)
    assert np.allclose(again.values, standard.values, rtol=1e-12)
    f = RadialProfile(2, 1, 0, 0, (4 / 3,), None)
    g = normalize(f)
    assert g.values[0] == pytest.approx(1.0, rel=1e-15)
    assert is_normalized(g, 1e-12)
    with pytest.raises(ValueError):
        normalize(RadialProfile(2, 1, 0, 0, (0.0,), None))


def test_profile_literal_round_trip():
    lit = {"p": 3, "n": 2, "j_min": -1, "j_max": 1,
           "values": ["1/2", 0.25, 0.125], "tail": {"c": "1/3", "alpha": 1.5}}
    f = RadialProfile.from_dict(lit)
    assert f.values[0] == 0.5 and f.tail.c == pytest.approx(1 / 3)
    assert RadialProfile.from_dict(f.to_dict()) == f
    g = RadialProfile.from_dict({**lit, "tail": "zero"})
    assert g.tail is None and g.is_degenerate
    with pytest.raises(KeyError):
        RadialProfile.from_dict({"p": 2})


def test_fourier_of_indicator():
    a_hat = fourier_radial(ball_indicator_profile(2, 1), (-6, 6))
    for N, v, d in a_hat.rows():
        assert v == (1.0 if N >= 0 else 0.0)
        assert d == 1.0 - v


def test_fourier_standard_values(standard):
    a_hat = fourier_radial(standard)
    assert a_hat.at(0) == pytest.approx(0.5, abs=1e-15)
    assert one_minus_fourier(standard, 0) == pytest.approx(0.5, abs=1e-15)
    assert a_hat.at(a_hat.N_max) == pytest.approx(1.0, abs=1e-8)
    assert a_hat.at(a_hat.N_min) == 0.0
    assert a_hat.limit_at_zero_frequency == pytest.approx(1.0, abs=1e-15)
    assert a_hat.tail_exponent_estimate == pytest.approx(1.0, rel=1e-6)


def test_one_minus_fourier_indicator_is_zero():
    assert one_minus_fourier(ball_indicator_profile(2, 1), 0) == 0.0
    assert one_minus_fourier(ball_indicator_profile(2, 1), 5) == 0.0


@pytest.mark.parametrize("seed", range(6))
def test_deficit_consistency_and_bound(seed):
    rng = np.random.default_rng(seed)
    p = [2, 3, 5][seed % 3]
    f = random_profile(rng, p, 1 + seed % 2)
    a_hat = fourier_radial(f)
    for N in range(a_hat.N_min, a_hat.N_max + 1):
        d = a_hat.deficit(N)
        # the exact deficit stays positive even where a~ rounds to 1
        assert 0 < d <= a_hat.deficit_bound(N) * (1 + 1e-12)
        eps = np.finfo(float).eps
        assert -1 <= a_hat.at(N) <= 1 + 2 * eps
        # 1 - a~ inherits the absolute rounding of a~ itself
        assert abs((1 - a_hat.at(N)) - d) <= 1e-12 * d + 4 * eps
        assert one_minus_fourier(f, N) == d


@pytest.mark.parametrize("seed", range(6))
def test_inversion_round_trip(seed):
    rng = np.random.default_rng(100 + seed)
    p = [2, 3, 5][seed % 3]
    f = random_profile(rng, p, 1 + seed % 2)
    a_hat = fourier_radial(f)
    for j in range(f.j_min - 2, f.j_max + 4):
        assert inverse_radial_value(a_hat, j) == \
            pytest.approx(f.value(j), rel=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 2))
def test_inversion_property(seed, p, n):
    f = random_profile(np.random.default_rng(seed), p, n, normalized=False)
    a_hat = fourier_radial(f)
    for j in (f.j_min, f.j_max, f.j_max + 3):
        assert inverse_radial_value(a_hat, j) == \
            pytest.approx(f.value(j), rel=1e-10)


@pytest.mark.parametrize("p", [2, 3])
def test_fourier_matches_brute_force_on_grid(p):
    rng = np.random.default_rng(p)
    vals = tuple(float(v) for v in rng.uniform(0.1, 1.0, 5))
    f = RadialProfile(p, 1, -2, 2, vals, None)
    for N in range(-4, 5):
        brute = brute_fourier_on_grid(f.value, p, 2, 4, -N)
        assert abs(brute - f.fourier_value(N)) <= 1e-10


def test_degenerate_flag(standard):
    assert not standard.is_degenerate and standard.zero_set_empty
    assert ball_indicator_profile(2, 1).is_degenerate


def test_power_tail_validation():
    with pytest.raises(ValueError):
        PowerTail(1.0, 0.0)
    with pytest.raises(ValueError):
        PowerTail(-1.0, 1.0)


def test_fourier_window_validation(standard):
    with pytest.raises(ValueError):
        fourier_radial(standard, (3, 1))
    assert issubclass(DegenerateProfileError, ValueError)
