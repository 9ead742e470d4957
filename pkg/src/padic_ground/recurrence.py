"""Analytic recurrence tests for the random walk with step density ``a``.

Three views of the same question: the shell series whose divergence forces
recurrence, the Fourier integral of ``1 / (1 - a~)`` over a dual ball, and
the partial sums of return probabilities ``P(S_m in B_N)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .radial_fourier import (DegenerateProfileError, DualProfile,
                             RadialProfile, fit_decay_exponent, fourier_radial,
                             is_normalized)


class Classification(str, enum.Enum):
    RECURRENT = "Recurrent-by-series-criterion"
    TRANSIENT = "TransientIndicated"
    INCONCLUSIVE = "Inconclusive"


def _require_power_tail(a: RadialProfile) -> None:
    if a.is_degenerate:
        raise DegenerateProfileError(
            "compactly supported density: the shell series has zero "
            "denominators and a~ = 1 at nonzero frequencies")


def criterion_terms(a: RadialProfile, l: int, N_max: int) -> np.ndarray:
    """``1 / (p^(Nn) sum_{j>N} p^(jn) A_j)`` for ``N = l..N_max``."""
    _require_power_tail(a)
    if N_max < l:
        raise ValueError("N_max must be >= l")
    pn = float(a.p) ** a.n
    return np.array([1.0 / (pn ** N * a.weighted_tail(N))
                     for N in range(l, N_max + 1)])


def integral_increments(a_hat: DualProfile, l: int, depth: int) -> np.ndarray:
    """Dual-shell contributions to the integral of 1/(1 - a~) over
    ``||xi|| <= p^-l``, for shells ``N = l..l+depth``."""
    p, n = a_hat.p, a_hat.n
    out = []
    for N in range(l, l + depth + 1):
        d = a_hat.deficit(N)
        if d <= 0.0:
            raise DegenerateProfileError(
                f"1 - a~ vanishes on the dual shell ||xi|| = {p}^{-N}: "
                "the Fourier transform must stay below 1 off the origin")
        out.append((1 - float(p) ** -n) * float(p) ** (-N * n) / d)
    return np.array(out)


def integral_partial_sums(a_hat: DualProfile, l: int, depth: int
                          ) -> np.ndarray:
    return np.cumsum(integral_increments(a_hat, l, depth))


def _fitted_ratio(values: np.ndarray, last: int = 10) -> float | None:
    tail = values[-last:]
    if len(tail) < 2 or np.any(tail <= 0):
        return None
    slope = np.polyfit(np.arange(len(tail)), np.log(tail), 1)[0]
    return float(math.exp(slope))


@dataclass
class RecurrenceReport:
    l: int
    criterion_terms: np.ndarray = field(repr=False)
    tail_exponent: float
    fitted_term_exponent: float | None
    integral_increments: np.ndarray = field(repr=False)
    integral_partial_sums: np.ndarray = field(repr=False)
    increment_ratio: float | None
    deficit_exponent: float | None
    classification: Classification
    support_generates_group: bool
    green_series: np.ndarray | None = field(default=None, repr=False)


def classify(a: RadialProfile, l: int = 0, N_max: int = 40,
             depth: int | None = None) -> RecurrenceReport:
    """Classify the walk; the closed-form tail exponent is the certificate.

    The series diverges exactly when ``alpha >= n``; the numeric partial
    sums of the Fourier integral are kept as corroboration.
    """
    _require_power_tail(a)
    depth = N_max - l if depth is None else depth
    terms = criterion_terms(a, l, N_max)
    Ns = np.arange(l, N_max + 1)
    tail_exp = a.tail.alpha - a.n
    last = slice(-min(10, len(terms)), None)
    rate = fit_decay_exponent(a.p, Ns[last], terms[last])
    fitted = None if rate is None else -rate

    a_hat = fourier_radial(a, (l, l + depth))
    inc = integral_increments(a_hat, l, depth)
    ratio = _fitted_ratio(inc)
    deficits = np.array([a_hat.deficit(N) for N in range(l, l + depth + 1)])
    d_exp = fit_decay_exponent(a.p, np.arange(l, l + depth + 1)[-10:],
                               deficits[-10:])

    if tail_exp >= 0 and np.all(terms > 0):
        cls = Classification.RECURRENT
    elif tail_exp < 0 and ratio is not None and ratio < 1.0:
        cls = Classification.TRANSIENT
    else:
        cls = Classification.INCONCLUSIVE
    return RecurrenceReport(
        l=l, criterion_terms=terms, tail_exponent=tail_exp,
        fitted_term_exponent=fitted, integral_increments=inc,
        integral_partial_sums=np.cumsum(inc), increment_ratio=ratio,
        deficit_exponent=d_exp, classification=cls,
        support_generates_group=a.tail.c > 0)


# ---------------------------------------------------------------------------
# Return probabilities


def _power_minus(at: np.ndarray, d: np.ndarray, ms: np.ndarray) -> np.ndarray:
    """1 - at**m for each m (rows) and shell (columns), cancellation-safe."""
    out = np.empty((len(ms), len(at)))
    pos = at > 0
    with np.errstate(divide="ignore"):
        lg = np.log1p(-d[pos])
    out[:, pos] = -np.expm1(ms[:, None] * lg[None, :])
    out[:, ~pos] = 1.0 - at[~pos][None, :] ** ms[:, None]
    return out


def return_probabilities(a_hat: DualProfile, N: int, ms,
                         tol: float = 1e-17) -> np.ndarray:
    """P(S_m in B_N | S_0 = 0) for every m in ``ms``.

    Uses ``P = p^(Nn) * integral over ||xi|| <= p^-N of a~(xi)^m``.  Shells
    with 1 - a~ small are summed as ``vol - sum vol * (1 - a~^m)``; the
    infinite remainder is bounded by ``m * (1 - a~)`` and dropped once below
    ``tol`` relative.
    """
    if abs(a_hat.limit_at_zero_frequency - 1.0) > 1e-9:
        raise ValueError("return probabilities need a normalized density")
    ms = np.atleast_1d(np.asarray(ms, dtype=float))
    if np.any(ms < 1):
        raise ValueError("step counts must be >= 1")
    p, n = a_hat.p, a_hat.n
    pn = float(p) ** n
    c = 1.0 - 1.0 / pn
    m_top = float(np.max(ms))

    N1 = N
    while m_top * a_hat.deficit_bound(N1) > 1e-3:
        N1 += 1
    head_N = np.arange(N, N1)
    head = np.zeros(len(ms))
    if len(head_N):
        at = np.array([a_hat.at(int(k)) for k in head_N])
        w = c * pn ** (-head_N.astype(float))
        head = (at[None, :] ** ms[:, None]) @ w

    Ns = []
    N_end = N1
    while True:
        Ns.append(N_end)
        bound = m_top * a_hat.deficit_bound(N_end + 1) * pn ** (-(N_end + 1))
        if bound <= tol * pn ** (-N1) or len(Ns) > 5000:
            break
        N_end += 1
    Ns = np.array(Ns)
    at = np.array([a_hat.at(int(k)) for k in Ns])
    d = np.array([a_hat.deficit(int(k)) for k in Ns])
    w = c * pn ** (-Ns.astype(float))
    tail = _power_minus(at, d, ms) @ w
    P = pn ** N * (head + pn ** (-N1) - tail)
    return np.clip(P, 0.0, 1.0)


def return_probability_exact(a_hat: DualProfile, m: int, N: int) -> float:
    return float(return_probabilities(a_hat, N, [m])[0])


def green_series(a_hat: DualProfile, N: int, m_max: int) -> np.ndarray:
    """Partial sums ``S(k) = sum_{m<=k} P(S_m in B_N)`` for k = 1..m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    P = return_probabilities(a_hat, N, np.arange(1, m_max + 1))
    return np.cumsum(P)


def recurrence_report(a: RadialProfile, l: int = 0, N_max: int = 40,
                      ball: int = 0, m_max: int | None = None
                      ) -> RecurrenceReport:
    rep = classify(a, l, N_max)
    if m_max:
        if not is_normalized(a):
            raise ValueError("green series needs a normalized density")
        rep.green_series = green_series(fourier_radial(a), ball, m_max)
    return rep
