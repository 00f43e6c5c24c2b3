"""Half-period integral of the sign-changing branch and its study functions.

A sign-changing minimizer normalized to max 1 and min -m satisfies the first
integral  (y')^2 = lambda * [1 - z*(1 - |y|^(q-1) y) - y^2]  with

    z(m, q) = (1 - m^2) / (1 + m^q),        t(m, q) = 1 - z(m, q).

Integrating dx = dy/|y'| from the minimum to the maximum shows that the
eigenvalue equals the square of

    half_period(m, q) = int_0^1 [ 1/sqrt((1-z) + z*y^q - y^2)
                                + m/sqrt((1-z) - z*m^q*y^q - m^2*y^2) ] dy,

where both integrand terms carry an inverse-square-root singularity at y = 1.
The value is pi on the whole q = 1 line and at m = 1, and exceeds pi strictly
for m < 1, q > 1; the auxiliary functions at the bottom certify the strict
monotonicity of the integrand in q that drives that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .quadrature import QuadResult, integrate_endpoint_singular

DEFAULT_TARGET_REL_ERR = 1e-10


@dataclass(frozen=True)
class FirstIntegralCoeffs:
    """Coefficients z = (1-m^2)/(1+m^q) and t = 1-z of the first integral."""

    z: float
    t: float
    m: float
    q: float


@dataclass(frozen=True)
class PeriodValue:
    """Half-period value with the propagated quadrature error estimate."""

    m: float
    q: float
    value: float
    error_estimate: float


def _check_mq(m: float, q: float) -> None:
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"m must lie in [0, 1], got {m!r}")
    if not 1.0 <= q <= 2.0:
        raise ValueError(f"q must lie in [1, 2], got {q!r}")


def first_integral_coeffs(m: float, q: float) -> FirstIntegralCoeffs:
    """Evaluate z(m, q) = (1-m^2)/(1+m^q) and its complement t = 1 - z."""
    _check_mq(m, q)
    z = (1.0 - m * m) / (1.0 + m**q)
    return FirstIntegralCoeffs(z=z, t=1.0 - z, m=m, q=q)


def pos_arc_radical(m: float, q: float, y: float) -> float:
    """sqrt(1 - z*(1 - y^q) - y^2), the slope factor on the positive arc.

    Bounded above by sqrt(1 - y^2) for every admissible (m, q).
    """
    _check_mq(m, q)
    z = (1.0 - m * m) / (1.0 + m**q)
    r = (1.0 - z) + z * y**q - y * y
    return math.sqrt(_guard_radicand(r))


def neg_arc_radical(m: float, q: float, y: float) -> float:
    """sqrt(1 - z*(1 + m^q y^q) - m^2 y^2), the slope factor on the negative arc.

    Bounded below by m*sqrt(1 - y^2) for every admissible (m, q).
    """
    _check_mq(m, q)
    z = (1.0 - m * m) / (1.0 + m**q)
    r = (1.0 - z) - z * m**q * y**q - (m * y) ** 2
    return math.sqrt(_guard_radicand(r))


def _guard_radicand(r: float) -> float:
    if r <= -1e-14:
        raise ValueError(f"integrand domain violation: radicand {r:.3e} is negative")
    return max(r, 0.0)


def integrand(m: float, q: float, y: float) -> float:
    """The half-period integrand 1/pos_arc_radical + m/neg_arc_radical.

    Finite for 0 <= y < 1; tends to +inf as y -> 1 where both radicands vanish.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError(f"y must lie in [0, 1], got {y!r}")
    fi = pos_arc_radical(m, q, y)
    fii = neg_arc_radical(m, q, y)
    first = 1.0 / fi if fi > 0.0 else math.inf
    if m == 0.0:
        return first
    second = m / fii if fii > 0.0 else math.inf
    return first + second


def half_period(m: float, q: float, target_rel_err: float = DEFAULT_TARGET_REL_ERR) -> PeriodValue:
    """Evaluate the half-period integral by tanh-sinh quadrature on each term.

    The split form puts every singularity at y = 1.  (m, q) = (0, 2) diverges;
    for m = 0 with q < 2 the second term is identically zero by its prefactor.
    """
    _check_mq(m, q)
    if m == 0.0 and q == 2.0:
        raise ValueError("divergent: the half-period integral is +inf at (m, q) = (0, 2)")

    with mp.workdps(30):
        # constants must carry working precision: the radicands cancel to
        # O(1-y) near y = 1 and double-rounded coefficients would leave an
        # absolute noise floor ~1e-17 that a -1/2 singularity amplifies
        mm = mp.mpf(m)
        qq = mp.mpf(q)
        z = (1 - mm * mm) / (1 + mm**qq)
        one_minus_z = 1 - z

        def pos_term(y):
            r = one_minus_z + z * y**qq - y * y
            if r <= 0:
                return mp.inf
            return 1 / mp.sqrt(r)

        first = integrate_endpoint_singular(pos_term, target_rel_err)
        if m == 0.0:
            return PeriodValue(m=m, q=q, value=first.value, error_estimate=first.error_estimate)

        mq = mm**qq
        m2 = mm * mm

        def neg_term(y):
            r = one_minus_z - z * mq * y**qq - m2 * y * y
            if r <= 0:
                return mp.inf
            return mm / mp.sqrt(r)

        second = integrate_endpoint_singular(neg_term, target_rel_err)

    return PeriodValue(
        m=m,
        q=q,
        value=first.value + second.value,
        error_estimate=first.error_estimate + second.error_estimate,
    )


def _check_mq_open(m: float, q: float) -> None:
    if not 0.0 < m < 1.0:
        raise ValueError(f"m must lie strictly inside (0, 1), got {m!r}")
    if not 1.0 <= q <= 2.0:
        raise ValueError(f"q must lie in [1, 2], got {q!r}")


def monotonicity_gap(m: float, q: float, y: float) -> float:
    """Positivity gap certifying that the integrand strictly increases in q.

        [ -(1-y^q) m^q log m - y^q (1+m^q) log y ]
      + [ (y^q - 1) log m + (1+m^q) y^q log y ] * m^(q-2)

    Vanishes at y = 1 and is positive for 0 < y < 1, 0 < m < 1.
    """
    _check_mq_open(m, q)
    if not 0.0 < y <= 1.0:
        raise ValueError(f"y must lie in (0, 1], got {y!r}")
    mq = m**q
    yq = y**q
    lm = math.log(m)
    ly = math.log(y)
    first = -(1.0 - yq) * mq * lm - yq * (1.0 + mq) * ly
    second = ((yq - 1.0) * lm + (1.0 + mq) * yq * ly) * m ** (q - 2.0)
    return first + second


def log_bound_offset(m: float, q: float) -> float:
    """Offset (m^q + m^(q-2)) log(1/m) / ((1+m^q)(m^(q-2)-1)), exceeding 1.

    Bounds log y away from the zero set of the gap derivative; +inf at q = 2
    where the denominator vanishes.
    """
    _check_mq_open(m, q)
    denom = (1.0 + m**q) * (m ** (q - 2.0) - 1.0)
    if denom == 0.0:
        return math.inf
    return (m**q + m ** (q - 2.0)) * math.log(1.0 / m) / denom


def offset_positivity_margin(m: float, q: float) -> float:
    """Margin (m^q + m^(q-2)) log(1/m) - (1+m^q)(m^(q-2)-1), positive on (0,1).

    Its positivity is what pushes the log bound offset above 1; it tends to 0
    as m -> 1.
    """
    _check_mq_open(m, q)
    return (m**q + m ** (q - 2.0)) * math.log(1.0 / m) - (1.0 + m**q) * (
        m ** (q - 2.0) - 1.0
    )
