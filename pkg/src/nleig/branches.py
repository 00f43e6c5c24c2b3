"""Eigenfunction branches rebuilt from first integrals and closed forms.

Independent oracles for the variational solver: the sign-changing branch
parametrized by the normalized depth m (eigenvalue = half_period(m, q)^2,
profile recovered by inverting the first-integral arclength map), the explicit
q = 1 constant-sign branch, and the one-parameter family of flat minimizers
that coexist at q = 1 when the coupling reaches pi^2/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .core import GridFunction
from .period import DEFAULT_TARGET_REL_ERR, first_integral_coeffs, half_period

_PI2 = math.pi**2

# quadrature mesh of the arclength accumulation: 2048 panels per arc, each
# integrated by 8-point Gauss-Legendre in the square-root variable that
# regularizes the vanishing slope at the extremum
_PANELS = 2048
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class BranchPoint:
    """Sign-changing branch data at depth m_bar: eigenvalue and first-integral constants.

    ``gamma_alpha`` stores the coupling-free product gamma*alpha =
    (q*lam/2)*z(m_bar, q); ``c`` is the first-integral constant (lam/2)*t(m_bar, q).
    """

    q: float
    m_bar: float
    lam: float
    gamma_alpha: float
    c: float


def eigenvalue_from_depth(m: float, q: float, target_rel_err: float = DEFAULT_TARGET_REL_ERR) -> float:
    """Eigenvalue of the sign-changing branch at depth m: half_period(m, q)^2."""
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    return half_period(m, q, target_rel_err).value ** 2


def branch_point(m: float, q: float, target_rel_err: float = DEFAULT_TARGET_REL_ERR) -> BranchPoint:
    """Assemble the branch data (eigenvalue, gamma*alpha, first-integral constant)."""
    lam = eigenvalue_from_depth(m, q, target_rel_err)
    co = first_integral_coeffs(m, q)
    return BranchPoint(q=q, m_bar=m, lam=lam, gamma_alpha=0.5 * q * lam * co.z, c=0.5 * lam * co.t)


def _arc_cumulative(ratio, scale: float) -> np.ndarray:
    """Cumulative arclength integral of scale/sqrt(ratio(u)) over [0, u_j].

    ``ratio(u)`` must return radicand/u^2 (finite and positive near u = 0);
    the returned array has one entry per panel boundary, starting at 0.
    """
    edges = np.linspace(0.0, 1.0, _PANELS + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = scale / np.sqrt(ratio(pts))
    panel = (vals * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    out = np.empty(_PANELS + 1)
    out[0] = 0.0
    np.cumsum(panel, out=out[1:])
    return out


def reconstruct_profile(m: float, q: float, n: int) -> GridFunction:
    """Rebuild the sign-changing profile of depth m on (-1, 1) from its first integral.

    The arclength maps x(y) on the rising and falling arcs are accumulated in
    the square-root variables y = 1 - u^2 (positive arc) and |y| = m*(1 - v^2)
    (negative arc), where the integrands are smooth, then inverted by monotone
    cubic interpolation.  The positive arc is anchored first: the profile
    rises from x = -1, crosses zero once, and dips to -m before x = 1.
    """
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    if n < 100:
        raise ValueError(f"n must be at least 100, got {n}")
    z = first_integral_coeffs(m, q).z

    # radicand of the positive arc over u^2, evaluated cancellation-free:
    # r(1-u^2) = u^2*(2-u^2) + z*((1-u^2)^q - 1)
    def pos_ratio(u):
        u2 = u * u
        return (2.0 - u2) + z * np.expm1(q * np.log1p(-u2)) / u2

    # same for the negative arc with |y| = m*(1-v^2):
    # r = m^2*v^2*(2-v^2) - z*m^q*((1-v^2)^q - 1)
    mq = m**q

    def neg_ratio(v):
        v2 = v * v
        return m * m * (2.0 - v2) - z * mq * np.expm1(q * np.log1p(-v2)) / v2

    pos_cum = _arc_cumulative(pos_ratio, 2.0)  # distance from the max toward y = 0
    neg_cum = _arc_cumulative(neg_ratio, 2.0 * m)  # distance from the min toward y = 0
    len_pos = pos_cum[-1]
    len_neg = neg_cum[-1]
    period = len_pos + len_neg  # equals half_period(m, q)
    lam_sqrt = period

    u_edges = np.linspace(0.0, 1.0, _PANELS + 1)
    # map: arclength from the zero end -> height on the positive arc
    s_pos = (len_pos - pos_cum)[::-1]
    y_pos = (1.0 - u_edges * u_edges)[::-1]
    rise = PchipInterpolator(s_pos, y_pos)
    # map: arclength from the zero end -> depth on the negative arc
    s_neg = (len_neg - neg_cum)[::-1]
    w_neg = (m * (1.0 - u_edges * u_edges))[::-1]
    dip = PchipInterpolator(s_neg, w_neg)

    zero = -1.0 + 2.0 * len_pos / period
    max_point = -1.0 + len_pos / period
    min_point = zero + len_neg / period

    x = np.linspace(-1.0, 1.0, n + 2)[1:-1]
    s = np.empty_like(x)
    left = x <= max_point
    s[left] = x[left] + 1.0
    mid = (~left) & (x <= zero)
    s[mid] = zero - x[mid]
    down = (x > zero) & (x <= min_point)
    s[down] = x[down] - zero
    right = x > min_point
    s[right] = 1.0 - x[right]
    s *= lam_sqrt

    values = np.empty_like(x)
    pos_mask = x <= zero
    values[pos_mask] = rise(np.clip(s[pos_mask], 0.0, len_pos))
    values[~pos_mask] = -dip(np.clip(s[~pos_mask], 0.0, len_neg))
    return GridFunction(values)


def q1_coupling_of_eigenvalue(lam: float) -> float:
    """Coupling alpha sustaining eigenvalue lam on the q = 1 constant-sign branch.

        alpha = lam*sqrt(lam) / (2*sqrt(lam) - 2*tan(sqrt(lam)))

    Valid for pi^2/4 < lam < pi^2, where tan(sqrt(lam)) < 0 keeps the
    denominator positive; alpha -> pi^2/2 as lam -> pi^2.
    """
    if not _PI2 / 4.0 < lam < _PI2:
        raise ValueError(f"lam must lie strictly inside (pi^2/4, pi^2), got {lam!r}")
    root = math.sqrt(lam)
    return lam * root / (2.0 * root - 2.0 * math.tan(root))


def q1_positive_profile(lam: float, n: int) -> GridFunction:
    """The q = 1 constant-sign minimizer profile at eigenvalue lam, unit average scale.

        y(x) = (alpha/lam) * (1 - cos(sqrt(lam)*x)/cos(sqrt(lam)))

    Positive on the open interval and vanishing at both endpoints.
    """
    alpha = q1_coupling_of_eigenvalue(lam)
    root = math.sqrt(lam)
    scale = alpha / lam
    return GridFunction.from_callable(
        lambda x: scale * (1.0 - np.cos(root * x) / math.cos(root)), n
    )


def q1_flat_family(avg: float, n: int) -> GridFunction:
    """Member of the q = 1 flat minimizer family with prescribed average.

        y(x) = (avg/2)*(1 + cos(pi*x)) - sqrt(1 - avg)*sin(pi*x),  0 <= avg <= 1

    Every member attains the same quotient pi^2 at coupling pi^2/2.
    """
    if not 0.0 <= avg <= 1.0:
        raise ValueError(f"avg must lie in [0, 1], got {avg!r}")
    root = math.sqrt(1.0 - avg)
    return GridFunction.from_callable(
        lambda x: 0.5 * avg * (1.0 + np.cos(np.pi * x)) - root * np.sin(np.pi * x), n
    )
