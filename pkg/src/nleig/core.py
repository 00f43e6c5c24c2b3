"""Domain types and discrete Rayleigh-quotient primitives.

Functions vanishing at the interval endpoints are represented by their values
at the n interior nodes of a uniform partition.  Energies use second-order
central differences (mass-lumped linear elements) and the composite trapezoid
rule, which keeps every term of the quotient exactly 2-homogeneous and O(h^2)
accurate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

DEFAULT_INTERVAL = (-1.0, 1.0)

# A nodal function counts as constant-sign when min*max > -SIGN_BAND*max|u|^2:
# descent iterates carry roundoff-scale undershoots near the boundary, and
# zero counting ignores sign changes inside the same band.
SIGN_BAND = 1e-6


@dataclass(frozen=True)
class ProblemParams:
    """One problem instance: nonlocal strength alpha, exponent q, interval."""

    alpha: float
    q: float
    interval: tuple[float, float] = DEFAULT_INTERVAL

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.q)):
            raise ValueError("alpha and q must be finite")
        if not 1.0 <= self.q <= 2.0:
            raise ValueError(f"q must lie in [1, 2], got {self.q!r}")
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"interval must be an ordered finite pair, got {self.interval!r}")


@dataclass(frozen=True)
class GridFunction:
    """Nodal values of a function that vanishes at both interval endpoints.

    ``values[i]`` is the value at a + (i+1)*h with h = (b-a)/(n+1); the
    endpoint values are structurally zero and never stored.
    """

    values: np.ndarray
    interval: tuple[float, float] = DEFAULT_INTERVAL

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        if v.ndim != 1 or v.size < 3:
            raise ValueError("a grid function needs at least 3 interior nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("nodal values must be finite")
        object.__setattr__(self, "values", v)
        a, b = self.interval
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError(f"interval must be an ordered finite pair, got {self.interval!r}")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def h(self) -> float:
        a, b = self.interval
        return (b - a) / (self.n + 1)

    @property
    def x(self) -> np.ndarray:
        """Interior node abscissae."""
        a, b = self.interval
        return np.linspace(a, b, self.n + 2)[1:-1]

    @classmethod
    def from_callable(cls, f: Callable, n: int, interval=DEFAULT_INTERVAL) -> "GridFunction":
        a, b = interval
        x = np.linspace(a, b, n + 2)[1:-1]
        return cls(np.asarray(f(x), dtype=float), interval)


@dataclass(frozen=True)
class MinimizerProfile:
    """Shape measurements of a grid function (zeros, extrema, symmetry defects).

    Sign-changing inputs are reported in the orientation where the dominant
    hump is positive (ties broken so the maximum comes first); ``m_bar`` is
    |min|/max in that orientation, in [0, 1].  Defects are relative L2
    distances: each sign part against its reflection about its own extremum,
    and the whole function against its odd reflection about the midpoint.
    """

    sign_class: str  # "positive" | "negative" | "sign_changing"
    zeros: tuple[float, ...]
    max_point: float
    max_value: float
    min_point: float
    min_value: float
    m_bar: float
    positive_part_symmetry_defect: float
    negative_part_symmetry_defect: float
    odd_defect: float


@dataclass(frozen=True)
class EigenResult:
    """Outcome of a variational solve: eigenvalue, minimizer and diagnostics."""

    lam: float
    minimizer: GridFunction
    q_average: float
    gamma: float
    first_integral_constant: Optional[float]
    iterations: int
    residual: float
    restarts_used: int
    converged: bool = True
    degenerate: bool = False


def _check_interval(u: GridFunction, params: ProblemParams) -> None:
    if tuple(u.interval) != tuple(params.interval):
        raise ValueError(
            f"grid interval {u.interval} does not match problem interval {params.interval}"
        )


def dirichlet_energy(u: GridFunction) -> float:
    """int |u'|^2 by central differences through the zero endpoint values."""
    d = np.diff(u.values, prepend=0.0, append=0.0)
    return float(d @ d) / u.h


def l2_sq(u: GridFunction) -> float:
    """int u^2 by the composite trapezoid rule (endpoints contribute 0)."""
    return u.h * float(u.values @ u.values)


def q_average(u: GridFunction, q: float) -> float:
    """Signed average int |u|^(q-1) u dx by the composite trapezoid rule."""
    if not 1.0 <= q <= 2.0:
        raise ValueError(f"q must lie in [1, 2], got {q!r}")
    v = u.values
    return u.h * float(np.sign(v) @ np.abs(v) ** q)


def rayleigh_quotient(u: GridFunction, params: ProblemParams) -> float:
    """( D(u) + alpha*|S(u)|^(2/q) ) / int u^2, exactly invariant under u -> c*u."""
    _check_interval(u, params)
    mass = l2_sq(u)
    if mass == 0.0:
        raise ValueError("degenerate input: u is identically zero")
    s = q_average(u, params.q)
    return (dirichlet_energy(u) + params.alpha * abs(s) ** (2.0 / params.q)) / mass


def _refine_extremum(xp: np.ndarray, vp: np.ndarray, i: int) -> tuple[float, float]:
    """Three-point quadratic refinement of the nodal extremum at padded index i."""
    a, b, c = vp[i - 1], vp[i], vp[i + 1]
    curv = a - 2.0 * b + c
    if curv == 0.0:
        return float(xp[i]), float(b)
    step = xp[i + 1] - xp[i]
    offset = 0.5 * step * (a - c) / curv
    offset = float(np.clip(offset, -step, step))
    value = b - (c - a) ** 2 / (8.0 * curv)
    return float(xp[i] + offset), float(value)


def _part_symmetry_defect(xp: np.ndarray, part: np.ndarray, center: float) -> float:
    """Relative L2 distance between a sign part and its reflection about `center`."""
    norm = math.sqrt(float(part @ part))
    if norm == 0.0:
        return 0.0
    mirrored = np.interp(2.0 * center - xp, xp, part, left=0.0, right=0.0)
    diff = part - mirrored
    return math.sqrt(float(diff @ diff)) / norm


def analyze(u: GridFunction) -> MinimizerProfile:
    """Locate zeros, extrema, sign class and symmetry defects of a grid function.

    Zeros are interior sign changes (linearly interpolated, ignoring crossings
    inside the constant-sign roundoff band); extrema come from a 3-point
    quadratic fit around the nodal argmax/argmin.
    """
    v = u.values
    amax = float(np.max(np.abs(v)))
    if amax == 0.0:
        raise ValueError("degenerate input: u is identically zero")
    vmax, vmin = float(v.max()), float(v.min())
    constant_sign = vmin * vmax > -SIGN_BAND * amax * amax

    if constant_sign:
        sign_class = "positive" if vmax >= -vmin else "negative"
        w = v
    else:
        sign_class = "sign_changing"
        # dominant hump positive; on a tie the maximum comes first
        if -vmin > vmax * (1.0 + 1e-9):
            w = -v
        elif -vmin >= vmax * (1.0 - 1e-9) and np.argmin(v) < np.argmax(v):
            w = -v
        else:
            w = v

    a, b = u.interval
    xp = np.concatenate(([a], u.x, [b]))
    wp = np.concatenate(([0.0], w, [0.0]))

    max_point, max_value = _refine_extremum(xp, wp, int(np.argmax(wp)))
    min_point, min_value = _refine_extremum(xp, wp, int(np.argmin(wp)))

    zeros: list[float] = []
    if not constant_sign:
        band = SIGN_BAND * amax
        signs = np.where(np.abs(w) <= band, 0.0, np.sign(w))
        idx = np.flatnonzero(signs)
        for k0, k1 in zip(idx[:-1], idx[1:]):
            if signs[k0] * signs[k1] < 0.0:
                x0, x1 = u.x[k0], u.x[k1]
                w0, w1 = w[k0], w[k1]
                zeros.append(float(x0 + (x1 - x0) * w0 / (w0 - w1)))
        m_bar = float(np.clip(-min_value / max_value, 0.0, 1.0)) if max_value > 0 else 1.0
    else:
        m_bar = 0.0

    pos_defect = _part_symmetry_defect(xp, np.maximum(wp, 0.0), max_point)
    neg_defect = _part_symmetry_defect(xp, np.minimum(wp, 0.0), min_point)

    rev = w[::-1]
    wnorm = math.sqrt(float(w @ w))
    odd_defect = math.sqrt(float((w + rev) @ (w + rev))) / wnorm

    return MinimizerProfile(
        sign_class=sign_class,
        zeros=tuple(zeros),
        max_point=max_point,
        max_value=max_value,
        min_point=min_point,
        min_value=min_value,
        m_bar=m_bar,
        positive_part_symmetry_defect=pos_defect,
        negative_part_symmetry_defect=neg_defect,
        odd_defect=odd_defect,
    )
