"""Variational solver: projected descent for the nonlocal Rayleigh quotient.

Minimizes  Q(u) = ( D(u) + alpha*|S(u)|^(2/q) ) / M(u)  over grid functions,
restarted from a positive bump, an odd sine and a seeded random vector so that
both stationary branches near the sign transition are reached; the smallest
quotient wins.  The descent direction is the quotient gradient preconditioned
by the inverse stiffness operator (one tridiagonal solve per step), which
keeps the step count mesh-independent; a raw L2 gradient would need O(1/h^2)
iterations at the default resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .core import EigenResult, GridFunction, ProblemParams, analyze, rayleigh_quotient
from .period import first_integral_coeffs

_START_TAGS = ("positive_bump", "odd_sine", "random")

# discrete stand-in for the exact zero-average case split of gamma at q = 2
_GAMMA_ZERO_TOL = 1e-10

# branch quotients closer than this are reported as a degenerate tie
_TIE_TOL = 1e-9

_ARMIJO = 1e-4


@dataclass(frozen=True)
class SolverOptions:
    """Grid size, iteration budget, stopping rule and restart list."""

    n: int = 4000
    max_iterations: int = 50000
    lambda_tol: float = 1e-11
    starts: tuple[str, ...] = _START_TAGS
    random_seed: int = 42

    def __post_init__(self):
        if self.n < 100:
            raise ValueError(f"n must be at least 100, got {self.n}")
        if not self.lambda_tol > 0:
            raise ValueError("lambda_tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        starts = tuple(self.starts)
        object.__setattr__(self, "starts", starts)
        unknown = set(starts) - set(_START_TAGS)
        if unknown or not starts:
            raise ValueError(f"starts must be a nonempty subset of {_START_TAGS}, got {starts}")


class SolverNonconvergence(RuntimeError):
    """Raised when the winning restart hits the iteration cap; carries the result."""

    def __init__(self, message: str, result: EigenResult):
        super().__init__(message)
        self.result = result


def _stiffness_factor(n: int, h: float):
    """Banded Cholesky factor of the Dirichlet stiffness matrix."""
    ab = np.zeros((2, n))
    ab[0, 1:] = -1.0 / h**2
    ab[1, :] = 2.0 / h**2
    return cholesky_banded(ab)


def _apply_stiffness(u: np.ndarray, h: float) -> np.ndarray:
    out = 2.0 * u
    out[:-1] -= u[1:]
    out[1:] -= u[:-1]
    return out / h**2


def _descend(
    u: np.ndarray,
    value: Callable[[np.ndarray], float],
    grad: Callable[[np.ndarray, float], np.ndarray],
    normalize: Callable[[np.ndarray], np.ndarray],
    solve: Callable[[np.ndarray], np.ndarray],
    h: float,
    max_iterations: int,
    tol: float,
) -> tuple[np.ndarray, float, int, bool]:
    """Armijo-backtracked preconditioned descent on a normalized manifold."""
    u = normalize(u)
    q_val = value(u)
    iterations = 0
    converged = False
    step_init = 1.0
    while iterations < max_iterations:
        g = grad(u, q_val)
        # the half factor makes the unit step coincide with inverse iteration
        # on the local problem, which crushes high-frequency error modes
        d = 0.5 * solve(g)
        slope = h * float(g @ d)
        if slope <= 0.0:
            converged = True  # gradient numerically zero
            break
        step = step_init
        accepted = False
        while step > 1e-14:
            trial = normalize(u - step * d)
            q_trial = value(trial)
            if q_trial <= q_val - _ARMIJO * step * slope:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            converged = True  # no admissible decrease left
            break
        step_init = min(1.0, 2.0 * step)  # warm-start the next search
        decrease = q_val - q_trial
        u, q_val = trial, q_trial
        iterations += 1
        if decrease < tol:
            converged = True
            break
    return u, q_val, iterations, converged


def _starts(tag: str, x: np.ndarray, interval, rng_seed: int, n: int) -> np.ndarray:
    a, b = interval
    span = b - a
    if tag == "positive_bump":
        return np.sin(np.pi * (x - a) / span)
    if tag == "odd_sine":
        # equals sin(pi*x) on the reference interval (-1, 1)
        return -np.sin(2.0 * np.pi * (x - a) / span)
    rng = np.random.default_rng(rng_seed)
    return rng.uniform(-1.0, 1.0, n)


def _el_residual_values(
    v: np.ndarray, lam: float, gamma: float, alpha: float, q: float, h: float
) -> float:
    r = _apply_stiffness(v, h)  # the stencil computes -v'' directly
    r += alpha * gamma * np.abs(v) ** (q - 1.0)
    r -= lam * v
    return float(np.sqrt(np.mean(r * r)))


def minimize(params: ProblemParams, opts: SolverOptions = SolverOptions()) -> EigenResult:
    """Compute lambda(alpha, q) and a minimizer by multi-start projected descent.

    Returns the restart with the smallest quotient; when the best constant-sign
    and best sign-changing quotients agree to within 1e-9 the constant-sign
    result is reported with the ``degenerate`` flag set.  Raises
    SolverNonconvergence (carrying the result) if the winner hit the iteration
    cap.
    """
    a, b = params.interval
    n = opts.n
    h = (b - a) / (n + 1)
    x = np.linspace(a, b, n + 2)[1:-1]
    alpha, q = params.alpha, params.q
    expo = 2.0 / q

    factor = _stiffness_factor(n, h)
    solve = lambda r: cho_solve_banded((factor, False), r)

    def s_of(v):
        return h * float(np.sign(v) @ np.abs(v) ** q)

    def value(v):
        d = np.diff(v, prepend=0.0, append=0.0)
        return (float(d @ d) / h + alpha * abs(s_of(v)) ** expo) / (h * float(v @ v))

    def grad(v, q_val):
        # nonlocal gradient density 2*alpha*|S|^(2/q-1)*sign(S)*|v|^(q-1);
        # at S = 0 the limit (q < 2) and the subgradient choice (q = 2) are both 0
        s = s_of(v)
        g = _apply_stiffness(v, h)
        if s != 0.0:
            coef = alpha * abs(s) ** (expo - 1.0) * math.copysign(1.0, s)
            g = g + coef * np.abs(v) ** (q - 1.0)
        return 2.0 * (g - q_val * v)

    def normalize(v):
        return v / math.sqrt(h * float(v @ v))

    runs = []
    total_iterations = 0
    for tag in opts.starts:
        u0 = _starts(tag, x, params.interval, opts.random_seed, n)
        u, q_val, iters, conv = _descend(
            u0, value, grad, normalize, solve, h, opts.max_iterations, opts.lambda_tol
        )
        total_iterations += iters
        runs.append((q_val, tag, u, conv))

    runs.sort(key=lambda r: r[0])
    best = runs[0]
    if not best[3]:
        # a capped run that ties a converged one to rounding level is no winner
        near = [r for r in runs if r[3] and r[0] - best[0] <= 10.0 * opts.lambda_tol * max(1.0, abs(best[0]))]
        if near:
            best = near[0]
    degenerate = False
    profiles = {id(u): analyze(GridFunction(u, params.interval)) for _, _, u, _ in runs}
    const = [r for r in runs if profiles[id(r[2])].sign_class != "sign_changing"]
    changing = [r for r in runs if profiles[id(r[2])].sign_class == "sign_changing"]
    if const and changing and abs(const[0][0] - changing[0][0]) < _TIE_TOL:
        best = const[0]
        degenerate = True

    q_best, _, v, conv = best
    s = s_of(v)
    if s < 0.0:
        v = -v
        s = -s
    v = v / math.sqrt(h * float(v @ v))
    s = s_of(v)

    if expo - 1.0 == 0.0:  # q = 2: gamma drops to 0 in the zero-average case
        gamma = 1.0 if s > _GAMMA_ZERO_TOL else 0.0
    else:
        gamma = s ** (expo - 1.0) if s > 0.0 else 0.0

    minimizer = GridFunction(v, params.interval)
    profile = analyze(minimizer)
    c = None
    if profile.sign_class == "sign_changing":
        c = 0.5 * q_best * first_integral_coeffs(profile.m_bar, q).t

    result = EigenResult(
        lam=q_best,
        minimizer=minimizer,
        q_average=s,
        gamma=gamma,
        first_integral_constant=c,
        iterations=total_iterations,
        residual=_el_residual_values(v, q_best, gamma, alpha, q, h),
        restarts_used=len(opts.starts),
        converged=conv,
        degenerate=degenerate,
    )
    if not conv:
        raise SolverNonconvergence(
            f"nonconverged: iteration cap {opts.max_iterations} hit at "
            f"(alpha={alpha}, q={q})",
            result,
        )
    return result


def el_residual(result: EigenResult, params: ProblemParams) -> float:
    """RMS interior residual of -y'' + alpha*gamma*|y|^(q-1) = lambda*y.

    Uses the same difference stencil as the energy.
    """
    u = result.minimizer
    return _el_residual_values(
        u.values, result.lam, result.gamma, params.alpha, params.q, u.h
    )


def saturation_reference(n: int, q: float) -> float:
    """Discrete Rayleigh quotient of sampled sin(pi*x): the grid-consistent pi^2.

    The q-average of the sine vanishes by odd symmetry, so the value is the
    pure Dirichlet quotient and is independent of both alpha and q.
    """
    if n < 100:
        raise ValueError(f"n must be at least 100, got {n}")
    u = GridFunction.from_callable(lambda x: np.sin(np.pi * x), n)
    return rayleigh_quotient(u, ProblemParams(alpha=0.0, q=q))
