"""The two one-dimensional integrals entering the objectives."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .combiner import F_combined, FeasibilityError, SieveTables
from .quadrature import QuadratureResult, integrate

C_TOL = 1e-9
I_TOL = 1e-7


class ConvergenceError(RuntimeError):
    pass


def _require(res: QuadratureResult, what: str) -> QuadratureResult:
    if not res.converged:
        raise ConvergenceError(f"{what}: error estimate {res.abs_error_estimate:.2e} did not reach tolerance")
    return res


def c_integrand(u, theta1: float):
    """Integrand of C(theta1) after beta = u^2."""
    u2 = np.asarray(u, dtype=float) ** 2
    return 2.0 * np.log((1.0 - u2 - theta1) / theta1) / (1.0 - u2)


def integral_C(theta1: float, abs_tol: float = C_TOL) -> QuadratureResult:
    """C(theta1) = int_0^{1-2 theta1} log((1-b-theta1)/theta1) / (b^(1/2) (1-b)) db."""
    if not 0.25 < theta1 <= 0.5:
        raise ValueError(f"theta1 must lie in (1/4, 1/2], got {theta1}")
    if theta1 == 0.5:
        return QuadratureResult(0.0, 0.0, 0, True)
    top = math.sqrt(1.0 - 2.0 * theta1)
    return _require(integrate(lambda u: c_integrand(u, theta1), 0.0, top, abs_tol=abs_tol), "C integral")


@lru_cache(maxsize=4096)
def integral_C_cached(theta1: float) -> float:
    return integral_C(theta1).value


def _check_I(theta: float, theta1: float, theta2: float) -> None:
    if not 0 < theta2 < theta1 < 0.5:
        raise ValueError(f"need 0 < theta2 < theta1 < 1/2, got theta1={theta1}, theta2={theta2}")
    if not theta2 <= theta < 0.5:
        raise ValueError(f"need theta2 <= theta < 1/2, got theta={theta}")
    if theta >= 0.5 - theta2:
        raise FeasibilityError(
            f"F((1-2a)/(2 theta1), (1-2a)/(2 theta2)) is infeasible for a >= {0.5 - theta2:.6g} "
            f"(second argument <= 1); theta={theta} reaches it"
        )


def combined_upper(tables: SieveTables, theta1: float, theta2: float, alpha: float) -> float:
    s1 = (1.0 - 2.0 * alpha) / (2.0 * theta1)
    s2 = (1.0 - 2.0 * alpha) / (2.0 * theta2)
    try:
        return F_combined(tables, s1, s2).value
    except FeasibilityError as exc:
        raise FeasibilityError(f"alpha={alpha}: {exc}") from None


def integral_I(
    theta: float, theta1: float, theta2: float, tables: SieveTables, abs_tol: float = I_TOL
) -> QuadratureResult:
    """I = int_{theta2}^{theta} (1 - a/theta) F((1-2a)/(2 theta1), (1-2a)/(2 theta2)) da / a."""
    _check_I(theta, theta1, theta2)
    if theta == theta2:
        return QuadratureResult(0.0, 0.0, 0, True)

    def g(a):
        a = np.atleast_1d(a)
        F = np.array([combined_upper(tables, theta1, theta2, float(x)) for x in a])
        return (1.0 - a / theta) * F / a

    return _require(integrate(g, theta2, theta, abs_tol=abs_tol), "I integral")


def integral_I_profile(
    thetas, theta1: float, theta2: float, tables: SieveTables, abs_tol: float = I_TOL
) -> np.ndarray:
    """I(theta, theta1, theta2) for an increasing sequence of theta sharing theta1 and theta2.

    Uses I = A(theta) - B(theta)/theta with A = int F da/a and B = int F da,
    both accumulated piece by piece between consecutive thetas.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0:
        return thetas.copy()
    if np.any(np.diff(thetas) <= 0):
        raise ValueError("thetas must be strictly increasing")
    _check_I(float(thetas[-1]), theta1, theta2)
    _check_I(float(thetas[0]), theta1, theta2)

    out = np.empty(thetas.size)
    A = B = 0.0
    prev = theta2
    # Errors accumulate over pieces; B enters divided by theta >= thetas[0].
    tol_A = 0.5 * abs_tol / thetas.size
    tol_B = tol_A * thetas[0]
    for i, th in enumerate(thetas):
        if th > prev:
            cache: dict[float, float] = {}

            def F_at(a):
                a = np.atleast_1d(a)
                vals = []
                for x in a.tolist():
                    if x not in cache:
                        cache[x] = combined_upper(tables, theta1, theta2, x)
                    vals.append(cache[x])
                return np.array(vals)

            A += _require(integrate(lambda a: F_at(a) / a, prev, th, abs_tol=tol_A), "I profile").value
            B += _require(integrate(F_at, prev, th, abs_tol=tol_B), "I profile").value
            prev = th
        out[i] = A - B / th
    return out
