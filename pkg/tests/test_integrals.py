"""C(theta1) and I(theta, theta1, theta2)."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from oracles import c_midpoint
from sievebound.combiner import F_combined, FeasibilityError
from sievebound.integrals import integral_C, integral_I, integral_I_profile


@pytest.mark.parametrize("theta1", [0.26, 0.3, 0.431, 0.449, 0.49])
def test_C_against_midpoint_rule(theta1):
    res = integral_C(theta1)
    assert res.converged and res.abs_error_estimate <= 1e-9
    assert res.value == pytest.approx(c_midpoint(theta1), abs=1e-6)


def test_C_against_original_variable():
    t1 = 0.3
    f = lambda b: math.log((1 - b - t1) / t1) / (math.sqrt(b) * (1 - b))
    ref = quad(f, 0, 1 - 2 * t1, epsabs=1e-12, limit=200)[0]
    assert integral_C(t1).value == pytest.approx(ref, abs=1e-9)


def test_C_endpoint_and_monotone():
    assert integral_C(0.5).value == 0.0
    vals = [integral_C(t).value for t in np.linspace(0.26, 0.5, 25)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert integral_C(0.43).value > integral_C(0.449).value > integral_C(0.47).value


@pytest.mark.parametrize("bad", [0.25, 0.2, 0.51])
def test_C_domain(bad):
    with pytest.raises(ValueError):
        integral_C(bad)


def test_I_empty_range(tables):
    assert integral_I(0.011, 0.449, 0.011, tables).value == 0.0


def test_I_against_scipy(tables):
    th, t1, t2 = 0.2, 0.4, 0.02
    g = lambda a: (1 - a / th) * F_combined(tables, (1 - 2 * a) / (2 * t1), (1 - 2 * a) / (2 * t2)).value / a
    ref = quad(g, t2, th, epsabs=1e-9, limit=200)[0]
    res = integral_I(th, t1, t2, tables)
    assert res.abs_error_estimate <= 1e-7
    assert res.value == pytest.approx(ref, abs=2e-7)


def test_I_profile_matches_direct(tables):
    thetas = [0.05, 0.12, 0.23]
    prof = integral_I_profile(thetas, 0.449, 0.011, tables)
    direct = [integral_I(th, 0.449, 0.011, tables).value for th in thetas]
    assert np.allclose(prof, direct, atol=2e-7, rtol=0)
    assert np.all(np.diff(prof) > 0)


def test_I_tolerance_halving(tables):
    a = integral_I(0.23, 0.449, 0.011, tables, abs_tol=1e-7)
    b = integral_I(0.23, 0.449, 0.011, tables, abs_tol=5e-8)
    assert abs(a.value - b.value) <= max(a.abs_error_estimate, 1e-7)


def test_I_domain(tables):
    with pytest.raises(ValueError):
        integral_I(0.5, 0.449, 0.011, tables)
    with pytest.raises(FeasibilityError, match="infeasible"):
        integral_I(0.495, 0.449, 0.011, tables)
    with pytest.raises(ValueError):
        integral_I(0.2, 0.01, 0.02, tables)
