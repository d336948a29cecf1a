"""Objective assembly, parameter parsing and the searches."""

import math

import numpy as np
import pytest

from sievebound.combiner import FeasibilityError
from sievebound.constants import REFERENCE_VALUES
from sievebound.integrals import integral_C, integral_I
from sievebound.optimizer import (
    GReport,
    GSearchConfig,
    HSearchConfig,
    Objective,
    ObjectiveConstants,
    Range,
    SearchParams,
    g_config_from,
    h_config_from,
    integer_below,
    omega_bound,
    parse_range,
    read_config,
    search_G,
    search_H,
)
from sievebound.sieve_functions import EULER_GAMMA


@pytest.fixture(scope="module")
def objective(tables):
    return Objective(tables)


def test_terms_follow_formula(objective, tables):
    from sievebound.combiner import f_combined

    t1, t2 = 0.449, 0.011
    g = objective.g_terms(t1, t2)
    K = REFERENCE_VALUES["C"] * math.exp(-1.5 * EULER_GAMMA) / (4 * math.sqrt(t1) * t2)
    assert g.term_main == pytest.approx(K * f_combined(tables, 1 / (2 * t1), 1 / (2 * t2)).value, rel=1e-14)
    c = REFERENCE_VALUES
    sw = 2 * c["c1"] * c["c2"] ** 2 * c["c3"] * integral_C(t1).value / (t2 * min(t1, 0.5 - t2))
    assert g.term_switching == pytest.approx(sw, rel=1e-14)
    assert g.term_switching > 0


def test_H_report_consistency(objective):
    p = SearchParams(0.14, 0.23, 0.449, 0.011)
    r = objective.H(p)
    assert r.H_value == pytest.approx(r.term_main - r.term_switching - r.term_weighted, abs=1e-12)
    assert r.omega_bound == pytest.approx(1 / 0.14 + 1 / 0.23, abs=1e-12)
    assert r.omega_integer_bound == 11
    assert r.I_value == pytest.approx(integral_I(0.23, 0.449, 0.011, objective.tables).value, abs=1e-12)


def test_H_linear_in_lambda(objective):
    a = objective.H(SearchParams(0.1, 0.2, 0.45, 0.01))
    b = objective.H(SearchParams(0.2, 0.2, 0.45, 0.01))
    zero = objective.H(SearchParams(0.0, 0.2, 0.45, 0.01))
    assert b.term_weighted == pytest.approx(2 * a.term_weighted, rel=1e-14)
    assert a.H_value - b.H_value == pytest.approx(a.term_weighted, rel=1e-12)
    assert zero.H_value == pytest.approx(objective.G(0.45, 0.01), abs=1e-12)
    assert math.isinf(zero.omega_bound) and zero.omega_integer_bound is None


def test_constants_override(tables):
    base = Objective(tables)
    doubled = Objective(tables, ObjectiveConstants(C=2 * REFERENCE_VALUES["C"]))
    a, b = base.g_terms(0.449, 0.011), doubled.g_terms(0.449, 0.011)
    assert b.term_main == pytest.approx(2 * a.term_main)
    assert b.term_switching == a.term_switching


@pytest.mark.parametrize("params", [
    SearchParams(0.1, 0.2, 0.25, 0.01), SearchParams(0.1, 0.2, 0.45, 0.46),
    SearchParams(0.1, 0.5, 0.45, 0.01), SearchParams(-0.1, 0.2, 0.45, 0.01),
])
def test_param_validation(objective, params):
    with pytest.raises(ValueError):
        objective.H(params)


def test_infeasible_G(objective):
    with pytest.raises(FeasibilityError):
        objective.G(0.45, 0.04)


@pytest.mark.parametrize("x, n", [(11.4907, 11), (12.0, 11), (3.0001, 3), (1.5, 1)])
def test_integer_below(x, n):
    assert integer_below(x) == n


def test_omega_bound():
    assert omega_bound(0.14, 0.23) == pytest.approx(11.4907, abs=1e-4)


@pytest.mark.parametrize("text, rng", [
    ("(0.25, 0.5)", Range(0.25, 0.5, False, False)),
    ("[0.02,0.024]", Range(0.02, 0.024, True, True)),
    ("[0.001, 0.05)", Range(0.001, 0.05, True, False)),
])
def test_parse_range(text, rng):
    assert parse_range(text) == rng


@pytest.mark.parametrize("text", ["0.1, 0.2", "(0.3, 0.2)", "[a, b]"])
def test_parse_range_rejects(text):
    with pytest.raises(ValueError):
        parse_range(text)


def test_range_points():
    assert Range(0.25, 0.5, False, False).points(0.05).tolist() == [0.3, 0.35, 0.4, 0.45]
    assert Range(0.02, 0.024).points(0.001).tolist() == [0.02, 0.021, 0.022, 0.023, 0.024]
    assert Range(0.0, 0.05, False, False).points(1e-4).size == 499


def test_config_files(tmp_path):
    p = tmp_path / "h.cfg"
    p.write_text("# comment\nlambda = [0.1, 0.2]\nsteps = 0.02 0.02 0.002 0.002\nrefine_rounds = 1\n")
    cfg = h_config_from(read_config(p))
    assert cfg.lam == Range(0.1, 0.2) and cfg.steps == (0.02, 0.02, 0.002, 0.002) and cfg.refine_rounds == 1
    assert cfg.theta == HSearchConfig().theta
    g = g_config_from({"theta2": "[0.02, 0.024]", "step": "0.001"})
    assert g.theta2 == Range(0.02, 0.024) and g.step == 0.001
    with pytest.raises(ValueError):
        g_config_from({"bogus": "1"})
    bad = tmp_path / "bad.cfg"
    bad.write_text("no equals sign\n")
    with pytest.raises(ValueError):
        read_config(bad)


class StubObjective:
    """G(theta1, theta2) = 0.03 - theta2 - (theta1 - 0.4)^2, positive only for small theta2."""

    def g_terms(self, theta1, theta2):
        g = 0.03 - theta2 - (theta1 - 0.4) ** 2
        return GReport(theta1, theta2, g + 1.0, 1.0, g)


def test_search_G_on_stub():
    res = search_G(GSearchConfig(step=1e-3), StubObjective(), keep_rows=True)
    assert res.found
    assert res.theta2 == pytest.approx(0.029)
    assert res.theta1 == pytest.approx(0.4)
    assert all(r[1] >= 0.029 - 1e-12 for r in res.rows)


def test_search_G_matches_grid_oracle(objective):
    cfg = GSearchConfig(theta1=Range(0.25, 0.5, False, False), theta2=Range(0.001, 0.004), step=1e-3)
    res = search_G(cfg, objective)
    best = None
    for t2 in cfg.theta2.points(cfg.step)[::-1]:
        vals = []
        for t1 in cfg.theta1.points(cfg.step):
            if t1 + 2 * t2 <= 0.5 and t1 > t2:
                vals.append((objective.G(float(t1), float(t2)), float(t1)))
        pos = [v for v in vals if v[0] > 0]
        if pos:
            best = (float(t2), max(pos)[1])
            break
    assert (res.theta2, res.theta1) == (best if best else (None, None))


def test_search_G_empty_range(objective):
    with pytest.raises(ValueError):
        search_G(GSearchConfig(theta2=Range(0.0201, 0.0202), step=1e-3), objective)


def test_search_H_small_grid(objective):
    cfg = HSearchConfig(lam=Range(0.001, 0.01), theta=Range(0.01, 0.05), theta1=Range(0.47, 0.49),
                        theta2=Range(0.001, 0.003), steps=(0.001, 0.01, 0.01, 0.001), refine_rounds=2)
    res = search_H(cfg, objective)
    again = search_H(cfg, objective)
    assert res.history == again.history
    assert all(a >= b for a, b in zip(res.history, res.history[1:]))
    assert res.found and res.best.H_value > 0
    assert res.best.omega_bound == pytest.approx(res.history[-1])
    # The incumbent sits on the top lambda and theta of this grid: the bound is 1/0.01 + 1/0.05.
    assert res.best.omega_bound == pytest.approx(120.0)


def test_search_H_rejects_low_theta1(objective):
    with pytest.raises(ValueError):
        search_H(HSearchConfig(theta1=Range(0.1, 0.25)), objective)
