"""Sieve functions: closed forms against mpmath, continuation against quadrature of the delay equations."""

import math

import mpmath as mp
import numpy as np
import pytest

from sievebound.sieve_functions import (
    E_GAMMA,
    LINEAR,
    SEMI_LINEAR,
    RefinementError,
    SieveDimension,
    SieveDomainError,
    continue_from,
    eval_F1_closed,
    eval_f1_closed,
    eval_F2_closed,
    eval_f2_closed,
    handoff_residuals,
    load_or_tabulate,
    load_table,
    overlap_residual,
    read_header,
    save_table,
    tabulate,
)

mp.mp.dps = 30
EG = mp.exp(mp.euler)


def mp_F1(s):
    return 2 * mp.sqrt(EG / (mp.pi * s))


def mp_f1(s):
    return mp.sqrt(EG / (mp.pi * s)) * 2 * mp.acosh(mp.sqrt(s))


def mp_F2(s):
    return 2 * EG / s


def mp_f2(s):
    return 2 * EG * mp.log(s - 1) / s


@pytest.mark.parametrize(
    "fn, oracle, s",
    [
        (eval_F1_closed, mp_F1, 2.0),
        (eval_F1_closed, mp_F1, 0.5),
        (eval_F1_closed, mp_F1, 1e-3),
        (eval_f1_closed, mp_f1, 1.5),
        (eval_f1_closed, mp_f1, 2.0),
        (eval_f1_closed, mp_f1, 3.0),
        (eval_F2_closed, mp_F2, 1.0),
        (eval_F2_closed, mp_F2, 2.0),
        (eval_F2_closed, mp_F2, 3.0),
        (eval_f2_closed, mp_f2, 2.5),
        (eval_f2_closed, mp_f2, 3.0),
        (eval_f2_closed, mp_f2, 4.0),
    ],
)
def test_closed_forms_match_mpmath(fn, oracle, s):
    assert fn(s) == pytest.approx(float(oracle(mp.mpf(s))), rel=1e-14, abs=1e-15)


def test_closed_form_landmarks():
    assert eval_F1_closed(E_GAMMA / math.pi) == pytest.approx(2.0, rel=1e-15)
    assert eval_f1_closed(1.0) == 0.0
    assert eval_F2_closed(2.0) == pytest.approx(E_GAMMA, rel=1e-15)
    assert eval_f2_closed(2.0) == 0.0
    assert eval_f2_closed(4.0) == pytest.approx(0.5 * E_GAMMA * math.log(3), rel=1e-15)


@pytest.mark.parametrize(
    "fn, s", [(eval_F1_closed, 0.0), (eval_F1_closed, 2.01), (eval_f1_closed, 0.99), (eval_f1_closed, 3.01),
              (eval_F2_closed, 0.5), (eval_F2_closed, 3.5), (eval_f2_closed, 1.9), (eval_f2_closed, 4.1)],
)
def test_closed_form_domains(fn, s):
    with pytest.raises(SieveDomainError):
        fn(s)


def test_dimension_validation():
    assert SieveDimension(0.5, 1) == SEMI_LINEAR
    with pytest.raises(ValueError):
        SieveDimension(1.0, 1)


def _mp_F1_cont(s):
    return (mp.sqrt(2) * mp_F1(2) + mp.quad(lambda t: 0.5 / mp.sqrt(t) * mp_f1(t - 1), [2, s])) / mp.sqrt(s)


def _mp_f1_cont(s):
    inner = lambda t: 0.5 / mp.sqrt(t) * (_mp_F1_cont(t - 1) if t - 1 > 2 else mp_F1(t - 1))
    return (mp.sqrt(3) * mp_f1(3) + mp.quad(inner, [3, s])) / mp.sqrt(s)


def _mp_F2_cont(s):
    # d/ds (s F2) = f2(s - 1) = 2 e^g log(s - 2)/(s - 1), integrated from 3.
    return (2 * EG + mp.quad(lambda t: mp_f2(t - 1), [3, s])) / s


def _mp_f2_cont(s):
    return (4 * mp_f2(4) + mp.quad(lambda t: mp_F2(t - 1) if t - 1 <= 3 else _mp_F2_cont(t - 1), [4, s])) / s


@pytest.mark.parametrize("which, s, oracle", [
    ("F", 2.3, _mp_F1_cont), ("F", 3.0, _mp_F1_cont), ("f", 3.4, _mp_f1_cont),
])
def test_semi_linear_continuation_against_quadrature(semi, which, s, oracle):
    assert semi.eval(which, s) == pytest.approx(float(oracle(mp.mpf(s))), abs=1e-9)


@pytest.mark.parametrize("which, s, oracle", [
    ("F", 3.5, _mp_F2_cont), ("F", 4.0, _mp_F2_cont), ("f", 4.6, _mp_f2_cont),
])
def test_linear_continuation_against_quadrature(lin, which, s, oracle):
    assert lin.eval(which, s) == pytest.approx(float(oracle(mp.mpf(s))), abs=1e-8)


@pytest.mark.parametrize("dim", [SEMI_LINEAR, LINEAR])
def test_overlap_consistency(dim):
    assert overlap_residual(dim) < 1e-6


def test_continue_from_F2_is_constant_below_handoff():
    # f2 vanishes on [0, 2], so s F2(s) is constant on [1, 3], which is the closed form.
    s, v = continue_from(LINEAR, "F", 1.0, 3.0)
    assert np.max(np.abs(v - 2 * E_GAMMA / s)) < 1e-12


@pytest.mark.parametrize("which", ["F", "f"])
@pytest.mark.parametrize("dim", [SEMI_LINEAR, LINEAR])
def test_handoff_derivatives(tables, dim, which):
    table = tables.semi if dim is SEMI_LINEAR else tables.linear
    res = handoff_residuals(table)
    key = [k for k in res if k.startswith(which + "@")][0]
    assert res[key] < 1e-5


@pytest.mark.parametrize("name", ["semi", "lin"])
def test_shape_invariants(request, name):
    t = request.getfixturevalue(name)
    F, f = t.F_values, t.f_values
    Fd, fd = F[np.isfinite(F)], f[np.isfinite(f)]
    assert np.all(Fd > 0)
    assert np.all(fd >= 0)
    assert np.all(np.diff(Fd) <= 1e-10)
    assert np.all(np.diff(fd) >= -1e-10)
    both = np.isfinite(F) & np.isfinite(f)
    # Both sides equal 1 to machine precision once the functions have merged.
    assert np.all(f[both] <= F[both] + 1e-12)
    assert abs(F[-1] - f[-1]) < 1e-6


def test_linear_limit_is_one(lin):
    assert abs(lin.eval("F", 50.0) - 1) < 1e-6
    assert abs(lin.eval("f", 50.0) - 1) < 1e-6


def test_eval_dispatch(lin, semi):
    assert lin.eval("F", 2.0) == pytest.approx(E_GAMMA, rel=1e-15)
    assert semi.eval("f", 1.0) == 0.0
    assert lin.eval("f", 2.5) == pytest.approx(2 * E_GAMMA * math.log(1.5) / 2.5, rel=1e-15)
    assert lin.eval("F", 100.0) == lin.eval("F", 60.0)
    arr = semi.eval("F", np.array([0.5, 2.0, 2.5, 70.0]))
    assert arr.shape == (4,)
    with pytest.raises(SieveDomainError):
        semi.eval("F", 0.0)
    with pytest.raises(SieveDomainError):
        lin.eval("f", 1.99)
    with pytest.raises(ValueError):
        lin.eval("g", 3.0)


def test_grid_refinement_stability():
    coarse = tabulate(LINEAR, s_max=12.0, step=2e-4)
    fine = tabulate(LINEAR, s_max=12.0, step=1e-4)
    for w in ("F", "f"):
        a = coarse.values(w)
        b = fine.values(w)[::2]
        m = np.isfinite(a)
        assert np.max(np.abs(a[m] - b[m])) < 1e-7
    coarse = tabulate(SEMI_LINEAR, s_max=12.0, step=2e-4)
    fine = tabulate(SEMI_LINEAR, s_max=12.0, step=1e-4)
    for w in ("F", "f"):
        a = coarse.values(w)
        b = fine.values(w)[::2]
        m = np.isfinite(a)
        assert np.max(np.abs(a[m] - b[m])) < 1e-7


@pytest.mark.parametrize("kw", [dict(s_max=5.0), dict(step=2e-3), dict(step=3e-4), dict(s_max=10.00005)])
def test_tabulate_rejects_bad_grids(kw):
    with pytest.raises(ValueError):
        tabulate(LINEAR, **kw)


def test_refinement_error_carries_residual():
    err = RefinementError("too coarse", 3e-5)
    assert err.residual == 3e-5 and "3.000e-05" in str(err)


def test_cache_roundtrip(tmp_path, lin):
    path = tmp_path / "lin.bin"
    save_table(lin, path)
    assert read_header(path) == (1.0, 2, 60.0, 1e-4, lin.count)
    raw = path.read_bytes()
    assert len(raw) == 40 + 16 * lin.count
    back = load_table(path)
    assert np.array_equal(back.F_values, lin.F_values, equal_nan=True)
    assert np.array_equal(back.f_values, lin.f_values, equal_nan=True)


def test_load_or_tabulate_hits_on_exact_header(tmp_path):
    path = tmp_path / "t.bin"
    t1, hit1 = load_or_tabulate(LINEAR, 10.0, 1e-3, path)
    t2, hit2 = load_or_tabulate(LINEAR, 10.0, 1e-3, path)
    assert (hit1, hit2) == (False, True)
    assert np.array_equal(t1.F_values, t2.F_values, equal_nan=True)
    _, hit3 = load_or_tabulate(LINEAR, 11.0, 1e-3, path)
    assert hit3 is False
    assert read_header(path)[2] == 11.0
