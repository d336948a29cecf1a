"""Vector sieve: combine a semi-linear and a linear sieve on one set.

    F(sigma1, sigma2) = inf  F1(s1) F2(s2)
    f(sigma1, sigma2) = sup  f1(s1) F2(s2) + f2(s2) F1(s1) - F1(s1) F2(s2)

over s1/sigma1 + s2/sigma2 = 1, with s1 > 0, s2 >= 1 for the upper bound and
s1 >= 1, s2 >= 2 for the lower bound. The line is scanned on a uniform grid
and the best grid point is polished by a bounded scalar search.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .sieve_functions import LINEAR, SEMI_LINEAR, SieveFunctionTable, load_or_tabulate, tabulate

SCAN_START = 1e-4
SCAN_STEP = 1e-4


class FeasibilityError(ValueError):
    pass


@dataclass(frozen=True)
class SieveTables:
    semi: SieveFunctionTable
    linear: SieveFunctionTable


@dataclass(frozen=True)
class CombinerResult:
    mode: str
    sigma1: float
    sigma2: float
    value: float
    s1: float
    s2: float


@lru_cache(maxsize=4)
def get_tables(s_max: float = 60.0, step: float = 1e-4, cache_dir: str | None = None) -> SieveTables:
    """Both tables, read from or written to a cache directory when one is configured."""
    cache_dir = cache_dir or os.environ.get("SIEVEBOUND_CACHE_DIR")
    if cache_dir is None:
        return SieveTables(tabulate(SEMI_LINEAR, s_max, step), tabulate(LINEAR, s_max, step))
    from .sieve_functions import cache_path_for

    semi, _ = load_or_tabulate(SEMI_LINEAR, s_max, step, cache_path_for(SEMI_LINEAR, s_max, step, cache_dir))
    lin, _ = load_or_tabulate(LINEAR, s_max, step, cache_path_for(LINEAR, s_max, step, cache_dir))
    return SieveTables(semi, lin)


def upper_range(sigma1: float, sigma2: float) -> tuple[float, float]:
    if not (sigma1 > 0 and sigma2 > 1):
        raise FeasibilityError(f"upper combination needs sigma1 > 0 and sigma2 > 1, got ({sigma1}, {sigma2})")
    return 0.0, sigma1 * (1.0 - 1.0 / sigma2)


def lower_range(sigma1: float, sigma2: float) -> tuple[float, float]:
    if not (sigma1 > 0 and sigma2 > 0 and 1.0 / sigma1 + 2.0 / sigma2 <= 1.0):
        raise FeasibilityError(f"lower combination needs 1/sigma1 + 2/sigma2 <= 1, got ({sigma1}, {sigma2})")
    return 1.0, sigma1 * (1.0 - 2.0 / sigma2)


def upper_objective(tables: SieveTables, sigma1: float, sigma2: float, s1):
    s1 = np.asarray(s1, dtype=float)
    s2 = np.maximum(sigma2 * (1.0 - s1 / sigma1), 1.0)
    return tables.semi.eval("F", s1) * tables.linear.eval("F", s2)


def lower_objective(tables: SieveTables, sigma1: float, sigma2: float, s1):
    s1 = np.asarray(s1, dtype=float)
    s2 = np.maximum(sigma2 * (1.0 - s1 / sigma1), 2.0)
    F1 = tables.semi.eval("F", s1)
    f1 = tables.semi.eval("f", s1)
    F2 = tables.linear.eval("F", s2)
    f2 = tables.linear.eval("f", s2)
    return f1 * F2 + f2 * F1 - F1 * F2


def _scan_points(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(np.floor((hi - lo) / step + 1e-9))
    pts = lo + step * np.arange(n + 1)
    if hi - pts[-1] > 1e-12:
        pts = np.append(pts, hi)
    return pts


def _optimize(obj, lo: float, hi: float, step: float, sign: float) -> tuple[float, float]:
    """Extremize sign * obj on [lo, hi]; returns (s1, value). Ties go to the smallest s1."""
    x = _scan_points(lo, hi, step)
    y = sign * obj(x)
    k = int(np.argmin(y))
    best_x, best_y = float(x[k]), float(y[k])
    a = float(x[max(k - 1, 0)])
    b = float(x[min(k + 1, len(x) - 1)])
    if b > a:
        res = minimize_scalar(lambda t: sign * float(obj(t)), bounds=(a, b), method="bounded",
                              options={"xatol": 1e-10})
        if res.fun < best_y - 1e-14:
            best_x, best_y = float(res.x), float(res.fun)
    return best_x, sign * best_y


def F_combined(tables: SieveTables, sigma1: float, sigma2: float, step: float = SCAN_STEP) -> CombinerResult:
    _, hi = upper_range(sigma1, sigma2)
    lo = min(SCAN_START, hi)
    s1, v = _optimize(lambda t: upper_objective(tables, sigma1, sigma2, t), lo, hi, step, 1.0)
    return CombinerResult("upper", sigma1, sigma2, v, s1, sigma2 * (1.0 - s1 / sigma1))


def f_combined(tables: SieveTables, sigma1: float, sigma2: float, step: float = SCAN_STEP) -> CombinerResult:
    lo, hi = lower_range(sigma1, sigma2)
    s1, v = _optimize(lambda t: lower_objective(tables, sigma1, sigma2, t), lo, hi, step, -1.0)
    return CombinerResult("lower", sigma1, sigma2, v, s1, sigma2 * (1.0 - s1 / sigma1))


def combine(tables: SieveTables, mode: str, sigma1: float, sigma2: float) -> CombinerResult:
    if mode == "upper":
        return F_combined(tables, sigma1, sigma2)
    if mode == "lower":
        return f_combined(tables, sigma1, sigma2)
    raise ValueError(f"mode must be 'upper' or 'lower', got {mode!r}")
