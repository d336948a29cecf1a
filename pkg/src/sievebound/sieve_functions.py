"""Upper and lower beta-sieve functions for the semi-linear and linear sieve.

F and f are given in closed form on an initial range and continued beyond it
by the delay equations

    d/ds (s^k F(s)) = k s^(k-1) f(s - 1),
    d/ds (s^k f(s)) = k s^(k-1) F(s - 1),

marched on a uniform grid in the variable u = s^k F. The right-hand side
does not involve u itself, so each fourth-order Runge-Kutta step reduces to
Simpson's rule on one panel with the retarded value at the panel midpoint
read from a monotone cubic (PCHIP) interpolant of the already-filled table.
Panels whose retarded argument sits next to a singular point of a closed
form (the pole of F at 0 for kappa = 1/2, the square-root onset of f at 1)
are integrated adaptively instead.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import PchipInterpolator

EULER_GAMMA = 0.5772156649015329
E_GAMMA = math.exp(EULER_GAMMA)

OVERLAP_TOL = 1e-6
SINGULAR_ZONE = 0.05


class SieveDomainError(ValueError):
    """Argument outside the domain of a sieve function."""


class RefinementError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class SieveDimension:
    kappa: float
    beta: int

    def __post_init__(self):
        if (self.kappa, self.beta) not in ((0.5, 1), (1.0, 2)):
            raise ValueError(f"unsupported sieve dimension kappa={self.kappa}, beta={self.beta}")

    @property
    def name(self) -> str:
        return "semi-linear" if self.kappa == 0.5 else "linear"


SEMI_LINEAR = SieveDimension(0.5, 1)
LINEAR = SieveDimension(1.0, 2)


def dimension_for(kappa: float) -> SieveDimension:
    if kappa == 0.5:
        return SEMI_LINEAR
    if kappa == 1:
        return LINEAR
    raise ValueError(f"kappa must be 1/2 or 1, got {kappa}")


# Closed forms. The underscored versions skip the range check and accept arrays.

def _F1(s):
    return 2.0 * np.sqrt(E_GAMMA / (np.pi * s))


def _f1(s):
    return np.sqrt(E_GAMMA / (np.pi * s)) * np.log(
        1.0 + 2.0 * (s - 1.0) + 2.0 * np.sqrt(np.maximum(s * (s - 1.0), 0.0))
    )


def _F2(s):
    return 2.0 * E_GAMMA / s


def _f2(s):
    return 2.0 * E_GAMMA * np.log(s - 1.0) / s


def _checked(fn, lo, hi, lo_open, label):
    def wrapper(s):
        x = np.asarray(s, dtype=float)
        bad = (x <= lo) if lo_open else (x < lo)
        if np.any(bad | (x > hi)) or np.any(np.isnan(x)):
            bracket = "(" if lo_open else "["
            raise SieveDomainError(f"{label} closed form needs s in {bracket}{lo}, {hi}], got {s}")
        out = fn(x)
        return float(out) if out.ndim == 0 else out

    wrapper.__name__ = f"eval_{label}_closed"
    return wrapper


eval_F1_closed = _checked(_F1, 0.0, 2.0, True, "F1")
eval_f1_closed = _checked(_f1, 1.0, 3.0, False, "f1")
eval_F2_closed = _checked(_F2, 1.0, 3.0, False, "F2")
eval_f2_closed = _checked(_f2, 2.0, 4.0, False, "f2")


@dataclass(frozen=True)
class _ClosedForm:
    fn: Callable
    lo: float  # domain lower limit
    hi: float  # end of closed-form range, start of the continuation
    lo_open: bool
    singular_at: float | None  # where the closed form is not smooth


_CLOSED = {
    (0.5, "F"): _ClosedForm(_F1, 0.0, 2.0, True, 0.0),
    (0.5, "f"): _ClosedForm(_f1, 1.0, 3.0, False, 1.0),
    (1.0, "F"): _ClosedForm(_F2, 1.0, 3.0, False, None),
    (1.0, "f"): _ClosedForm(_f2, 2.0, 4.0, False, None),
}


def closed_form(dimension: SieveDimension, which: str) -> _ClosedForm:
    return _CLOSED[(dimension.kappa, _which(which))]


def _which(which: str) -> str:
    if which not in ("F", "f"):
        raise ValueError(f"which must be 'F' or 'f', got {which!r}")
    return which


def _other(which: str) -> str:
    return "f" if which == "F" else "F"


@dataclass(frozen=True, eq=False)
class SieveFunctionTable:
    """F and f of one sieve dimension on the grid s_i = i * step, 0 <= s_i <= s_max.

    Entries below a function's domain are NaN. Tables are immutable and
    evaluation is pure.
    """

    dimension: SieveDimension
    s_max: float
    step: float
    F_values: np.ndarray
    f_values: np.ndarray

    @property
    def count(self) -> int:
        return len(self.F_values)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.count) * self.step

    @property
    def s_min_F(self) -> float:
        return closed_form(self.dimension, "F").lo

    @property
    def s_min_f(self) -> float:
        return closed_form(self.dimension, "f").lo

    def values(self, which: str) -> np.ndarray:
        return self.F_values if _which(which) == "F" else self.f_values

    def index(self, s: float) -> int:
        return int(round(s / self.step))

    @cached_property
    def _interp(self) -> dict[str, PchipInterpolator]:
        out = {}
        for w in ("F", "f"):
            i0 = self.index(closed_form(self.dimension, w).hi)
            vals = self.values(w)[i0:]
            out[w] = PchipInterpolator(self.grid[i0:], vals, extrapolate=False)
        return out

    def eval(self, which: str, s):
        """Closed form on its range, monotone cubic interpolation beyond, flat past s_max."""
        cf = closed_form(self.dimension, which)
        x = np.asarray(s, dtype=float)
        bad = (x <= cf.lo) if cf.lo_open else (x < cf.lo)
        if np.any(bad) or np.any(np.isnan(x)):
            raise SieveDomainError(
                f"{which} for kappa={self.dimension.kappa} is defined for s "
                f"{'>' if cf.lo_open else '>='} {cf.lo}; got {s}"
            )
        out = np.empty_like(x)
        m = x <= cf.hi
        out[m] = cf.fn(x[m])
        rest = ~m
        if np.any(rest):
            out[rest] = self._interp[which](np.minimum(x[rest], self.s_max))
        return float(out) if out.ndim == 0 else out


def evaluate(table: SieveFunctionTable, which: str, s):
    return table.eval(which, s)


def _partner_closed(dimension: SieveDimension, which: str) -> Callable:
    """Closed form of ``which`` extended by zero below beta for the lower function.

    The lower sieve function vanishes for s <= beta, which is what the delay
    equations see when they are started at the bottom of the closed ranges.
    """
    cf = closed_form(dimension, which)
    if which == "F":
        return cf.fn
    beta = float(dimension.beta)

    def g(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > beta, cf.fn(np.maximum(x, beta)), 0.0)

    return g


def _advance(
    values: np.ndarray,
    i0: int,
    i1: int,
    step: float,
    kappa: float,
    partner: Callable,
    singular_at: float | None = None,
) -> None:
    """Fill values[i0+1 : i1+1] from values[i0] by one RK4 (Simpson) step per panel."""
    if i1 <= i0:
        return
    left = np.arange(i0, i1) * step
    right = left + step
    mid = left + 0.5 * step

    def g(t):
        return kappa * t ** (kappa - 1.0) * partner(t - 1.0)

    with np.errstate(divide="ignore", invalid="ignore"):
        incr = step / 6.0 * (g(left) + 4.0 * g(mid) + g(right))
    if singular_at is not None:
        near = np.flatnonzero((left - 1.0 >= singular_at - 1e-12) & (left - 1.0 < singular_at + SINGULAR_ZONE))
        for k in near:
            a, b = left[k], right[k]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", IntegrationWarning)
                incr[k] = quad(lambda t: float(g(np.asarray(t))), a, b, epsabs=1e-15, epsrel=1e-12, limit=200)[0]
    s0 = i0 * step
    u0 = s0**kappa * values[i0]
    u = u0 + np.cumsum(incr)
    values[i0 + 1 : i1 + 1] = u / (np.arange(i0 + 1, i1 + 1) * step) ** kappa


def continue_from(
    dimension: SieveDimension, which: str, start: float, end: float, step: float = 1e-4
) -> tuple[np.ndarray, np.ndarray]:
    """March the delay equation for ``which`` from ``start`` using closed-form forcing only.

    The initial value is the closed form at ``start`` (zero for f at beta), and
    every retarded argument must fall inside the partner's closed range. Used to
    cross-check the closed forms against the differential system.
    """
    which = _which(which)
    cf = closed_form(dimension, which)
    pcf = closed_form(dimension, _other(which))
    if end - 1.0 > pcf.hi + 1e-12:
        raise ValueError("retarded argument leaves the partner's closed-form range")
    i0 = int(round(start / step))
    i1 = int(round(end / step))
    vals = np.full(i1 + 1, np.nan)
    if which == "f" and abs(start - dimension.beta) < 1e-12:
        vals[i0] = 0.0
    else:
        vals[i0] = float(cf.fn(np.asarray(start)))
    if not np.isfinite(vals[i0]):
        raise ValueError(f"cannot start {which} at s={start}")
    _advance(vals, i0, i1, step, dimension.kappa, _partner_closed(dimension, _other(which)), pcf.singular_at)
    s = np.arange(i0, i1 + 1) * step
    return s, vals[i0:]


def overlap_residual(dimension: SieveDimension, step: float = 1e-4) -> float:
    """Max |continuation - closed form| for f on (beta, beta + 2] started at beta."""
    cf = closed_form(dimension, "f")
    s, v = continue_from(dimension, "f", cf.lo, cf.hi, step)
    return float(np.max(np.abs(v - cf.fn(s))))



def handoff_residuals(table: SieveFunctionTable, h: float = 1e-5) -> dict[str, float]:
    """|right derivative of the continuation - derivative of the closed form| at each handoff.

    The continuation's right derivative is read off the delay equation,
    F'(s) = (kappa/s) (f(s-1) - F(s)), with both values taken from the table.
    A grid difference quotient is unsuitable here: next to s = 2 the forcing
    f1(s-1) has a square-root onset, so the second derivative is unbounded.
    The closed form is analytic across the handoff and gets a central difference.
    """
    out = {}
    k = table.dimension.kappa
    for w in ("F", "f"):
        cf = closed_form(table.dimension, w)
        s = cf.hi
        i = table.index(s)
        partner = table.values(_other(w))[table.index(s - 1.0)]
        right = k / s * (partner - table.values(w)[i])
        left = float((cf.fn(np.asarray(s + h)) - cf.fn(np.asarray(s - h))) / (2.0 * h))
        out[f"{w}@{s:g}"] = float(abs(right - left))
    return out

def tabulate(
    dimension: SieveDimension, s_max: float = 60.0, step: float = 1e-4, *, check: bool = True
) -> SieveFunctionTable:
    """Tabulate F and f for one dimension on [0, s_max]."""
    if s_max < 10:
        raise ValueError("s_max must be >= 10")
    if not 0 < step <= 1e-3:
        raise ValueError("step must lie in (0, 1e-3]")
    per_unit = int(round(1.0 / step))
    if abs(per_unit * step - 1.0) > 1e-9:
        raise ValueError("1/step must be an integer so the delay lands on grid points")
    n = int(round(s_max / step))
    if abs(n * step - s_max) > 1e-9 * s_max:
        raise ValueError("s_max must be a multiple of step")
    if check:
        res = overlap_residual(dimension, step)
        if res > OVERLAP_TOL:
            raise RefinementError(f"step {step} too coarse for overlap consistency", res)

    kappa = dimension.kappa
    s = np.arange(n + 1) * step
    tables = {}
    frontier = {}
    for w in ("F", "f"):
        cf = closed_form(dimension, w)
        vals = np.full(n + 1, np.nan)
        m = (s > cf.lo) if cf.lo_open else (s >= cf.lo - 1e-12)
        m &= s <= cf.hi + 1e-12
        vals[m] = cf.fn(s[m])
        tables[w] = vals
        frontier[w] = int(round(cf.hi / step))

    def partner_eval(w: str, lo_idx: int, hi_idx: int) -> Callable:
        """Evaluator for function w on grid range [lo_idx, hi_idx]."""
        cf = closed_form(dimension, w)
        c_idx = int(round(cf.hi / step))
        a = max(lo_idx - 4, c_idx)
        interp = None
        if hi_idx > c_idx:
            interp = PchipInterpolator(s[a : hi_idx + 1], tables[w][a : hi_idx + 1])

        def g(x):
            x = np.asarray(x, dtype=float)
            out = np.empty_like(x)
            m = x <= cf.hi
            out[m] = cf.fn(x[m])
            if interp is not None and np.any(~m):
                out[~m] = interp(x[~m])
            return out

        return g

    while frontier["F"] < n or frontier["f"] < n:
        for w in ("F", "f"):
            i0 = frontier[w]
            if i0 >= n:
                continue
            i1 = min(i0 + per_unit, n)
            o = _other(w)
            lo_idx, hi_idx = i0 - per_unit, i1 - per_unit
            if frontier[o] < hi_idx:
                raise RuntimeError("partner table not yet filled far enough")
            _advance(
                tables[w], i0, i1, step, kappa, partner_eval(o, lo_idx, hi_idx),
                closed_form(dimension, o).singular_at,
            )
            frontier[w] = i1

    return SieveFunctionTable(dimension, float(n * step), step, tables["F"], tables["f"])


# Binary cache: header of five little-endian 8-byte fields
#   kappa (float64), beta (int64), s_max (float64), step (float64), count (int64)
# followed by count float64 values of F and then count float64 values of f.
_HEADER = struct.Struct("<dqddq")


def save_table(table: SieveFunctionTable, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(table.dimension.kappa, table.dimension.beta, table.s_max, table.step, table.count))
        fh.write(np.asarray(table.F_values, dtype="<f8").tobytes())
        fh.write(np.asarray(table.f_values, dtype="<f8").tobytes())
    tmp.replace(path)


def read_header(path) -> tuple[float, int, float, float, int]:
    with open(path, "rb") as fh:
        return _HEADER.unpack(fh.read(_HEADER.size))


def load_table(path) -> SieveFunctionTable:
    raw = Path(path).read_bytes()
    kappa, beta, s_max, step, count = _HEADER.unpack_from(raw)
    expected = _HEADER.size + 16 * count
    if len(raw) != expected:
        raise ValueError(f"corrupt table cache {path}: {len(raw)} bytes, expected {expected}")
    arr = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).astype(np.float64)
    return SieveFunctionTable(SieveDimension(kappa, beta), s_max, step, arr[:count], arr[count:])


def default_cache_dir() -> Path:
    import os

    env = os.environ.get("SIEVEBOUND_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "sievebound"


def cache_path_for(dimension: SieveDimension, s_max: float, step: float, directory=None) -> Path:
    directory = Path(directory) if directory is not None else default_cache_dir()
    return directory / f"sieve_k{dimension.kappa:g}_smax{s_max:g}_h{step:g}.bin"


def load_or_tabulate(
    dimension: SieveDimension, s_max: float = 60.0, step: float = 1e-4, cache=None
) -> tuple[SieveFunctionTable, bool]:
    """Reuse a cache file when its header matches exactly; returns (table, hit)."""
    path = Path(cache) if cache is not None else cache_path_for(dimension, s_max, step)
    if path.exists():
        kappa, beta, cs_max, cstep, count = read_header(path)
        if (kappa, beta, cs_max, cstep) == (dimension.kappa, dimension.beta, float(s_max), float(step)):
            return load_table(path), True
    table = tabulate(dimension, s_max, step)
    save_table(table, path)
    return table, False
