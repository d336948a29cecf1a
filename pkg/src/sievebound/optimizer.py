"""Objectives G and H and the parameter searches built on them.

With sigma_i = 1/(2 theta_i) and K = C e^{-3 gamma/2} / (4 theta1^{1/2} theta2),

    main      = K f(sigma1, sigma2)
    switching = 2 c1 c2^2 c3 C(theta1) / (theta2 min(theta1, 1/2 - theta2))
    weighted  = lambda K I(theta, theta1, theta2)

G = main - switching and H = G - weighted. A point with H > 0 bounds the
number of prime factors of p + 2 by 1/lambda + 1/theta.

H is linear in lambda, and every H > 0 point has G > 0 because the weighted
term is nonnegative. The H search uses both facts: (theta1, theta2) pairs
with G <= 0 are dropped before any I integral is computed, and for each
surviving (theta, theta1, theta2) all lambdas are handled at once.
"""

from __future__ import annotations

import csv
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache

import numpy as np

from .combiner import FeasibilityError, SieveTables, f_combined, get_tables
from .constants import REFERENCE_VALUES
from .integrals import integral_C_cached, integral_I, integral_I_profile
from .sieve_functions import EULER_GAMMA


@dataclass(frozen=True)
class ObjectiveConstants:
    C: float = REFERENCE_VALUES["C"]
    c1: float = REFERENCE_VALUES["c1"]
    c2: float = REFERENCE_VALUES["c2"]
    c3: float = REFERENCE_VALUES["c3"]


@dataclass(frozen=True)
class SearchParams:
    lam: float
    theta: float
    theta1: float
    theta2: float

    def validate(self) -> None:
        if not 0.25 < self.theta1 < 0.5:
            raise ValueError(f"theta1 must lie in (1/4, 1/2), got {self.theta1}")
        if not 0 < self.theta2 < self.theta1:
            raise ValueError(f"need 0 < theta2 < theta1, got theta2={self.theta2}")
        if not self.theta2 < self.theta < 0.5:
            raise ValueError(f"need theta2 < theta < 1/2, got theta={self.theta}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")


def omega_bound(lam: float, theta: float) -> float:
    return (1.0 / lam if lam > 0 else math.inf) + 1.0 / theta


def integer_below(x: float) -> int | None:
    """Largest integer strictly below x."""
    if not math.isfinite(x):
        return None
    return math.ceil(x) - 1


@dataclass(frozen=True)
class GReport:
    theta1: float
    theta2: float
    term_main: float
    term_switching: float
    f_value: float

    @property
    def G_value(self) -> float:
        return self.term_main - self.term_switching


@dataclass(frozen=True)
class ObjectiveReport:
    params: SearchParams
    term_main: float
    term_switching: float
    term_weighted: float
    I_value: float
    H_value: float
    omega_bound: float
    omega_integer_bound: int | None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {"lambda": self.params.lam, "theta": self.params.theta,
                       "theta1": self.params.theta1, "theta2": self.params.theta2}
        return d


@dataclass
class Objective:
    """Evaluates the objective terms against fixed tables and constants."""

    tables: SieveTables
    constants: ObjectiveConstants = field(default_factory=ObjectiveConstants)

    def prefactor(self, theta1: float, theta2: float) -> float:
        return self.constants.C * math.exp(-1.5 * EULER_GAMMA) / (4.0 * math.sqrt(theta1) * theta2)

    def switching(self, theta1: float, theta2: float) -> float:
        k = self.constants
        return 2.0 * k.c1 * k.c2**2 * k.c3 * integral_C_cached(theta1) / (theta2 * min(theta1, 0.5 - theta2))

    def g_terms(self, theta1: float, theta2: float) -> GReport:
        """Raises FeasibilityError when 1/sigma1 + 2/sigma2 > 1, i.e. theta1 + 2 theta2 > 1/2."""
        if not 0.25 < theta1 < 0.5:
            raise ValueError(f"theta1 must lie in (1/4, 1/2), got {theta1}")
        if not 0 < theta2 < theta1:
            raise ValueError(f"need 0 < theta2 < theta1, got theta2={theta2}")
        f = f_combined(self.tables, 1.0 / (2.0 * theta1), 1.0 / (2.0 * theta2)).value
        return GReport(theta1, theta2, self.prefactor(theta1, theta2) * f, self.switching(theta1, theta2), f)

    def G(self, theta1: float, theta2: float) -> float:
        return self.g_terms(theta1, theta2).G_value

    def H(self, params: SearchParams, I_value: float | None = None) -> ObjectiveReport:
        params.validate()
        g = self.g_terms(params.theta1, params.theta2)
        if I_value is None:
            I_value = integral_I(params.theta, params.theta1, params.theta2, self.tables).value
        weighted = params.lam * self.prefactor(params.theta1, params.theta2) * I_value
        H = g.term_main - g.term_switching - weighted
        om = omega_bound(params.lam, params.theta)
        return ObjectiveReport(params, g.term_main, g.term_switching, weighted, I_value, H, om, integer_below(om))


@lru_cache(maxsize=4)
def default_objective(s_max: float = 60.0, step: float = 1e-4, cache_dir: str | None = None) -> Objective:
    return Objective(get_tables(s_max, step, cache_dir))


def eval_G(theta1: float, theta2: float, objective: Objective | None = None) -> float:
    return (objective or default_objective()).G(theta1, theta2)


def eval_H(params: SearchParams, objective: Objective | None = None) -> ObjectiveReport:
    return (objective or default_objective()).H(params)


# Parameter ranges and grids


@dataclass(frozen=True)
class Range:
    lo: float
    hi: float
    include_lo: bool = True
    include_hi: bool = True

    def points(self, step: float) -> np.ndarray:
        """Multiples of step inside the range, in increasing order."""
        if step <= 0:
            raise ValueError("step must be positive")
        k_lo = math.ceil(self.lo / step - 1e-9)
        k_hi = math.floor(self.hi / step + 1e-9)
        ks = np.arange(k_lo, k_hi + 1)
        pts = np.round(ks * step, 12)
        keep = np.ones(pts.size, dtype=bool)
        if not self.include_lo:
            keep &= pts > self.lo + 1e-12
        if not self.include_hi:
            keep &= pts < self.hi - 1e-12
        return pts[keep]

    def __str__(self) -> str:
        return f"{'[' if self.include_lo else '('}{self.lo}, {self.hi}{']' if self.include_hi else ')'}"


_RANGE_RE = re.compile(r"^\s*([\[(])\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*([\])])\s*$")


def parse_range(text: str) -> Range:
    m = _RANGE_RE.match(text)
    if not m:
        raise ValueError(f"bad range {text!r}; expected e.g. (0.25, 0.5) or [0.02, 0.024]")
    lo, hi = float(m.group(2)), float(m.group(3))
    if hi < lo:
        raise ValueError(f"empty range {text!r}")
    return Range(lo, hi, m.group(1) == "[", m.group(4) == "]")


@dataclass(frozen=True)
class GSearchConfig:
    theta1: Range = Range(0.25, 0.5, False, False)
    theta2: Range = Range(0.0, 0.05, False, False)
    step: float = 1e-4
    workers: int = 1


@dataclass(frozen=True)
class HSearchConfig:
    lam: Range = Range(0.05, 0.5)
    theta: Range = Range(0.05, 0.45)
    theta1: Range = Range(0.25, 0.5, False, False)
    theta2: Range = Range(0.001, 0.05, False, False)
    steps: tuple[float, float, float, float] = (0.01, 0.01, 0.001, 0.001)
    refine_rounds: int = 3
    workers: int = 1


def read_config(path) -> dict[str, str]:
    """Parse a ``key = value`` file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k] = v
    return out


def g_config_from(values: dict[str, str]) -> GSearchConfig:
    cfg = GSearchConfig()
    known = {"theta1", "theta2", "step", "workers"}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown G config keys: {sorted(unknown)}")
    kw = {}
    for k in ("theta1", "theta2"):
        if k in values:
            kw[k] = parse_range(values[k])
    if "step" in values:
        kw["step"] = float(values["step"])
    if "workers" in values:
        kw["workers"] = int(values["workers"])
    return replace(cfg, **kw)


def h_config_from(values: dict[str, str]) -> HSearchConfig:
    cfg = HSearchConfig()
    known = {"lambda", "theta", "theta1", "theta2", "steps", "refine_rounds", "workers"}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown H config keys: {sorted(unknown)}")
    kw = {}
    for key, attr in (("lambda", "lam"), ("theta", "theta"), ("theta1", "theta1"), ("theta2", "theta2")):
        if key in values:
            kw[attr] = parse_range(values[key])
    if "steps" in values:
        steps = tuple(float(s) for s in values["steps"].replace(",", " ").split())
        if len(steps) != 4:
            raise ValueError("steps needs four values: lambda theta theta1 theta2")
        kw["steps"] = steps
    if "refine_rounds" in values:
        kw["refine_rounds"] = int(values["refine_rounds"])
    if "workers" in values:
        kw["workers"] = int(values["workers"])
    return replace(cfg, **kw)


# G search


@dataclass(frozen=True)
class GSearchResult:
    found: bool
    theta2: float | None
    theta1: float | None
    G_value: float | None
    evaluations: int
    rows: list = field(default_factory=list, repr=False, compare=False)


def _g_row(objective: Objective, theta1: float, theta2: float) -> tuple[float, float, float, float, float]:
    try:
        g = objective.g_terms(theta1, theta2)
    except FeasibilityError:
        return theta1, theta2, math.nan, math.nan, -math.inf
    return theta1, theta2, g.term_main, g.term_switching, g.G_value


def _g_column(args):
    theta2, theta1s, tables_key = args
    obj = default_objective(*tables_key)
    return [_g_row(obj, float(t1), theta2) for t1 in theta1s]


def search_G(
    config: GSearchConfig = GSearchConfig(),
    objective: Objective | None = None,
    keep_rows: bool = False,
    tables_key: tuple = (60.0, 1e-4, None),
) -> GSearchResult:
    """Largest grid theta2 admitting some grid theta1 with G > 0, scanning theta2 downward.

    Returns that theta2 with its G-maximizing theta1 (smallest theta1 on ties).
    Infeasible cells rank as -inf and are never reported as values.
    """
    objective = objective or default_objective(*tables_key)
    t1s = config.theta1.points(config.step)
    t2s = config.theta2.points(config.step)[::-1]
    if t1s.size == 0 or t2s.size == 0:
        raise ValueError("empty search range")
    rows: list = []
    evals = 0
    pool = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for t2 in t2s:
            t2 = float(t2)
            cand = t1s[(t1s > t2) & (t1s + 2 * t2 <= 0.5 + 1e-12)]
            if pool is None:
                col = [_g_row(objective, float(t1), t2) for t1 in cand]
            else:
                chunks = np.array_split(cand, config.workers * 4)
                col = [r for part in pool.map(_g_column, [(t2, c, tables_key) for c in chunks if c.size]) for r in part]
            evals += len(col)
            if keep_rows:
                rows.extend(col)
            best = None
            for r in col:
                if r[4] > 0 and (best is None or r[4] > best[4]):
                    best = r
            if best is not None:
                return GSearchResult(True, t2, best[0], best[4], evals, rows)
    finally:
        if pool is not None:
            pool.shutdown()
    return GSearchResult(False, None, None, None, evals, rows)


# H search


@dataclass(frozen=True)
class HSearchResult:
    found: bool
    best: ObjectiveReport | None
    history: list  # omega bound of the incumbent after the coarse scan and each refinement round
    evaluations: int
    rows: list = field(default_factory=list, repr=False, compare=False)


def _better(cand: tuple, inc: tuple | None) -> bool:
    """Rank by omega bound, then lexicographically by (lambda, theta, theta1, theta2)."""
    if inc is None:
        return True
    return (cand[0], cand[1:]) < (inc[0], inc[1:])


def _scan_cells(objective, lams, thetas, theta1s, theta2s, keep_rows, rows):
    """Best (omega, lam, theta, theta1, theta2) with H > 0 over a product grid."""
    inc = None
    evals = 0
    for t1 in theta1s:
        for t2 in theta2s:
            t1, t2 = float(t1), float(t2)
            if not (t2 < t1 and t1 + 2 * t2 <= 0.5 + 1e-12):
                continue
            try:
                g = objective.g_terms(t1, t2)
            except FeasibilityError:
                continue
            evals += 1
            if g.G_value <= 0:
                continue
            th = thetas[(thetas > t2) & (thetas < 0.5 - t2)]
            if th.size == 0:
                continue
            I = integral_I_profile(th, t1, t2, objective.tables)
            K = objective.prefactor(t1, t2)
            # H(lam) = G - lam K I > 0  <=>  lam < G / (K I)
            H = g.G_value - np.outer(I, lams) * K
            evals += H.size
            if keep_rows:
                for i, thv in enumerate(th):
                    for j, lv in enumerate(lams):
                        rows.append((float(lv), float(thv), t1, t2, g.term_main, g.term_switching,
                                     float(lams[j] * K * I[i]), float(H[i, j]), omega_bound(float(lv), float(thv))))
            ii, jj = np.nonzero(H > 0)
            for i, j in zip(ii, jj):
                cand = (omega_bound(float(lams[j]), float(th[i])), float(lams[j]), float(th[i]), t1, t2)
                if _better(cand, inc):
                    inc = cand
    return inc, evals


def _local(center: float, step: float, rng: Range) -> np.ndarray:
    pts = np.round(center + step * np.arange(-2, 3), 12)
    lo_ok = pts >= rng.lo if rng.include_lo else pts > rng.lo
    hi_ok = pts <= rng.hi if rng.include_hi else pts < rng.hi
    return pts[lo_ok & hi_ok]


def search_H(
    config: HSearchConfig = HSearchConfig(), objective: Objective | None = None, keep_rows: bool = False
) -> HSearchResult:
    """Minimize 1/lambda + 1/theta subject to H > 0: coarse grid, then local rounds at halved steps."""
    objective = objective or default_objective()
    if config.theta1.hi <= 0.25:
        raise ValueError("theta1 range lies outside (1/4, 1/2)")
    steps = list(config.steps)
    axes = [config.lam.points(steps[0]), config.theta.points(steps[1]),
            config.theta1.points(steps[2]), config.theta2.points(steps[3])]
    axes[2] = axes[2][(axes[2] > 0.25) & (axes[2] < 0.5)]
    if any(a.size == 0 for a in axes):
        raise ValueError("empty search grid")
    rows: list = []
    inc, evals = _scan_cells(objective, axes[0], axes[1], axes[2], axes[3], keep_rows, rows)
    history = [inc[0] if inc else math.inf]
    ranges = (config.lam, config.theta, config.theta1, config.theta2)
    for _ in range(config.refine_rounds):
        if inc is None:
            break
        steps = [s / 2 for s in steps]
        local = [_local(c, s, r) for c, s, r in zip(inc[1:], steps, ranges)]
        local[2] = local[2][(local[2] > 0.25) & (local[2] < 0.5)]
        cand, n = _scan_cells(objective, *local, keep_rows, rows)
        evals += n
        if cand is not None and _better(cand, inc):
            inc = cand
        history.append(inc[0])
    if inc is None:
        return HSearchResult(False, None, history, evals, rows)
    best = objective.H(SearchParams(*inc[1:]))
    return HSearchResult(best.H_value > 0, best, history, evals, rows)


G_COLUMNS = ("theta1", "theta2", "term_main", "term_switching", "G")
H_COLUMNS = ("lambda", "theta", "theta1", "theta2", "term_main", "term_switching", "term_weighted", "H", "omega_bound")


def write_csv(path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for r in rows:
            w.writerow([f"{v:.10g}" for v in r])
