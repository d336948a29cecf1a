"""Euler-product constants C, c1, c2, c3.

Each product is evaluated as exp(fsum(log1p(...))) over the primes up to a
cutoff X. The omitted tail behaves like exp(a * T(X)) with

    T(X) = sum_{p > X} 1/p^2 ~ int_X^oo dt / (t^2 log t) = E1(log X),

where a is the mean coefficient of 1/p^2 in the log-factor over the two
residue classes mod 4. Multiplying by that factor removes the leading part
of the truncation error, leaving a remainder of order 1/(X^2 log X) from the
1/p^3 terms and of order T(X)/log X from prime-counting irregularities.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .primes import prime_segments

DEFAULT_CUTOFF = 10**8

# Mean 1/p^2 coefficient of log(factor) over p = 1 and p = 3 (mod 4).
_TAIL_COEFF = {"C": -2.0, "C_alt": -2.0, "c1": 1.0, "c2": -1.0, "c3": 0.75}

# Frozen at cutoff 1e8, tail-corrected.
REFERENCE_VALUES = {
    "C": 1.772720315,
    "c1": 1.202502583,
    "c2": 0.6601618158,
    "c3": 1.060688679,
}


@dataclass(frozen=True)
class EulerProduct:
    name: str
    value: float
    tail_bound: float
    cutoff: int


@dataclass(frozen=True)
class ConstantsReport:
    cutoff: int
    C: EulerProduct
    c1: EulerProduct
    c2: EulerProduct
    c3: EulerProduct

    def values(self) -> dict[str, float]:
        return {k: getattr(self, k).value for k in ("C", "c1", "c2", "c3")}

    def to_dict(self) -> dict:
        out = {"cutoff": self.cutoff}
        for k in ("C", "c1", "c2", "c3"):
            d = asdict(getattr(self, k))
            out[k] = {"value": d["value"], "tail_bound": d["tail_bound"]}
        return out


def tail_sum(cutoff: float) -> float:
    """Smooth approximation to sum_{p > cutoff} 1/p^2."""
    return float(exp1(math.log(cutoff)))


def tail_bound(cutoff: float) -> float:
    """Conservative bound on |log(full product / partial product)|."""
    return 3.0 / (cutoff * math.log(cutoff))


def _check_cutoff(cutoff) -> int:
    if cutoff < 100:
        raise ValueError(f"cutoff must be >= 100, got {cutoff}")
    return int(cutoff)


@lru_cache(maxsize=8)
def _log_sums(cutoff: int) -> dict[str, float]:
    parts: dict[str, list[float]] = {k: [] for k in ("C", "C_alt", "c1", "c2", "c3")}
    for block in prime_segments(cutoff):
        p = block[block > 2].astype(np.float64)
        r = block[block > 2] % 4
        q1 = p[r == 1]
        q3 = p[(r == 3) & (p > 3)]
        q3all = p[r == 3]
        c3_log = math.fsum(np.log1p(-1.0 / q1) + np.log1p(q1**2 / (q1 - 1.0) ** 3)) + math.fsum(
            0.5 * np.log1p(-1.0 / q3all**2)
        )
        three = math.fsum(np.log1p(-(3.0 * q3 - 1.0) / (q3 - 1.0) ** 3))
        parts["C"].append(three + math.fsum(np.log1p(-1.0 / (q1 - 1.0) ** 2)))
        parts["C_alt"].append(three + math.fsum(np.log1p(-1.0 / (q1 - 2.0) ** 2)))
        parts["c1"].append(math.fsum(np.log1p(1.0 / (p[p > 3] - 2.0) ** 2)))
        parts["c2"].append(math.fsum(np.log1p(-1.0 / (p - 1.0) ** 2)))
        parts["c3"].append(c3_log)
    return {k: math.fsum(v) for k, v in parts.items()}


def _product(name: str, key: str, cutoff, prefactor: float, tail_correction: bool) -> EulerProduct:
    cutoff = _check_cutoff(cutoff)
    log_val = _log_sums(cutoff)[key]
    if tail_correction:
        log_val += _TAIL_COEFF[key] * tail_sum(cutoff)
    return EulerProduct(name, prefactor * math.exp(log_val), tail_bound(cutoff), cutoff)


def compute_C(cutoff=DEFAULT_CUTOFF, *, alt_form: bool = False, tail_correction: bool = True) -> EulerProduct:
    """C = 9/4 prod_{p>3, p=3(4)} (1 - (3p-1)/(p-1)^3) prod_{p=1(4)} (1 - 1/(p-1)^2).

    ``alt_form`` replaces (p-1)^2 by (p-2)^2 in the second product.
    """
    return _product("C", "C_alt" if alt_form else "C", cutoff, 2.25, tail_correction)


def compute_c1(cutoff=DEFAULT_CUTOFF, *, tail_correction: bool = True) -> EulerProduct:
    """c1 = prod_{p>3} (1 + 1/(p-2)^2)."""
    return _product("c1", "c1", cutoff, 1.0, tail_correction)


def compute_c2(cutoff=DEFAULT_CUTOFF, *, tail_correction: bool = True) -> EulerProduct:
    """c2 = prod_{p>2} (1 - 1/(p-1)^2)."""
    return _product("c2", "c2", cutoff, 1.0, tail_correction)


def compute_c3(cutoff=DEFAULT_CUTOFF, *, with_prime_two: bool = False, tail_correction: bool = True) -> EulerProduct:
    """c3 = 2/sqrt(pi) prod_{p=1(4)} (1-1/p)^(1/2) (1+p^2/(p-1)^3) prod_{p=3(4)} (1-1/p)^(1/2).

    The conditionally convergent product is rearranged with L(1, chi_4) = pi/4
    into prod_{p odd} r(p), r(p) = (1-1/p)(1+p^2/(p-1)^3) for p = 1 (4) and
    (1-1/p^2)^(1/2) for p = 3 (4), which converges absolutely.

    ``with_prime_two`` includes the local factor (1 - 1/2)^(1/2) at p = 2, which
    is the constant governing sum_{n <= t, p | n => p = 1 (4)} n / phi(n)^2.
    """
    pre = math.sqrt(0.5) if with_prime_two else 1.0
    return _product("c3", "c3", cutoff, pre, tail_correction)


def compute_constants(cutoff=DEFAULT_CUTOFF, *, alt_C: bool = False, c3_with_prime_two: bool = False) -> ConstantsReport:
    return ConstantsReport(
        cutoff=_check_cutoff(cutoff),
        C=compute_C(cutoff, alt_form=alt_C),
        c1=compute_c1(cutoff),
        c2=compute_c2(cutoff),
        c3=compute_c3(cutoff, with_prime_two=c3_with_prime_two),
    )

