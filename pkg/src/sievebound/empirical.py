"""Exact enumeration at desk scale.

The sifted set here is A = {p - 1 : p <= x - 2, p = 3 (mod 8), p + 2 free of
primes below x^theta2}, sifted by Q = {primes = 3 (mod 4)}. For n in A let
q(n) be its least prime factor in Q (None if there is none). Then

    S(A, Q, z)        = #{n : q(n) >= z or q(n) is None}
    S(A_p1, Q, p1)    = #{n : q(n) = p1}

so every sifting quantity is a count over the single array of q(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .primes import (
    DEFAULT_SEGMENT,
    FactorSieve,
    build_factor_sieve,
    factor_segment,
    prime_array,
    prime_segments,
    simple_sieve,
    trial_factorize,
)

NO_Q_FACTOR = 0


def is_sum_two_pos_squares(n: int) -> bool:
    """True iff n = a^2 + b^2 with a, b >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if any(q % 4 == 3 and e % 2 for q, e in trial_factorize(n)):
        return False
    r = math.isqrt(n)
    if r * r != n:
        return True
    # n is a square: the criterion also accepts n = r^2 + 0^2, so look for a
    # representation with both parts positive.
    for a in range(1, math.isqrt(n - 1) + 1):
        b2 = n - a * a
        b = math.isqrt(b2)
        if b >= 1 and b * b == b2:
            return True
    return False


def _is_square(a: np.ndarray) -> np.ndarray:
    r = np.sqrt(a.astype(np.float64)).round().astype(np.int64)
    return r * r == a


def least_q_factor(fs: FactorSieve, ns: np.ndarray) -> np.ndarray:
    """Least prime factor = 3 (mod 4) of each n (NO_Q_FACTOR when none)."""
    rem = np.asarray(ns, dtype=np.int64).copy()
    out = np.full(rem.size, NO_Q_FACTOR, dtype=np.int64)
    active = np.flatnonzero(rem > 1)
    while active.size:
        p = fs.spf[rem[active]].astype(np.int64)
        hit = (p % 4 == 3) & (out[active] == NO_Q_FACTOR)
        out[active[hit]] = p[hit]
        rem[active] //= p
        active = active[(rem[active] > 1) & (out[active] == NO_Q_FACTOR)]
    return out


@dataclass(frozen=True, eq=False)
class SiftedSets:
    x: int
    theta1: float
    theta2: float
    A: np.ndarray  # n = p - 1, increasing
    q_least: np.ndarray  # aligned with A
    fs: FactorSieve = field(repr=False)

    @property
    def A0(self) -> np.ndarray:
        return self.A[self.q_least == NO_Q_FACTOR]

    @property
    def B(self) -> np.ndarray:
        return self.A0 + 3

    @property
    def z1(self) -> float:
        return self.x**self.theta1

    @property
    def z2(self) -> float:
        return self.x**self.theta2


def build_sifted_sets(x: int, theta1: float, theta2: float, fs: FactorSieve | None = None) -> SiftedSets:
    if not 0 < theta2 < theta1 <= 0.5:
        raise ValueError("need 0 < theta2 < theta1 <= 1/2")
    if x < 10:
        raise ValueError("x must be >= 10")
    fs = fs if fs is not None and fs.limit >= x else build_factor_sieve(x)
    P = prime_array(x - 2)
    P = P[P % 8 == 3]
    z2 = x**theta2
    P = P[fs.spf[P + 2] >= z2]
    A = P - 1
    return SiftedSets(x, theta1, theta2, A, least_q_factor(fs, A), fs)


def sifting_function(sets: SiftedSets, z: float) -> int:
    """S(A, Q, z): members with no prime factor = 3 (mod 4) below z."""
    q = sets.q_least
    return int(np.count_nonzero((q == NO_Q_FACTOR) | (q >= z)))


def sifting_function_direct(sets: SiftedSets, z: float) -> int:
    """The same count by gcd against the product of the Q-primes below z."""
    Qz = 1
    for p in simple_sieve(max(int(math.ceil(z)) - 1, 1)).tolist():
        if p % 4 == 3 and p < z:
            Qz *= p
    return sum(1 for n in sets.A.tolist() if math.gcd(n, Qz) == 1)


@dataclass(frozen=True)
class BuchstabReport:
    x: int
    theta1: float
    lhs: int  # S(A, Q, x^(1/2))
    s_z1: int  # S(A, Q, x^theta1)
    t_sum: int  # sum over x^theta1 < p1 <= sqrt(x), p1 in Q, of S(A_p1, Q, p1)
    a0_size: int

    @property
    def residual(self) -> int:
        return self.lhs - (self.s_z1 - self.t_sum)

    @property
    def ok(self) -> bool:
        return self.residual == 0 and self.lhs == self.a0_size


def buchstab_check(sets: SiftedSets) -> BuchstabReport:
    x = sets.x
    q = sets.q_least
    lhs = int(np.count_nonzero((q == NO_Q_FACTOR) | (q * q >= x)))
    s_z1 = sifting_function(sets, sets.z1)
    in_range = (q != NO_Q_FACTOR) & (q > sets.z1) & (q * q <= x)
    # q(n) = p1 for each counted n, so the sum over p1 collapses to one count.
    t_sum = int(np.count_nonzero(in_range))
    return BuchstabReport(x, sets.theta1, lhs, s_z1, t_sum, int(sets.A0.size))


@dataclass(frozen=True)
class ChainReport:
    x: int
    theta: float
    lam: float
    theta2: float
    values: dict
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def weighted_chain_check(sets: SiftedSets, theta: float, lam: float) -> ChainReport:
    """Evaluate every step of the weighted-sieve chain on the enumerated B.

    With y = x^theta and w_p = 1 - log p / log y:
      restricted = sum_{z2 <= p <= y} w_p #B_p  >=  full = sum_{3 <= p <= x} w_p #B_p
      full = sum_b (omega(b) - log rad(b) / log y)  >=  sum_b (omega(b) - 1/theta)
      #B - lam restricted  <=  sum_b (1 + lam/theta - lam omega(b))
                           <=  (1 + lam/theta) #{b : omega(b) < 1/lam + 1/theta}
    and the square-free restriction drops at most the non-square-free members.
    """
    if not sets.theta2 < theta < 1:
        raise ValueError("need theta2 < theta < 1")
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    x, fs = sets.x, sets.fs
    B = sets.B
    log_y = theta * math.log(x)
    z2, y = sets.z2, x**theta

    # #B_p for every prime p dividing some b, from the factorizations.
    divisors: dict[int, int] = {}
    omegas = np.zeros(B.size, dtype=np.int64)
    squarefree = np.ones(B.size, dtype=bool)
    log_rad = np.zeros(B.size)
    for i, b in enumerate(B.tolist()):
        fac = fs.factorize(b)
        omegas[i] = len(fac)
        log_rad[i] = math.fsum(math.log(p) for p, _ in fac)
        squarefree[i] = all(e == 1 for _, e in fac)
        for p, _ in fac:
            divisors[p] = divisors.get(p, 0) + 1
    ps = np.array(sorted(divisors), dtype=np.float64)
    counts = np.array([divisors[int(p)] for p in ps], dtype=np.float64)
    w = 1.0 - np.log(ps) / log_y if ps.size else ps
    restricted = math.fsum(w[(ps >= z2) & (ps <= y)] * counts[(ps >= z2) & (ps <= y)])
    full = math.fsum(w[(ps >= 3) & (ps <= x)] * counts[(ps >= 3) & (ps <= x)])
    per_b = math.fsum(omegas - log_rad / log_y)
    lower = math.fsum(omegas - 1.0 / theta)
    nB = int(B.size)
    lhs = nB - lam * restricted
    mid = math.fsum(1.0 + lam / theta - lam * omegas)
    bound = (1.0 / lam if lam > 0 else math.inf) + 1.0 / theta
    small = omegas < bound
    n_small = int(np.count_nonzero(small))
    n_small_sf = int(np.count_nonzero(small & squarefree))
    n_not_sf = int(np.count_nonzero(~squarefree))
    S_half = int(sets.A0.size)

    eps = 1e-9 * max(1.0, float(nB) * (1.0 + math.log(x)))
    values = {
        "B_size": nB,
        "S_A_Q_sqrt_x": S_half,
        "restricted_sum": restricted,
        "full_sum": full,
        "per_element_sum": per_b,
        "per_element_lower": lower,
        "main_minus_weighted": lhs,
        "pointwise_bound": mid,
        "count_small_omega": n_small,
        "count_small_omega_squarefree": n_small_sf,
        "non_squarefree": n_not_sf,
        "non_squarefree_cap": x ** (1.0 - sets.theta2),
    }
    checks = {
        "sifted_equals_B": S_half == nB,
        "restricted_ge_full": restricted >= full - eps,
        "full_equals_per_element": abs(full - per_b) <= eps,
        "per_element_ge_lower": per_b >= lower - eps,
        "main_minus_weighted_le_pointwise": lhs <= mid + eps,
        "pointwise_le_small_omega_count": mid <= (1.0 + lam / theta) * n_small + eps,
        "squarefree_gap_bounded": n_small - n_small_sf <= n_not_sf <= x ** (1.0 - sets.theta2),
    }
    return ChainReport(x, theta, lam, sets.theta2, values, checks)


@dataclass(frozen=True)
class SwitchingReport:
    x: int
    theta1: float
    counted: int  # size of T
    violations: int  # members failing the provable shape
    equal_primes: int  # members with p1 = p2
    p2_above_sqrt_x: int  # members with p2 > sqrt(x)
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def switching_structure_check(sets: SiftedSets, max_examples: int = 5) -> SwitchingReport:
    """Check that every n counted in T has the shape n = 2 m p1 p2.

    Required: p1 = q(n) in (z1, sqrt(x)], m > 0 with only prime factors = 1 (mod 4),
    p1 = p2 = 3 (mod 4), p1 <= p2 <= x/(2 m p1), m < x/(2 z1^2), p1 < (x/(2m))^(1/2).
    Cases p1 = p2 and p2 > sqrt(x) are counted separately: they satisfy the
    shape above but not a strict p1 < p2 <= sqrt(x) ordering.
    """
    if sets.theta1 <= 0.25:
        raise ValueError("the shape n = 2 m p1 p2 needs theta1 > 1/4")
    x, z1, fs = sets.x, sets.z1, sets.fs
    q = sets.q_least
    sel = (q != NO_Q_FACTOR) & (q > z1) & (q * q <= x)
    bad = eq = above = 0
    examples = []
    for n, p1 in zip(sets.A[sel].tolist(), q[sel].tolist()):
        fac = fs.factorize(n)
        twos = [e for p, e in fac if p == 2]
        q3 = [(p, e) for p, e in fac if p % 4 == 3]
        m = 1
        for p, e in fac:
            if p % 4 == 1:
                m *= p**e
        q3_flat = sorted(p for p, e in q3 for _ in range(e))
        ok = twos == [1] and len(q3_flat) == 2 and q3_flat[0] == p1
        if ok:
            p2 = q3_flat[1]
            ok = (
                n == 2 * m * p1 * p2
                and p1 <= p2
                and 2 * m * p1 * p2 <= x
                and 2 * m * z1 * z1 < x
                and 2 * m * p1 * p1 < x
            )
            eq += p1 == p2
            above += p2 * p2 > x
        if not ok:
            bad += 1
            if len(examples) < max_examples:
                examples.append(n)
    return SwitchingReport(x, sets.theta1, int(np.count_nonzero(sel)), bad, eq, above, examples)


@dataclass(frozen=True)
class CensusReport:
    x: int
    k: int
    count: int

    @property
    def normalized(self) -> float:
        return self.count * math.log(self.x) ** 2.5 / self.x


def census_series(x: int, k: int, checkpoints=None, segment: int = DEFAULT_SEGMENT >> 2) -> list[CensusReport]:
    """Counts of primes p <= c with p - 1 a sum of two positive squares and Omega(p+2) <= k.

    One report per checkpoint c (default: powers of ten below x, then x).
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    if checkpoints is None:
        checkpoints = [10**e for e in range(1, int(math.log10(x)) + 1) if 10**e < x] + [x]
    checkpoints = sorted(set(int(c) for c in checkpoints if 2 <= c <= x))
    base = simple_sieve(math.isqrt(x + 2) + 1)
    hits: list[np.ndarray] = []
    for block in prime_segments(x, segment):
        lo, hi = int(block[0]), int(block[-1]) + 1
        _, _, odd_minus = factor_segment(lo - 1, hi - 1, base)
        big_plus, _, _ = factor_segment(lo + 2, hi + 2, base)
        p = block
        ok = ~odd_minus[p - lo]
        ok &= p >= 3  # p - 1 >= 2
        ok &= big_plus[p + 2 - (lo + 2)] <= k
        sq = ok & _is_square(p - 1)
        for i in np.flatnonzero(sq):
            ok[i] = is_sum_two_pos_squares(int(p[i] - 1))
        hits.append(p[ok])
    found = np.concatenate(hits) if hits else np.zeros(0, dtype=np.int64)
    return [CensusReport(c, k, int(np.searchsorted(found, c, side="right"))) for c in checkpoints]


def census(x: int, k: int) -> CensusReport:
    return census_series(x, k, [x])[0]


def s2_direct_sum(t: int) -> float:
    """sum over m <= t whose prime factors are all = 1 (mod 4) of m / phi(m)^2 (m = 1 included)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    n = np.arange(t + 1, dtype=np.float64)
    phi = n.copy()
    ok = np.ones(t + 1, dtype=bool)
    ok[0] = False
    for block in prime_segments(t):
        for p in block.tolist():
            phi[p::p] *= 1.0 - 1.0 / p
            if p % 4 != 1:
                ok[p::p] = False
    return math.fsum(n[ok] / phi[ok] ** 2)
