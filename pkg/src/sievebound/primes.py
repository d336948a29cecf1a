"""Prime generation and factorization tables.

Everything here is exact integer work on numpy arrays. The segmented sieve
is the single source of primes for both the Euler products and the
enumeration checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_SEGMENT = 1 << 22
SPF_CAP = 2 * 10**9


def simple_sieve(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if is_p[i]:
            is_p[i * i :: 2 * i] = False
    return np.flatnonzero(is_p).astype(np.int64)


def prime_segments(limit: int, segment: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield the primes <= limit in increasing order, one array per segment."""
    if limit < 2:
        return
    base = simple_sieve(math.isqrt(limit))
    lo = 0
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        mark = np.ones(hi - lo, dtype=bool)
        if lo == 0:
            mark[: min(2, hi)] = False
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mark[start - lo :: p] = False
        yield np.flatnonzero(mark).astype(np.int64) + lo
        lo = hi


def prime_array(limit: int) -> np.ndarray:
    """Concatenated primes <= limit."""
    parts = list(prime_segments(limit))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def primes_up_to(cutoff: int) -> Iterator[tuple[int, int | None]]:
    """Stream ``(p, p mod 4)`` for primes p <= cutoff; the class is None for p = 2."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    for block in prime_segments(cutoff):
        for p in block.tolist():
            yield p, (None if p == 2 else p % 4)


def prime_count(limit: int) -> int:
    return sum(len(b) for b in prime_segments(limit))


@dataclass(frozen=True)
class FactorSieve:
    """Smallest-prime-factor table for 0..limit (spf[0] = spf[1] = 0)."""

    limit: int
    spf: np.ndarray

    def factorize(self, n: int) -> list[tuple[int, int]]:
        if n < 1 or n > self.limit:
            raise ValueError(f"{n} outside factor table range [1, {self.limit}]")
        out: list[tuple[int, int]] = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def big_omega(self, n: int) -> int:
        return sum(e for _, e in self.factorize(n))

    def small_omega(self, n: int) -> int:
        return len(self.factorize(n))

    def is_prime(self, n: int) -> bool:
        return n >= 2 and int(self.spf[n]) == n

    def omega_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (Omega, omega) for every 0..limit; entries 0 and 1 are 0."""
        n = np.arange(self.limit + 1, dtype=np.int64)
        big = np.zeros(self.limit + 1, dtype=np.int8)
        small = np.zeros(self.limit + 1, dtype=np.int8)
        rem = n.copy()
        last = np.zeros(self.limit + 1, dtype=np.int64)
        active = np.flatnonzero(rem > 1)
        while active.size:
            p = self.spf[rem[active]].astype(np.int64)
            big[active] += 1
            small[active] += (p != last[active]).astype(np.int8)
            last[active] = p
            rem[active] //= p
            active = active[rem[active] > 1]
        return big, small


def build_factor_sieve(limit: int, cap: int = SPF_CAP) -> FactorSieve:
    """Exact smallest-prime-factor table, filled segment by segment."""
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit > cap:
        raise ValueError(f"limit {limit} exceeds factor-sieve cap {cap}")
    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    base = simple_sieve(math.isqrt(limit))
    seg = DEFAULT_SEGMENT
    for lo in range(0, limit + 1, seg):
        hi = min(lo + seg, limit + 1)
        view = spf[lo:hi]
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            sl = view[start - lo :: p]
            sl[sl == 0] = p
        idx = np.flatnonzero(view == 0)
        view[idx] = (idx + lo).astype(dtype)
    spf[0] = 0
    spf[1] = 0
    return FactorSieve(limit=limit, spf=spf)


def trial_factorize(n: int) -> list[tuple[int, int]]:
    """Factor n by trial division; for checks and small scalar use."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def factor_segment(lo: int, hi: int, base: np.ndarray | None = None):
    """Per-integer factor statistics for n in [lo, hi).

    Returns ``(Omega, omega, odd_q3)`` where ``odd_q3[i]`` is True when some
    prime q = 3 (mod 4) divides ``lo + i`` to an odd power. Requires lo >= 1.
    """
    if lo < 1 or hi <= lo:
        raise ValueError("need 1 <= lo < hi")
    if base is None:
        base = simple_sieve(math.isqrt(hi - 1))
    rem = np.arange(lo, hi, dtype=np.int64)
    big = np.zeros(hi - lo, dtype=np.int16)
    small = np.zeros(hi - lo, dtype=np.int16)
    odd_q3 = np.zeros(hi - lo, dtype=bool)
    for p in base.tolist():
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p - lo
        idx = np.arange(start, hi - lo, p)
        if idx.size == 0:
            continue
        small[idx] += 1
        exps = np.zeros(idx.size, dtype=np.int16)
        sub = idx
        while sub.size:
            rem[sub] //= p
            big[sub] += 1
            exps[np.searchsorted(idx, sub)] += 1
            sub = sub[rem[sub] % p == 0]
        if p % 4 == 3:
            odd_q3[idx] |= (exps % 2).astype(bool)
    left = rem > 1
    big[left] += 1
    small[left] += 1
    odd_q3 |= left & (rem % 4 == 3)
    return big, small, odd_q3
