"""Euler products C, c1, c2, c3, truncated and tail-corrected.

The raw truncated products drift slowly with the cutoff. Multiplying by the
first-order tail factor removes almost all of that drift.
"""

import math

from sievebound.constants import compute_C, compute_c3, compute_constants
from sievebound.empirical import s2_direct_sum

print("cutoff        C              c1             c2             c3")
for cutoff in (10**5, 10**6, 10**7):
    v = compute_constants(cutoff).values()
    print(f"{cutoff:>8}  " + "  ".join(f"{v[k]:.11f}" for k in ("C", "c1", "c2", "c3")))

print()
for cutoff in (10**5, 10**6, 10**7):
    raw = compute_C(cutoff, tail_correction=False).value
    print(f"C without tail factor at {cutoff:>8}: {raw:.11f}")
print(f"C with (p-2)^2 in the p = 1 mod 4 factor: {compute_C(10**7, alt_form=True).value:.9f}")

# The partial sum S2(t) grows like a constant times sqrt(log t). Compare that
# constant with c3, with and without the p = 2 factor.
t = 10**6
ratio = s2_direct_sum(t) / math.sqrt(math.log(t))
c3 = compute_c3(10**7).value
c3_two = compute_c3(10**7, with_prime_two=True).value
print()
print(f"S2(1e6)/sqrt(log 1e6) = {ratio:.6f}")
print(f"c3 (odd primes)       = {c3:.6f}   relative gap {abs(c3 - ratio) / ratio:.1%}")
print(f"c3 with p = 2 factor  = {c3_two:.6f}   relative gap {abs(c3_two - ratio) / ratio:.1%}")
