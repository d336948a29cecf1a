"""Exact sieve bookkeeping on enumerated integers.

The sets are built from a smallest-prime-factor table, so every identity
here is checked with integer counts rather than asymptotics.
"""

from sievebound.empirical import (
    buchstab_check,
    build_sifted_sets,
    census_series,
    switching_structure_check,
    weighted_chain_check,
)

x = 10**6
for theta1, theta2, theta, lam in ((0.3, 0.05, 0.23, 0.14), (0.45, 0.011, 0.23, 0.14)):
    sets = build_sifted_sets(x, theta1, theta2)
    b = buchstab_check(sets)
    c = weighted_chain_check(sets, theta, lam)
    s = switching_structure_check(sets)
    print(f"x={x} theta1={theta1} theta2={theta2}: |A|={sets.A.size}, |B|={sets.B.size}")
    print(f"  Buchstab: S(z1)={b.s_z1} + sum={b.t_sum} vs {b.lhs}, residual {b.residual}")
    print(f"  chain (theta={theta}, lambda={lam}): " + ", ".join(f"{k}={v}" for k, v in c.checks.items()))
    print(f"  switching: {s.counted} terms, {s.violations} off-shape, "
          f"{s.equal_primes} with p1 = p2, {s.p2_above_sqrt_x} with p2 > sqrt(x)")

print()
print("primes p = m^2 + n^2 + 1 with Omega(p + 2) <= 11")
for r in census_series(10**7, 11):
    print(f"  x={r.x:>9}: {r.count:>7}   count (log x)^(5/2) / x = {r.normalized:.4f}")
