"""Combining a semi-linear and a linear sieve for two coprimality conditions.

For each way of sharing the level between the two sieves the combiner
evaluates the vector-sieve inequality and keeps the best share. A dense scan over the same segment is the
reference.
"""

from sievebound.combiner import F_combined, f_combined, get_tables, lower_range, upper_range

tables = get_tables()

for sigma1, sigma2 in ((1.2, 15.0), (1.16, 45.45), (2.0, 8.0), (3.0, 20.0), (1.5, 6.0)):
    up = F_combined(tables, sigma1, sigma2)
    lo = f_combined(tables, sigma1, sigma2)
    print(f"sigma=({sigma1}, {sigma2})")
    print(f"  upper: F={up.value:.10f} at s1={up.s1:.5f}, s2={up.s2:.5f}, segment {upper_range(sigma1, sigma2)}")
    print(f"  lower: f={lo.value:.10f} at s1={lo.s1:.5f}, s2={lo.s2:.5f}, segment {lower_range(sigma1, sigma2)}")

# sigma1 = 1/(2 theta1), sigma2 = 1/(2 theta2): the lower function is what the
# main term of G multiplies. It changes sign between theta2 = 0.011 and 0.0219.
print()
for theta2 in (0.001, 0.002, 0.005, 0.011, 0.0219):
    v = f_combined(tables, 1 / (2 * 0.431), 1 / (2 * theta2)).value
    print(f"theta1=0.431 theta2={theta2:<7} f={v:+.6f}")
