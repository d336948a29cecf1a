"""The objectives G and H at the headline parameters, term by term.

The omega bound 1/lambda + 1/theta depends only on lambda and theta. Whether
H is positive depends on the balance of three terms.
"""

from sievebound.optimizer import SearchParams, default_objective

obj = default_objective()

r = obj.H(SearchParams(lam=0.14, theta=0.23, theta1=0.449, theta2=0.011))
print("H at lambda=0.14, theta=0.23, theta1=0.449, theta2=0.011")
for k, v in r.to_dict().items():
    print(f"  {k:>22}: {v}")

print()
print("G along theta1 = 0.431")
for theta2 in (0.001, 0.002, 0.003, 0.005, 0.0219):
    g = obj.g_terms(0.431, theta2)
    print(f"  theta2={theta2:<7} main={g.term_main:+10.4f} switching={g.term_switching:10.4f} G={g.G_value:+10.4f}")

# The best theta1 for each small theta2 sits near the top of its range,
# which ends at theta1 + 2 theta2 = 1/2.
print()
print("best G over theta1 for small theta2")
for theta2 in (0.001, 0.002, 0.003):
    top = round((0.5 - 2 * theta2) * 1000)
    best = max((obj.G(t1 / 1000, theta2), t1 / 1000) for t1 in range(300, top, 5))
    print(f"  theta2={theta2}: G={best[0]:+.4f} at theta1={best[1]}")
