"""The integrals C(theta1) and I(theta, theta1, theta2).

C has an inverse square-root endpoint, removed by integrating in u = sqrt(beta).
I integrates the combined upper-bound function and is built cumulatively when
many theta share the same theta1 and theta2.
"""

import numpy as np

from sievebound.combiner import get_tables
from sievebound.integrals import integral_C, integral_I, integral_I_profile

for theta1 in (0.26, 0.3, 0.35, 0.4, 0.431, 0.449, 0.49, 0.5):
    r = integral_C(theta1)
    print(f"C({theta1:<5}) = {r.value:.12f}   error estimate {r.abs_error_estimate:.1e}, {r.evaluations} evaluations")

tables = get_tables()
theta1, theta2 = 0.449, 0.011
print()
r = integral_I(0.23, theta1, theta2, tables)
print(f"I(0.23, {theta1}, {theta2}) = {r.value:.9f} with {r.evaluations} evaluations")
thetas = np.array([0.05, 0.1, 0.15, 0.2, 0.23, 0.3, 0.4])
for th, v in zip(thetas, integral_I_profile(thetas, theta1, theta2, tables)):
    print(f"  theta={th:.2f}  I={v:.9f}")
