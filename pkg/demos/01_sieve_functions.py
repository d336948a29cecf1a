"""Tabulate the semi-linear and linear sieve functions and look at them.

F and f are known in closed form on short initial ranges. Past those ranges
the delay equation takes over, and both functions close in on 1.
"""

import numpy as np

from sievebound.combiner import get_tables
from sievebound.sieve_functions import closed_form, continue_from, handoff_residuals

tables = get_tables()

for label, table in (("semi-linear", tables.semi), ("linear", tables.linear)):
    dim = table.dimension
    print(f"{label}: kappa={dim.kappa}, beta={dim.beta}, {table.count} grid points up to s={table.s_max:g}")
    for s in (1.5, 2.0, 3.0, 4.0, 6.0, 10.0, 20.0):
        F = table.eval("F", s)
        f = table.eval("f", s) if s >= dim.beta else 0.0
        print(f"  s={s:5.1f}  F={F:.10f}  f={f:.10f}  F-f={F - f:.3e}")

    # Marching the delay equation from the start of each closed range
    # should land back on the closed form.
    for w, start in (("F", 1.0), ("f", float(dim.beta))):
        cf = closed_form(dim, w)
        s, v = continue_from(dim, w, start, cf.hi)
        print(f"  {w}: continuation vs closed form on [{start:g}, {cf.hi:g}]: {np.max(np.abs(v - cf.fn(s))):.2e}")
    for where, r in handoff_residuals(table).items():
        print(f"  derivative jump at {where}: {r:.2e}")
    print()
