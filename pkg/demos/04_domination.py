"""Pointwise domination by the Poisson semigroup, real derivatives and complex times.

Run: python3 demos/04_domination.py
"""

import math

from subordlab import (SectorSpec, complex_domination, cycle, derivative_domination,
                       faa_di_bruno_constant, path)

L = cycle(32)
print("derivative bounds |(t L^(1/2))^k P_t f| <= C P_(theta t)|f| on", L.name)
for k in (1, 2, 3):
    for theta in (0.5, 0.9):
        r = derivative_domination(L, k, theta)
        print(f"  k={k} theta={theta}: empirical C = {r.empirical_constant:.4f}, "
              f"grid-stable: {r.stable}, explicit bound {r.extras['cauchy_constant']:.4g}")
print("scalar constant at k = 0:", round(faa_di_bruno_constant(0, 0.5), 6))

print("\ncomplex times in a sector against 4 sqrt(2)/gamma:")
for L in (cycle(16), path(16)):
    for beta in (math.pi / 12, math.pi / 8, math.pi / 6):
        r = complex_domination(L, SectorSpec(beta), samples=1000, kernel=True)
        print(f"  {L.name:<9} beta={beta:.4f}: functions {r.extras['function_constant']:.4f}, "
              f"kernels {r.extras['kernel_constant']:.4f}, bound {r.paper_constant:.5f}")
