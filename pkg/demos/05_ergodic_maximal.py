"""Ergodic averages, their maximal function and the bounds it obeys.

Run: python3 demos/05_ergodic_maximal.py
"""

import math

import numpy as np

from subordlab import (LaplaceTypeFunction, cycle, laplace_type_check, maximal_average,
                       sector_maximal_check, strong_type_rows, weak_type_table)

L = cycle(64)
F = np.random.default_rng(1).standard_normal((64, 20))

weak = max(max(r[2] for r in weak_type_table(L, F[:, j])) for j in range(20))
print(f"largest weak-type ratio over 20 inputs: {weak:.4f} (bound 2)")
for p, ratio, bound in strong_type_rows(L, F[:, 0]):
    print(f"  p={p:<4g} ||A* f||_p / ||f||_p = {ratio:.4f}  bound {bound:.5f}")

f = F[:, 0]
print("\nA* f dominates |f|:", bool(np.all(maximal_average(L, f) >= np.abs(f) - 1e-12)))

for alpha, u in ((0.5, 1.0), (0.3, 4.0)):
    h = LaplaceTypeFunction.stable_density(alpha, u)
    rep = laplace_type_check(L, h, f)
    print(f"h = stable density alpha={alpha} u={u}: C_h = {h.C_h:.5f}, "
          f"worst |h(L) f| / (C_h A* f) = {rep['domination_ratio'].value:.4f}")

rep = sector_maximal_check(L, 0.5, math.pi / 8, f)
print(f"sector maximal constant {rep['C_emp'].value:.4f}, "
      f"relative change on doubling {rep['C_emp_stability'].value:.1e}")
