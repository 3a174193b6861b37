"""Square functions, Hardy and BMO norms for fractional powers.

Run: python3 demos/06_square_functions.py
"""

import numpy as np

from subordlab import (HardyParams, bmo_norm, calderon_check, calderon_constant, cycle,
                       equivalence_experiment, hardy_norm, kernel_bound_audit, regularity_audit)

L = cycle(64)
prof = regularity_audit(L.space, (2, 16))
print(f"volume regularity on {L.name}: n = {prof.n:.3f}, "
      f"constants [{prof.c_lower:.3g}, {prof.c_upper:.3g}]")

for m in (1.0, 2.0):
    c = calderon_constant(m)
    print(f"reproducing constant for order {m:g}: {c:.10f}, "
          f"identity holds: {calderon_check(L.decomposition.eigenvalues, m, c).passed}")

P = HardyParams(alpha=0.5)
audit = kernel_bound_audit(L, P)
print(f"cross-scale decay exponent {audit['cross_scale_slope'].value:.3f} (m alpha = 1)")

delta = np.eye(64)[0]
for a in (0.5, 1.0):
    print(f"alpha={a}: Hardy norm of a point mass {hardy_norm(L, P.with_alpha(a), delta):.5f}, "
          f"BMO norm {bmo_norm(L, P.with_alpha(a), delta):.5f}")

_, summary = equivalence_experiment(L, HardyParams())
print("\nnorm ratio families over the test functions:")
for name, spread, refined, change, ok in summary:
    print(f"  {name:<12} spread {spread:.4f}  change on refinement {change:.1e}")
