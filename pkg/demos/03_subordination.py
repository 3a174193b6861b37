"""Semigroups obtained by subordinating the heat semigroup, against exact spectral values.

Run: python3 demos/03_subordination.py
"""

import cmath
import math

import numpy as np

from subordlab import SemigroupRequest, cycle, subordinate_apply

L = cycle(64)
f = np.random.default_rng(0).standard_normal((64, 3))

cases = [
    SemigroupRequest("poisson", 1.0),
    SemigroupRequest("poisson_derivative", 1.0, k=2),
    SemigroupRequest("poisson_complex", z=cmath.rect(1.5, math.pi / 6)),
    SemigroupRequest("fractional", 1.0, alpha=0.3),
]
for req in cases:
    by_integral = subordinate_apply(L, req, f)
    exact = subordinate_apply(L, SemigroupRequest(req.kind, req.time, route="spectral", k=req.k,
                                                  z=req.z, alpha=req.alpha), f)
    label = req.kind + (f" k={req.k}" if req.k is not None else "") + \
        (f" alpha={req.alpha}" if req.alpha is not None else "") + \
        (f" z={req.z:.3f}" if req.z is not None else "")
    print(f"{label:<40} max |integral - spectral| = {np.abs(by_integral - exact).max():.2e}")
