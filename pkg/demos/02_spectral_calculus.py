"""Finite model spaces and the spectral functional calculus.

Run: python3 demos/02_spectral_calculus.py
"""

import numpy as np

from subordlab import apply_scalar_function, cycle, grid, kernel_of, markov_audit, path, symbols

for L in (cycle(16), path(16), grid(32)):
    D = L.decomposition
    audit = markov_audit(L, [0.1, 1.0, 10.0])
    print(f"{L.name:<10} eigenvalues in [{D.eigenvalues.min():.3g}, {D.eigenvalues.max():.4g}], "
          f"Markov: {audit.markov}, reconstruction residual {D.reconstruction_residual:.1e}")

# Heat semigroup applied to a point mass on the cycle, and its kernel.
L = cycle(16)
delta = np.eye(16)[0]
for t in (0.5, 2.0, 8.0):
    u = apply_scalar_function(L.decomposition, symbols.heat(t), delta)
    print(f"t = {t:<4} heat profile near the source: {np.round(u[:4], 4)}  total {u.sum():.12f}")

K = kernel_of(L.decomposition, symbols.poisson(1.0))
print("Poisson kernel row sums (times the unit weights):", np.round(K.sum(axis=1)[:4], 12))
