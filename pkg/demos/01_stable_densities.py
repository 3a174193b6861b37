"""One-sided stable densities: evaluation routes, mass, tails and scaling.

Run: python3 demos/01_stable_densities.py
"""

import math

import numpy as np

from subordlab import StableDensityModel, density_audit, laplace_transform, stable_density

# At alpha = 1/2 the density has a closed form; the generic evaluator matches it.
ts = np.logspace(-2, 2, 9)
closed = ts ** -1.5 * np.exp(-1 / (4 * ts)) / (2 * math.sqrt(math.pi))
fourier = stable_density(StableDensityModel(0.5), 1.0, ts)
kanter = stable_density(StableDensityModel(0.5, method="real-integral-representation"), 1.0, ts)
print("t          closed form      Fourier route    real-integral route")
for t, a, b, c in zip(ts, closed, fourier, kanter):
    print(f"{t:<10.4g} {a:<16.10g} {b:<16.10g} {c:.10g}")

# The audit checks positivity, unit mass, the power-law tail and the convolution law.
for alpha in (0.3, 0.7):
    rep = density_audit(StableDensityModel(alpha))
    print(f"\nalpha = {alpha}: audit {'passed' if rep.passed else 'FAILED'}")
    for chk in rep.checks:
        print(f"  {chk.name:<22} {chk.value:.6g}")

# The Laplace transform of p_u is exp(-u s^alpha).
model = StableDensityModel(0.7)
s = np.array([0.1, 1.0, 10.0])
print("\nLaplace transform at u = 2:", laplace_transform(model, 2.0, s))
print("exp(-2 s^0.7):             ", np.exp(-2 * s ** 0.7))
