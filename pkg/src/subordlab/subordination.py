"""Semigroups built from the heat semigroup by subordination integrals.

Every subordinated operator here has the form ``int_0^inf w(u) exp(-uL) f du``
for an explicit weight ``w``:

* Poisson ``exp(-t L^(1/2))``: ``w(u) = t exp(-t^2/4u) / (2 sqrt(pi) u^(3/2))``,
  also used verbatim with complex ``z`` in place of ``t``;
* ``(t L^(1/2))^k exp(-t L^(1/2))``: ``w(u) = (-1)^(k+1) pi^(-1/2) t^k
  d^(k+1)/dt^(k+1) exp(-t^2/4u) u^(-1/2)``;
* ``exp(-t L^alpha)``: ``w(u) = p_1(u)`` applied to ``exp(-u t^(1/alpha) L)``.

The integral is taken in ``v = log u`` by the vector-valued adaptive panel rule,
with ``exp(-uL) f`` formed from the eigendecomposition at each node.  The
``spectral`` route evaluates the same operator directly from its symbol and
serves as the oracle.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import factorial

from . import stable
from ._quadrature import integrate
from .spectral import SelfAdjointOperator, apply_scalar_function, symbols

__all__ = [
    "KINDS", "ROUTES", "SemigroupRequest", "subordinate_apply", "poisson_derivative_apply",
    "kernel_matrix", "gaussian_time_derivative", "request_symbol",
]

KINDS = ("heat", "poisson", "poisson_derivative", "poisson_complex", "fractional")
ROUTES = ("spectral", "subordination")


@dataclass(frozen=True)
class SemigroupRequest:
    """Which semigroup to apply, at which time, and by which route.

    ``time`` is ignored for ``poisson_complex``, which uses ``z``;
    ``k`` is the derivative order for ``poisson_derivative``.
    """

    kind: str
    time: float = 1.0
    route: str = "subordination"
    quad_tol: float = 1e-8
    k: Optional[int] = None
    z: Optional[complex] = None
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}; expected one of {ROUTES}")
        if not (self.quad_tol > 0):
            raise ValueError("quad_tol must be positive")
        if self.kind == "poisson_complex":
            if self.z is None:
                raise ValueError("poisson_complex needs z")
            z = complex(self.z)
            object.__setattr__(self, "z", z)
            if not (z.real > 0 and abs(math.atan2(z.imag, z.real)) < math.pi / 4):
                raise ValueError(f"z = {z} lies outside the sector |arg z| < pi/4")
        else:
            t = float(self.time)
            if not (math.isfinite(t) and t > 0):
                raise ValueError(f"time must be positive, got {self.time}")
        if self.kind == "poisson_derivative":
            if self.k is None or int(self.k) != self.k or self.k < 0:
                raise ValueError("poisson_derivative needs an integer k >= 0")
            object.__setattr__(self, "k", int(self.k))
        if self.kind == "fractional":
            if self.alpha is None:
                raise ValueError("fractional needs alpha")
            object.__setattr__(self, "alpha", stable.stability_index(self.alpha))


def request_symbol(req):
    """Scalar symbol ``phi`` with ``phi(L)`` the requested operator."""
    t = req.time
    if req.kind == "heat":
        return symbols.heat(t)
    if req.kind == "poisson":
        return symbols.poisson(t)
    if req.kind == "poisson_derivative":
        return symbols.poisson_derivative(t, req.k)
    if req.kind == "poisson_complex":
        return symbols.poisson_complex(req.z)
    return symbols.fractional(t, req.alpha)


def gaussian_time_derivative(n, t, u):
    """``d^n/dt^n exp(-t^2/(4u))`` by Faa di Bruno's formula.

    The outer function is ``exp`` and the inner one ``-t^2/(4u)`` has only two
    nonzero derivatives, so the sum runs over ``m1 + 2 m2 = n``:
    ``n! sum (-1)^(m1+m2) / (m1! m2!) (t/2u)^m1 (1/4u)^m2``.
    """
    t = np.asarray(t)
    u = np.asarray(u, dtype=float)
    a = t / (2 * u)
    b = 1.0 / (4 * u)
    total = np.zeros(np.broadcast(t, u).shape, dtype=np.result_type(t, float))
    for m2 in range(n // 2 + 1):
        m1 = n - 2 * m2
        coef = (-1) ** (m1 + m2) * factorial(n, exact=True) / (
            factorial(m1, exact=True) * factorial(m2, exact=True))
        total = total + coef * a ** m1 * b ** m2
    return total * np.exp(-t * t / (4 * u))


def _heat_nodes(D, f):
    """Return ``(lam, V, coef)`` with ``exp(-uL) f = V (exp(-u lam) * coef)``."""
    f = np.asarray(f)
    w = D.weights if f.ndim == 1 else D.weights[:, None]
    return D.eigenvalues, D.eigenvectors, D.eigenvectors.T @ (w * f)


def _subordinate(D, f, weight, lo, hi, tol, breakpoints=(), scale=1.0):
    """``int w(u) exp(-u scale L) f du`` over ``u = e^v``, ``v in [lo, hi]``.

    ``weight(u)`` returns ``w(u) u`` (the ``du = u dv`` factor included).
    """
    lam, V, coef = _heat_nodes(D, f)
    lam = scale * lam
    two_d = coef.ndim == 2

    def integrand(v):
        u = np.exp(v)
        E = weight(u)[:, None] * np.exp(-np.outer(u, lam))
        if two_d:
            return np.matmul(V, E[:, :, None] * coef[None])
        return (E * coef) @ V.T

    val, _ = integrate(integrand, lo, hi, abs_tol=tol / 4, breakpoints=breakpoints)
    return val


def _poisson_weight(z):
    c = 1.0 / (2.0 * math.sqrt(math.pi))
    return lambda u: c * z * np.exp(-z * z / (4 * u)) / np.sqrt(u)


def _poisson_limits(z, tol):
    r2 = (z * z).real if isinstance(z, complex) else z * z
    lo = math.log(r2 / 3000.0)
    # the lambda = 0 component carries mass |z| / sqrt(pi U) beyond U
    hi = max(math.log((10 * abs(z) / (math.sqrt(math.pi) * tol)) ** 2), lo + 10)
    return lo, hi


def subordinate_apply(L, req, f):
    """Apply the requested semigroup to ``f`` (shape ``(n,)`` or ``(n, k)``).

    With ``route="spectral"`` the exact symbol is applied; otherwise the
    subordination integral is evaluated to ``req.quad_tol`` in max norm.

    Raises
    ------
    subordlab.QuadratureError
        If the integral does not converge; carries the achieved error.
    """
    D = L.decomposition if isinstance(L, SelfAdjointOperator) else L
    f = np.asarray(f)
    if f.shape[0] != len(D.eigenvalues):
        raise ValueError(f"vector length {f.shape[0]} does not match operator size "
                         f"{len(D.eigenvalues)}")
    if req.route == "spectral" or req.kind == "heat":
        return apply_scalar_function(D, request_symbol(req), f)
    if req.kind == "poisson_derivative":
        return poisson_derivative_apply(D, req.k, req.time, f, route="subordination",
                                        quad_tol=req.quad_tol)
    tol = req.quad_tol
    if req.kind in ("poisson", "poisson_complex"):
        z = req.z if req.kind == "poisson_complex" else float(req.time)
        lo, hi = _poisson_limits(z, tol)
        peak = math.log(abs(z) ** 2 / 6.0)
        return _subordinate(D, f, _poisson_weight(z), lo, hi, tol, breakpoints=[peak])
    # fractional: p_1(u) against exp(-u t^(1/alpha) L)
    alpha = req.alpha
    model = _density_model(alpha, tol)
    tail = (10.0 * stable.tail_constant(alpha) / (alpha * tol)) ** (1.0 / alpha)
    lo = math.log(stable.ORIGIN_CUTOFF)
    hi = math.log(max(tail, 10.0))

    def weight(u):
        return stable.stable_density(model, 1.0, u) * u

    bps = list(np.arange(-10.0, hi, 5.0))
    return _subordinate(D, f, weight, lo, hi, tol, breakpoints=bps,
                        scale=req.time ** (1.0 / alpha))


def _density_model(alpha, tol):
    # p_1 accurate well below the requested tolerance; one model per (alpha, tol)
    return stable.StableDensityModel(alpha, abs_tol=min(1e-10, tol / 100))


def poisson_derivative_apply(L, k, t, f, route="subordination", quad_tol=1e-8):
    """``(t L^(1/2))^k exp(-t L^(1/2)) f``.

    The subordination route integrates ``(-1)^(k+1) pi^(-1/2) t^k
    d^(k+1)/dt^(k+1)[exp(-t^2/4u)] exp(-uL) f u^(-1/2)`` with the time
    derivative expanded by :func:`gaussian_time_derivative`.
    """
    D = L.decomposition if isinstance(L, SelfAdjointOperator) else L
    k = int(k)
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise ValueError("t must be positive")
    f = np.asarray(f)
    if route == "spectral":
        return apply_scalar_function(D, symbols.poisson_derivative(t, k), f)
    if route != "subordination":
        raise ValueError(f"unknown route {route!r}")
    n = k + 1
    sign = (-1) ** (k + 1) / math.sqrt(math.pi)

    def weight(u):
        return sign * t ** k * gaussian_time_derivative(n, t, u) * np.sqrt(u)

    lo = math.log(t * t / 3000.0)
    s = (n + 1) // 2
    big = 100.0 * math.factorial(n) * max(t, 1.0) ** (k + n) / quad_tol
    hi = math.log(t * t) + math.log(big) / (s - 0.5)
    peak = math.log(t * t / (4.0 * (k + 2)))
    return _subordinate(D, f, weight, lo, max(hi, lo + 10), quad_tol, breakpoints=[peak])


def kernel_matrix(L, req):
    """Kernel ``k(x, y)`` of the requested operator: ``(Tf)(x) = sum_y k(x, y) f(y) mu(y)``."""
    D = L.decomposition if isinstance(L, SelfAdjointOperator) else L
    n = len(D.eigenvalues)
    T = subordinate_apply(D, req, np.eye(n))
    return T / D.weights[None, :]
