"""Ergodic averages, maximal functions and Laplace-transform-type multipliers.

``A^s = s^-1 int_0^s exp(-tL) dt`` has symbol ``(1 - e^(-s lam)) / (s lam)``,
which is 1 at ``lam = 0``.  The maximal function ``A* f = sup_s |A^s f|`` is
approximated by a log grid in ``s`` plus the two exact limits: ``s -> 0``
gives ``|f|`` and ``s -> inf`` gives the projection onto the null space.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import stable
from ._quadrature import integrate
from .reports import VerificationReport
from .spectral import (SelfAdjointOperator, apply_scalar_function, fractional_power,
                       markov_audit, symbols)

__all__ = [
    "MaximalGrid", "averaging_apply", "maximal_average", "poisson_maximal", "weak_type_table",
    "strong_type_rows", "strong_type_bound", "LaplaceTypeFunction", "laplace_type_check",
    "sector_maximal_check", "fourier_l1_bound_check", "weak_type_bound",
]

weak_type_bound = 2.0


def strong_type_bound(p):
    """``2 (p / (p - 1))^(1/p)``; equals 2 at ``p = inf``."""
    if math.isinf(p):
        return 2.0
    if p <= 1:
        raise ValueError("p must exceed 1")
    return 2.0 * (p / (p - 1)) ** (1.0 / p)


def _decomp(L):
    return L.decomposition if isinstance(L, SelfAdjointOperator) else L


@dataclass(frozen=True)
class MaximalGrid:
    """Log grid of averaging lengths ``s`` plus the limits ``s -> 0`` and ``s -> inf``."""

    s_values: np.ndarray
    include_limits: bool = True

    def __post_init__(self):
        s = np.asarray(self.s_values, dtype=float)
        if s.ndim != 1 or s.size == 0 or np.any(s <= 0):
            raise ValueError("s_values must be a nonempty list of positive numbers")
        object.__setattr__(self, "s_values", np.sort(s))

    @classmethod
    def for_operator(cls, L, per_decade=64, decades=3.0):
        """Cover ``[gap^-1 10^-decades, gap^-1 10^decades]`` at ``per_decade`` points per decade."""
        if per_decade < 64:
            raise ValueError("at least 64 points per decade are required")
        gap = _decomp(L).spectral_gap
        gap = 1.0 if not np.isfinite(gap) else gap
        n = int(round(2 * decades * per_decade)) + 1
        return cls(np.logspace(-decades, decades, n) / gap)

    def refined(self):
        s = self.s_values
        mid = np.sqrt(s[1:] * s[:-1])
        return MaximalGrid(np.sort(np.concatenate([s, mid])), self.include_limits)


def averaging_apply(L, s, f):
    """``A^s f`` from the exact symbol; no quadrature is involved."""
    if not (s > 0):
        raise ValueError("s must be positive")
    return apply_scalar_function(_decomp(L), symbols.averaging(s), f)


def _sup_over_symbols(D, sym_rows, f, chunk=64):
    """``max_j |phi_j(L) f|`` pointwise for rows of symbol values."""
    V = D.eigenvectors
    w = D.weights if f.ndim == 1 else D.weights[:, None]
    coef = V.T @ (w * f)
    out = np.zeros(f.shape)
    for start in range(0, len(sym_rows), chunk):
        rows = sym_rows[start:start + chunk]
        if f.ndim == 1:
            vals = (rows * coef) @ V.T
        else:
            vals = np.einsum("nr,tr,rm->tnm", V, rows, coef, optimize=True)
        out = np.maximum(out, np.abs(vals).max(axis=0))
    return out


def _limits(D, f):
    null = D.eigenvalues == 0
    proj = apply_scalar_function(D, null.astype(float), f)
    return np.maximum(np.abs(f), np.abs(proj))


def maximal_average(L, f, grid=None):
    """``A* f(x) = max_s |A^s f(x)|`` over the grid and both limits.

    ``f`` may hold several functions as columns.
    """
    D = _decomp(L)
    grid = grid or MaximalGrid.for_operator(D)
    f = np.asarray(f, dtype=float)
    lam = D.eigenvalues
    rows = np.array([symbols.averaging(s)(lam) for s in grid.s_values])
    out = _sup_over_symbols(D, rows, f)
    if grid.include_limits:
        out = np.maximum(out, _limits(D, f))
    return out


def poisson_maximal(L, f, t_values):
    """``P* f(x) = max_t |exp(-t L^(1/2)) f(x)|`` over the given times, with both limits."""
    D = _decomp(L)
    f = np.asarray(f, dtype=float)
    root = np.sqrt(D.eigenvalues)
    rows = np.exp(-np.outer(np.asarray(t_values, dtype=float), root))
    return np.maximum(_sup_over_symbols(D, rows, f), _limits(D, f))


def _require_markov(L):
    D = _decomp(L)
    gap = D.spectral_gap if np.isfinite(D.spectral_gap) else 1.0
    audit = markov_audit(D, [1e-2 / gap, 1.0 / gap, 1e2 / gap])
    if not audit.markov:
        raise ValueError(f"operator does not generate a Markov semigroup: {audit.witness}")
    return audit


def weak_type_table(L, f, lambda_grid=None, grid=None):
    """Rows ``(lambda, mu{A* f > lambda}, lambda mu{A* f > lambda} / ||f||_1)``.

    Without ``lambda_grid`` the table lists a dyadic grid together with the
    points just below each distinct value of ``A* f``, where the ratio is
    largest.
    """
    D = _decomp(L)
    _require_markov(D)
    mu = D.weights
    f = np.asarray(f, dtype=float)
    norm1 = float(np.sum(np.abs(f) * mu))
    Af = maximal_average(D, f, grid)
    if lambda_grid is None:
        pos = Af[Af > 0]
        if pos.size:
            lo, hi = np.floor(np.log2(pos.min())), np.ceil(np.log2(pos.max()))
            dyadic = 2.0 ** np.arange(lo, hi + 1)
            crit = np.unique(pos) * (1 - 1e-12)
            lambda_grid = np.unique(np.concatenate([dyadic, crit]))
        else:
            lambda_grid = np.array([1.0])
    rows = []
    for lam in np.asarray(lambda_grid, dtype=float):
        count = float(mu[Af > lam].sum())
        ratio = lam * count / norm1 if norm1 > 0 else 0.0
        rows.append((float(lam), count, ratio))
    return rows


def strong_type_rows(L, f, ps=(1.5, 2.0, 4.0, math.inf), grid=None):
    """Rows ``(p, ||A* f||_p / ||f||_p, bound)``."""
    D = _decomp(L)
    _require_markov(D)
    mu = D.weights
    f = np.asarray(f, dtype=float)
    Af = maximal_average(D, f, grid)
    rows = []
    for p in ps:
        if math.isinf(p):
            num, den = np.abs(Af).max(), np.abs(f).max()
        else:
            num = np.sum(np.abs(Af) ** p * mu) ** (1 / p)
            den = np.sum(np.abs(f) ** p * mu) ** (1 / p)
        rows.append((p, float(num / den) if den > 0 else 0.0, strong_type_bound(p)))
    return rows


@dataclass
class LaplaceTypeFunction:
    """A function ``h`` on ``(0, inf)`` used as ``h~(L) = int h(t) exp(-tL) dt``.

    ``C_h = int |t h'(t)| dt`` is computed by quadrature on construction over
    ``log t`` in ``support``.  ``transform`` is an optional closed form of the
    symbol ``h~(lam)``, used only to report the quadrature error.
    """

    h: Callable
    dh: Callable
    support: tuple
    name: str = "h"
    transform: Optional[Callable] = None
    tol: float = 1e-10
    C_h: float = field(init=False)

    def __post_init__(self):
        lo, hi = (math.log(v) for v in self.support)
        self._bps = list(np.linspace(lo, hi, 9)[1:-1])
        self.C_h, _ = integrate(lambda v: np.abs(np.exp(v) * self.dh(np.exp(v))) * np.exp(v),
                                lo, hi, abs_tol=self.tol, breakpoints=self._bps)
        self.C_h = float(self.C_h)
        # |t h(t)| must be decaying towards both ends: monotone over the last four decades
        probe = np.array([1e-8, 1e-6, 1e-4, 1e4, 1e6, 1e8])
        th = np.abs(probe * self.h(probe))
        self.end_values = th[[0, -1]]
        if not np.isfinite(self.C_h):
            raise ValueError("C_h is not finite")
        small_ok = th[0] == 0 or (th[0] < th[1] < th[2])
        large_ok = th[-1] == 0 or (th[-1] < th[-2] < th[-3])
        if not (small_ok and large_ok):
            raise ValueError(f"|t h(t)| does not decay at t = 1e-8 and 1e8: {self.end_values}")

    @classmethod
    def exponential(cls):
        """``h(t) = e^(-t)``, so ``h~(lam) = 1 / (1 + lam)`` and ``C_h = 1``."""
        return cls(lambda t: np.exp(-t), lambda t: -np.exp(-t), (1e-14, 800.0), "exp",
                   lambda lam: 1.0 / (1.0 + lam))

    @classmethod
    def stable_density(cls, alpha, u=1.0, abs_tol=1e-10):
        """``h = p_u``, the one-sided stable density, so ``h~(lam) = exp(-u lam^alpha)``."""
        model = stable.StableDensityModel(alpha, abs_tol=abs_tol)
        a = model.alpha
        scale = u ** (1.0 / a)

        def h(t):
            return stable.stable_density(model, u, t)

        def dh(t):
            return stable.p1_derivative(model, np.asarray(t) / scale) / scale ** 2

        support = (stable.ORIGIN_CUTOFF * scale, model.grid_truncation * scale)
        return cls(h, dh, support, f"p_u(alpha={a:g},u={u:g})",
                   lambda lam: np.exp(-u * fractional_power(lam, a)), tol=abs_tol)

    def symbol(self, lam):
        """``h~(lam) = int h(t) e^(-t lam) dt`` by quadrature, vectorised over ``lam``."""
        lam = np.asarray(lam, dtype=float)
        lo, hi = (math.log(v) for v in self.support)

        def g(v):
            t = np.exp(v)
            return (self.h(t) * t)[:, None] * np.exp(-np.outer(t, lam))

        val, _ = integrate(g, lo, hi, abs_tol=self.tol, breakpoints=self._bps)
        return val


def laplace_type_check(L, h, f, grid=None, slack=1e-6):
    """Check ``|h~(L) f| <= C_h A* f`` pointwise.

    Returns a report with the largest ratio ``|h~(L) f| / (C_h A* f)`` (must
    not exceed ``1 + slack``) and, when ``h`` carries a closed-form symbol,
    the quadrature error of the symbol.
    """
    D = _decomp(L)
    f = np.asarray(f, dtype=float)
    sym = h.symbol(D.eigenvalues)
    lhs = np.abs(apply_scalar_function(D, sym, f))
    Af = maximal_average(D, f, grid)
    rhs = h.C_h * Af
    ok = rhs > 1e-300
    ratio = np.where(ok, lhs / np.where(ok, rhs, 1.0), 0.0)
    worst = float(ratio.max()) if ratio.size else 0.0
    bad_zero = bool(np.any((~ok) & (lhs > 1e-14)))
    rep = VerificationReport(f"laplace_type {h.name}")
    rep.add("C_h", h.C_h, None, np.isfinite(h.C_h))
    rep.add("domination_ratio", worst, 1 + slack, worst <= 1 + slack and not bad_zero,
            paper=True, paper_constant=1.0, grid=f"{len(D.eigenvalues)} points")
    if h.transform is not None:
        err = float(np.abs(sym - h.transform(D.eigenvalues)).max())
        rep.add("symbol_error", err, 10 * h.tol, err <= 10 * h.tol)
    rep.data.update(lhs=lhs, maximal=Af, symbol=sym)
    return rep


def _sector_samples(alpha, theta, scale, rays, per_decade, decades):
    angles = np.union1d(np.linspace(-theta, theta, rays), [0.0])
    n = int(round(2 * decades * per_decade)) + 1
    radii = np.logspace(-decades, decades, n) * scale
    return (radii[None, :] * np.exp(1j * angles[:, None])).ravel()


def _sector_maximal(D, alpha, us, f):
    lam_a = fractional_power(D.eigenvalues, alpha)
    out = np.zeros(f.shape)
    V = D.eigenvectors
    w = D.weights if f.ndim == 1 else D.weights[:, None]
    coef = V.T @ (w * f)
    for start in range(0, len(us), 256):
        rows = np.exp(-np.outer(us[start:start + 256], lam_a))
        if f.ndim == 1:
            vals = (rows * coef) @ V.T
        else:
            vals = np.einsum("nr,tr,rm->tnm", V, rows, coef, optimize=True)
        out = np.maximum(out, np.abs(vals).max(axis=0))
    return np.maximum(out, _limits(D, f))


def sector_maximal_check(L, alpha, theta, f, rays=32, per_decade=64, decades=3.0, grid=None):
    """Sector maximal function ``sup_u |exp(-u L^alpha) f|`` over a polar grid in ``|arg u| <= theta``.

    Reports the empirical constant ``C_emp = max M_sec f / A* f``, its value
    with rays and radii both doubled (stable when within 5%), and a weak-type
    table for ``M_sec`` in ``data``.  No numerical bound is asserted.
    """
    alpha = stable.stability_index(alpha)
    cone = (1 - alpha) * math.pi / 2
    if not (0 <= theta < cone):
        raise ValueError(f"theta must lie in [0, {cone:.6g})")
    D = _decomp(L)
    f = np.asarray(f, dtype=float)
    gap = D.spectral_gap if np.isfinite(D.spectral_gap) else 1.0
    scale = gap ** (-alpha)
    Af = maximal_average(D, f, grid)

    def c_emp(r, pd):
        us = _sector_samples(alpha, theta, scale, r, pd, decades)
        M = _sector_maximal(D, alpha, us, f)
        ok = Af > 1e-300
        return float(np.max(np.where(ok, M / np.where(ok, Af, 1.0), 0.0))), M, len(us)

    c1, M, n1 = c_emp(rays, per_decade)
    c2, _, n2 = c_emp(2 * rays, 2 * per_decade)
    stable_ok = abs(c2 - c1) <= 0.05 * c1 if c1 > 0 else c2 == 0
    rep = VerificationReport(f"sector_maximal alpha={alpha:g} theta={theta:.6g}")
    rep.add("C_emp", c1, None, bool(np.isfinite(c1)), grid=f"{n1} samples")
    rep.add("C_emp_doubled", c2, None, bool(np.isfinite(c2)), grid=f"{n2} samples")
    rep.add("C_emp_stability", abs(c2 - c1) / c1 if c1 > 0 else 0.0, 0.05, stable_ok)
    mu = D.weights
    if f.ndim == 1:
        norm1 = float(np.sum(np.abs(f) * mu))
        crit = np.unique(M[M > 0]) * (1 - 1e-12)
        table = [(float(lam), float(mu[M > lam].sum()),
                  float(lam * mu[M > lam].sum() / norm1) if norm1 else 0.0) for lam in crit]
        rep.data["weak_type"] = table
    rep.data.update(sector_maximal=M, maximal=Af)
    return rep


def fourier_l1_bound_check(g, g2=None, half_width=60.0, n=2 ** 16, slack=1e-3):
    """Check ``int |g^| <= pi^2 (||g|| + ||s^2 g||^(1/2) ||g''||^(1/2) + ||s^2 g''||)``.

    Convention ``g^(t) = int g(s) e^(-ist) ds``.  The transform is a Riemann sum
    evaluated by FFT on ``n`` points of ``[-half_width, half_width)``; sup
    norms are taken on the same grid.  ``g2`` defaults to a second difference.
    """
    s = np.linspace(-half_width, half_width, n, endpoint=False)
    ds = s[1] - s[0]
    gs = np.asarray(g(s), dtype=complex)
    g2s = np.asarray(g2(s), dtype=complex) if g2 is not None else np.gradient(
        np.gradient(gs, ds), ds)
    ghat = ds * np.fft.fft(gs)
    dt = 2 * np.pi / (n * ds)
    lhs = float(np.sum(np.abs(ghat)) * dt)
    sup_g = np.abs(gs).max()
    sup_s2g = np.abs(s ** 2 * gs).max()
    sup_g2 = np.abs(g2s).max()
    sup_s2g2 = np.abs(s ** 2 * g2s).max()
    rhs = float(np.pi ** 2 * (sup_g + math.sqrt(sup_s2g * sup_g2) + sup_s2g2))
    rep = VerificationReport("fourier_l1_bound")
    rep.add("lhs_l1_transform", lhs, None, np.isfinite(lhs), grid=f"FFT n={n}, |s|<={half_width:g}")
    rep.add("rhs_bound", rhs, None, np.isfinite(rhs))
    rep.add("bound_holds", lhs, rhs * (1 + slack), lhs <= rhs * (1 + slack), paper=True)
    rep.data.update(sup_g=sup_g, sup_s2g=sup_s2g, sup_g2=sup_g2, sup_s2g2=sup_s2g2)
    return rep
