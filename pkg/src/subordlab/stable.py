"""One-sided alpha-stable subordinator densities.

``p_u(t)`` is the density on ``(0, inf)`` whose Laplace transform is
``exp(-u s**alpha)``.  Everything is reduced to ``p_1`` through the scaling
law ``p_u(t) = u**(-1/alpha) p_1(u**(-1/alpha) t)``; ``p_1`` itself is
computed by one of three routes:

``fourier-inversion``
    The inverse Fourier transform of ``m_1(y) = exp(-(iy)**alpha)``, with the
    integration line swung into the half plane where ``m_1`` continues
    analytically.  On the ray ``z = r exp(i psi)``, ``pi/2 < psi <= pi``, the
    factor ``exp(t z)`` decays exponentially, which damps the oscillation.
``real-integral-representation``
    Kanter's positive integral over ``(0, pi)``.
``closed-form-half``
    ``(2 sqrt(pi))**-1 t**-1.5 exp(-1/(4t))``, valid only for alpha = 1/2.
"""

import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gamma

from ._quadrature import integrate
from .reports import VerificationReport

__all__ = [
    "METHODS", "ORIGIN_CUTOFF", "StableDensityModel", "stability_index",
    "stable_density", "stable_density_complex", "p1_derivative", "tail_constant",
    "laplace_transform", "density_audit", "AuditGrid", "convolution", "fit_loglog_slope",
]

METHODS = ("fourier-inversion", "real-integral-representation", "closed-form-half")
ORIGIN_CUTOFF = 1e-6


def stability_index(alpha):
    """Validate a stability index; returns it as a float in (0, 1)."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0) or not math.isfinite(alpha):
        raise ValueError(f"stability index must lie in the open interval (0, 1), got {alpha}")
    return alpha


def tail_constant(alpha):
    """Leading coefficient ``c`` of ``p_1(t) ~ c t**(-1-alpha)`` as t -> inf."""
    return gamma(1 + alpha) * math.sin(math.pi * alpha) / math.pi


def _default_truncation(alpha, abs_tol):
    # neglected mass ~ c T^-alpha / alpha; a factor 2 covers the next term of the expansion
    c = tail_constant(alpha)
    return (20.0 * c / (alpha * abs_tol)) ** (1.0 / alpha)


@dataclass(frozen=True)
class StableDensityModel:
    """Evaluator settings for ``p_u``.

    ``grid_truncation`` is the cutoff ``T`` for t-integrals over ``(0, inf)``;
    left as ``None`` it is chosen so the mass beyond ``T`` is below
    ``abs_tol / 10``.
    """

    alpha: float
    method: str = "fourier-inversion"
    abs_tol: float = 1e-10
    grid_truncation: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", stability_index(self.alpha))
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.method == "closed-form-half" and self.alpha != 0.5:
            raise ValueError("closed-form-half is only valid for alpha = 1/2")
        if not (self.abs_tol > 0):
            raise ValueError("abs_tol must be positive")
        if self.grid_truncation is None:
            object.__setattr__(self, "grid_truncation",
                               _default_truncation(self.alpha, self.abs_tol))
        elif not (self.grid_truncation > 0):
            raise ValueError("grid_truncation must be positive")


# ---------------------------------------------------------------------------
# p_1 evaluators (vectorised over t > 0)

def _p1_closed_half(t):
    return np.exp(-0.25 / t) / (2.0 * math.sqrt(math.pi) * t ** 1.5)


def _rotation_angle(alpha, t_large):
    if t_large:
        return math.pi
    return 0.5 * (0.5 * math.pi + min(math.pi, 0.5 * math.pi / alpha))


def _p1_fourier(alpha, t, abs_tol):
    out = np.empty_like(t)
    big = t >= 1.0
    if big.any():
        tb = t[big]
        # psi = pi: integrand exp(-s) exp(-(s/t)^a e^{i a pi}), s = exp(v)
        ea = np.exp(1j * math.pi * alpha)
        grow = max(0.0, -math.cos(math.pi * alpha))
        smax = 50.0
        while smax - grow * smax ** alpha < 45.0:
            smax *= 1.5
        smin = 1e-18 ** (1.0 / (1.0 + alpha))
        scale = tb ** alpha

        def f(v):
            s = np.exp(v)[:, None]
            w = (s / tb[None, :]) ** alpha
            val = -np.exp(-s - w * ea).imag
            return val * s * scale[None, :]

        val, _ = integrate(f, math.log(smin), math.log(smax), abs_tol=1e-300,
                           rel_tol=min(1e-12, abs_tol), breakpoints=[0.0, 2.0, 3.0])
        out[big] = val / (math.pi * tb ** (1.0 + alpha))
    small = ~big
    if small.any():
        ts = t[small]
        psi = _rotation_angle(alpha, False)
        e1 = np.exp(1j * psi)
        ea = np.exp(1j * alpha * psi)
        caps = [45.0 / (ts.min() * abs(math.cos(psi)))]
        if math.cos(alpha * psi) > 1e-3:
            caps.append((45.0 / math.cos(alpha * psi)) ** (1.0 / alpha))
        rmax = min(caps)

        def g(v):
            r = np.exp(v)[:, None]
            val = (e1 * np.exp(ts[None, :] * r * e1 - r ** alpha * ea)).imag
            return val * r / math.pi

        val, _ = integrate(g, math.log(1e-18), math.log(rmax), abs_tol=abs_tol / 20,
                           rel_tol=1e-13, breakpoints=[0.0])
        # round-off can leave tiny negatives where the density underflows
        out[small] = np.maximum(val, 0.0)
    return out


def _kanter_logA(alpha, phi, eps):
    # phi in (0, pi); eps = pi - phi passed separately to avoid cancellation near pi
    num = alpha * np.log(np.sin(alpha * phi)) + (1 - alpha) * np.log(np.sin((1 - alpha) * phi))
    return (num - np.log(np.sin(eps))) / (1.0 - alpha)


def _p1_kanter(alpha, t, abs_tol):
    x = t ** (-alpha / (1.0 - alpha))
    coef = alpha / (1.0 - alpha) * t ** (-1.0 / (1.0 - alpha)) / math.pi

    def weight(logA):
        # A exp(-x A) evaluated in log form so huge A underflows cleanly to 0
        with np.errstate(over="ignore"):
            return coef * np.exp(logA - x * np.exp(np.minimum(logA, 700.0)))

    def lower(phi):
        return weight(_kanter_logA(alpha, phi[:, None], math.pi - phi[:, None]))

    def upper(w):
        eps = np.exp(w)[:, None]
        return weight(_kanter_logA(alpha, math.pi - eps, eps)) * eps

    tol = abs_tol / 40
    v1, _ = integrate(lower, 0.0, 0.5 * math.pi, abs_tol=tol, rel_tol=1e-12)
    v2, _ = integrate(upper, math.log(1e-300), math.log(0.5 * math.pi), abs_tol=tol,
                      rel_tol=1e-12, breakpoints=[-600.0, -300.0, -100.0, -30.0, -10.0])
    return v1 + v2


_CACHE = {}
_CACHE_LOCK = threading.Lock()
_CACHE_LIMIT = 2_000_000


def _p1(model, t):
    """p_1 on a float array of t >= ORIGIN_CUTOFF, memoised per model."""
    key = (model.alpha, model.method, model.abs_tol)
    with _CACHE_LOCK:
        table = _CACHE.setdefault(key, {})
        known = np.array([table.get(v, np.nan) for v in t.tolist()], dtype=float)
    missing = np.isnan(known)
    if missing.any():
        tm = np.unique(t[missing])
        if model.method == "closed-form-half":
            vals = _p1_closed_half(tm)
        elif model.method == "fourier-inversion":
            vals = _p1_fourier(model.alpha, tm, model.abs_tol)
        else:
            vals = _p1_kanter(model.alpha, tm, model.abs_tol)
        with _CACHE_LOCK:
            if len(table) > _CACHE_LIMIT:
                table.clear()
            table.update(zip(tm.tolist(), vals.tolist()))
            known = np.array([table[v] for v in t.tolist()], dtype=float)
    return known


def stable_density(model, u, t):
    """Evaluate ``p_u(t)``.

    Parameters
    ----------
    model : StableDensityModel
    u : float
        Positive time of the subordinator.
    t : float or array_like
        Evaluation points; the density is exactly 0 for ``t <= 0``.

    Returns
    -------
    float or ndarray
        Same shape as ``t``.
    """
    u = float(u)
    if not (math.isfinite(u) and u > 0):
        raise ValueError(f"u must be positive and finite, got {u}")
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)):
        raise ValueError("t must be finite")
    scale = u ** (-1.0 / model.alpha)
    x = np.atleast_1d(scale * t_arr).ravel()
    out = np.zeros_like(x)
    live = x >= ORIGIN_CUTOFF
    if live.any():
        out[live] = scale * _p1(model, x[live])
    out = out.reshape(t_arr.shape)
    return float(out) if out.ndim == 0 else out


def stable_density_complex(model, u, t):
    """``p_u(t)`` for complex ``u`` in the cone ``|arg u| <= 0.9 pi (1 - alpha) / 2``.

    The continued density need not be real or nonnegative.  Computed from the
    Bromwich integral on two rays at angles ``+-psi``.
    """
    alpha = model.alpha
    u = complex(u)
    t = float(t)
    if t <= 0:
        return 0j
    limit = 0.9 * math.pi * (1 - alpha) / 2
    if abs(np.angle(u)) > limit + 1e-15 or u == 0:
        raise ValueError(f"|arg u| must not exceed {limit:.6g}")
    psi_max = min(math.pi, (0.5 * math.pi - abs(np.angle(u))) / alpha)
    psi = 0.5 * (0.5 * math.pi + psi_max)
    margin = 0.5 * math.pi - abs(np.angle(u)) - alpha * psi
    rmax = min(45.0 / (t * abs(math.cos(psi))),
               (45.0 / (abs(u) * math.sin(margin))) ** (1.0 / alpha) if margin > 1e-3 else np.inf)

    def f(v):
        r = np.exp(v)
        zp = r * np.exp(1j * psi)
        zm = r * np.exp(-1j * psi)
        a = np.exp(1j * psi) * np.exp(t * zp - u * zp ** alpha)
        b = np.exp(-1j * psi) * np.exp(t * zm - u * zm ** alpha)
        return (a - b) * r / (2j * math.pi)

    hi = math.log(rmax)
    lo = min(math.log(1e-18), hi - 46.0)
    # near the cone edge the integrand is large before it decays; cancellation
    # then limits the attainable accuracy to a few ulps of its peak
    peak = float(np.abs(f(np.linspace(lo, hi, 2001))).max())
    tol = max(model.abs_tol / 20, 1e-13 * peak)
    val, _ = integrate(f, lo, hi, abs_tol=tol, rel_tol=1e-13, breakpoints=[0.0, -math.log(t)])
    return complex(val)


def p1_derivative(model, t, order=1):
    """Central-difference derivative of ``p_1``; the step scales with ``t``."""
    t = np.asarray(t, dtype=float)
    rel = max(model.abs_tol, 1e-13)
    if order == 1:
        h = t * rel ** (1.0 / 3.0)
        return (stable_density(model, 1.0, t + h) - stable_density(model, 1.0, t - h)) / (2 * h)
    if order == 2:
        h = t * rel ** 0.25
        return (stable_density(model, 1.0, t + h) - 2 * stable_density(model, 1.0, t)
                + stable_density(model, 1.0, t - h)) / h ** 2
    raise ValueError("order must be 1 or 2")


def laplace_transform(model, u, s, abs_tol=None):
    """``int_0^inf p_u(t) exp(-t s) dt`` by quadrature in log t."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    abs_tol = model.abs_tol if abs_tol is None else abs_tol
    lo = math.log(ORIGIN_CUTOFF * u ** (1 / model.alpha))
    hi = math.log(model.grid_truncation * u ** (1 / model.alpha))

    def f(v):
        t = np.exp(v)
        return (stable_density(model, u, t) * t)[:, None] * np.exp(-np.outer(t, s))

    val, _ = integrate(f, lo, hi, abs_tol=abs_tol, breakpoints=np.arange(-10.0, 40.0, 2.5))
    return val


def convolution(model, u, v, t):
    """``(p_u * p_v)(t) = int_0^t p_u(s) p_v(t - s) ds`` for a scalar ``t``."""
    t = float(t)
    if t <= 0:
        return 0.0
    half = 0.5 * t
    tol = model.abs_tol / 10

    def left(w):  # s = half * exp(w)
        s = half * np.exp(w)
        return stable_density(model, u, s) * stable_density(model, v, t - s) * s

    def right(w):  # t - s = half * exp(w)
        r = half * np.exp(w)
        return stable_density(model, u, t - r) * stable_density(model, v, r) * r

    lo = math.log(ORIGIN_CUTOFF * min(u, v) ** (1 / model.alpha) / half) if half > 0 else -40.0
    lo = min(lo, -1.0)
    a, _ = integrate(left, lo, 0.0, abs_tol=tol)
    b, _ = integrate(right, lo, 0.0, abs_tol=tol)
    return float(a + b)


def fit_loglog_slope(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.polyfit(np.log(x), np.log(np.abs(y)), 1)[0])


@dataclass(frozen=True)
class AuditGrid:
    """Log-spaced t grid for :func:`density_audit`."""

    t_min: float = 1e-4
    t_max: float = 1e4
    points_per_decade: int = 10
    conv_points_per_decade: int = 2
    conv_u: float = 1.0
    conv_v: float = 2.0

    def points(self):
        decades = math.log10(self.t_max / self.t_min)
        n = int(round(decades * self.points_per_decade)) + 1
        return np.logspace(math.log10(self.t_min), math.log10(self.t_max), n)


def density_audit(model, grid=None, mass_tol=1e-6, slope_tol=0.05):
    """Certify positivity, mass, tail/origin decay and the convolution law.

    Checks recorded on the returned report: ``min_density``, ``mass_error``,
    ``tail_slope``, ``derivative_tail_slope``, ``origin_decay_N`` for
    N in {2, 4, 8}, and ``convolution_residual``.
    """
    grid = grid or AuditGrid()
    alpha = model.alpha
    ts = grid.points()
    p = stable_density(model, 1.0, ts)
    rep = VerificationReport(f"stable_density alpha={alpha:g} method={model.method}")
    gdesc = f"logspace[{grid.t_min:g},{grid.t_max:g}]x{grid.points_per_decade}/decade"
    rep.data.update(t=ts, density=p)

    rep.add("min_density", p.min(), -model.abs_tol, p.min() >= -model.abs_tol, paper=True,
            grid=gdesc)

    T = model.grid_truncation
    mass, _ = integrate(lambda v: stable_density(model, 1.0, np.exp(v)) * np.exp(v),
                        math.log(ORIGIN_CUTOFF), math.log(T), abs_tol=min(mass_tol, model.abs_tol) / 10,
                        breakpoints=np.arange(-10.0, math.log(T), 2.5))
    rep.add("mass_error", abs(mass - 1.0), mass_tol, abs(mass - 1.0) <= mass_tol, paper=True,
            paper_constant=1.0, grid=f"adaptive log-t on [{ORIGIN_CUTOFF:g},{T:.3g}]")

    tail = (ts >= 1e2) & (ts <= 1e4)
    slope = fit_loglog_slope(ts[tail], p[tail]) if tail.sum() >= 2 else np.nan
    rep.add("tail_slope", slope, -(1 + alpha), abs(slope + 1 + alpha) <= slope_tol, paper=True,
            paper_constant=-(1 + alpha), grid="t in [1e2,1e4]")
    dp = p1_derivative(model, ts[tail])
    dslope = fit_loglog_slope(ts[tail], dp) if tail.sum() >= 2 else np.nan
    rep.add("derivative_tail_slope", dslope, -(2 + alpha), abs(dslope + 2 + alpha) <= 0.1,
            paper=True, paper_constant=-(2 + alpha), grid="t in [1e2,1e4]")

    below = ts < 1.0
    for N in (2, 4, 8):
        cn = float(np.max(p[below] / ts[below] ** N)) if below.any() else 0.0
        rep.add(f"origin_decay_{N}", cn, None, math.isfinite(cn), grid="t < 1")

    cgrid = AuditGrid(grid.t_min, grid.t_max, grid.conv_points_per_decade).points()
    u, v = grid.conv_u, grid.conv_v
    conv = np.array([convolution(model, u, v, t) for t in cgrid])
    direct = stable_density(model, u + v, cgrid)
    resid = float(np.max(np.abs(conv - direct)))
    rep.data.update(conv_t=cgrid, conv=conv, conv_direct=direct)
    rep.add("convolution_residual", resid, 10 * model.abs_tol, resid <= 10 * model.abs_tol,
            paper=True, grid=f"u={u:g}, v={v:g}, {grid.conv_points_per_decade}/decade")
    return rep
