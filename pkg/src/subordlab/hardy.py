"""Square functions, Hardy and BMO norms and kernel bounds on finite metric measure spaces.

The basic building block is ``Q(z) = z e^(-z)`` evaluated at
``t^(m alpha) L^alpha``: the area function ``S`` integrates its square over
the cone ``rho(x, y) < t`` against ``dmu(y) dt / t^(n+1)``, the vertical
function ``G`` over ``dt / t`` at ``y = x``.  Time integrals use a dyadic grid
with a fixed number of cells per octave, midpoint rule in ``log t``; the cone
indicator is integrated exactly inside each cell.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ._quadrature import integrate
from .reports import VerificationReport, write_csv
from .spectral import SelfAdjointOperator, fractional_power, kernel_of

__all__ = [
    "RegularityProfile", "regularity_audit", "ball_radii", "TimeSpaceGrid", "HardyParams",
    "square_functions", "hardy_norm", "bmo_norm", "kernel_bound_audit", "peetre_maximal",
    "equivalence_experiment", "hardy_f_family", "calderon_constant", "calderon_check",
    "phi_closed_form", "phi_identity_check", "hl_maximal", "decay_average_check",
    "Q_symbol", "cross_scale_slope",
]


def _decomp(L):
    return L.decomposition if isinstance(L, SelfAdjointOperator) else L


# ---------------------------------------------------------------------------
# volume regularity

@dataclass(frozen=True)
class RegularityProfile:
    """``c_lower r^n <= mu(B(x, r)) <= c_upper r^n`` over ``fit_window``."""

    n: float
    c_lower: float
    c_upper: float
    fit_window: tuple
    residual: float
    method: str = "envelope"


def ball_radii(space, r_min=0.0, r_max=np.inf):
    """Radii halfway between consecutive distinct distances, inside ``[r_min, r_max]``.

    At such radii open and closed balls coincide, so the fit does not depend
    on the boundary convention.
    """
    d = np.unique(space.metric)
    mids = 0.5 * (d[1:] + d[:-1])
    return mids[(mids >= r_min) & (mids <= r_max)]


def regularity_audit(space, window, fit="envelope"):
    """Fit ``mu(B(x, r)) ~ r^n`` over all centres and the radii of :func:`ball_radii`.

    ``fit="envelope"`` picks the ``n`` minimising ``c_upper / c_lower`` (a
    small linear program); ``fit="lstsq"`` is the pooled least-squares slope of
    ``log mu(B)`` on ``log r``.  Either way the constants are the observed
    envelope for the chosen ``n``.
    """
    r_min, r_max = map(float, window)
    if len(space) < 2 or space.mesh_scale == 0:
        raise ValueError("degenerate window: the space has no positive distances")
    if not (space.mesh_scale <= r_min < r_max <= space.diameter / 2 + 1e-12):
        raise ValueError(f"degenerate window {window}: must lie within "
                         f"[{space.mesh_scale:g}, {space.diameter / 2:g}]")
    radii = ball_radii(space, r_min, r_max)
    if radii.size < 2:
        raise ValueError(f"degenerate window {window}: fewer than two admissible radii")
    mu = space.weights
    vol = np.array([[mu[space.metric[x] < r].sum() for r in radii] for x in range(len(space))])
    lr = np.broadcast_to(np.log(radii), vol.shape).ravel()
    lv = np.log(vol).ravel()
    if fit == "lstsq":
        n = float(np.polyfit(lr, lv, 1)[0])
    elif fit == "envelope":
        # minimise hi - lo subject to lo <= lv - n lr <= hi; variables (n, lo, hi)
        A = np.vstack([np.column_stack([-lr, np.zeros_like(lr), -np.ones_like(lr)]),
                       np.column_stack([lr, np.ones_like(lr), np.zeros_like(lr)])])
        b = np.concatenate([-lv, lv])
        res = linprog([0, -1, 1], A_ub=A, b_ub=b, bounds=[(1e-6, None), (None, None), (None, None)],
                      method="highs")
        if not res.success:
            raise RuntimeError(f"envelope fit failed: {res.message}")
        n = float(res.x[0])
    else:
        raise ValueError(f"unknown fit {fit!r}")
    c = vol / radii[None, :] ** n
    resid = lv - n * lr
    return RegularityProfile(n, float(c.min()), float(c.max()), (r_min, r_max),
                             float(np.std(resid)), fit)


# ---------------------------------------------------------------------------
# time grid and parameters

@dataclass(frozen=True)
class TimeSpaceGrid:
    """Cells ``[scale 2^(j + i/sub), scale 2^(j + (i+1)/sub)]`` for ``j_min <= j < j_max``.

    Values are taken at the log-midpoint of each cell.
    """

    j_min: int = -6
    j_max: int = 6
    sub: int = 8
    scale: float = 1.0

    def __post_init__(self):
        if self.j_min > -6 or self.j_max < 6:
            raise ValueError("the dyadic range must cover at least [-6, 6]")
        if self.sub < 1:
            raise ValueError("sub must be positive")

    @property
    def edges(self):
        k = np.arange((self.j_max - self.j_min) * self.sub + 1)
        return self.scale * 2.0 ** (self.j_min + k / self.sub)

    @property
    def t(self):
        e = self.edges
        return np.sqrt(e[1:] * e[:-1])

    @property
    def dlog(self):
        return math.log(2.0) / self.sub

    def refined(self):
        return TimeSpaceGrid(self.j_min, self.j_max, 2 * self.sub, self.scale)

    @classmethod
    def for_operator(cls, L, alpha, m, sub=8, low=1e-4, high=40.0):
        """Dyadic range in units of the mesh scale wide enough that ``Q`` is negligible outside.

        Below the range ``t^(m alpha) lam_max^alpha <= low``; above it
        ``t^(m alpha) gap^alpha >= high``.
        """
        D = _decomp(L)
        h = L.space.mesh_scale if isinstance(L, SelfAdjointOperator) else 1.0
        h = h if h > 0 else 1.0
        lam_max = max(D.spectral_radius, 1e-300)
        gap = D.spectral_gap if np.isfinite(D.spectral_gap) else lam_max
        ma = m * alpha
        t_lo = (low / lam_max ** alpha) ** (1 / ma)
        t_hi = (high / gap ** alpha) ** (1 / ma)
        j_min = min(-6, int(math.floor(math.log2(t_lo / h))))
        j_max = max(6, int(math.ceil(math.log2(t_hi / h))))
        return cls(j_min, j_max, sub, h)


@dataclass(frozen=True)
class HardyParams:
    """``alpha`` in ``(0, 1]``, ``p`` in ``(n/(n + delta0), 1]``, ``nu`` in ``[0, delta0/n)``."""

    alpha: float = 1.0
    p: float = 1.0
    m: float = 2.0
    delta0: float = 1.0
    nu: float = 0.0
    n: float = 1.0

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if self.m < 1 or self.delta0 <= 0 or self.n < 0:
            raise ValueError("need m >= 1, delta0 > 0 and n >= 0")
        lo = self.n / (self.n + self.delta0)
        if not (lo < self.p <= 1):
            raise ValueError(f"p must lie in ({lo:.6g}, 1]")
        top = self.delta0 / self.n if self.n > 0 else math.inf
        if not (0 <= self.nu < top):
            raise ValueError(f"nu must lie in [0, {top:.6g})")

    def with_alpha(self, alpha):
        return HardyParams(alpha, self.p, self.m, self.delta0, self.nu, self.n)


def Q_symbol(t, lam, alpha, m):
    """``Q(t^(m alpha) lam^alpha)`` with ``Q(z) = z e^(-z)``; shape ``(len(t), len(lam))``."""
    v = np.outer(np.atleast_1d(t) ** (m * alpha), fractional_power(lam, alpha))
    return v * np.exp(-v)


def _q_values(D, params, f, grid):
    sym = Q_symbol(grid.t, D.eigenvalues, params.alpha, params.m)
    V = D.eigenvectors
    coef = V.T @ (D.weights[:, None] * f)
    return np.einsum("nr,tr,rk->tnk", V, sym, coef, optimize=True)


def _cone_weights(space, grid):
    """Fraction of each log-cell with ``t > rho(x, y)``; shape ``(cells, n, n)``."""
    e = np.log(grid.edges)
    with np.errstate(divide="ignore"):
        lr = np.log(space.metric)
    lo, hi = e[:-1, None, None], e[1:, None, None]
    return np.clip((hi - np.maximum(lo, lr[None])) / (hi - lo), 0.0, 1.0)


def square_functions(L, params, f, grid=None):
    """Area and vertical square functions ``(S f, G f)``.

    ``f`` may be a single vector or an ``(n, k)`` array of columns; the
    outputs have the same shape.
    """
    D = _decomp(L)
    space = L.space
    grid = grid or TimeSpaceGrid.for_operator(L, params.alpha, params.m)
    f = np.asarray(f, dtype=float)
    one = f.ndim == 1
    F = f[:, None] if one else f
    q2 = np.abs(_q_values(D, params, F, grid)) ** 2
    G = np.sqrt(q2.sum(axis=0) * grid.dlog)
    W = _cone_weights(space, grid) * (space.weights[None, None, :]
                                      / grid.t[:, None, None] ** params.n)
    S = np.sqrt(np.einsum("txy,tyk->xk", W, q2, optimize=True) * grid.dlog)
    return (S[:, 0], G[:, 0]) if one else (S, G)


def _lp(values, mu, p):
    values = np.abs(values)
    if values.ndim == 1:
        return float(np.sum(values ** p * mu) ** (1 / p))
    return np.sum(values ** p * mu[:, None], axis=0) ** (1 / p)


def hardy_norm(L, params, f, grid=None):
    """``||S f||_p`` with the discrete quasi-norm ``(sum |S f|^p mu)^(1/p)``."""
    S, _ = square_functions(L, params, f, grid)
    return _lp(S, L.space.weights, params.p)


def bmo_norm(L, params, f, radii=None):
    """Sup over balls of ``(|B|^-(1+2 nu) int_B |(I - exp(-r^(m alpha) L^alpha)) f|^2)^(1/2)``.

    Default radii: one below the mesh scale, the midpoints between distinct
    distances, and one beyond the diameter.
    """
    D = _decomp(L)
    space = L.space
    mu = space.weights
    f = np.asarray(f, dtype=float)
    if radii is None:
        h = space.mesh_scale or 1.0
        radii = np.concatenate([[0.5 * h], ball_radii(space), [2 * space.diameter + h]])
    lam_a = fractional_power(D.eigenvalues, params.alpha)
    V = D.eigenvectors
    coef = V.T @ (mu * f)
    best = 0.0
    for r in np.asarray(radii, dtype=float):
        sym = -np.expm1(-r ** (params.m * params.alpha) * lam_a)
        g2 = np.abs(V @ (sym * coef)) ** 2 * mu
        B = (space.metric < r).astype(float)
        vol = B @ mu
        val = np.sqrt((B @ g2) / vol ** (1 + 2 * params.nu))
        best = max(best, float(val.max()))
    return best


# ---------------------------------------------------------------------------
# kernel bounds

def _pu_profile(scale, rho, n, exponent):
    """``scale^-n (scale / (scale + rho))^exponent`` for a length scale."""
    return scale ** (-n) * (scale / (scale + rho)) ** exponent


def cross_scale_slope(L, params, s, t_values):
    """Log-log slope of ``sup |h_(s,t)| (s v t)^n`` against ``(s ^ t) / (s v t)``.

    ``h_(s,t)`` is the kernel of ``Q(s^m L) Q(t^(m alpha) L^alpha)``.
    """
    D = _decomp(L)
    lam = D.eigenvalues
    a, m, n = params.alpha, params.m, params.n
    sups, ratios = [], []
    for t in t_values:
        sym = Q_symbol(s, lam, 1.0, m)[0] * Q_symbol(t, lam, a, m)[0]
        K = kernel_of(D, sym)
        big = max(s, t)
        sups.append(np.abs(K).max() * big ** n)
        ratios.append(min(s, t) / big)
    slope = float(np.polyfit(np.log(ratios), np.log(sups), 1)[0])
    return slope, np.array(ratios), np.array(sups)


def kernel_bound_audit(L, params, window=None, points=17, s_fixed=None, t_values=None):
    """Fit the kernel-bound constants and the cross-scale decay exponent.

    The window is taken in length units ``r = t^(1/m)``, defaulting to
    ``[10^(1/m) h, diameter / 10^(1/m)]`` with ``h`` the mesh scale, so that
    heat times span ``[10 h^m, diameter^m / 10]``; when that is empty the
    window ``[h, diameter / 2]`` is used.  Checks (all empirical,
    required only to be finite, except the slope which must be at least
    ``0.8 m alpha``):

    * ``C_PU``: heat kernel against the exponent ``n + delta0``;
    * ``C_qt``: kernel of ``tL exp(-tL)`` against ``n + delta`` with
      ``delta = delta0 / 2``;
    * ``C_alpha``: ``|p^alpha_t| + |q^alpha_t|`` against ``n + delta`` in the
      scale ``t^(1/(m alpha))``;
    * ``C_hst_diag``: ``h_(t,t)`` against ``t^-n (t / (t + rho))^(n+delta)``;
    * ``cross_scale_slope``: see :func:`cross_scale_slope`, with ``s`` fixed
      at the mesh scale and ``t`` at 2, 4, 8, 16 mesh units by default.
    """
    space = L.space
    D = _decomp(L)
    h = space.mesh_scale
    diam = space.diameter
    if h == 0 or diam == 0:
        raise ValueError("window empty: the space has no positive distances")
    m, n, a = params.m, params.n, params.alpha
    delta = params.delta0 / 2
    if window is None:
        lo, hi = 10 ** (1 / m) * h, diam / 10 ** (1 / m)
        if lo >= hi:  # small spaces: fall back to [h, diameter / 2]
            lo, hi = h, diam / 2
    else:
        lo, hi = window
    if not (0 < lo < hi):
        raise ValueError(f"window empty: [{lo:g}, {hi:g}]")
    scales = np.logspace(math.log10(lo), math.log10(hi), points)
    rho = space.metric
    lam = D.eigenvalues
    rep = VerificationReport(f"kernel_bounds {getattr(L, 'name', '')}")
    wdesc = f"r in [{lo:.4g},{hi:.4g}]"
    fits = {"C_PU": 0.0, "C_qt": 0.0, "C_alpha": 0.0, "C_hst_diag": 0.0}
    for r in scales:
        t = r ** m
        heat = kernel_of(D, np.exp(-t * lam))
        qt = kernel_of(D, t * lam * np.exp(-t * lam))
        fits["C_PU"] = max(fits["C_PU"], float(np.max(np.abs(heat) / _pu_profile(r, rho, n, n + params.delta0))))
        fits["C_qt"] = max(fits["C_qt"], float(np.max(np.abs(qt) / _pu_profile(r, rho, n, n + delta))))
        ta = r ** (m * a)
        la = fractional_power(lam, a)
        pa = kernel_of(D, np.exp(-ta * la))
        qa = kernel_of(D, ta * la * np.exp(-ta * la))
        fits["C_alpha"] = max(fits["C_alpha"], float(np.max(
            (np.abs(pa) + np.abs(qa)) / _pu_profile(r, rho, n, n + delta))))
        hst = kernel_of(D, Q_symbol(r, lam, 1.0, m)[0] * Q_symbol(r, lam, a, m)[0])
        fits["C_hst_diag"] = max(fits["C_hst_diag"], float(np.max(
            np.abs(hst) / _pu_profile(r, rho, n, n + delta))))
    for name, val in fits.items():
        rep.add(name, val, None, bool(np.isfinite(val)), grid=wdesc)
    s = h if s_fixed is None else s_fixed
    ts = h * np.array([2.0, 4.0, 8.0, 16.0]) if t_values is None else np.asarray(t_values)
    slope, ratios, sups = cross_scale_slope(L, params, s, ts)
    target = m * a
    rep.add("cross_scale_slope", slope, 0.8 * target, slope >= 0.8 * target, paper=True,
            paper_constant=target, grid=f"s={s:g}, t=" + "/".join(f"{x:g}" for x in ts))
    rep.data.update(cross_ratios=ratios, cross_sups=sups, window=(lo, hi))
    return rep


# ---------------------------------------------------------------------------
# Peetre maximal function and the maximal-function comparison

def peetre_maximal(L, f, t, x, lambda_p, epsilon, s_values, m=None):
    """``sup_s sup_y |Q(s^m L) f(y)| (1 + rho(x, y)/s)^-lambda (s/t ^ t/s)^epsilon``.

    The sup over ``s`` runs over ``s_values`` together with ``t`` itself.
    """
    if not (t > 0 and lambda_p > 0 and epsilon > 0):
        raise ValueError("t, lambda and epsilon must be positive")
    D = _decomp(L)
    m = L.heat_order_m if m is None else m
    f = np.asarray(f, dtype=float)
    s_all = np.union1d(np.asarray(s_values, dtype=float), [t])
    sym = Q_symbol(s_all, D.eigenvalues, 1.0, m)
    V = D.eigenvectors
    coef = V.T @ (D.weights * f)
    Qf = (sym * coef) @ V.T
    rho = L.space.metric[x]
    damp = (1 + rho[None, :] / s_all[:, None]) ** (-lambda_p)
    scale = np.minimum(s_all / t, t / s_all) ** epsilon
    return float(np.max(np.abs(Qf) * damp * scale[:, None]))


def hl_maximal(space, f):
    """Centred Hardy-Littlewood maximal function ``sup_r |B(x, r)|^-1 int_B |f|``."""
    mu = space.weights
    af = np.abs(np.asarray(f, dtype=float)) * mu
    radii = np.concatenate([ball_radii(space), [space.diameter + 1.0]])
    if radii.size == 0:
        radii = np.array([1.0])
    out = np.zeros(len(space))
    for r in radii:
        B = (space.metric < r).astype(float)
        out = np.maximum(out, (B @ af) / (B @ mu))
    return out


def decay_average_check(space, f, n, epsilon, s_values, tol=0.05):
    """Fit ``C`` in ``sum_y s^-n (1 + rho/s)^(-n-eps) |f(y)| mu(y) <= C M f(x)``.

    ``s`` is restricted to ``s >= mesh scale``: below it the left side grows
    like ``s^-n mu(x)`` while ``M f(x) >= |f(x)|`` stays fixed, an artefact of
    the discrete space.  Stable means the constant moves by at most ``tol``
    when the ``s`` grid is refined.
    """
    s_values = np.asarray(s_values, dtype=float)
    s_values = s_values[s_values >= space.mesh_scale]
    if s_values.size == 0:
        raise ValueError("no s values at or above the mesh scale")
    f = np.asarray(f, dtype=float)
    Mf = hl_maximal(space, f)
    af = np.abs(f) * space.weights

    def constant(ss):
        best = 0.0
        per_s = []
        for s in ss:
            K = s ** (-n) * (1 + space.metric / s) ** (-n - epsilon)
            lhs = K @ af
            ok = Mf > 0
            c = float(np.max(lhs[ok] / Mf[ok])) if ok.any() else 0.0
            per_s.append(c)
            best = max(best, c)
        return best, np.array(per_s)

    c1, per_s = constant(s_values)
    fine = np.sort(np.concatenate([s_values, np.sqrt(s_values[1:] * s_values[:-1])]))
    c2, _ = constant(fine)
    rep = VerificationReport("decay_average_vs_maximal")
    rep.add("C", c1, None, bool(np.isfinite(c1)), grid=f"{len(s_values)} s values >= mesh")
    rep.add("C_refined", c2, None, bool(np.isfinite(c2)))
    rep.add("C_s_stability", abs(c2 - c1) / c1 if c1 else 0.0, tol,
            abs(c2 - c1) <= tol * c1 if c1 else True)
    rep.data.update(per_s=per_s, s_values=s_values)
    return rep


# ---------------------------------------------------------------------------
# reproducing identities

def calderon_constant(m):
    """``(int_0^inf Q(t^m)^2 dt/t)^-1`` by quadrature; equals ``4 m``."""
    val, _ = integrate(lambda v: (np.exp(m * v) * np.exp(-np.exp(m * v))) ** 2,
                       -60.0 / m, 6.0, abs_tol=1e-15, rel_tol=1e-14)
    return 1.0 / float(val)


def calderon_check(eigenvalues, m, c_m, tol=1e-8):
    """Residual ``|c_m int_0^inf Q(t^m lam)^2 dt/t - 1|`` per positive eigenvalue."""
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > 0]
    rep = VerificationReport(f"calderon m={m:g} c_m={c_m:g}")
    if lam.size == 0:
        rep.add("residual", 0.0, tol, True)
        return rep
    # t^m lam = e^w spans [e^-40, e^6] for every eigenvalue
    def g(w):
        z = np.exp(w)[:, None] * np.ones_like(lam)[None, :]
        return (z * np.exp(-z)) ** 2 / m

    val, _ = integrate(g, -40.0, 6.0, abs_tol=1e-14, rel_tol=1e-14)
    resid = np.abs(c_m * val - 1.0)
    rep.add("residual", float(resid.max()), tol, bool(resid.max() <= tol), paper=True,
            paper_constant=1.0, grid=f"{lam.size} eigenvalues")
    rep.data["residuals"] = resid
    return rep


def phi_closed_form(t, lam, m, c_m):
    """``(c_m / 2m) a e^(-2a) + (c_m / 4m) e^(-2a)`` with ``a = t^m lam``."""
    a = np.multiply.outer(np.atleast_1d(t) ** m, np.asarray(lam, dtype=float))
    return c_m / (2 * m) * a * np.exp(-2 * a) + c_m / (4 * m) * np.exp(-2 * a)


def phi_identity_check(eigenvalues, t_values, m, c_m, tol=1e-10):
    """Compare ``Phi_t(lam) = c_m int_1^inf ((st)^m lam)^2 e^(-2 (st)^m lam) ds/s`` with its closed form.

    The integral is evaluated by quadrature in ``log s`` directly from the
    definition.  Only positive eigenvalues enter: at ``lam = 0`` the integral
    vanishes while the closed form equals ``c_m / 4m``.
    ``data["minus_sign_deviation"]`` records how far the variant with both
    terms negated is from the quadrature.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    lam = lam[lam > 0]
    if lam.size == 0:
        raise ValueError("no positive eigenvalues")
    t_values = np.atleast_1d(np.asarray(t_values, dtype=float))
    quad = np.empty((len(t_values), len(lam)))
    for i, t in enumerate(t_values):
        def g(v):
            a = (np.exp(v) * t) ** m
            z = a[:, None] * lam[None, :]
            return c_m * z * z * np.exp(-2 * z)

        # beyond (st)^m lam_min = 60 the integrand is below e^-100
        top = math.log(max(2.0, (60.0 / lam.min()) ** (1 / m) / t)) + 1
        quad[i], _ = integrate(g, 0.0, top, abs_tol=1e-14, rel_tol=1e-14)
    closed = phi_closed_form(t_values, lam, m, c_m)
    dev = float(np.abs(quad - closed).max())
    rep = VerificationReport(f"phi_identity m={m:g} c_m={c_m:g}")
    rep.add("symbol_deviation", dev, tol, dev <= tol, paper=True,
            grid=f"{len(t_values)} t x {len(lam)} eigenvalues")
    rep.data["minus_sign_deviation"] = float(np.abs(quad + closed).max())
    rep.data.update(quadrature=quad, closed=closed)
    return rep


# ---------------------------------------------------------------------------
# norm-equivalence experiment

def hardy_f_family(space, seed=0):
    """32 test functions: deltas, differences of deltas, bumps at four scales, random mean-zero.

    Returns ``(F, ids)``.
    """
    N = len(space)
    rng = np.random.default_rng(seed)
    cols, ids = [], []
    anchors = np.linspace(0, N - 1, 8).round().astype(int)
    for i in anchors:
        e = np.zeros(N)
        e[i] = 1.0
        cols.append(e)
        ids.append(f"delta[{i}]")
    for k, i in enumerate(anchors):
        j = anchors[(k + 3) % len(anchors)]
        e = np.zeros(N)
        e[i] += 1.0
        e[j] -= 1.0
        cols.append(e)
        ids.append(f"delta[{i}]-delta[{j}]")
    h = space.mesh_scale or 1.0
    for width in (1, 2, 4, 8):
        for c in (anchors[2], anchors[5]):
            b = np.exp(-(space.metric[c] / (width * h)) ** 2)
            cols.append(b)
            ids.append(f"bump[{c},w={width}]")
    for j in range(8):
        v = rng.standard_normal(N)
        v -= np.sum(v * space.weights) / space.weights.sum()
        cols.append(v)
        ids.append(f"random0[{j}]")
    return np.column_stack(cols), ids


def _spread(values):
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v) & (v > 0)]
    return float(v.max() / v.min()) if v.size else np.nan


def equivalence_experiment(L, params, alphas=(0.5, 1.0), f_family=None, grid_sub=8, band=100.0,
                           stability=0.10):
    """Ratio families behind the Hardy/BMO norm equivalences.

    For each ``f`` and each ``alpha`` the rows carry ``||S_alpha f||_p``,
    ``||S_1 f||_p``, ``||G_alpha f||_p`` and the BMO norms for ``alpha`` and 1.
    Functions annihilated by every square function (the null space of ``L``)
    are excluded.  The summary lists, for each family, the spread max/min and
    its relative change when every time grid is refined twofold; a family
    passes when the spread is at most ``band`` and the change at most
    ``stability``.

    Returns
    -------
    rows : list of tuple
        ``(f_id, alpha, S_alpha, S_1, G_alpha, bmo_alpha, bmo_1)``.
    summary : list of tuple
        ``(family, spread, refined_spread, change, pass)``.
    """
    D = _decomp(L)
    F, ids = f_family if f_family is not None else hardy_f_family(L.space)
    mu = L.space.weights
    p = params.p

    def norms(sub):
        out = {}
        for a in sorted(set(alphas) | {1.0}):
            pa = params.with_alpha(a)
            grid = TimeSpaceGrid.for_operator(L, a, params.m, sub=sub)
            S, G = square_functions(L, pa, F, grid)
            out[a] = (_lp(S, mu, p), _lp(G, mu, p))
        return out

    base, fine = norms(grid_sub), norms(2 * grid_sub)
    bmo = {a: np.array([bmo_norm(L, params.with_alpha(a), F[:, j]) for j in range(F.shape[1])])
           for a in sorted(set(alphas) | {1.0})}
    scale = np.abs(F).max(axis=0)
    live = base[1.0][0] > 1e-12 * np.maximum(scale, 1e-300)
    rows = []
    families = {}
    for a in alphas:
        Sa, Ga = base[a]
        S1 = base[1.0][0]
        Saf, Gaf = fine[a]
        S1f = fine[1.0][0]
        for j in np.flatnonzero(live):
            rows.append((ids[j], a, Sa[j], S1[j], Ga[j], bmo[a][j], bmo[1.0][j]))
        sel = live
        if a != 1.0:
            families[f"S_{a:g}/S_1"] = (Sa[sel] / S1[sel], Saf[sel] / S1f[sel])
            families[f"bmo_{a:g}/bmo_1"] = (bmo[a][sel] / bmo[1.0][sel],) * 2
        families[f"S_{a:g}/G_{a:g}"] = (Sa[sel] / Ga[sel], Saf[sel] / Gaf[sel])
        if a != 1.0:
            families[f"S_1/G_{a:g}"] = (S1[sel] / Ga[sel], S1f[sel] / Gaf[sel])
    summary = []
    for name, (coarse, refined) in families.items():
        s1, s2 = _spread(coarse), _spread(refined)
        change = abs(s2 - s1) / s1 if s1 and np.isfinite(s1) else np.nan
        ok = bool(np.isfinite(s1) and s1 <= band and change <= stability)
        summary.append((name, s1, s2, change, ok))
    return rows, summary


def write_equivalence(path_rows, path_summary, rows, summary):
    write_csv(path_rows, ("f_id", "alpha", "S_alpha", "S_1", "G_alpha", "bmo_alpha", "bmo_1"), rows)
    write_csv(path_summary, ("family", "spread", "refined_spread", "change", "pass"), summary)
