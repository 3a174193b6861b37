"""Vectorised adaptive panel quadrature.

Every integral in the package goes through :func:`integrate`.  The integrand
is evaluated on whole batches of nodes at once, and may be vector valued; the
error on each panel is estimated by comparing the Gauss-Legendre sum over the
panel with the sum over its two halves.
"""

import numpy as np

__all__ = ["QuadratureError", "integrate", "gauss_rule"]

_RULES = {}


class QuadratureError(RuntimeError):
    """Raised when the panel budget runs out before the tolerance is met.

    The best value reached so far and its error estimate are kept on the
    exception so callers can report what was achieved.
    """

    def __init__(self, message, value=None, error_estimate=np.inf):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


def gauss_rule(order):
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


def _panel_sums(func, lo, hi, order):
    x0, w0 = gauss_rule(order)
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (lo + hi)[:, None] + half[:, None] * x0[None, :]
    vals = np.asarray(func(nodes.ravel()))
    vals = vals.reshape((len(lo), order) + vals.shape[1:])
    sums = np.einsum("k,pk...->p...", w0, vals)
    return sums * half.reshape((-1,) + (1,) * (sums.ndim - 1))


def integrate(func, a, b, abs_tol, rel_tol=0.0, order=10, breakpoints=(),
              max_panels=20000):
    """Integrate ``func`` over ``[a, b]`` to a mixed absolute/relative tolerance.

    Parameters
    ----------
    func : callable
        Maps a 1-D array of nodes of shape ``(k,)`` to values of shape
        ``(k, ...)``; real or complex.
    a, b : float
        Finite integration limits.
    abs_tol, rel_tol : float
        Componentwise target: ``err_i <= max(abs_tol, rel_tol * |I_i|)``.
    order : int
        Gauss-Legendre points per half panel.
    breakpoints : sequence of float
        Initial panel edges inside ``(a, b)``.

    Returns
    -------
    value : ndarray or scalar
    error : float
        Largest componentwise error estimate.
    """
    pts = sorted(p for p in breakpoints if a < p < b)
    edges = np.asarray([a] + pts + [b], dtype=float)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    whole = _panel_sums(func, lo, hi, order)
    halves = _panel_sums(func, np.concatenate([lo, mid]), np.concatenate([mid, hi]), order)
    left, right = halves[: len(lo)], halves[len(lo):]

    while True:
        refined = left + right
        value = refined.sum(axis=0)
        perr = np.abs(whole - refined).reshape(len(lo), -1)
        comp_err = perr.sum(axis=0)
        comp_tol = np.maximum(abs_tol, rel_tol * np.abs(value).reshape(-1))
        comp_tol = np.where(comp_tol > 0, comp_tol, np.finfo(float).tiny)
        ratio = comp_err / comp_tol
        if np.all(ratio <= 1.0):
            return value, float(comp_err.max())
        if len(lo) >= max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exhausted, error {comp_err.max():.3e}",
                value=value, error_estimate=float(comp_err.max()))

        worst = int(np.argmax(ratio))
        score = (perr / comp_tol).max(axis=1)
        rank = np.argsort(score)[::-1]
        # split the fewest panels that bring the worst component under half its budget
        remaining = ratio[worst] - np.cumsum(perr[rank, worst] / comp_tol[worst])
        nsplit = int(np.searchsorted(-remaining, -0.5)) + 1
        nsplit = min(max(nsplit, 1), len(lo))
        split = np.zeros(len(lo), dtype=bool)
        split[rank[:nsplit]] = True
        split |= score >= 1.0
        keep = ~split

        m = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], m])
        new_hi = np.concatenate([m, hi[split]])
        new_whole = np.concatenate([left[split], right[split]])
        nm = 0.5 * (new_lo + new_hi)
        h = _panel_sums(func, np.concatenate([new_lo, nm]), np.concatenate([nm, new_hi]), order)
        k = len(new_lo)
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        whole = np.concatenate([whole[keep], new_whole])
        left = np.concatenate([left[keep], h[:k]])
        right = np.concatenate([right[keep], h[k:]])
