"""Finite self-adjoint operators on weighted point sets and their functional calculus.

An operator ``L`` acts on functions ``f : X -> R`` with the inner product
``<f, g> = sum f(x) g(x) mu(x)``.  Self-adjointness in that inner product means
``mu(x) L[x, y] = mu(y) L[y, x]``, so ``D^(1/2) L D^(-1/2)`` (``D = diag(mu)``)
is an ordinary symmetric matrix and ``numpy.linalg.eigh`` does the rest.

Every downstream quantity (heat, Poisson, fractional and complex semigroups,
averages, square-function integrands) is ``phi(L)`` for some scalar symbol
``phi`` and goes through :func:`apply_scalar_function`.
"""

import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import shortest_path

__all__ = [
    "DiscreteMeasureSpace", "SelfAdjointOperator", "SpectralDecomposition", "MarkovAudit",
    "decompose", "apply_scalar_function", "operator_matrix", "kernel_of", "markov_audit",
    "fractional_power", "cycle", "path", "grid", "from_matrix", "load_operator",
    "save_operator", "CLAMP", "symbols",
]

CLAMP = 1e-12
_TRIANGLE_LIMIT = 512


class DiscreteMeasureSpace:
    """Finite metric measure space.

    Parameters
    ----------
    points : sequence
        Point labels; only their count and order matter.
    weights : array_like
        ``mu(x) > 0`` for every point.
    metric : array_like
        Symmetric distance matrix with zero diagonal.  The triangle inequality
        is verified for spaces of at most 512 points.
    dimension_hint : float, optional
        Expected Ahlfors dimension, if known.
    """

    def __init__(self, points, weights, metric, dimension_hint=None):
        self.points = list(points)
        n = len(self.points)
        self.weights = np.asarray(weights, dtype=float).copy()
        self.metric = np.asarray(metric, dtype=float).copy()
        self.dimension_hint = dimension_hint
        if self.weights.shape != (n,):
            raise ValueError(f"expected {n} weights, got shape {self.weights.shape}")
        if self.metric.shape != (n, n):
            raise ValueError(f"metric must be {n}x{n}")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ValueError("weights must be finite and strictly positive")
        if not np.all(np.isfinite(self.metric)) or np.any(self.metric < 0):
            raise ValueError("metric entries must be finite and nonnegative")
        if np.any(np.diag(self.metric) != 0):
            raise ValueError("metric must vanish on the diagonal")
        if not np.array_equal(self.metric, self.metric.T):
            raise ValueError("metric must be symmetric")
        if n <= _TRIANGLE_LIMIT:
            self._check_triangle()
        self.weights.flags.writeable = False
        self.metric.flags.writeable = False

    def _check_triangle(self):
        d = self.metric
        slack = 1e-12 * max(d.max(), 1.0)
        for k in range(len(d)):
            via = d[:, k, None] + d[None, k, :]
            bad = d > via + slack
            if bad.any():
                i, j = np.argwhere(bad)[0]
                raise ValueError(f"triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")

    def __len__(self):
        return len(self.points)

    @property
    def mesh_scale(self):
        """Smallest positive distance."""
        pos = self.metric[self.metric > 0]
        return float(pos.min()) if pos.size else 0.0

    @property
    def diameter(self):
        return float(self.metric.max())

    def ball_measure(self, x, r, strict=True):
        """``mu(B(x, r))``; ``strict`` selects the open ball ``rho < r``."""
        d = self.metric[x]
        inside = d < r if strict else d <= r
        return float(self.weights[inside].sum())


class SelfAdjointOperator:
    """A positive operator, self-adjoint in the ``mu``-weighted inner product.

    ``heat_order_m`` is the order of the heat-kernel scaling, 2 for
    second-order difference operators.  The decomposition is computed on first
    use and cached.
    """

    def __init__(self, space, matrix, heat_order_m=2.0, name=""):
        self.space = space
        self.matrix = np.asarray(matrix, dtype=float).copy()
        self.heat_order_m = float(heat_order_m)
        self.name = name
        n = len(space)
        if self.matrix.shape != (n, n):
            raise ValueError(f"operator must be {n}x{n} to match the space")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator entries must be finite")
        if self.heat_order_m < 1:
            raise ValueError("heat_order_m must be >= 1")
        mu = space.weights
        weighted = mu[:, None] * self.matrix
        asym = np.abs(weighted - weighted.T).max() if n else 0.0
        scale = 1.0 + np.abs(weighted).max() if n else 1.0
        if asym > 1e-10 * scale:
            raise ValueError(f"operator is not self-adjoint for the weights (defect {asym:.3e})")
        self.matrix.flags.writeable = False
        self._decomposition = None
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.space)

    @property
    def decomposition(self):
        if self._decomposition is None:
            with self._lock:
                if self._decomposition is None:
                    self._decomposition = decompose(self)
        return self._decomposition

    def scaled(self, c):
        """The operator ``c L`` on the same space."""
        return SelfAdjointOperator(self.space, c * self.matrix, self.heat_order_m,
                                   f"{c:g}*{self.name}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """``L = V diag(lam) V^T D`` with ``V^T D V = I``.

    Columns of ``eigenvectors`` are ``mu``-orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray
    reconstruction_residual: float = 0.0
    orthonormality_residual: float = 0.0

    @property
    def spectral_radius(self):
        return float(np.abs(self.eigenvalues).max()) if self.eigenvalues.size else 0.0

    @property
    def spectral_gap(self):
        """Smallest nonzero eigenvalue (``inf`` if there is none)."""
        pos = self.eigenvalues[self.eigenvalues > 0]
        return float(pos.min()) if pos.size else np.inf

    def null_space(self):
        return self.eigenvectors[:, self.eigenvalues == 0]


def decompose(L):
    """Eigendecomposition of ``L`` with clamping of round-off negatives.

    Raises
    ------
    ValueError
        If ``L`` has an eigenvalue below ``-1e-12`` times its spectral radius.
    numpy.linalg.LinAlgError
        If the eigensolver fails.
    """
    mu = L.space.weights
    n = len(mu)
    sq = np.sqrt(mu)
    sym = sq[:, None] * L.matrix / sq[None, :]
    sym = 0.5 * (sym + sym.T)
    lam, U = np.linalg.eigh(sym)
    radius = float(np.abs(lam).max()) if n else 0.0
    if n and lam[0] < -CLAMP * radius:
        raise ValueError(f"operator is not positive: eigenvalue {lam[0]:.6e}")
    lam = np.where(np.abs(lam) <= CLAMP * radius, 0.0, lam)
    lam = np.maximum(lam, 0.0)
    V = U / sq[:, None]
    recon = (V * lam) @ (V.T * mu)
    rec_res = float(np.abs(recon - L.matrix).max()) if n else 0.0
    orth_res = float(np.abs((V.T * mu) @ V - np.eye(n)).max()) if n else 0.0
    tol = 1e-10 * (1.0 + radius)
    if rec_res > tol:
        raise ValueError(f"reconstruction residual {rec_res:.3e} exceeds {tol:.3e}")
    if orth_res > 1e-10:
        raise ValueError(f"orthonormality residual {orth_res:.3e} exceeds 1e-10")
    for a in (lam, V, mu):
        a.flags.writeable = False
    return SpectralDecomposition(lam, V, mu, rec_res, orth_res)


def _decomp(obj):
    return obj.decomposition if isinstance(obj, SelfAdjointOperator) else obj


def _symbol_values(D, phi):
    vals = phi(D.eigenvalues) if callable(phi) else phi
    vals = np.broadcast_to(np.asarray(vals), D.eigenvalues.shape)
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(f"symbol is not finite at eigenvalue {D.eigenvalues[bad]!r}")
    return vals


def apply_scalar_function(D, phi, f):
    """Compute ``phi(L) f = sum_i phi(lam_i) <f, v_i> v_i``.

    Parameters
    ----------
    D : SpectralDecomposition or SelfAdjointOperator
    phi : callable or array_like
        Vectorised symbol evaluated on the eigenvalues, or precomputed
        symbol values.  Complex symbols give complex output.
    f : array_like
        Shape ``(n,)`` or ``(n, k)`` for ``k`` functions at once.
    """
    D = _decomp(D)
    f = np.asarray(f)
    n = len(D.eigenvalues)
    if f.shape[0] != n:
        raise ValueError(f"vector length {f.shape[0]} does not match operator size {n}")
    vals = _symbol_values(D, phi)
    V = D.eigenvectors
    w = D.weights if f.ndim == 1 else D.weights[:, None]
    coef = V.T @ (w * f)
    coef = vals * coef if f.ndim == 1 else vals[:, None] * coef
    return V @ coef


def operator_matrix(D, phi):
    """Matrix of ``phi(L)`` acting on coordinate vectors."""
    D = _decomp(D)
    vals = _symbol_values(D, phi)
    V = D.eigenvectors
    return (V * vals) @ (V.T * D.weights)


def kernel_of(D, phi):
    """Kernel ``k(x, y)`` with ``phi(L) f (x) = sum_y k(x, y) f(y) mu(y)``."""
    D = _decomp(D)
    vals = _symbol_values(D, phi)
    V = D.eigenvectors
    return (V * vals) @ V.T


def fractional_power(lam, a):
    """``lam ** a`` with the value 0 at ``lam = 0`` (principal branch)."""
    lam = np.asarray(lam)
    out = np.zeros(lam.shape, dtype=float)
    pos = lam > 0
    out[pos] = lam[pos] ** a
    return out


class symbols:
    """Scalar symbols used across the package, each a function of the eigenvalue."""

    @staticmethod
    def heat(t):
        return lambda lam: np.exp(-t * lam)

    @staticmethod
    def fractional(t, alpha):
        return lambda lam: np.exp(-t * fractional_power(lam, alpha))

    @staticmethod
    def poisson(t):
        return lambda lam: np.exp(-t * np.sqrt(lam))

    @staticmethod
    def poisson_derivative(t, k):
        def phi(lam):
            a = t * np.sqrt(lam)
            return a ** k * np.exp(-a)
        return phi

    @staticmethod
    def poisson_complex(z):
        return lambda lam: np.exp(-complex(z) * np.sqrt(lam))

    @staticmethod
    def fractional_complex(u, alpha):
        return lambda lam: np.exp(-complex(u) * fractional_power(lam, alpha))

    @staticmethod
    def averaging(s):
        def phi(lam):
            x = s * np.asarray(lam, dtype=float)
            out = np.ones_like(x)
            nz = x != 0
            out[nz] = -np.expm1(-x[nz]) / x[nz]
            return out
        return phi


@dataclass
class MarkovAudit:
    """Sampled Markov properties of ``exp(-tL)``.

    ``witness`` maps each failed property to the offending entry, e.g.
    ``{"positivity_preserving": {"t": 0.01, "x": 0, "y": 2, "value": -3e-3}}``.
    """

    positivity_preserving: bool
    l1_contraction: bool
    linf_contraction: bool
    conservative: bool
    witness: Optional[dict] = field(default_factory=dict)

    @property
    def markov(self):
        return self.positivity_preserving and self.l1_contraction and self.linf_contraction


def markov_audit(L, t_samples, tol=1e-10):
    """Check positivity, L1/Linf contractivity and conservativeness of ``exp(-tL)``."""
    ts = [float(t) for t in t_samples]
    if not ts:
        raise ValueError("t_samples must be nonempty")
    D = _decomp(L)
    mu = D.weights
    ones = np.ones(len(mu))
    flags = dict(positivity_preserving=True, l1_contraction=True, linf_contraction=True,
                 conservative=True)
    witness = {}

    def fail(name, info):
        if flags[name]:
            flags[name] = False
            witness[name] = info

    for t in ts:
        T = operator_matrix(D, symbols.heat(t))
        i, j = np.unravel_index(np.argmin(T), T.shape)
        if T[i, j] < -tol:
            fail("positivity_preserving", dict(t=t, x=int(i), y=int(j), value=float(T[i, j])))
        # weighted L1 norm: columns of |T| weighted by mu(x)/mu(y)
        col = (np.abs(T) * mu[:, None]).sum(axis=0) / mu
        if col.max() > 1 + tol:
            y = int(np.argmax(col))
            fail("l1_contraction", dict(t=t, y=y, value=float(col[y])))
        row = np.abs(T).sum(axis=1)
        if row.max() > 1 + tol:
            x = int(np.argmax(row))
            fail("linf_contraction", dict(t=t, x=x, value=float(row[x])))
        dev = np.abs(T @ ones - 1)
        if dev.max() > tol:
            x = int(np.argmax(dev))
            fail("conservative", dict(t=t, x=x, value=float((T @ ones)[x])))
    return MarkovAudit(witness=witness, **flags)


# ---------------------------------------------------------------------------
# model operators

def _cycle_metric(N):
    i = np.arange(N)
    d = np.abs(i[:, None] - i[None, :])
    return np.minimum(d, N - d).astype(float)


def cycle(N):
    """``I - P`` for the simple random walk on ``Z_N``; unit weights, graph metric."""
    if N < 3:
        raise ValueError("cycle needs N >= 3")
    P = np.zeros((N, N))
    i = np.arange(N)
    P[i, (i + 1) % N] += 0.5
    P[i, (i - 1) % N] += 0.5
    space = DiscreteMeasureSpace(range(N), np.ones(N), _cycle_metric(N), dimension_hint=1.0)
    return SelfAdjointOperator(space, np.eye(N) - P, 2.0, f"cycle({N})")


def path(N):
    """``I - P`` for the walk on ``{0..N-1}`` that holds with probability 1/2 at the ends."""
    if N < 2:
        raise ValueError("path needs N >= 2")
    P = np.zeros((N, N))
    i = np.arange(N - 1)
    P[i, i + 1] = 0.5
    P[i + 1, i] = 0.5
    P[0, 0] = P[-1, -1] = 0.5
    j = np.arange(N)
    space = DiscreteMeasureSpace(range(N), np.ones(N),
                                 np.abs(j[:, None] - j[None, :]).astype(float), dimension_hint=1.0)
    return SelfAdjointOperator(space, np.eye(N) - P, 2.0, f"path({N})")


def grid(N):
    """Neumann Laplacian ``-d^2/dx^2`` on ``N`` cells of ``[0, 1]``, scaled by ``h^-2``.

    Points are cell centres, ``mu = h`` and the metric is ``|x - y|``.
    """
    if N < 2:
        raise ValueError("grid needs N >= 2")
    h = 1.0 / N
    x = (np.arange(N) + 0.5) * h
    A = 2 * np.eye(N) - np.eye(N, k=1) - np.eye(N, k=-1)
    A[0, 0] = A[-1, -1] = 1.0
    space = DiscreteMeasureSpace(x, np.full(N, h), np.abs(x[:, None] - x[None, :]),
                                 dimension_hint=1.0)
    return SelfAdjointOperator(space, A / h ** 2, 2.0, f"grid({N})")


def from_matrix(matrix, weights=None, metric=None, heat_order_m=2.0, name="user"):
    """Wrap a user matrix; the default metric is the graph distance of its off-diagonal pattern."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    weights = np.ones(n) if weights is None else weights
    if metric is None:
        adj = (np.abs(matrix) + np.abs(matrix.T)) > 0
        np.fill_diagonal(adj, False)
        metric = shortest_path(adj.astype(float), unweighted=True, directed=False)
        if not np.all(np.isfinite(metric)):
            raise ValueError("operator graph is disconnected; supply a metric")
    space = DiscreteMeasureSpace(range(n), weights, metric)
    return SelfAdjointOperator(space, matrix, heat_order_m, name)


def save_operator(L, path_):
    """Write ``L`` in the plain-text format read by :func:`load_operator`.

    Layout: the size ``n``; a line of ``n`` weights; ``n`` metric rows; ``n``
    operator rows.  Values are written with ``repr`` and read back bit-exactly.
    """
    mu, d, A = L.space.weights, L.space.metric, L.matrix
    lines = [str(len(mu)), " ".join(repr(float(v)) for v in mu)]
    lines += [" ".join(repr(float(v)) for v in row) for row in d]
    lines += [" ".join(repr(float(v)) for v in row) for row in A]
    with open(path_, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_operator(path_, heat_order_m=2.0):
    """Read an operator file; blank lines and ``#`` comments are ignored."""
    with open(path_, encoding="utf-8") as fh:
        rows = [ln.split("#", 1)[0].split() for ln in fh]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 1:
        raise ValueError("first line must hold the size n")
    n = int(rows[0][0])
    if len(rows) != 2 + 2 * n:
        raise ValueError(f"expected {2 + 2 * n} nonblank lines, found {len(rows)}")
    try:
        data = [[float(v) for v in r] for r in rows[1:]]
    except ValueError as exc:
        raise ValueError(f"non-numeric entry: {exc}") from None
    if any(len(r) != n for r in data):
        raise ValueError(f"every weight/metric/operator row must have {n} entries")
    mu = np.array(data[0])
    space = DiscreteMeasureSpace(range(n), mu, np.array(data[1:1 + n]))
    return SelfAdjointOperator(space, np.array(data[1 + n:]), heat_order_m, str(path_))
