import math

import numpy as np
import pytest
from scipy import integrate as sint

from subordlab import spectral, stable
from subordlab.subordination import (SemigroupRequest, gaussian_time_derivative, kernel_matrix,
                                     poisson_derivative_apply, subordinate_apply)


def spectral_twin(req):
    return SemigroupRequest(**{**req.__dict__, "route": "spectral"})


def test_poisson_on_diagonal(diag014):
    out = subordinate_apply(diag014, SemigroupRequest("poisson", time=1.0), np.ones(3))
    assert np.allclose(out, [1, math.exp(-1), math.exp(-2)], atol=1e-8)


def test_fractional_on_unit_eigenvalue():
    L = spectral.from_matrix([[1.0]], metric=[[0.0]])
    out = subordinate_apply(L, SemigroupRequest("fractional", time=2.0, alpha=0.5), np.ones(1))
    assert out[0] == pytest.approx(math.exp(-2), abs=1e-8)


def test_fractional_matches_oracle(z16, rng):
    f = rng.standard_normal(16)
    req = SemigroupRequest("fractional", time=0.7, alpha=0.6)
    sub = subordinate_apply(z16, req, f)
    ref = spectral.apply_scalar_function(z16, lambda lam: np.exp(-0.7 * lam ** 0.6), f)
    assert np.abs(sub - ref).max() <= 1e-8


def test_poisson_weight_against_scipy_quad():
    # independent evaluation of the Poisson subordination integral for one eigenvalue
    lam, t = 0.37, 1.3
    w = lambda u: t * math.exp(-t * t / (4 * u)) / (2 * math.sqrt(math.pi) * u ** 1.5) * math.exp(-u * lam)
    val = sint.quad(w, 0, 1, epsabs=1e-13)[0] + sint.quad(w, 1, np.inf, epsabs=1e-13)[0]
    assert val == pytest.approx(math.exp(-t * math.sqrt(lam)), abs=1e-10)
    L = spectral.from_matrix([[lam]], metric=[[0.0]])
    out = subordinate_apply(L, SemigroupRequest("poisson", time=t), np.ones(1))
    assert out[0] == pytest.approx(val, abs=1e-8)


def test_fractional_weight_against_scipy_quad():
    lam, t, alpha = 2.0, 0.8, 0.4
    m = stable.StableDensityModel(alpha)
    scale = t ** (1 / alpha)
    g = lambda v: stable.stable_density(m, 1.0, math.exp(v)) * math.exp(v) * math.exp(-math.exp(v) * scale * lam)
    val = sint.quad(g, math.log(1e-6), 60, epsabs=1e-12, limit=400)[0]
    assert val == pytest.approx(math.exp(-t * lam ** alpha), abs=1e-8)


def test_derivative_on_diagonal():
    L = spectral.from_matrix([[4.0]], metric=[[0.0]])
    out = poisson_derivative_apply(L, 1, 1.0, np.ones(1))
    assert out[0] == pytest.approx(2 * math.exp(-2), abs=1e-8)
    assert out[0] == pytest.approx(0.270671, abs=1e-6)


def test_derivative_of_zero(z8):
    assert np.all(poisson_derivative_apply(z8, 1, 1.0, np.zeros(8)) == 0)


def test_derivative_basis_vector(z8):
    e0 = np.eye(8)[0]
    sub = poisson_derivative_apply(z8, 2, 0.5, e0)
    ref = poisson_derivative_apply(z8, 2, 0.5, e0, route="spectral")
    assert np.abs(sub - ref).max() <= 1e-8


@pytest.mark.parametrize("n", range(7))
def test_gaussian_derivative_against_hermite(n):
    from scipy.special import eval_hermite
    t = np.linspace(-3, 3, 13)
    u = 0.7
    a = 1 / (4 * u)
    hermite = (-1) ** n * a ** (n / 2) * eval_hermite(n, math.sqrt(a) * t) * np.exp(-a * t * t)
    assert np.allclose(gaussian_time_derivative(n, t, u), hermite, rtol=1e-12, atol=1e-14)


def test_zero_operator_heat_kernel():
    L = spectral.from_matrix(np.zeros((3, 3)), weights=[1.0, 2.0, 4.0], metric=1 - np.eye(3))
    K = kernel_matrix(L, SemigroupRequest("heat", time=1.0))
    assert np.allclose(K, np.diag(1 / np.array([1.0, 2.0, 4.0])), atol=1e-14)


def test_poisson_kernel_nonnegative(z8):
    K = kernel_matrix(z8, SemigroupRequest("poisson", time=1.0))
    assert K.min() >= -1e-10


def test_derivative_kernel_is_minus_t_d_dt(z8):
    h = 1e-4
    K1 = kernel_matrix(z8, SemigroupRequest("poisson_derivative", time=1.0, k=1))
    Kp = kernel_matrix(z8, SemigroupRequest("poisson", time=1.0 + h, route="spectral"))
    Km = kernel_matrix(z8, SemigroupRequest("poisson", time=1.0 - h, route="spectral"))
    assert np.abs(K1 + (Kp - Km) / (2 * h)).max() <= 1e-6


def test_complex_real_axis_consistency(z16, rng):
    f = rng.standard_normal(16)
    a = subordinate_apply(z16, SemigroupRequest("poisson_complex", z=1.7 + 0j), f)
    b = subordinate_apply(z16, SemigroupRequest("poisson", time=1.7), f)
    assert np.abs(a - b).max() <= 1e-12


def test_fractional_semigroup_law(z16, rng):
    f = rng.standard_normal(16)
    s, t, alpha = 0.4, 0.9, 0.5
    ft = subordinate_apply(z16, SemigroupRequest("fractional", time=t, alpha=alpha), f)
    fst = subordinate_apply(z16, SemigroupRequest("fractional", time=s, alpha=alpha), ft)
    direct = subordinate_apply(z16, SemigroupRequest("fractional", time=s + t, alpha=alpha), f)
    assert np.abs(fst - direct).max() <= 3e-8


@pytest.mark.parametrize("bad", [
    dict(kind="poisson", time=0.0),
    dict(kind="poisson", time=-1.0),
    dict(kind="poisson_complex", z=1 + 1.5j),
    dict(kind="poisson_complex", z=-1 + 0j),
    dict(kind="poisson_derivative", time=1.0),
    dict(kind="fractional", time=1.0, alpha=1.0),
    dict(kind="poisson", quad_tol=0.0),
    dict(kind="wave"),
    dict(kind="poisson", route="monte-carlo"),
])
def test_request_validation(bad):
    with pytest.raises(ValueError):
        SemigroupRequest(**bad)


def test_size_mismatch(z8):
    with pytest.raises(ValueError):
        subordinate_apply(z8, SemigroupRequest("poisson"), np.ones(7))
