import math

import numpy as np
import pytest

from subordlab import spectral
from subordlab.domination import (AssumptionViolation, SectorSpec, cauchy_constant,
                                  complex_domination, default_t_grid, derivative_domination,
                                  dominated_variant, faa_di_bruno_constant)
from subordlab.subordination import gaussian_time_derivative


def test_sector_constant_pi_over_8():
    s = SectorSpec(math.pi / 8)
    gamma = math.sqrt(1 - math.tan(math.pi / 8) ** 2)
    assert s.gamma == gamma
    # tan(pi/8) = sqrt(2) - 1, so 1 - tan^2 = 2 sqrt(2) - 2
    assert s.constant == pytest.approx(4 * math.sqrt(2) / math.sqrt(2 * math.sqrt(2) - 2), rel=1e-14)
    assert s.constant == pytest.approx(6.21509, abs=1e-5)
    assert 0 < s.gamma < 1


@pytest.mark.parametrize("beta,R", [(0.0, 4), (math.pi / 4, 4), (0.3, 1.0)])
def test_sector_validation(beta, R):
    with pytest.raises(ValueError):
        SectorSpec(beta, R)


def test_diagonal_derivative_constant_closed_form(diag014):
    theta = 0.9
    rep = derivative_domination(diag014, 1, theta, f_family=np.ones(3))
    t = default_t_grid(diag014)
    # per eigenvalue the ratio is a e^{-(1-theta) a} with a = t sqrt(lam)
    expected = max((a * np.exp(-(1 - theta) * a)).max() for a in (t, 2 * t))
    assert rep.empirical_constant == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(10 / math.e, rel=1e-2)


def test_null_vector_gives_zero_ratio(z16):
    rep = derivative_domination(z16, 1, 0.5, f_family=np.ones(16), check_stability=False)
    assert rep.empirical_constant <= 1e-12


def test_cycle32_k2_stable():
    rep = derivative_domination(spectral.cycle(32), 2, 0.5, f_family=np.eye(32))
    assert np.isfinite(rep.empirical_constant) and rep.stable
    assert rep.extras["cauchy_pass"]


def test_cauchy_constant_root():
    c, beta = cauchy_constant(2, 0.5)
    gamma = math.sqrt(1 - math.tan(beta) ** 2)
    assert gamma * (1 - math.sin(beta)) == pytest.approx(0.5, abs=1e-12)
    assert c == pytest.approx(4 * math.sqrt(2) * 2 / (math.sin(beta) ** 2 * gamma), rel=1e-14)


def test_real_z_ratio_at_most_one():
    L = spectral.from_matrix(np.diag([0.0, 0.5, 2.0]), metric=1 - np.eye(3))
    s = SectorSpec(math.pi / 8)
    for tau in (0.1, 1.0, 10.0):
        num = np.exp(-tau * np.sqrt(L.decomposition.eigenvalues))
        den = np.exp(-s.gamma * tau * np.sqrt(L.decomposition.eigenvalues))
        assert np.all(num <= den)


def test_complex_domination_cycle16_pi_over_6(z16):
    rep = complex_domination(z16, SectorSpec(math.pi / 6), samples=1000, kernel=True)
    assert rep.extras["z_samples"] >= 1000
    assert rep.passed and rep.extras["kernel_pass"]
    assert rep.extras["margin"] > 0


def test_complex_domination_is_deterministic(z16):
    a = complex_domination(z16, SectorSpec(math.pi / 8), samples=200, seed=3)
    b = complex_domination(z16, SectorSpec(math.pi / 8), samples=200, seed=3)
    assert a.csv_row() == b.csv_row()


def test_self_domination_reduces(z16):
    a = derivative_domination(z16, 1, 0.5, check_stability=False)
    b = dominated_variant(z16, z16, C=1.0, k=1, theta=0.5)
    assert abs(a.empirical_constant - b.empirical_constant) <= 1e-12
    assert b.extras["assumption_constant"] == pytest.approx(1.0, abs=1e-12)
    assert b.extras["complex_pass"]


def test_diagonal_assumption_holds_and_fails():
    space = spectral.DiscreteMeasureSpace(range(2), [1, 1], 1 - np.eye(2))
    L = spectral.SelfAdjointOperator(space, np.diag([1.0, 2.0]))
    M = spectral.SelfAdjointOperator(space, np.diag([0.5, 1.0]))
    rep = dominated_variant(L, M, C=1.0)
    assert rep.extras["assumption_constant"] <= 1.0
    with pytest.raises(AssumptionViolation) as info:
        dominated_variant(M, L, C=1.0)
    assert {"t", "x", "y", "ratio"} <= set(info.value.witness)


def test_grid_against_cycle_laplacian_reports_constant():
    G = spectral.grid(16)
    h = G.space.mesh_scale
    M = spectral.SelfAdjointOperator(G.space, spectral.cycle(16).matrix * 2 / h ** 2)
    rep = dominated_variant(G, M)
    assert np.isfinite(rep.extras["assumption_constant"]) and rep.extras["assumption_constant"] >= 1


def test_non_positive_dominator_rejected():
    A = np.array([[1.0, 0.5, -1.5], [0.5, 1.0, -1.5], [-1.5, -1.5, 3.0]])
    with pytest.raises(AssumptionViolation):
        derivative_domination(spectral.from_matrix(A), 1, 0.5)


def test_faa_di_bruno_k0():
    assert faa_di_bruno_constant(0, 0.5) == pytest.approx(0.5, abs=5e-4)
    assert faa_di_bruno_constant(0, 0.2) == pytest.approx(0.5, abs=5e-4)


@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_faa_di_bruno_theta_open(theta):
    with pytest.raises(ValueError):
        faa_di_bruno_constant(0, theta)


def test_faa_di_bruno_k2_stable_and_matches_direct_expansion():
    c = faa_di_bruno_constant(2, 0.5)
    fine = faa_di_bruno_constant(2, 0.5, points=801)
    assert np.isfinite(c) and abs(fine - c) <= 0.02 * c
    # same supremum from the explicit Faa di Bruno expansion on the default grid
    g = np.logspace(-3, 3, 401)
    t, u = g[:, None], g[None, :]
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        lhs = t ** 2 / np.sqrt(u) * np.abs(gaussian_time_derivative(3, t, u))
        rhs = t / u ** 1.5 * np.exp(-(0.5 * t) ** 2 / (4 * u))
        ratio = np.where(rhs > 1e-250, lhs / rhs, 0.0)
    assert np.nanmax(ratio) == pytest.approx(c, rel=1e-8)
