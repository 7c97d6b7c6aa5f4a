import numpy as np
import pytest

from jamsim.scenario import ScenarioConfig, SystemParams, make_params
from jamsim.se_core import PowerSplit, sum_se_closed_form
from jamsim.user_opt import jammer_free_se, optimize_users, phi_grid


def jammer_free_reference(params, eta, phi):
    p = params.replace(training_length=eta, jammer_budget=0.0)
    return sum_se_closed_form(p, PowerSplit.from_fractions(p, phi, 0.5)).sum_se


@pytest.fixture(scope="module")
def dropped():
    return make_params(ScenarioConfig(seed=21), num_antennas=100, user_budget_db=10, jammer_budget_db=10)


def test_phi_grid():
    np.testing.assert_allclose(phi_grid(0.05), np.arange(1, 20) * 0.05)
    assert phi_grid(0.1).max() < 1


def test_vectorized_se_matches_closed_form(dropped):
    for eta, phi in [(10, 0.2), (57, 0.71), (199, 0.5)]:
        assert jammer_free_se(dropped, eta, phi) == pytest.approx(
            jammer_free_reference(dropped, eta, phi), rel=1e-13)


def test_single_user_positive_budget():
    p = SystemParams(50, 100, 1, [0.3], 1.0, 2.0, 5.0)
    u = optimize_users(p)
    assert u.eta_star >= 1 and u.achieved_se > 0


def test_strategy_reproduces_reported_se(dropped):
    u = optimize_users(dropped)
    assert u.achieved_se == pytest.approx(jammer_free_reference(dropped, u.eta_star, u.phi_star), rel=1e-12)
    assert dropped.num_users <= u.eta_star <= dropped.coherence_length - 1
    assert 0 < u.phi_star < 1
    assert u.achieved_se >= jammer_free_reference(dropped, dropped.num_users, 0.5)


def test_optimality_witness_grid(dropped):
    u = optimize_users(dropped)
    etas = np.arange(dropped.num_users, dropped.coherence_length)
    phis = np.linspace(0.05, 0.95, 21)
    grid = jammer_free_se(dropped, etas[:, None], phis[None, :])
    assert u.achieved_se >= grid.max() - 1e-12


def test_close_to_brute_force(dropped):
    u = optimize_users(dropped)
    etas = np.arange(dropped.num_users, dropped.coherence_length)
    phis = np.linspace(0.0005, 0.9995, 2000)
    brute = jammer_free_se(dropped, etas[:, None], phis[None, :]).max()
    assert u.achieved_se >= brute - 1e-12
    assert u.achieved_se <= brute * (1 + 1e-5)


def test_independent_of_jammer_budget(dropped):
    a = optimize_users(dropped)
    for Q in (0.0, 1.0, 1e4):
        assert optimize_users(dropped.replace(jammer_budget=Q)) == a


def test_longer_coherence_never_hurts():
    for seed in range(3):
        for M in (10, 100):
            cfg = ScenarioConfig(seed=seed, coherence_length=100)
            p = make_params(cfg, M, 10, 0)
            longer = p.replace(coherence_length=200)
            assert optimize_users(longer).achieved_se >= optimize_users(p).achieved_se - 1e-12


def test_fixed_phi_only_optimizes_length(dropped):
    u = optimize_users(dropped, fixed_phi=0.3)
    assert u.phi_star == 0.3
    etas = np.arange(dropped.num_users, dropped.coherence_length)
    assert u.achieved_se == pytest.approx(jammer_free_se(dropped, etas, 0.3).max(), rel=1e-15)


def test_zero_budget_gives_zero_se():
    p = SystemParams(50, 100, 2, [0.3, 0.1], 1.0, 0.0, 5.0)
    u = optimize_users(p)
    assert u.achieved_se == 0.0 and u.eta_star == 2


def test_rejects_bad_step(dropped):
    with pytest.raises(ValueError):
        optimize_users(dropped, phi_grid_step=0.2)
