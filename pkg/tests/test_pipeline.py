import numpy as np
import pytest

from oamris.geometry import SceneGeometry
from oamris.metrics import PowerAllocation, linearize
from oamris.pipeline import Scenario, SchemeConfig, random_eve_scenario, run_baseline, run_rmcg_ao
from oamris.power import PowerSubproblem, optimize_power

SMALL = Scenario(geometry=SceneGeometry(Q_y=4, Q_z=3))


@pytest.mark.parametrize("seed", range(5))
def test_secrecy_trace_nondecreasing(seed):
    sc = random_eve_scenario(SMALL, np.random.default_rng(seed))
    r = run_rmcg_ao(sc)
    assert np.all(np.diff(r.sr_trace) >= -1e-6)
    assert r.converged and r.iterations <= 50
    assert np.abs(np.abs(r.theta) - 1).max() < 1e-12
    assert r.p.sum() <= 0.9 + 1e-9


def test_result_consistent_with_reported_rates():
    r = run_rmcg_ao(SMALL)
    assert r.sr_trace[-1] == pytest.approx(r.SR)
    assert r.R_B - np.log2(8) == pytest.approx(np.sum(np.log2(1 + r.gamma_B)))


def test_deterministic():
    a = run_baseline("random-phase", SMALL, SchemeConfig(seed=3))
    b = run_baseline("random-phase", SMALL, SchemeConfig(seed=3))
    np.testing.assert_array_equal(a.theta, b.theta)
    assert a.sr_trace == b.sr_trace


def test_proposed_beats_equal_power_and_random_phase():
    prop = run_rmcg_ao(SMALL)
    assert prop.SR >= run_baseline("equal-power", SMALL).SR - 1e-9
    assert prop.SR >= run_baseline("random-phase", SMALL).SR - 1e-9


def test_equal_power_keeps_powers():
    r = run_baseline("equal-power", SMALL)
    np.testing.assert_allclose(r.p, 0.3)


def test_no_an_uses_all_modes():
    r = run_baseline("no-an", SMALL)
    assert r.plan.N_s == 8 and r.plan.K == 1 and r.power.sigma_zz == 0
    assert r.p.sum() <= 1.0 + 1e-9


def test_no_ris_equals_power_only_optimisation():
    r = run_baseline("no-ris", SMALL)
    assert r.theta.size == 0
    bare = SMALL.channels().without_ris()
    linz = linearize(bare, SMALL.basis(), SMALL.plan, SMALL.noise)
    power = PowerAllocation.equal(3, 0.9, 1.0, 3)
    A, B, c = linz.power_coefficients(np.ones(0), power.sigma_zz)
    p, _ = optimize_power(PowerSubproblem(A, B, c, 0.9, power.p_th), power.p, tol=1e-4)
    assert r.SR == pytest.approx(linz.rates(p, power.sigma_zz, np.ones(0)).SR, abs=1e-4)


def test_unknown_scheme():
    with pytest.raises(ValueError):
        SchemeConfig(scheme="magic")


def test_random_eve_keeps_distance():
    sc = random_eve_scenario(Scenario(), np.random.default_rng(0))
    assert np.linalg.norm(sc.geometry.u_E) == pytest.approx(10.0)
    assert np.pi / 40 <= sc.geometry.varphi <= np.pi / 8
