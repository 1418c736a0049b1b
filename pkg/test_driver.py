import math

import numpy as np
import pytest

import decomposition
from conftest import certificate_worst, make_scenario, recording_solver
from conic import STATUS_OPTIMAL
from driver import (
    STATUS_CONVERGED,
    STATUS_INFEASIBLE,
    BcdOptimizer,
    fixed_trajectory_baseline,
    ideal_baseline,
    optimize,
    validate_robustness,
)
from errors import InfeasibleSubproblem
from experiments import apply_axis
from scenario import check_decision, desk_scenario, straight_line_init


def path_length(w_s):
    return float(np.linalg.norm(np.diff(w_s, axis=1), axis=2).sum())


def test_locally_feasible_tasks_stay_local(easy_scenario):
    r = optimize(easy_scenario)
    assert r.status == STATUS_CONVERGED
    assert not r.decision.lam.any()
    assert not r.decision.rho.any()
    init = straight_line_init(easy_scenario)
    assert path_length(r.decision.w_s) <= path_length(init.w_s) + 1e-6
    assert check_decision(easy_scenario, r.decision) == []


def test_infinite_zeta_runs_one_round(offload_scenario):
    r = optimize(offload_scenario, zeta=math.inf)
    assert r.rounds == 1
    assert r.status == STATUS_CONVERGED


def test_gamma_trace_never_increases(offload_scenario):
    r = optimize(offload_scenario)
    trace = [r.gamma_initial] + r.gamma_trace
    assert np.all(np.diff(trace) <= 1e-9)
    assert r.gamma == pytest.approx(r.gamma_trace[-1], rel=1e-9)
    assert check_decision(offload_scenario, r.decision) == []
    assert r.decision.rho[0].min() > 0
    assert any("Round 1" in line for line in r.log_messages)


def test_robust_costs_more_and_offloads_more(offload_scenario):
    robust = optimize(offload_scenario)
    ideal = ideal_baseline(offload_scenario)
    assert ideal.gamma <= robust.gamma
    assert robust.offloaded_bits(offload_scenario) >= ideal.offloaded_bits(offload_scenario)
    assert ideal.mode == "ideal"


def test_no_uncertainty_means_no_robustness_premium(offload_scenario):
    s = offload_scenario.deterministic()
    robust = optimize(s)
    ideal = ideal_baseline(s)
    assert robust.gamma == pytest.approx(ideal.gamma, rel=1e-4)


def test_infeasible_scenario_is_reported():
    # 1e4 s of local work and 10 s at the edge per slot
    s = make_scenario(gus=((450.0, 450.0),), L=1e8, c_bar=100.0, sigma=1.0)
    r = optimize(s)
    assert r.status == STATUS_INFEASIBLE
    assert r.decision is None
    assert any("GU 0" in line for line in r.diagnosis)
    with pytest.raises(InfeasibleSubproblem):
        validate_robustness(s, r)


def test_same_input_same_trace(offload_scenario):
    first = optimize(offload_scenario)
    second = optimize(offload_scenario)
    assert first.gamma_trace == second.gamma_trace


def test_fixed_trajectory_keeps_straight_lines(offload_scenario):
    r = fixed_trajectory_baseline(offload_scenario)
    init = straight_line_init(offload_scenario)
    np.testing.assert_array_equal(r.decision.w_s, init.w_s)
    assert r.gamma >= optimize(offload_scenario).gamma - 1e-9


def test_robust_decision_survives_sampling(offload_scenario):
    r = optimize(offload_scenario)
    n = 5000
    bound = 0.05 + 3 * math.sqrt(0.05 * 0.95 / n)
    for sampler in ("gaussian", "uniform", "two_point"):
        report = validate_robustness(offload_scenario, r, sampler, n, seed=3)
        assert report.max_violation <= bound
        assert len(list(report.rows())) == offload_scenario.I * offload_scenario.T


def test_ideal_decision_report_is_generated(offload_scenario):
    r = ideal_baseline(offload_scenario)
    report = validate_robustness(offload_scenario, r, "gaussian", 2000, seed=3)
    assert report.local.shape == (offload_scenario.I, offload_scenario.T)
    assert 0.0 <= report.max_violation <= 1.0


def test_no_spread_no_violation(offload_scenario):
    s = offload_scenario.deterministic()
    r = optimize(s)
    assert validate_robustness(s, r, "gaussian", 1000).max_violation == 0.0


def test_engine_keeps_timings(offload_scenario):
    engine = BcdOptimizer(offload_scenario, max_rounds=2)
    r = engine.run()
    assert r.rounds <= 2
    assert set(r.timings) == {"p5", "p4", "p6", "total"}
    assert engine.log_messages == r.log_messages
    assert r.to_dict()["decision"]["lambda"]


@pytest.mark.slow
def test_desk_scenario_converges():
    s = desk_scenario()
    robust = optimize(s)
    assert robust.status == STATUS_CONVERGED
    assert robust.rounds <= 15
    trace = [robust.gamma_initial] + robust.gamma_trace
    assert np.all(np.diff(trace) <= 1e-9)
    assert check_decision(s, robust.decision) == []
    ideal = ideal_baseline(s)
    assert ideal.gamma <= robust.gamma
    assert robust.offloaded_bits(s) >= ideal.offloaded_bits(s)


def test_optimal_subproblems_carry_tight_certificates(monkeypatch, offload_scenario):
    solutions = []
    monkeypatch.setattr(decomposition, "solve", recording_solver(solutions))
    optimize(offload_scenario)
    ideal_baseline(offload_scenario)
    optimal = [sol for sol in solutions if sol.status == STATUS_OPTIMAL]
    assert optimal
    assert max(certificate_worst(sol) for sol in optimal) <= 1e-7


def sweep_results(s, axis, values):
    return [optimize(apply_axis(s, axis, value)) for value in values]


def non_decreasing(values, rel=1e-6):
    values = np.asarray(values)
    return bool(np.all(np.diff(values) >= -rel * np.abs(values[1:]).max()))


@pytest.mark.parametrize(
    "axis, values",
    [("sigma_multiplier", (0.5, 1.0, 2.0, 4.0)), ("alpha", (0.8, 0.9, 0.95, 0.99))],
)
def test_more_uncertainty_costs_more_and_offloads_more(offload_scenario, axis, values):
    results = sweep_results(offload_scenario, axis, values)
    assert all(r.status == STATUS_CONVERGED for r in results)
    assert non_decreasing([r.gamma for r in results])
    bits = [r.offloaded_bits(apply_axis(offload_scenario, axis, v)) for r, v in zip(results, values)]
    assert non_decreasing(bits)


def test_transmit_power_and_local_cpu_trends(offload_scenario):
    by_power = sweep_results(offload_scenario, "p0", (1.0, 2.0, 4.0))
    assert non_decreasing([r.gamma for r in by_power])
    by_cpu = sweep_results(offload_scenario, "f_g", (0.5e8, 1e8, 2e8))
    assert non_decreasing([-r.gamma for r in by_cpu])


def random_small_scenario(rng):
    I = 3
    shape = (I, 5)
    c = rng.uniform(20.0, 100.0, size=shape)
    return make_scenario(
        gus=rng.uniform(300.0, 700.0, size=(I, 2)),
        L=rng.uniform(1e6, 3e6, size=shape),
        c_bar=c,
        sigma=0.01 * c,
        uavs=(((400.0, 500.0), (520.0, 500.0)),),
    )


@pytest.mark.slow
def test_random_scenarios_descend_and_converge():
    rng = np.random.default_rng(17)
    converged = 0
    for _ in range(20):
        s = random_small_scenario(rng)
        r = optimize(s, max_rounds=30)
        trace = [r.gamma_initial] + r.gamma_trace
        assert np.all(np.diff(trace) <= 1e-6)
        assert r.rounds <= 30
        converged += r.status == STATUS_CONVERGED
    assert converged >= 18


@pytest.mark.slow
def test_desk_decision_survives_large_samples():
    s = desk_scenario()
    r = optimize(s)
    n = 100_000
    bound = 0.05 + 3 * math.sqrt(0.05 * 0.95 / n)
    for sampler in ("gaussian", "uniform", "two_point"):
        assert validate_robustness(s, r, sampler, n, seed=1).max_violation <= bound


@pytest.mark.slow
def test_robustness_premium_stays_in_band():
    ratios = []
    for seed in range(10):
        s = desk_scenario(seed)
        ratios.append(optimize(s).gamma / ideal_baseline(s).gamma)
    assert 1.0 <= float(np.mean(ratios)) <= 1.10
