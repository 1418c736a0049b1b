import numpy as np
import pytest

from conftest import make_scenario
from cvar import offload_window
from config import SOLVER_CONFIG
from decomposition import (
    AssignmentSlot,
    edge_deadlines,
    edge_rows_hold,
    enumerate_slot_assignment,
    solve_assignment,
    solve_offload_ratios,
    solve_slot_assignment,
    solve_trajectory_sca,
    taylor_upper_bound,
    transmission_latency,
)
from energy_model import total_energy
from errors import InfeasibleSubproblem
from link_model import link_state
from scenario import Decision, NetworkParams, straight_line_init


def assign_all(s, gu=0, uav=0):
    lam = np.zeros((s.I, s.M, s.T), dtype=np.int8)
    lam[gu, uav, :] = 1
    return lam


def path_length(w_s):
    return float(np.linalg.norm(np.diff(w_s, axis=1), axis=2).sum())


# offload ratios


def test_nothing_assigned_keeps_everything_local(easy_scenario):
    s = easy_scenario
    d = straight_line_init(s)
    res = solve_offload_ratios(s, d.w_s, d.lam)
    assert not res.rho.any()
    assert res.objective == pytest.approx(total_energy(s, d).gamma, rel=1e-12)


def test_ratio_settles_on_local_deadline(offload_scenario):
    s = offload_scenario
    d = straight_line_init(s)
    lam = assign_all(s)
    res = solve_offload_ratios(s, d.w_s, lam)
    r_sec = link_state(s, d.w_s).r_sec
    for t in range(s.T):
        rho_min, rho_max = offload_window(
            s.tasks.L[0, t], s.tasks.c_bar[0, t], s.tasks.mu[0, t], s.tasks.sigma[0, t], r_sec[0, 0, t], s.params
        )
        assert rho_min > 0
        assert res.rho[0, t] == pytest.approx(rho_min, abs=1e-5)
        assert res.rho[0, t] <= rho_max
    assert not res.rho[1].any()
    assert edge_rows_hold(s, d.w_s, lam, res.rho, res.aux2)


def test_edge_deadline_matches_solver_row(offload_scenario):
    s = offload_scenario
    d = straight_line_init(s)
    lam = assign_all(s)
    rho = np.full((s.I, s.T), 0.5)
    margin = SOLVER_CONFIG["margin"]
    robust = edge_deadlines(s, rho, np.zeros((s.I, s.T, 5)))
    np.testing.assert_allclose(robust, s.params.tau - margin, rtol=0, atol=1e-13)
    np.testing.assert_allclose(edge_deadlines(s, rho, d.aux2, ideal=True), s.params.tau, rtol=0, atol=0)

    res = solve_offload_ratios(s, d.w_s, lam)
    budget = edge_deadlines(s, res.rho, res.aux2)
    r_sec = link_state(s, d.w_s).r_sec
    for t in range(s.T):
        L, c = s.tasks.L[0, t], s.tasks.c_bar[0, t]
        latency = res.rho[0, t] * L / r_sec[0, 0, t] + res.rho[0, t] * L * c / s.params.f_u
        assert latency <= budget[0, t] + 1e-7


def test_deterministic_tasks_match_linear_deadlines(offload_scenario):
    s = offload_scenario.deterministic()
    d = straight_line_init(s)
    lam = assign_all(s)
    robust = solve_offload_ratios(s, d.w_s, lam)
    ideal = solve_offload_ratios(s, d.w_s, lam, ideal=True)
    assert robust.objective == pytest.approx(ideal.objective, rel=1e-6)
    np.testing.assert_allclose(robust.rho, ideal.rho, atol=1e-6)


def test_robust_ratio_exceeds_ideal(offload_scenario):
    s = offload_scenario
    d = straight_line_init(s)
    lam = assign_all(s)
    robust = solve_offload_ratios(s, d.w_s, lam)
    ideal = solve_offload_ratios(s, d.w_s, lam, ideal=True)
    assert np.all(robust.rho[0] > ideal.rho[0])
    assert robust.objective >= ideal.objective


def test_unassigned_heavy_task_is_diagnosed(offload_scenario):
    s = offload_scenario
    d = straight_line_init(s)
    with pytest.raises(InfeasibleSubproblem) as info:
        solve_offload_ratios(s, d.w_s, d.lam)
    assert any("GU 0" in line for line in info.value.diagnosis)


# assignment


def test_capacity_shortfall_is_infeasible():
    slot = AssignmentSlot(t=3, cost=np.array([[1.0], [2.0]]), mandatory=np.array([True, True]), capacity=1)
    with pytest.raises(InfeasibleSubproblem, match="slot 3"):
        solve_slot_assignment(slot)


def test_mandatory_gu_without_allowed_link():
    slot = AssignmentSlot(t=0, cost=np.array([[np.inf, np.inf]]), mandatory=np.array([True]), capacity=2)
    with pytest.raises(InfeasibleSubproblem, match="GU 0"):
        solve_slot_assignment(slot)


def random_slot(rng, case):
    I, M = int(rng.integers(1, 7)), int(rng.integers(1, 4))
    cost = rng.uniform(0.0, 1.0, size=(I, M))
    if case % 3 == 0:
        cost = np.round(cost, 1)
    cost[rng.random((I, M)) < 0.2] = np.inf
    mandatory = (rng.random(I) < 0.5) & np.isfinite(cost).any(axis=1)
    return AssignmentSlot(t=case, cost=cost, mandatory=mandatory, capacity=int(rng.integers(1, 4)))


def test_min_cost_flow_matches_enumeration():
    rng = np.random.default_rng(7)
    for case in range(100):
        slot = random_slot(rng, case)
        try:
            lam_flow, cost_flow = solve_slot_assignment(slot)
        except InfeasibleSubproblem:
            with pytest.raises(InfeasibleSubproblem):
                enumerate_slot_assignment(slot)
            continue
        lam_enum, cost_enum = enumerate_slot_assignment(slot)
        assert cost_flow == pytest.approx(cost_enum, rel=1e-9, abs=1e-12), case
        np.testing.assert_array_equal(lam_flow, lam_enum, err_msg=f"slot {case}")
        assert np.all(lam_flow.sum(axis=0) <= slot.capacity)
        assert np.all(lam_flow.sum(axis=1)[slot.mandatory] == 1)


def test_equal_costs_pick_lowest_indices():
    slot = AssignmentSlot(t=0, cost=np.ones((2, 2)), mandatory=np.array([True, False]), capacity=1)
    lam, cost = solve_slot_assignment(slot)
    np.testing.assert_array_equal(lam, [[1, 0], [0, 0]])
    assert cost == 1.0


def test_swapped_ties_resolve_lexicographically():
    # the straight and the crossed pairing cost the same
    slot = AssignmentSlot(t=0, cost=np.zeros((2, 2)), mandatory=np.array([True, True]), capacity=1)
    for solver in (solve_slot_assignment, enumerate_slot_assignment):
        lam, _ = solver(slot)
        np.testing.assert_array_equal(lam, [[1, 0], [0, 1]])
    idle = AssignmentSlot(t=0, cost=np.zeros((2, 2)), mandatory=np.array([False, True]), capacity=1)
    lam, _ = solve_slot_assignment(idle)
    np.testing.assert_array_equal(lam, [[0, 0], [1, 0]])


def test_no_offloading_means_no_assignment(easy_scenario):
    s = easy_scenario
    d = straight_line_init(s)
    lam = solve_assignment(s, d.w_s, d.rho)
    assert not lam.any()


def test_assignment_serves_offloading_gu(offload_scenario):
    s = offload_scenario
    d = straight_line_init(s)
    rho = np.zeros((s.I, s.T))
    rho[0] = 0.6
    lam = solve_assignment(s, d.w_s, rho)
    assert np.all(lam[0].sum(axis=0) == 1)
    assert not lam[1].any()


# trajectory


def test_taylor_bound_is_tangent(params):
    gu = np.array([450.0, 450.0])
    w = np.array([480.0, 500.0])
    exact = transmission_latency(w, gu, 1, 0.5, 1e6, 1.1e6, params)
    assert taylor_upper_bound(w, gu, w, 1, 0.5, 1e6, 1.1e6, params) == pytest.approx(exact, rel=1e-12)
    assert taylor_upper_bound(w, gu, w, 0, 0.5, 1e6, 1.1e6, params) == 0.0
    assert taylor_upper_bound(w, gu, w, 1, 0.0, 1e6, 1.1e6, params) == 0.0


def test_taylor_bound_dominates(rng):
    p = NetworkParams()
    for _ in range(1000):
        gu = rng.uniform(0.0, 1000.0, size=2)
        w_m, w_l = rng.uniform(0.0, 1000.0, size=(2, 2))
        rho, L, r_eav = rng.uniform(0.05, 1.0), rng.uniform(1e6, 1e7), rng.uniform(0.0, 2e7)
        exact = transmission_latency(w_m, gu, 1, rho, L, r_eav, p)
        bound = taylor_upper_bound(w_m, gu, w_l, 1, rho, L, r_eav, p)
        assert bound >= exact - 1e-12 * max(1.0, exact)


def test_idle_uav_flies_shortest_path(easy_scenario):
    s = easy_scenario
    d = straight_line_init(s)
    res = solve_trajectory_sca(s, d.lam, d.rho, d.aux2, d.w_s)
    assert path_length(res.w_s) <= path_length(d.w_s) + 1e-6
    assert np.all(np.diff(res.trace) <= 0)


def bending_case():
    s = make_scenario(gus=((480.0, 420.0),), T=9, uavs=(((400.0, 500.0), (560.0, 500.0)),))
    d = straight_line_init(s)
    lam = assign_all(s)
    rho = np.full((s.I, s.T), 0.5)
    return s, d, lam, rho


def test_path_bends_toward_served_gu():
    s, d, lam, rho = bending_case()
    res = solve_trajectory_sca(s, lam, rho, d.aux2, d.w_s, ideal=True)
    assert res.w_s[0, 1:-1, 1].min() < 500.0 - 1.0
    before = total_energy(s, Decision(d.w_s, lam, rho, d.aux1, d.aux2))
    after = total_energy(s, Decision(res.w_s, lam, rho, d.aux1, d.aux2))
    assert after.e_tx.sum() < before.e_tx.sum()
    assert after.gamma < before.gamma
    assert np.all(np.diff(res.trace) <= 0)


def test_restart_from_optimum_is_a_fixed_point():
    s, d, lam, rho = bending_case()
    res = solve_trajectory_sca(s, lam, rho, d.aux2, d.w_s, ideal=True)
    again = solve_trajectory_sca(s, lam, rho, d.aux2, res.w_s, ideal=True, max_iters=1)
    assert again.trace[0] - again.trace[-1] <= s.params.sca_tol
