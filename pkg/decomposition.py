# -*- coding: utf-8 -*-
"""
The three subproblems the block-coordinate descent alternates between:

- offload ratios and CVaR auxiliaries for a fixed assignment and trajectory
  (one cone program),
- GU to S-UAV assignment for fixed ratios and trajectory (one capacitated
  min-cost flow per slot),
- S-UAV trajectories for a fixed assignment and ratios (successive convex
  approximation of the transmission latency).

Every function takes `ideal=True` to swap the robust CVaR rows for plain
deadlines at the estimated complexity.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from ortools.graph.python import min_cost_flow

from config import DRIVER_CONFIG, SOLVER_CONFIG
from conic import STATUS_OPTIMAL, STATUS_PRIMAL_INFEASIBLE, Affine, ProgramBuilder, solve
from cvar import (
    add_cvar_rows,
    block_residual,
    feasible_block_values,
    inactive_block_values,
    loss_edge,
    loss_local,
    offload_window,
)
from energy_model import flight_coefficient, hover_power, total_energy
from errors import InfeasibleSubproblem, InternalAssertion, SolverFailure, ZeroSecrecyError
from link_model import LN2, eavesdrop_rate, distances, link_state, uplink_rate
from scenario import AUX_FIELDS, Decision, Scenario

logger = logging.getLogger(__name__)

# rows of the aux arrays
BETA, E, Q, Z, S = range(len(AUX_FIELDS))


@dataclass
class OffloadResult:
    rho: np.ndarray  # (I, T)
    aux1: np.ndarray  # (I, T, 5) local blocks
    aux2: np.ndarray  # (I, T, 5) edge blocks
    objective: float  # J, weighted network energy at the returned ratios
    iterations: int = 0
    gap: float = float("nan")


def _serving(lam: np.ndarray) -> np.ndarray:
    idx = np.argmax(lam, axis=1)
    return np.where(lam.sum(axis=1) > 0, idx, -1)


def _check_secrecy(lam: np.ndarray, r_sec: np.ndarray):
    bad = np.argwhere((lam > 0) & (r_sec <= 0))
    if bad.size:
        i, m, t = (int(k) for k in bad[0])
        raise ZeroSecrecyError(f"GU {i} is assigned to S-UAV {m} in slot {t} over a link with zero secrecy")


def diagnose_offload(s: Scenario, r_sec: np.ndarray, lam: np.ndarray) -> List[str]:
    """Names every (i, t) whose window of admissible offloading ratios is empty."""
    tasks = s.tasks
    serving = _serving(lam)
    problems = []
    for i in range(s.I):
        for t in range(s.T):
            m = serving[i, t]
            rate = r_sec[i, m, t] if m >= 0 else 0.0
            rho_min, rho_max = offload_window(
                tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], tasks.sigma[i, t], rate, s.params
            )
            if m < 0 and rho_min > 0:
                problems.append(
                    f"GU {i} slot {t}: local execution cannot meet tau at level alpha "
                    f"(needs rho >= {rho_min:.4f}) and no S-UAV is assigned"
                )
            elif m >= 0 and rho_min > rho_max:
                problems.append(
                    f"GU {i} slot {t}: neither local nor offloaded execution to S-UAV {m} meets tau "
                    f"(rho >= {rho_min:.4f} locally, rho <= {rho_max:.4f} at the edge)"
                )
    return problems


def edge_deadlines(s: Scenario, rho: np.ndarray, aux2: np.ndarray, ideal: bool = False) -> np.ndarray:
    """(I, T) budget for transmission plus nominal edge computing.

    tau + e + beta + q - Theta mu - z - margin of the edge block, the row the
    cone solver enforces; tau - Theta mu in ideal mode.
    """
    Theta = rho * s.tasks.L / s.params.f_u
    if ideal:
        return s.params.tau - Theta * s.tasks.mu
    return (
        s.params.tau + aux2[..., E] + aux2[..., BETA] + aux2[..., Q] - Theta * s.tasks.mu - aux2[..., Z]
        - SOLVER_CONFIG["margin"]
    )


def solve_offload_ratios(
    s: Scenario, w_s: np.ndarray, lam: np.ndarray, ideal: bool = False, tol: Optional[float] = None
) -> OffloadResult:
    """Optimal offloading ratios and CVaR auxiliaries for a fixed assignment."""
    p = s.params
    tasks = s.tasks
    tol = p.solver_tol if tol is None else tol
    links = link_state(s, w_s)
    _check_secrecy(lam, links.r_sec)
    serving = _serving(lam)

    builder = ProgramBuilder()
    rho_vars = {}
    local_blocks, edge_blocks = {}, {}
    objective = Affine()
    for i in range(s.I):
        for t in range(s.T):
            L, c, mu, sigma = tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], tasks.sigma[i, t]
            m = serving[i, t]
            if m >= 0:
                rho = builder.add_variable(f"rho[{i},{t}]", lb=0.0, ub=1.0)
                rho_vars[i, t] = rho
            else:
                rho = Affine.constant(0.0)

            Theta = (1.0 - rho) * (L / p.f_g)
            theta0 = Theta * c - p.tau
            if ideal:
                builder.add_le(theta0 + Theta * mu, 0.0)
            else:
                local_blocks[i, t] = add_cvar_rows(
                    builder, theta0, Theta, mu, sigma, p.alpha, name=f"local[{i},{t}]"
                )
            objective = objective + (1.0 - rho) * (p.eps_g * (c + mu) * L * p.f_g ** 2)

            if m < 0:
                continue
            r_sec = links.r_sec[i, m, t]
            Theta_e = rho * (L / p.f_u)
            theta0_e = rho * (c * L / p.f_u + L / r_sec) - p.tau
            if ideal:
                builder.add_le(theta0_e + Theta_e * mu, 0.0)
            else:
                edge_blocks[i, t] = add_cvar_rows(
                    builder, theta0_e, Theta_e, mu, sigma, p.alpha, name=f"edge[{i},{t}]"
                )
            unit = p.p0 * L / r_sec + p.kappa * p.eps_u * (c + mu) * L * p.f_u ** 2
            objective = objective + rho * unit

    builder.set_objective(objective)
    solution = solve(builder.build(), tol=tol)
    if not solution.usable:
        if solution.status == STATUS_PRIMAL_INFEASIBLE:
            diagnosis = diagnose_offload(s, links.r_sec, lam)
            raise InfeasibleSubproblem("offload-ratio subproblem is infeasible", diagnosis)
        raise SolverFailure(f"offload-ratio subproblem ended with status {solution.status}")
    if solution.status != STATUS_OPTIMAL:
        logger.info(f"Offload ratios accepted at status {solution.status} inside the loose certificate bound")

    rho = np.zeros((s.I, s.T))
    for (i, t), var in rho_vars.items():
        rho[i, t] = min(max(solution.value(var), 0.0), 1.0)

    aux1 = np.zeros((s.I, s.T, len(AUX_FIELDS)))
    aux2 = np.zeros((s.I, s.T, len(AUX_FIELDS)))
    snap = DRIVER_CONFIG["rho_snap"]
    for i in range(s.I):
        for t in range(s.T):
            L, c, mu, sigma = tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], tasks.sigma[i, t]
            m = serving[i, t]
            snapped = False
            if m >= 0 and 0.0 < rho[i, t] < snap:
                rho_min, _ = offload_window(L, c, mu, sigma, links.r_sec[i, m, t], p)
                if rho_min == 0.0:
                    rho[i, t] = 0.0
                    snapped = True
            if ideal or snapped:
                aux1[i, t] = feasible_block_values(loss_local(rho[i, t], L, c, mu, sigma, p), p.alpha)
            else:
                aux1[i, t] = local_blocks[i, t].values(solution.x)
            if m < 0:
                aux2[i, t] = inactive_block_values(p.tau)
            elif ideal or snapped:
                loss = loss_edge(lam[i, :, t], rho[i, t], L, c, mu, sigma, links.r_sec[i, :, t], p)
                aux2[i, t] = feasible_block_values(loss, p.alpha)
            else:
                aux2[i, t] = edge_blocks[i, t].values(solution.x)

    decision = Decision(w_s=np.asarray(w_s, dtype=float), lam=lam, rho=rho, aux1=aux1, aux2=aux2)
    gamma = total_energy(s, decision).gamma
    logger.debug(
        f"Offload ratios: {len(rho_vars)} assigned pairs, objective {gamma:.6f} J, "
        f"{solution.iterations} iterations"
    )
    return OffloadResult(rho, aux1, aux2, gamma, solution.iterations, solution.gap)


def edge_rows_hold(
    s: Scenario, w_s: np.ndarray, lam: np.ndarray, rho: np.ndarray, aux2: np.ndarray, tol: float = 1e-7
) -> bool:
    """Whether the fixed edge auxiliaries still satisfy their rows under (lam, w_s)."""
    p = s.params
    tasks = s.tasks
    r_sec = link_state(s, w_s).r_sec
    for i in range(s.I):
        for t in range(s.T):
            if not np.any(lam[i, :, t]) or rho[i, t] == 0.0:
                continue
            m = int(np.argmax(lam[i, :, t]))
            if r_sec[i, m, t] <= 0:
                return False
            loss = loss_edge(
                lam[i, :, t], rho[i, t], tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], tasks.sigma[i, t],
                r_sec[i, :, t], p,
            )
            if block_residual(aux2[i, t], loss.theta0, loss.Theta, loss.mu, loss.sigma, p.alpha) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Assignment
# ---------------------------------------------------------------------------


@dataclass
class AssignmentSlot:
    """Candidate costs of one slot; forbidden pairs carry +inf."""

    t: int
    cost: np.ndarray  # (I, M) J
    mandatory: np.ndarray  # (I,) bool, rho > 0
    capacity: int

    @property
    def I(self) -> int:
        return self.cost.shape[0]

    @property
    def M(self) -> int:
        return self.cost.shape[1]

    def allowed(self) -> np.ndarray:
        return np.isfinite(self.cost)


def assignment_slot(s: Scenario, r_sec: np.ndarray, rho: np.ndarray, t: int) -> AssignmentSlot:
    """Costs of attaching each GU to each S-UAV in slot t at fixed ratios."""
    p = s.params
    tasks = s.tasks
    cost = np.full((s.I, s.M), np.inf)
    for i in range(s.I):
        L, c, mu, sigma = tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], tasks.sigma[i, t]
        for m in range(s.M):
            rate = r_sec[i, m, t]
            if rate <= 0:
                continue
            _, rho_max = offload_window(L, c, mu, sigma, rate, p)
            if rho[i, t] > rho_max * (1.0 + 1e-9) + 1e-12:
                continue
            cost[i, m] = rho[i, t] * (p.p0 * L / rate + p.kappa * p.eps_u * (c + mu) * L * p.f_u ** 2)
    return AssignmentSlot(t=t, cost=cost, mandatory=rho[:, t] > 0, capacity=p.M_max)


def _choices(slot: AssignmentSlot, i: int) -> List[int]:
    """Options of GU i in increasing tie-break order; -1 keeps it unassigned."""
    allowed = np.flatnonzero(slot.allowed()[i]).tolist()
    return allowed if slot.mandatory[i] else [-1] + allowed


def _integer_costs(slot: AssignmentSlot) -> np.ndarray:
    """Costs scaled to integers; equal integers are equal-cost pairs for both solvers."""
    allowed = slot.allowed()
    finite = slot.cost[allowed]
    max_cost = float(finite.max()) if finite.size else 0.0
    scale = 1e12 if max_cost <= 0 else min(1e12, 2.0 ** 52 / (max_cost * max(slot.I, 1)))
    units = np.zeros(slot.cost.shape, dtype=np.int64)
    units[allowed] = np.round(slot.cost[allowed] * scale).astype(np.int64)
    return units


def _check_slot(slot: AssignmentSlot):
    allowed = slot.allowed()
    for i in np.flatnonzero(slot.mandatory):
        if not np.any(allowed[i]):
            raise InfeasibleSubproblem(
                f"slot {slot.t}: GU {i} must offload but every S-UAV link is forbidden"
            )
    need = int(np.count_nonzero(slot.mandatory))
    if need > slot.M * slot.capacity:
        raise InfeasibleSubproblem(
            f"slot {slot.t}: {need} GUs must offload but the S-UAVs offer only "
            f"{slot.M * slot.capacity} connections"
        )


def _flow_choices(slot: AssignmentSlot, units: np.ndarray, fixed: Dict[int, int]) -> Optional[Tuple[int, List[int]]]:
    """Min-cost flow with the GUs in `fixed` pinned to one option.

    Returns the integer optimum and the option of every GU, or None when the
    pinned network has no feasible flow.
    """
    I, M = slot.I, slot.M
    source, sink = 0, I + M + 1
    smcf = min_cost_flow.SimpleMinCostFlow()
    pair_arcs = {}
    for i in range(I):
        options = [fixed[i]] if i in fixed else _choices(slot, i)
        smcf.add_arc_with_capacity_and_unit_cost(source, 1 + i, 1, 0)
        for m in options:
            if m < 0:
                smcf.add_arc_with_capacity_and_unit_cost(1 + i, sink, 1, 0)
            else:
                pair_arcs[i, m] = smcf.add_arc_with_capacity_and_unit_cost(1 + i, 1 + I + m, 1, int(units[i, m]))
    for m in range(M):
        smcf.add_arc_with_capacity_and_unit_cost(1 + I + m, sink, slot.capacity, 0)
    smcf.set_node_supply(source, I)
    smcf.set_node_supply(sink, -I)
    for node in range(1, I + M + 1):
        smcf.set_node_supply(node, 0)

    if smcf.solve() != smcf.OPTIMAL:
        return None
    combo = [-1] * I
    for (i, m), arc in pair_arcs.items():
        if smcf.flow(arc) > 0:
            combo[i] = m
    return int(smcf.optimal_cost()), combo


def _to_matrix(combo: Sequence[int], M: int) -> np.ndarray:
    lam_t = np.zeros((len(combo), M), dtype=np.int8)
    for i, m in enumerate(combo):
        if m >= 0:
            lam_t[i, m] = 1
    return lam_t


def solve_slot_assignment(slot: AssignmentSlot) -> Tuple[np.ndarray, float]:
    """Exact capacitated assignment of one slot by min-cost flow.

    Among equal-cost optima the lowest (i, m) lexicographic one wins: GUs are
    pinned in index order to the first option (unassigned, then S-UAV 0, 1,
    ...) that keeps the optimum.
    """
    _check_slot(slot)
    units = _integer_costs(slot)
    first = _flow_choices(slot, units, {})
    if first is None:
        raise InfeasibleSubproblem(f"slot {slot.t}: no assignment serves every offloading GU")
    best, combo = first
    fixed: Dict[int, int] = {}
    for i in range(slot.I):
        for m in _choices(slot, i):
            if m == combo[i]:
                break
            pinned = _flow_choices(slot, units, {**fixed, i: m})
            if pinned is not None and pinned[0] == best:
                combo = pinned[1]
                break
        fixed[i] = combo[i]
    lam_t = _to_matrix(combo, slot.M)
    total = float(np.sum(np.where(lam_t > 0, slot.cost, 0.0)))
    return lam_t, total


def enumerate_slot_assignment(slot: AssignmentSlot) -> Tuple[np.ndarray, float]:
    """Brute-force optimum over all (M+1)^I choices; reference for small slots."""
    _check_slot(slot)
    units = _integer_costs(slot)
    options = [_choices(slot, i) for i in range(slot.I)]
    best_key, best = None, None
    for combo in itertools.product(*options):
        load = np.bincount([m for m in combo if m >= 0], minlength=slot.M)
        if np.any(load > slot.capacity):
            continue
        key = (sum(int(units[i, m]) for i, m in enumerate(combo) if m >= 0), combo)
        if best_key is None or key < best_key:
            best_key, best = key, combo
    if best is None:
        raise InfeasibleSubproblem(f"slot {slot.t}: no assignment respects the connection capacity")
    lam_t = _to_matrix(best, slot.M)
    return lam_t, float(np.sum(np.where(lam_t > 0, slot.cost, 0.0)))


def solve_assignment(s: Scenario, w_s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Per-slot optimal assignment at fixed ratios and trajectory."""
    r_sec = link_state(s, w_s).r_sec
    lam = np.zeros((s.I, s.M, s.T), dtype=np.int8)
    for t in range(s.T):
        lam[:, :, t], _ = solve_slot_assignment(assignment_slot(s, r_sec, rho, t))
    return lam


# ---------------------------------------------------------------------------
# Trajectory
# ---------------------------------------------------------------------------


def _taylor_terms(w_i, w_expansion, lam, rho, L, r_eav, p) -> Tuple[float, float, float]:
    """(latency at the expansion point, slope in squared distance, D_l)."""
    D_l = float(np.sum((np.asarray(w_expansion, float) - np.asarray(w_i, float)) ** 2)) + p.h_s ** 2
    upsilon = 1.0 + p.p0 * p.g0 / (p.noise_power * D_l)
    denom = p.B0 * math.log(upsilon) - r_eav * LN2
    if denom <= 0:
        raise ZeroSecrecyError("no secrecy at the expansion point")
    bits = lam * rho * L
    latency = bits * LN2 / denom
    slope = bits * p.p0 * p.g0 * LN2 / (p.n0 * upsilon * denom ** 2 * D_l ** 2)
    return latency, slope, D_l


def transmission_latency(w_m, w_i, lam, rho, L, r_eav, p) -> float:
    """Exact transmission latency of GU i towards an S-UAV at w_m."""
    if lam * rho == 0:
        return 0.0
    d = math.sqrt(float(np.sum((np.asarray(w_m, float) - np.asarray(w_i, float)) ** 2)) + p.h_s ** 2)
    r_sec = float(uplink_rate(d, p)) - r_eav
    if r_sec <= 0:
        raise ZeroSecrecyError("no secrecy at the evaluated position")
    return lam * rho * L / r_sec


def taylor_upper_bound(w_m, w_i, w_expansion, lam, rho, L, r_eav, p) -> float:
    """First-order upper bound of the transmission latency in the squared
    GU to S-UAV distance, tangent at w_expansion."""
    if lam * rho == 0:
        return 0.0
    latency, slope, D_l = _taylor_terms(w_i, w_expansion, lam, rho, L, r_eav, p)
    D = float(np.sum((np.asarray(w_m, float) - np.asarray(w_i, float)) ** 2)) + p.h_s ** 2
    return latency + slope * (D - D_l)


@dataclass
class TrajectoryResult:
    w_s: np.ndarray
    trace: List[float]  # true objective per accepted iterate, trace[0] at w_init
    model_trace: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _build_trajectory_program(s, lam, rho, deadlines, w_l, r_eav):
    p = s.params
    tasks = s.tasks
    builder = ProgramBuilder()
    W = np.empty((s.M, s.T, 2), dtype=object)
    for m in range(s.M):
        for t in range(s.T):
            W[m, t, 0] = builder.add_variable(f"x[{m},{t}]", lb=p.X_min, ub=p.X_max)
            W[m, t, 1] = builder.add_variable(f"y[{m},{t}]", lb=p.Y_min, ub=p.Y_max)
        for k in range(2):
            builder.add_eq(W[m, 0, k], s.uav_endpoints[m, 0, k])
            builder.add_eq(W[m, -1, k], s.uav_endpoints[m, 1, k])

    coef = flight_coefficient(p)
    constant = p.kappa * hover_power(p) * p.tau * s.M * s.T
    objective = Affine()
    for m in range(s.M):
        for t in range(1, s.T):
            dx = W[m, t, 0] - W[m, t - 1, 0]
            dy = W[m, t, 1] - W[m, t - 1, 1]
            builder.add_soc(p.max_step, [dx, dy])
            if coef > 0:
                u = builder.add_variable(f"u[{m},{t}]")
                builder.add_soc(u, [dx, dy])
                objective = objective + u * (p.kappa * coef)
            elif coef < 0:
                step = w_l[m, t] - w_l[m, t - 1]
                norm = float(np.linalg.norm(step))
                if norm > 0:
                    objective = objective + (dx * (step[0] / norm) + dy * (step[1] / norm)) * (p.kappa * coef)

    # GU-side and edge computing energies do not depend on the trajectory
    local = (1.0 - rho) * tasks.L * (tasks.c_bar + tasks.mu) * p.eps_g * p.f_g ** 2
    edge = lam.sum(axis=1) * rho * tasks.L * (tasks.c_bar + tasks.mu) * p.eps_u * p.f_u ** 2
    constant += float(local.sum()) + p.kappa * float(edge.sum())

    serving = _serving(lam)
    for i in range(s.I):
        for t in range(s.T):
            m = serving[i, t]
            if m < 0 or rho[i, t] == 0.0:
                continue
            latency, slope, D_l = _taylor_terms(
                s.gus[i], w_l[m, t], 1.0, rho[i, t], tasks.L[i, t], r_eav[i, t], p
            )
            root = 2.0 / math.sqrt(D_l)
            delta = builder.add_variable(f"delta[{i},{t}]", lb=0.0)
            builder.add_soc(
                delta + 1.0,
                [(W[m, t, 0] - s.gus[i, 0]) * root, (W[m, t, 1] - s.gus[i, 1]) * root, delta - 1.0],
            )
            t_up = delta * (slope * D_l) + (latency + slope * (p.h_s ** 2 - D_l))
            objective = objective + t_up * p.p0
            compute = rho[i, t] * tasks.L[i, t] * tasks.c_bar[i, t] / p.f_u
            builder.add_le(t_up + compute, deadlines[i, t])

    builder.set_objective(objective + constant)
    return builder.build(), W


def _deadlines_hold(s, lam, rho, deadlines, w_s, r_eav, slack=1e-9) -> bool:
    tasks = s.tasks
    serving = _serving(lam)
    for i in range(s.I):
        for t in range(s.T):
            m = serving[i, t]
            if m < 0 or rho[i, t] == 0.0:
                continue
            try:
                latency = transmission_latency(w_s[m, t], s.gus[i], 1.0, rho[i, t], tasks.L[i, t], r_eav[i, t], s.params)
            except ZeroSecrecyError:
                return False
            compute = rho[i, t] * tasks.L[i, t] * tasks.c_bar[i, t] / s.params.f_u
            if latency + compute > deadlines[i, t] + slack:
                return False
    return True


def solve_trajectory_sca(
    s: Scenario,
    lam: np.ndarray,
    rho: np.ndarray,
    aux2: np.ndarray,
    w_init: np.ndarray,
    ideal: bool = False,
    max_iters: Optional[int] = None,
    tol: Optional[float] = None,
) -> TrajectoryResult:
    """Successive convex approximation of the trajectory subproblem.

    Each iteration minimizes the tangent upper bound of the weighted energy
    under the linearized edge deadlines; it stops when two accepted
    iterates differ by at most sca_tol.
    """
    p = s.params
    max_iters = DRIVER_CONFIG["max_sca_iters"] if max_iters is None else max_iters
    tol = p.solver_tol if tol is None else tol
    deadlines = edge_deadlines(s, rho, aux2, ideal)
    geo = distances(s, w_init)
    r_eav = eavesdrop_rate(geo.d_gu_eav, geo.d_eav_jam[None, :], p)

    w_l = np.array(w_init, dtype=float)
    trace = [total_energy(s, Decision(w_l, lam, rho, aux2, aux2)).gamma]
    result = TrajectoryResult(w_s=w_l, trace=trace)
    for it in range(max_iters):
        program, W = _build_trajectory_program(s, lam, rho, deadlines, w_l, r_eav)
        solution = solve(program, tol=tol)
        if not solution.usable:
            if it == 0 and solution.status == STATUS_PRIMAL_INFEASIBLE:
                raise InfeasibleSubproblem("initial trajectory violates robust deadline")
            logger.warning(f"SCA iteration {it} ended with status {solution.status}; keeping the previous trajectory")
            break
        model = solution.objective
        result.model_trace.append(model)
        if model > trace[-1] + p.sca_tol:
            raise InternalAssertion(
                f"SCA step {it} increased the upper bound: {model:.9f} J > {trace[-1]:.9f} J"
            )

        w_new = np.array([[[solution.value(W[m, t, k]) for k in range(2)] for t in range(s.T)] for m in range(s.M)])
        w_new[..., 0] = np.clip(w_new[..., 0], p.X_min, p.X_max)
        w_new[..., 1] = np.clip(w_new[..., 1], p.Y_min, p.Y_max)
        w_new[:, 0] = s.uav_endpoints[:, 0]
        w_new[:, -1] = s.uav_endpoints[:, 1]

        if not _deadlines_hold(s, lam, rho, deadlines, w_new, r_eav):
            logger.debug(f"SCA iteration {it} broke a true deadline; keeping the previous trajectory")
            break
        gamma = total_energy(s, Decision(w_new, lam, rho, aux2, aux2)).gamma
        result.iterations = it + 1
        if gamma > trace[-1]:
            logger.debug(f"SCA iteration {it} raised the true objective by {gamma - trace[-1]:.3e} J; stopping")
            if gamma - trace[-1] <= p.sca_tol:
                result.converged = True
            break
        trace.append(gamma)
        w_l = w_new
        result.w_s = w_l
        if trace[-2] - trace[-1] <= p.sca_tol:
            result.converged = True
            break
    logger.debug(f"SCA finished after {result.iterations} iterations, objective {trace[-1]:.6f} J")
    return result
