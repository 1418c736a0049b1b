# -*- coding: utf-8 -*-
"""
Block-coordinate descent over offload ratios, assignment and trajectories.
Contains the optimization engine, the ideal and fixed-trajectory baselines
and the Monte-Carlo robustness check of a returned decision.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from config import DRIVER_CONFIG, VALIDATION_CONFIG
from cvar import offload_window
from decomposition import (
    edge_rows_hold,
    solve_assignment,
    solve_offload_ratios,
    solve_trajectory_sca,
)
from energy_model import EnergyBreakdown, offloaded_bits, total_energy
from errors import InfeasibleSubproblem
from link_model import link_state
from samplers import SAMPLERS
from scenario import Decision, Scenario, straight_line_init

STATUS_CONVERGED = "converged"
STATUS_MAX_ROUNDS = "max_rounds"
STATUS_INFEASIBLE = "infeasible"

# accept a block update only if it does not raise Γ by more than this (J)
ACCEPT_SLACK = 1e-9


@dataclass
class OptimizationResult:
    decision: Optional[Decision]
    breakdown: Optional[EnergyBreakdown]
    gamma_trace: List[float]
    gamma_initial: float
    rounds: int
    status: str
    timings: Dict[str, float]
    mode: str = "robust"
    diagnosis: List[str] = field(default_factory=list)
    log_messages: List[str] = field(default_factory=list)

    @property
    def gamma(self) -> float:
        return self.breakdown.gamma if self.breakdown is not None else float("nan")

    def offloaded_bits(self, s: Scenario) -> float:
        return offloaded_bits(s, self.decision) if self.decision is not None else float("nan")

    def to_dict(self) -> Dict:
        return {
            "mode": self.mode,
            "status": self.status,
            "rounds": self.rounds,
            "gamma": self.gamma,
            "gamma_initial": self.gamma_initial,
            "gamma_trace": list(self.gamma_trace),
            "timings": dict(self.timings),
            "breakdown": self.breakdown.totals() if self.breakdown is not None else None,
            "decision": self.decision.to_dict() if self.decision is not None else None,
            "diagnosis": list(self.diagnosis),
            "log": list(self.log_messages),
        }


class BcdOptimizer:
    """Alternates offload ratios -> assignment -> trajectory until the
    weighted energy settles within zeta."""

    def __init__(
        self,
        scenario: Scenario,
        ideal: bool = False,
        optimize_trajectory: bool = True,
        max_rounds: Optional[int] = None,
        zeta: Optional[float] = None,
        tol: Optional[float] = None,
    ):
        self.scenario = scenario
        self.ideal = ideal
        # the ideal pipeline plans as if the complexity estimate were exact
        self.model = scenario.deterministic() if ideal else scenario
        self.optimize_trajectory = optimize_trajectory
        self.max_rounds = DRIVER_CONFIG["max_rounds"] if max_rounds is None else max_rounds
        self.zeta = scenario.params.zeta if zeta is None else zeta
        self.tol = tol
        self.timings = {"p5": 0.0, "p4": 0.0, "p6": 0.0, "total": 0.0}
        self.log_messages: List[str] = []
        self.logger = logging.getLogger(__name__)

    @property
    def mode(self) -> str:
        if self.ideal:
            return "ideal"
        return "robust" if self.optimize_trajectory else "fixed_trajectory"

    def _log(self, message: str, level: int = logging.INFO):
        self.log_messages.append(message)
        self.logger.log(level, message)

    def _gamma(self, d: Decision) -> float:
        return total_energy(self.model, d).gamma

    def bootstrap(self) -> Decision:
        """Straight-line trajectories plus the nearest feasible S-UAV for every
        GU that cannot finish locally, then optimal ratios for that assignment."""
        s = self.model
        p = s.params
        d = straight_line_init(s)
        links = link_state(s, d.w_s)
        lam = np.zeros((s.I, s.M, s.T), dtype=np.int8)
        diagnosis = []
        for t in range(s.T):
            load = np.zeros(s.M, dtype=int)
            needs = []
            for i in range(s.I):
                rho_min, _ = offload_window(
                    s.tasks.L[i, t], s.tasks.c_bar[i, t], s.tasks.mu[i, t], s.tasks.sigma[i, t], 0.0, p
                )
                if rho_min > 0:
                    needs.append((rho_min, i))
            for rho_min, i in sorted(needs, key=lambda item: (-item[0], item[1])):
                placed = False
                for m in np.argsort(links.d_gu_uav[i, :, t], kind="stable"):
                    if load[m] >= p.M_max or links.r_sec[i, m, t] <= 0:
                        continue
                    _, rho_max = offload_window(
                        s.tasks.L[i, t], s.tasks.c_bar[i, t], s.tasks.mu[i, t], s.tasks.sigma[i, t],
                        links.r_sec[i, m, t], p,
                    )
                    if rho_min <= rho_max:
                        lam[i, m, t] = 1
                        load[m] += 1
                        placed = True
                        break
                if not placed:
                    diagnosis.append(
                        f"GU {i} slot {t}: local execution needs rho >= {rho_min:.4f} and no S-UAV "
                        "with free capacity can take the rest within tau"
                    )
        if diagnosis:
            raise InfeasibleSubproblem("no feasible starting point", diagnosis)
        started = time.perf_counter()
        res = solve_offload_ratios(s, d.w_s, lam, ideal=self.ideal, tol=self.tol)
        self.timings["p5"] += time.perf_counter() - started
        self._log(
            f"Bootstrap: {int(lam.sum())} GU-slot pairs assigned, initial objective {res.objective:.6f} J"
        )
        return Decision(d.w_s, lam, res.rho, res.aux1, res.aux2)

    def _ratio_step(self, d: Decision, gamma: float):
        started = time.perf_counter()
        try:
            res = solve_offload_ratios(self.model, d.w_s, d.lam, ideal=self.ideal, tol=self.tol)
        except InfeasibleSubproblem as e:
            self._log(f"Offload-ratio step skipped: {e}", logging.WARNING)
            return d, gamma
        finally:
            self.timings["p5"] += time.perf_counter() - started
        if res.objective <= gamma + ACCEPT_SLACK:
            return Decision(d.w_s, d.lam, res.rho, res.aux1, res.aux2), res.objective
        self._log(f"Offload-ratio step rejected: {res.objective:.9f} J > {gamma:.9f} J", logging.DEBUG)
        return d, gamma

    def _assignment_step(self, d: Decision, gamma: float):
        started = time.perf_counter()
        try:
            lam = solve_assignment(self.model, d.w_s, d.rho)
            if np.array_equal(lam, d.lam):
                return d, gamma
            candidate = Decision(d.w_s, lam, d.rho, d.aux1, d.aux2)
            if not self.ideal and not edge_rows_hold(self.model, d.w_s, lam, d.rho, d.aux2):
                self._log("New assignment breaks the fixed edge auxiliaries; re-solving offload ratios", logging.DEBUG)
                res = solve_offload_ratios(self.model, d.w_s, lam, ideal=self.ideal, tol=self.tol)
                candidate = Decision(d.w_s, lam, res.rho, res.aux1, res.aux2)
            new_gamma = self._gamma(candidate)
        except InfeasibleSubproblem as e:
            self._log(f"Assignment step skipped: {e}", logging.WARNING)
            return d, gamma
        finally:
            self.timings["p4"] += time.perf_counter() - started
        if new_gamma <= gamma + ACCEPT_SLACK:
            return candidate, new_gamma
        return d, gamma

    def _trajectory_step(self, d: Decision, gamma: float):
        started = time.perf_counter()
        try:
            traj = solve_trajectory_sca(self.model, d.lam, d.rho, d.aux2, d.w_s, ideal=self.ideal, tol=self.tol)
        except InfeasibleSubproblem as e:
            self._log(f"Trajectory step skipped: {e}", logging.WARNING)
            return d, gamma
        finally:
            self.timings["p6"] += time.perf_counter() - started
        if traj.trace[-1] <= gamma + ACCEPT_SLACK:
            return Decision(traj.w_s, d.lam, d.rho, d.aux1, d.aux2), traj.trace[-1]
        return d, gamma

    def run(self) -> OptimizationResult:
        """Runs the BCD rounds and returns the final decision and its energy."""
        started = time.perf_counter()
        self.log_messages = [
            f"Starting {self.mode} optimization: I={self.scenario.I}, M={self.scenario.M}, T={self.scenario.T}"
        ]
        try:
            d = self.bootstrap()
        except InfeasibleSubproblem as e:
            self._log(f"Infeasible scenario: {e}", logging.ERROR)
            self.timings["total"] = time.perf_counter() - started
            return OptimizationResult(
                decision=None, breakdown=None, gamma_trace=[], gamma_initial=float("nan"),
                rounds=0, status=STATUS_INFEASIBLE, timings=dict(self.timings), mode=self.mode,
                diagnosis=list(e.diagnosis) or [str(e)], log_messages=list(self.log_messages),
            )

        gamma = self._gamma(d)
        gamma_initial = gamma
        trace: List[float] = []
        status = STATUS_MAX_ROUNDS
        for round_index in range(1, self.max_rounds + 1):
            previous = gamma
            d, gamma = self._ratio_step(d, gamma)
            d, gamma = self._assignment_step(d, gamma)
            if self.optimize_trajectory:
                d, gamma = self._trajectory_step(d, gamma)
            trace.append(gamma)
            self._log(f"Round {round_index}: objective {gamma:.6f} J (change {previous - gamma:.3e} J)")
            if abs(previous - gamma) <= self.zeta:
                status = STATUS_CONVERGED
                break

        self.timings["total"] = time.perf_counter() - started
        breakdown = total_energy(self.scenario, d)
        self._log(f"Finished with status {status} after {len(trace)} rounds, objective {breakdown.gamma:.6f} J")
        return OptimizationResult(
            decision=d,
            breakdown=breakdown,
            gamma_trace=trace,
            gamma_initial=gamma_initial,
            rounds=len(trace),
            status=status,
            timings=dict(self.timings),
            mode=self.mode,
            log_messages=list(self.log_messages),
        )


def optimize(s: Scenario, max_rounds: Optional[int] = None, zeta: Optional[float] = None, tol: Optional[float] = None) -> OptimizationResult:
    return BcdOptimizer(s, max_rounds=max_rounds, zeta=zeta, tol=tol).run()


def ideal_baseline(s: Scenario, max_rounds: Optional[int] = None, zeta: Optional[float] = None, tol: Optional[float] = None) -> OptimizationResult:
    """Same pipeline with deterministic deadlines at the estimated complexity."""
    return BcdOptimizer(s, ideal=True, max_rounds=max_rounds, zeta=zeta, tol=tol).run()


def fixed_trajectory_baseline(s: Scenario, max_rounds: Optional[int] = None, zeta: Optional[float] = None, tol: Optional[float] = None) -> OptimizationResult:
    """Robust pipeline with the S-UAVs kept on their straight lines."""
    return BcdOptimizer(s, optimize_trajectory=False, max_rounds=max_rounds, zeta=zeta, tol=tol).run()


@dataclass
class ViolationReport:
    local: np.ndarray  # (I, T) empirical P(local latency > tau)
    edge: np.ndarray  # (I, T) empirical P(edge latency > tau)
    sampler: str
    samples: int
    seed: int

    @property
    def max_violation(self) -> float:
        return float(max(self.local.max(initial=0.0), self.edge.max(initial=0.0)))

    def rows(self):
        """(i, t, local, edge) tuples in index order."""
        I, T = self.local.shape
        for i in range(I):
            for t in range(T):
                yield i, t, float(self.local[i, t]), float(self.edge[i, t])


def validate_robustness(
    s: Scenario,
    r: OptimizationResult,
    dist: Optional[str] = None,
    n: Optional[int] = None,
    seed: Optional[int] = None,
) -> ViolationReport:
    """Monte-Carlo deadline violation of the true latencies at r's decision,
    with the complexity error drawn from a moment-matched sampler."""
    dist = VALIDATION_CONFIG["sampler"] if dist is None else dist
    n = VALIDATION_CONFIG["samples"] if n is None else n
    seed = VALIDATION_CONFIG["seed"] if seed is None else seed
    if r.decision is None:
        raise InfeasibleSubproblem("no decision to validate: the optimization was infeasible")
    draw = SAMPLERS.get(dist)
    p = s.params
    tasks = s.tasks
    d = r.decision
    r_sec = link_state(s, d.w_s).r_sec
    local = np.zeros((s.I, s.T))
    edge = np.zeros((s.I, s.T))
    for i in range(s.I):
        for t in range(s.T):
            rng = np.random.default_rng([seed, i, t])
            xi = draw(rng, tasks.mu[i, t], tasks.sigma[i, t], n)
            work = tasks.L[i, t] * (tasks.c_bar[i, t] + xi)
            rho = d.rho[i, t]
            local[i, t] = np.mean((1.0 - rho) * work / p.f_g > p.tau)
            if rho > 0 and d.lam[i, :, t].any():
                m = int(np.argmax(d.lam[i, :, t]))
                tx = rho * tasks.L[i, t] / r_sec[i, m, t]
                edge[i, t] = np.mean(tx + rho * work / p.f_u > p.tau)
    logging.getLogger(__name__).info(
        f"Robustness check ({dist}, n={n}): worst local {local.max():.4f}, worst edge {edge.max():.4f}"
    )
    return ViolationReport(local=local, edge=edge, sampler=dist, samples=n, seed=seed)
