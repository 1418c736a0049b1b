# -*- coding: utf-8 -*-
"""
Energy model: rotary-wing propulsion, local and edge computing, and the
weighted network energy that the optimizer minimizes.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import DRIVER_CONFIG
from errors import SpeedViolationError
from link_model import link_state, tx_latency_energy
from scenario import Decision, NetworkParams, Scenario

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EnergyBreakdown:
    e_local: np.ndarray  # (I, T)
    e_tx: np.ndarray  # (I, M, T)
    e_edge: np.ndarray  # (I, M, T)
    e_fly: np.ndarray  # (M, T)
    total_per_slot: np.ndarray  # (T,)
    gamma: float
    kappa: float

    def totals(self) -> dict:
        """Scalar totals per component (flight and edge unweighted)."""
        return {
            "e_local": float(self.e_local.sum()),
            "e_tx": float(self.e_tx.sum()),
            "e_edge": float(self.e_edge.sum()),
            "e_fly": float(self.e_fly.sum()),
            "gamma": float(self.gamma),
        }


def propulsion_power(v, p: NetworkParams):
    """Rotary-wing power at horizontal speed v: blade profile + induced + parasite."""
    v = np.asarray(v, dtype=float)
    blade = p.P1 * (1.0 + 3.0 * v ** 2 / p.v_bla ** 2)
    induced = p.P2 * np.sqrt(np.sqrt(1.0 + v ** 4 / (4.0 * p.v_rot ** 4)) - v ** 2 / (2.0 * p.v_rot ** 2))
    parasite = 0.5 * p.drag_g * p.rho_air * p.s0 * p.a0 * v ** 3
    total = blade + induced + parasite
    return float(total) if total.ndim == 0 else total


def hover_power(p: NetworkParams) -> float:
    return p.P1 + p.P2


def flight_coefficient(p: NetworkParams) -> float:
    """J per metre flown on top of a full-slot hover: (p_fly - p_hov) / v0."""
    return (propulsion_power(p.v0, p) - hover_power(p)) / p.v0


def flight_energy(w_prev, w_cur, p: NetworkParams, tol: Optional[float] = None):
    """Energy of one slot: fly ||dw|| at v0, hover the rest of tau."""
    tol = DRIVER_CONFIG["speed_tol"] if tol is None else tol
    dist = np.linalg.norm(np.asarray(w_cur, dtype=float) - np.asarray(w_prev, dtype=float), axis=-1)
    if np.any(dist > p.max_step + tol):
        raise SpeedViolationError(
            f"S-UAV moved {float(np.max(dist)):.6f} m in one slot, limit v0*tau = {p.max_step} m"
        )
    t_fly = np.minimum(dist, p.max_step) / p.v0
    energy = propulsion_power(p.v0, p) * t_fly + hover_power(p) * (p.tau - t_fly)
    return float(energy) if np.ndim(energy) == 0 else energy


def trajectory_flight_energy(w_s, p: NetworkParams, tol: Optional[float] = None) -> np.ndarray:
    """(M, T) flight energies; the first slot starts at w_ini, so it is a hover."""
    w_s = np.asarray(w_s, dtype=float)
    prev = np.concatenate([w_s[:, :1], w_s[:, :-1]], axis=1)
    return flight_energy(prev, w_s, p, tol)


def local_compute(rho, L, c_bar, mu, p: NetworkParams) -> Tuple[np.ndarray, np.ndarray]:
    """Nominal local latency (at zero complexity error) and expected local energy."""
    local_bits = (1.0 - np.asarray(rho, dtype=float)) * np.asarray(L, dtype=float)
    latency = local_bits * np.asarray(c_bar, dtype=float) / p.f_g
    energy = p.eps_g * local_bits * (np.asarray(c_bar) + np.asarray(mu)) * p.f_g ** 2
    return latency, energy


def edge_compute(lam, rho, L, c_bar, mu, p: NetworkParams) -> Tuple[np.ndarray, np.ndarray]:
    """Nominal edge latency and expected S-UAV computing energy."""
    edge_bits = np.asarray(lam, dtype=float) * np.asarray(rho, dtype=float) * np.asarray(L, dtype=float)
    latency = edge_bits * np.asarray(c_bar, dtype=float) / p.f_u
    energy = p.eps_u * edge_bits * (np.asarray(c_bar) + np.asarray(mu)) * p.f_u ** 2
    return latency, energy


def total_energy(s: Scenario, d: Decision, tol: Optional[float] = None) -> EnergyBreakdown:
    """Weighted network energy of a decision: GU energy plus kappa times
    S-UAV flight and computing energy, summed over slots."""
    p = s.params
    tasks = s.tasks
    links = link_state(s, d.w_s)
    rho3 = d.rho[:, None, :]
    _, e_local = local_compute(d.rho, tasks.L, tasks.c_bar, tasks.mu, p)
    _, e_tx = tx_latency_energy(d.lam, rho3, tasks.L[:, None, :], links.r_sec, p.p0)
    _, e_edge = edge_compute(d.lam, rho3, tasks.L[:, None, :], tasks.c_bar[:, None, :], tasks.mu[:, None, :], p)
    e_fly = trajectory_flight_energy(d.w_s, p, tol)
    total_per_slot = (
        e_local.sum(axis=0)
        + e_tx.sum(axis=(0, 1))
        + p.kappa * e_fly.sum(axis=0)
        + p.kappa * e_edge.sum(axis=(0, 1))
    )
    return EnergyBreakdown(
        e_local=e_local,
        e_tx=np.asarray(e_tx, dtype=float),
        e_edge=e_edge,
        e_fly=e_fly,
        total_per_slot=total_per_slot,
        gamma=float(total_per_slot.sum()),
        kappa=p.kappa,
    )


def offloaded_bits(s: Scenario, d: Decision) -> float:
    """Total bits sent to the S-UAVs over the horizon."""
    return float(np.sum(d.lam * d.rho[:, None, :] * s.tasks.L[:, None, :]))
