# -*- coding: utf-8 -*-
"""
Distributionally robust latency constraints.

A latency requirement "phi(xi) = Theta * xi + theta0 <= 0 with probability
alpha" for every complexity error xi with mean mu and deviation sigma is
replaced by "worst-case CVaR_alpha(phi) <= 0", which is second-order cone
representable with five auxiliaries (beta, e, q, z, s):

    beta + (e + s) / (1 - alpha)              <= 0
    e - theta0 + beta + q - Theta mu - z      >= margin
    e >= 0,  z >= z_floor
    ||(q, Theta sigma, z - s)||               <= z + s
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from conic import Affine, ProgramBuilder, solve
from config import SOLVER_CONFIG
from errors import InternalAssertion, ZeroSecrecyError
from samplers import SAMPLERS
from scenario import AUX_FIELDS, NetworkParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearLoss:
    """phi(xi) = Theta * xi + theta0, xi with moments (mu, sigma)."""

    theta0: float
    Theta: float
    mu: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")

    def __call__(self, xi):
        return self.Theta * np.asarray(xi, dtype=float) + self.theta0


def loss_local(rho: float, L: float, c_bar: float, mu: float, sigma: float, p: NetworkParams) -> LinearLoss:
    """Local execution lateness (1-rho) L (c_bar + xi) / f_g - tau."""
    Theta = (1.0 - rho) * L / p.f_g
    return LinearLoss(theta0=Theta * c_bar - p.tau, Theta=Theta, mu=mu, sigma=sigma)


def loss_edge(lam_row, rho: float, L: float, c_bar: float, mu: float, sigma: float, r_sec_row, p: NetworkParams) -> LinearLoss:
    """Edge lateness: transmission plus S-UAV computing minus tau."""
    lam_row = np.asarray(lam_row, dtype=float)
    r_sec_row = np.asarray(r_sec_row, dtype=float)
    active = lam_row * rho > 0
    if np.any(active & (r_sec_row <= 0)):
        raise ZeroSecrecyError(f"offloading over S-UAV {int(np.argmax(active & (r_sec_row <= 0)))} with zero secrecy")
    edge_bits = float(np.sum(lam_row)) * rho * L
    tx = float(np.sum(np.where(active, rho * L / np.where(r_sec_row > 0, r_sec_row, 1.0), 0.0)))
    Theta = edge_bits / p.f_u
    return LinearLoss(theta0=Theta * c_bar + tx - p.tau, Theta=Theta, mu=mu, sigma=sigma)


def worst_case_cvar_closed_form(loss: LinearLoss, alpha: float) -> float:
    """theta0 + Theta mu + |Theta| sigma sqrt(alpha / (1 - alpha))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0,1)")
    return loss.theta0 + loss.Theta * loss.mu + abs(loss.Theta) * loss.sigma * math.sqrt(alpha / (1.0 - alpha))


def discrete_cvar(values, masses, alpha: float) -> float:
    """CVaR_alpha (mean of the upper 1-alpha tail) of a discrete law."""
    values = np.asarray(values, dtype=float)
    masses = np.asarray(masses, dtype=float)
    order = np.argsort(-values, kind="stable")
    tail = 1.0 - alpha
    taken, acc = 0.0, 0.0
    for k in order:
        w = min(masses[k], tail - taken)
        if w <= 0:
            break
        acc += w * values[k]
        taken += w
    return acc / tail


def _two_point_cvar(loss: LinearLoss, alpha: float, p_upper: float) -> float:
    upper = loss.mu + loss.sigma * math.sqrt((1.0 - p_upper) / p_upper)
    lower = loss.mu - loss.sigma * math.sqrt(p_upper / (1.0 - p_upper))
    return discrete_cvar([loss(upper), loss(lower)], [p_upper, 1.0 - p_upper], alpha)


def two_point_worst_case_cvar(loss: LinearLoss, alpha: float, grid_size: int = 20001) -> float:
    """Largest CVaR over two-point laws with the loss moments.

    Dense grid over the upper-atom mass, then a bounded scalar refinement
    around the best grid point.
    """
    if loss.sigma == 0.0 or loss.Theta == 0.0:
        return float(loss.theta0 + loss.Theta * loss.mu)
    lo_exp = -8.0
    grid = np.unique(
        np.concatenate(
            [
                np.logspace(lo_exp, 0.0, grid_size // 2, endpoint=False),
                1.0 - np.logspace(lo_exp, 0.0, grid_size // 2, endpoint=False)[::-1],
                [1.0 - alpha, alpha],
            ]
        )
    )
    grid = grid[(grid > 0.0) & (grid < 1.0)]
    scores = np.array([_two_point_cvar(loss, alpha, q) for q in grid])
    k = int(np.argmax(scores))
    best = float(scores[k])
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    if hi > lo:
        refined = minimize_scalar(
            lambda q: -_two_point_cvar(loss, alpha, q), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(refined.fun))
    return best


@dataclass(eq=False)
class CvarBlock:
    """Auxiliary variables of one robust latency constraint inside a program."""

    beta: Affine
    e: Affine
    q: Affine
    z: Affine
    s: Affine
    header: Affine  # beta + (e + s) / (1 - alpha)
    alpha: float
    builder: Optional[ProgramBuilder] = None

    def variables(self):
        return (self.beta, self.e, self.q, self.z, self.s)

    def values(self, x: np.ndarray) -> np.ndarray:
        return np.array([v.value(x) for v in self.variables()])


def add_cvar_rows(
    builder: ProgramBuilder,
    theta0,
    Theta,
    mu: float,
    sigma: float,
    alpha: float,
    name: str = "cvar",
    enforce_header: bool = True,
    z_floor: Optional[float] = None,
    margin: Optional[float] = None,
) -> CvarBlock:
    """Adds the five auxiliaries and the SOC block for a loss whose theta0
    and Theta may be affine in other program variables."""
    z_floor = SOLVER_CONFIG["z_floor"] if z_floor is None else z_floor
    margin = SOLVER_CONFIG["margin"] if margin is None else margin
    theta0 = Affine.lift(theta0)
    Theta = Affine.lift(Theta)
    beta, e, q, z, s = (builder.add_variable(f"{name}.{f}") for f in AUX_FIELDS)
    header = beta + (e + s) * (1.0 / (1.0 - alpha))
    if enforce_header:
        builder.add_le(header, 0.0)
    builder.add_nonneg(e - theta0 + beta + q - Theta * mu - z - margin)
    builder.add_nonneg(e)
    builder.add_nonneg(z - z_floor)
    builder.add_soc(z + s, [q, Theta * sigma, z - s])
    return CvarBlock(beta, e, q, z, s, header, alpha)


def build_cvar_block(loss: LinearLoss, alpha: float, builder: Optional[ProgramBuilder] = None) -> CvarBlock:
    """Block for a fixed loss; a fresh builder is used when none is given."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0,1)")
    builder = builder or ProgramBuilder()
    block = add_cvar_rows(builder, loss.theta0, loss.Theta, loss.mu, loss.sigma, alpha)
    block.builder = builder
    return block


def inactive_block_values(tau: float, z_floor: Optional[float] = None) -> np.ndarray:
    """Feasible auxiliaries of a block with Theta = 0 and theta0 = -tau."""
    z_floor = SOLVER_CONFIG["z_floor"] if z_floor is None else z_floor
    return np.array([-tau / 2.0, 0.0, 0.0, z_floor, 0.0])


def feasible_block_values(loss: LinearLoss, alpha: float, z_floor: Optional[float] = None, margin: Optional[float] = None) -> np.ndarray:
    """Auxiliaries attaining the worst-case CVaR of a fixed loss.

    The header value equals worst_case_cvar_closed_form up to the
    margin and z_floor terms.
    """
    z_floor = SOLVER_CONFIG["z_floor"] if z_floor is None else z_floor
    margin = SOLVER_CONFIG["margin"] if margin is None else margin
    spread = abs(loss.Theta) * loss.sigma
    mean = loss.theta0 + loss.Theta * loss.mu
    excess = (1.0 - 2.0 * alpha) * spread / (2.0 * math.sqrt(alpha * (1.0 - alpha)))
    beta = mean - excess
    z = max(math.hypot(excess, spread), z_floor)
    q = excess + z + margin
    s = (q * q + spread * spread) / (4.0 * z)
    return np.array([beta, 0.0, q, z, s])


def block_residual(aux, theta0: float, Theta: float, mu: float, sigma: float, alpha: float, margin: float = 0.0) -> float:
    """Largest violation of the block rows at fixed auxiliaries (<= 0 is feasible)."""
    beta, e, q, z, s = (float(v) for v in aux)
    rows = [
        beta + (e + s) / (1.0 - alpha),
        -(e - theta0 + beta + q - Theta * mu - z - margin),
        -e,
        -z,
        math.sqrt(q * q + (Theta * sigma) ** 2 + (z - s) ** 2) - (z + s),
    ]
    return max(rows)


def minimize_block_value(loss: LinearLoss, alpha: float, tol: Optional[float] = None) -> float:
    """min beta + (e+s)/(1-alpha) over the block rows, solved as a cone program.

    Equals the worst-case CVaR of the loss.
    """
    builder = ProgramBuilder()
    block = add_cvar_rows(builder, loss.theta0, loss.Theta, loss.mu, loss.sigma, alpha, enforce_header=False)
    builder.set_objective(block.header)
    solution = solve(builder.build(), tol=tol)
    if not solution.usable:
        raise InternalAssertion(f"CVaR block program ended with status {solution.status}")
    return solution.objective


def offload_window(L: float, c_bar: float, mu: float, sigma: float, r_sec: float, p: NetworkParams) -> Tuple[float, float]:
    """Offloading ratios [rho_min, rho_max] keeping both worst-case CVaRs <= 0.

    rho_min comes from the local deadline, rho_max from the edge deadline
    over a link of secure rate r_sec. An empty window has rho_min > rho_max.
    """
    load = L * (c_bar + mu + p.risk_factor * sigma)
    rho_min = max(0.0, 1.0 - p.tau * p.f_g / load)
    if r_sec <= 0:
        return rho_min, 0.0
    rho_max = min(1.0, p.tau / (load / p.f_u + L / r_sec))
    return rho_min, rho_max


def monte_carlo_violation(loss: LinearLoss, sampler: str = "gaussian", n: int = 10_000, seed: Optional[int] = 0) -> float:
    """Empirical P(phi(xi) > 0) under a moment-matched sampler."""
    rng = np.random.default_rng(seed)
    xi = SAMPLERS.sample(sampler, rng, loss.mu, loss.sigma, n)
    return float(np.mean(loss(xi) > 0.0))
