import math

import numpy as np
import pytest

import cvar
from cvar import (
    LinearLoss,
    block_residual,
    build_cvar_block,
    discrete_cvar,
    feasible_block_values,
    inactive_block_values,
    loss_edge,
    loss_local,
    minimize_block_value,
    monte_carlo_violation,
    offload_window,
    two_point_worst_case_cvar,
    worst_case_cvar_closed_form,
)
from conftest import certificate_worst, recording_solver
from conic import STATUS_OPTIMAL
from errors import PresetError, ZeroSecrecyError
from samplers import SAMPLERS
from scenario import NetworkParams

ALPHA = 0.95


def test_loss_local(params):
    full = loss_local(1.0, 1e6, 20.0, 0.0, 0.2, params)
    assert full.Theta == 0.0
    assert full.theta0 == pytest.approx(-2.0)
    local = loss_local(0.0, 1e6, 20.0, 0.0, 0.2, params)
    assert local.Theta == pytest.approx(1e-2)
    assert local.theta0 == pytest.approx(-1.8)


def test_loss_edge(params):
    idle = loss_edge([0, 0], 1.0, 1e7, 100.0, 0.0, 1.0, [1.5e8, 1.5e8], params)
    assert idle.Theta == 0.0
    assert idle.theta0 == pytest.approx(-2.0)
    nothing_sent = loss_edge([1, 0], 0.0, 1e7, 100.0, 0.0, 1.0, [1.5e8, 1.5e8], params)
    assert nothing_sent.theta0 == pytest.approx(-2.0)
    loss = loss_edge([1, 0], 1.0, 1e7, 100.0, 0.0, 1.0, [1.5479e8, 0.0], params)
    assert loss.Theta == pytest.approx(1e-2)
    assert loss.theta0 == pytest.approx(-0.9354, abs=1e-4)


def test_loss_edge_rejects_zero_secrecy(params):
    with pytest.raises(ZeroSecrecyError):
        loss_edge([0, 1], 1.0, 1e7, 100.0, 0.0, 1.0, [1.5e8, 0.0], params)


def test_closed_form_values():
    assert worst_case_cvar_closed_form(LinearLoss(0.0, 1.0, 0.0, 1.0), ALPHA) == pytest.approx(math.sqrt(19))
    assert worst_case_cvar_closed_form(LinearLoss(-0.7, 0.0, 3.0, 5.0), ALPHA) == pytest.approx(-0.7)
    half = worst_case_cvar_closed_form(LinearLoss(0.3, 2.0, 0.5, 0.25), 0.5)
    assert half == pytest.approx(0.3 + 1.0 + 0.5)


@pytest.mark.parametrize(
    "theta0,Theta,mu,sigma,alpha",
    [
        (0.0, 1.0, 0.0, 1.0, 0.95),
        (-1.0, 1.0, 0.0, 0.1, 0.95),
        (-1.8, 1e-2, 0.0, 0.2, 0.9),
        (0.5, -2.0, 1.0, 0.3, 0.8),
        (-0.4, 1.0, 0.2, 0.1, 0.99),
    ],
)
def test_two_point_search_matches_closed_form(theta0, Theta, mu, sigma, alpha):
    loss = LinearLoss(theta0, Theta, mu, sigma)
    assert two_point_worst_case_cvar(loss, alpha) == pytest.approx(
        worst_case_cvar_closed_form(loss, alpha), rel=1e-6, abs=1e-9
    )


def test_discrete_cvar_tail_mean():
    # upper 10% of a law with masses 0.05 at 10 and 0.95 at 0
    assert discrete_cvar([10.0, 0.0], [0.05, 0.95], 0.9) == pytest.approx(5.0)


@pytest.mark.parametrize("theta0,expected", [(-1.0, -1.0 + 0.1 * math.sqrt(19)), (-0.4, -0.4 + 0.1 * math.sqrt(19))])
def test_block_value_is_worst_case_cvar(theta0, expected):
    loss = LinearLoss(theta0, 1.0, 0.0, 0.1)
    assert minimize_block_value(loss, ALPHA) == pytest.approx(expected, abs=1e-6)


def test_block_feasibility_follows_sign_of_cvar():
    feasible = LinearLoss(-1.0, 1.0, 0.0, 0.1)
    infeasible = LinearLoss(-0.4, 1.0, 0.0, 0.1)
    assert worst_case_cvar_closed_form(feasible, ALPHA) == pytest.approx(-0.56411, abs=1e-5)
    assert worst_case_cvar_closed_form(infeasible, ALPHA) == pytest.approx(0.03589, abs=1e-5)
    aux = feasible_block_values(feasible, ALPHA)
    assert block_residual(aux, feasible.theta0, feasible.Theta, feasible.mu, feasible.sigma, ALPHA) <= 1e-8
    aux = feasible_block_values(infeasible, ALPHA)
    assert block_residual(aux, infeasible.theta0, infeasible.Theta, infeasible.mu, infeasible.sigma, ALPHA) > 0


def test_feasible_values_attain_closed_form():
    loss = LinearLoss(-1.8, 1e-2, 0.0, 0.2)
    beta, e, q, z, s = feasible_block_values(loss, ALPHA)
    header = beta + (e + s) / (1 - ALPHA)
    assert header == pytest.approx(worst_case_cvar_closed_form(loss, ALPHA), abs=1e-6)


def test_deterministic_limit():
    loss = LinearLoss(-0.2, 1.0, 0.1, 0.0)
    assert minimize_block_value(loss, ALPHA) == pytest.approx(-0.1, abs=1e-6)


def test_inactive_values_satisfy_rows():
    aux = inactive_block_values(2.0)
    assert block_residual(aux, -2.0, 0.0, 0.0, 0.0, ALPHA) <= 0.0


def test_build_block_adds_five_variables():
    block = build_cvar_block(LinearLoss(-1.0, 1.0, 0.0, 0.1), ALPHA)
    program = block.builder.build()
    assert program.n == 5
    assert len(block.variables()) == 5


def test_alpha_out_of_range():
    with pytest.raises(ValueError):
        build_cvar_block(LinearLoss(-1.0, 1.0), 1.0)


def test_offload_window(params):
    rho_min, rho_max = offload_window(1e7, 100.0, 0.0, 0.0, 1.5479e8, params)
    assert rho_min == pytest.approx(0.8)
    assert rho_max == 1.0
    assert offload_window(1e6, 20.0, 0.0, 0.2, 0.0, params) == (0.0, 0.0)


def test_window_edges_make_blocks_tight(params):
    L, c, mu, sigma, r_sec = 2e7, 100.0, 0.0, 1.0, 1.5479e8
    rho_min, rho_max = offload_window(L, c, mu, sigma, r_sec, params)
    local = loss_local(rho_min, L, c, mu, sigma, params)
    edge = loss_edge([1], rho_max, L, c, mu, sigma, [r_sec], params)
    assert worst_case_cvar_closed_form(local, params.alpha) == pytest.approx(0.0, abs=1e-9)
    assert worst_case_cvar_closed_form(edge, params.alpha) == pytest.approx(0.0, abs=1e-9)


def test_violation_of_feasible_loss_is_bounded():
    n = 20_000
    loss = LinearLoss(-1.0, 1.0, 0.0, 0.1)
    # shift so the worst-case CVaR is exactly zero
    tight = LinearLoss(-0.1 * math.sqrt(19), 1.0, 0.0, 0.1)
    bound = (1 - ALPHA) + 3 * math.sqrt(ALPHA * (1 - ALPHA) / n)
    for sampler in ("gaussian", "uniform", "two_point", "two_point_tail"):
        assert monte_carlo_violation(tight, sampler, n, seed=1) <= bound
    assert monte_carlo_violation(loss, "gaussian", n, seed=1) == 0.0


def test_violation_limits():
    assert monte_carlo_violation(LinearLoss(-1.0, 1.0, 0.0, 0.0), n=1000) == 0.0
    assert monte_carlo_violation(LinearLoss(10.0, 1.0, 0.0, 1.0), n=1000) == pytest.approx(1.0)


def test_samplers_match_moments(rng):
    for name in SAMPLERS.names():
        xi = SAMPLERS.sample(name, rng, 3.0, 0.5, 200_000)
        assert xi.mean() == pytest.approx(3.0, abs=0.01)
        assert xi.std() == pytest.approx(0.5, rel=0.02)
    with pytest.raises(PresetError):
        SAMPLERS.get("cauchy")


def test_riskier_alpha_costs_more():
    loss = LinearLoss(-1.0, 1.0, 0.0, 0.1)
    values = [worst_case_cvar_closed_form(loss, a) for a in (0.8, 0.9, 0.95, 0.99)]
    assert np.all(np.diff(values) > 0)
    assert NetworkParams(alpha=0.99).risk_factor > NetworkParams(alpha=0.8).risk_factor


def random_losses(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        loss = LinearLoss(
            theta0=rng.uniform(-10.0, 10.0),
            Theta=rng.uniform(-10.0, 10.0),
            mu=rng.uniform(-1.0, 1.0),
            sigma=rng.uniform(0.0, 2.0),
        )
        yield loss, float(rng.choice([0.8, 0.9, 0.95, 0.99]))


def test_block_program_matches_closed_form_on_random_losses():
    worst = 0.0
    for loss, alpha in random_losses(100, seed=11):
        worst = max(worst, abs(minimize_block_value(loss, alpha) - worst_case_cvar_closed_form(loss, alpha)))
    assert worst <= 1e-5


def test_two_point_search_matches_closed_form_on_random_losses():
    for loss, alpha in random_losses(100, seed=12):
        closed = worst_case_cvar_closed_form(loss, alpha)
        assert two_point_worst_case_cvar(loss, alpha, grid_size=2001) == pytest.approx(closed, abs=1e-4)


def test_optimal_block_programs_carry_tight_certificates(monkeypatch):
    solutions = []
    monkeypatch.setattr(cvar, "solve", recording_solver(solutions))
    for loss, alpha in random_losses(100, seed=11):
        minimize_block_value(loss, alpha)
    optimal = [sol for sol in solutions if sol.status == STATUS_OPTIMAL]
    assert optimal
    assert max(certificate_worst(sol) for sol in optimal) <= 1e-7
