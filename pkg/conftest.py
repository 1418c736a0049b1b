# -*- coding: utf-8 -*-
"""
Shared scenario builders for the test modules.
"""
import numpy as np
import pytest

import conic
from scenario import NetworkParams, Scenario, TaskSpec


def make_scenario(
    gus=((450.0, 450.0), (550.0, 550.0)),
    uavs=(((400.0, 500.0), (560.0, 500.0)),),
    T=5,
    L=1e6,
    c_bar=20.0,
    mu=0.0,
    sigma=0.2,
    jammer=(500.0, 500.0),
    eavesdropper=(900.0, 900.0),
    seed=0,
    **params,
) -> Scenario:
    """Explicit scenario; scalars broadcast over every (i, t)."""
    I = len(gus)
    shape = (I, T)
    return Scenario(
        gus=np.array(gus, dtype=float),
        jammer=np.array(jammer, dtype=float),
        eav_path=np.tile(np.array(eavesdropper, dtype=float), (T, 1)),
        uav_endpoints=np.array(uavs, dtype=float).reshape(-1, 2, 2),
        tasks=TaskSpec(
            L=np.broadcast_to(np.asarray(L, dtype=float), shape),
            c_bar=np.broadcast_to(np.asarray(c_bar, dtype=float), shape),
            mu=np.broadcast_to(np.asarray(mu, dtype=float), shape),
            sigma=np.broadcast_to(np.asarray(sigma, dtype=float), shape),
        ),
        params=NetworkParams(**params),
        seed=seed,
    )


@pytest.fixture
def params():
    return NetworkParams()


@pytest.fixture
def easy_scenario():
    """Every task finishes locally with a wide margin."""
    return make_scenario()


@pytest.fixture
def offload_scenario():
    """GU 0 cannot meet tau locally (4 s of local work) but fits at the edge."""
    L = np.array([[4e6] * 5, [1e6] * 5])
    c = np.array([[100.0] * 5, [20.0] * 5])
    return make_scenario(L=L, c_bar=c, sigma=0.01 * c)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def recording_solver(solutions):
    """conic.solve that also keeps every solution it returns."""

    def run(*args, **kwargs):
        solution = conic.solve(*args, **kwargs)
        solutions.append(solution)
        return solution

    return run


def certificate_worst(solution) -> float:
    return max(solution.gap, solution.primal_residual, solution.dual_residual)
