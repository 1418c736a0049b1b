import numpy as np
import pytest

from conftest import make_scenario
from energy_model import (
    edge_compute,
    flight_coefficient,
    flight_energy,
    hover_power,
    local_compute,
    offloaded_bits,
    propulsion_power,
    total_energy,
    trajectory_flight_energy,
)
from errors import SpeedViolationError, ZeroSecrecyError
from link_model import link_state
from scenario import straight_line_init


def test_hover_power(params):
    assert propulsion_power(0.0, params) == pytest.approx(168.48)
    assert hover_power(params) == pytest.approx(168.48)


def test_propulsion_at_cruise_speed(params):
    assert propulsion_power(20.0, params) == pytest.approx(178.29, abs=0.05)
    parasite = 0.5 * 0.6 * 1.225 * 0.05 * 0.503 * 20.0 ** 3
    assert parasite == pytest.approx(73.941, abs=1e-3)
    assert flight_coefficient(params) > 0


def test_flight_energy_per_slot(params):
    assert flight_energy([0.0, 0.0], [0.0, 0.0], params) == pytest.approx(336.96)
    assert flight_energy([0.0, 0.0], [20.0, 0.0], params) == pytest.approx(346.77, abs=0.05)
    with pytest.raises(SpeedViolationError):
        flight_energy([0.0, 0.0], [41.0, 0.0], params)


def test_first_slot_hovers(params):
    w_s = np.array([[[0.0, 0.0], [30.0, 0.0], [60.0, 0.0]]])
    e = trajectory_flight_energy(w_s, params)
    assert e[0, 0] == pytest.approx(2 * hover_power(params))
    assert e[0, 1] == pytest.approx(flight_energy([0.0, 0.0], [30.0, 0.0], params))


def test_local_compute(params):
    assert local_compute(1.0, 1e6, 20.0, 0.0, params) == (0.0, 0.0)
    latency, energy = local_compute(0.0, 1e6, 20.0, 0.0, params)
    assert latency == pytest.approx(0.2)
    assert energy == pytest.approx(2e-5)
    latency, _ = local_compute(0.0, 1e7, 100.0, 0.0, params)
    assert latency == pytest.approx(10.0)


def test_edge_compute(params):
    assert edge_compute(0, 1.0, 1e7, 100.0, 0.0, params) == (0.0, 0.0)
    assert edge_compute(1, 0.0, 1e7, 100.0, 0.0, params) == (0.0, 0.0)
    latency, energy = edge_compute(1, 1.0, 1e7, 100.0, 0.0, params)
    assert latency == pytest.approx(1.0)
    assert energy == pytest.approx(0.1)


def test_all_local_gamma_decomposes(easy_scenario):
    s = easy_scenario
    d = straight_line_init(s)
    b = total_energy(s, d)
    expected = b.e_local.sum() + s.params.kappa * b.e_fly.sum()
    assert b.gamma == pytest.approx(expected, rel=1e-12)
    assert not b.e_tx.any()
    assert not b.e_edge.any()
    assert offloaded_bits(s, d) == 0.0


def test_single_pair_hand_sum():
    s = make_scenario(gus=((480.0, 500.0),), T=1, uavs=(((480.0, 500.0), (480.0, 500.0)),))
    d = straight_line_init(s)
    d.lam[0, 0, 0] = 1
    d.rho[0, 0] = 0.5
    p = s.params
    r_sec = link_state(s, d.w_s).r_sec[0, 0, 0]
    local = p.eps_g * 0.5e6 * 20.0 * p.f_g ** 2
    tx = p.p0 * 0.5e6 / r_sec
    edge = p.eps_u * 0.5e6 * 20.0 * p.f_u ** 2
    fly = 2 * hover_power(p)
    b = total_energy(s, d)
    assert b.gamma == pytest.approx(local + tx + p.kappa * (edge + fly), rel=1e-12)
    assert offloaded_bits(s, d) == pytest.approx(0.5e6)


def test_zero_kappa_counts_gu_energy_only():
    s = make_scenario(kappa=0.0)
    b = total_energy(s, straight_line_init(s))
    assert b.gamma == pytest.approx(b.e_local.sum())


def test_offload_without_secrecy_raises():
    # eavesdropper parked on the GU, jammer far away
    s = make_scenario(gus=((450.0, 450.0),), eavesdropper=(450.0, 450.0), jammer=(0.0, 1000.0), p_jam=0.0)
    d = straight_line_init(s)
    d.lam[0, 0, 0] = 1
    d.rho[0, 0] = 0.5
    with pytest.raises(ZeroSecrecyError):
        total_energy(s, d)
