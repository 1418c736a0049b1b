import math

import numpy as np
import pytest

from conftest import make_scenario
from errors import ZeroSecrecyError
from link_model import (
    distances,
    eavesdrop_rate,
    eavesdrop_sinr,
    link_state,
    secure_rate,
    tx_latency_energy,
    uplink_rate,
    uplink_snr,
)
from scenario import NetworkParams

D_DIAG = math.sqrt(510000.0)


def test_distance_directly_above_gu():
    s = make_scenario(gus=((450.0, 500.0),), uavs=(((450.0, 500.0), (450.0, 500.0)),))
    geo = distances(s, np.tile([450.0, 500.0], (1, s.T, 1)))
    np.testing.assert_allclose(geo.d_gu_uav, 100.0)


def test_eavesdropper_distances():
    s = make_scenario(gus=((500.0, 500.0),), jammer=(500.0, 500.0), eavesdropper=(0.0, 0.0))
    geo = distances(s, np.tile([400.0, 500.0], (1, s.T, 1)))
    np.testing.assert_allclose(geo.d_gu_eav, D_DIAG, rtol=1e-9)
    np.testing.assert_allclose(geo.d_eav_jam, D_DIAG, rtol=1e-9)
    assert D_DIAG == pytest.approx(714.143, abs=1e-3)


def test_uplink_at_100m(params):
    assert uplink_snr(100.0, params) == pytest.approx(5.024e4, rel=1e-3)
    assert uplink_rate(100.0, params) == pytest.approx(1.5616e8, rel=1e-4)


def test_uplink_decreases_with_distance(params):
    rates = uplink_rate(np.array([100.0, 200.0, 1e3, 1e5, 1e7, 1e8]), params)
    assert np.all(np.diff(rates) < 0)
    # far out log2(1+x) ~ x/ln2, so the rate falls as 1/d^2
    assert rates[-1] == pytest.approx(params.B0 * uplink_snr(1e8, params) / math.log(2), rel=1e-6)
    assert rates[-2] / rates[-1] == pytest.approx(100.0, rel=1e-5)


def test_eavesdrop_rate_under_jamming(params):
    assert eavesdrop_sinr(D_DIAG, D_DIAG, params) == pytest.approx(0.0999, abs=1e-4)
    assert eavesdrop_rate(D_DIAG, D_DIAG, params) == pytest.approx(1.374e6, rel=1e-3)


def test_stronger_jammer_silences_eavesdropper():
    jam = (1.0, 20.0, 1e4, 1e9)
    rates = [eavesdrop_rate(D_DIAG, D_DIAG, NetworkParams(p_jam=pj)) for pj in jam]
    assert np.all(np.diff(rates) < 0)
    # equal distances: the SINR tends to p0 / p_jam
    p = NetworkParams(p_jam=jam[-1])
    assert rates[-1] == pytest.approx(p.B0 * p.p0 / p.p_jam / math.log(2), rel=1e-3)
    assert rates[-2] / rates[-1] == pytest.approx(1e5, rel=1e-3)


def test_secure_rate_clamps():
    assert secure_rate(1.5616e8, 1.374e6) == pytest.approx(1.5479e8, rel=1e-4)
    assert secure_rate(5.0, 5.0) == 0.0
    assert secure_rate(1.0, 5.0) == 0.0


def test_tx_latency_energy():
    latency, energy = tx_latency_energy(1, 0.5, 1e6, 1.5479e8, 2.0)
    assert latency == pytest.approx(3.230e-3, rel=1e-3)
    assert energy == pytest.approx(6.460e-3, rel=1e-3)
    assert tx_latency_energy(0, 0.5, 1e6, 1.5479e8, 2.0) == (0.0, 0.0)
    assert tx_latency_energy(1, 0.0, 1e6, 1.5479e8, 2.0) == (0.0, 0.0)


def test_offloading_over_zero_secrecy_raises():
    with pytest.raises(ZeroSecrecyError):
        tx_latency_energy(1, 0.5, 1e6, 0.0, 2.0)


def test_link_state_shapes(easy_scenario):
    s = easy_scenario
    w_s = np.tile([480.0, 500.0], (s.M, s.T, 1))
    links = link_state(s, w_s)
    assert links.r_up.shape == (s.I, s.M, s.T)
    assert links.r_eav.shape == (s.I, s.T)
    np.testing.assert_allclose(links.r_sec, np.maximum(links.r_up - links.r_eav[:, None, :], 0.0))


def test_secure_rate_falls_with_uav_distance_and_jammer_distance(params):
    rng = np.random.default_rng(5)
    for _ in range(50):
        d_uav = np.sort(rng.uniform(100.0, 1500.0, size=20))
        d_ge, d_ej = rng.uniform(100.0, 1500.0, size=2)
        r_sec = secure_rate(uplink_rate(d_uav, params), eavesdrop_rate(d_ge, d_ej, params))
        assert np.all(np.diff(r_sec) <= 1e-9 * r_sec.max())

        d_jam = np.sort(rng.uniform(100.0, 1500.0, size=20))
        r_up = uplink_rate(rng.uniform(100.0, 1500.0), params)
        r_sec = secure_rate(r_up, eavesdrop_rate(d_ge, d_jam, params))
        assert np.all(np.diff(r_sec) <= 1e-9 * max(r_sec.max(), 1.0))
