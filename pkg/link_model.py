# -*- coding: utf-8 -*-
"""
Air-to-ground link model.
Free-space channels from the GUs to the S-UAVs and to the eavesdropping UAV,
the jammer-degraded eavesdropping rate and the resulting secure rate.
All functions are vectorized over numpy arrays.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from errors import ZeroSecrecyError
from scenario import NetworkParams, Scenario

logger = logging.getLogger(__name__)

LN2 = np.log(2.0)


@dataclass(frozen=True, eq=False)
class LinkState:
    """Distances and rates of one trajectory.

    d_gu_uav, r_up, r_sec are (I, M, T); d_gu_eav, r_eav are (I, T);
    d_eav_jam is (T,). The rate fields stay None on a distances-only state.
    """

    d_gu_uav: np.ndarray
    d_gu_eav: np.ndarray
    d_eav_jam: np.ndarray
    r_up: Optional[np.ndarray] = None
    r_eav: Optional[np.ndarray] = None
    r_sec: Optional[np.ndarray] = None


def horizontal_sq_distance(a, b) -> np.ndarray:
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return np.sum(diff * diff, axis=-1)


def distances(s: Scenario, w_s) -> LinkState:
    """3-D distances for an (M, T, 2) trajectory grid."""
    p = s.params
    w_s = np.asarray(w_s, dtype=float)
    d_gu_uav = np.sqrt(
        horizontal_sq_distance(s.gus[:, None, None, :], w_s[None, :, :, :]) + p.h_s ** 2
    )
    d_gu_eav = np.sqrt(horizontal_sq_distance(s.gus[:, None, :], s.eav_path[None, :, :]) + p.h_e ** 2)
    d_eav_jam = np.sqrt(horizontal_sq_distance(s.eav_path, s.jammer[None, :]) + p.h_e ** 2)
    return LinkState(d_gu_uav=d_gu_uav, d_gu_eav=d_gu_eav, d_eav_jam=d_eav_jam)


def uplink_snr(d_gu_uav, p: NetworkParams) -> np.ndarray:
    d = np.asarray(d_gu_uav, dtype=float)
    return p.p0 * p.g0 / (d * d * p.noise_power)


def uplink_rate(d_gu_uav, p: NetworkParams) -> np.ndarray:
    """B0 log2(1 + p0 g0 d^-2 / (n0 B0)); OFDMA, so no intra-system interference."""
    return p.B0 * np.log1p(uplink_snr(d_gu_uav, p)) / LN2


def eavesdrop_sinr(d_gu_eav, d_eav_jam, p: NetworkParams) -> np.ndarray:
    d_ge = np.asarray(d_gu_eav, dtype=float)
    d_ej = np.asarray(d_eav_jam, dtype=float)
    jamming = p.p_jam * p.g0 / (d_ej * d_ej)
    return p.p0 * p.g0 / (d_ge * d_ge) / (jamming + p.noise_power)


def eavesdrop_rate(d_gu_eav, d_eav_jam, p: NetworkParams) -> np.ndarray:
    """Rate at which the E-UAV overhears a GU while the jammer transmits."""
    return p.B0 * np.log1p(eavesdrop_sinr(d_gu_eav, d_eav_jam, p)) / LN2


def secure_rate(r_up, r_eav) -> np.ndarray:
    return np.maximum(np.asarray(r_up, dtype=float) - np.asarray(r_eav, dtype=float), 0.0)


def link_state(s: Scenario, w_s) -> LinkState:
    """Full LinkState (distances and rates) of a trajectory."""
    geo = distances(s, w_s)
    r_up = uplink_rate(geo.d_gu_uav, s.params)
    r_eav = eavesdrop_rate(geo.d_gu_eav, geo.d_eav_jam[None, :], s.params)
    r_sec = secure_rate(r_up, r_eav[:, None, :])
    return LinkState(
        d_gu_uav=geo.d_gu_uav,
        d_gu_eav=geo.d_gu_eav,
        d_eav_jam=geo.d_eav_jam,
        r_up=r_up,
        r_eav=r_eav,
        r_sec=r_sec,
    )


def tx_latency_energy(lam, rho, L, r_sec, p0: float) -> Tuple[np.ndarray, np.ndarray]:
    """Transmission latency lam*rho*L/r_sec and energy p0 * latency.

    Raises ZeroSecrecyError when data is sent over a link with no secrecy.
    """
    bits = np.asarray(lam, dtype=float) * np.asarray(rho, dtype=float) * np.asarray(L, dtype=float)
    r_sec = np.asarray(r_sec, dtype=float)
    bits, r_sec = np.broadcast_arrays(bits, r_sec)
    sending = bits > 0
    if np.any(sending & (r_sec <= 0)):
        idx = tuple(int(k) for k in np.argwhere(sending & (r_sec <= 0))[0])
        raise ZeroSecrecyError(f"data offloaded over a link with zero secrecy rate at index {idx}")
    latency = np.zeros(bits.shape)
    np.divide(bits, r_sec, out=latency, where=sending)
    if latency.ndim == 0:
        latency = float(latency)
    return latency, p0 * latency
