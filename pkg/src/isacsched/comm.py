"""Uplink massive-MIMO communication model (MR combining, perfect CSI)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def dbm_to_watt(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


def watt_to_dbm(watt):
    return 10.0 * np.log10(np.asarray(watt, dtype=float)) + 30.0


@dataclass(frozen=True)
class CommParams:
    ue_power_w: float = float(dbm_to_watt(23.0))
    n_antennas: int = 29
    bandwidth_hz: float = 10e6
    noise_psd_w_per_hz: float = float(dbm_to_watt(-174.0))
    frame_s: float = 1.0

    def __post_init__(self):
        for name in ("ue_power_w", "n_antennas", "bandwidth_hz", "noise_psd_w_per_hz", "frame_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def noise_power_w(self) -> float:
        return self.noise_psd_w_per_hz * self.bandwidth_hz


def large_scale_fading(range_m):
    """Path-loss coefficient, linear scale.

    The model is ``-47.9 - 21 log10(r)`` in dB.
    """
    r = np.asarray(range_m, dtype=float)
    if np.any(r <= 0):
        raise ValueError("range must be positive")
    beta = 10.0 ** ((-47.9 - 21.0 * np.log10(r)) / 10.0)
    return float(beta) if beta.ndim == 0 else beta


def ul_sinr_all(drop, params: CommParams) -> np.ndarray:
    """Effective UL SINR of every UE, shape (n_cells, ues_per_cell)."""
    beta = drop.beta
    nc = beta.shape[0]
    own = beta[np.arange(nc), :, np.arange(nc)]  # own[i, l] = beta[i, l, i]
    total_rx = params.ue_power_w * beta.sum(axis=(0, 1))  # per receiving BS
    interference = params.noise_power_w + total_rx[:, None] - params.ue_power_w * own
    return params.n_antennas * params.ue_power_w * own / interference


def ul_sinr(drop, params: CommParams, cell: int, ue: int) -> float:
    """SINR of UE ``ue`` in ``cell`` with interference from every UE of every cell."""
    return float(ul_sinr_all(drop, params)[cell, ue])


def network_sum_se(drop, params: CommParams) -> float:
    if drop is None or drop.beta.size == 0:
        return 0.0
    return float(np.sum(np.log2(1.0 + ul_sinr_all(drop, params))))


def throughput(sum_se: float, t_comm_s: float, params: CommParams) -> float:
    """Network throughput lower bound in bit/s for a communication subframe."""
    if not 0.0 <= t_comm_s <= params.frame_s:
        raise ValueError(f"t_comm_s must lie in [0, {params.frame_s}]")
    return t_comm_s / params.frame_s * params.bandwidth_hz * sum_se


def comm_subframe(target_bps: float, sum_se: float, params: CommParams) -> float:
    """Communication subframe needed to reach ``target_bps``.

    Returns ``math.inf`` when the target is positive but the network has no
    spectral efficiency to offer. The result is not clamped to the frame.
    """
    if target_bps < 0:
        raise ValueError("target throughput must be nonnegative")
    if target_bps == 0:
        return 0.0
    if sum_se <= 0:
        return math.inf
    return target_bps * params.frame_s / (params.bandwidth_hz * sum_se)
