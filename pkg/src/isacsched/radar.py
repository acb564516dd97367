"""Radar range equations, echo SINR, Swerling-1 detection and power calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import special

from .comm import dbm_to_watt
from .phased_array import NULL_BEAM, Codebook, gain_matrix, power_pattern

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class RadarParams:
    p_r: float = 1.0
    wavelength_m: float = 0.05
    bandwidth_hz: float = 10e6
    noise_psd_w_per_hz: float = float(dbm_to_watt(-174.0))
    n_pulses: int = 20
    dwell_time_s: float = 13.3e-3
    threshold: float | None = None

    def __post_init__(self):
        for name in ("p_r", "wavelength_m", "bandwidth_hz", "noise_psd_w_per_hz", "n_pulses", "dwell_time_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.threshold is not None and self.threshold <= 0:
            raise ValueError("threshold must be positive")

    @property
    def noise_power_w(self) -> float:
        return self.noise_psd_w_per_hz * self.bandwidth_hz

    def with_power(self, p_r: float) -> "RadarParams":
        return replace(self, p_r=p_r)

    def with_false_alarm(self, p_fa: float) -> "RadarParams":
        return replace(self, threshold=false_alarm_threshold(p_fa, self.n_pulses))


def monostatic_power(params: RadarParams, gain, rcs_m2, range_m):
    """Echo power received by the transmitting BS (rho^-4 law)."""
    return params.p_r * np.square(gain) * params.wavelength_m**2 * rcs_m2 / (FOUR_PI**3 * np.power(range_m, 4))


def bistatic_power(params: RadarParams, gain_rx, gain_tx, rcs_m2, range_rx_m, range_tx_m):
    """Echo power of another BS's pulse scattered into the receiving BS."""
    return (
        params.p_r * gain_tx * gain_rx * params.wavelength_m**2 * rcs_m2
        / (FOUR_PI**3 * np.square(range_tx_m) * np.square(range_rx_m))
    )


def crosstalk_power(params: RadarParams, gain_i_toward_j, gain_j_toward_i, separation_m):
    """Direct line-of-sight leakage between two base stations."""
    return (
        params.p_r * gain_i_toward_j * gain_j_toward_i * params.wavelength_m**2
        / (FOUR_PI**2 * np.square(separation_m))
    )


def _clutter_members(scene, rx_bs: int, clutter: str) -> np.ndarray:
    if clutter == "own_cell":
        return scene.cell_members(rx_bs)
    if clutter == "all":
        return np.arange(scene.n_scatterers)
    raise ValueError(f"unknown clutter scope {clutter!r}")


def radar_sinr(scene, layout, codebooks: Sequence[Codebook], params: RadarParams,
               beams: Sequence[int], rx_bs: int, target: int, clutter: str = "own_cell") -> float:
    """Echo SINR of scatterer ``target`` at BS ``rx_bs`` under beam assignment ``beams``.

    Direct, per-term evaluation over the scene. ``clutter`` selects which
    scatterers other than the target contribute monostatic clutter at the
    receiver: ``"own_cell"`` (the receiver's own virtual scatterers) or
    ``"all"``. Bistatic terms always run over every scatterer, the probed
    target included. Returns 0 when the receiver is silent or its echo is 0.
    """
    i = rx_bs
    if beams[i] == NULL_BEAM:
        return 0.0

    def gain(bs, k):
        return power_pattern(codebooks[bs], beams[bs], scene.azimuths[bs, k])

    signal = monostatic_power(params, gain(i, target), scene.rcs[target, i, i], scene.ranges[i, target])
    if signal == 0.0:
        return 0.0
    denom = params.noise_power_w
    for k in _clutter_members(scene, i, clutter):
        if k != target:
            denom += monostatic_power(params, gain(i, k), scene.rcs[k, i, i], scene.ranges[i, k])
    for j in range(layout.n_cells):
        if j == i or beams[j] == NULL_BEAM:
            continue
        for k in range(scene.n_scatterers):
            denom += bistatic_power(params, gain(i, k), gain(j, k), scene.rcs[k, i, j],
                                    scene.ranges[i, k], scene.ranges[j, k])
        g_ij = power_pattern(codebooks[i], beams[i], layout.bs_azimuths[i, j])
        g_ji = power_pattern(codebooks[j], beams[j], layout.bs_azimuths[j, i])
        denom += crosstalk_power(params, g_ij, g_ji, layout.bs_separation_m[i, j])
    return float(signal / denom)


def pair_sinr_table(scene, layout, codebooks: Sequence[Codebook], params: RadarParams,
                    clutter: str = "own_cell") -> np.ndarray:
    """SINR of both BSs at their own probed scatterers for every beam pair.

    Returns an array ``t`` of shape (2, n_beams + 1, n_beams + 1) where
    ``t[0, u, v]`` is the SINR of BS 0 at the scatterer of beam ``u`` while
    BS 1 loads beam ``v``, and ``t[1, u, v]`` the SINR of BS 1 at the
    scatterer of beam ``v``. Entries for a silent receiver are 0.
    """
    if layout.n_cells != 2:
        raise ValueError("pair tables are defined for two cells")
    nb = scene.n_beams
    lam2 = params.wavelength_m**2
    G = [gain_matrix(codebooks[i], scene.azimuths[i]) for i in range(2)]

    signal, clutter_pw = [], []
    for i in range(2):
        sig_rcs = scene.rcs[:, i, i]
        mono = params.p_r * lam2 * G[i] ** 2 * sig_rcs / (FOUR_PI**3 * scene.ranges[i] ** 4)
        own = np.zeros(nb + 1)
        own[1:] = mono[np.arange(1, nb + 1), i * nb + np.arange(nb)]
        members = _clutter_members(scene, i, clutter)
        clut = mono[:, members].sum(axis=1) - own
        signal.append(own)
        clutter_pw.append(clut)

    # bistatic[u, v]: BS 0 receives while BS 1 transmits (and vice versa via transpose)
    a0 = G[0] / scene.ranges[0] ** 2
    a1 = G[1] / scene.ranges[1] ** 2
    pref = params.p_r * lam2 / FOUR_PI**3
    bi_01 = pref * (a0 * scene.rcs[:, 0, 1]) @ a1.T
    bi_10 = pref * (a1 * scene.rcs[:, 1, 0]) @ a0.T

    g01 = gain_matrix(codebooks[0], layout.bs_azimuths[0, 1])[:, 0]
    g10 = gain_matrix(codebooks[1], layout.bs_azimuths[1, 0])[:, 0]
    cross = params.p_r * lam2 * np.outer(g01, g10) / (FOUR_PI**2 * layout.bs_separation_m[0, 1] ** 2)

    n0 = params.noise_power_w
    table = np.zeros((2, nb + 1, nb + 1))
    table[0] = signal[0][:, None] / (n0 + clutter_pw[0][:, None] + bi_01 + cross)
    table[1] = signal[1][None, :] / (n0 + clutter_pw[1][None, :] + bi_10.T + cross)
    return table


def false_alarm_threshold(p_fa: float, n_pulses: int, rtol: float = 1e-14) -> float:
    """Detection threshold for a given false-alarm probability.

    Solves ``Q(n_pulses, tau) = p_fa`` (regularized upper incomplete gamma)
    by bisection on ``[0, n_pulses + 40 sqrt(n_pulses)]``.
    """
    if not 0.0 < p_fa < 1.0:
        raise ValueError(f"p_fa must lie in (0, 1), got {p_fa}")
    if n_pulses < 1:
        raise ValueError(f"n_pulses must be >= 1, got {n_pulses}")
    lo, hi = 0.0, n_pulses + 40.0 * math.sqrt(n_pulses)

    def excess(tau):
        return special.gammaincc(n_pulses, tau) - p_fa

    if excess(hi) > 0:
        raise ValueError(f"no threshold for p_fa={p_fa} with {n_pulses} pulses in [{lo}, {hi}]")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def approximation_valid(sinr, n_pulses: int):
    """Whether the closed-form detection approximation applies (N_p * SINR > 1)."""
    return n_pulses * np.asarray(sinr, dtype=float) > 1.0


def _exact_swerling1(x, n_pulses: int, tau: float):
    # Noncoherent Swerling-1 detection probability, x = N_p * SINR
    a = n_pulses - 1
    y = tau * x / (1.0 + x)
    if a == 0:
        return np.exp(-tau / (1.0 + x))
    tail = special.gammaincc(a, tau)
    head = np.exp(a * math.log(tau) - tau - special.gammaln(a + 1))
    return tail + head * special.hyp1f1(1.0, a + 1.0, y)


def detection_probability(sinr, n_pulses: int, tau: float):
    """Swerling-1 detection probability after ``n_pulses`` noncoherent pulses.

    Uses the closed-form approximation where ``n_pulses * sinr > 1``. Below
    that the approximation diverges, so the exact noncoherent expression is
    used instead. Zero SINR maps to 0. Output is clamped to [0, 1].
    """
    g = np.asarray(sinr, dtype=float)
    x = n_pulses * g
    out = np.zeros_like(x)
    valid = x > 1.0
    xv = x[valid]
    out[valid] = np.exp((n_pulses - 1) * np.log1p(1.0 / xv) - tau / (1.0 + xv))
    low = (x > 0.0) & ~valid
    if np.any(low):
        out[low] = _exact_swerling1(x[low], n_pulses, tau)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def sinr_for_detection(pd_target: float, n_pulses: int, tau: float, rtol: float = 1e-13) -> float:
    """Smallest SINR whose detection probability reaches ``pd_target``."""
    if not 0.0 < pd_target < 1.0:
        raise ValueError(f"detection target must lie in (0, 1), got {pd_target}")
    lo, hi = 1.0 / n_pulses, 1.0
    while detection_probability(hi, n_pulses, tau) < pd_target:
        lo, hi = hi, hi * 2.0
        if hi > 1e15:
            raise ValueError(f"detection target {pd_target} unreachable")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if detection_probability(mid, n_pulses, tau) < pd_target:
            lo = mid
        else:
            hi = mid
    return hi


def required_sinr(mode: str, requirement: float, params: RadarParams) -> float:
    """Linear SINR a probe must reach for ``mode`` ("sinr" or "detection")."""
    if mode == "sinr":
        if requirement <= 0:
            raise ValueError("SINR requirement must be positive (linear)")
        return float(requirement)
    if mode == "detection":
        if params.threshold is None:
            raise ValueError("detection mode needs a threshold; call with_false_alarm first")
        return sinr_for_detection(requirement, params.n_pulses, params.threshold)
    raise ValueError(f"unknown calibration mode {mode!r}")


def calibrate_radar_power(mode: str, requirement: float, scene, codebooks: Sequence[Codebook],
                          params: RadarParams, margin_db: float = 1.0) -> float:
    """Transmit power meeting the requirement at every virtual scatterer without interference.

    The worst scatterer (lowest own-beam echo per watt) sets the power so
    that its echo-to-noise ratio equals the required SINR raised by
    ``margin_db``.
    """
    target = required_sinr(mode, requirement, params) * 10.0 ** (margin_db / 10.0)
    unit = params.with_power(1.0)
    snr_per_watt = np.inf
    for k in range(scene.n_scatterers):
        i = scene.cell[k]
        g = power_pattern(codebooks[i], int(scene.beam[k]), scene.azimuths[i, k])
        echo = monostatic_power(unit, g, scene.rcs[k, i, i], scene.ranges[i, k])
        snr_per_watt = min(snr_per_watt, echo / params.noise_power_w)
    if not snr_per_watt > 0:
        raise ValueError("a virtual scatterer receives no power from its own beam")
    return float(target / snr_per_watt)
