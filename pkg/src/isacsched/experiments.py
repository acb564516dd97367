"""Monte Carlo experiments: probe-quality CDFs, dwell counts and frame trade-offs.

Every realization draws from its own generator keyed by
``(rng_seed, stream, n_beams, n_tracked, realization)``, so results do not
depend on evaluation order or on how realizations are split across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .comm import CommParams, dbm_to_watt, network_sum_se, throughput
from .config import ExperimentConfig
from .geometry import build_layout, drop_ues
from .network import RadarNetwork, build_network
from .radar import RadarParams
from .scheduler import (
    FrameSchedule,
    TaskRequirements,
    baseline_pattern,
    draw_tracked_beams,
    optimize_scan_pattern,
    schedule_frame,
    search_cost_table,
    search_rate,
    tracking_cost_table,
    tracking_subframe,
)
from .stats import EmpiricalDistribution

PATTERNS = ("opt", "inphase", "random")

_STREAM_CDF = 1
_STREAM_DWELL = 2
_STREAM_DROPS = 3
_STREAM_SCHEDULE = 4


def realization_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def radar_params(cfg: ExperimentConfig) -> RadarParams:
    return RadarParams(
        p_r=1.0,
        wavelength_m=cfg.wavelength_m,
        bandwidth_hz=cfg.bandwidth_hz,
        noise_psd_w_per_hz=float(dbm_to_watt(cfg.noise_psd_dbm_hz)),
        n_pulses=cfg.n_pulses,
        dwell_time_s=cfg.dwell_s,
    )


def comm_params(cfg: ExperimentConfig) -> CommParams:
    return CommParams(
        ue_power_w=float(dbm_to_watt(cfg.ue_power_dbm)),
        n_antennas=cfg.n_antennas,
        bandwidth_hz=cfg.bandwidth_hz,
        noise_psd_w_per_hz=float(dbm_to_watt(cfg.noise_psd_dbm_hz)),
        frame_s=cfg.frame_s,
    )


def requirements(cfg: ExperimentConfig, n_tracked: int = 0, update_rate_hz: float = 1.0,
                 throughput_bps: float = 0.0) -> TaskRequirements:
    return TaskRequirements(
        n_tracked=n_tracked,
        tracking_update_rate_hz=update_rate_hz,
        sinr_target_linear=cfg.sinr_target,
        throughput_target_bps=throughput_bps,
        detection_target=cfg.pd_target,
        false_alarm_target=cfg.pfa_target,
    )


@lru_cache(maxsize=32)
def networks(cfg: ExperimentConfig, n_beams: int) -> tuple[RadarNetwork, RadarNetwork]:
    """Tracking network (SINR-calibrated) and search network (detection-calibrated)."""
    common = dict(
        radius_m=cfg.radius_m,
        separation_m=cfg.separation,
        n_antennas=cfg.n_antennas,
        n_beams=n_beams,
        params=radar_params(cfg),
        p_fa=cfg.pfa_target,
        margin_db=cfg.margin_db,
        rcs_m2=cfg.rcs_m2,
        placement=cfg.placement,
        clutter=cfg.clutter,
    )
    tracking = build_network(mode="sinr", requirement=cfg.sinr_target, **common)
    search = build_network(mode="detection", requirement=cfg.pd_target, **common)
    return tracking, search


def probe_values(table: np.ndarray, dwells) -> np.ndarray:
    """Metric at every active BS's own probed scatterer, dwell by dwell."""
    out = []
    for u, v in dwells:
        if u:
            out.append(table[0, u, v])
        if v:
            out.append(table[1, u, v])
    return np.asarray(out, dtype=float)


# -- probe-quality CDFs -------------------------------------------------------

@dataclass
class CdfResult:
    """``samples[(task, pattern, n_beams)]`` with task ``search`` (detection
    probability) or ``tracking`` (linear SINR)."""

    samples: dict = field(default_factory=dict)
    search_dwells: dict = field(default_factory=dict)

    def reliability(self, task: str, pattern: str, n_beams: int, cfg: ExperimentConfig) -> float:
        threshold = cfg.pd_target if task == "search" else cfg.sinr_target
        return self.samples[(task, pattern, n_beams)].reliability(threshold)


def run_cdf_experiment(cfg: ExperimentConfig) -> CdfResult:
    result = CdfResult()
    n_tracked = cfg.cdf_n_tracked
    for n_beams in cfg.look_dirs:
        if n_tracked > n_beams:
            raise ValueError(f"cdf_n_tracked={n_tracked} exceeds {n_beams} beams")
        tnet, snet = networks(cfg, n_beams)
        sinr, pd = tnet.sinr_table, snet.detection_table
        t_cost = tracking_cost_table(tnet, cfg.sinr_target)
        s_cost = search_cost_table(snet, cfg.pd_target)
        full = list(range(1, n_beams + 1))
        cbs, layout = tnet.codebooks, tnet.layout

        # with full codebooks the proposed and in-phase patterns do not depend on the draw
        s_opt = optimize_scan_pattern(full, full, s_cost, kind="search")
        s_inphase = baseline_pattern("inphase", full, full, codebooks=cbs, layout=layout, label="search")
        result.search_dwells[n_beams] = s_opt.n_dwells
        search = {p: [] for p in PATTERNS}
        tracking = {p: [] for p in PATTERNS}
        for r in range(cfg.n_realizations):
            rng = realization_rng(cfg.rng_seed, _STREAM_CDF, n_beams, n_tracked, r)
            s_random = baseline_pattern("random", full, full, rng, label="search")
            search["opt"].append(probe_values(pd, s_opt.dwells))
            search["inphase"].append(probe_values(pd, s_inphase.dwells))
            search["random"].append(probe_values(pd, s_random.dwells))

            a, b = draw_tracked_beams(n_beams, n_tracked, rng)
            pats = {
                "opt": optimize_scan_pattern(a, b, t_cost),
                "inphase": baseline_pattern("inphase", a, b, codebooks=cbs, layout=layout),
                "random": baseline_pattern("random", a, b, rng),
            }
            for name, pat in pats.items():
                tracking[name].append(probe_values(sinr, pat.dwells))
        for name in PATTERNS:
            result.samples[("search", name, n_beams)] = EmpiricalDistribution(np.concatenate(search[name]))
            result.samples[("tracking", name, n_beams)] = EmpiricalDistribution(np.concatenate(tracking[name]))
    return result


# -- tracking dwell counts ----------------------------------------------------

@lru_cache(maxsize=256)
def _tracking_dwells(cfg: ExperimentConfig, n_beams: int, n_tracked: int) -> tuple[int, ...]:
    tnet, _ = networks(cfg, n_beams)
    cost = tracking_cost_table(tnet, cfg.sinr_target)
    out = []
    for r in range(cfg.n_realizations):
        rng = realization_rng(cfg.rng_seed, _STREAM_DWELL, n_beams, n_tracked, r)
        a, b = draw_tracked_beams(n_beams, n_tracked, rng)
        out.append(optimize_scan_pattern(a, b, cost).n_dwells)
    return tuple(out)


def sample_tracking_dwells(cfg: ExperimentConfig, n_beams: int, n_tracked: int) -> np.ndarray:
    """Optimized tracking dwell count D_t for each realization."""
    return np.array(_tracking_dwells(cfg, n_beams, n_tracked))


@dataclass
class DwellResult:
    n_tracked: tuple[int, ...]
    dwells: dict = field(default_factory=dict)  # n_beams -> list of arrays (one per n_tracked)
    orthogonal: tuple[int, ...] = ()

    def mean(self, n_beams: int) -> np.ndarray:
        return np.array([d.mean() for d in self.dwells[n_beams]])

    def percentile99(self, n_beams: int) -> np.ndarray:
        return np.array([EmpiricalDistribution(d).quantile(0.99) for d in self.dwells[n_beams]])


def run_dwell_experiment(cfg: ExperimentConfig) -> DwellResult:
    res = DwellResult(tuple(cfg.n_tracked))
    ortho = []
    for nt in cfg.n_tracked:
        full = range(1, nt + 1)
        ortho.append(baseline_pattern("orthogonal", full, full).n_dwells)
    res.orthogonal = tuple(ortho)
    for n_beams in cfg.look_dirs:
        res.dwells[n_beams] = [sample_tracking_dwells(cfg, n_beams, nt)
                               for nt in cfg.n_tracked if nt <= n_beams]
    return res


# -- frame trade-offs -----------------------------------------------------------

@dataclass
class TradeoffResult:
    update_rates_hz: tuple[float, ...]
    durations: dict = field(default_factory=dict)  # (pattern, n_tracked) -> T_t per rate
    lines: dict = field(default_factory=dict)  # n_tracked -> (search rate, throughput bps)
    search_dwells: int = 0
    mean_sum_se: float = 0.0
    t_tracking: dict = field(default_factory=dict)  # n_tracked -> T_t at the line's update rate


def sample_sum_se(cfg: ExperimentConfig) -> np.ndarray:
    layout = build_layout(cfg.radius_m, cfg.separation)
    cp = comm_params(cfg)
    out = np.empty(cfg.n_realizations)
    for r in range(cfg.n_realizations):
        rng = realization_rng(cfg.rng_seed, _STREAM_DROPS, r)
        out[r] = network_sum_se(drop_ues(layout, cfg.ues_per_cell, cfg.min_ue_range_m, rng), cp)
    return out


def run_tradeoff_experiment(cfg: ExperimentConfig) -> TradeoffResult:
    res = TradeoffResult(tuple(cfg.update_rates_hz))
    nb = cfg.duration_look_dirs
    for nt in cfg.duration_n_tracked:
        d_t = sample_tracking_dwells(cfg, nb, nt).mean()
        res.durations[("opt", nt)] = np.array(
            [tracking_subframe(cfg.frame_s, rate, d_t, cfg.dwell_s) for rate in cfg.update_rates_hz])
    nt = cfg.duration_orthogonal_n_tracked
    full = range(1, nt + 1)
    d_orth = baseline_pattern("orthogonal", full, full).n_dwells
    res.durations[("orthogonal", nt)] = np.array(
        [tracking_subframe(cfg.frame_s, rate, d_orth, cfg.dwell_s) for rate in cfg.update_rates_hz])

    _, snet = networks(cfg, cfg.tradeoff_search_beams)
    full = range(1, cfg.tradeoff_search_beams + 1)
    d_s = optimize_scan_pattern(full, full, search_cost_table(snet, cfg.pd_target), kind="search").n_dwells
    res.search_dwells = d_s
    se = sample_sum_se(cfg)
    res.mean_sum_se = float(se.mean())
    cp = comm_params(cfg)
    for nt in cfg.tradeoff_n_tracked:
        d_t = sample_tracking_dwells(cfg, cfg.tradeoff_tracking_beams, nt).mean()
        t_t = tracking_subframe(cfg.frame_s, cfg.tradeoff_update_rate_hz, d_t, cfg.dwell_s)
        res.t_tracking[nt] = t_t
        if t_t > cfg.frame_s:
            continue
        t_s = np.linspace(0.0, cfg.frame_s - t_t, cfg.tradeoff_points)
        rates = np.array([search_rate(t, d_s, cfg.dwell_s) for t in t_s])
        t_c = np.clip(cfg.frame_s - t_t - t_s, 0.0, cfg.frame_s)
        s = np.array([throughput(res.mean_sum_se, t, cp) for t in t_c])
        res.lines[nt] = (rates, s)
    return res


# -- single frame and calibration ------------------------------------------------

def run_schedule(cfg: ExperimentConfig) -> FrameSchedule:
    tnet, _ = networks(cfg, cfg.schedule_look_dirs)
    _, snet = networks(cfg, cfg.tradeoff_search_beams)
    rng = realization_rng(cfg.rng_seed, _STREAM_SCHEDULE)
    tracked = draw_tracked_beams(cfg.schedule_look_dirs, cfg.schedule_n_tracked, rng)
    drop = drop_ues(build_layout(cfg.radius_m, cfg.separation), cfg.ues_per_cell, cfg.min_ue_range_m, rng)
    req = requirements(cfg, cfg.schedule_n_tracked, cfg.schedule_update_rate_hz, cfg.throughput_target_bps)
    return schedule_frame(req, tnet, snet, drop, comm_params(cfg), tracked)


def calibration_table(cfg: ExperimentConfig) -> dict[int, dict[str, float]]:
    """Calibrated radar power in dBm per codebook size and mode."""
    out = {}
    for n_beams in cfg.look_dirs:
        tnet, snet = networks(cfg, n_beams)
        out[n_beams] = {
            "sinr": 10.0 * math.log10(tnet.params.p_r) + 30.0,
            "detection": 10.0 * math.log10(snet.params.p_r) + 30.0,
        }
    return out
