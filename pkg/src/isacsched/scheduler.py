"""Scan-pattern optimization and three-step frame scheduling for two cells.

A scan pattern is a sequence of dwells; each dwell loads one beam id per
base station, 0 meaning the BS stays silent. The optimizer pairs the beams
of the two cells through a binary-cost assignment problem and adds silent
slots one pair at a time until a zero-cost matching exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .assignment import hungarian
from .comm import CommParams, comm_subframe, network_sum_se, throughput
from .network import RadarNetwork
from .radar import detection_probability
from .phased_array import NULL_BEAM, wrap_angle


class InfeasibleError(Exception):
    """No scan pattern meets the radar requirement."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class TrackingInfeasibleError(InfeasibleError):
    """Tracking cannot be served within one frame."""


@dataclass(frozen=True)
class ScanPattern:
    dwells: tuple[tuple[int, ...], ...]
    kind: str = "tracking"

    @property
    def n_dwells(self) -> int:
        return len(self.dwells)

    def beams_of(self, bs: int) -> list[int]:
        return [d[bs] for d in self.dwells]

    def violations(self, required: Sequence[Sequence[int]]) -> list[str]:
        """Completeness and uniqueness problems against the required beam sets."""
        problems = []
        for bs, req in enumerate(required):
            active = [b for b in self.beams_of(bs) if b != NULL_BEAM]
            if len(active) != len(set(active)):
                problems.append(f"BS {bs}: repeated beam ids")
            if set(active) != {int(b) for b in req}:
                problems.append(f"BS {bs}: probes {sorted(set(active))}, required {sorted(req)}")
        for d, dwell in enumerate(self.dwells):
            if all(b == NULL_BEAM for b in dwell):
                problems.append(f"dwell {d} is silent on every BS")
        return problems


@dataclass(frozen=True)
class TaskRequirements:
    n_tracked: int = 8
    tracking_update_rate_hz: float = 5.0
    sinr_target_linear: float = 10.0
    throughput_target_bps: float = 0.0
    detection_target: float = 0.9
    false_alarm_target: float = 1e-6

    def __post_init__(self):
        if self.n_tracked < 0:
            raise ValueError("n_tracked must be nonnegative")
        if self.tracking_update_rate_hz <= 0:
            raise ValueError("tracking update rate must be positive")
        if self.sinr_target_linear <= 0:
            raise ValueError("SINR target must be positive")
        if self.throughput_target_bps < 0:
            raise ValueError("throughput target must be nonnegative")
        if not 0 < self.detection_target < 1 or not 0 < self.false_alarm_target < 1:
            raise ValueError("probability targets must lie in (0, 1)")


@dataclass(frozen=True)
class FrameSchedule:
    t_tracking_s: float
    t_comm_s: float
    t_search_s: float
    tracking_pattern: ScanPattern
    search_pattern: ScanPattern
    search_rate: float
    achieved_throughput_bps: float
    comm_scheduled: bool
    sum_se: float = field(default=0.0)


# -- cost functions ---------------------------------------------------------

def _pair_cost(ok0: np.ndarray, ok1: np.ndarray) -> np.ndarray:
    # silent BSs impose no constraint; both silent is never useful
    n = ok0.shape[0]
    silent0 = np.zeros((n, n), dtype=bool)
    silent0[0, :] = True
    silent1 = np.zeros((n, n), dtype=bool)
    silent1[:, 0] = True
    fine = (ok0 | silent0) & (ok1 | silent1)
    fine[0, 0] = False
    return np.where(fine, 0, 1).astype(np.int8)


def tracking_cost_table(net: RadarNetwork, sinr_target: float) -> np.ndarray:
    """Binary cost of every beam pair under the tracking SINR requirement."""
    t = net.sinr_table
    return _pair_cost(t[0] >= sinr_target, t[1] >= sinr_target)


def search_cost_table(net: RadarNetwork, pd_target: float) -> np.ndarray:
    """Binary cost of every beam pair under the detection requirement."""
    p = net.detection_table
    return _pair_cost(p[0] >= pd_target, p[1] >= pd_target)


def tracking_cost(net: RadarNetwork, u: int, v: int, sinr_target: float) -> int:
    """0 iff every active BS of the pair reaches ``sinr_target`` at its own scatterer."""
    if u == NULL_BEAM and v == NULL_BEAM:
        return 1
    beams = (u, v)
    for bs in (0, 1):
        if beams[bs] != NULL_BEAM and net.sinr(beams, bs) < sinr_target:
            return 1
    return 0


def search_cost(net: RadarNetwork, u: int, v: int, pd_target: float, tau: float, n_pulses: int) -> int:
    """As :func:`tracking_cost` with a detection-probability requirement."""
    if u == NULL_BEAM and v == NULL_BEAM:
        return 1
    beams = (u, v)
    for bs in (0, 1):
        if beams[bs] != NULL_BEAM:
            if detection_probability(net.sinr(beams, bs), n_pulses, tau) < pd_target:
                return 1
    return 0


# -- Algorithm: iterated assignment with silent-slot augmentation -----------

def optimize_scan_pattern(
    beam_set_1: Sequence[int],
    beam_set_2: Sequence[int],
    cost: np.ndarray | Callable[[int, int], float],
    max_augment: int | None = None,
    kind: str = "tracking",
) -> ScanPattern:
    """Shortest scan pattern whose dwells all have zero cost.

    Args:
        beam_set_1, beam_set_2: Beam ids each BS must probe exactly once.
        cost: Pair cost, either a table indexed ``[u, v]`` by beam id or a
            callable ``cost(u, v)``.
        max_augment: Cap on silent-slot pairs added after the first solve;
            defaults to the balanced set size.
        kind: Label stored on the returned pattern.

    Raises:
        InfeasibleError: The cap was reached without a zero-cost matching.
    """
    U = sorted(int(b) for b in beam_set_1)
    V = sorted(int(b) for b in beam_set_2)
    if not U and not V:
        return ScanPattern((), kind)
    n = max(len(U), len(V))
    U += [NULL_BEAM] * (n - len(U))
    V += [NULL_BEAM] * (n - len(V))
    if max_augment is None:
        max_augment = n

    table = None if callable(cost) else np.asarray(cost)
    for _ in range(max_augment + 1):
        if table is None:
            c = np.array([[cost(u, v) for v in V] for u in U], dtype=float)
        else:
            c = table[np.ix_(U, V)].astype(float)
        m = hungarian(c)
        if m.total_cost == 0:
            dwells = tuple(
                (U[r], V[col]) for r, col in m.pairs()
                if not (U[r] == NULL_BEAM and V[col] == NULL_BEAM)
            )
            return ScanPattern(dwells, kind)
        U.append(NULL_BEAM)
        V.append(NULL_BEAM)
    raise InfeasibleError(
        f"no zero-cost {kind} pattern after {max_augment} silent-slot augmentations",
        diagnostics={"rows": U[:-1], "cols": V[:-1], "cost": c},
    )


def _relative_look(codebook, layout, bs: int, beam: int) -> float:
    # look direction measured from the bearing toward the partner BS
    return float(wrap_angle(codebook.look_dir(beam) - layout.bs_azimuths[bs, 1 - bs]))


def baseline_pattern(kind: str, beam_set_1: Sequence[int], beam_set_2: Sequence[int],
                     rng=None, codebooks=None, layout=None, label: str = "tracking") -> ScanPattern:
    """Reference scan patterns.

    ``inphase`` steps both BSs in lockstep through their beams sorted by look
    direction. With ``codebooks`` and ``layout`` the look direction is taken
    relative to each BS's bearing toward the other BS, so both point the same
    way in their own frame; otherwise absolute look directions are used.
    ``random`` permutes each BS's beams independently. ``orthogonal`` lets
    BS 1 probe everything before BS 2 starts, the idle BS staying silent.
    """
    U = [int(b) for b in beam_set_1]
    V = [int(b) for b in beam_set_2]
    if kind == "orthogonal":
        dwells = [(u, NULL_BEAM) for u in sorted(U)] + [(NULL_BEAM, v) for v in sorted(V)]
        return ScanPattern(tuple(dwells), label)
    n = max(len(U), len(V))
    if kind == "inphase":
        if codebooks is not None and layout is not None:
            U.sort(key=lambda b: _relative_look(codebooks[0], layout, 0, b))
            V.sort(key=lambda b: _relative_look(codebooks[1], layout, 1, b))
        elif codebooks is not None:
            U.sort(key=codebooks[0].look_dir)
            V.sort(key=codebooks[1].look_dir)
        else:
            U.sort()
            V.sort()
        U += [NULL_BEAM] * (n - len(U))
        V += [NULL_BEAM] * (n - len(V))
    elif kind == "random":
        rng = np.random.default_rng(rng)
        U = [int(b) for b in rng.permutation(U + [NULL_BEAM] * (n - len(U)))]
        V = [int(b) for b in rng.permutation(V + [NULL_BEAM] * (n - len(V)))]
    else:
        raise ValueError(f"unknown baseline {kind!r}")
    dwells = tuple((u, v) for u, v in zip(U, V) if not (u == NULL_BEAM and v == NULL_BEAM))
    return ScanPattern(dwells, label)


# -- frame budget -------------------------------------------------------------

def _revisits(frame_s, rate_hz) -> int:
    prod = frame_s * rate_hz
    if isinstance(prod, float):
        nearest = round(prod)
        if abs(prod - nearest) <= 1e-9 * max(1.0, abs(prod)):
            return int(nearest)
    return math.floor(prod)


def tracking_subframe(frame_s, update_rate_hz, n_dwells, dwell_s):
    """Tracking subframe: revisits per frame times dwells times dwell time."""
    if frame_s <= 0 or update_rate_hz <= 0 or dwell_s <= 0 or n_dwells < 0:
        raise ValueError("frame, rate and dwell time must be positive")
    return _revisits(frame_s, update_rate_hz) * n_dwells * dwell_s


def search_rate(t_search_s, n_dwells, dwell_s):
    """Full network scans per frame."""
    if n_dwells < 1 or dwell_s <= 0:
        raise ValueError("need at least one dwell and a positive dwell time")
    return t_search_s / (n_dwells * dwell_s)


def draw_tracked_beams(n_beams: int, n_tracked: int, rng, n_cells: int = 2) -> list[list[int]]:
    """Uniformly random ``n_tracked``-subsets of beam ids, one per cell."""
    if not 0 <= n_tracked <= n_beams:
        raise ValueError(f"n_tracked must lie in [0, {n_beams}]")
    return [sorted(int(b) + 1 for b in rng.choice(n_beams, n_tracked, replace=False))
            for _ in range(n_cells)]


def schedule_frame(
    requirements: TaskRequirements,
    tracking_net: RadarNetwork,
    search_net: RadarNetwork,
    drop,
    comm_params: CommParams,
    tracked_beams: Sequence[Sequence[int]],
) -> FrameSchedule:
    """Allocate tracking, then communication, then search within one frame.

    Raises:
        TrackingInfeasibleError: tracking needs more than the frame, or no
            tracking pattern meets the SINR requirement.
        InfeasibleError: no search pattern meets the detection requirement.
    """
    frame = comm_params.frame_s
    dwell = tracking_net.params.dwell_time_s

    t_cost = tracking_cost_table(tracking_net, requirements.sinr_target_linear)
    try:
        tracking = optimize_scan_pattern(tracked_beams[0], tracked_beams[1], t_cost, kind="tracking")
    except InfeasibleError as exc:
        raise TrackingInfeasibleError(str(exc), exc.diagnostics) from exc
    t_track = 0.0
    if tracking.n_dwells:
        t_track = tracking_subframe(frame, requirements.tracking_update_rate_hz, tracking.n_dwells, dwell)
    if t_track > frame:
        raise TrackingInfeasibleError(
            f"tracking needs {t_track:.4f} s of a {frame} s frame ({tracking.n_dwells} dwells)"
        )

    sum_se = network_sum_se(drop, comm_params) if drop is not None else 0.0
    t_comm = comm_subframe(requirements.throughput_target_bps, sum_se, comm_params)
    comm_ok = frame - t_track >= t_comm
    if not comm_ok:
        t_comm = 0.0

    s_cost = search_cost_table(search_net, requirements.detection_target)
    n = search_net.n_beams
    search = optimize_scan_pattern(range(1, n + 1), range(1, n + 1), s_cost, kind="search")
    t_search = max(frame - t_track - t_comm, 0.0)
    rate = search_rate(t_search, search.n_dwells, search_net.params.dwell_time_s)
    return FrameSchedule(
        t_tracking_s=t_track,
        t_comm_s=t_comm,
        t_search_s=t_search,
        tracking_pattern=tracking,
        search_pattern=search,
        search_rate=rate,
        achieved_throughput_bps=throughput(sum_se, t_comm, comm_params),
        comm_scheduled=comm_ok,
        sum_se=sum_se,
    )
