"""A calibrated two-cell radar network with cached pairwise SINR tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import CellLayout, Scene, build_layout, place_virtual_scatterers
from .phased_array import Codebook
from .radar import (
    RadarParams,
    calibrate_radar_power,
    detection_probability,
    pair_sinr_table,
    radar_sinr,
)


@dataclass(frozen=True)
class RadarNetwork:
    """Everything needed to evaluate probes for one radar task.

    ``params.p_r`` is the calibrated transmit power for the task the network
    was built for; ``params.threshold`` is set when a false-alarm target was
    given.
    """

    layout: CellLayout
    codebooks: tuple[Codebook, ...]
    scene: Scene
    params: RadarParams
    clutter: str = "own_cell"

    @property
    def n_beams(self) -> int:
        return self.scene.n_beams

    @cached_property
    def sinr_table(self) -> np.ndarray:
        """See :func:`isacsched.radar.pair_sinr_table`."""
        return pair_sinr_table(self.scene, self.layout, self.codebooks, self.params, self.clutter)

    @cached_property
    def detection_table(self) -> np.ndarray:
        if self.params.threshold is None:
            raise ValueError("network has no detection threshold")
        return detection_probability(self.sinr_table, self.params.n_pulses, self.params.threshold)

    def sinr(self, beams, rx_bs: int) -> float:
        """Per-term SINR of BS ``rx_bs`` at its own probed scatterer."""
        if beams[rx_bs] == 0:
            return 0.0
        k = self.scene.scatterer_of(rx_bs, int(beams[rx_bs]))
        return radar_sinr(self.scene, self.layout, self.codebooks, self.params, beams, rx_bs, k, self.clutter)


def build_network(
    *,
    radius_m: float = 100.0,
    separation_m: float | None = None,
    n_antennas: int = 29,
    n_beams: int = 12,
    params: RadarParams | None = None,
    p_fa: float | None = 1e-6,
    mode: str | None = "sinr",
    requirement: float = 10.0,
    margin_db: float = 1.0,
    rcs_m2: float = 1.0,
    placement: str = "boresight",
    clutter: str = "own_cell",
) -> RadarNetwork:
    """Build layout, codebooks and scene, then calibrate the radar power.

    ``mode`` is ``"sinr"`` (``requirement`` is a linear SINR),
    ``"detection"`` (``requirement`` is a detection probability) or None to
    keep ``params.p_r`` as given.
    """
    params = params or RadarParams()
    if p_fa is not None:
        params = params.with_false_alarm(p_fa)
    layout = build_layout(radius_m, separation_m)
    cb = Codebook.build(n_antennas, n_beams)
    codebooks = (cb,) * layout.n_cells
    scene = place_virtual_scatterers(layout, codebooks, rcs_m2, rcs_m2, placement)
    if mode is not None:
        p_r = calibrate_radar_power(mode, requirement, scene, codebooks, params, margin_db)
        params = params.with_power(p_r)
    return RadarNetwork(layout, codebooks, scene, params, clutter)
