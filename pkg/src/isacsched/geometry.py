"""Two-cell layout, virtual scatterers and UE drops."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .comm import large_scale_fading
from .phased_array import Codebook, half_power_beamwidth, wrap_angle


class PolarPoint(NamedTuple):
    range_m: float
    azimuth_rad: float


@dataclass(frozen=True)
class CellLayout:
    """Base-station positions and pairwise geometry.

    ``bs_separation_m[i, j]`` is the distance between BS i and BS j, and
    ``bs_azimuths[i, j]`` the azimuth of BS j seen from BS i. Diagonal
    entries are unused (set to 0).
    """

    radius_m: float
    bs_positions: np.ndarray
    bs_separation_m: np.ndarray
    bs_azimuths: np.ndarray

    @property
    def n_cells(self) -> int:
        return len(self.bs_positions)

    @classmethod
    def from_positions(cls, radius_m: float, positions) -> "CellLayout":
        pos = np.asarray(positions, dtype=float)
        if radius_m <= 0:
            raise ValueError(f"radius_m must be positive, got {radius_m}")
        diff = pos[None, :, :] - pos[:, None, :]
        sep = np.hypot(diff[..., 0], diff[..., 1])
        off = ~np.eye(len(pos), dtype=bool)
        if np.any(sep[off] <= 0):
            raise ValueError("base stations must be at distinct positions")
        az = np.where(off, wrap_angle(np.arctan2(diff[..., 1], diff[..., 0])), 0.0)
        return cls(float(radius_m), pos, sep, az)


def build_layout(radius_m: float = 100.0, separation_m: float | None = None) -> CellLayout:
    """Two base stations on the x-axis, ``separation_m`` apart (default 2R)."""
    if radius_m <= 0:
        raise ValueError(f"radius_m must be positive, got {radius_m}")
    if separation_m is None:
        separation_m = 2.0 * radius_m
    if separation_m <= 0:
        raise ValueError(f"separation_m must be positive, got {separation_m}")
    return CellLayout.from_positions(radius_m, [[0.0, 0.0], [separation_m, 0.0]])


def relative_polar(layout: CellLayout, bs_index: int, point) -> PolarPoint:
    """Range and wrapped azimuth of a Cartesian point seen from a base station."""
    d = np.asarray(point, dtype=float) - layout.bs_positions[bs_index]
    r = float(np.hypot(d[0], d[1]))
    if r == 0.0:
        raise ValueError("point coincides with the base station")
    return PolarPoint(r, float(wrap_angle(np.arctan2(d[1], d[0]))))


def polar_to_cartesian(layout: CellLayout, bs_index: int, polar: PolarPoint) -> np.ndarray:
    r, az = polar
    return layout.bs_positions[bs_index] + r * np.array([np.cos(az), np.sin(az)])


@dataclass(frozen=True)
class Scene:
    """Virtual scatterers of every cell.

    Scatterers are stored cell-major: the scatterer of beam ``b`` (1-based)
    in cell ``i`` has index ``i * n_beams + b - 1``.

    Attributes:
        cell: owning cell of each scatterer, shape (K,).
        beam: beam id each scatterer is mapped from, shape (K,).
        ranges: range from every BS, shape (n_cells, K).
        azimuths: azimuth from every BS, shape (n_cells, K).
        rcs: RCS per scatterer for (receive BS, transmit BS), shape (K, n_cells, n_cells).
    """

    n_beams: int
    positions: np.ndarray
    cell: np.ndarray
    beam: np.ndarray
    ranges: np.ndarray
    azimuths: np.ndarray
    rcs: np.ndarray

    @property
    def n_scatterers(self) -> int:
        return len(self.cell)

    @property
    def n_cells(self) -> int:
        return self.ranges.shape[0]

    def cell_members(self, cell: int) -> np.ndarray:
        return np.flatnonzero(self.cell == cell)

    def scatterer_of(self, cell: int, beam_id: int) -> int:
        """The virtual-scatterer map: beam id of a cell -> scatterer index."""
        if not 1 <= beam_id <= self.n_beams:
            raise ValueError(f"beam id {beam_id} has no virtual scatterer")
        return cell * self.n_beams + beam_id - 1

    def polar(self, k: int, bs_index: int) -> PolarPoint:
        return PolarPoint(float(self.ranges[bs_index, k]), float(self.azimuths[bs_index, k]))


def place_virtual_scatterers(
    layout: CellLayout,
    codebooks: Sequence[Codebook],
    rcs_monostatic_m2: float = 1.0,
    rcs_bistatic_m2: float = 1.0,
    placement: str = "boresight",
) -> Scene:
    """One scatterer per (cell, beam) at the cell edge along the beam.

    Args:
        layout: Cell layout.
        codebooks: One codebook per base station; all must have equal size.
        rcs_monostatic_m2: RCS used when the receiving BS also transmits.
        rcs_bistatic_m2: RCS used between different BSs.
        placement: ``"boresight"`` puts the scatterer on the look direction,
            ``"hpbw_edge"`` rotates it by half the half-power beamwidth.
    """
    if len(codebooks) != layout.n_cells:
        raise ValueError("need one codebook per base station")
    n_beams = codebooks[0].n_beams
    if any(cb.n_beams != n_beams for cb in codebooks):
        raise ValueError("all codebooks must have the same number of beams")
    if placement not in ("boresight", "hpbw_edge"):
        raise ValueError(f"unknown placement {placement!r}")

    positions, cells, beams = [], [], []
    for i, cb in enumerate(codebooks):
        shift = half_power_beamwidth(cb) / 2 if placement == "hpbw_edge" else 0.0
        az = cb.look_dirs + shift
        xy = layout.bs_positions[i] + layout.radius_m * np.column_stack([np.cos(az), np.sin(az)])
        positions.append(xy)
        cells.append(np.full(n_beams, i))
        beams.append(cb.beam_ids)
    positions = np.vstack(positions)

    d = positions[None, :, :] - layout.bs_positions[:, None, :]
    ranges = np.hypot(d[..., 0], d[..., 1])
    azimuths = wrap_angle(np.arctan2(d[..., 1], d[..., 0]))
    # own-cell ranges are R by construction; pin them against rounding
    cells = np.concatenate(cells)
    ranges[cells, np.arange(len(cells))] = layout.radius_m

    nc = layout.n_cells
    rcs_pair = np.where(np.eye(nc, dtype=bool), rcs_monostatic_m2, rcs_bistatic_m2)
    rcs = np.broadcast_to(rcs_pair, (len(cells), nc, nc)).copy()
    return Scene(n_beams, positions, cells, np.concatenate(beams), ranges, azimuths, rcs)


@dataclass(frozen=True)
class UeDrop:
    """UE positions and large-scale fading.

    ``beta[j, k, i]`` is the coefficient from UE k of cell j to BS i.
    """

    positions: np.ndarray
    beta: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.positions.shape[0]

    @property
    def ues_per_cell(self) -> int:
        return self.positions.shape[1]


def drop_ues(layout: CellLayout, ues_per_cell: int, min_range_m: float = 1.0, rng=None) -> UeDrop:
    """Drop UEs uniformly (by area) over the annulus [min_range_m, R] of each cell.

    ``rng`` may be a seed or a ``numpy.random.Generator``.
    """
    if ues_per_cell < 1:
        raise ValueError("ues_per_cell must be >= 1")
    R = layout.radius_m
    if not 0 < min_range_m < R:
        raise ValueError(f"min_range_m must lie in (0, {R})")
    rng = np.random.default_rng(rng)
    nc = layout.n_cells
    u = rng.random((nc, ues_per_cell))
    r = np.sqrt(min_range_m**2 + u * (R**2 - min_range_m**2))
    phi = rng.uniform(-np.pi, np.pi, (nc, ues_per_cell))
    pos = layout.bs_positions[:, None, :] + np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
    diff = pos[:, :, None, :] - layout.bs_positions[None, None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    return UeDrop(pos, large_scale_fading(dist))
