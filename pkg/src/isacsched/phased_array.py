"""Hamming-tapered phased-array codebook and its power pattern.

Every beam shares one shape: the gain depends only on the offset between the
evaluation azimuth and the beam's look direction. Offsets beyond broadside
(|offset| > pi/2) are held at the endfire value so the pattern has no mirror
main lobe behind the array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NULL_BEAM = 0


def wrap_angle(theta):
    """Wrap angles to [-pi, pi)."""
    return (np.asarray(theta, dtype=float) + np.pi) % (2.0 * np.pi) - np.pi


def hamming_weights(n_antennas: int) -> np.ndarray:
    """Hamming taper scaled to unit sum of squares.

    Args:
        n_antennas: Number of array elements, at least 2.

    Returns:
        Array of ``n_antennas`` nonnegative weights with ``sum(w**2) == 1``.
    """
    if n_antennas < 2:
        raise ValueError(f"n_antennas must be >= 2, got {n_antennas}")
    n = np.arange(n_antennas)
    w = 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (n_antennas - 1))
    return w / np.sqrt(np.sum(w**2))


def uniform_weights(n_antennas: int) -> np.ndarray:
    if n_antennas < 1:
        raise ValueError(f"n_antennas must be >= 1, got {n_antennas}")
    return np.full(n_antennas, 1.0 / np.sqrt(n_antennas))


def _array_factor(weights: np.ndarray, offset) -> np.ndarray:
    # half-wavelength spacing: phase step between elements is pi*sin(offset)
    offset = np.asarray(offset, dtype=float)
    psi = np.pi * np.sin(offset)
    n = np.arange(weights.size)
    af = np.exp(1j * np.multiply.outer(psi, n)) @ weights
    return np.abs(af) ** 2


@dataclass(frozen=True)
class Codebook:
    """Beam codebook of one base station.

    Beam id 0 is the null beamformer; ids ``1..n_beams`` map to
    ``look_dirs[id - 1]``.
    """

    n_antennas: int
    n_beams: int
    look_dirs: np.ndarray
    weights: np.ndarray
    backlobe_floor: float

    @classmethod
    def build(cls, n_antennas: int = 29, n_beams: int = 12, taper: str = "hamming") -> "Codebook":
        if n_beams < 1:
            raise ValueError(f"n_beams must be >= 1, got {n_beams}")
        if taper == "hamming":
            weights = hamming_weights(n_antennas)
        elif taper == "uniform":
            weights = uniform_weights(n_antennas)
        else:
            raise ValueError(f"unknown taper {taper!r}")
        look_dirs = wrap_angle(-np.pi + 2.0 * np.pi * np.arange(n_beams) / n_beams)
        floor = float(_array_factor(weights, np.pi / 2))
        weights.setflags(write=False)
        look_dirs.setflags(write=False)
        return cls(n_antennas, n_beams, look_dirs, weights, floor)

    @property
    def beam_ids(self) -> np.ndarray:
        return np.arange(1, self.n_beams + 1)

    @property
    def peak_gain(self) -> float:
        return float(np.sum(self.weights) ** 2)

    def look_dir(self, beam_id: int) -> float:
        self._check_beam(beam_id)
        if beam_id == NULL_BEAM:
            raise ValueError("the null beam has no look direction")
        return float(self.look_dirs[beam_id - 1])

    def _check_beam(self, beam_id: int) -> None:
        if not 0 <= int(beam_id) <= self.n_beams:
            raise ValueError(f"beam id {beam_id} outside 0..{self.n_beams}")


def offset_gain(codebook: Codebook, offset) -> np.ndarray:
    """Pattern as a function of the offset from the look direction."""
    offset = wrap_angle(offset)
    gain = _array_factor(codebook.weights, offset)
    return np.where(np.abs(offset) > np.pi / 2, codebook.backlobe_floor, gain)


def power_pattern(codebook: Codebook, beam_id: int, theta):
    """Array power gain of ``beam_id`` toward azimuth ``theta``.

    Args:
        codebook: Codebook holding the beam.
        beam_id: 0 for the null beamformer, otherwise ``1..n_beams``.
        theta: Azimuth in radians, scalar or array.

    Returns:
        Dimensionless gain with the shape of ``theta`` (a float for scalars).
    """
    codebook._check_beam(beam_id)
    theta = np.asarray(theta, dtype=float)
    if beam_id == NULL_BEAM:
        out = np.zeros_like(theta)
    else:
        out = offset_gain(codebook, theta - codebook.look_dirs[beam_id - 1])
    return float(out) if out.ndim == 0 else out


def gain_matrix(codebook: Codebook, theta) -> np.ndarray:
    """Gains of every beam id (rows 0..n_beams) toward each azimuth in ``theta``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros((codebook.n_beams + 1, theta.size))
    out[1:] = offset_gain(codebook, theta[None, :] - codebook.look_dirs[:, None])
    return out


def half_power_beamwidth(codebook: Codebook, tol: float = 1e-6) -> float:
    """Width of the main-lobe region where gain is at least half the peak.

    The first half-power crossing is bracketed with a coarse outward scan
    and then refined by bisection to ``tol`` radians.
    """
    half = 0.5 * codebook.peak_gain
    step = 1e-3
    lo, hi = 0.0, step
    while float(offset_gain(codebook, hi)) >= half:
        lo, hi = hi, hi + step
        if hi > np.pi / 2:
            return np.pi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if float(offset_gain(codebook, mid)) >= half:
            lo = mid
        else:
            hi = mid
    return 2.0 * 0.5 * (lo + hi)
