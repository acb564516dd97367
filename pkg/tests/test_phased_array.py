import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isacsched.phased_array import (
    NULL_BEAM,
    Codebook,
    gain_matrix,
    half_power_beamwidth,
    hamming_weights,
    power_pattern,
    wrap_angle,
)


def dense_hpbw(cb, step=1e-4):
    """Grid-search oracle: widest contiguous region around boresight at >= half peak."""
    look = cb.look_dir(1)
    offsets = np.arange(0.0, 0.5, step)
    g = power_pattern(cb, 1, look + offsets)
    edge = offsets[np.argmax(g < 0.5 * cb.peak_gain)]
    return 2.0 * edge


def test_hamming_raw_weights_three_elements():
    w = hamming_weights(3)
    raw = np.array([0.08, 1.0, 0.08])
    np.testing.assert_allclose(w, raw / np.linalg.norm(raw), rtol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 8, 29, 64])
def test_hamming_symmetric(n):
    w = hamming_weights(n)
    np.testing.assert_allclose(w, w[::-1], atol=1e-15)


def test_hamming_unit_energy():
    assert abs(np.sum(hamming_weights(29) ** 2) - 1.0) < 1e-12


def test_hamming_rejects_single_element():
    with pytest.raises(ValueError):
        hamming_weights(1)


def test_peak_gain_matches_direct_sum():
    cb = Codebook.build(29, 12)
    w = hamming_weights(29)
    expected = float(np.sum(w)) ** 2
    assert power_pattern(cb, 1, cb.look_dir(1)) == pytest.approx(expected, rel=1e-12)
    assert 20.0 < expected < 22.0


def test_null_beam_is_silent():
    cb = Codebook.build(29, 12)
    assert power_pattern(cb, NULL_BEAM, 0.3) == 0.0
    assert np.all(gain_matrix(cb, np.linspace(-3, 3, 7))[NULL_BEAM] == 0.0)


def test_look_directions_evenly_spaced():
    cb = Codebook.build(29, 12)
    dirs = np.array([cb.look_dir(b) for b in cb.beam_ids])
    np.testing.assert_allclose(np.diff(dirs), 2 * math.pi / 12)
    assert dirs[0] == pytest.approx(-math.pi)


@settings(max_examples=200, deadline=None)
@given(st.floats(-math.pi, math.pi), st.integers(1, 24))
def test_pattern_symmetric_and_bounded(delta, beam):
    cb = Codebook.build(29, 24)
    look = cb.look_dir(beam)
    g_plus = power_pattern(cb, beam, look + delta)
    g_minus = power_pattern(cb, beam, look - delta)
    assert g_plus == pytest.approx(g_minus, rel=1e-9, abs=1e-15)
    assert g_plus <= cb.peak_gain * (1 + 1e-12)


def test_gain_matrix_matches_pointwise():
    cb = Codebook.build(29, 12)
    theta = np.linspace(-math.pi, math.pi, 31)
    mat = gain_matrix(cb, theta)
    for b in cb.beam_ids:
        np.testing.assert_allclose(mat[b], power_pattern(cb, b, theta), rtol=1e-12)


def test_hpbw_uniform_matches_grid_oracle():
    cb = Codebook.build(29, 12, taper="uniform")
    got = half_power_beamwidth(cb)
    assert got == pytest.approx(dense_hpbw(cb), abs=2e-4)
    assert 3.0 < math.degrees(got) < 4.0


def test_hpbw_hamming_matches_grid_oracle():
    cb = Codebook.build(29, 12)
    assert half_power_beamwidth(cb) == pytest.approx(dense_hpbw(cb), abs=2e-4)


def test_hpbw_taper_broadens_and_aperture_narrows():
    uniform = half_power_beamwidth(Codebook.build(29, 12, taper="uniform"))
    hamming = half_power_beamwidth(Codebook.build(29, 12))
    doubled = half_power_beamwidth(Codebook.build(58, 12))
    assert hamming > uniform
    assert doubled < hamming


@given(st.floats(-50, 50))
def test_wrap_angle_range(x):
    w = wrap_angle(x)
    assert -math.pi <= w < math.pi
    assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)
