import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, optimize, stats

from isacsched.geometry import build_layout, place_virtual_scatterers
from isacsched.phased_array import Codebook, power_pattern
from isacsched.radar import (
    RadarParams,
    bistatic_power,
    calibrate_radar_power,
    crosstalk_power,
    detection_probability,
    false_alarm_threshold,
    monostatic_power,
    pair_sinr_table,
    radar_sinr,
    sinr_for_detection,
)

P = RadarParams()


# -- oracles --------------------------------------------------------------------

def tau_poisson_oracle(p_fa, n):
    """Upper regularized gamma as a finite Poisson sum, solved in high precision."""
    mpmath.mp.dps = 40
    q = lambda t: mpmath.exp(-t) * mpmath.fsum(t**k / mpmath.factorial(k) for k in range(n))
    return float(mpmath.findroot(lambda t: q(t) - p_fa, n + 5 * math.sqrt(n)))


def tau_quadrature_oracle(p_fa, n):
    """Lower regularized gamma by numerical integration of the gamma density."""
    log_norm = math.lgamma(n)

    def lower(tau):
        f = lambda t: math.exp((n - 1) * math.log(t) - t - log_norm) if t > 0 else 0.0
        return integrate.quad(f, 0.0, tau, epsabs=1e-14, epsrel=1e-13, limit=200)[0]

    return optimize.brentq(lambda t: (1.0 - lower(t)) - p_fa, 1.0, 200.0, xtol=1e-13)


def swerling1_quadrature(sinr, n, tau):
    """Detection probability averaged over an exponential per-dwell amplitude."""
    f = lambda a: stats.ncx2.sf(2 * tau, 2 * n, 2 * n * sinr * a) * math.exp(-a)
    return integrate.quad(f, 0.0, np.inf, epsabs=1e-13, epsrel=1e-11, limit=400)[0]


# -- power laws -------------------------------------------------------------------

def test_monostatic_hand_value():
    expected = 21**2 * 0.05**2 / ((4 * math.pi) ** 3 * 100.0**4)
    assert monostatic_power(P, 21.0, 1.0, 100.0) == pytest.approx(expected, rel=1e-12)
    assert monostatic_power(P, 21.0, 1.0, 100.0) == pytest.approx(5.6e-12, rel=0.01)


def test_zero_gain_means_zero_power():
    assert monostatic_power(P, 0.0, 1.0, 50.0) == 0.0
    assert bistatic_power(P, 0.0, 3.0, 1.0, 50.0, 70.0) == 0.0
    assert bistatic_power(P, 3.0, 0.0, 1.0, 50.0, 70.0) == 0.0
    assert crosstalk_power(P, 0.0, 5.0, 200.0) == 0.0


@settings(max_examples=100)
@given(st.floats(1.0, 1e4), st.floats(1e-3, 30.0), st.floats(1e-2, 10.0), st.floats(0.1, 10.0))
def test_scaling_laws(rho, g, sigma, s):
    m = monostatic_power(P, g, sigma, rho)
    assert monostatic_power(P, g, sigma, s * rho) == pytest.approx(m / s**4, rel=1e-12)
    b = bistatic_power(P, g, 2 * g, sigma, rho, 3 * rho)
    assert bistatic_power(P, g, 2 * g, sigma, s * rho, 3 * rho) == pytest.approx(b / s**2, rel=1e-12)
    assert bistatic_power(P, g, 2 * g, sigma, rho, 3 * s * rho) == pytest.approx(b / s**2, rel=1e-12)
    c = crosstalk_power(P, g, 2 * g, rho)
    assert crosstalk_power(P, g, 2 * g, s * rho) == pytest.approx(c / s**2, rel=1e-12)


def test_doubling_range_divides_by_16_and_4():
    assert monostatic_power(P, 5.0, 1.0, 200.0) == pytest.approx(monostatic_power(P, 5.0, 1.0, 100.0) / 16, rel=1e-12)
    assert crosstalk_power(P, 5.0, 2.0, 400.0) == pytest.approx(crosstalk_power(P, 5.0, 2.0, 200.0) / 4, rel=1e-12)


def test_bistatic_reduces_to_monostatic_and_is_symmetric():
    assert bistatic_power(P, 7.0, 7.0, 2.0, 80.0, 80.0) == pytest.approx(monostatic_power(P, 7.0, 2.0, 80.0), rel=1e-12)
    assert bistatic_power(P, 3.0, 9.0, 1.0, 40.0, 90.0) == pytest.approx(bistatic_power(P, 9.0, 3.0, 1.0, 90.0, 40.0), rel=1e-12)
    assert crosstalk_power(P, 3.0, 8.0, 200.0) == crosstalk_power(P, 8.0, 3.0, 200.0)


# -- SINR -------------------------------------------------------------------------

def _scene(n_beams=12, separation=200.0):
    lay = build_layout(100.0, separation)
    cb = Codebook.build(29, n_beams)
    return lay, (cb, cb), place_virtual_scatterers(lay, (cb, cb))


def test_single_scatterer_solo_is_echo_over_noise():
    lay, cbs, scene = _scene(n_beams=1)
    k = scene.scatterer_of(0, 1)
    g = power_pattern(cbs[0], 1, scene.azimuths[0, k])
    expected = monostatic_power(P, g, 1.0, 100.0) / P.noise_power_w
    assert radar_sinr(scene, lay, cbs, P, (1, 0), 0, k) == pytest.approx(expected, rel=1e-12)


def test_all_silent_is_zero():
    lay, cbs, scene = _scene()
    assert radar_sinr(scene, lay, cbs, P, (0, 0), 0, 0) == 0.0
    assert radar_sinr(scene, lay, cbs, P, (0, 0), 1, 12) == 0.0


def test_facing_beams_lose_to_solo():
    lay, cbs, scene = _scene()
    b0 = next(b for b in cbs[0].beam_ids if abs(cbs[0].look_dir(b)) < 1e-9)
    b1 = next(b for b in cbs[1].beam_ids if abs(abs(cbs[1].look_dir(b)) - math.pi) < 1e-9)
    k = scene.scatterer_of(0, b0)
    assert radar_sinr(scene, lay, cbs, P, (b0, b1), 0, k) < radar_sinr(scene, lay, cbs, P, (b0, 0), 0, k)


@pytest.mark.parametrize("clutter", ["own_cell", "all"])
def test_pair_table_matches_loop(clutter):
    lay, cbs, scene = _scene()
    table = pair_sinr_table(scene, lay, cbs, P, clutter)
    for u in range(13):
        for v in range(13):
            for bs, beam in ((0, u), (1, v)):
                if beam == 0:
                    assert table[bs, u, v] == 0.0
                    continue
                k = scene.scatterer_of(bs, beam)
                ref = radar_sinr(scene, lay, cbs, P, (u, v), bs, k, clutter)
                assert table[bs, u, v] == pytest.approx(ref, rel=1e-10)


# -- thresholds and detection -------------------------------------------------------

def test_single_pulse_threshold_is_log():
    assert false_alarm_threshold(1e-6, 1) == pytest.approx(-math.log(1e-6), abs=1e-6)


def test_twenty_pulse_threshold_matches_oracles():
    tau = false_alarm_threshold(1e-6, 20)
    assert tau == pytest.approx(tau_poisson_oracle(1e-6, 20), abs=1e-8)
    assert tau == pytest.approx(tau_quadrature_oracle(1e-6, 20), abs=1e-8)


def test_threshold_increases_as_pfa_falls():
    taus = [false_alarm_threshold(p, 20) for p in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(a < b for a, b in zip(taus, taus[1:]))


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1])
def test_threshold_rejects_bad_pfa(bad):
    with pytest.raises(ValueError):
        false_alarm_threshold(bad, 20)


@settings(max_examples=100)
@given(st.floats(1e-3, 1e3))
def test_single_pulse_identity(sinr):
    tau = -math.log(1e-6)
    assert detection_probability(sinr, 1, tau) == pytest.approx(1e-6 ** (1 / (1 + sinr)), rel=1e-9)


def test_detection_monotone_and_bounded():
    tau = false_alarm_threshold(1e-6, 20)
    grid = np.logspace(-4, 4, 1000)
    pd = detection_probability(grid, 20, tau)
    assert np.all(np.diff(pd) >= 0)
    assert np.all((pd >= 0) & (pd <= 1))
    assert detection_probability(1e9, 20, tau) == pytest.approx(1.0, abs=1e-6)
    assert detection_probability(0.0, 20, tau) == 0.0


@pytest.mark.parametrize("sinr", [0.002, 0.01, 0.03, 0.05])
def test_low_sinr_branch_matches_fluctuating_target_oracle(sinr):
    tau = false_alarm_threshold(1e-6, 20)
    assert detection_probability(sinr, 20, tau) == pytest.approx(swerling1_quadrature(sinr, 20, tau), rel=1e-6)


def test_detection_inversion_round_trip():
    tau = false_alarm_threshold(1e-6, 20)
    g = sinr_for_detection(0.9, 20, tau)
    assert detection_probability(g, 20, tau) == pytest.approx(0.9, abs=1e-8)


# -- calibration --------------------------------------------------------------------

def _min_echo_snr(scene, cbs, params):
    out = np.inf
    for k in range(scene.n_scatterers):
        i = scene.cell[k]
        g = power_pattern(cbs[i], int(scene.beam[k]), scene.azimuths[i, k])
        out = min(out, monostatic_power(params, g, 1.0, scene.ranges[i, k]) / params.noise_power_w)
    return out


def test_sinr_calibration_zero_margin_hits_target():
    lay, cbs, scene = _scene()
    p = calibrate_radar_power("sinr", 10.0, scene, cbs, P, margin_db=0.0)
    assert _min_echo_snr(scene, cbs, P.with_power(p)) == pytest.approx(10.0, abs=1e-9)


def test_calibration_linear_in_requirement():
    lay, cbs, scene = _scene()
    p1 = calibrate_radar_power("sinr", 10.0, scene, cbs, P)
    p2 = calibrate_radar_power("sinr", 20.0, scene, cbs, P)
    assert p2 == pytest.approx(2 * p1, rel=1e-12)


def test_detection_calibration_round_trip():
    lay, cbs, scene = _scene()
    params = P.with_false_alarm(1e-6)
    p = calibrate_radar_power("detection", 0.9, scene, cbs, params, margin_db=0.0)
    snr = _min_echo_snr(scene, cbs, params.with_power(p))
    assert detection_probability(snr, 20, params.threshold) == pytest.approx(0.9, abs=1e-8)


def test_detection_calibration_needs_threshold():
    lay, cbs, scene = _scene()
    with pytest.raises(ValueError):
        calibrate_radar_power("detection", 0.9, scene, cbs, P)
