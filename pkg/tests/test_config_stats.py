import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isacsched.config import (
    ConfigError,
    ExperimentConfig,
    apply_overrides,
    config_hash,
    config_text,
    load_config,
    parse_config,
)
from isacsched.stats import EmpiricalDistribution


def test_network_defaults():
    c = ExperimentConfig()
    assert (c.n_cells, c.radius_m, c.bandwidth_hz, c.wavelength_m, c.frame_s) == (2, 100.0, 10e6, 0.05, 1.0)
    assert (c.ues_per_cell, c.ue_power_dbm, c.dwell_s, c.n_pulses) == (10, 23.0, 0.0133, 20)
    assert (c.pd_target, c.pfa_target, c.sinr_target_db) == (0.9, 1e-6, 10.0)
    assert c.sinr_target == pytest.approx(10.0)
    assert c.separation == 200.0
    assert c.look_dirs == (12, 24, 72) and c.n_tracked == tuple(range(1, 13))


def test_parse_with_comments_and_lists():
    c = parse_config("# header\nradius_m = 150  # wider\nlook_dirs = 12, 36\nseparation_m = auto\n")
    assert c.radius_m == 150.0 and c.look_dirs == (12, 36) and c.separation == 300.0


def test_round_trip_through_text():
    c = ExperimentConfig(radius_m=80.0, look_dirs=(8, 16), separation_m=170.0)
    assert parse_config(config_text(c)) == c
    assert config_hash(parse_config(config_text(c))) == config_hash(c)


def test_hash_changes_with_content():
    assert config_hash(ExperimentConfig()) != config_hash(ExperimentConfig(rng_seed=1))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("radius_m = 100\nbogus = 3\n", ":2: unknown key 'bogus'"),
        ("n_pulses = many\n", ":1: n_pulses: malformed"),
        ("just words\n", ":1: expected"),
        ("pd_target = 1.5\n", "pd_target"),
    ],
)
def test_parse_errors_name_line_and_key(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config(text, source="cfg")


def test_missing_file_reports_path(tmp_path):
    missing = tmp_path / "nope.cfg"
    with pytest.raises(ConfigError, match=str(missing)):
        load_config(missing)


def test_overrides():
    c = apply_overrides(ExperimentConfig(), ["n_realizations=50", "clutter = all"])
    assert c.n_realizations == 50 and c.clutter == "all"


# -- empirical distributions ----------------------------------------------------------

samples = st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=200)


@given(samples, st.floats(-2e6, 2e6))
def test_quantile_of_cdf_below_x(xs, x):
    d = EmpiricalDistribution(xs)
    c = d.cdf(x)
    assert 0.0 <= c <= 1.0
    if c > 0:
        assert d.quantile(c) <= x


@given(samples)
def test_curve_monotone_and_ends_at_one(xs):
    values, cdf = EmpiricalDistribution(xs).curve()
    assert np.all(np.diff(values) > 0)
    assert np.all(np.diff(cdf) > 0)
    assert cdf[-1] == pytest.approx(1.0)


def test_reliability_and_mean():
    d = EmpiricalDistribution([1, 2, 3, 4])
    assert d.reliability(3) == 0.5
    assert d.reliability(0) == 1.0
    assert d.mean() == 2.5
    assert d.quantile(0.99) == 4


def test_rejects_empty_and_nan():
    with pytest.raises(ValueError):
        EmpiricalDistribution([])
    with pytest.raises(ValueError):
        EmpiricalDistribution([1.0, float("nan")])
