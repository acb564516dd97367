"""Experiment configuration: ``key = value`` text files with ``#`` comments."""

from __future__ import annotations

import dataclasses
import hashlib
from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    # network
    n_cells: int = 2
    radius_m: float = 100.0
    bandwidth_hz: float = 10e6
    wavelength_m: float = 0.05
    frame_s: float = 1.0
    ues_per_cell: int = 10
    ue_power_dbm: float = 23.0
    dwell_s: float = 0.0133
    n_pulses: int = 20
    pd_target: float = 0.9
    pfa_target: float = 1e-6
    sinr_target_db: float = 10.0
    n_antennas: int = 29
    # modelling choices
    separation_m: float | None = None  # None -> 2 * radius_m
    noise_psd_dbm_hz: float = -174.0
    rcs_m2: float = 1.0
    margin_db: float = 1.0
    min_ue_range_m: float = 1.0
    placement: str = "boresight"
    clutter: str = "own_cell"
    # Monte Carlo
    n_realizations: int = 10_000
    rng_seed: int = 0
    # sweeps
    look_dirs: tuple[int, ...] = (12, 24, 72)
    n_tracked: tuple[int, ...] = tuple(range(1, 13))
    update_rates_hz: tuple[float, ...] = tuple(float(r) for r in range(1, 11))
    cdf_n_tracked: int = 8
    duration_n_tracked: tuple[int, ...] = (1, 4, 8)
    duration_orthogonal_n_tracked: int = 8
    duration_look_dirs: int = 72
    tradeoff_n_tracked: tuple[int, ...] = (1, 4, 8)
    tradeoff_update_rate_hz: float = 5.0
    tradeoff_search_beams: int = 12
    tradeoff_tracking_beams: int = 72
    tradeoff_points: int = 61
    # single-frame scheduling
    schedule_n_tracked: int = 8
    schedule_update_rate_hz: float = 5.0
    schedule_look_dirs: int = 72
    throughput_target_bps: float = 100e6

    def __post_init__(self):
        if self.n_cells != 2:
            raise ConfigError("n_cells: only two-cell networks are supported")
        positive = ("radius_m", "bandwidth_hz", "wavelength_m", "frame_s", "ues_per_cell",
                    "dwell_s", "n_pulses", "n_antennas", "rcs_m2", "min_ue_range_m",
                    "n_realizations", "tradeoff_points")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}: must be positive")
        if self.separation_m is not None and self.separation_m <= 0:
            raise ConfigError("separation_m: must be positive")
        if not 0 < self.pd_target < 1:
            raise ConfigError("pd_target: must lie in (0, 1)")
        if not 0 < self.pfa_target < 1:
            raise ConfigError("pfa_target: must lie in (0, 1)")
        if self.placement not in ("boresight", "hpbw_edge"):
            raise ConfigError(f"placement: unknown value {self.placement!r}")
        if self.clutter not in ("own_cell", "all"):
            raise ConfigError(f"clutter: unknown value {self.clutter!r}")
        if self.rng_seed < 0:
            raise ConfigError("rng_seed: must be nonnegative")
        if not self.min_ue_range_m < self.radius_m:
            raise ConfigError("min_ue_range_m: must be below radius_m")

    @property
    def separation(self) -> float:
        return 2.0 * self.radius_m if self.separation_m is None else self.separation_m

    @property
    def sinr_target(self) -> float:
        return 10.0 ** (self.sinr_target_db / 10.0)

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in fields(ExperimentConfig)}


def _parse_value(name: str, text: str):
    kind = _FIELDS[name].type
    text = text.strip()
    try:
        if kind == "int":
            return int(text.replace("_", ""))
        if kind == "float":
            return float(text)
        if kind == "float | None":
            return None if text.lower() in ("auto", "none") else float(text)
        if kind == "str":
            return text
        if kind == "tuple[int, ...]":
            return tuple(int(t) for t in _split(text))
        if kind == "tuple[float, ...]":
            return tuple(float(t) for t in _split(text))
    except ValueError:
        raise ConfigError(f"{name}: malformed value {text!r}") from None
    raise ConfigError(f"{name}: unsupported field type {kind}")


def _split(text: str) -> list[str]:
    parts = [t.strip() for t in text.replace(" ", ",").split(",") if t.strip()]
    if not parts:
        raise ValueError("empty list")
    return parts


def _format_value(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, tuple):
        return ", ".join(repr(v) for v in value)
    return repr(value) if not isinstance(value, str) else value


def parse_config(text: str, base: ExperimentConfig | None = None, source: str = "<config>") -> ExperimentConfig:
    """Parse ``key = value`` lines on top of ``base`` (defaults if None)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{source}:{lineno}: {exc}") from None
    try:
        return dataclasses.replace(base or ExperimentConfig(), **values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config(text, source=str(path))


def apply_overrides(config: ExperimentConfig, overrides) -> ExperimentConfig:
    """Apply ``key=value`` strings (command-line style)."""
    text = "\n".join(overrides or ())
    return parse_config(text, base=config, source="--set")


def config_text(config: ExperimentConfig) -> str:
    return "".join(f"{name} = {_format_value(getattr(config, name))}\n" for name in _FIELDS)


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(config_text(config).encode()).hexdigest()[:16]
