"""Command-line entry point: ``isacsched {cdf,dwell,tradeoff,calibrate,schedule}``."""

from __future__ import annotations

import argparse
import subprocess
import sys
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import experiments
from .config import ConfigError, ExperimentConfig, apply_overrides, config_hash, load_config
from .scheduler import InfeasibleError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2


@lru_cache(maxsize=1)
def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=10, check=True,
        )
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def write_curve(path: Path, x, y, cfg: ExperimentConfig, x_label: str, y_label: str) -> Path:
    """Two whitespace-separated columns behind a single ``#`` metadata line."""
    header = (f"# git={git_describe()} seed={cfg.rng_seed} config={config_hash(cfg)} "
              f"x={x_label} y={y_label}\n")
    rows = "".join(f"{a:.12g} {b:.12g}\n" for a, b in zip(np.asarray(x, float), np.asarray(y, float)))
    path.write_text(header + rows)
    return path


def _to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def cmd_cdf(cfg: ExperimentConfig, out: Path) -> None:
    res = experiments.run_cdf_experiment(cfg)
    names = {"opt": "opt", "inphase": "seq", "random": "random"}
    for (task, pattern, n_beams), dist in sorted(res.samples.items()):
        values, cdf = dist.curve()
        if task == "tracking":
            values, x_label = _to_db(values), "sinr_db"
        else:
            x_label = "detection_probability"
        write_curve(out / f"{task}_scan_pattern_Nl_{n_beams}_{names[pattern]}.dat",
                    values, cdf, cfg, x_label, "cdf")
    print("reliability at target (search: detection probability, tracking: SINR)")
    for n_beams in cfg.look_dirs:
        for task in ("search", "tracking"):
            cells = "  ".join(f"{p}={res.reliability(task, p, n_beams, cfg):.4f}" for p in experiments.PATTERNS)
            print(f"  N_l={n_beams:<3d} {task:<8s} {cells}")
        print(f"  N_l={n_beams:<3d} search dwells D_s={res.search_dwells[n_beams]}")


def cmd_dwell(cfg: ExperimentConfig, out: Path) -> None:
    res = experiments.run_dwell_experiment(cfg)
    write_curve(out / "tracking_dwells_orthogonal.dat", res.n_tracked, res.orthogonal, cfg, "n_tracked", "dwells")
    for n_beams in cfg.look_dirs:
        nt = res.n_tracked[: len(res.dwells[n_beams])]
        mean, p99 = res.mean(n_beams), res.percentile99(n_beams)
        write_curve(out / f"tracking_dwells_Nl_{n_beams}_mean.dat", nt, mean, cfg, "n_tracked", "mean_dwells")
        write_curve(out / f"tracking_dwells_Nl_{n_beams}_p99.dat", nt, p99, cfg, "n_tracked", "p99_dwells")
        print(f"N_l={n_beams}: mean D_t/N_t = " + " ".join(f"{m / n:.3f}" for m, n in zip(mean, nt)))


def cmd_tradeoff(cfg: ExperimentConfig, out: Path) -> None:
    res = experiments.run_tradeoff_experiment(cfg)
    for (pattern, nt), t_t in sorted(res.durations.items()):
        write_curve(out / f"tracking_duration_{pattern}_Nt_{nt}.dat",
                    res.update_rates_hz, t_t, cfg, "update_rate_hz", "tracking_subframe_s")
    for nt, (rates, s) in sorted(res.lines.items()):
        write_curve(out / f"throughput_vs_search_rate_Nt_{nt}.dat", rates, s, cfg,
                    "search_rate", "throughput_bps")
    print(f"D_s={res.search_dwells} mean sum SE={res.mean_sum_se:.4f} bit/s/Hz")
    for nt, t_t in sorted(res.t_tracking.items()):
        state = "" if nt in res.lines else " (exceeds frame)"
        print(f"N_t={nt}: T_t={t_t:.6f} s{state}")


def cmd_calibrate(cfg: ExperimentConfig, out: Path) -> None:
    for n_beams, modes in experiments.calibration_table(cfg).items():
        print(f"N_l={n_beams}: p_r(sinr)={modes['sinr']:.4f} dBm  p_r(detection)={modes['detection']:.4f} dBm")


def cmd_schedule(cfg: ExperimentConfig, out: Path) -> None:
    s = experiments.run_schedule(cfg)
    print(f"tracking: {s.tracking_pattern.n_dwells} dwells, T_t={s.t_tracking_s:.6f} s")
    if s.comm_scheduled:
        print(f"comm: T_c={s.t_comm_s:.6f} s, throughput={s.achieved_throughput_bps:.6g} bit/s")
    else:
        print("comm: not scheduled (throughput target does not fit)")
    print(f"search: {s.search_pattern.n_dwells} dwells, T_s={s.t_search_s:.6f} s, R_s={s.search_rate:.6f}")


COMMANDS = {
    "cdf": cmd_cdf,
    "dwell": cmd_dwell,
    "tradeoff": cmd_tradeoff,
    "calibrate": cmd_calibrate,
    "schedule": cmd_schedule,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isacsched", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", type=Path, help="key = value configuration file")
    parser.add_argument("--seed", type=int, help="master RNG seed")
    parser.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    parser.add_argument("--realizations", type=int, help="Monte Carlo realizations")
    parser.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override one configuration key (repeatable)")
    return parser


def resolve_config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    cfg = apply_overrides(cfg, args.overrides)
    extra = []
    if args.seed is not None:
        extra.append(f"rng_seed = {args.seed}")
    if args.realizations is not None:
        extra.append(f"n_realizations = {args.realizations}")
    return apply_overrides(cfg, extra)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command in ("cdf", "dwell", "tradeoff"):
        args.out.mkdir(parents=True, exist_ok=True)
    try:
        COMMANDS[args.command](cfg, args.out)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
