"""Command-line driver: ``oamris <experiment> [--config FILE] [--out DIR] [--seed N] [--threads N]``.

Exit codes: 0 ok, 1 configuration error, 2 solver stagnation, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import experiments
from .config import ConfigError, load_config

EXPERIMENTS = ("convergence", "sweep-zr", "sweep-q", "sweep-power", "ber", "selftest")
EXIT_OK, EXIT_CONFIG, EXIT_STAGNATION, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("oamris")


def write_csv(path: Path, header, rows, cfg, experiment):
    with open(path, "w", newline="") as fh:
        fh.write(f"# oamris {experiment}\n")
        fh.write(f"# config-sha256: {cfg.fingerprint()} seed: {cfg['run.seed']}\n")
        fh.write(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([experiments.format_value(v) for v in row])
    log.info("wrote %s", path)


def run(experiment: str, config=None, out=".", seed=None, threads=None) -> int:
    if experiment == "selftest":
        from .selftest import run_selftest
        return EXIT_OK if run_selftest(verbose=True) else 1

    overrides = {}
    if seed is not None:
        overrides["run.seed"] = seed
    if threads is not None:
        overrides["run.threads"] = threads
    cfg = load_config(config, overrides)
    threads = cfg["run.threads"]
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)

    if experiment == "convergence":
        header, rows, runs = experiments.convergence(cfg)
        write_csv(out / "convergence.csv", header, rows, cfg, experiment)
    elif experiment in ("sweep-zr", "sweep-q"):
        fn = experiments.sweep_zr if experiment == "sweep-zr" else experiments.sweep_q
        runs = []
        for scheme, (header, rows, rs) in fn(cfg, threads).items():
            write_csv(out / f"{experiment}_{scheme}.csv", header, rows, cfg, experiment)
            runs += rs
    elif experiment == "sweep-power":
        header, rows, runs = experiments.sweep_power(cfg, threads)
        write_csv(out / "sweep-power.csv", header, rows, cfg, experiment)
    elif experiment == "ber":
        curve, runs = experiments.ber(cfg, threads)
        lo, hi = curve.ci("eve")
        blo, bhi = curve.ci("bob")
        rows = [[s, curve.ber_bob[i], curve.ber_eve[i], lo[i], hi[i], curve.trials, blo[i], bhi[i]]
                for i, s in enumerate(curve.snr_db)]
        header = ["snr_db", "ber_bob", "ber_eve", "ci_low", "ci_high", "trials", "bob_ci_low", "bob_ci_high"]
        write_csv(out / "ber.csv", header, rows, cfg, experiment)
    else:
        raise ConfigError(f"unknown experiment {experiment!r}")

    if any(r.stagnated for r in runs):
        log.warning("phase optimiser stagnated in at least one run")
        return EXIT_STAGNATION
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="oamris", description="RIS-assisted OAM secrecy experiments")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="config file overriding the shipped defaults")
    parser.add_argument("--out", default=".", help="output directory for CSV files")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(args.experiment, args.config, args.out, args.seed, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
