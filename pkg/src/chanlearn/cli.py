"""Command-line interface.

Subcommands:

* ``chanlearn decoder``: run the decoder-learning task and emit CSV
  (optionally a learning-curve figure next to it).
* ``chanlearn codebook``: run the codebook-selection task, same outputs.
* ``chanlearn report``: run every algorithm of a task on one shared
  configuration, writing per-algorithm CSVs, a summary CSV, and a
  comparison figure into an output directory.

Flags override values from ``--config FILE`` (a JSON object with the same
keys). Exit status is 0 on success, 2 on configuration or runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .config import (CODEBOOK_ALGOS, DECODER_ALGOS, ConfigError, ExperimentConfig,
                     load_config_file, parse_config)
from .harness import (RoundRecord, run_codebook_experiment, run_decoder_experiment,
                      write_csv)

__all__ = ["main", "entry_point"]


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="JSON config file")
    parser.add_argument("--algo", dest="algorithm",
                        help="algorithm (decoder: oomd|ogd|ls, codebook: oomd|exp3|random)")
    parser.add_argument("--T", type=int, help="number of rounds")
    parser.add_argument("--d", type=int, help="code length")
    parser.add_argument("--M", type=int, help="codewords per codebook")
    parser.add_argument("--N", type=int, help="codebooks in the super-codebook")
    parser.add_argument("--mu", type=float, help="mixing factor")
    parser.add_argument("--mu-mode", dest="mu_mode", choices=["geometric", "constant"])
    parser.add_argument("--dist", choices=["gmd", "lmd"], help="innovation mixture family")
    parser.add_argument("--K", type=int, help="mixture components")
    parser.add_argument("--rho", type=float, help="innovation mean range (0, rho)")
    parser.add_argument("--snr-db", dest="snr_db", type=float, help="decoder-task SNR in dB")
    parser.add_argument("--channel", choices=["markov", "rayleigh", "awgn"])
    parser.add_argument("--gamma-x", dest="gamma_x", type=float, help="codeword norm bound")
    parser.add_argument("--D", type=float, help="decoder kernel Frobenius radius")
    parser.add_argument("--eta", type=float, help="log-barrier selector learning rate")
    parser.add_argument("--seeds", help="comma-separated seed list, e.g. 0,1,2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanlearn",
        description="Online decoder learning and codebook selection over "
                    "time-correlated channels.")
    sub = parser.add_subparsers(dest="command", required=True)
    for task in ("decoder", "codebook"):
        p = sub.add_parser(task, help=f"run the {task} task")
        _add_common_flags(p)
        p.add_argument("--out", metavar="PATH", help="CSV output path (default stdout)")
        p.add_argument("--fig", metavar="PATH",
                       help="also render the learning-curve figure to PATH")
    rep = sub.add_parser("report", help="run all algorithms of a task and render a comparison")
    rep.add_argument("--task", required=True, choices=["decoder", "codebook"])
    _add_common_flags(rep)
    rep.add_argument("--out-dir", required=True, metavar="DIR",
                     help="directory for per-algorithm CSVs, summary, and figure")
    return parser


_FLAG_KEYS = ("algorithm", "T", "d", "M", "N", "mu", "mu_mode", "dist", "K",
              "rho", "snr_db", "channel", "gamma_x", "D", "eta", "seeds")


def _merge_config(args: argparse.Namespace, task: str,
                  extra: dict | None = None) -> ExperimentConfig:
    source: dict = {}
    if args.config:
        source.update(load_config_file(args.config))
    for key in _FLAG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            source[key] = value
    if extra:
        source.update(extra)
    source["task"] = task
    return parse_config(source)


def _run_task(cfg: ExperimentConfig) -> list[RoundRecord]:
    if cfg.task == "decoder":
        return run_decoder_experiment(cfg)
    return run_codebook_experiment(cfg)


def _emit(records: list[RoundRecord], out: str | None) -> None:
    if out is None:
        extra_keys = list(records[0].extra)
        writer = csv.writer(sys.stdout)
        writer.writerow(["t", "loss", "running_avg", *extra_keys])
        for rec in records:
            writer.writerow([rec.t, repr(float(rec.loss)), repr(float(rec.running_avg)),
                             *[rec.extra[k] for k in extra_keys]])
    else:
        write_csv(records, out)


def _final_stats(records: list[RoundRecord]) -> tuple[float, float]:
    """Across-seed mean and standard error of the final running average."""
    from .plots import curves_by_seed

    finals = np.array([curve[-1] for curve in curves_by_seed(records).values()])
    se = finals.std(ddof=1) / np.sqrt(len(finals)) if len(finals) > 1 else 0.0
    return float(finals.mean()), float(se)


def _cmd_run(args: argparse.Namespace, task: str) -> int:
    cfg = _merge_config(args, task, {"out": args.out})
    records = _run_task(cfg)
    _emit(records, cfg.out)
    if args.fig:
        from .plots import render_learning_curve
        render_learning_curve(records, args.fig,
                              title=f"{task}: {cfg.algorithm}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    algos = DECODER_ALGOS if args.task == "decoder" else CODEBOOK_ALGOS
    from .plots import mean_curve, render_comparison

    curves: dict = {}
    summary_rows = []
    for algo in algos:
        cfg = _merge_config(args, args.task, {"algorithm": algo})
        records = _run_task(cfg)
        write_csv(records, out_dir / f"{args.task}_{algo}.csv")
        curves[algo] = mean_curve(records)
        mean, se = _final_stats(records)
        summary_rows.append((algo, mean, se))
        print(f"{args.task} {algo}: final avg SER {mean:.6f} (se {se:.6f})")
    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algorithm", "final_running_avg_mean", "final_running_avg_se"])
        for algo, mean, se in summary_rows:
            writer.writerow([algo, repr(mean), repr(se)])
    render_comparison(curves, out_dir / f"{args.task}_comparison.png",
                      title=f"{args.task} task")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "decoder":
            return _cmd_run(args, "decoder")
        if args.command == "codebook":
            return _cmd_run(args, "codebook")
        return _cmd_report(args)
    except (ConfigError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"chanlearn: error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
