"""Command line: ``noisyclust run`` and ``noisyclust plot``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .plots import emit_plots
from .runner import read_rows, run_experiment

EXIT_CONFIG = 2
EXIT_IO = 3


def _baif_pulls(path: Path) -> list[int]:
    if not path.exists():
        return []
    with path.open(newline="", encoding="utf-8") as fh:
        return [int(r["pulls"]) for r in csv.DictReader(fh)]


def _cmd_run(args) -> int:
    config = load_config(args.config).with_overrides(args.seed, args.trials, args.out)
    out = Path(config.out_dir)
    rows, summary = run_experiment(config)
    plots = emit_plots(rows, out, _baif_pulls(out / "baif.csv"))
    (out / "summary.json").write_text(json.dumps({"grid": summary, "plots": plots}, indent=1),
                                      encoding="utf-8")
    for s in summary:
        print(f"{s['algorithm']} n={s['n']} k={s['k']} delta={s['delta']:g}: "
              f"pairs={s['distinct_pairs_mean']:.0f}±{s['distinct_pairs_std']:.0f} "
              f"exact={s['exact_recovery_rate']:.2f} q_hat={s['q_hat_mean']:.3f}")
    for note in plots["notes"]:
        print(f"note: {note}")
    print(f"wrote {out / 'results.csv'}")
    return 0


def _cmd_plot(args) -> int:
    results = Path(args.results)
    try:
        rows = read_rows(results)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    plots = emit_plots(rows, args.out, _baif_pulls(results.with_name("baif.csv")))
    for name in plots["written"]:
        print(f"wrote {Path(args.out) / name}")
    for note in plots["notes"]:
        print(f"note: {note}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="noisyclust", description="Noisy-oracle clustering benchmarks")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment sweep from a JSON config")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--trials", type=int)
    run.add_argument("--out")
    run.set_defaults(func=_cmd_run)
    plot = sub.add_parser("plot", help="draw SVG charts from a results CSV")
    plot.add_argument("--results", required=True)
    plot.add_argument("--out", required=True)
    plot.set_defaults(func=_cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
