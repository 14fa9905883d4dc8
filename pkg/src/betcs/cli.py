"""Command line interface.

Subcommands:
  simulate  run seeded replicated experiments, write records.csv + summary.csv
  track     read one sample per line, print "t,lower,upper" per step
  compare   join per-step records from several runs into one wide table

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import harness
from .harness import ALGORITHMS, ExperimentSpec, SLOW_CONTINUOUS_HORIZON

_DEFAULT_ALGOS = "co96,a_co96,r70,bernstein,mix"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="betcs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a replicated experiment")
    sim.add_argument("--dist", required=True, help="bernoulli:p | beta:a,b | file:path")
    sim.add_argument("--T", type=int, required=True, help="horizon (samples per run)")
    sim.add_argument("--reps", type=int, default=1, help="number of replications")
    sim.add_argument("--delta", type=float, default=0.05)
    sim.add_argument("--algos", default=_DEFAULT_ALGOS, help="comma-separated subset of " + ",".join(ALGORITHMS))
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--precision", type=float, default=1e-4)
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--jobs", type=int, default=1, help="parallel replication workers")
    sim.add_argument(
        "--filtered",
        action="store_true",
        help="also write summary_filtered.csv over the first 5 fully-covered replications",
    )
    sim.add_argument(
        "--allow-slow-continuous",
        action="store_true",
        help=f"permit continuous sources beyond T={SLOW_CONTINUOUS_HORIZON} "
        "(O(t)-per-step wealth evaluations)",
    )

    trk = sub.add_parser("track", help="track a stream of samples")
    trk.add_argument("--algo", default="co96", choices=ALGORITHMS)
    trk.add_argument("--delta", type=float, default=0.05)
    trk.add_argument("--precision", type=float, default=1e-4)
    trk.add_argument("--in", dest="infile", default=None, help="sample file (default: stdin)")
    trk.add_argument("--out", default=None, help="output file (default: stdout)")

    cmp_ = sub.add_parser("compare", help="join record CSVs into one wide table")
    cmp_.add_argument("records", nargs="+", help="records.csv files to join")
    cmp_.add_argument("--out", default=None, help="output file (default: stdout)")
    return parser


def _cmd_simulate(args) -> int:
    spec = ExperimentSpec(
        distribution=args.dist,
        horizon=args.T,
        replications=args.reps,
        delta=args.delta,
        algorithms=tuple(a.strip() for a in args.algos.split(",") if a.strip()),
        seed=args.seed,
        precision=args.precision,
    )
    if (
        not spec.is_binary_source
        and spec.horizon > SLOW_CONTINUOUS_HORIZON
        and not args.allow_slow_continuous
    ):
        raise _UsageError(
            f"continuous source with T={spec.horizon} > {SLOW_CONTINUOUS_HORIZON} "
            "needs --allow-slow-continuous (exact trackers cost O(t) per step there)"
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "records.csv", "w", newline="", encoding="utf-8") as f:
        result = harness.run_experiment(
            spec, records=f, workers=max(args.jobs, 1), filtered_view=args.filtered
        )
    with open(out_dir / "summary.csv", "w", newline="", encoding="utf-8") as f:
        harness.write_summary_csv(f, result.summaries)
    if args.filtered and result.filtered is not None:
        with open(out_dir / "summary_filtered.csv", "w", newline="", encoding="utf-8") as f:
            harness.write_summary_csv(f, result.filtered)
    for algo, s in result.summaries.items():
        mc = "n/a" if s.miscoverage is None else f"{s.miscoverage:.4f}"
        print(f"{algo}: reps={s.reps_done} failures={s.failures} miscoverage={mc}")
    if result.failures:
        print(f"{result.failures} replication failures", file=sys.stderr)
        return 2
    return 0


def _cmd_track(args) -> int:
    tracker = harness.make_tracker(args.algo, args.delta, args.precision)
    src = open(args.infile, "r", encoding="utf-8") if args.infile else sys.stdin
    dst = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for line in src:
            line = line.strip()
            if not line:
                continue
            try:
                x = float(line)
            except ValueError:
                raise _UsageError(f"bad sample line: {line!r}") from None
            if not (0.0 <= x <= 1.0):
                raise _UsageError(f"sample outside [0, 1]: {line!r}")
            lower, upper = tracker.update(x)
            print(f"{tracker.t},{lower:.10g},{upper:.10g}", file=dst)
    finally:
        if args.infile:
            src.close()
        if args.out:
            dst.close()
    return 0


def _cmd_compare(args) -> int:
    tables: dict[tuple[str, str], dict[str, tuple[str, str]]] = {}
    algos: list[str] = []
    for path in args.records:
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            missing = set(harness.RECORD_COLUMNS) - set(reader.fieldnames or ())
            if missing:
                raise _UsageError(f"{path}: missing columns {sorted(missing)}")
            for row in reader:
                key = (row["run"], row["t"])
                algo = row["algo"]
                if algo not in algos:
                    algos.append(algo)
                tables.setdefault(key, {})[algo] = (row["lower"], row["upper"])
    dst = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(dst)
        header = ["run", "t"]
        for algo in algos:
            header += [f"{algo}_lower", f"{algo}_upper"]
        writer.writerow(header)
        for run, t in sorted(tables, key=lambda k: (int(k[0]), int(k[1]))):
            row = [run, t]
            for algo in algos:
                lo, up = tables[(run, t)].get(algo, ("", ""))
                row += [lo, up]
            writer.writerow(row)
    finally:
        if args.out:
            dst.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "track":
            return _cmd_track(args)
        return _cmd_compare(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
