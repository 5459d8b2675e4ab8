"""Command-line front end: run experiments, benchmark, diff trace dumps.

Exit codes: 0 success (diff: files identical), 1 experiment failure or
diff divergence, 2 bad inputs.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional

from . import bench, experiments
from .environment import DeviceDbError, ExperimentRunError, load_ddb, run_experiment
from .store import store_backend
from .timeline import SimConfig, SyncMode
from .trace import export_jsonl, export_vcd, read_jsonl


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rtsim",
        description="Functional simulator for real-time control software.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a bundled experiment in simulation")
    p_run.add_argument("experiment", help="bundled experiment name (e.g. demo)")
    p_run.add_argument("--ddb", default=None, help="device database JSON (default: bundled demo DDB)")
    p_run.add_argument("--config", choices=["regular", "optimistic"], default="regular")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--vcd", default=None, help="write waveform dump to this path")
    p_run.add_argument("--jsonl", default=None, help="write JSONL event dump to this path")

    p_bench = sub.add_parser("bench", help="benchmarks")
    bench_sub = p_bench.add_subparsers(dest="bench_command", required=True)

    p_scan = bench_sub.add_parser("scan", help="run a scan scenario under both configurations")
    p_scan.add_argument("--points", type=int, default=20)
    p_scan.add_argument("--samples", type=int, default=100)
    buf = p_scan.add_mutually_exclusive_group()
    buf.add_argument("--buffered", action="store_true")
    buf.add_argument("--unbuffered", action="store_true")
    p_scan.add_argument("--delay-mu", type=int, default=10_000, help="fixed delay per sample")
    p_scan.add_argument("--pulses", type=int, default=3, help="TTL pulses per sample")
    p_scan.add_argument("--dds-sets", type=int, default=1, help="DDS writes per sample")
    p_scan.add_argument("--pulse-mu", type=int, default=1000)
    p_scan.add_argument("--seed", type=int, default=0)
    p_scan.add_argument("--csv", default=None, help="write result rows to this CSV file")
    p_scan.add_argument("--ref-csv", default=None,
                        help="CSV with columns scenario,t_ref_mu (hardware reference "
                             "timeline lengths); adds a relative_error column")

    p_store = bench_sub.add_parser("store", help="compare event-store backends")
    p_store.add_argument("--events", type=int, default=1_000_000)
    p_store.add_argument("--pulls", type=int, default=100_000)
    p_store.add_argument("--csv", default=None)

    p_diff = sub.add_parser("diff", help="compare two JSONL event dumps")
    p_diff.add_argument("a")
    p_diff.add_argument("b")
    p_diff.add_argument("--max-diffs", type=int, default=10)

    return parser


def _print_summary(run) -> None:
    stats = run.stats
    start = stats.start_cursor_after_first_sync
    print(f"config:          {run.config.mode.value} (slack {run.config.sync_slack_mu} MU, seed {run.config.seed})")
    print(f"store backend:   {store_backend()}")
    print(f"start cursor (after first sync): {start if start is not None else 'never synced'}")
    print(f"final cursor:    {stats.final_cursor}")
    print(f"timeline length: {stats.timeline_length_mu} MU")
    print(f"events:          {stats.event_count}")
    print(f"syncs:           {stats.sync_count}")
    print(f"wall clock:      {stats.wall_clock_ns} ns")


def _cmd_run(args) -> int:
    try:
        exp = experiments.get_experiment(args.experiment)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    try:
        ddb = load_ddb(args.ddb) if args.ddb else experiments.load_demo_ddb()
    except DeviceDbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = SimConfig(mode=SyncMode(args.config), seed=args.seed)
    print(f"experiment:      {exp.name}")
    try:
        run = run_experiment(exp, ddb, config)
    except ExperimentRunError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _print_summary(exc.run)
        return 1
    _print_summary(run)
    if args.vcd:
        export_vcd(run, args.vcd)
        print(f"wrote VCD:       {args.vcd}")
    if args.jsonl:
        export_jsonl(run, args.jsonl)
        print(f"wrote JSONL:     {args.jsonl}")
    return 0


def _write_csv(path: str, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _read_reference_mu(path: str, scenario_name: str) -> int:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            if row.get("scenario") == scenario_name:
                return int(row["t_ref_mu"])
    raise KeyError(f"no t_ref_mu row for scenario {scenario_name!r} in {path}")


def _cmd_bench_scan(args) -> int:
    scenario = bench.BenchScenario(
        name="scan",
        points=args.points,
        samples_per_point=args.samples,
        delay_per_sample_mu=args.delay_mu,
        pulses_per_sample=args.pulses,
        dds_sets_per_sample=args.dds_sets,
        pulse_mu=args.pulse_mu,
        buffered=bool(args.buffered),
    )
    t_ref_mu = None
    if args.ref_csv:
        try:
            t_ref_mu = _read_reference_mu(args.ref_csv, scenario.name)
        except (OSError, KeyError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    report = bench.run_scenario_both(scenario, seed=args.seed)
    rows = bench.report_rows(report, t_ref_mu=t_ref_mu)
    for row in rows:
        print("  ".join(f"{k}={v}" for k, v in row.items()))
    delta = report.sync_law_delta()
    print(f"regular - optimistic length: {delta} MU "
          f"({report.sync_count} syncs, slack applies to {report.sync_count - 1} in-window)")
    if args.csv:
        _write_csv(args.csv, rows)
        print(f"wrote CSV: {args.csv}")
    return 0


def _cmd_bench_store(args) -> int:
    rows = bench.bench_event_store(args.events, args.pulls)
    for row in rows:
        print("  ".join(f"{k}={v}" for k, v in row.items()))
    if args.csv:
        _write_csv(args.csv, rows)
        print(f"wrote CSV: {args.csv}")
    return 0


def _summary_deltas(sa: Optional[dict], sb: Optional[dict]) -> list[str]:
    if sa == sb:
        return []
    if sa is None or sb is None:
        return [f"summary present only in {'B' if sa is None else 'A'}"]
    deltas = []
    for key in sorted(set(sa) | set(sb)):
        if sa.get(key) != sb.get(key):
            deltas.append(f"summary.{key}: {sa.get(key)!r} != {sb.get(key)!r}")
    return deltas


def _cmd_diff(args) -> int:
    try:
        recs_a, sum_a = read_jsonl(args.a)
        recs_b, sum_b = read_jsonl(args.b)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    divergences = []
    for i in range(max(len(recs_a), len(recs_b))):
        a = recs_a[i] if i < len(recs_a) else None
        b = recs_b[i] if i < len(recs_b) else None
        if a != b:
            divergences.append((i, a, b))
        if len(divergences) >= args.max_diffs:
            break

    for i, a, b in divergences:
        print(f"record {i}:")
        print(f"  A: {a}")
        print(f"  B: {b}")
    if len(recs_a) != len(recs_b):
        print(f"record counts: A={len(recs_a)} B={len(recs_b)}")
    deltas = _summary_deltas(sum_a, sum_b)
    for line in deltas:
        print(line)

    identical = not divergences and len(recs_a) == len(recs_b) and not deltas
    if identical:
        print("identical")
        return 0
    return 1


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "bench":
        if args.bench_command == "scan":
            return _cmd_bench_scan(args)
        return _cmd_bench_store(args)
    return _cmd_diff(args)


if __name__ == "__main__":
    sys.exit(main())
