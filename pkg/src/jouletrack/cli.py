"""Command-line front end: check, list, measure, compare.

``measure`` wraps a child process: RAPL counters are system-wide, so the
reported energy is whole-host consumption during the child's lifetime, not
energy attributed to the child alone. Machine-readable output goes to
stdout, diagnostics to stderr, and exit codes are a fixed function of the
outcome class (0 ok, 2 unsupported host, 3 CSV schema clash, 4 bad input,
5 degenerate statistics, 127 spawn failure, otherwise the child's code).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

from .errors import (
    EnergyError,
    SchemaError,
    UnsupportedHostError,
    ZeroVarianceError,
)
from .gpu import FAKE_ENV_VAR, FakeGpuDriver, GpuDriver, NvmlDriver, gpu_discover
from .harness import comparison_table, wilcoxon_signed_rank
from .powercap import PowercapProbe, check_support
from .report import load_csv, print_energy, save_csv
from .tracker import EnergyTracker

EXIT_OK = 0
EXIT_UNSUPPORTED = 2
EXIT_SCHEMA = 3
EXIT_INPUT = 4
EXIT_DEGENERATE = 5
EXIT_SPAWN = 127


def default_gpu_driver() -> GpuDriver | None:
    """Scripted fake driver when ENERGY_GPU_FAKE is set, else real or None."""
    fake_path = os.environ.get(FAKE_ENV_VAR)
    if fake_path:
        return FakeGpuDriver.from_file(fake_path)
    return NvmlDriver.try_load()


def _cmd_check(_args: argparse.Namespace) -> int:
    report = check_support()
    if report.supported:
        print(f"cpu: supported root={report.root} zones={report.zones}")
        probe = PowercapProbe()
        for channel in probe.discover():
            print(f"  {channel.id}")
    else:
        print(f"cpu: unsupported reason={report.reason}")
        print(report.message, file=sys.stderr)
    discovery = gpu_discover(default_gpu_driver())
    if discovery.degraded:
        print("gpu: unavailable")
    else:
        print(f"gpu: {len(discovery.channels)} device(s)")
        for channel in discovery.channels:
            print(f"  {channel.id}")
    return EXIT_OK if report.supported else EXIT_UNSUPPORTED


def _cmd_list(_args: argparse.Namespace) -> int:
    report = check_support()
    if not report.supported:
        print(report.message, file=sys.stderr)
        return EXIT_UNSUPPORTED
    probe = PowercapProbe()
    for channel in probe.discover():
        print(channel.id)
    for channel in gpu_discover(default_gpu_driver()).channels:
        print(channel.id)
    return EXIT_OK


def _wait_with_checkpoints(
    proc: subprocess.Popen, tracker: EnergyTracker, period_ms: int | None
) -> int:
    if period_ms is None:
        return proc.wait()
    period = period_ms / 1000.0
    while True:
        try:
            return proc.wait(timeout=period)
        except subprocess.TimeoutExpired:
            tracker.checkpoint()


def _cmd_measure(args: argparse.Namespace, command: list[str]) -> int:
    if not command:
        print("measure: no command given after --", file=sys.stderr)
        return EXIT_INPUT
    if args.reps < 1:
        print(f"measure: --reps must be >= 1, got {args.reps}", file=sys.stderr)
        return EXIT_INPUT
    if args.idle < 0:
        print(f"measure: --idle must be >= 0, got {args.idle}", file=sys.stderr)
        return EXIT_INPUT
    if args.checkpoint_ms is not None and args.checkpoint_ms < 1:
        print(
            f"measure: --checkpoint-ms must be >= 1, got {args.checkpoint_ms}",
            file=sys.stderr,
        )
        return EXIT_INPUT
    label = args.tag if args.tag is not None else Path(command[0]).name
    try:
        tracker = EnergyTracker(
            cpu_probe=PowercapProbe(),
            gpu_driver=default_gpu_driver(),
            label=label,
        )
    except UnsupportedHostError as exc:
        print(f"measure: unsupported host: {exc.report.message}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    measurement = None
    child_code = EXIT_OK
    for rep in range(args.reps):
        if rep > 0:
            time.sleep(args.idle)
        tracker.reset()
        tracker.start()
        try:
            proc = subprocess.Popen(command)
        except OSError as exc:
            print(f"measure: cannot spawn {command[0]!r}: {exc}", file=sys.stderr)
            return EXIT_SPAWN
        try:
            returncode = _wait_with_checkpoints(proc, tracker, args.checkpoint_ms)
        except BaseException:
            proc.kill()
            proc.wait()
            raise
        tracker.stop()
        measurement = tracker.calculate_energy()
        if args.out is not None:
            try:
                save_csv(measurement, args.out)
            except SchemaError as exc:
                print(f"measure: {exc}", file=sys.stderr)
                return EXIT_SCHEMA
            except OSError as exc:
                print(f"measure: cannot write {args.out}: {exc}", file=sys.stderr)
                return EXIT_INPUT
        # Child killed by signal N surfaces as the shell convention 128+N.
        child_code = returncode if returncode >= 0 else 128 - returncode
    assert measurement is not None
    print(print_energy(measurement))
    return child_code


def _cmd_compare(args: argparse.Namespace) -> int:
    try:
        columns_a, rows_a = load_csv(args.file_a)
        columns_b, rows_b = load_csv(args.file_b)
    except OSError as exc:
        print(f"compare: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SchemaError as exc:
        print(f"compare: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if columns_a != columns_b:
        print("compare: CSV schemas differ between the two files", file=sys.stderr)
        return EXIT_SCHEMA
    if len(rows_a) != len(rows_b):
        print(
            f"compare: row counts differ ({len(rows_a)} vs {len(rows_b)}); "
            "series must be paired by repetition index",
            file=sys.stderr,
        )
        return EXIT_INPUT
    if args.metric not in columns_a:
        print(
            f"compare: unknown column {args.metric!r}; available: "
            f"{', '.join(columns_a)}",
            file=sys.stderr,
        )
        return EXIT_INPUT
    try:
        series_a = [float(row[args.metric]) for row in rows_a]
        series_b = [float(row[args.metric]) for row in rows_b]
    except ValueError:
        print(f"compare: column {args.metric!r} has non-numeric cells", file=sys.stderr)
        return EXIT_INPUT
    try:
        comparison = wilcoxon_signed_rank(series_a, series_b)
    except ZeroVarianceError as exc:
        print(f"compare: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"compare: {exc}", file=sys.stderr)
        return EXIT_INPUT
    task = rows_a[0]["label"] if rows_a else "series"
    print(comparison_table(task, comparison))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jouletrack",
        description=(
            "Measure host energy (CPU RAPL domains, GPU total energy) around "
            "commands and compare measurement series."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("check", help="report host support for energy measurement")
    sub.add_parser("list", help="list discoverable energy channels")

    measure = sub.add_parser(
        "measure",
        help="measure whole-host energy while a command runs",
        description=(
            "Runs the command after -- and reports whole-host energy over "
            "its lifetime; RAPL counters are system-wide, so this is not "
            "per-process attribution."
        ),
    )
    measure.add_argument("--tag", help="row label (default: command basename)")
    measure.add_argument("--out", help="CSV file to append one row per repetition")
    measure.add_argument("--reps", type=int, default=1, help="repetition count")
    measure.add_argument(
        "--idle", type=float, default=0.0, help="idle seconds between repetitions"
    )
    measure.add_argument(
        "--checkpoint-ms",
        type=int,
        nargs="?",
        const=1000,
        default=None,
        help="split the interval every N ms to bound counter-wrap error "
        "(default period 1000 when the flag is given bare)",
    )

    compare = sub.add_parser(
        "compare", help="signed-rank comparison of one column of two CSVs"
    )
    compare.add_argument("file_a")
    compare.add_argument("file_b")
    compare.add_argument(
        "--metric", required=True, help="column to compare, e.g. cpu:0:package-0_J"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    command: list[str] = []
    if argv and argv[0] == "measure" and "--" in argv:
        split = argv.index("--")
        command = argv[split + 1 :]
        argv = argv[:split]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.subcommand == "check":
            return _cmd_check(args)
        if args.subcommand == "list":
            return _cmd_list(args)
        if args.subcommand == "measure":
            return _cmd_measure(args, command)
        return _cmd_compare(args)
    except SchemaError as exc:
        print(f"jouletrack: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except UnsupportedHostError as exc:
        print(f"jouletrack: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except EnergyError as exc:
        print(f"jouletrack: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
