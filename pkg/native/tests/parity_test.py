#!/usr/bin/env python3
"""Byte-parity check between the native boundary and the Python core.

Runs the compiled five-call snippet over a fixture powercap tree with a
frozen clock, then produces the equivalent measurement through the Python
package with the same injected clock, and requires the two CSV files to be
byte-identical.
"""

from __future__ import annotations

import os
import subprocess
import sys
import tempfile
from pathlib import Path

WALL_MS = 1700000000000


def make_tree(base: Path) -> Path:
    pkg = base / "intel-rapl:0"
    dram = pkg / "intel-rapl:0:1"
    dram.mkdir(parents=True)
    (pkg / "name").write_text("package-0\n")
    (pkg / "energy_uj").write_text("1000000\n")
    (pkg / "max_energy_range_uj").write_text("262143328850\n")
    (dram / "name").write_text("dram\n")
    (dram / "energy_uj").write_text("200000\n")
    (dram / "max_energy_range_uj").write_text("65712999613\n")
    return base


def python_reference(root: Path, out: Path) -> None:
    from jouletrack import EnergyTracker, PowercapProbe, save_csv  # noqa: PLC0415

    tracker = EnergyTracker(
        cpu_probe=PowercapProbe(root),
        gpu_driver=None,
        label="measurement",
        mono_ns=lambda: 0,
        wall_ms=lambda: WALL_MS,
    )
    tracker.start()
    tracker.stop()
    save_csv(tracker.calculate_energy(), out)


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: parity_test.py <snippet-binary>", file=sys.stderr)
        return 2
    try:
        import jouletrack  # noqa: F401
    except ImportError:
        print(
            "reference package not importable; install it first "
            "(pip install -e . from the repository root)",
            file=sys.stderr,
        )
        return 77  # ctest skip code
    snippet = Path(sys.argv[1]).resolve()

    with tempfile.TemporaryDirectory() as tmp:
        base = Path(tmp)
        root = make_tree(base / "powercap")

        env = dict(
            os.environ,
            ENERGY_PROBE_ROOT=str(root),
            ENERGY_DISABLE_GPU="1",
            ENERGY_FAKE_CLOCK=str(WALL_MS),
        )
        native_dir = base / "native"
        native_dir.mkdir()
        subprocess.run([str(snippet)], cwd=native_dir, env=env, check=True)
        native_csv = (native_dir / "file_name.csv").read_bytes()

        reference_csv_path = base / "reference.csv"
        python_reference(root, reference_csv_path)
        reference_csv = reference_csv_path.read_bytes()

    if native_csv != reference_csv:
        print("parity FAILED", file=sys.stderr)
        print(f"native:    {native_csv!r}", file=sys.stderr)
        print(f"reference: {reference_csv!r}", file=sys.stderr)
        return 1
    print(f"parity OK: {len(native_csv)} identical bytes")
    print(native_csv.decode(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
