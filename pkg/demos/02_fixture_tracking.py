"""Track energy over a powercap fixture tree, no hardware required.

The powercap probe reads any directory laid out like
/sys/class/powercap: zone dirs named intel-rapl:<N> holding name,
energy_uj and max_energy_range_uj files, with intel-rapl:<N>:<M> subzone
dirs nested inside. Building such a tree in a temp directory gives a fully
scripted backend, which is also exactly how the test suite works.
"""

import tempfile
from pathlib import Path

from jouletrack import EnergyTracker, PowercapProbe, print_energy, save_csv


def write_zone(zone_dir: Path, name: str, energy: int, max_range: int) -> Path:
    zone_dir.mkdir(parents=True, exist_ok=True)
    (zone_dir / "name").write_text(name + "\n")
    (zone_dir / "energy_uj").write_text(f"{energy}\n")
    (zone_dir / "max_energy_range_uj").write_text(f"{max_range}\n")
    return zone_dir


with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp) / "powercap"
    root.mkdir()

    # One socket: a package zone with a dram subzone, like real hardware.
    pkg = write_zone(root / "intel-rapl:0", "package-0", 1_000_000, 262_143_328_850)
    dram = write_zone(pkg / "intel-rapl:0:1", "dram", 200_000, 65_712_999_613)

    probe = PowercapProbe(root)
    print("support:", probe.check_support().message)
    print("channels:", [c.id for c in probe.discover()])

    # Note the id scheme: cpu:<socket>:<domain>[:<sub>]. The dram channel's
    # id extends its parent's, and on real hardware the parent counter
    # already includes the subzone - never add the two columns together.

    tracker = EnergyTracker(cpu_probe=probe, label="demo")
    tracker.start()

    # "Run the workload": here we just script the counters forward.
    (pkg / "energy_uj").write_text("4000000\n")
    (dram / "energy_uj").write_text("450000\n")

    tracker.stop()
    measurement = tracker.calculate_energy()

    # Console block: one line per channel, joules with 6 fractional digits.
    print()
    print(print_energy(measurement))

    # CSV: header once, one row appended per saved measurement.
    out = Path(tmp) / "runs.csv"
    save_csv(measurement, out)
    save_csv(measurement, out)
    print()
    print(out.read_text(), end="")
