"""Measure a real workload on a real RAPL host.

Runs only where /sys/class/powercap has readable intel-rapl zones (Linux
on a reasonably modern Intel CPU, often needing elevated privileges).
Everywhere else it explains why and exits cleanly. GPU channels appear
automatically when the NVIDIA management library is present.

Remember what the numbers mean: RAPL counters are system-wide, so this is
host energy during the workload, not energy attributed to this process.
"""

import sys

from jouletrack import (
    EnergyTracker,
    NvmlDriver,
    PowercapProbe,
    check_support,
    print_energy,
)

report = check_support()
if not report.supported:
    print(f"cannot measure on this host ({report.reason}): {report.message}")
    sys.exit(0)

print(f"powercap root: {report.root} ({report.zones} zones)")
probe = PowercapProbe()
for channel in probe.discover():
    print(f"  {channel.id}  (range {channel.max_energy_range} uJ)")

tracker = EnergyTracker(
    cpu_probe=probe,
    gpu_driver=NvmlDriver.try_load(),
    label="spin-demo",
)

tracker.start()
# ~1 second of busy work, checkpointed halfway to keep intervals short.
total = sum(i * i for i in range(5_000_000))
tracker.checkpoint()
total += sum(i * i for i in range(5_000_000))
tracker.stop()

print()
print(print_energy(tracker.calculate_energy()))
print(f"(busy-work checksum: {total % 997})")
