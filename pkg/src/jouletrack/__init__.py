"""Host energy measurement toolkit.

Reads CPU RAPL power-domain counters from the Linux powercap tree and GPU
total-energy counters, corrects counter wraparound, and aggregates tracked
intervals into labeled measurements with CSV reporting and a statistical
benchmark harness on top.
"""

from .errors import (
    CorruptCounterError,
    EnergyError,
    LifecycleError,
    NothingMeasuredError,
    ParseError,
    ProbeReadError,
    RepetitionError,
    SchemaError,
    UnknownChannelError,
    UnsupportedHostError,
    ZeroVarianceError,
)
from .probe import (
    Channel,
    ChannelKind,
    CounterSample,
    FakeProbe,
    Probe,
    SupportReport,
    corrected_delta,
)
from .powercap import (
    PowercapProbe,
    PowercapZone,
    check_support,
    discover_zones,
    read_energy_uj,
)
from .gpu import (
    FakeGpuDriver,
    GpuDiscovery,
    GpuDriver,
    GpuProbe,
    GpuUnavailableError,
    NvmlDriver,
    gpu_discover,
    gpu_read,
)
from .tracker import EnergyTracker, Measurement
from .report import format_csv, load_csv, parse_csv, print_energy, save_csv
from .harness import (
    RepetitionPlan,
    SeriesComparison,
    comparison_table,
    mean,
    run_repetitions,
    wilcoxon_signed_rank,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ChannelKind",
    "CounterSample",
    "CorruptCounterError",
    "EnergyError",
    "EnergyTracker",
    "FakeGpuDriver",
    "FakeProbe",
    "GpuDiscovery",
    "GpuDriver",
    "GpuProbe",
    "GpuUnavailableError",
    "LifecycleError",
    "Measurement",
    "NothingMeasuredError",
    "NvmlDriver",
    "ParseError",
    "PowercapProbe",
    "PowercapZone",
    "Probe",
    "ProbeReadError",
    "RepetitionError",
    "RepetitionPlan",
    "SchemaError",
    "SeriesComparison",
    "SupportReport",
    "UnknownChannelError",
    "UnsupportedHostError",
    "ZeroVarianceError",
    "check_support",
    "comparison_table",
    "corrected_delta",
    "discover_zones",
    "format_csv",
    "gpu_discover",
    "gpu_read",
    "load_csv",
    "mean",
    "parse_csv",
    "print_energy",
    "read_energy_uj",
    "run_repetitions",
    "save_csv",
    "wilcoxon_signed_rank",
]
