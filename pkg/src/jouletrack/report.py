"""CSV and console serialization of measurements.

The CSV schema is a frozen external contract: header
``label,wall_start_ms,duration_ms`` followed by one ``<channel-id>_J``
column per channel in sorted id order, energies in joules with exactly six
fractional digits (full microjoule precision), LF line endings, trailing
newline. Subzone channels are emitted as-is even though their energy is
already included in the parent zone's column — do not sum a parent with its
children.
"""

from __future__ import annotations

from pathlib import Path

from .errors import SchemaError
from .tracker import Measurement

_FIXED_COLUMNS = ("label", "wall_start_ms", "duration_ms")


def joules_str(microjoules: int) -> str:
    """Microjoules as a joule string with exactly 6 fractional digits.

    Integer arithmetic keeps the conversion byte-exact for the full
    unsigned 64-bit range; float division would not.
    """
    if microjoules < 0:
        raise ValueError(f"negative energy: {microjoules}")
    return f"{microjoules // 1_000_000}.{microjoules % 1_000_000:06d}"


def csv_header(channel_ids) -> str:
    return ",".join(_FIXED_COLUMNS) + "".join(f",{cid}_J" for cid in sorted(channel_ids))


def _csv_row(measurement: Measurement) -> str:
    cells = [
        measurement.label,
        str(measurement.wall_start_ms),
        str(measurement.duration_ms),
    ]
    for channel_id in sorted(measurement.energy):
        cells.append(joules_str(measurement.energy[channel_id]))
    return ",".join(cells)


def format_csv(measurements: list[Measurement]) -> str:
    """Header plus one row per measurement; all must share one channel set."""
    if not measurements:
        raise ValueError("no measurements to format")
    channel_ids = set(measurements[0].energy)
    for m in measurements[1:]:
        if set(m.energy) != channel_ids:
            raise SchemaError(
                f"measurement {m.label!r} has channel set {sorted(m.energy)}, "
                f"expected {sorted(channel_ids)}"
            )
    lines = [csv_header(channel_ids)]
    lines.extend(_csv_row(m) for m in measurements)
    return "\n".join(lines) + "\n"


def save_csv(measurement: Measurement, path: str | Path) -> None:
    """Write or append one row, creating the header only on first write.

    Appending to a file whose header does not match the measurement's
    channel set raises SchemaError and leaves the file untouched; repeated
    saves build up one row per iteration under a single header.
    """
    path = Path(path)
    header = csv_header(set(measurement.energy))
    if path.exists():
        with open(path, "r", newline="") as fh:
            existing = fh.readline().rstrip("\n")
        if existing != header:
            raise SchemaError(
                f"{path}: existing header {existing!r} does not match {header!r}"
            )
        with open(path, "a", newline="") as fh:
            fh.write(_csv_row(measurement) + "\n")
    else:
        with open(path, "w", newline="") as fh:
            fh.write(header + "\n")
            fh.write(_csv_row(measurement) + "\n")


def print_energy(measurement: Measurement) -> str:
    """Console block: one ``<channel> = <J> J`` line per channel, then runtime.

    Ends with ``gpu: unavailable`` when the measurement ran in degraded
    mode so CPU-only results are never mistaken for whole-host ones.
    """
    lines = [
        f"{channel_id} = {joules_str(measurement.energy[channel_id])} J"
        for channel_id in sorted(measurement.energy)
    ]
    lines.append(f"runtime = {measurement.duration_ms} ms")
    if measurement.degraded_gpu:
        lines.append("gpu: unavailable")
    return "\n".join(lines)


def parse_csv(text: str) -> tuple[list[str], list[dict[str, str]]]:
    """Split CSV text into (column names, rows as column->string maps)."""
    lines = [line for line in text.split("\n") if line != ""]
    if not lines:
        raise SchemaError("empty CSV")
    columns = lines[0].split(",")
    if list(columns[: len(_FIXED_COLUMNS)]) != list(_FIXED_COLUMNS):
        raise SchemaError(f"unexpected CSV header: {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise SchemaError(f"row has {len(cells)} cells, expected {len(columns)}")
        rows.append(dict(zip(columns, cells)))
    return columns, rows


def load_csv(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    return parse_csv(Path(path).read_text())
