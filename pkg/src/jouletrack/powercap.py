"""CPU energy channels from a powercap-style sysfs tree.

The tree layout consumed is the Linux powercap one: zone directories named
``intel-rapl:<N>`` under the root, each containing ``name``, ``energy_uj``
and ``max_energy_range_uj`` files plus optional subzone directories named
``intel-rapl:<N>:<M>`` with the same three files. The root defaults to
``/sys/class/powercap`` and can be overridden by the ``ENERGY_PROBE_ROOT``
environment variable or a constructor argument, so fixture trees work
anywhere.

Note that on real hardware a subzone's energy is already included in its
parent zone's counter: never sum a parent channel with its children.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptCounterError, ParseError, ProbeReadError, UnknownChannelError
from .probe import Channel, ChannelKind, CounterSample, Probe, SupportReport

DEFAULT_ROOT = Path("/sys/class/powercap")
ROOT_ENV_VAR = "ENERGY_PROBE_ROOT"

# intel-rapl:<N> or a variant prefix such as intel-rapl-mmio:<N>
_ZONE_DIR_RE = re.compile(r"^(intel-rapl[^:]*):(\d+)$")
_SUBZONE_DIR_RE = re.compile(r"^(intel-rapl[^:]*):(\d+):(\d+)$")
_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


@dataclass(frozen=True)
class PowercapZone:
    """One zone directory: its path, ``N`` or ``N:M`` id, and counter limits."""

    dir_path: Path
    zone_id: str
    name: str
    max_energy_range: int
    is_subzone: bool


def _read_file(path: Path) -> str:
    # Single choke point for sysfs reads so tests can inject I/O failures.
    return path.read_text()


def resolve_root(root: str | Path | None = None) -> Path:
    """Powercap root from the argument, the environment, or the default."""
    if root is not None:
        return Path(root)
    env = os.environ.get(ROOT_ENV_VAR)
    if env:
        return Path(env)
    return DEFAULT_ROOT


def _zone_dirs(root: Path) -> list[Path]:
    try:
        entries = sorted(root.iterdir())
    except FileNotFoundError:
        return []
    return [p for p in entries if p.is_dir() and _ZONE_DIR_RE.match(p.name)]


def check_support(root: str | Path | None = None) -> SupportReport:
    """Whether the host exposes a readable powercap tree under ``root``.

    Never raises: absent trees and permission problems are both reported in
    the result, with the offending path named so the user can act on it.
    """
    rapl_root = resolve_root(root)
    try:
        zone_paths = _zone_dirs(rapl_root)
    except PermissionError as exc:
        return SupportReport(
            supported=False,
            reason="permission",
            message=f"cannot list {rapl_root}: {exc}",
            root=str(rapl_root),
        )
    if not zone_paths:
        return SupportReport(
            supported=False,
            reason="absent",
            message=(
                f"no intel-rapl zones under {rapl_root}; "
                "host has no usable CPU energy interface"
            ),
            root=str(rapl_root),
        )
    zones = 0
    probe_path: Path | None = None
    try:
        for zone_path in zone_paths:
            zone_dirs = [zone_path] + [
                p
                for p in sorted(zone_path.iterdir())
                if p.is_dir() and _SUBZONE_DIR_RE.match(p.name)
            ]
            for zone_dir in zone_dirs:
                for filename in ("name", "energy_uj", "max_energy_range_uj"):
                    probe_path = zone_dir / filename
                    _read_file(probe_path)
                zones += 1
    except PermissionError as exc:
        denied = getattr(exc, "filename", None) or probe_path
        return SupportReport(
            supported=False,
            reason="permission",
            message=(
                f"cannot read {denied}: permission denied; grant read "
                "access to the powercap tree (e.g. run with elevated "
                "privileges)"
            ),
            root=str(rapl_root),
        )
    except OSError as exc:
        missing = getattr(exc, "filename", None) or probe_path
        return SupportReport(
            supported=False,
            reason="absent",
            message=f"cannot read {missing}: {exc}",
            root=str(rapl_root),
        )
    return SupportReport(
        supported=True,
        reason="ok",
        message=f"powercap tree at {rapl_root} with {zones} zone(s)",
        root=str(rapl_root),
        zones=zones,
    )


def _parse_int_file(path: Path) -> int:
    text = _read_file(path)
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"{path}: expected an integer, got {text.strip()!r}") from None


def _zone_name(path: Path) -> str:
    text = _read_file(path / "name").strip()
    if not _NAME_RE.match(text):
        raise ParseError(f"{path / 'name'}: malformed zone name {text!r}")
    return text


def _zone_max_range(path: Path) -> int:
    value = _parse_int_file(path / "max_energy_range_uj")
    if value <= 0:
        raise ParseError(
            f"{path / 'max_energy_range_uj'}: range must be positive, got {value}"
        )
    return value


def _scan(root: Path) -> list[tuple[Channel, PowercapZone]]:
    """Walk the tree once, building (channel, zone) pairs sorted by id.

    Zone directories are visited shortest-prefix first so that when a
    variant interface (e.g. intel-rapl-mmio) mirrors a plain zone under the
    same channel id, the plain zone wins and the mirror is skipped.
    """
    found: dict[str, tuple[Channel, PowercapZone]] = {}
    zone_paths = sorted(_zone_dirs(root), key=lambda p: (len(p.name), p.name))
    for zone_path in zone_paths:
        match = _ZONE_DIR_RE.match(zone_path.name)
        assert match is not None
        socket = int(match.group(2))
        name = _zone_name(zone_path)
        zone = PowercapZone(
            dir_path=zone_path,
            zone_id=str(socket),
            name=name,
            max_energy_range=_zone_max_range(zone_path),
            is_subzone=False,
        )
        channel_id = f"cpu:{socket}:{name}"
        if channel_id in found:
            continue
        found[channel_id] = (
            Channel(
                id=channel_id,
                name=name,
                max_energy_range=zone.max_energy_range,
                kind=ChannelKind.CPU_DOMAIN,
            ),
            zone,
        )
        for sub_path in sorted(zone_path.iterdir()):
            if not sub_path.is_dir():
                continue
            sub_match = _SUBZONE_DIR_RE.match(sub_path.name)
            if sub_match is None:
                if _ZONE_DIR_RE.match(sub_path.name) or ":" in sub_path.name:
                    raise ParseError(
                        f"{sub_path}: unsupported zone nesting; only one "
                        "subzone level (N:M) is handled"
                    )
                continue
            if any(p.is_dir() and ":" in p.name for p in sub_path.iterdir()):
                raise ParseError(
                    f"{sub_path}: unsupported zone nesting; only one "
                    "subzone level (N:M) is handled"
                )
            sub_name = _zone_name(sub_path)
            sub_zone = PowercapZone(
                dir_path=sub_path,
                zone_id=f"{sub_match.group(2)}:{sub_match.group(3)}",
                name=sub_name,
                max_energy_range=_zone_max_range(sub_path),
                is_subzone=True,
            )
            sub_id = f"{channel_id}:{sub_name}"
            if sub_id in found:
                continue
            found[sub_id] = (
                Channel(
                    id=sub_id,
                    name=sub_name,
                    max_energy_range=sub_zone.max_energy_range,
                    kind=ChannelKind.CPU_SUBDOMAIN,
                ),
                sub_zone,
            )
    return [found[cid] for cid in sorted(found)]


def discover_zones(root: str | Path | None = None) -> list[Channel]:
    """One channel per zone and subzone under ``root``, sorted by id."""
    return [channel for channel, _ in _scan(resolve_root(root))]


def read_energy_uj(zone: PowercapZone) -> int:
    """Current raw counter of one zone, validated against its range."""
    path = zone.dir_path / "energy_uj"
    try:
        value = _parse_int_file(path)
    except PermissionError:
        raise ProbeReadError(
            f"cannot read {path}: permission denied; grant read access to "
            "the powercap tree (e.g. run with elevated privileges)"
        ) from None
    if value < 0 or value > zone.max_energy_range:
        raise CorruptCounterError(
            f"{path}: reading {value} outside [0, {zone.max_energy_range}]"
        )
    return value


class PowercapProbe(Probe):
    """Probe over a powercap tree; safe for concurrent reads."""

    def __init__(self, root: str | Path | None = None) -> None:
        self._root = resolve_root(root)
        self._zones: dict[str, PowercapZone] | None = None

    @property
    def root(self) -> Path:
        return self._root

    def check_support(self) -> SupportReport:
        return check_support(self._root)

    def discover(self) -> list[Channel]:
        pairs = _scan(self._root)
        self._zones = {channel.id: zone for channel, zone in pairs}
        return [channel for channel, _ in pairs]

    def read(self, channel_id: str) -> CounterSample:
        if self._zones is None:
            self.discover()
        assert self._zones is not None
        zone = self._zones.get(channel_id)
        if zone is None:
            raise UnknownChannelError(f"channel {channel_id!r} was never discovered")
        try:
            value = read_energy_uj(zone)
        except (ProbeReadError, ParseError, CorruptCounterError) as exc:
            raise type(exc)(f"{channel_id}: {exc}") from None
        return CounterSample(
            channel=channel_id, raw_energy=value, mono_time=time.monotonic_ns()
        )
