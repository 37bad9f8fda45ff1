"""Channel data model, the probe abstraction, and overflow-corrected deltas.

Every energy source (a CPU power domain on a socket, a GPU device) is a
Channel with a stable string id. Probes discover channels and read raw
monotonic counter values from them; all raw values are unsigned microjoules.
"""

from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import CorruptCounterError, UnknownChannelError


class ChannelKind(Enum):
    CPU_DOMAIN = "cpu-domain"
    CPU_SUBDOMAIN = "cpu-subdomain"
    GPU = "gpu"


@dataclass(frozen=True)
class Channel:
    """One measurable energy counter.

    ``id`` follows the wire format ``cpu:<socket>:<domain>`` (with an extra
    ``:<sub>`` segment for subdomains) or ``gpu:<index>``. The counter wraps
    to zero after reaching ``max_energy_range`` microjoules.
    """

    id: str
    name: str
    max_energy_range: int
    kind: ChannelKind

    def __post_init__(self) -> None:
        if self.max_energy_range <= 0:
            raise ValueError(
                f"channel {self.id!r}: max_energy_range must be positive, "
                f"got {self.max_energy_range}"
            )


@dataclass(frozen=True)
class CounterSample:
    """A raw counter reading (microjoules) with a monotonic timestamp (ns)."""

    channel: str
    raw_energy: int
    mono_time: int


@dataclass(frozen=True)
class SupportReport:
    """Outcome of a host-compatibility check.

    ``reason`` is ``"ok"``, ``"absent"`` or ``"permission"``; ``message`` is
    human-actionable and names the offending path where relevant.
    """

    supported: bool
    reason: str
    message: str
    root: str = ""
    zones: int = 0


def corrected_delta(start: int, end: int, max_energy_range: int) -> int:
    """Energy consumed between two raw readings, correcting a single wrap.

    The counter is treated as modular with period ``max_energy_range``:
    when ``end < start`` the counter is assumed to have wrapped exactly once,
    so the delta is ``end + (max_energy_range - start)``. Intervals spanning
    more than one wrap period under-report; keep intervals short.

    Raises:
        CorruptCounterError: if either reading exceeds the declared range.
    """
    if max_energy_range <= 0:
        raise ValueError(f"max_energy_range must be positive, got {max_energy_range}")
    if start < 0 or start > max_energy_range:
        raise CorruptCounterError(
            f"start reading {start} outside [0, {max_energy_range}]"
        )
    if end < 0 or end > max_energy_range:
        raise CorruptCounterError(f"end reading {end} outside [0, {max_energy_range}]")
    if end >= start:
        return end - start
    return end + (max_energy_range - start)


class Probe(ABC):
    """A backend that exposes energy channels.

    Probes are read-only after initialization and safe to call from multiple
    threads. ``read`` is only valid for channels returned by ``discover``.
    """

    @abstractmethod
    def discover(self) -> list[Channel]:
        """All readable channels, sorted by id. Deterministic per host state."""

    @abstractmethod
    def read(self, channel_id: str) -> CounterSample:
        """Current raw counter value for one discovered channel."""

    def check_support(self) -> SupportReport:
        """Whether this probe can operate at all; default is supported."""
        return SupportReport(supported=True, reason="ok", message="supported")


class FakeProbe(Probe):
    """Scripted probe for tests and demos.

    ``scripts`` maps channel id to the sequence of raw values successive
    reads return; an entry may be an exception instance, which is raised
    instead. After a script runs out, the last value repeats (the counter
    simply stops advancing). ``reads`` counts every successful read.
    """

    def __init__(
        self,
        channels: Iterable[Channel],
        scripts: Mapping[str, Sequence[int | Exception]] | None = None,
        support: SupportReport | None = None,
    ) -> None:
        self._channels = sorted(channels, key=lambda c: c.id)
        ids = [c.id for c in self._channels]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate channel ids in fake probe: {ids}")
        self._by_id = {c.id: c for c in self._channels}
        self._scripts = {cid: list(seq) for cid, seq in (scripts or {}).items()}
        self._cursors: dict[str, int] = {cid: 0 for cid in self._scripts}
        self._support = support
        self._mono = itertools.count(1_000)
        self._lock = threading.Lock()
        self.reads = 0

    def check_support(self) -> SupportReport:
        if self._support is not None:
            return self._support
        return super().check_support()

    def discover(self) -> list[Channel]:
        return list(self._channels)

    def read(self, channel_id: str) -> CounterSample:
        channel = self._by_id.get(channel_id)
        if channel is None:
            raise UnknownChannelError(f"channel {channel_id!r} was never discovered")
        with self._lock:
            script = self._scripts.get(channel_id)
            if not script:
                value: int | Exception = 0
            else:
                cursor = min(self._cursors[channel_id], len(script) - 1)
                value = script[cursor]
                self._cursors[channel_id] = cursor + 1
            if isinstance(value, Exception):
                raise value
            if value > channel.max_energy_range:
                raise CorruptCounterError(
                    f"scripted value {value} exceeds range of {channel_id}"
                )
            self.reads += 1
            return CounterSample(
                channel=channel_id, raw_energy=value, mono_time=next(self._mono)
            )
