"""Measurement lifecycle: start/stop/checkpoint over all discovered channels.

A tracker samples every channel when an interval opens and again when it
closes, accumulating overflow-corrected deltas. Splitting a long run into
many short intervals via ``checkpoint`` bounds the error a counter wrap can
introduce; interval totals are exactly additive. Energy deltas come from the
raw counters; durations come from a monotonic clock, never wall time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .errors import LifecycleError, NothingMeasuredError, UnsupportedHostError
from .gpu import GpuDriver, GpuProbe
from .probe import Channel, CounterSample, Probe, SupportReport, corrected_delta
from .powercap import PowercapProbe


def _wall_ms() -> int:
    return time.time_ns() // 1_000_000


@dataclass(frozen=True)
class Measurement:
    """One finalized result: per-channel energy plus wall start and runtime.

    ``energy`` maps channel id to microjoules summed over every closed
    interval; ``duration_ms`` is the tracked monotonic time, likewise
    summed. ``degraded_gpu`` records that no GPU driver was available.
    """

    label: str
    wall_start_ms: int
    duration_ms: int
    energy: dict[str, int]
    degraded_gpu: bool = False


class EnergyTracker:
    """Start/stop energy bookkeeping over CPU and GPU channels.

    Construction scans the host: CPU support is mandatory (an unsupported
    host raises immediately), a missing GPU driver only flags degraded
    mode. One tracker must be driven from one thread at a time; the legal
    call sequence is ``(start (checkpoint)* stop)+`` with
    ``calculate_energy``/``reset`` allowed whenever no interval is open.
    """

    def __init__(
        self,
        cpu_probe: Probe | None = None,
        gpu_driver: GpuDriver | None = None,
        label: str = "measurement",
        *,
        mono_ns: Callable[[], int] = time.monotonic_ns,
        wall_ms: Callable[[], int] = _wall_ms,
    ) -> None:
        if "," in label or "\n" in label or "\r" in label:
            raise ValueError("label must not contain commas or newlines")
        cpu_probe = cpu_probe if cpu_probe is not None else PowercapProbe()
        report = cpu_probe.check_support()
        if not report.supported:
            raise UnsupportedHostError(report)
        gpu_probe = GpuProbe(gpu_driver)
        cpu_channels = cpu_probe.discover()
        gpu_channels = gpu_probe.discover()
        if not cpu_channels and not gpu_channels:
            raise UnsupportedHostError(
                SupportReport(
                    supported=False,
                    reason="absent",
                    message="no energy channels discovered",
                    root=report.root,
                )
            )
        self.label = label
        self.degraded_gpu = gpu_probe.degraded
        self._channels = sorted(cpu_channels + gpu_channels, key=lambda c: c.id)
        self._probes: dict[str, Probe] = {}
        for channel in cpu_channels:
            self._probes[channel.id] = cpu_probe
        for channel in gpu_channels:
            self._probes[channel.id] = gpu_probe
        self._mono_ns = mono_ns
        self._wall_ms = wall_ms
        self._open_samples: dict[str, CounterSample] | None = None
        self._open_mono: int = 0
        self._closed: list[tuple[dict[str, int], int]] = []
        self._wall_start_ms: int | None = None

    @property
    def channels(self) -> list[Channel]:
        return list(self._channels)

    @property
    def interval_open(self) -> bool:
        return self._open_samples is not None

    @property
    def closed_intervals(self) -> int:
        return len(self._closed)

    def _sample_all(self) -> dict[str, CounterSample]:
        # Sorted channel order both at open and close keeps cross-channel
        # skew deterministic.
        return {c.id: self._probes[c.id].read(c.id) for c in self._channels}

    def start(self) -> None:
        """Open an interval with one sample per channel."""
        if self._open_samples is not None:
            raise LifecycleError("start() called while an interval is open")
        if self._wall_start_ms is None:
            self._wall_start_ms = self._wall_ms()
        mono = self._mono_ns()
        self._open_samples = self._sample_all()
        self._open_mono = mono

    def _close(self, samples: dict[str, CounterSample], mono: int) -> None:
        assert self._open_samples is not None
        deltas = {
            c.id: corrected_delta(
                self._open_samples[c.id].raw_energy,
                samples[c.id].raw_energy,
                c.max_energy_range,
            )
            for c in self._channels
        }
        duration = mono - self._open_mono
        if duration <= 0:
            duration = 1
        self._closed.append((deltas, duration))
        self._open_samples = None

    def stop(self) -> None:
        """Close the open interval, recording per-channel corrected deltas.

        If sampling any channel fails the whole interval is discarded — a
        partial delta row would corrupt downstream CSV alignment.
        """
        if self._open_samples is None:
            raise LifecycleError("stop() called with no open interval")
        try:
            samples = self._sample_all()
        except Exception:
            self._open_samples = None
            raise
        self._close(samples, self._mono_ns())

    def checkpoint(self) -> None:
        """Close and immediately reopen, with one shared read per channel.

        Equivalent to ``stop(); start()`` except there is no gap: the same
        samples end one interval and begin the next, so totals over a split
        run equal the unsplit run exactly.
        """
        if self._open_samples is None:
            raise LifecycleError("checkpoint() called with no open interval")
        try:
            samples = self._sample_all()
        except Exception:
            self._open_samples = None
            raise
        mono = self._mono_ns()
        self._close(samples, mono)
        self._open_samples = samples
        self._open_mono = mono

    def calculate_energy(self) -> Measurement:
        """Aggregate all closed intervals into a Measurement.

        Pure with respect to tracker state: closed intervals are retained,
        so repeated calls return equal results until ``reset``.
        """
        if self._open_samples is not None:
            raise LifecycleError("calculate_energy() called while an interval is open")
        if not self._closed:
            raise NothingMeasuredError("no closed intervals to aggregate")
        energy = {c.id: 0 for c in self._channels}
        total_ns = 0
        for deltas, duration in self._closed:
            for channel_id, delta in deltas.items():
                energy[channel_id] += delta
            total_ns += duration
        assert self._wall_start_ms is not None
        return Measurement(
            label=self.label,
            wall_start_ms=self._wall_start_ms,
            duration_ms=max(1, (total_ns + 500_000) // 1_000_000),
            energy=energy,
            degraded_gpu=self.degraded_gpu,
        )

    def reset(self) -> None:
        """Drop all closed intervals; channels are unchanged."""
        if self._open_samples is not None:
            raise LifecycleError("reset() called while an interval is open")
        self._closed.clear()
        self._wall_start_ms = None
