"""GPU devices as energy channels.

The real backend queries the NVIDIA management library's cumulative
total-energy counter (millijoules per device) through ctypes; it is loaded
lazily and its absence is never fatal — the toolkit simply degrades to
CPU-only measurement. A scripted fake driver covers tests and GPU-less
hosts; ``ENERGY_GPU_FAKE`` may point it at a fixture file of
newline-separated millijoule values for a single device.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import CorruptCounterError, ParseError, ProbeReadError, UnknownChannelError
from .probe import Channel, ChannelKind, CounterSample, Probe

# The vendor counter is a cumulative 64-bit millijoule count since driver
# load; a wrap is unreachable in practice, so channels advertise the full
# unsigned range and delta arithmetic degenerates to plain subtraction.
GPU_COUNTER_RANGE = 2**64 - 1

FAKE_ENV_VAR = "ENERGY_GPU_FAKE"


class GpuUnavailableError(Exception):
    """No usable GPU driver; callers degrade to CPU-only mode."""


class GpuDriver:
    """Minimal driver contract: device count and per-device energy."""

    def device_count(self) -> int:
        """Number of devices, indexed 0..count-1. May raise GpuUnavailableError."""
        raise NotImplementedError

    def total_energy_mj(self, index: int) -> int:
        """Cumulative energy of one device in millijoules."""
        raise NotImplementedError


class FakeGpuDriver(GpuDriver):
    """Scripted driver: per-device sequences of millijoule readings.

    Reads past the end of a script repeat the last value. An entry may be an
    exception instance, which is raised instead. The script cursor is
    lock-protected so concurrent reads stay well-defined.
    """

    def __init__(
        self,
        scripts: Sequence[Sequence[int | Exception]],
        available: bool = True,
    ) -> None:
        self._scripts = [list(seq) for seq in scripts]
        self._cursors = [0] * len(self._scripts)
        self._available = available
        self._lock = threading.Lock()

    @classmethod
    def from_file(cls, path: str | Path) -> "FakeGpuDriver":
        """Single-device driver scripted from newline-separated integers."""
        values = []
        for token in Path(path).read_text().split():
            try:
                value = int(token)
            except ValueError:
                raise ParseError(
                    f"{path}: expected integer millijoule values, got {token!r}"
                ) from None
            if value < 0:
                raise ParseError(f"{path}: negative reading {value}")
            values.append(value)
        return cls([values])

    def device_count(self) -> int:
        if not self._available:
            raise GpuUnavailableError("fake driver scripted as unavailable")
        return len(self._scripts)

    def total_energy_mj(self, index: int) -> int:
        if not self._available:
            raise GpuUnavailableError("fake driver scripted as unavailable")
        with self._lock:
            script = self._scripts[index]
            if not script:
                return 0
            cursor = min(self._cursors[index], len(script) - 1)
            value = script[cursor]
            self._cursors[index] = cursor + 1
        if isinstance(value, Exception):
            raise value
        return value


class NvmlDriver(GpuDriver):
    """Real driver bound to the vendor management library via ctypes."""

    _LIB_NAMES = ("libnvidia-ml.so.1", "libnvidia-ml.so", "nvml.dll")

    def __init__(self) -> None:
        self._lib = self._load()

    def _load(self):
        import ctypes

        lib = None
        for name in self._LIB_NAMES:
            try:
                lib = ctypes.CDLL(name)
                break
            except OSError:
                continue
        if lib is None:
            raise GpuUnavailableError("GPU management library not found")
        if lib.nvmlInit_v2() != 0:
            raise GpuUnavailableError("GPU management library failed to initialize")
        return lib

    def device_count(self) -> int:
        import ctypes

        count = ctypes.c_uint()
        rc = self._lib.nvmlDeviceGetCount_v2(ctypes.byref(count))
        if rc != 0:
            raise GpuUnavailableError(f"device enumeration failed (status {rc})")
        return count.value

    def total_energy_mj(self, index: int) -> int:
        import ctypes

        handle = ctypes.c_void_p()
        rc = self._lib.nvmlDeviceGetHandleByIndex_v2(index, ctypes.byref(handle))
        if rc != 0:
            raise ProbeReadError(f"gpu:{index}: handle lookup failed (status {rc})")
        energy = ctypes.c_ulonglong()
        rc = self._lib.nvmlDeviceGetTotalEnergyConsumption(handle, ctypes.byref(energy))
        if rc != 0:
            raise ProbeReadError(f"gpu:{index}: energy query failed (status {rc})")
        return energy.value

    @classmethod
    def try_load(cls) -> "NvmlDriver | None":
        """The driver, or None when the library is absent or broken."""
        try:
            return cls()
        except GpuUnavailableError:
            return None


@dataclass(frozen=True)
class GpuDiscovery:
    channels: list[Channel]
    degraded: bool


def gpu_discover(driver: GpuDriver | None) -> GpuDiscovery:
    """One ``gpu:<index>`` channel per device.

    A missing or unavailable driver yields no channels plus the degraded
    flag; measurement continues with CPU channels only. Zero devices on a
    healthy driver is not degraded, just empty.
    """
    if driver is None:
        return GpuDiscovery(channels=[], degraded=True)
    try:
        count = driver.device_count()
    except GpuUnavailableError:
        return GpuDiscovery(channels=[], degraded=True)
    channels = [
        Channel(
            id=f"gpu:{index}",
            name=f"gpu-{index}",
            max_energy_range=GPU_COUNTER_RANGE,
            kind=ChannelKind.GPU,
        )
        for index in range(count)
    ]
    return GpuDiscovery(channels=sorted(channels, key=lambda c: c.id), degraded=False)


def gpu_read(driver: GpuDriver, index: int) -> CounterSample:
    """Sample one device, converting millijoules to microjoules (×1000)."""
    try:
        millijoules = driver.total_energy_mj(index)
    except ProbeReadError:
        raise
    except Exception as exc:
        raise ProbeReadError(f"gpu:{index}: driver query failed: {exc}") from exc
    microjoules = millijoules * 1000
    if microjoules > GPU_COUNTER_RANGE:
        raise CorruptCounterError(
            f"gpu:{index}: reading {millijoules} mJ exceeds the counter range"
        )
    return CounterSample(
        channel=f"gpu:{index}", raw_energy=microjoules, mono_time=time.monotonic_ns()
    )


class GpuProbe(Probe):
    """Probe adapter over a GPU driver; ``degraded`` is set after discovery."""

    def __init__(self, driver: GpuDriver | None) -> None:
        self._driver = driver
        self._discovery: GpuDiscovery | None = None

    @property
    def degraded(self) -> bool:
        if self._discovery is None:
            self.discover()
        assert self._discovery is not None
        return self._discovery.degraded

    def discover(self) -> list[Channel]:
        self._discovery = gpu_discover(self._driver)
        return list(self._discovery.channels)

    def read(self, channel_id: str) -> CounterSample:
        if self._discovery is None:
            self.discover()
        assert self._discovery is not None
        known = {c.id for c in self._discovery.channels}
        if channel_id not in known:
            raise UnknownChannelError(f"channel {channel_id!r} was never discovered")
        assert self._driver is not None
        index = int(channel_id.split(":", 1)[1])
        return gpu_read(self._driver, index)
