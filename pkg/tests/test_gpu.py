from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from jouletrack import (
    ChannelKind,
    EnergyTracker,
    FakeGpuDriver,
    GpuProbe,
    NvmlDriver,
    ProbeReadError,
    UnknownChannelError,
    gpu_discover,
    gpu_read,
)
from jouletrack.gpu import GPU_COUNTER_RANGE
from conftest import scripted_probe


def test_discover_two_devices():
    discovery = gpu_discover(FakeGpuDriver([[1], [2]]))
    assert [c.id for c in discovery.channels] == ["gpu:0", "gpu:1"]
    assert not discovery.degraded
    assert all(c.kind is ChannelKind.GPU for c in discovery.channels)
    assert all(c.max_energy_range == GPU_COUNTER_RANGE for c in discovery.channels)


def test_unavailable_driver_degrades_without_error():
    discovery = gpu_discover(FakeGpuDriver([[1]], available=False))
    assert discovery.channels == []
    assert discovery.degraded


def test_missing_driver_degrades():
    discovery = gpu_discover(None)
    assert discovery.channels == []
    assert discovery.degraded


def test_zero_devices_is_empty_but_not_degraded():
    discovery = gpu_discover(FakeGpuDriver([]))
    assert discovery.channels == []
    assert not discovery.degraded


def test_read_converts_millijoules_to_microjoules():
    assert gpu_read(FakeGpuDriver([[5]]), 0).raw_energy == 5000


def test_read_zero():
    assert gpu_read(FakeGpuDriver([[0]]), 0).raw_energy == 0


@given(st.integers(min_value=0, max_value=10**15))
def test_read_is_exactly_thousandfold(millijoules):
    assert gpu_read(FakeGpuDriver([[millijoules]]), 0).raw_energy == millijoules * 1000


def test_read_failure_names_device_index():
    driver = FakeGpuDriver([[RuntimeError("query failed")]])
    with pytest.raises(ProbeReadError) as excinfo:
        gpu_read(driver, 0)
    assert "gpu:0" in str(excinfo.value)


def test_fixture_file_scripts_one_device(tmp_path):
    path = tmp_path / "gpu.txt"
    path.write_text("10\n14\n")
    driver = FakeGpuDriver.from_file(path)
    assert driver.device_count() == 1
    assert driver.total_energy_mj(0) == 10
    assert driver.total_energy_mj(0) == 14


def test_fixture_file_rejects_garbage(tmp_path):
    from jouletrack import ParseError

    path = tmp_path / "gpu.txt"
    path.write_text("10\nabc\n")
    with pytest.raises(ParseError):
        FakeGpuDriver.from_file(path)
    path.write_text("-5\n")
    with pytest.raises(ParseError):
        FakeGpuDriver.from_file(path)


def test_tracked_interval_delta(standard_tree):
    # 10 mJ then 14 mJ across one interval: 4000 microjoules on gpu:0.
    tracker = EnergyTracker(
        cpu_probe=scripted_probe({"cpu:0:package-0": [0, 0]}),
        gpu_driver=FakeGpuDriver([[10, 14]]),
    )
    tracker.start()
    tracker.stop()
    measurement = tracker.calculate_energy()
    assert measurement.energy["gpu:0"] == 4000
    assert not measurement.degraded_gpu


def test_degraded_mode_keeps_cpu_channels():
    tracker = EnergyTracker(
        cpu_probe=scripted_probe({"cpu:0:package-0": [100, 300]}),
        gpu_driver=FakeGpuDriver([[1]], available=False),
    )
    tracker.start()
    tracker.stop()
    measurement = tracker.calculate_energy()
    assert list(measurement.energy) == ["cpu:0:package-0"]
    assert measurement.energy["cpu:0:package-0"] == 200
    assert measurement.degraded_gpu


def test_gpu_probe_rejects_unknown_channel():
    probe = GpuProbe(FakeGpuDriver([[1]]))
    probe.discover()
    with pytest.raises(UnknownChannelError):
        probe.read("gpu:7")


def test_nvml_try_load_never_raises():
    driver = NvmlDriver.try_load()
    assert driver is None or isinstance(driver, NvmlDriver)
