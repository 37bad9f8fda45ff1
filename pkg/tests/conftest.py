from __future__ import annotations

from pathlib import Path

import pytest

from jouletrack import Channel, ChannelKind, FakeProbe

PKG_RANGE = 262_143_328_850
DRAM_RANGE = 65_712_999_613


def write_zone(zone_dir: Path, name: str, energy: int, max_range: int) -> Path:
    zone_dir.mkdir(parents=True, exist_ok=True)
    (zone_dir / "name").write_text(name + "\n")
    (zone_dir / "energy_uj").write_text(f"{energy}\n")
    (zone_dir / "max_energy_range_uj").write_text(f"{max_range}\n")
    return zone_dir


def set_energy(zone_dir: Path, energy: int) -> None:
    (zone_dir / "energy_uj").write_text(f"{energy}\n")


@pytest.fixture
def powercap_root(tmp_path: Path) -> Path:
    root = tmp_path / "powercap"
    root.mkdir()
    return root


@pytest.fixture
def standard_tree(powercap_root: Path) -> Path:
    """One socket: package-0 zone with a dram subzone."""
    pkg = write_zone(powercap_root / "intel-rapl:0", "package-0", 1_000_000, PKG_RANGE)
    write_zone(pkg / "intel-rapl:0:1", "dram", 200_000, DRAM_RANGE)
    return powercap_root


def cpu_channel(channel_id: str, max_range: int = 1_000_000) -> Channel:
    name = channel_id.split(":")[-1]
    kind = (
        ChannelKind.CPU_SUBDOMAIN
        if channel_id.count(":") == 3
        else ChannelKind.CPU_DOMAIN
    )
    return Channel(id=channel_id, name=name, max_energy_range=max_range, kind=kind)


def scripted_probe(scripts: dict[str, list], max_range: int = 1_000_000) -> FakeProbe:
    channels = [cpu_channel(cid, max_range) for cid in scripts]
    return FakeProbe(channels, scripts)
