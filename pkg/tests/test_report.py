from __future__ import annotations

import pytest

from jouletrack import (
    Measurement,
    SchemaError,
    format_csv,
    load_csv,
    parse_csv,
    print_energy,
    save_csv,
)
from jouletrack.report import csv_header, joules_str


def measurement(energy, label="t", wall=1_700_000_000_000, duration=1500, degraded=False):
    return Measurement(
        label=label,
        wall_start_ms=wall,
        duration_ms=duration,
        energy=dict(energy),
        degraded_gpu=degraded,
    )


def test_format_csv_single_measurement_exact_bytes():
    text = format_csv([measurement({"cpu:0:package-0": 3_000_000})])
    assert text == (
        "label,wall_start_ms,duration_ms,cpu:0:package-0_J\n"
        "t,1700000000000,1500,3.000000\n"
    )


def test_format_csv_zero_energy():
    text = format_csv([measurement({"cpu:0:package-0": 0})])
    assert text.endswith(",0.000000\n")


def test_format_csv_rejects_heterogeneous_channel_sets():
    a = measurement({"cpu:0:a": 1, "cpu:0:b": 2})
    b = measurement({"cpu:0:a": 1})
    with pytest.raises(SchemaError):
        format_csv([a, b])


def test_format_csv_rejects_empty_input():
    with pytest.raises(ValueError):
        format_csv([])


def test_column_order_ignores_insertion_order():
    forward = measurement({"cpu:0:a": 1, "cpu:0:b": 2})
    backward = measurement({"cpu:0:b": 2, "cpu:0:a": 1})
    assert format_csv([forward]) == format_csv([backward])


def test_joules_str_full_precision():
    assert joules_str(1) == "0.000001"
    assert joules_str(999_999) == "0.999999"
    assert joules_str(2**63) == "9223372036854.775808"


def test_joules_str_rejects_negative():
    with pytest.raises(ValueError):
        joules_str(-1)


def test_round_trip_recovers_fields_exactly():
    m = measurement(
        {"cpu:0:package-0": 123_456_789, "cpu:0:package-0:dram": 42},
        label="round",
        wall=1_699_999_999_999,
        duration=77,
    )
    columns, rows = parse_csv(format_csv([m]))
    # Channel ids are sorted before the _J suffix is added, so the parent
    # zone column precedes its subzone column.
    assert columns == [
        "label",
        "wall_start_ms",
        "duration_ms",
        "cpu:0:package-0_J",
        "cpu:0:package-0:dram_J",
    ]
    row = rows[0]
    assert row["label"] == "round"
    assert int(row["wall_start_ms"]) == 1_699_999_999_999
    assert int(row["duration_ms"]) == 77
    assert row["cpu:0:package-0_J"] == "123.456789"
    assert row["cpu:0:package-0:dram_J"] == "0.000042"


def test_save_twice_appends_single_header(tmp_path):
    path = tmp_path / "out.csv"
    save_csv(measurement({"cpu:0:package-0": 1_000_000}), path)
    save_csv(measurement({"cpu:0:package-0": 2_000_000}), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 3
    assert lines[0] == "label,wall_start_ms,duration_ms,cpu:0:package-0_J"
    assert lines[1].endswith(",1.000000")
    assert lines[2].endswith(",2.000000")


def test_save_to_mismatched_header_leaves_file_alone(tmp_path):
    path = tmp_path / "out.csv"
    path.write_text("label,wall_start_ms,duration_ms,other_J\nx,1,1,0.000000\n")
    before = path.read_bytes()
    with pytest.raises(SchemaError):
        save_csv(measurement({"cpu:0:package-0": 1}), path)
    assert path.read_bytes() == before


def test_save_to_missing_directory_names_path(tmp_path):
    path = tmp_path / "nope" / "out.csv"
    with pytest.raises(OSError) as excinfo:
        save_csv(measurement({"cpu:0:package-0": 1}), path)
    assert str(path) in str(excinfo.value)


def test_append_preserves_existing_bytes(tmp_path):
    path = tmp_path / "out.csv"
    save_csv(measurement({"cpu:0:package-0": 1}), path)
    before = path.read_bytes()
    save_csv(measurement({"cpu:0:package-0": 2}), path)
    assert path.read_bytes()[: len(before)] == before


def test_load_csv_round_trips_file(tmp_path):
    path = tmp_path / "out.csv"
    save_csv(measurement({"cpu:0:package-0": 5}), path)
    columns, rows = load_csv(path)
    assert columns[-1] == "cpu:0:package-0_J"
    assert rows[0]["cpu:0:package-0_J"] == "0.000005"


def test_parse_csv_rejects_foreign_header():
    with pytest.raises(SchemaError):
        parse_csv("time,value\n1,2\n")


def test_parse_csv_rejects_ragged_rows():
    with pytest.raises(SchemaError):
        parse_csv("label,wall_start_ms,duration_ms,a_J\nx,1,1\n")


def test_print_energy_block():
    text = print_energy(measurement({"cpu:0:package-0": 3_000_000}))
    assert text == "cpu:0:package-0 = 3.000000 J\nruntime = 1500 ms"


def test_print_energy_degraded_mode_trailer():
    text = print_energy(measurement({"cpu:0:package-0": 0}, degraded=True))
    assert text.splitlines()[-1] == "gpu: unavailable"


def test_print_energy_sorts_channels():
    text = print_energy(measurement({"gpu:0": 1, "cpu:0:package-0": 2}))
    lines = text.splitlines()
    assert lines[0].startswith("cpu:0:package-0")
    assert lines[1].startswith("gpu:0")


def test_csv_header_sorts_ids():
    assert csv_header({"b", "a"}) == "label,wall_start_ms,duration_ms,a_J,b_J"
