"""Telemetry line grammar, atomicity, and I/O-exclusion of dedup_us."""

from __future__ import annotations

import io

import pytest

from bytededup.core import dedup_ordered
from bytededup.stream import LINES_LF, IngestSource, run_stream
from bytededup.telemetry import (
    DEFAULT_ENGINE_ID,
    TelemetryLine,
    emit_telemetry,
    parse_telemetry,
    telemetry_from_result,
)
from bytededup.bench import WorkloadSpec, generate_workload


class RecordingStream(io.StringIO):
    def __init__(self):
        super().__init__()
        self.writes = []

    def write(self, text):
        self.writes.append(text)
        return super().write(text)


def test_render_exact_grammar():
    line = TelemetryLine("bytededup_v1", 12, 3, 4, 0)
    assert line.render() == "engine=bytededup_v1 dedup_us=12 unique_count=3 duplicate_count=4 novelty_count=0\n"


def test_parse_round_trips_render():
    line = TelemetryLine(DEFAULT_ENGINE_ID, 87, 100, 23, 5)
    assert parse_telemetry(line.render()) == line
    assert parse_telemetry(line.render().rstrip("\n")) == line


def test_parse_rejects_deviations():
    good = TelemetryLine("x", 1, 2, 3, 4).render()
    for bad in (
        good.replace("dedup_us", "dedupus"),
        "unique_count=2 " + good,  # wrong field order
        good.rstrip("\n") + " extra=1\n",
        "engine=x dedup_us=-1 unique_count=0 duplicate_count=0 novelty_count=0\n",
        "",
    ):
        with pytest.raises(ValueError):
            parse_telemetry(bad)


def test_engine_id_must_be_single_token():
    with pytest.raises(ValueError):
        TelemetryLine("two words", 0, 0, 0, 0)
    with pytest.raises(ValueError):
        TelemetryLine("", 0, 0, 0, 0)


def test_emit_writes_one_whole_line():
    result = dedup_ordered([b"a", b"a", b"b"])
    stream = RecordingStream()
    line = emit_telemetry(result, "engine_x", stream)
    assert stream.writes == [line.render()]  # single write call, whole line
    assert line.unique_count == 2 and line.duplicate_count == 1


def test_emit_empty_input_counters():
    stream = RecordingStream()
    line = emit_telemetry(dedup_ordered([]), DEFAULT_ENGINE_ID, stream)
    assert line.unique_count == 0
    assert line.duplicate_count == 0
    assert line.novelty_count == 0
    assert parse_telemetry(stream.getvalue()) == line


def test_counters_mirror_result():
    records = [b"r%02d" % (i % 9) for i in range(50)]
    result = dedup_ordered(records)
    line = telemetry_from_result(result)
    assert line.unique_count + line.duplicate_count == len(records)
    assert line.dedup_us == result.dedup_us


def test_dedup_us_excludes_ingest_and_emit_io(tmp_path):
    # Same records via file and via memory: dedup_us may wobble but must not
    # absorb the file I/O, so the two stay within 10x of each other.
    spec = WorkloadSpec("io_check", chunks=50_000, unique=10_000, record_bytes=60, seed=5)
    records = generate_workload(spec)
    data = b"\n".join(records) + b"\n"
    path = tmp_path / "corpus.txt"
    path.write_bytes(data)

    sink = io.BytesIO()
    from_memory = run_stream(IngestSource.memory(data), LINES_LF, output=sink)
    with open(tmp_path / "out.txt", "wb") as out:
        from_file = run_stream(IngestSource.file(path), LINES_LF, output=out)

    assert from_file.unique_records == from_memory.unique_records
    slow, fast = max(from_file.dedup_us, from_memory.dedup_us), min(
        from_file.dedup_us, from_memory.dedup_us
    )
    assert fast > 0
    assert slow / fast < 10
