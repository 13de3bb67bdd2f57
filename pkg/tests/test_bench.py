"""Workload generator, percentile bookkeeping, report round-trip, harness CLI."""

from __future__ import annotations

import subprocess
import sys

import pytest

from bytededup.bench import (
    WORKLOADS,
    LatencyReport,
    Mode,
    WorkloadSpec,
    generate_workload,
    main as bench_main,
    measure_matrix,
    measure_mode,
    parse_report_jsonl,
    render_report,
    report_jsonl,
    write_workload,
)
from bytededup.core import dedup_ordered, multiplicity
from bytededup.errors import ConfigError, HarnessError
from bytededup.stream import parse_jsonl, tokenize


def test_workload_deterministic_for_seed():
    spec = WORKLOADS["rag_topk15"]
    assert generate_workload(spec) == generate_workload(spec)
    reseeded = WorkloadSpec(spec.name, spec.chunks, spec.unique, spec.record_bytes, seed=1)
    assert generate_workload(reseeded) != generate_workload(spec)


def test_workload_counters_exact():
    spec = WORKLOADS["rag_topk15"]
    result = dedup_ordered(generate_workload(spec))
    assert (result.unique_count, result.duplicate_count) == (15, 30)
    stats = multiplicity(result, spec.chunks)
    assert stats.rho == pytest.approx(3.00)


def test_workload_record_sizes():
    spec = WORKLOADS["rag_call15"]
    records = generate_workload(spec)
    assert len(records) == 15
    assert all(len(rec) == 500 for rec in records)


def test_shuffled_pattern_counters():
    spec = WorkloadSpec("shuffle", chunks=57, unique=10, record_bytes=32,
                        seed=9, repetition_pattern="shuffled")
    records = generate_workload(spec)
    result = dedup_ordered(records)
    assert (result.unique_count, result.duplicate_count) == (10, 47)


def test_workload_validation_errors():
    with pytest.raises(ConfigError):
        generate_workload(WorkloadSpec("bad", chunks=10, unique=0, record_bytes=8))
    with pytest.raises(ConfigError):
        generate_workload(WorkloadSpec("bad", chunks=4, unique=5, record_bytes=8))
    with pytest.raises(ConfigError):
        generate_workload(WorkloadSpec("bad", chunks=10, unique=3, record_bytes=8))  # not divisible
    with pytest.raises(ConfigError):
        generate_workload(WorkloadSpec("bad", chunks=100, unique=100, record_bytes=1))


def test_write_workload_round_trips(tmp_path):
    records = generate_workload(WORKLOADS["minimal_rag"])
    lines_path = tmp_path / "w.txt"
    jsonl_path = tmp_path / "w.jsonl"
    write_workload(records, lines_path, "lines")
    write_workload(records, jsonl_path, "jsonl", field="text")
    assert tokenize(lines_path.read_bytes()) == records
    assert parse_jsonl(jsonl_path.read_bytes(), "text") == records


def test_nearest_rank_percentiles():
    samples = list(range(100, 0, -1))  # given in completion order, unsorted
    report = LatencyReport.from_samples(Mode.IN_PROCESS, samples, warmup_calls=0)
    assert report.median_us == 50
    assert report.p95_us == 95
    assert report.p99_us == 99
    assert report.median_us <= report.p95_us <= report.p99_us


def test_nearest_rank_single_sample():
    report = LatencyReport.from_samples(Mode.IN_PROCESS, [42], warmup_calls=0)
    assert (report.median_us, report.p95_us, report.p99_us) == (42, 42, 42)


def test_measure_in_process_bookkeeping():
    report = measure_mode(Mode.IN_PROCESS, WORKLOADS["rag_call15"], trials=30, warmup=3)
    assert report.trials == 30
    assert len(report.samples) == 30
    assert report.warmup_calls == 3
    assert report.median_us <= report.p95_us <= report.p99_us


def test_measure_rejects_too_few_trials():
    with pytest.raises(ConfigError):
        measure_mode(Mode.IN_PROCESS, WORKLOADS["rag_call15"], trials=29)


def test_measure_unlaunchable_cli_names_mode():
    with pytest.raises(HarnessError) as err:
        measure_mode(Mode.PIPE_SUBPROCESS, WORKLOADS["minimal_rag"],
                     trials=30, warmup=0, cli_cmd=["/no/such/binary"])
    assert "pipe_subprocess" in str(err.value)


def test_pipe_subprocess_smoke():
    report = measure_mode(Mode.PIPE_SUBPROCESS, WORKLOADS["rag_call15"], trials=30, warmup=2)
    assert report.trials == 30
    assert report.median_us > 0


def test_report_round_trip():
    reports = [
        LatencyReport.from_samples(Mode.TEMPFILE_SUBPROCESS, [5, 7, 6], 2),
        LatencyReport.from_samples(Mode.IN_PROCESS, [1, 2, 3, 4], 1),
    ]
    parsed = parse_report_jsonl(report_jsonl(reports))
    assert parsed == sorted(reports, key=lambda rep: rep.mode.value != "in_process")


def test_render_report_orders_modes():
    reports = [
        LatencyReport.from_samples(Mode.TEMPFILE_SUBPROCESS, [30], 0),
        LatencyReport.from_samples(Mode.PIPE_SUBPROCESS, [20], 0),
        LatencyReport.from_samples(Mode.IN_PROCESS, [10], 0),
    ]
    text = render_report(reports)
    rows = text.strip().splitlines()[1:]
    assert [row.split()[0] for row in rows] == [
        "in_process", "pipe_subprocess", "tempfile_subprocess",
    ]


def test_measure_matrix_reports_per_mode():
    reports = measure_matrix([Mode.IN_PROCESS], WORKLOADS["rag_call15"], trials=30, warmup=1)
    assert [rep.mode for rep in reports] == [Mode.IN_PROCESS]
    assert reports[0].trials == 30


def test_bench_cli_generate_and_report(tmp_path):
    out = tmp_path / "payload.jsonl"
    rc = bench_main(["generate", "--workload", "minimal_rag",
                     "--output", str(out), "--file-format", "jsonl"])
    assert rc == 0
    assert len(parse_jsonl(out.read_bytes(), "text")) == 5

    proc = subprocess.run(
        [sys.executable, "-m", "bytededup.bench", "measure", "--workload", "rag_call15",
         "--modes", "in_process", "--trials", "30", "--warmup", "1", "--json"],
        capture_output=True, timeout=300,
    )
    assert proc.returncode == 0
    reports = parse_report_jsonl(proc.stdout.decode())
    assert reports[0].mode is Mode.IN_PROCESS

    report_path = tmp_path / "report.jsonl"
    report_path.write_bytes(proc.stdout)
    rc = bench_main(["report", "--input", str(report_path)])
    assert rc == 0


def test_bench_cli_unknown_workload_fails():
    assert bench_main(["generate", "--workload", "nope", "--output", "/tmp/x"]) == 1


def test_bench_module_entrypoint():
    proc = subprocess.run(
        [sys.executable, "-m", "bytededup.bench", "generate", "--chunks", "6",
         "--unique", "3", "--record-bytes", "16", "--output", "/dev/null"],
        capture_output=True, timeout=120,
    )
    assert proc.returncode == 0
