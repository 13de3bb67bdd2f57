"""Acceptance suite: one test per release criterion, each printing a verdict line.

Latency criteria assert orderings and generous bounds rather than absolute
microseconds, which are hardware-specific; count criteria are exact.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time

import pytest

from bytededup.audit import (
    account_divergence,
    make_mixed_ending_corpus,
    random_line_corpus,
    verify_determinism,
    verify_equivalence,
)
from bytededup.bench import (
    WORKLOADS,
    Mode,
    generate_workload,
    measure_matrix,
    write_workload,
)
from bytededup.core import dedup_ordered, multiplicity
from bytededup.stream import LINES_LF, IngestSource, jsonl, tokenize
from bytededup.telemetry import parse_telemetry
from oracle import quadratic_first_occurrence

CLI = [sys.executable, "-m", "bytededup"]

TABLE_EXPECTATIONS = [
    ("rag_topk15", 15, 30, 3.00),
    ("long_context_rag", 50, 50, 2.00),
    ("multi_turn_snowball", 10, 45, 5.50),
    ("minimal_rag", 5, 0, 1.00),
    ("large_context", 100, 0, 1.00),
]


def _verdict(name: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL: " + "; ".join(failures)
    print(f"[ACCEPTANCE] {name}: {status}")
    assert not failures, f"{name}: {failures}"


@pytest.fixture(scope="session")
def seed42_jsonl(tmp_path_factory):
    path = tmp_path_factory.mktemp("acceptance") / "synthetic_200k.jsonl"
    write_workload(generate_workload(WORKLOADS["synthetic_200k"]), path, "jsonl", field="text")
    return path


def test_criterion_dataset_count_reproduction(seed42_jsonl):
    failures = []
    start = time.perf_counter()
    proc = subprocess.run(
        CLI + ["--input", str(seed42_jsonl), "--format", "jsonl"],
        stdout=subprocess.DEVNULL, stderr=subprocess.PIPE, timeout=120,
    )
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        failures.append(f"CLI exited {proc.returncode}")
    else:
        line = parse_telemetry(proc.stderr.decode())
        if (line.unique_count, line.duplicate_count, line.novelty_count) != (100_000, 100_000, 0):
            failures.append(f"counters {line}")
    if elapsed >= 30:
        failures.append(f"took {elapsed:.1f}s (budget 30s)")
    _verdict("200k-dataset count reproduction", failures)


def test_criterion_zero_violation_battery(seed42_jsonl):
    failures = []
    start = time.perf_counter()

    verdict = verify_equivalence(IngestSource.file(seed42_jsonl), jsonl("text"))
    if verdict.violation or verdict.engine_unique != 100_000:
        failures.append(f"seed-42 dataset verdict: {verdict}")

    rng = random.Random(20260810)
    corpora = 10_000
    violations = []
    for i in range(corpora):
        if i == 0:
            size = 0
        elif i == 1:
            size = 10_000
        else:
            size = int(10 ** rng.uniform(0, 4))
        blob = random_line_corpus(rng, size=size)
        verdict = verify_equivalence(IngestSource.memory(blob), corpus_id=f"battery-{i}")
        if verdict.violation:
            violations.append(verdict)
    elapsed = time.perf_counter() - start
    if violations:
        failures.append(f"{len(violations)} violations, first: {violations[0]}")
    if elapsed >= 600:
        failures.append(f"took {elapsed:.0f}s (budget 600s)")
    _verdict(f"math-equivalence battery ({corpora} corpora)", failures)


def test_criterion_determinism(seed42_jsonl, tmp_path):
    failures = []
    start = time.perf_counter()
    worker_counts = [1, 2, os.cpu_count() or 1]

    check = verify_determinism(
        IngestSource.file(seed42_jsonl), jsonl("text"), runs=3, worker_counts=worker_counts
    )
    if not check.passed:
        failures.append(f"seed-42 dataset diverged: {check.divergent}")

    for name, *_ in TABLE_EXPECTATIONS:
        path = tmp_path / f"{name}.txt"
        write_workload(generate_workload(WORKLOADS[name]), path)
        check = verify_determinism(
            IngestSource.file(path), LINES_LF, runs=3, worker_counts=worker_counts
        )
        if not check.passed:
            failures.append(f"{name} diverged: {check.divergent}")

    elapsed = time.perf_counter() - start
    if elapsed >= 120:
        failures.append(f"took {elapsed:.0f}s (budget 120s)")
    _verdict("output determinism (runs x workers)", failures)


def test_criterion_first_occurrence_oracle_equivalence():
    failures = []
    rng = random.Random(77)
    trials = 1_000
    for i in range(trials):
        n = rng.randrange(0, 1001) if rng.random() < 0.05 else rng.randrange(0, 160)
        k = rng.randrange(1, 64)
        pool = [rng.randbytes(rng.randrange(0, 257)) for _ in range(k)]
        records = [pool[rng.randrange(k)] for _ in range(n)]
        result = dedup_ordered(records)
        if list(result.unique_records) != quadratic_first_occurrence(records):
            failures.append(f"trial {i} diverged from quadratic oracle")
            break
    _verdict(f"first-occurrence oracle equivalence ({trials} inputs)", failures)


def test_criterion_deployment_mode_ladder():
    failures = []
    start = time.perf_counter()
    reports = measure_matrix(
        [Mode.IN_PROCESS, Mode.PIPE_SUBPROCESS, Mode.TEMPFILE_SUBPROCESS],
        WORKLOADS["rag_call15"], trials=300, warmup=10,
    )
    by_mode = {rep.mode: rep for rep in reports}
    m_in = by_mode[Mode.IN_PROCESS].median_us
    m_pipe = by_mode[Mode.PIPE_SUBPROCESS].median_us
    m_temp = by_mode[Mode.TEMPFILE_SUBPROCESS].median_us
    print(f"  ladder medians: in_process={m_in}us pipe={m_pipe}us tempfile={m_temp}us")
    if not m_in < m_pipe:
        failures.append(f"in_process {m_in}us !< pipe {m_pipe}us")
    if not m_pipe < m_temp:
        failures.append(f"pipe {m_pipe}us !< tempfile {m_temp}us")
    if not m_in < 1000:
        failures.append(f"in_process median {m_in}us !< 1ms")
    elapsed = time.perf_counter() - start
    if elapsed >= 300:
        failures.append(f"took {elapsed:.0f}s (budget 300s)")
    _verdict("deployment-mode ladder ordering", failures)


def test_criterion_workload_multiplicity_tuples():
    failures = []
    for name, unique, duplicates, rho in TABLE_EXPECTATIONS:
        spec = WORKLOADS[name]
        result = dedup_ordered(generate_workload(spec))
        stats = multiplicity(result, spec.chunks)
        got = (result.unique_count, result.duplicate_count, stats.rho)
        if got != (unique, duplicates, rho):
            failures.append(f"{name}: {got} != {(unique, duplicates, rho)}")
    _verdict("workload multiplicity tuples", failures)


def test_criterion_splitter_divergence_identity():
    failures = []
    for k in (0, 1, 5, 50):
        blob = make_mixed_ending_corpus(k, uniform_lines=40, seed=k)
        account = account_divergence(IngestSource.memory(blob))
        if account.lf_unique - account.normalizing_unique != k:
            failures.append(
                f"k={k}: lf {account.lf_unique} - norm {account.normalizing_unique} != {k}"
            )
        if account.mixed_ending_classes != k:
            failures.append(f"k={k}: classifier found {account.mixed_ending_classes}")
    _verdict("splitter divergence identity", failures)


def test_criterion_telemetry_hygiene(tmp_path):
    failures = []

    corpora = {
        "lines": b"\n".join(generate_workload(WORKLOADS["long_context_rag"])) + b"\n",
        "mixed": make_mixed_ending_corpus(5, seed=9),
        "empty": b"",
    }
    for label, data in corpora.items():
        with_stats = subprocess.run(CLI, input=data, capture_output=True, timeout=120)
        without = subprocess.run(CLI + ["--no-stats"], input=data, capture_output=True, timeout=120)
        if with_stats.stdout != without.stdout:
            failures.append(f"{label}: primary output differs with stats toggled")
        if without.stderr != b"":
            failures.append(f"{label}: --no-stats still wrote diagnostics")
        line = parse_telemetry(with_stats.stderr.decode())
        total = len(tokenize(data, LINES_LF))
        if line.unique_count + line.duplicate_count != total:
            failures.append(f"{label}: counters do not conserve ({line})")

    rng = random.Random(4)
    for i in range(200):
        blob = random_line_corpus(rng, size=rng.randrange(0, 300))
        records = tokenize(blob, LINES_LF)
        result = dedup_ordered(records)
        if result.unique_count + result.duplicate_count != len(records):
            failures.append(f"conservation broke on sweep corpus {i}")
            break
    _verdict("telemetry hygiene and counter conservation", failures)
