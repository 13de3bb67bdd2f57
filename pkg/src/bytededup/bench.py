"""Synthetic workload generation and the deployment-mode latency ladder.

Three deployment modes are measured per call: an in-process function call
over pre-framed records, a subprocess fed through stdin/stdout pipes, and
a subprocess handed a temp input file that writes a temp output file. The
dedup work is the same in all three; what differs is the operating-system
overhead the integration chooses to pay, so the portable claim is the
ordering of the medians, not their absolute values.

Percentiles use the nearest-rank method: the p-th percentile of n sorted
samples is the value at rank ceil(p/100 * n).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import shutil
import string
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

from .core import dedup_ordered
from .errors import ConfigError, HarnessError

_ALPHABET = string.ascii_letters + string.digits + " .,:;-_/+()"


class Mode(Enum):
    IN_PROCESS = "in_process"
    PIPE_SUBPROCESS = "pipe_subprocess"
    TEMPFILE_SUBPROCESS = "tempfile_subprocess"


_MODE_ORDER = {Mode.IN_PROCESS: 0, Mode.PIPE_SUBPROCESS: 1, Mode.TEMPFILE_SUBPROCESS: 2}


@dataclass(frozen=True)
class WorkloadSpec:
    """Parameters of a synthetic benchmark payload.

    ``block`` repetition repeats the whole unique set chunks/unique times
    (and requires divisibility); ``shuffled`` interleaves the duplicates
    pseudo-randomly under the seed.
    """

    name: str
    chunks: int
    unique: int
    record_bytes: int
    seed: int = 42
    repetition_pattern: str = "block"

    def validate(self) -> None:
        if self.unique < 1:
            raise ConfigError(f"{self.name}: unique must be >= 1")
        if self.chunks < self.unique:
            raise ConfigError(f"{self.name}: chunks must be >= unique")
        if self.record_bytes < 1:
            raise ConfigError(f"{self.name}: record_bytes must be >= 1")
        if self.repetition_pattern not in ("block", "shuffled"):
            raise ConfigError(f"{self.name}: unknown repetition_pattern {self.repetition_pattern!r}")
        if self.repetition_pattern == "block" and self.chunks % self.unique:
            raise ConfigError(f"{self.name}: block pattern needs chunks divisible by unique")
        space = len(_ALPHABET) ** min(self.record_bytes, 10)
        if space < 4 * self.unique:
            raise ConfigError(f"{self.name}: record_bytes too small for {self.unique} distinct records")


# Record sizes approximate the per-chunk byte totals of typical RAG-style
# payloads at each redundancy level; dedup counters are exact by construction.
WORKLOADS: dict[str, WorkloadSpec] = {
    "rag_topk15": WorkloadSpec("rag_topk15", chunks=45, unique=15, record_bytes=2963),
    "long_context_rag": WorkloadSpec("long_context_rag", chunks=100, unique=50, record_bytes=4000),
    "multi_turn_snowball": WorkloadSpec("multi_turn_snowball", chunks=55, unique=10,
                                        record_bytes=5721, repetition_pattern="shuffled"),
    "minimal_rag": WorkloadSpec("minimal_rag", chunks=5, unique=5, record_bytes=3072),
    "large_context": WorkloadSpec("large_context", chunks=100, unique=100, record_bytes=4000),
    # One retrieval call: 5 unique ~500-byte passages, each appearing 3x.
    "rag_call15": WorkloadSpec("rag_call15", chunks=15, unique=5, record_bytes=500),
    # 200k-record dataset with every entry duplicated once (seed 42).
    "synthetic_200k": WorkloadSpec("synthetic_200k", chunks=200_000, unique=100_000, record_bytes=40),
}


def generate_workload(spec: WorkloadSpec) -> list[bytes]:
    """Deterministic payload: exactly spec.unique distinct records, spec.chunks total."""
    spec.validate()
    rng = random.Random(spec.seed)
    seen: set[bytes] = set()
    uniques: list[bytes] = []
    while len(uniques) < spec.unique:
        body = "".join(rng.choices(_ALPHABET, k=spec.record_bytes)).encode("ascii")
        if body not in seen:
            seen.add(body)
            uniques.append(body)
    if spec.repetition_pattern == "block":
        return uniques * (spec.chunks // spec.unique)
    records = list(uniques)
    records += rng.choices(uniques, k=spec.chunks - spec.unique)
    rng.shuffle(records)
    return records


def write_workload(records: Iterable[bytes], path: str, fmt: str = "lines", field: str = "text") -> None:
    """Serialize records to a file as LF-joined lines or as JSONL objects."""
    with open(path, "wb") as handle:
        if fmt == "lines":
            handle.write(b"\n".join(records))
        elif fmt == "jsonl":
            for rec in records:
                line = json.dumps({field: rec.decode("ascii")}, separators=(",", ":"))
                handle.write(line.encode("ascii") + b"\n")
        else:
            raise ConfigError(f"unknown workload file format {fmt!r}")


def _nearest_rank(ordered: Sequence[int], pct: float) -> int:
    rank = max(1, math.ceil(pct / 100.0 * len(ordered)))
    return ordered[rank - 1]


@dataclass(frozen=True)
class LatencyReport:
    """Per-call timing samples for one deployment mode, in microseconds."""

    mode: Mode
    samples: tuple[int, ...]
    median_us: int
    p95_us: int
    p99_us: int
    trials: int
    warmup_calls: int

    @staticmethod
    def from_samples(mode: Mode, samples: Sequence[int], warmup_calls: int) -> "LatencyReport":
        if not samples:
            raise ValueError("at least one sample required")
        ordered = sorted(samples)
        return LatencyReport(
            mode=mode,
            samples=tuple(samples),
            median_us=_nearest_rank(ordered, 50),
            p95_us=_nearest_rank(ordered, 95),
            p99_us=_nearest_rank(ordered, 99),
            trials=len(samples),
            warmup_calls=warmup_calls,
        )


def default_cli_cmd() -> list[str]:
    exe = shutil.which("bytededup")
    if exe:
        return [exe]
    return [sys.executable, "-m", "bytededup"]


# A payload this small fits the OS pipe buffer, so one blocking write
# cannot deadlock against the child's unread stdout.
_PIPE_DIRECT_MAX = 32 * 1024


def _pipe_trial(cmd: list[str], payload: bytes) -> None:
    if len(payload) > _PIPE_DIRECT_MAX:
        try:
            proc = subprocess.run(cmd, input=payload,
                                  stdout=subprocess.PIPE, stderr=subprocess.DEVNULL)
        except OSError as exc:
            raise HarnessError(f"{Mode.PIPE_SUBPROCESS.value}: cannot launch CLI {cmd[0]!r}: {exc}") from exc
        returncode = proc.returncode
    else:
        try:
            proc = subprocess.Popen(cmd, stdin=subprocess.PIPE,
                                    stdout=subprocess.PIPE, stderr=subprocess.DEVNULL)
        except OSError as exc:
            raise HarnessError(f"{Mode.PIPE_SUBPROCESS.value}: cannot launch CLI {cmd[0]!r}: {exc}") from exc
        try:
            proc.stdin.write(payload)
            proc.stdin.close()
        except BrokenPipeError:
            pass  # the child's exit status reports the failure
        proc.stdout.read()
        proc.stdout.close()
        returncode = proc.wait()
    if returncode != 0:
        raise HarnessError(f"{Mode.PIPE_SUBPROCESS.value}: CLI exited with status {returncode}")


def _tempfile_trial(cmd: list[str], payload: bytes, tmp: str) -> None:
    # Each call materializes and disposes its own temp files; no stdio pipes
    # are created because a file-based integration passes paths, not bytes.
    fd, in_path = tempfile.mkstemp(dir=tmp, suffix=".in")
    out_path = in_path + ".out"
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        try:
            proc = subprocess.run(cmd + ["--input", in_path, "--output", out_path],
                                  stdin=subprocess.DEVNULL, stdout=subprocess.DEVNULL,
                                  stderr=subprocess.DEVNULL)
        except OSError as exc:
            raise HarnessError(f"{Mode.TEMPFILE_SUBPROCESS.value}: cannot launch CLI {cmd[0]!r}: {exc}") from exc
        if proc.returncode != 0:
            raise HarnessError(f"{Mode.TEMPFILE_SUBPROCESS.value}: CLI exited with status {proc.returncode}")
        with open(out_path, "rb") as fh:
            fh.read()
    finally:
        os.unlink(in_path)
        if os.path.exists(out_path):
            os.unlink(out_path)


def _make_caller(mode: Mode, records: list[bytes], payload: bytes,
                 cmd: list[str], tmp: str) -> Callable[[], None]:
    if mode is Mode.IN_PROCESS:
        def call() -> None:
            dedup_ordered(records)
    elif mode is Mode.PIPE_SUBPROCESS:
        def call() -> None:
            _pipe_trial(cmd, payload)
    elif mode is Mode.TEMPFILE_SUBPROCESS:
        def call() -> None:
            _tempfile_trial(cmd, payload, tmp)
    else:
        raise ConfigError(f"unknown mode {mode!r}")
    return call


def _validate_sampling(trials: int, warmup: int) -> None:
    if trials < 30:
        raise ConfigError("trials must be >= 30")
    if warmup < 0:
        raise ConfigError("warmup must be >= 0")


def measure_mode(
    mode: Mode,
    spec: WorkloadSpec,
    trials: int = 100,
    warmup: int = 10,
    cli_cmd: Sequence[str] | None = None,
) -> LatencyReport:
    """Per-call wall-clock latency of one deployment mode over a generated workload.

    IN_PROCESS times only the dedup call on pre-framed records.
    PIPE_SUBPROCESS times spawn + stdin write + stdout read + wait.
    TEMPFILE_SUBPROCESS times the temp input file write, the spawn and wait
    of the file-driven CLI, the output file read, and the temp file
    disposal. Warmup calls are excluded from the samples.
    """
    _validate_sampling(trials, warmup)
    records = generate_workload(spec)
    payload = b"\n".join(records)
    cmd = list(cli_cmd) if cli_cmd is not None else default_cli_cmd()
    with tempfile.TemporaryDirectory(prefix="bytededup-bench-") as tmp:
        call = _make_caller(mode, records, payload, cmd, tmp)
        for _ in range(warmup):
            call()
        samples = []
        for _ in range(trials):
            start = time.perf_counter_ns()
            call()
            samples.append(round((time.perf_counter_ns() - start) / 1000))
        return LatencyReport.from_samples(mode, samples, warmup)


def measure_matrix(
    modes: Sequence[Mode],
    spec: WorkloadSpec,
    trials: int = 100,
    warmup: int = 10,
    cli_cmd: Sequence[str] | None = None,
) -> list[LatencyReport]:
    """One LatencyReport per mode, with trials interleaved round-robin.

    Interleaving keeps slow host drift (thermal, background load) from
    biasing any single mode's batch, so cross-mode median comparisons stay
    meaningful. Per-mode sample counts and percentile handling are the
    same as measure_mode.
    """
    _validate_sampling(trials, warmup)
    ordered_modes = sorted(set(modes), key=lambda mode: _MODE_ORDER[mode])
    if not ordered_modes:
        raise ConfigError("at least one mode required")
    records = generate_workload(spec)
    payload = b"\n".join(records)
    cmd = list(cli_cmd) if cli_cmd is not None else default_cli_cmd()
    with tempfile.TemporaryDirectory(prefix="bytededup-bench-") as tmp:
        callers = {mode: _make_caller(mode, records, payload, cmd, tmp) for mode in ordered_modes}
        for _ in range(warmup):
            for mode in ordered_modes:
                callers[mode]()
        samples: dict[Mode, list[int]] = {mode: [] for mode in ordered_modes}
        for _ in range(trials):
            for mode in ordered_modes:
                start = time.perf_counter_ns()
                callers[mode]()
                samples[mode].append(round((time.perf_counter_ns() - start) / 1000))
    return [LatencyReport.from_samples(mode, samples[mode], warmup) for mode in ordered_modes]


def render_report(reports: Sequence[LatencyReport]) -> str:
    """Plain-text summary table, one row per mode, fastest integration first."""
    if not reports:
        raise ValueError("at least one report required")
    rows = sorted(reports, key=lambda rep: _MODE_ORDER[rep.mode])
    lines = [f"{'mode':<22}{'trials':>8}{'median_us':>12}{'p95_us':>10}{'p99_us':>10}"]
    for rep in rows:
        lines.append(
            f"{rep.mode.value:<22}{rep.trials:>8}{rep.median_us:>12}{rep.p95_us:>10}{rep.p99_us:>10}"
        )
    return "\n".join(lines) + "\n"


def report_jsonl(reports: Sequence[LatencyReport]) -> str:
    """Machine-readable variant; parse_report_jsonl inverts it exactly."""
    rows = sorted(reports, key=lambda rep: _MODE_ORDER[rep.mode])
    out = []
    for rep in rows:
        out.append(json.dumps({
            "mode": rep.mode.value,
            "trials": rep.trials,
            "warmup_calls": rep.warmup_calls,
            "median_us": rep.median_us,
            "p95_us": rep.p95_us,
            "p99_us": rep.p99_us,
            "samples": list(rep.samples),
        }, separators=(",", ":")))
    return "\n".join(out) + "\n"


def parse_report_jsonl(text: str) -> list[LatencyReport]:
    reports = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        reports.append(LatencyReport(
            mode=Mode(obj["mode"]),
            samples=tuple(obj["samples"]),
            median_us=obj["median_us"],
            p95_us=obj["p95_us"],
            p99_us=obj["p99_us"],
            trials=obj["trials"],
            warmup_calls=obj["warmup_calls"],
        ))
    return reports


def _spec_from_args(args: argparse.Namespace) -> WorkloadSpec:
    if args.workload is not None:
        if args.workload not in WORKLOADS:
            raise ConfigError(f"unknown workload {args.workload!r}; known: {', '.join(sorted(WORKLOADS))}")
        spec = WORKLOADS[args.workload]
        if args.seed is not None:
            spec = WorkloadSpec(spec.name, spec.chunks, spec.unique, spec.record_bytes,
                                args.seed, spec.repetition_pattern)
        return spec
    if args.chunks is None or args.unique is None:
        raise ConfigError("either --workload or both --chunks and --unique are required")
    return WorkloadSpec(
        name=args.name,
        chunks=args.chunks,
        unique=args.unique,
        record_bytes=args.record_bytes,
        seed=args.seed if args.seed is not None else 42,
        repetition_pattern=args.pattern,
    )


def _add_spec_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--workload", default=None,
                        help=f"named workload: {', '.join(sorted(WORKLOADS))}")
    parser.add_argument("--chunks", type=int, default=None, help="total records (custom spec)")
    parser.add_argument("--unique", type=int, default=None, help="distinct records (custom spec)")
    parser.add_argument("--record-bytes", type=int, default=500, help="bytes per record (custom spec)")
    parser.add_argument("--seed", type=int, default=None, help="generator seed (default 42)")
    parser.add_argument("--pattern", choices=("block", "shuffled"), default="block")
    parser.add_argument("--name", default="custom", help="name for a custom spec")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bytededup-bench",
        description="Generate dedup workloads and measure the deployment-mode latency ladder.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a workload payload to a file")
    _add_spec_flags(p_gen)
    p_gen.add_argument("--output", required=True, help="destination file")
    p_gen.add_argument("--file-format", choices=("lines", "jsonl"), default="lines")
    p_gen.add_argument("--field", default="text", help="JSON field name for jsonl output")

    p_meas = sub.add_parser("measure", help="run a mode matrix and print the report")
    _add_spec_flags(p_meas)
    p_meas.add_argument("--modes", default="in_process,pipe_subprocess,tempfile_subprocess",
                        help="comma-separated mode list")
    p_meas.add_argument("--trials", type=int, default=100)
    p_meas.add_argument("--warmup", type=int, default=10)
    p_meas.add_argument("--json", action="store_true", help="emit the machine-readable report")
    p_meas.add_argument("--cli-cmd", default=None,
                        help="override the CLI command line (whitespace-separated)")

    p_rep = sub.add_parser("report", help="render a machine-readable report as text")
    p_rep.add_argument("--input", required=True, help="report JSONL file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            spec = _spec_from_args(args)
            write_workload(generate_workload(spec), args.output, args.file_format, args.field)
            print(f"wrote {spec.chunks} records ({spec.unique} unique) to {args.output}")
            return 0
        if args.command == "measure":
            spec = _spec_from_args(args)
            modes = [Mode(m.strip().replace("-", "_")) for m in args.modes.split(",") if m.strip()]
            cli_cmd = args.cli_cmd.split() if args.cli_cmd else None
            reports = measure_matrix(modes, spec, trials=args.trials, warmup=args.warmup, cli_cmd=cli_cmd)
            sys.stdout.write(report_jsonl(reports) if args.json else render_report(reports))
            return 0
        if args.command == "report":
            with open(args.input, "r", encoding="utf-8") as fh:
                reports = parse_report_jsonl(fh.read())
            sys.stdout.write(render_report(reports))
            return 0
    except (ConfigError, HarnessError, OSError, ValueError) as exc:
        print(f"bytededup-bench: {exc}", file=sys.stderr)
        return 1
    return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
