"""Byte-stream ingestion, record framing, and the deterministic stream driver.

Framing modes:

* ``LINES_LF`` splits on byte 0x0A only; 0x0D is ordinary record content
  and is never stripped. This is the canonical tokenizer.
* ``LINES_CRLF_NORMALIZING`` splits on optional-0x0D-then-0x0A and drops
  that 0x0D. It exists for divergence accounting against the LF-only
  rule, not for production use.
* ``jsonl(field)`` treats each LF-delimited line as a JSON object and
  takes the UTF-8 encoding of the named field's text value as the record.
  Malformed lines abort with the 1-based line number (fail-closed).

A final byte run without a trailing LF is a record; input ending in LF
yields no trailing empty record. Emitted output is the survivors joined
by single LF bytes with no trailing LF after the last one, and is a pure
function of (input bytes, framing mode): byte-identical for every worker
count and across repeated runs.
"""

from __future__ import annotations

import io
import itertools
import json
import sys
import time
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

from .core import DedupResult, FingerprintIndex, build_index
from .errors import FramingError, IngestError, WriteError

_READ_SIZE = 256 * 1024
_BLOCK_RECORDS = 8192
_PARALLEL_MIN_RECORDS = 1024  # below this, dispatch overhead dwarfs the work


@dataclass(frozen=True)
class FramingMode:
    kind: str
    field: str | None = None


LINES_LF = FramingMode("lines_lf")
LINES_CRLF_NORMALIZING = FramingMode("lines_crlf_normalizing")


def jsonl(field: str) -> FramingMode:
    """Framing mode that extracts ``field`` from JSON-object lines."""
    if not field:
        raise ValueError("jsonl framing requires a field name")
    return FramingMode("jsonl", field)


@dataclass(frozen=True)
class IngestSource:
    """Where bytes come from: a file path, standard input, or a buffer.

    Bytes are consumed exactly once, in order, with no transcoding.
    """

    kind: str
    path: str | None = None
    buffer: bytes | None = None

    @staticmethod
    def file(path) -> "IngestSource":
        return IngestSource("file", path=str(path))

    @staticmethod
    def stdin() -> "IngestSource":
        return IngestSource("stdin")

    @staticmethod
    def memory(buffer: bytes) -> "IngestSource":
        return IngestSource("memory", buffer=buffer)

    def open(self) -> BinaryIO:
        if self.kind == "file":
            try:
                return open(self.path, "rb")
            except OSError as exc:
                raise IngestError(f"cannot open {self.path}: {exc}") from exc
        if self.kind == "stdin":
            return sys.stdin.buffer
        if self.kind == "memory":
            return io.BytesIO(self.buffer or b"")
        raise ValueError(f"unknown source kind: {self.kind}")


def _iter_lf_runs(stream: BinaryIO) -> Iterator[tuple[bytes, bool]]:
    """Yield (run, lf_terminated) for every delimiter-separated byte run."""
    pending = b""
    while True:
        try:
            chunk = stream.read(_READ_SIZE)
        except OSError as exc:
            raise IngestError(f"read failed: {exc}") from exc
        if not chunk:
            break
        pending += chunk
        if b"\n" not in chunk:
            continue
        runs = pending.split(b"\n")
        pending = runs.pop()
        for run in runs:
            yield run, True
    if pending:
        yield pending, False


def iter_records(stream: BinaryIO, mode: FramingMode) -> Iterator[bytes]:
    """Frame a binary stream into records under ``mode``, incrementally."""
    if mode.kind == "lines_lf":
        for run, _terminated in _iter_lf_runs(stream):
            yield run
    elif mode.kind == "lines_crlf_normalizing":
        for run, terminated in _iter_lf_runs(stream):
            if terminated and run.endswith(b"\r"):
                run = run[:-1]  # only the 0x0D adjacent to the delimiter
            yield run
    elif mode.kind == "jsonl":
        if not mode.field:
            raise ValueError("jsonl framing requires a field name")
        for lineno, (run, _terminated) in enumerate(_iter_lf_runs(stream), 1):
            yield _field_bytes(run, mode.field, lineno)
    else:
        raise ValueError(f"unknown framing mode: {mode.kind}")


def _field_bytes(line: bytes, field: str, lineno: int) -> bytes:
    try:
        obj = json.loads(line)
    except ValueError as exc:
        raise FramingError(f"line {lineno}: invalid JSON: {exc}", line=lineno) from exc
    if not isinstance(obj, dict):
        raise FramingError(f"line {lineno}: not a JSON object", line=lineno)
    if field not in obj:
        raise FramingError(f"line {lineno}: missing field {field!r}", line=lineno)
    value = obj[field]
    if not isinstance(value, str):
        raise FramingError(f"line {lineno}: field {field!r} is not text", line=lineno)
    return value.encode("utf-8")


def tokenize(data: bytes, mode: FramingMode = LINES_LF) -> list[bytes]:
    """Frame an in-memory byte sequence into records (line modes only)."""
    if mode.kind == "jsonl":
        raise ValueError("use parse_jsonl for JSONL framing")
    return list(iter_records(io.BytesIO(data), mode))


def parse_jsonl(data: bytes, field: str) -> list[bytes]:
    """Extract the named text field from each LF-delimited JSON object line."""
    return list(iter_records(io.BytesIO(data), jsonl(field)))


def _local_first_occurrence(task: tuple[int, list[bytes]]) -> tuple[int, list[tuple[int, bytes]]]:
    offset, records = task
    index = FingerprintIndex()
    return offset, [(i, rec) for i, rec in enumerate(records) if index.add(rec)]


def run_stream(
    source: IngestSource,
    mode: FramingMode = LINES_LF,
    workers: int = 1,
    *,
    output: BinaryIO | None = None,
    baseline: Iterable[bytes] | None = None,
    block_records: int = _BLOCK_RECORDS,
) -> DedupResult:
    """Dedup a byte stream, emitting survivors in first-occurrence order.

    The input is consumed in fixed-size contiguous blocks. With workers > 1
    each block is split into contiguous slices whose block-local first
    occurrences are computed concurrently; a sequential reconciliation pass
    then assigns global winners by original index, so the observable output
    is independent of the worker count. Memory grows with unique bytes
    plus bounded per-block bookkeeping, not with duplicate volume.

    dedup_us covers the dedup passes only; ingestion, framing, and
    emission I/O are excluded.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    baseline_index = build_index(baseline) if baseline is not None else None

    stream = source.open()
    close_stream = source.kind == "file"
    pool = None  # created on the first block large enough to dispatch
    index = FingerprintIndex()
    unique: list[bytes] = []
    first_indices: list[int] = []
    novelty = 0
    total = 0
    dedup_ns = 0
    emitted_any = False
    try:
        records = iter_records(stream, mode)
        while True:
            block = list(itertools.islice(records, block_records))
            if not block:
                break
            base = total
            total += len(block)

            if workers > 1 and pool is None and len(block) >= _PARALLEL_MIN_RECORDS:
                from concurrent.futures import ThreadPoolExecutor

                pool = ThreadPoolExecutor(max_workers=workers)

            start = time.perf_counter_ns()
            if pool is None or len(block) < _PARALLEL_MIN_RECORDS:
                fresh = [
                    (base + i + 1, rec)
                    for i, rec in enumerate(block)
                    if index.add(rec)
                ]
            else:
                step = -(-len(block) // workers)
                tasks = [
                    (off, block[off : off + step]) for off in range(0, len(block), step)
                ]
                fresh = []
                for offset, local in pool.map(_local_first_occurrence, tasks):
                    for i, rec in local:
                        if index.add(rec):
                            fresh.append((base + offset + i + 1, rec))
            dedup_ns += time.perf_counter_ns() - start

            for position, rec in fresh:
                first_indices.append(position)
                unique.append(rec)
                if baseline_index is not None and rec not in baseline_index:
                    novelty += 1
            if output is not None and fresh:
                payload = b"\n".join(rec for _position, rec in fresh)
                if emitted_any:
                    payload = b"\n" + payload
                try:
                    output.write(payload)
                except OSError as exc:
                    raise WriteError(f"write failed: {exc}") from exc
                emitted_any = True
    finally:
        if pool is not None:
            pool.shutdown(wait=True)
        if close_stream:
            stream.close()

    return DedupResult(
        unique_records=tuple(unique),
        unique_count=len(unique),
        duplicate_count=total - len(unique),
        novelty_count=novelty,
        dedup_us=round(dedup_ns / 1000),
        first_indices=tuple(first_indices),
    )
