"""Differential verification of the engine against an independent reference.

Three checks: math equivalence (engine survivors versus a plain set-based
first-occurrence scan on identically framed records), output determinism
(SHA-256 of emitted bytes across repeated runs and worker counts), and
splitter-divergence accounting (unique counts under the LF-only tokenizer
versus the CR-stripping one, with an explicit classification of the
classes that merge).

The reference scan shares the framing code with the engine but none of
its index code; framing itself is covered by the tokenizer golden tests.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .core import dedup_ordered
from .errors import DedupError, IngestError
from .stream import (
    LINES_CRLF_NORMALIZING,
    LINES_LF,
    FramingMode,
    IngestSource,
    iter_records,
    jsonl,
    run_stream,
    tokenize,
)


def reference_first_occurrence(records: Iterable[bytes]) -> list[bytes]:
    """Independent oracle: byte-keyed set scan, no fingerprint index involved."""
    seen: set[bytes] = set()
    out: list[bytes] = []
    for rec in records:
        if rec not in seen:
            seen.add(rec)
            out.append(rec)
    return out


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Outcome of one engine-versus-reference comparison.

    ``detail`` is the position in the ordered survivor lists where the two
    sides first differ (length mismatches point just past the shorter list).
    """

    corpus_id: str
    engine_unique: int
    oracle_unique: int
    violation: bool
    detail: int | None = None


def compare_survivors(
    corpus_id: str,
    engine_survivors: Sequence[bytes],
    oracle_survivors: Sequence[bytes],
) -> EquivalenceVerdict:
    """Verdict from two ordered survivor lists; any difference is a violation."""
    limit = min(len(engine_survivors), len(oracle_survivors))
    detail = None
    for i in range(limit):
        if engine_survivors[i] != oracle_survivors[i]:
            detail = i
            break
    if detail is None and len(engine_survivors) != len(oracle_survivors):
        detail = limit
    return EquivalenceVerdict(
        corpus_id=corpus_id,
        engine_unique=len(engine_survivors),
        oracle_unique=len(oracle_survivors),
        violation=detail is not None,
        detail=detail,
    )


def _describe(source: IngestSource) -> str:
    if source.kind == "file":
        return source.path or "file"
    if source.kind == "stdin":
        return "stdin"
    return f"memory:{len(source.buffer or b'')}B"


def _framed(source: IngestSource, mode: FramingMode) -> list[bytes]:
    handle = source.open()
    try:
        return list(iter_records(handle, mode))
    finally:
        if source.kind == "file":
            handle.close()


def verify_equivalence(
    source: IngestSource,
    mode: FramingMode = LINES_LF,
    corpus_id: str | None = None,
) -> EquivalenceVerdict:
    """Engine and reference run on identically framed records; compare survivors."""
    records = _framed(source, mode)
    engine = dedup_ordered(records).unique_records
    oracle = reference_first_occurrence(records)
    return compare_survivors(corpus_id or _describe(source), engine, oracle)


@dataclass(frozen=True)
class DeterminismCheck:
    """Digest matrix of repeated runs; passed iff all digests are equal."""

    passed: bool
    digests: tuple[tuple[int, int, str], ...]  # (run, workers, sha256 hex)
    divergent: tuple[tuple[int, int, str], tuple[int, int, str]] | None = None


def _emit_bytes(source: IngestSource, mode: FramingMode, workers: int) -> bytes:
    sink = io.BytesIO()
    run_stream(source, mode, workers, output=sink)
    return sink.getvalue()


def verify_determinism(
    source: IngestSource,
    mode: FramingMode = LINES_LF,
    runs: int = 3,
    worker_counts: Sequence[int] = (1, 2),
    runner: Callable[[IngestSource, FramingMode, int], bytes] | None = None,
) -> DeterminismCheck:
    """SHA-256 of emitted output must match across every run and worker count."""
    if runs < 2:
        raise ValueError("runs must be >= 2")
    if source.kind == "stdin":
        raise IngestError("stdin cannot be re-read for repeated runs")
    if runner is None:
        runner = _emit_bytes
    entries: list[tuple[int, int, str]] = []
    for run in range(1, runs + 1):
        for workers in worker_counts:
            digest = hashlib.sha256(runner(source, mode, workers)).hexdigest()
            entries.append((run, workers, digest))
    first = entries[0]
    for entry in entries[1:]:
        if entry[2] != first[2]:
            return DeterminismCheck(False, tuple(entries), (first, entry))
    return DeterminismCheck(True, tuple(entries))


@dataclass(frozen=True)
class DivergenceAccount:
    """Unique counts under both splitters plus the explicit merge count."""

    lf_unique: int
    normalizing_unique: int
    mixed_ending_classes: int

    @property
    def identity_holds(self) -> bool:
        return self.lf_unique - self.normalizing_unique == self.mixed_ending_classes


def account_divergence(source: IngestSource) -> DivergenceAccount:
    """Tokenize under both line modes, dedup both, classify the merges.

    mixed_ending_classes counts normalized classes fed by more than one
    LF-mode class, i.e. classes split solely by non-uniform CR presence.
    The identity lf_unique - normalizing_unique == mixed_ending_classes is
    exact whenever every record is LF-terminated; an unterminated final
    record keeps its CR under both splitters and can sit outside it.
    """
    handle = source.open()
    try:
        data = handle.read()
    except OSError as exc:
        raise IngestError(f"read failed: {exc}") from exc
    finally:
        if source.kind == "file":
            handle.close()
    lf_records = tokenize(data, LINES_LF)
    norm_records = tokenize(data, LINES_CRLF_NORMALIZING)
    lf_unique = dedup_ordered(lf_records).unique_count
    norm_unique = dedup_ordered(norm_records).unique_count
    groups: dict[bytes, set[bytes]] = {}
    for lf_rec, norm_rec in zip(lf_records, norm_records):
        groups.setdefault(norm_rec, set()).add(lf_rec)
    mixed = sum(len(group) - 1 for group in groups.values())
    return DivergenceAccount(lf_unique, norm_unique, mixed)


def make_mixed_ending_corpus(mixed_classes: int, uniform_lines: int = 20, seed: int = 0) -> bytes:
    """LF-terminated corpus with exactly ``mixed_classes`` CR-non-uniform classes.

    Each mixed class contributes its body with both a bare-LF and a CRLF
    ending; uniform filler lines keep a single ending (or an interior CR)
    so they never split.
    """
    rng = random.Random(seed)
    lines: list[bytes] = []
    for i in range(mixed_classes):
        body = f"mixed-{i:04d}-{rng.randrange(1 << 30):08x}".encode("ascii")
        lines.append(body + b"\n")
        lines.append(body + b"\r\n")
        if rng.random() < 0.5:  # extra duplicates never change class counts
            lines.append(body + (b"\r\n" if rng.random() < 0.5 else b"\n"))
    for i in range(uniform_lines):
        body = f"uniform-{i:04d}-{rng.randrange(1 << 30):08x}".encode("ascii")
        kind = rng.randrange(3)
        if kind == 0:
            lines.append(body + b"\n")
        elif kind == 1:
            lines.append(body + b"\r\n")
        else:
            lines.append(body[:8] + b"\r" + body[8:] + b"\n")  # interior CR, uniform
    rng.shuffle(lines)
    return b"".join(lines)


def random_line_corpus(rng: random.Random, size: int, max_record_len: int = 1024) -> bytes:
    """Seeded LF-framed corpus of ``size`` records with 1x-10x redundancy.

    Record bodies are arbitrary bytes except LF (so framing preserves the
    construction); the blob is LF-terminated so trailing empty records
    survive the round trip.
    """
    if size == 0:
        return b""
    redundancy = rng.uniform(1.0, 10.0)
    pool_size = max(1, round(size / redundancy))
    pool: list[bytes] = []
    seen: set[bytes] = set()
    while len(pool) < pool_size:
        if rng.random() < 0.2:
            length = rng.randrange(0, max_record_len + 1)
        else:
            length = rng.randrange(0, 48)
        body = rng.randbytes(length).replace(b"\n", b"\x0b")
        while body in seen:
            body += b"."
        seen.add(body)
        pool.append(body)
    records = list(pool)
    if size > pool_size:
        records += rng.choices(pool, k=size - pool_size)
    rng.shuffle(records)
    return b"\n".join(records) + b"\n"


def _framing_from_args(args: argparse.Namespace) -> FramingMode:
    if args.format == "jsonl":
        return jsonl(args.field)
    return {"lines": LINES_LF, "crlf-normalizing": LINES_CRLF_NORMALIZING}[args.format]


def _source_from_args(args: argparse.Namespace) -> IngestSource:
    if args.input in (None, "-"):
        return IngestSource.stdin()
    return IngestSource.file(args.input)


def _add_input_flags(parser: argparse.ArgumentParser, stdin_ok: bool = True) -> None:
    parser.add_argument("--input", default=None if stdin_ok else argparse.SUPPRESS,
                        required=not stdin_ok, help="input file" + (" (default: stdin)" if stdin_ok else ""))
    parser.add_argument("--format", choices=("lines", "crlf-normalizing", "jsonl"), default="lines")
    parser.add_argument("--field", default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bytededup-audit",
        description="Differential and determinism checks for the dedup engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="engine vs set-based reference on one corpus")
    _add_input_flags(p_verify)

    p_det = sub.add_parser("determinism", help="digest equality across runs and worker counts")
    _add_input_flags(p_det, stdin_ok=False)
    p_det.add_argument("--runs", type=int, default=3)
    p_det.add_argument("--workers", default="1,2,max",
                       help="comma-separated worker counts; 'max' means the logical CPU count")

    p_div = sub.add_parser("divergence", help="LF-only vs CR-stripping splitter accounting")
    p_div.add_argument("--input", required=True, help="input file")
    return parser


def _parse_worker_counts(text: str) -> list[int]:
    counts = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        counts.append(os.cpu_count() or 1 if token == "max" else int(token))
    return counts or [1]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            verdict = verify_equivalence(_source_from_args(args), _framing_from_args(args))
            print(json.dumps({
                "check": "equivalence",
                "corpus_id": verdict.corpus_id,
                "engine_unique": verdict.engine_unique,
                "oracle_unique": verdict.oracle_unique,
                "violation": verdict.violation,
                "detail": verdict.detail,
            }))
            return 1 if verdict.violation else 0
        if args.command == "determinism":
            check = verify_determinism(
                IngestSource.file(args.input),
                _framing_from_args(args),
                runs=args.runs,
                worker_counts=_parse_worker_counts(args.workers),
            )
            print(json.dumps({
                "check": "determinism",
                "passed": check.passed,
                "digests": [list(entry) for entry in check.digests],
                "divergent": [list(pair) for pair in check.divergent] if check.divergent else None,
            }))
            return 0 if check.passed else 1
        if args.command == "divergence":
            account = account_divergence(IngestSource.file(args.input))
            print(json.dumps({
                "check": "divergence",
                "lf_unique": account.lf_unique,
                "normalizing_unique": account.normalizing_unique,
                "mixed_ending_classes": account.mixed_ending_classes,
                "identity_holds": account.identity_holds,
            }))
            return 0 if account.identity_holds else 1
    except DedupError as exc:
        print(f"bytededup-audit: {exc}", file=sys.stderr)
        return 2
    return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
