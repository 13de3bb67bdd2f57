"""Byte-exact record equivalence and first-occurrence deduplication.

Two records are equivalent iff they have equal length and identical bytes
at every position; no normalization of any kind is applied. Deduplicating
a record sequence keeps, for each equivalence class, the record at the
smallest original index, and emits survivors in increasing index order.

Records are looked up through a 128-bit fingerprint index, but fingerprint
equality is never trusted on its own: every digest hit is confirmed by a
full byte comparison, so correctness does not depend on the digest.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from typing import Callable, Iterable

DIGEST_BYTES = 16

# Fixed key: digests must agree across calls, runs, processes, and machines.
_FINGERPRINT_KEY = b"bytededup-fp-v1"


def _digest128(record: bytes) -> bytes:
    return hashlib.blake2b(record, digest_size=DIGEST_BYTES, key=_FINGERPRINT_KEY).digest()


@dataclass(frozen=True)
class Fingerprint:
    """128-bit keyed digest plus the record's byte length."""

    digest: bytes
    length: int


def fingerprint(record: bytes) -> Fingerprint:
    """Deterministic fingerprint of a record: same bytes, same digest, everywhere."""
    return Fingerprint(_digest128(record), len(record))


class FingerprintIndex:
    """Associative index keyed by (digest, length) with byte-verified buckets.

    The length in the key rejects most collisions before any byte
    comparison; candidates that survive it are compared byte-for-byte
    against the bucket chain before being treated as equal.
    """

    __slots__ = ("_digest", "_buckets", "_count")

    def __init__(self, digest: Callable[[bytes], bytes] = _digest128):
        self._digest = digest
        self._buckets: dict[tuple[bytes, int], list[bytes]] = {}
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def __contains__(self, record: bytes) -> bool:
        bucket = self._buckets.get((self._digest(record), len(record)))
        if not bucket:
            return False
        return any(seen == record for seen in bucket)

    def add(self, record: bytes) -> bool:
        """Insert a record; True iff it is the first occurrence of its class."""
        key = (self._digest(record), len(record))
        bucket = self._buckets.get(key)
        if bucket is None:
            self._buckets[key] = [record]
            self._count += 1
            return True
        for seen in bucket:
            if seen == record:
                return False
        bucket.append(record)  # digest collision: distinct bytes behind one key
        self._count += 1
        return True


def build_index(records: Iterable[bytes]) -> FingerprintIndex:
    """Index every record in ``records`` (duplicates collapse silently)."""
    index = FingerprintIndex()
    for record in records:
        index.add(record)
    return index


@dataclass(frozen=True)
class DedupResult:
    """Survivors plus counters for one deduplication pass.

    unique_count + duplicate_count equals the input length. first_indices
    holds the 1-based input position of each survivor; the sequence is
    strictly increasing because survivors are first occurrences.
    """

    unique_records: tuple[bytes, ...]
    unique_count: int
    duplicate_count: int
    novelty_count: int
    dedup_us: int
    first_indices: tuple[int, ...]

    def __post_init__(self):
        if self.unique_count != len(self.unique_records):
            raise ValueError("unique_count must equal len(unique_records)")
        if self.duplicate_count < 0 or self.novelty_count < 0 or self.dedup_us < 0:
            raise ValueError("counters must be non-negative")


def dedup_ordered(records: Iterable[bytes]) -> DedupResult:
    """First-occurrence filter of ``records`` under byte equality.

    Every byte sequence is a valid record, including the empty one.
    dedup_us covers only the index pass over the already-framed records.
    """
    return dedup_with_baseline(records, None)


def dedup_with_baseline(
    records: Iterable[bytes],
    baseline: FingerprintIndex | Iterable[bytes] | None,
) -> DedupResult:
    """Like dedup_ordered, with novelty counted against an optional baseline.

    ``baseline`` None means no baseline was supplied: novelty_count is 0.
    An explicitly supplied baseline (even an empty one) makes novelty_count
    the number of survivors not byte-present in it. Baseline loading and
    novelty counting happen outside the timed dedup pass.
    """
    if not isinstance(records, (list, tuple)):
        records = list(records)
    baseline_index: FingerprintIndex | None
    if baseline is None:
        baseline_index = None
    elif isinstance(baseline, FingerprintIndex):
        baseline_index = baseline
    else:
        baseline_index = build_index(baseline)

    index = FingerprintIndex()
    unique: list[bytes] = []
    first_indices: list[int] = []
    start = time.perf_counter_ns()
    for position, record in enumerate(records, 1):
        if index.add(record):
            unique.append(record)
            first_indices.append(position)
    elapsed_us = round((time.perf_counter_ns() - start) / 1000)

    novelty = 0
    if baseline_index is not None:
        novelty = sum(1 for record in unique if record not in baseline_index)
    return DedupResult(
        unique_records=tuple(unique),
        unique_count=len(unique),
        duplicate_count=len(records) - len(unique),
        novelty_count=novelty,
        dedup_us=elapsed_us,
        first_indices=tuple(first_indices),
    )


@dataclass(frozen=True)
class MultiplicityStats:
    """Redundancy multiplicity of a record multiset.

    rho is total/unique; reduction_fraction is 1 - 1/rho. rho equals 1
    exactly when the input carried no duplicates.
    """

    total: int
    unique: int
    rho: float
    reduction_fraction: float


def multiplicity(result: DedupResult, total: int) -> MultiplicityStats:
    """MultiplicityStats for ``result`` over an input of ``total`` records.

    total == 0 reports rho = 1.0 by convention; the ratio is undefined
    with zero unique records.
    """
    if total != result.unique_count + result.duplicate_count:
        raise ValueError("total must equal unique_count + duplicate_count")
    if total == 0:
        return MultiplicityStats(total=0, unique=0, rho=1.0, reduction_fraction=0.0)
    if result.unique_count == 0:
        raise ValueError("non-empty input cannot have zero unique records")
    rho = total / result.unique_count
    return MultiplicityStats(
        total=total,
        unique=result.unique_count,
        rho=rho,
        reduction_fraction=1.0 - 1.0 / rho,
    )
