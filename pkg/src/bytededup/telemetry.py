"""One-line machine-readable run summary for the diagnostic stream.

The line grammar is fixed, field order included:

    engine=<id> dedup_us=<n> unique_count=<n> duplicate_count=<n> novelty_count=<n>

followed by exactly one LF. Telemetry goes to the diagnostic stream only
and never touches the primary output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TextIO

from .core import DedupResult

DEFAULT_ENGINE_ID = "bytededup_v1"

_LINE_RE = re.compile(
    r"engine=(?P<engine>\S+)"
    r" dedup_us=(?P<dedup_us>\d+)"
    r" unique_count=(?P<unique>\d+)"
    r" duplicate_count=(?P<duplicate>\d+)"
    r" novelty_count=(?P<novelty>\d+)\n?"
)


@dataclass(frozen=True)
class TelemetryLine:
    engine_id: str
    dedup_us: int
    unique_count: int
    duplicate_count: int
    novelty_count: int

    def __post_init__(self):
        if not self.engine_id or re.search(r"\s", self.engine_id):
            raise ValueError("engine_id must be a non-empty token without whitespace")
        for value in (self.dedup_us, self.unique_count, self.duplicate_count, self.novelty_count):
            if value < 0:
                raise ValueError("telemetry counters must be non-negative")

    def render(self) -> str:
        """The exact serialized form, trailing LF included."""
        return (
            f"engine={self.engine_id}"
            f" dedup_us={self.dedup_us}"
            f" unique_count={self.unique_count}"
            f" duplicate_count={self.duplicate_count}"
            f" novelty_count={self.novelty_count}\n"
        )


def telemetry_from_result(result: DedupResult, engine_id: str = DEFAULT_ENGINE_ID) -> TelemetryLine:
    return TelemetryLine(
        engine_id=engine_id,
        dedup_us=result.dedup_us,
        unique_count=result.unique_count,
        duplicate_count=result.duplicate_count,
        novelty_count=result.novelty_count,
    )


def emit_telemetry(result: DedupResult, engine_id: str, stream: TextIO) -> TelemetryLine:
    """Write exactly one telemetry line to the diagnostic stream.

    The whole line goes through a single write call so concurrent sessions
    sharing one stream interleave whole lines only.
    """
    line = telemetry_from_result(result, engine_id)
    stream.write(line.render())
    stream.flush()
    return line


def parse_telemetry(text: str) -> TelemetryLine:
    """Inverse of render(); raises ValueError on any grammar deviation."""
    match = _LINE_RE.fullmatch(text)
    if match is None:
        raise ValueError(f"not a telemetry line: {text!r}")
    return TelemetryLine(
        engine_id=match["engine"],
        dedup_us=int(match["dedup_us"]),
        unique_count=int(match["unique"]),
        duplicate_count=int(match["duplicate"]),
        novelty_count=int(match["novelty"]),
    )
