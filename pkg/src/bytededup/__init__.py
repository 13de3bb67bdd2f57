"""Byte-exact, first-occurrence-preserving deduplication of record streams.

The embeddable surface lives here: the core engine (byte-exact
equivalence, fingerprint index with byte-verified fallback, ordered
dedup), the framing/streaming layer, and the telemetry line. The
benchmark harness and the differential auditor are available as the
``bytededup.bench`` and ``bytededup.audit`` submodules; ``bytededup.cli``
backs the command-line filter.
"""

from .core import (
    DedupResult,
    Fingerprint,
    FingerprintIndex,
    MultiplicityStats,
    build_index,
    dedup_ordered,
    dedup_with_baseline,
    fingerprint,
    multiplicity,
)
from .errors import (
    ConfigError,
    DedupError,
    FramingError,
    HarnessError,
    IngestError,
    WriteError,
)
from .stream import (
    LINES_CRLF_NORMALIZING,
    LINES_LF,
    FramingMode,
    IngestSource,
    iter_records,
    jsonl,
    parse_jsonl,
    run_stream,
    tokenize,
)
from .telemetry import (
    DEFAULT_ENGINE_ID,
    TelemetryLine,
    emit_telemetry,
    parse_telemetry,
    telemetry_from_result,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DEFAULT_ENGINE_ID",
    "DedupError",
    "DedupResult",
    "Fingerprint",
    "FingerprintIndex",
    "FramingError",
    "FramingMode",
    "HarnessError",
    "IngestError",
    "IngestSource",
    "LINES_CRLF_NORMALIZING",
    "LINES_LF",
    "MultiplicityStats",
    "TelemetryLine",
    "WriteError",
    "build_index",
    "dedup_ordered",
    "dedup_with_baseline",
    "emit_telemetry",
    "fingerprint",
    "iter_records",
    "jsonl",
    "multiplicity",
    "parse_jsonl",
    "parse_telemetry",
    "run_stream",
    "telemetry_from_result",
    "tokenize",
]
