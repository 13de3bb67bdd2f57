#!/usr/bin/env python3
"""Framing modes, the stream driver, and the diagnostic telemetry line.

Run:  python3 demos/02_streaming_and_telemetry.py
"""

import io
import sys

from bytededup import (
    LINES_CRLF_NORMALIZING,
    LINES_LF,
    IngestSource,
    emit_telemetry,
    run_stream,
    tokenize,
)

# ---------------------------------------------------------------------------
# The canonical tokenizer splits on LF only and keeps CR bytes, so records
# with different line endings stay distinct.
# ---------------------------------------------------------------------------
blob = b"alpha\r\nalpha\nbeta\n"
print("LF-only records       :", tokenize(blob, LINES_LF))
print("CR-normalized records :", tokenize(blob, LINES_CRLF_NORMALIZING))

# ---------------------------------------------------------------------------
# The stream driver consumes a source once, emits survivors joined by LF,
# and produces byte-identical output for every worker count.
# ---------------------------------------------------------------------------
corpus = b"\n".join(b"chunk-%d" % (i % 7) for i in range(50)) + b"\n"
outputs = []
for workers in (1, 2, 8):
    sink = io.BytesIO()
    result = run_stream(IngestSource.memory(corpus), LINES_LF, workers, output=sink)
    outputs.append(sink.getvalue())
print("\nworker counts give identical bytes:", len(set(outputs)) == 1)
print("emitted:", outputs[0])

# ---------------------------------------------------------------------------
# Telemetry is one machine-readable line on the diagnostic stream; the
# primary output above is never touched by it.
# ---------------------------------------------------------------------------
print("\ntelemetry line:", file=sys.stderr)
emit_telemetry(result, "demo_engine", sys.stderr)
