#!/usr/bin/env python3
"""Deployment-mode latency ladder on the 15-chunk retrieval workload.

The same dedup work costs microseconds in-process and tens of
milliseconds behind a fresh subprocess; the ladder makes the integration
tax visible. Takes about a minute.

Run:  python3 demos/03_latency_ladder.py
"""

from bytededup.bench import WORKLOADS, Mode, measure_matrix, render_report

spec = WORKLOADS["rag_call15"]
print(f"workload: {spec.chunks} chunks, {spec.unique} unique, ~{spec.record_bytes} B/record\n")

reports = measure_matrix(
    [Mode.IN_PROCESS, Mode.PIPE_SUBPROCESS, Mode.TEMPFILE_SUBPROCESS],
    spec,
    trials=100,
    warmup=10,
)
print(render_report(reports))

ladder = {rep.mode: rep.median_us for rep in reports}
print("in-process call is "
      f"{ladder[Mode.PIPE_SUBPROCESS] / max(ladder[Mode.IN_PROCESS], 1):,.0f}x cheaper "
      "than a fresh pipe subprocess on this host.")
