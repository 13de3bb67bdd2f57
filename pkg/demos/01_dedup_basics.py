#!/usr/bin/env python3
"""Tour of the core engine: byte-exact equivalence, first-occurrence order, stats.

Run:  python3 demos/01_dedup_basics.py
"""

import random

from bytededup import dedup_ordered, dedup_with_baseline, fingerprint, multiplicity

# ---------------------------------------------------------------------------
# A retrieval call that fetched 5 passages, each appearing three times.
# ---------------------------------------------------------------------------
rng = random.Random(2026)
passages = [bytes(rng.randrange(32, 127) for _ in range(500)) for _ in range(5)]
context = passages * 3

result = dedup_ordered(context)
print(f"input chunks      : {len(context)}")
print(f"unique survivors  : {result.unique_count}")
print(f"duplicates removed: {result.duplicate_count}")
print(f"survivor positions: {result.first_indices}")
print(f"pure dedup time   : {result.dedup_us} us")

stats = multiplicity(result, len(context))
print(f"multiplicity      : {stats.rho:.2f}  (reduction {stats.reduction_fraction:.1%})")

# ---------------------------------------------------------------------------
# Equivalence is byte-exact: a single flipped byte keeps records apart.
# ---------------------------------------------------------------------------
a = passages[0]
b = bytes([a[0] ^ 1]) + a[1:]
print(f"\none-byte variant stays distinct: {dedup_ordered([a, b]).unique_count} unique")
print(f"fingerprints differ              : {fingerprint(a) != fingerprint(b)}")
print(f"empty records dedup like any other: "
      f"{dedup_ordered([b'', b'', b'x']).unique_records}")

# ---------------------------------------------------------------------------
# Novelty against a baseline of already-known records.
# ---------------------------------------------------------------------------
known = passages[:2]
with_baseline = dedup_with_baseline(context, known)
print(f"\nsurvivors absent from the baseline: {with_baseline.novelty_count} of "
      f"{with_baseline.unique_count}")
