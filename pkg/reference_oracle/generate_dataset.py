#!/usr/bin/env python3
"""Seeded JSONL dataset generator for cross-implementation dedup checks.

Writes a fixed number of distinct text passages, each repeated a fixed
number of times, interleaved pseudo-randomly under the seed. Output is
byte-identical for identical parameters. Deliberately standalone: no
dedup-engine code is imported here.
"""

from __future__ import annotations

import argparse
import json
import random
import string
import sys

ALPHABET = string.ascii_letters + string.digits

DEFAULT_SEED = 42
DEFAULT_UNIQUE_ENTRIES = 100_000
DEFAULT_DUPLICATION_FACTOR = 2


def make_records(seed: int, unique_entries: int, duplication_factor: int) -> list[str]:
    """Distinct alphanumeric passages (20-200 chars), duplicated and shuffled."""
    if unique_entries < 0:
        raise ValueError("unique-entries must be >= 0")
    if duplication_factor < 1:
        raise ValueError("duplication-factor must be >= 1")
    rng = random.Random(seed)
    entries: list[str] = []
    seen: set[str] = set()
    while len(entries) < unique_entries:
        text = "".join(rng.choices(ALPHABET, k=rng.randint(20, 200)))
        if text not in seen:
            seen.add(text)
            entries.append(text)
    records = entries * duplication_factor
    rng.shuffle(records)
    return records


def generate_dataset(seed: int, unique_entries: int, duplication_factor: int, output_path: str) -> int:
    """Write the dataset as LF-delimited JSON objects; returns the line count."""
    records = make_records(seed, unique_entries, duplication_factor)
    with open(output_path, "w", encoding="ascii", newline="\n") as fh:
        for text in records:
            fh.write(json.dumps({"text": text}, separators=(",", ":")) + "\n")
    return len(records)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Generate a seeded JSONL dedup test dataset.")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--unique-entries", type=int, default=DEFAULT_UNIQUE_ENTRIES)
    parser.add_argument("--duplication-factor", type=int, default=DEFAULT_DUPLICATION_FACTOR)
    parser.add_argument("--output", required=True, help="destination JSONL file")
    args = parser.parse_args(argv)
    try:
        total = generate_dataset(args.seed, args.unique_entries, args.duplication_factor, args.output)
    except (OSError, ValueError) as exc:
        print(f"generate_dataset: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {total} records ({args.unique_entries} unique) to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
