#!/usr/bin/env python3
"""Count unique and duplicate field values in a JSONL file with a plain set.

Deliberately trivial so it can serve as an auditable reference: set
cardinality over the named field, nothing else. Counts are invariant
under any reordering of the lines. Malformed input aborts with the
1-based line number rather than skewing the counts.
"""

from __future__ import annotations

import argparse
import json
import sys


def reference_count(path: str, field: str = "text") -> tuple[int, int]:
    """Return (unique, duplicate) counts of ``field`` values in ``path``."""
    unique: set[str] = set()
    total = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            try:
                item = json.loads(line)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: invalid JSON: {exc}") from exc
            if not isinstance(item, dict) or field not in item:
                raise ValueError(f"line {lineno}: missing field {field!r}")
            value = item[field]
            if not isinstance(value, str):
                raise ValueError(f"line {lineno}: field {field!r} is not text")
            unique.add(value)
            total += 1
    return len(unique), total - len(unique)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Set-based unique/duplicate count over a JSONL field.")
    parser.add_argument("--input", required=True, help="JSONL file to count")
    parser.add_argument("--field", default="text")
    args = parser.parse_args(argv)
    try:
        unique, duplicate = reference_count(args.input, args.field)
    except (OSError, ValueError) as exc:
        print(f"reference_count: {exc}", file=sys.stderr)
        return 1
    print(f"unique={unique} duplicate={duplicate}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
