"""Command-line dedup filter: pipe, file, and JSONL modes over the stream engine.

Exit codes: 0 success, 2 unreadable input, 3 framing/JSONL error,
4 write failure. Unique records go to the primary output; the telemetry
line goes to stderr unless --no-stats is given.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .errors import FramingError, IngestError, WriteError
from .stream import (
    LINES_CRLF_NORMALIZING,
    LINES_LF,
    FramingMode,
    IngestSource,
    iter_records,
    jsonl,
    run_stream,
)
from .telemetry import DEFAULT_ENGINE_ID, emit_telemetry

EXIT_OK = 0
EXIT_INGEST = 2
EXIT_FRAMING = 3
EXIT_WRITE = 4

_LINE_FORMATS = {
    "lines": LINES_LF,
    "crlf-normalizing": LINES_CRLF_NORMALIZING,
}


@dataclass(frozen=True)
class CliConfig:
    source: IngestSource
    output_path: str | None  # None means the primary stdout stream
    framing: FramingMode
    workers: int
    baseline_path: str | None
    engine_id: str
    stats: bool


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bytededup",
        description="Byte-exact first-occurrence dedup of framed records.",
    )
    parser.add_argument("--input", metavar="PATH", default=None,
                        help="input file (default: stdin)")
    parser.add_argument("--output", metavar="PATH", default=None,
                        help="output file (default: stdout)")
    parser.add_argument("--format", choices=("lines", "crlf-normalizing", "jsonl"),
                        default="lines",
                        help="record framing (default: lines = split on LF only, CR retained)")
    parser.add_argument("--field", default="text",
                        help="JSON field holding the record text (jsonl format only)")
    parser.add_argument("--jobs", type=_positive_int, default=os.cpu_count() or 1,
                        help="worker count (default: logical CPU count)")
    parser.add_argument("--baseline", metavar="PATH", default=None,
                        help="file of known records; survivors absent from it count as novel")
    parser.add_argument("--engine-id", default=DEFAULT_ENGINE_ID,
                        help="identifier stamped on the telemetry line")
    parser.add_argument("--no-stats", action="store_true",
                        help="suppress the telemetry line on stderr")
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    if args.format == "jsonl":
        framing = jsonl(args.field)
    else:
        framing = _LINE_FORMATS[args.format]
    source = IngestSource.stdin() if args.input in (None, "-") else IngestSource.file(args.input)
    output = None if args.output in (None, "-") else args.output
    return CliConfig(
        source=source,
        output_path=output,
        framing=framing,
        workers=args.jobs,
        baseline_path=args.baseline,
        engine_id=args.engine_id,
        stats=not args.no_stats,
    )


def _load_baseline(path: str, framing: FramingMode) -> list[bytes]:
    handle = IngestSource.file(path).open()
    with handle:
        return list(iter_records(handle, framing))


def _silence_stdout() -> None:
    # A dead stdout pipe would otherwise raise again during interpreter exit.
    try:
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
    except OSError:
        pass


def run_cli(config: CliConfig) -> int:
    """Execute one dedup session and return the process exit status."""
    try:
        baseline = None
        if config.baseline_path is not None:
            baseline = _load_baseline(config.baseline_path, config.framing)

        if config.output_path is None:
            out = sys.stdout.buffer
            close_out = False
        else:
            try:
                out = open(config.output_path, "wb")
            except OSError as exc:
                raise WriteError(f"cannot open {config.output_path}: {exc}") from exc
            close_out = True
        try:
            result = run_stream(
                config.source, config.framing, config.workers,
                output=out, baseline=baseline,
            )
            try:
                out.flush()
            except OSError as exc:
                raise WriteError(f"flush failed: {exc}") from exc
        finally:
            if close_out:
                try:
                    out.close()
                except OSError:
                    pass  # the explicit flush above already reported the failure
    except IngestError as exc:
        print(f"bytededup: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except FramingError as exc:
        print(f"bytededup: {exc}", file=sys.stderr)
        return EXIT_FRAMING
    except WriteError as exc:
        if config.output_path is None:
            _silence_stdout()
        print(f"bytededup: {exc}", file=sys.stderr)
        return EXIT_WRITE

    if config.stats:
        emit_telemetry(result, config.engine_id, sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run_cli(config_from_args(args))


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
