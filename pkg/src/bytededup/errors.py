"""Exception hierarchy shared by the engine, stream layer, and command-line tools."""

from __future__ import annotations


class DedupError(Exception):
    """Base class for every error this package raises deliberately."""


class IngestError(DedupError):
    """An input source could not be opened or read."""


class FramingError(DedupError):
    """Input bytes could not be framed into records.

    ``line`` carries the 1-based line number when the failure is tied to a
    specific input line (JSONL extraction), else None.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class WriteError(DedupError):
    """The output sink rejected a write or flush."""


class ConfigError(DedupError):
    """A workload or harness configuration is arithmetically invalid."""


class HarnessError(DedupError):
    """A benchmark measurement could not be carried out."""
