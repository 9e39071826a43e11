"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class TextcastError(Exception):
    """Base class for every error raised by this package."""


class OffsetOutOfBoundsError(TextcastError):
    """A change's position or deletion span falls outside the document."""


class DeletedTextMismatchError(TextcastError):
    """A change's recorded deleted text differs from the document content."""


class VersionOutOfRangeError(TextcastError):
    def __init__(self, version: int, n: int):
        super().__init__(f"version {version} outside [0, {n}]")
        self.version = version
        self.n = n


class CorruptHistoryError(TextcastError):
    """Replay failed at some change; ``seq`` identifies the offender."""

    def __init__(self, seq: int, reason: str):
        super().__init__(f"history corrupt at change {seq}: {reason}")
        self.seq = seq
        self.reason = reason


class InteriorIntersectionError(TextcastError):
    """A change's footprint lies inside the effective area being shifted."""


class UnmappablePositionError(TextcastError):
    """Position falls strictly inside a rewritten interval."""

    def __init__(self, pos: int):
        super().__init__(f"position {pos} lies strictly inside a rewritten interval")
        self.pos = pos


class MappingShapeMismatchError(TextcastError):
    """Old/new areas disagree on interval count or gap lengths."""


class RangeOutOfBoundsError(TextcastError):
    """History range indices invalid for this history."""


class EmptyRangeError(RangeOutOfBoundsError):
    """History ranges must contain at least one change."""


class AmbiguousRangeError(TextcastError):
    """Rewriting the range would leave later changes with no defined place.

    Carries the :class:`~textcast.rewrite.ValidationReport` listing every
    conflicting change.
    """

    def __init__(self, report):
        seqs = ",".join(str(c.seq) for c in report.conflicts)
        super().__init__(f"range is ambiguous: conflicting changes at seq {seqs}")
        self.report = report


class ReplacementEscapesRegionError(TextcastError):
    """Replacement edits text outside the editable region."""

    def __init__(self, violations):
        seqs = ",".join(str(v.repl_seq) for v in violations)
        super().__init__(f"replacement escapes editable region at seq {seqs}")
        self.violations = violations


class EmptySelectionError(TextcastError):
    """Selection gesture matched no changes."""


class SpanOutOfBoundsError(TextcastError):
    """Text span invalid at the requested version."""


class CastParseError(TextcastError):
    """Positioned parse failure for a cast document."""

    def __init__(self, reason: str, line: int = 0, column: int = 0):
        loc = f" at line {line}" if line else ""
        loc += f", column {column}" if column else ""
        super().__init__(f"{reason}{loc}")
        self.reason = reason
        self.line = line
        self.column = column


class NotTextcastError(CastParseError):
    """Input does not start with a valid cast header."""


class UnsupportedVersionError(CastParseError):
    """Header declares a format version this parser does not speak."""


class MalformedEventError(CastParseError):
    """An event line is not a well-formed event record."""


class ReplayInvalidError(CastParseError):
    """Events parse but do not replay into a valid history."""

    def __init__(self, seq: int, reason: str):
        super().__init__(f"event {seq} does not replay: {reason}")
        self.seq = seq
