"""Mapping user gestures to history ranges.

Two gestures produce a range: a window on the timeline (every change whose
timestamp falls inside it) and a text span at some version (every change
that contributed to the span, found by walking the history backwards). Both
return consecutive ranges; a validity check wraps rewrite validation for
gesture-time feedback.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .areas import AreaInterval, EffectiveArea, footprint, interior_intersects
from .errors import EmptySelectionError, SpanOutOfBoundsError, VersionOutOfRangeError
from .history import EditHistory, invert, materialize
from .rewrite import HistoryRange, ValidationReport, validate_rewrite


@dataclass(frozen=True)
class TimeWindow:
    t0_ms: int
    t1_ms: int

    def __post_init__(self):
        if self.t0_ms < 0 or self.t0_ms > self.t1_ms:
            raise ValueError(f"invalid time window {self.t0_ms}..{self.t1_ms}")


@dataclass(frozen=True)
class TextSpan:
    version: int
    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.start > self.end:
            raise ValueError(f"invalid span {self.start}..{self.end}")


def select_by_time(history: EditHistory, window: TimeWindow) -> HistoryRange:
    """Range of all changes with t0 <= t_ms <= t1; contiguous by monotonicity."""
    stamps = [c.t_ms for c in history.changes]
    lo = bisect.bisect_left(stamps, window.t0_ms)
    hi = bisect.bisect_right(stamps, window.t1_ms)
    if lo >= hi:
        raise EmptySelectionError(f"no change between {window.t0_ms}ms and {window.t1_ms}ms")
    return HistoryRange(lo, hi)


def select_by_text(history: EditHistory, span: TextSpan) -> HistoryRange:
    """Find the changes that produced a text span, by backward provenance.

    Walking from the span's version down to 0, each change's visible extent
    in the later frame (its inserted span, or the caret left by a deletion)
    is tested against the span's image with the same interior rules used for
    validation; touched changes are collected, and the image is pulled back
    through the change: inserted text inside it shrinks it, deleted text
    inside it is re-included, edits outside shift it. The returned range is
    the convex hull of the collected indices, since ranges are consecutive.
    """
    try:
        doc_len = len(materialize(history, span.version).text)
    except VersionOutOfRangeError as exc:
        raise SpanOutOfBoundsError(str(exc)) from exc
    if span.end > doc_len:
        raise SpanOutOfBoundsError(
            f"span {span.start}..{span.end} exceeds version {span.version} "
            f"of length {doc_len}"
        )

    s, e = span.start, span.end
    first = last = -1
    for k in range(span.version - 1, -1, -1):
        change = history.changes[k]
        image = EffectiveArea(k + 1, (AreaInterval(s, e),))
        if interior_intersects(image, footprint(invert(change))) is not None:
            first = k
            last = max(last, k)
        pos, dlen, ilen = change.pos, len(change.deleted), len(change.inserted)
        top = pos + ilen
        if s > pos:
            s = s - ilen + dlen if s >= top else pos
        if e > pos:
            e = e - ilen + dlen if e >= top else pos + dlen
    if last < 0:
        raise EmptySelectionError("no change touched the selected span")
    return HistoryRange(first, last + 1)


def selection_validity(history: EditHistory, rng: HistoryRange) -> ValidationReport:
    """Gesture-time rewritability check; drives the red/disabled affordances."""
    return validate_rewrite(history, rng)
