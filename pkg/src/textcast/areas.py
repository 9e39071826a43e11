"""Interval algebra for effective areas.

An effective area is the set of document positions a history range touched,
kept as sorted disjoint intervals in one version's coordinate frame. Zero
width intervals (collapse points) mark spots where touched text was deleted
and nothing remains; they carry exactly the information ambiguity detection
needs, so they are first-class citizens here.

Canonical form: intervals sorted, overlapping or touching spans merged, and
a collapse point touching a span absorbed into it. Every operation in this
module returns canonical areas, which makes areas comparable with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal

from .errors import (
    InteriorIntersectionError,
    MappingShapeMismatchError,
    OffsetOutOfBoundsError,
    UnmappablePositionError,
)
from .history import TextChange

Side = Literal["before", "after"]


class FootprintKind(str, Enum):
    DELETION_SPAN = "deletion-span"
    INSERTION_CARET = "insertion-caret"
    REPLACEMENT_SPAN = "replacement-span"


@dataclass(frozen=True, order=True)
class Footprint:
    """The span of text a change removes, or the caret it inserts at."""

    start: int
    end: int
    kind: FootprintKind

    @property
    def width(self) -> int:
        return self.end - self.start


@dataclass(frozen=True, order=True)
class AreaInterval:
    start: int
    end: int

    @property
    def width(self) -> int:
        return self.end - self.start

    @property
    def is_point(self) -> bool:
        return self.start == self.end

    def __repr__(self) -> str:  # compact: [4,10) or point 4
        if self.is_point:
            return f"point {self.start}"
        return f"[{self.start},{self.end})"


@dataclass(frozen=True)
class EffectiveArea:
    frame_version: int
    intervals: tuple[AreaInterval, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def total_width(self) -> int:
        return sum(iv.width for iv in self.intervals)


@dataclass(frozen=True)
class PositionMapping:
    """Piecewise correspondence between two frames, defined off the intervals.

    Each pair maps an old interval to its replacement; positions between
    pairs map by the cumulative length delta of the pairs before them.
    """

    pairs: tuple[tuple[AreaInterval, AreaInterval], ...] = ()


def footprint(change: TextChange) -> Footprint:
    """Deterministic footprint of a change in its pre-change frame."""
    if not change.deleted:
        kind = FootprintKind.INSERTION_CARET
    elif not change.inserted:
        kind = FootprintKind.DELETION_SPAN
    else:
        kind = FootprintKind.REPLACEMENT_SPAN
    return Footprint(change.pos, change.pos + len(change.deleted), kind)


def normalize(intervals: Iterable[AreaInterval]) -> tuple[AreaInterval, ...]:
    """Sort, merge overlapping/touching spans, absorb boundary collapse points."""
    merged: list[AreaInterval] = []
    for iv in sorted(intervals):
        if merged and iv.start <= merged[-1].end:
            if iv.end > merged[-1].end:
                merged[-1] = AreaInterval(merged[-1].start, iv.end)
        else:
            merged.append(iv)
    return tuple(merged)


def _interiors_conflict(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    """Open-interval conflict test; symmetric in its two arguments.

    Positive vs positive: positive open overlap. Positive vs point: point
    strictly inside. Point vs point: coincident. Boundary contact is never
    a conflict: an edit exactly before or after a region is unaffected by
    the region's content.
    """
    if a_start == a_end and b_start == b_end:
        return a_start == b_start
    if a_start == a_end:
        return b_start < a_start < b_end
    if b_start == b_end:
        return a_start < b_start < a_end
    return max(a_start, b_start) < min(a_end, b_end)


def interior_intersects(area: EffectiveArea, fp: Footprint) -> AreaInterval | None:
    """First area interval the footprint's interior touches, if any."""
    for iv in area.intervals:
        if _interiors_conflict(iv.start, iv.end, fp.start, fp.end):
            return iv
    return None


def _carry_one(iv: AreaInterval, pos: int, dlen: int, ilen: int) -> AreaInterval:
    """Transform one interval through a change happening outside it.

    Insertion exactly at an interval's start pushes the interval right (the
    new text lands before the area); insertion at its end leaves it alone
    (the new text lands after). Deletions touching only at boundaries shift
    everything at or beyond their far edge. Total on purpose: conflicting
    interval parts collapse onto a deletion or stretch around a caret, so a
    scan that already recorded the conflict can keep going.
    """
    if dlen == 0:
        if iv.is_point:
            shift = ilen if iv.start > pos else 0
            return AreaInterval(iv.start + shift, iv.start + shift)
        start = iv.start + ilen if iv.start >= pos else iv.start
        end = iv.end + ilen if iv.end > pos else iv.end
        return AreaInterval(start, end)
    cut = pos + dlen
    delta = ilen - dlen

    def move(e: int) -> int:
        if e <= pos:
            return e
        return e + delta if e >= cut else pos

    return AreaInterval(move(iv.start), move(iv.end))


def carry_intervals(
    intervals: Iterable[AreaInterval], change: TextChange
) -> tuple[AreaInterval, ...]:
    """Best-effort outside-shift of an interval set; exact when nothing conflicts."""
    dlen, ilen = len(change.deleted), len(change.inserted)
    return normalize(_carry_one(iv, change.pos, dlen, ilen) for iv in intervals)


def shift_area_through(area: EffectiveArea, change: TextChange) -> EffectiveArea:
    """Re-express an area in the frame after a change that happens outside it."""
    fp = footprint(change)
    hit = interior_intersects(area, fp)
    if hit is not None:
        raise InteriorIntersectionError(f"{fp.kind.value} {fp.start}..{fp.end} intersects {hit}")
    return EffectiveArea(area.frame_version + 1, carry_intervals(area.intervals, change))


def absorb_intervals(
    intervals: Iterable[AreaInterval], change: TextChange
) -> tuple[AreaInterval, ...]:
    """Accumulate one change into an interval set (frame bookkeeping left to callers).

    Interval parts inside the deletion span collapse onto it, parts beyond
    shift by the length delta, and the change's own contribution — the
    inserted span, or a collapse point when nothing was inserted — is
    unioned in.
    """
    pos, dlen, ilen = change.pos, len(change.deleted), len(change.inserted)
    cut = pos + dlen
    delta = ilen - dlen

    def move(e: int) -> int:
        if e <= pos:
            return e
        if e >= cut:
            return e + delta
        return pos

    moved = [AreaInterval(move(iv.start), move(iv.end)) for iv in intervals]
    moved.append(AreaInterval(pos, pos + ilen))
    return normalize(moved)


def absorb_change(area: EffectiveArea, change: TextChange) -> EffectiveArea:
    """Accumulate a change that may itself touch the area (range-internal edits)."""
    if change.pos < 0:
        raise OffsetOutOfBoundsError(f"change position {change.pos} negative")
    return EffectiveArea(area.frame_version + 1, absorb_intervals(area.intervals, change))


def map_position(mapping: PositionMapping, pos: int, side: Side = "before") -> int:
    """Carry a position from the old frame into the new one.

    Positions in the gaps move by the cumulative delta of the pairs before
    them. A position exactly on an interval boundary attaches per ``side``:
    ``before`` lands on the new interval's start, ``after`` on its end.
    """
    delta = 0
    for old, new in mapping.pairs:
        if pos < old.start:
            break
        if pos <= old.end:
            if old.start < pos < old.end:
                raise UnmappablePositionError(pos)
            return new.start if side == "before" else new.end
        delta += new.width - old.width
    return pos + delta


def build_mapping(old_area: EffectiveArea, new_area: EffectiveArea) -> PositionMapping:
    """Zip two areas into a mapping; their surrounding gaps must agree.

    A mismatch signals an upstream bug: text outside the rewritten region is
    never edited, so the gap lengths around corresponding intervals have to
    be identical.
    """
    olds, news = old_area.intervals, new_area.intervals
    if len(olds) != len(news):
        raise MappingShapeMismatchError(
            f"interval counts differ: {len(olds)} vs {len(news)}"
        )
    prev_old = prev_new = 0
    for old, new in zip(olds, news):
        if old.start - prev_old != new.start - prev_new:
            raise MappingShapeMismatchError(
                f"gap before {old} is {old.start - prev_old}, "
                f"before {new} is {new.start - prev_new}"
            )
        prev_old, prev_new = old.end, new.end
    return PositionMapping(tuple(zip(olds, news)))
