"""Rewriting a slice of an edit history in place.

Replacing a consecutive slice of a history happens in two steps. Validation
computes the slice's effective area and scans every later change for one
whose footprint falls inside it; such a change has no well-defined home once
the slice's content is different, so the rewrite is refused. Substitution
then splices in the replacement changes and re-bases the offsets of the
later changes through a piecewise position mapping, leaving every character
outside the touched area byte-for-byte intact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .areas import (
    AreaInterval,
    EffectiveArea,
    Footprint,
    PositionMapping,
    absorb_intervals,
    build_mapping,
    carry_intervals,
    footprint,
    interior_intersects,
    map_position,
    normalize,
)
from .errors import (
    AmbiguousRangeError,
    EmptyRangeError,
    MappingShapeMismatchError,
    RangeOutOfBoundsError,
    ReplacementEscapesRegionError,
)
from .history import EditHistory, TextChange, apply_change, invert, materialize


@dataclass(frozen=True)
class HistoryRange:
    """The consecutive changes[start:end) selected for rewriting; never empty."""

    start: int
    end: int


@dataclass(frozen=True)
class RangeArea:
    """A range's effective area seen from both ends.

    ``pre_image`` lives in the frame at range start and covers exactly the
    characters the range goes on to delete (collapse points mark pure
    insertion sites). ``post_image`` lives in the frame at range end and
    covers exactly the characters the range inserted (collapse points mark
    text that was inserted and deleted again, or deleted outright).
    """

    pre_image: EffectiveArea
    post_image: EffectiveArea


@dataclass(frozen=True)
class Conflict:
    seq: int
    footprint: Footprint
    interval: AreaInterval
    frame_version: int


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    conflicts: tuple[Conflict, ...] = ()


@dataclass(frozen=True)
class Replacement:
    """New changes for a range, positioned against the document at range start.

    Timestamps count from 0 and are rescaled into the replaced range's time
    window during substitution.
    """

    changes: tuple[TextChange, ...] = ()

    def __post_init__(self):
        prev_t = 0
        for i, c in enumerate(self.changes):
            if c.is_noop():
                raise ValueError(f"replacement change {i} is a no-op")
            if c.pos < 0:
                raise ValueError(f"replacement change {i} has negative position")
            if c.t_ms < prev_t:
                raise ValueError(f"replacement change {i} goes back in time")
            prev_t = c.t_ms


@dataclass(frozen=True)
class ReplacementViolation:
    repl_seq: int
    footprint: Footprint


@dataclass(frozen=True)
class RewriteResult:
    history: EditHistory
    mapping: PositionMapping
    report: ValidationReport


def _check_range(history: EditHistory, rng: HistoryRange) -> None:
    n = len(history.changes)
    if rng.start == rng.end:
        raise EmptyRangeError(f"range {rng.start}:{rng.end} is empty")
    if not 0 <= rng.start < rng.end <= n:
        raise RangeOutOfBoundsError(
            f"range {rng.start}:{rng.end} invalid for a history of {n} changes"
        )


def compute_range_area(history: EditHistory, rng: HistoryRange) -> RangeArea:
    """Accumulate the range's effective area in both boundary frames.

    The post-image folds the range's changes forward from an empty area; the
    pre-image folds their inverses backward from the range end, re-expressing
    the area in range-start coordinates.
    """
    _check_range(history, rng)
    post: tuple[AreaInterval, ...] = ()
    for k in range(rng.start, rng.end):
        post = absorb_intervals(post, history.changes[k])
    pre: tuple[AreaInterval, ...] = ()
    for k in range(rng.end - 1, rng.start - 1, -1):
        pre = absorb_intervals(pre, invert(history.changes[k]))
    return RangeArea(
        pre_image=EffectiveArea(rng.start, pre),
        post_image=EffectiveArea(rng.end, post),
    )


def validate_rewrite(history: EditHistory, rng: HistoryRange) -> ValidationReport:
    """Scan the changes after the range for any that land inside its area.

    All conflicts are reported, not just the first, so a UI can show why a
    selection is refused; after recording a conflict the scan carries the
    area forward best-effort.
    """
    area = compute_range_area(history, rng).post_image
    intervals = area.intervals
    conflicts: list[Conflict] = []
    for k in range(rng.end, len(history.changes)):
        change = history.changes[k]
        fp = footprint(change)
        hit = interior_intersects(EffectiveArea(k, intervals), fp)
        if hit is not None:
            conflicts.append(Conflict(seq=k, footprint=fp, interval=hit, frame_version=k))
        intervals = carry_intervals(intervals, change)
    return ValidationReport(ok=not conflicts, conflicts=tuple(conflicts))


def editable_region(history: EditHistory, rng: HistoryRange) -> EffectiveArea:
    """The part of the range-start document a replacement may touch.

    The complement of this area is exactly what an editor renders as
    read-only (gray) in edit mode.
    """
    return compute_range_area(history, rng).pre_image


def _within_closed(intervals: tuple[AreaInterval, ...], fp: Footprint) -> bool:
    return any(iv.start <= fp.start and fp.end <= iv.end for iv in intervals)


def _advance_intervals(
    intervals: tuple[AreaInterval, ...], pos: int, dlen: int, ilen: int, side: str
) -> tuple[AreaInterval, ...]:
    """Shift an area through a suffix change whose boundary side is known.

    During substitution the old and new areas advance in lockstep through
    each re-based suffix change. An insertion mapped with side ``before``
    goes in front of whatever sits at that boundary, so endpoints at pos
    shift right; mapped with ``after`` it goes behind, so they stay. This
    also settles insertions landing on a collapsed interval of the new area,
    which a side-free shift could not orient.
    """
    if dlen == 0:
        shifts = (lambda e: e > pos) if side == "after" else (lambda e: e >= pos)
        return normalize(
            AreaInterval(
                iv.start + (ilen if shifts(iv.start) else 0),
                iv.end + (ilen if shifts(iv.end) else 0),
            )
            for iv in intervals
        )
    delta = ilen - dlen
    return normalize(
        AreaInterval(
            iv.start if iv.start <= pos else iv.start + delta,
            iv.end if iv.end <= pos else iv.end + delta,
        )
        for iv in intervals
    )


def check_replacement(
    base_text: str, editable: EffectiveArea, repl: Replacement
) -> list[ReplacementViolation]:
    """Simulate the replacement and flag edits escaping the editable region.

    Containment is boundary-inclusive against the evolving region: inserting
    at a collapse point is allowed (that is how a pure-insertion site gets
    retyped) and grows the region, so later replacement edits may build on
    earlier ones. Replay errors from the simulation propagate.
    """
    text = base_text
    intervals = editable.intervals
    violations: list[ReplacementViolation] = []
    for i, change in enumerate(repl.changes):
        fp = footprint(change)
        if not _within_closed(intervals, fp):
            violations.append(ReplacementViolation(repl_seq=i, footprint=fp))
        text = apply_change(text, change)
        intervals = absorb_intervals(intervals, change)
    return violations


def rescale_timestamps(repl: Replacement, t_lo: int, t_hi: int) -> Replacement:
    """Map replacement timestamps affinely onto [t_lo, t_hi].

    Zero-duration replacements pin to t_lo; outputs are floored to integers
    and monotonicity is preserved.
    """
    if t_lo > t_hi:
        raise ValueError(f"window {t_lo}..{t_hi} is inverted")
    if not repl.changes:
        return repl
    t_max = repl.changes[-1].t_ms
    if t_max <= 0:
        return Replacement(tuple(replace(c, t_ms=t_lo) for c in repl.changes))
    span = t_hi - t_lo
    return Replacement(
        tuple(replace(c, t_ms=t_lo + c.t_ms * span // t_max) for c in repl.changes)
    )


def substitute(history: EditHistory, rng: HistoryRange, repl: Replacement) -> RewriteResult:
    """Replace the range with ``repl`` and re-base every later change.

    The result is prefix + rescaled replacement + offset-adjusted suffix,
    renumbered contiguously. Versions before the range materialize
    identically to the original, and text outside the effective area is
    preserved at every later version. Raises AmbiguousRangeError when
    validation finds conflicts and ReplacementEscapesRegionError when the
    replacement leaves its region; the input history is never modified.
    """
    _check_range(history, rng)
    report = validate_rewrite(history, rng)
    if not report.ok:
        raise AmbiguousRangeError(report)

    areas = compute_range_area(history, rng)
    base = materialize(history, rng.start).text
    violations = check_replacement(base, areas.pre_image, repl)
    if violations:
        raise ReplacementEscapesRegionError(violations)

    # New post-image: fold the replacement over the editable skeleton, so
    # editable text the replacement left untouched still counts as its own.
    new_intervals = areas.pre_image.intervals
    for change in repl.changes:
        new_intervals = absorb_intervals(new_intervals, change)
    new_post = EffectiveArea(rng.start + len(repl.changes), new_intervals)
    mapping = build_mapping(areas.post_image, new_post)

    t_lo = history.changes[rng.start - 1].t_ms if rng.start > 0 else 0
    t_hi = history.changes[rng.end - 1].t_ms
    rescaled = rescale_timestamps(repl, t_lo, t_hi)

    out = list(history.changes[: rng.start])
    for change in rescaled.changes:
        out.append(replace(change, seq=len(out)))

    old_ivs = areas.post_image.intervals
    new_ivs = new_intervals
    for k in range(rng.end, len(history.changes)):
        change = history.changes[k]
        side = "after" if any(iv.end == change.pos for iv in old_ivs) else "before"
        pos = map_position(PositionMapping(tuple(zip(old_ivs, new_ivs))), change.pos, side)
        out.append(TextChange(len(out), change.t_ms, pos, change.deleted, change.inserted))
        dlen, ilen = len(change.deleted), len(change.inserted)
        old_ivs = _advance_intervals(old_ivs, change.pos, dlen, ilen, side)
        new_ivs = _advance_intervals(new_ivs, pos, dlen, ilen, side)
        if len(old_ivs) != len(new_ivs):
            raise MappingShapeMismatchError(
                f"areas desynchronized while re-basing change {k}"
            )

    result = EditHistory(history.initial_text, tuple(out), history.meta)
    return RewriteResult(history=result, mapping=mapping, report=report)
