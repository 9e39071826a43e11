"""Edit-history data model: character-level changes, replay, integrity checks.

A text-based screencast is an initial text plus an ordered sequence of
:class:`TextChange` records. Replaying a prefix of the sequence yields the
document at any version; version ``v`` is the text after the first ``v``
changes. All offsets count Unicode scalar values (Python string indices),
never bytes or UTF-16 units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CorruptHistoryError,
    DeletedTextMismatchError,
    OffsetOutOfBoundsError,
    VersionOutOfRangeError,
)

# Snapshot spacing used by materialize's lazy replay cache. Tuning knob only;
# results are identical with or without it.
CHECKPOINT_INTERVAL = 256


@dataclass(frozen=True)
class TextChange:
    """One atomic edit: remove ``deleted`` at ``pos``, then insert ``inserted``.

    ``pos`` addresses the document version immediately before the change.
    Storing the deleted text (not just its length) lets replay verify that
    the history still matches the document it is applied to.
    """

    seq: int
    t_ms: int
    pos: int
    deleted: str
    inserted: str

    @property
    def delta(self) -> int:
        """Net length change."""
        return len(self.inserted) - len(self.deleted)

    def is_noop(self) -> bool:
        return not self.deleted and not self.inserted


@dataclass(frozen=True)
class Snapshot:
    version: int
    text: str


@dataclass(frozen=True)
class CastMeta:
    title: str | None = None
    creator: str | None = None
    created_at: str | None = None


@dataclass(frozen=True)
class EditHistory:
    """Initial text plus ordered changes; the screencast itself.

    Values are immutable after construction and safe to share across
    threads. ``_snapshots`` is an internal replay cache; it never affects
    equality or observable behaviour.
    """

    initial_text: str = ""
    changes: tuple[TextChange, ...] = ()
    meta: CastMeta | None = None
    _snapshots: dict[int, str] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __len__(self) -> int:
        return len(self.changes)


class ViolationKind(str, Enum):
    OFFSET = "offset"
    MISMATCH = "mismatch"
    TIMESTAMP_ORDER = "timestamp-order"
    NO_OP = "no-op"


@dataclass(frozen=True)
class Violation:
    seq: int
    kind: ViolationKind
    detail: str = ""


def apply_change(text: str, change: TextChange) -> str:
    """Splice one change into ``text``, verifying the recorded deleted text."""
    pos = change.pos
    end = pos + len(change.deleted)
    if pos < 0 or end > len(text):
        raise OffsetOutOfBoundsError(
            f"change at pos {pos} (deleting {len(change.deleted)}) exceeds "
            f"document of length {len(text)}"
        )
    if text[pos:end] != change.deleted:
        raise DeletedTextMismatchError(
            f"expected {change.deleted!r} at pos {pos}, found {text[pos:end]!r}"
        )
    return text[:pos] + change.inserted + text[end:]


def invert(change: TextChange) -> TextChange:
    """Swap deleted and inserted text; undoes the change when applied after it."""
    return TextChange(
        seq=change.seq,
        t_ms=change.t_ms,
        pos=change.pos,
        deleted=change.inserted,
        inserted=change.deleted,
    )


def materialize(history: EditHistory, version: int) -> Snapshot:
    """Compute the document text at ``version`` by replaying the history.

    Pure: repeated calls return identical snapshots. Replay restarts from the
    nearest cached checkpoint, caching every CHECKPOINT_INTERVAL-th version
    as it goes.
    """
    n = len(history.changes)
    if not 0 <= version <= n:
        raise VersionOutOfRangeError(version, n)

    base = (version // CHECKPOINT_INTERVAL) * CHECKPOINT_INTERVAL
    while base > 0 and base not in history._snapshots:
        base -= CHECKPOINT_INTERVAL
    text = history._snapshots[base] if base > 0 else history.initial_text

    for k in range(base, version):
        try:
            text = apply_change(text, history.changes[k])
        except (OffsetOutOfBoundsError, DeletedTextMismatchError) as exc:
            raise CorruptHistoryError(k, str(exc)) from exc
        at = k + 1
        if at % CHECKPOINT_INTERVAL == 0:
            history._snapshots.setdefault(at, text)
    return Snapshot(version=version, text=text)


def replay_validate(history: EditHistory) -> list[Violation]:
    """Check every history invariant; an empty list means the history is valid.

    Violations are data, not errors: each carries the offending seq and a
    kind. Offset/mismatch checking stops at the first replay failure (later
    positions would be judged against a broken document), while timestamp
    and no-op checks always cover the whole sequence.
    """
    violations: list[Violation] = []
    text: str | None = history.initial_text
    prev_t = 0
    for k, change in enumerate(history.changes):
        if change.is_noop():
            violations.append(Violation(k, ViolationKind.NO_OP))
        if change.t_ms < prev_t:
            violations.append(
                Violation(k, ViolationKind.TIMESTAMP_ORDER, f"{change.t_ms} < {prev_t}")
            )
        prev_t = max(prev_t, change.t_ms)
        if text is None:
            continue
        try:
            text = apply_change(text, change)
        except OffsetOutOfBoundsError as exc:
            violations.append(Violation(k, ViolationKind.OFFSET, str(exc)))
            text = None
        except DeletedTextMismatchError as exc:
            violations.append(Violation(k, ViolationKind.MISMATCH, str(exc)))
            text = None
    return violations


def duration_ms(history: EditHistory) -> int:
    """Timestamp of the last change; 0 for an empty history."""
    if not history.changes:
        return 0
    return history.changes[-1].t_ms
