"""Shared test helpers: an independent oracle and random generators.

The oracle replays histories on a slot sequence. Every live character
carries a born-in-range flag and zero-width tombstones mark spots where the
watched range deleted text, so areas and ambiguity can be read straight off
the slots with no interval arithmetic. Agreement between this model and the
library's incremental algebra is therefore a real check, not a tautology.
"""

from __future__ import annotations

import random

from textcast import EditHistory, Replacement, TextChange, materialize
from textcast.areas import absorb_intervals
from textcast.rewrite import HistoryRange

CHAR = 0
TOMB = 1


class SlotModel:
    """Document as slots: live chars with provenance plus tombstones."""

    def __init__(self, text: str):
        self.slots: list[list] = [[CHAR, ch, False] for ch in text]

    def text(self) -> str:
        return "".join(s[1] for s in self.slots if s[0] == CHAR)

    def _char_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.slots) if s[0] == CHAR]

    def _born(self, idx: list[int], live_pos: int) -> bool:
        if 0 <= live_pos < len(idx):
            return self.slots[idx[live_pos]][2]
        return False

    def _tomb_at(self, live_pos: int) -> bool:
        q = 0
        for s in self.slots:
            if s[0] == CHAR:
                if q == live_pos:
                    return False
                q += 1
            elif q == live_pos:
                return True
        return False

    def conflicts(self, change: TextChange) -> bool:
        """Would rewriting the watched range leave this change homeless?

        A change is ambiguous when it deletes a range-born character, its
        deletion span crosses a tombstone, it inserts between two born
        characters, or it inserts exactly at an isolated tombstone.
        """
        idx = self._char_indices()
        pos, dlen = change.pos, len(change.deleted)
        if dlen > 0:
            if any(self.slots[i][2] for i in idx[pos : pos + dlen]):
                return True
            q = 0
            for s in self.slots:
                if s[0] == CHAR:
                    q += 1
                elif pos < q < pos + dlen:
                    return True
            return False
        lborn = self._born(idx, pos - 1)
        rborn = self._born(idx, pos)
        if lborn and rborn:
            return True
        return self._tomb_at(pos) and not lborn and not rborn

    def apply(self, change: TextChange, born: bool, tombstones: bool) -> None:
        """Replay one change; ``born``/``tombstones`` tag range-internal edits.

        Placement around tombstones mirrors how the canonical area treats
        scars. Replacement text takes the deleted span's slot, so it lands
        after scars at the span's start and before scars at its end. A pure
        insertion at a boundary sticks to the born text there: it goes in
        front of boundary tombstones only when the character to the right is
        born, keeping boundary scars glued to their run.
        """
        idx = self._char_indices()
        pos, dlen = change.pos, len(change.deleted)
        assert pos + dlen <= len(idx), "oracle applied an out-of-bounds change"
        if dlen:
            assert "".join(self.slots[i][1] for i in idx[pos : pos + dlen]) == change.deleted
            at = idx[pos]
            del self.slots[at : idx[pos + dlen - 1] + 1]
            if tombstones:
                self.slots.insert(at, [TOMB, "", False])
                at += 1
        elif change.inserted:
            lborn = self._born(idx, pos - 1)
            rborn = self._born(idx, pos)
            if rborn and not lborn:
                at = idx[pos - 1] + 1 if pos > 0 else 0  # in front of boundary tombs
            else:
                at = idx[pos] if pos < len(idx) else len(self.slots)
        if change.inserted:
            self.slots[at:at] = [[CHAR, ch, born] for ch in change.inserted]

    def area_intervals(self) -> tuple[tuple[int, int], ...]:
        """Canonical area: born-char runs plus isolated tombstone points."""
        spans: list[list[int]] = []
        points: set[int] = set()
        q = 0
        for s in self.slots:
            if s[0] == TOMB:
                points.add(q)
                continue
            if s[2]:
                if spans and spans[-1][1] == q:
                    spans[-1][1] = q + 1
                else:
                    spans.append([q, q + 1])
            q += 1
        out = [(a, b) for a, b in spans]
        out += [(p, p) for p in points if not any(a <= p <= b for a, b in spans)]
        return tuple(sorted(out))


def range_model(history: EditHistory, rng: HistoryRange) -> SlotModel:
    model = SlotModel(materialize(history, rng.start).text)
    for k in range(rng.start, rng.end):
        model.apply(history.changes[k], born=True, tombstones=True)
    return model


def oracle_validate(history: EditHistory, rng: HistoryRange) -> bool:
    model = range_model(history, rng)
    for k in range(rng.end, len(history.changes)):
        change = history.changes[k]
        if model.conflicts(change):
            return False
        model.apply(change, born=False, tombstones=False)
    return True


def oracle_area_at(history: EditHistory, rng: HistoryRange, version: int):
    """Area at ``version`` (>= rng.end), or None once a conflict occurred."""
    model = range_model(history, rng)
    for k in range(rng.end, version):
        change = history.changes[k]
        if model.conflicts(change):
            return None
        model.apply(change, born=False, tombstones=False)
    return model.area_intervals()


def skeleton_model(history: EditHistory, rng: HistoryRange) -> SlotModel:
    """Editable-region skeleton at range start, derived by do-then-undo.

    Replaying the range and then its inverses re-creates the range-start
    text, with every character the range went on to delete re-born and a
    tombstone at every pure insertion site: the pre-image, without interval
    arithmetic.
    """
    from textcast import invert

    model = SlotModel(materialize(history, rng.start).text)
    for k in range(rng.start, rng.end):
        model.apply(history.changes[k], born=True, tombstones=True)
    for k in range(rng.end - 1, rng.start - 1, -1):
        model.apply(invert(history.changes[k]), born=True, tombstones=True)
    return model


def oracle_mapped_area_at(history: EditHistory, rng: HistoryRange, repl: Replacement,
                          new_history: EditHistory, new_version: int):
    """Mapped area in the rewritten history at ``new_version``.

    The rewritten range owns everything the old range could touch, so the
    model starts from the editable skeleton, absorbs the replacement, then
    carries the area through the re-based suffix changes.
    """
    model = skeleton_model(history, rng)
    for change in repl.changes:
        model.apply(change, born=True, tombstones=True)
    for k in range(rng.start + len(repl.changes), new_version):
        model.apply(new_history.changes[k], born=False, tombstones=False)
    return model.area_intervals()


# -- builders and generators -------------------------------------------------


def make_history(initial: str, ops, t_step: int = 1000, meta=None) -> EditHistory:
    """History from (pos, deleted, inserted) tuples, timestamps on a grid."""
    changes = tuple(
        TextChange(seq=k, t_ms=k * t_step, pos=pos, deleted=d, inserted=i)
        for k, (pos, d, i) in enumerate(ops)
    )
    return EditHistory(initial, changes, meta)


def typing_history(text: str, t_step: int = 80) -> EditHistory:
    """Keystroke-level history typing ``text`` one character at a time."""
    return make_history("", [(k, "", ch) for k, ch in enumerate(text)], t_step=t_step)


def random_change(rnd: random.Random, text: str, seq: int, t: int,
                  max_len: int, alphabet: str) -> TextChange:
    grow = len(text) < max_len
    for _ in range(20):
        pos = rnd.randint(0, len(text))
        dlen = rnd.randint(0, min(3, len(text) - pos))
        ilen = rnd.randint(0, 3 if grow else 1)
        if dlen == 0 and ilen == 0:
            continue
        inserted = "".join(rnd.choice(alphabet) for _ in range(ilen))
        return TextChange(seq, t, pos, text[pos : pos + dlen], inserted)
    return TextChange(seq, t, 0, "", rnd.choice(alphabet))


def random_history(rnd: random.Random, max_changes: int = 8, max_len: int = 12,
                   alphabet: str = "ab", initial: str = "") -> EditHistory:
    from textcast import apply_change

    text = initial
    changes = []
    t = 0
    for k in range(rnd.randint(1, max_changes)):
        change = random_change(rnd, text, k, t, max_len, alphabet)
        text = apply_change(text, change)
        changes.append(change)
        t += rnd.randint(0, 400)
    return EditHistory(initial, tuple(changes))


def random_replacement(rnd: random.Random, base_text: str, editable, max_changes: int = 4,
                       alphabet: str = "xy") -> Replacement:
    """Replacement staying inside the (evolving) editable region."""
    from textcast import apply_change

    text = base_text
    intervals = tuple(editable)
    changes: list[TextChange] = []
    t = 0
    for _ in range(rnd.randint(0, max_changes)):
        iv = rnd.choice(intervals)
        lo, hi = iv.start, iv.end
        want_delete = lo < hi and rnd.random() < 0.45
        if want_delete:
            s = rnd.randint(lo, hi - 1)
            e = rnd.randint(s + 1, hi)
            deleted = text[s:e]
            inserted = "".join(rnd.choice(alphabet) for _ in range(rnd.randint(0, 2)))
            change = TextChange(len(changes), t, s, deleted, inserted)
        else:
            q = rnd.randint(lo, hi)
            inserted = "".join(rnd.choice(alphabet) for _ in range(rnd.randint(1, 3)))
            change = TextChange(len(changes), t, q, "", inserted)
        text = apply_change(text, change)
        intervals = absorb_intervals(intervals, change)
        changes.append(change)
        t += rnd.randint(0, 150)
    return Replacement(tuple(changes))


def enumerate_histories(initial: str, depth: int, inserts, max_dlen: int = 2,
                        max_len: int = 6):
    """Yield every replay-valid history of exactly ``depth`` changes."""
    from textcast import apply_change

    def walk(text, prefix):
        k = len(prefix)
        if k == depth:
            yield EditHistory(initial, tuple(prefix))
            return
        for pos in range(len(text) + 1):
            for dlen in range(0, min(max_dlen, len(text) - pos) + 1):
                for ins in inserts:
                    if dlen == 0 and not ins:
                        continue
                    if len(text) - dlen + len(ins) > max_len:
                        continue
                    change = TextChange(k, k * 100, pos, text[pos : pos + dlen], ins)
                    yield from walk(apply_change(text, change), prefix + [change])

    yield from walk(initial, [])


def engine_area_tuples(intervals) -> tuple[tuple[int, int], ...]:
    return tuple((iv.start, iv.end) for iv in intervals)


def all_ranges(history: EditHistory):
    n = len(history.changes)
    for start in range(n):
        for end in range(start + 1, n + 1):
            yield HistoryRange(start, end)
