from __future__ import annotations

import random

import pytest

from textcast import (
    TextSpan,
    TimeWindow,
    materialize,
    select_by_text,
    select_by_time,
    selection_validity,
)
from textcast.errors import EmptySelectionError, SpanOutOfBoundsError
from textcast.rewrite import HistoryRange

from support import make_history, random_history


class TestTimeWindow:
    def test_rejects_inverted(self):
        with pytest.raises(ValueError):
            TimeWindow(10, 5)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            TimeWindow(-1, 5)


class TestSelectByTime:
    def test_single_change(self, history_h):
        assert select_by_time(history_h, TimeWindow(900, 1100)) == HistoryRange(1, 2)

    def test_full_cover(self, history_h):
        assert select_by_time(history_h, TimeWindow(0, 2000)) == HistoryRange(0, 3)

    def test_empty_window(self, history_h):
        with pytest.raises(EmptySelectionError):
            select_by_time(history_h, TimeWindow(3000, 4000))

    def test_inclusive_bounds(self, history_h):
        assert select_by_time(history_h, TimeWindow(1000, 2000)) == HistoryRange(1, 3)

    def test_monotone_in_window(self):
        rnd = random.Random(5)
        for _ in range(50):
            history = random_history(rnd, max_changes=6, max_len=8)
            top = history.changes[-1].t_ms + 100
            prev = None
            for hi in range(0, top + 1, max(1, top // 7)):
                try:
                    rng = select_by_time(history, TimeWindow(0, hi))
                except EmptySelectionError:
                    continue
                if prev is not None:
                    assert rng.end >= prev.end and rng.start <= prev.start
                prev = rng


class TestSelectByText:
    def test_matches_time_selection(self, history_h):
        rng = select_by_text(history_h, TextSpan(2, 19, 25))
        assert rng == HistoryRange(1, 2)
        assert rng == select_by_time(history_h, TimeWindow(900, 1100))

    def test_whole_text_selects_everything(self, history_h):
        assert select_by_text(history_h, TextSpan(3, 0, 19)) == HistoryRange(0, 3)

    def test_caret_touches_nothing(self, history_h):
        with pytest.raises(EmptySelectionError):
            select_by_text(history_h, TextSpan(3, 0, 0))

    def test_span_out_of_bounds(self, history_h):
        with pytest.raises(SpanOutOfBoundsError):
            select_by_text(history_h, TextSpan(3, 0, 99))
        with pytest.raises(SpanOutOfBoundsError):
            select_by_text(history_h, TextSpan(9, 0, 1))

    def test_never_selects_changes_after_version(self, history_h):
        # viewing version 1: the " jumps" insertion and the deletion do not exist
        rng = select_by_text(history_h, TextSpan(1, 0, 19))
        assert rng == HistoryRange(0, 1)

    def test_convex_hull_swallows_interleaved_changes(self):
        # two edits produce the span; an unrelated edit sits between them
        history = make_history(
            "base text",
            [
                (0, "", "A"),       # touches span
                (9, "", "zz"),      # far away, later index
                (1, "", "B"),       # touches span again
            ],
        )
        rng = select_by_text(history, TextSpan(3, 0, 2))
        assert rng == HistoryRange(0, 3)

    def test_selection_of_typed_run(self, keystroke_cast):
        # the keystrokes that typed "brown fox" in the fox/dog sentence
        final = len(keystroke_cast.changes)
        assert materialize(keystroke_cast, final).text[10:19] == "brown fox"
        rng = select_by_text(keystroke_cast, TextSpan(final, 10, 19))
        assert rng == HistoryRange(10, 19)

    def test_agreement_on_constructed_fixture(self):
        history = make_history("abcdef", [(2, "", "XY"), (6, "", "ZW")])
        assert select_by_text(history, TextSpan(2, 2, 4)) == HistoryRange(0, 1)
        assert select_by_text(history, TextSpan(2, 6, 8)) == HistoryRange(1, 2)

    def test_purity(self, history_h):
        span = TextSpan(3, 0, 19)
        assert select_by_text(history_h, span) == select_by_text(history_h, span)

    def test_replacement_preimage_selected(self):
        history = make_history("hello world", [(0, "hello", "goodbye")])
        # selecting part of the replacement text finds the replacing change
        assert select_by_text(history, TextSpan(1, 2, 4)) == HistoryRange(0, 1)


class TestSelectionValidity:
    def test_wraps_validation(self, history_h, ambiguous_history):
        assert selection_validity(history_h, HistoryRange(1, 2)).ok
        assert not selection_validity(ambiguous_history, HistoryRange(1, 2)).ok

    def test_last_range_trivially_ok(self, ambiguous_history):
        n = len(ambiguous_history.changes)
        assert selection_validity(ambiguous_history, HistoryRange(n - 1, n)).ok


class TestRangeInvariants:
    def test_select_by_text_always_well_formed(self):
        rnd = random.Random(31)
        for _ in range(200):
            history = random_history(rnd, max_changes=7, max_len=10)
            n = len(history.changes)
            version = rnd.randint(0, n)
            text = materialize(history, version).text
            if not text:
                continue
            a = rnd.randint(0, len(text))
            b = rnd.randint(a, len(text))
            try:
                rng = select_by_text(history, TextSpan(version, a, b))
            except EmptySelectionError:
                continue
            assert 0 <= rng.start < rng.end <= version <= n
