from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import make_history, typing_history

SENTENCE = "The quick brown fox"
PANGRAM = "The quick brown fox jumps over the lazy dog"


@pytest.fixture
def history_h():
    """Insert a sentence, append " jumps", delete "quick "."""
    return make_history(
        "",
        [
            (0, "", SENTENCE),
            (19, "", " jumps"),
            (4, "quick ", ""),
        ],
    )


@pytest.fixture
def ambiguous_history():
    """Insert a sentence, delete "brown ", insert "swift " at the same offset.

    The reinsertion lands exactly on the deletion's collapse point, so if the
    deletion is rewritten away there is no single right order for "swift "
    relative to whatever comes back: the canonical unrewritable range.
    """
    return make_history(
        "",
        [
            (0, "", SENTENCE),
            (10, "brown ", ""),
            (10, "", "swift "),
        ],
    )


@pytest.fixture
def keystroke_cast():
    """Character-by-character typing of the fox/dog sentence."""
    return typing_history(PANGRAM)
