"""Record, play, and non-linearly edit text-based screencasts.

A screencast is an initial text plus a sequence of character-level changes.
This package materializes any version, persists casts in the line-delimited
``.tcast`` format, selects history ranges by timeline window or text span,
and rewrites ranges safely: the selection's effective area is validated
against every later change, the replacement is constrained to the editable
region, and later offsets are re-based through a position mapping.
"""

from .areas import (
    AreaInterval,
    EffectiveArea,
    Footprint,
    FootprintKind,
    PositionMapping,
    absorb_change,
    build_mapping,
    footprint,
    interior_intersects,
    map_position,
    shift_area_through,
)
from .castfile import CastDocument, ReservedEvent, load, parse, parse_fragment, save, serialize
from .history import (
    CastMeta,
    EditHistory,
    Snapshot,
    TextChange,
    Violation,
    ViolationKind,
    apply_change,
    duration_ms,
    invert,
    materialize,
    replay_validate,
)
from .rewrite import (
    Conflict,
    HistoryRange,
    RangeArea,
    Replacement,
    ReplacementViolation,
    RewriteResult,
    ValidationReport,
    check_replacement,
    compute_range_area,
    editable_region,
    rescale_timestamps,
    substitute,
    validate_rewrite,
)
from .selection import TextSpan, TimeWindow, select_by_text, select_by_time, selection_validity
from .service import CastSession, make_server

__version__ = "0.1.0"

__all__ = [
    "AreaInterval",
    "CastDocument",
    "CastMeta",
    "CastSession",
    "Conflict",
    "EditHistory",
    "EffectiveArea",
    "Footprint",
    "FootprintKind",
    "HistoryRange",
    "PositionMapping",
    "RangeArea",
    "Replacement",
    "ReplacementViolation",
    "ReservedEvent",
    "RewriteResult",
    "Snapshot",
    "TextChange",
    "TextSpan",
    "TimeWindow",
    "ValidationReport",
    "Violation",
    "ViolationKind",
    "absorb_change",
    "apply_change",
    "build_mapping",
    "check_replacement",
    "compute_range_area",
    "duration_ms",
    "editable_region",
    "footprint",
    "interior_intersects",
    "invert",
    "load",
    "make_server",
    "map_position",
    "materialize",
    "parse",
    "parse_fragment",
    "rescale_timestamps",
    "replay_validate",
    "save",
    "select_by_text",
    "select_by_time",
    "selection_validity",
    "serialize",
    "shift_area_through",
    "substitute",
    "validate_rewrite",
]
