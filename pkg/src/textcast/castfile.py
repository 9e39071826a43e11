"""The ``.tcast`` interchange format: parsing and canonical serialization.

A cast is UTF-8, line-delimited JSON: a header object on line 1 tagged
``"textcast": 1``, then one event per line. Text-change events are arrays
``[t_ms, pos, deleted, inserted]`` with absolute millisecond timestamps and
positions counted in Unicode scalar values. Event arrays whose first element
is a string are reserved kinds (e.g. ``"cursor"``); they survive a
parse/serialize round trip but the engine ignores them.

Line-delimited records keep the format appendable while recording and
streamable during playback. Canonical output uses compact separators,
minimal escapes, LF endings and a trailing newline, so serialization is
deterministic and parse∘serialize is the identity on canonical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Union

from .errors import (
    MalformedEventError,
    NotTextcastError,
    ReplayInvalidError,
    UnsupportedVersionError,
)
from .history import CastMeta, EditHistory, TextChange, replay_validate

FORMAT_TAG = "textcast"
FORMAT_VERSION = 1
FILE_EXTENSION = ".tcast"

_META_KEYS = ("title", "creator", "created_at")


@dataclass(frozen=True)
class ReservedEvent:
    kind: str
    payload: tuple[Any, ...] = ()


Event = Union[TextChange, ReservedEvent]


@dataclass(frozen=True)
class CastDocument:
    initial_text: str = ""
    meta: CastMeta | None = None
    extras: tuple[tuple[str, Any], ...] = ()
    events: tuple[Event, ...] = ()

    @property
    def history(self) -> EditHistory:
        """The engine's view of the cast: text changes only."""
        changes = tuple(ev for ev in self.events if isinstance(ev, TextChange))
        return EditHistory(self.initial_text, changes, self.meta)

    @classmethod
    def from_history(cls, history: EditHistory) -> "CastDocument":
        return cls(history.initial_text, history.meta, (), tuple(history.changes))


def _text_change_from_row(row: list, seq: int, line: int) -> TextChange:
    if len(row) != 4:
        raise MalformedEventError(f"expected 4 fields, got {len(row)}", line=line)
    t_ms, pos, deleted, inserted = row
    for value, name in ((t_ms, "t_ms"), (pos, "pos")):
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedEventError(f"{name} must be an integer", line=line)
    for value, name in ((deleted, "deleted"), (inserted, "inserted")):
        if not isinstance(value, str):
            raise MalformedEventError(f"{name} must be a string", line=line)
    return TextChange(seq=seq, t_ms=t_ms, pos=pos, deleted=deleted, inserted=inserted)


def changes_from_rows(rows: list) -> tuple[TextChange, ...]:
    """Decode replacement payload rows ([t,pos,del,ins] arrays) into changes."""
    changes = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise MalformedEventError("event must be an array", line=i + 1)
        changes.append(_text_change_from_row(row, seq=i, line=i + 1))
    return tuple(changes)


def parse(data: bytes | str, validate: bool = True) -> CastDocument:
    """Decode a cast; errors carry the offending line (and column for JSON).

    With ``validate`` (the default) the decoded history must replay cleanly
    or ReplayInvalidError is raised; integrity checkers pass ``False`` to get
    their hands on a broken document.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NotTextcastError(f"not UTF-8: {exc}", line=1) from exc
    else:
        text = data

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise NotTextcastError("empty input", line=1)

    header_line = lines[0].rstrip("\r")
    try:
        header = json.loads(header_line)
    except json.JSONDecodeError as exc:
        raise NotTextcastError(
            f"header is not valid JSON: {exc.msg}", line=1, column=exc.colno
        ) from exc
    if not isinstance(header, dict) or FORMAT_TAG not in header:
        raise NotTextcastError("first line is not a textcast header", line=1)
    version = header[FORMAT_TAG]
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(f"format version {version!r} unsupported", line=1)
    initial = header.get("initial", "")
    if not isinstance(initial, str):
        raise NotTextcastError("header field 'initial' must be a string", line=1)

    meta_fields: dict[str, str] = {}
    extras: list[tuple[str, Any]] = []
    for key, value in header.items():
        if key in (FORMAT_TAG, "initial"):
            continue
        if key in _META_KEYS:
            if not isinstance(value, str):
                raise NotTextcastError(f"header field {key!r} must be a string", line=1)
            meta_fields[key] = value
        else:
            extras.append((key, value))
    meta = CastMeta(**meta_fields) if meta_fields else None

    events: list[Event] = []
    seq = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        raw = raw.rstrip("\r")
        if not raw:
            raise MalformedEventError("blank event line", line=lineno)
        try:
            row = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedEventError(
                f"event is not valid JSON: {exc.msg}", line=lineno, column=exc.colno
            ) from exc
        if not isinstance(row, list) or not row:
            raise MalformedEventError("event must be a non-empty array", line=lineno)
        if isinstance(row[0], str):
            events.append(ReservedEvent(kind=row[0], payload=tuple(row[1:])))
            continue
        events.append(_text_change_from_row(row, seq=seq, line=lineno))
        seq += 1

    doc = CastDocument(initial_text=initial, meta=meta, extras=tuple(extras), events=tuple(events))
    if validate:
        violations = replay_validate(doc.history)
        if violations:
            worst = violations[0]
            raise ReplayInvalidError(worst.seq, f"{worst.kind.value} {worst.detail}".strip())
    return doc


def parse_fragment(data: bytes | str) -> tuple[TextChange, ...]:
    """Decode a replacement fragment: event lines with an optional header.

    Fragments are positioned against some other document, so no replay
    validation applies; reserved events are skipped.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedEventError(f"not UTF-8: {exc}", line=1) from exc
    else:
        text = data
    lines = [line.rstrip("\r") for line in text.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    start = 0
    if lines:
        try:
            head = json.loads(lines[0])
        except json.JSONDecodeError:
            head = None
        if isinstance(head, dict):
            if head.get(FORMAT_TAG, FORMAT_VERSION) != FORMAT_VERSION:
                raise UnsupportedVersionError(
                    f"format version {head.get(FORMAT_TAG)!r} unsupported", line=1
                )
            start = 1
    changes: list[TextChange] = []
    for lineno, raw in enumerate(lines[start:], start=start + 1):
        if not raw:
            raise MalformedEventError("blank event line", line=lineno)
        try:
            row = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedEventError(
                f"event is not valid JSON: {exc.msg}", line=lineno, column=exc.colno
            ) from exc
        if not isinstance(row, list) or not row:
            raise MalformedEventError("event must be a non-empty array", line=lineno)
        if isinstance(row[0], str):
            continue
        changes.append(_text_change_from_row(row, seq=len(changes), line=lineno))
    return tuple(changes)


def _dump(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def serialize(doc: CastDocument) -> bytes:
    """Canonical bytes for a document; deterministic for equal documents."""
    header: dict[str, Any] = {FORMAT_TAG: FORMAT_VERSION, "initial": doc.initial_text}
    if doc.meta is not None:
        for key in _META_KEYS:
            value = getattr(doc.meta, key)
            if value is not None:
                header[key] = value
    header.update(dict(doc.extras))
    out = [_dump(header)]
    for ev in doc.events:
        if isinstance(ev, TextChange):
            out.append(_dump([ev.t_ms, ev.pos, ev.deleted, ev.inserted]))
        else:
            out.append(_dump([ev.kind, *ev.payload]))
    return ("\n".join(out) + "\n").encode("utf-8")


def load(path: str | Path) -> CastDocument:
    return parse(Path(path).read_bytes())


def save(path: str | Path, doc: CastDocument) -> None:
    Path(path).write_bytes(serialize(doc))
