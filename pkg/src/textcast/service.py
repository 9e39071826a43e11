"""JSON-over-HTTP facade for one loaded cast.

Endpoints::

    GET  /api/cast                   header, full change list, rev_token
    GET  /api/snapshot?version=v     document text at a version
    POST /api/select/time            {t0,t1}             -> {start,end}
    POST /api/select/text            {version,start,end} -> {start,end}
    POST /api/validate               {start,end}         -> report + editable region
    POST /api/rewrite                {start,end,replacement,rev_token}

Every error body is ``{code, message, details}``. Reads never lock: session
state is swapped atomically, so a snapshot taken mid-rewrite is either fully
old or fully new. Rewrites are funneled through one lock and guarded by an
optimistic revision token: of N concurrent rewrites against the same token,
exactly one wins and the rest get 409. Anything outside ``/api`` is served
from the editor's static bundle when one is configured.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any
from urllib.parse import parse_qs, urlparse

from .castfile import FORMAT_TAG, FORMAT_VERSION, changes_from_rows
from .errors import (
    AmbiguousRangeError,
    EmptyRangeError,
    EmptySelectionError,
    MalformedEventError,
    RangeOutOfBoundsError,
    ReplacementEscapesRegionError,
    SpanOutOfBoundsError,
    TextcastError,
    VersionOutOfRangeError,
)
from .history import EditHistory, duration_ms, materialize
from .rewrite import (
    Conflict,
    HistoryRange,
    Replacement,
    ValidationReport,
    editable_region,
    substitute,
    validate_rewrite,
)
from .selection import TextSpan, TimeWindow, select_by_text, select_by_time

_PLACEHOLDER_PAGE = b"""<!doctype html>
<html><head><meta charset="utf-8"><title>textcast</title></head>
<body><h1>textcast service</h1>
<p>No editor bundle configured. The JSON API lives under <code>/api</code>.</p>
</body></html>
"""


class StaleTokenError(TextcastError):
    def __init__(self, current: int):
        super().__init__(f"stale rev_token; current is {current}")
        self.current = current


class CastSession:
    """One loaded cast plus its optimistic revision token."""

    def __init__(self, history: EditHistory):
        self._lock = threading.Lock()
        self._state: tuple[EditHistory, int] = (history, 0)

    @property
    def state(self) -> tuple[EditHistory, int]:
        return self._state

    def rewrite(self, rng: HistoryRange, repl: Replacement, token: int) -> tuple[EditHistory, int]:
        with self._lock:
            history, rev = self._state
            if token != rev:
                raise StaleTokenError(rev)
            result = substitute(history, rng, repl)
            self._state = (result.history, rev + 1)
            return result.history, rev + 1


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: Any = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


def _conflict_json(c: Conflict) -> dict:
    return {
        "seq": c.seq,
        "frame_version": c.frame_version,
        "footprint": {"kind": c.footprint.kind.value, "start": c.footprint.start, "end": c.footprint.end},
        "interval": {"start": c.interval.start, "end": c.interval.end},
    }


def _report_json(report: ValidationReport) -> dict:
    return {"ok": report.ok, "conflicts": [_conflict_json(c) for c in report.conflicts]}


def _header_json(history: EditHistory) -> dict:
    header: dict[str, Any] = {FORMAT_TAG: FORMAT_VERSION, "initial": history.initial_text}
    if history.meta is not None:
        for key in ("title", "creator", "created_at"):
            value = getattr(history.meta, key)
            if value is not None:
                header[key] = value
    return header


def _int_field(body: dict, key: str) -> int:
    value = body.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ApiError(400, "BadRequest", f"field {key!r} must be an integer")
    return value


class _Handler(BaseHTTPRequestHandler):
    server: "CastServer"

    # -- plumbing ---------------------------------------------------------

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _send_json(self, status: int, payload: Any) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, exc: ApiError) -> None:
        self._send_json(
            exc.status, {"code": exc.code, "message": exc.message, "details": exc.details}
        )

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            body = json.loads(raw.decode("utf-8")) if raw else {}
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError(400, "BadRequest", f"body is not valid JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise ApiError(400, "BadRequest", "body must be a JSON object")
        return body

    # -- routes -----------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        try:
            if url.path == "/api/cast":
                self._get_cast()
            elif url.path == "/api/snapshot":
                self._get_snapshot(parse_qs(url.query))
            elif url.path.startswith("/api"):
                raise ApiError(404, "NotFound", f"no such endpoint: {url.path}")
            else:
                self._serve_static(url.path)
        except ApiError as exc:
            self._send_error_json(exc)

    def do_POST(self):
        url = urlparse(self.path)
        handlers = {
            "/api/select/time": self._post_select_time,
            "/api/select/text": self._post_select_text,
            "/api/validate": self._post_validate,
            "/api/rewrite": self._post_rewrite,
        }
        try:
            handler = handlers.get(url.path)
            if handler is None:
                raise ApiError(404, "NotFound", f"no such endpoint: {url.path}")
            handler(self._read_body())
        except ApiError as exc:
            self._send_error_json(exc)

    # -- endpoint bodies ----------------------------------------------------

    def _get_cast(self):
        history, rev = self.server.session.state
        self._send_json(
            200,
            {
                "header": _header_json(history),
                "changes": [[c.t_ms, c.pos, c.deleted, c.inserted] for c in history.changes],
                "duration_ms": duration_ms(history),
                "rev_token": rev,
            },
        )

    def _get_snapshot(self, query: dict):
        history, _ = self.server.session.state
        try:
            version = int(query.get("version", ["-1"])[0])
        except ValueError as exc:
            raise ApiError(400, "BadRequest", "version must be an integer") from exc
        try:
            snap = materialize(history, version)
        except VersionOutOfRangeError as exc:
            raise ApiError(400, "VersionOutOfRange", str(exc)) from exc
        self._send_json(200, {"version": snap.version, "text": snap.text})

    def _post_select_time(self, body: dict):
        history, _ = self.server.session.state
        try:
            window = TimeWindow(_int_field(body, "t0"), _int_field(body, "t1"))
            rng = select_by_time(history, window)
        except ValueError as exc:
            raise ApiError(400, "BadRequest", str(exc)) from exc
        except EmptySelectionError as exc:
            raise ApiError(404, "EmptySelection", str(exc)) from exc
        self._send_json(200, {"start": rng.start, "end": rng.end})

    def _post_select_text(self, body: dict):
        history, _ = self.server.session.state
        try:
            span = TextSpan(
                _int_field(body, "version"), _int_field(body, "start"), _int_field(body, "end")
            )
            rng = select_by_text(history, span)
        except (ValueError, SpanOutOfBoundsError) as exc:
            raise ApiError(400, "SpanOutOfBounds", str(exc)) from exc
        except EmptySelectionError as exc:
            raise ApiError(404, "EmptySelection", str(exc)) from exc
        self._send_json(200, {"start": rng.start, "end": rng.end})

    def _post_validate(self, body: dict):
        history, _ = self.server.session.state
        rng = HistoryRange(_int_field(body, "start"), _int_field(body, "end"))
        try:
            report = validate_rewrite(history, rng)
            editable = editable_region(history, rng)
        except EmptyRangeError as exc:
            raise ApiError(400, "EmptyRange", str(exc)) from exc
        except RangeOutOfBoundsError as exc:
            raise ApiError(400, "RangeOutOfBounds", str(exc)) from exc
        payload = _report_json(report)
        payload["editable"] = [
            {"start": iv.start, "end": iv.end} for iv in editable.intervals
        ]
        self._send_json(200, payload)

    def _post_rewrite(self, body: dict):
        rng = HistoryRange(_int_field(body, "start"), _int_field(body, "end"))
        token = _int_field(body, "rev_token")
        rows = body.get("replacement", [])
        if not isinstance(rows, list):
            raise ApiError(400, "BadRequest", "replacement must be an array of events")
        try:
            repl = Replacement(changes_from_rows(rows))
        except (MalformedEventError, ValueError) as exc:
            raise ApiError(400, "BadRequest", f"bad replacement: {exc}") from exc
        try:
            history, rev = self.server.session.rewrite(rng, repl, token)
        except StaleTokenError as exc:
            raise ApiError(409, "StaleToken", str(exc), {"rev_token": exc.current}) from exc
        except AmbiguousRangeError as exc:
            raise ApiError(
                422,
                "AmbiguousRange",
                str(exc),
                {"conflicts": [_conflict_json(c) for c in exc.report.conflicts]},
            ) from exc
        except ReplacementEscapesRegionError as exc:
            raise ApiError(
                422,
                "ReplacementEscapesRegion",
                str(exc),
                {"violations": [v.repl_seq for v in exc.violations]},
            ) from exc
        except EmptyRangeError as exc:
            raise ApiError(400, "EmptyRange", str(exc)) from exc
        except RangeOutOfBoundsError as exc:
            raise ApiError(400, "RangeOutOfBounds", str(exc)) from exc
        final = materialize(history, len(history.changes))
        self._send_json(
            200,
            {
                "rev_token": rev,
                "summary": {
                    "changes": len(history.changes),
                    "duration_ms": duration_ms(history),
                    "final_length": len(final.text),
                },
            },
        )

    # -- static bundle ------------------------------------------------------

    def _serve_static(self, path: str):
        ui_dir = self.server.ui_dir
        if ui_dir is None:
            if path == "/":
                self._send_bytes(200, "text/html; charset=utf-8", _PLACEHOLDER_PAGE)
                return
            raise ApiError(404, "NotFound", f"no such path: {path}")
        rel = path.lstrip("/") or "index.html"
        target = (ui_dir / rel).resolve()
        if not target.is_relative_to(ui_dir.resolve()) or not target.is_file():
            raise ApiError(404, "NotFound", f"no such path: {path}")
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        if ctype.startswith("text/") or ctype in ("application/javascript", "application/json"):
            ctype += "; charset=utf-8"
        self._send_bytes(200, ctype, target.read_bytes())

    def _send_bytes(self, status: int, ctype: str, body: bytes) -> None:
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class CastServer(ThreadingHTTPServer):
    daemon_threads = True
    # editors burst-connect (selection + validation + snapshots in flight at
    # once); the socketserver default backlog of 5 drops connections
    request_queue_size = 64

    def __init__(self, address: tuple[str, int], session: CastSession, ui_dir: Path | None = None):
        super().__init__(address, _Handler)
        self.session = session
        self.ui_dir = ui_dir


def make_server(
    history: EditHistory,
    host: str = "127.0.0.1",
    port: int = 0,
    ui_dir: str | Path | None = None,
) -> CastServer:
    """Build a ready-to-run server; port 0 picks a free port."""
    return CastServer((host, port), CastSession(history), Path(ui_dir) if ui_dir else None)
