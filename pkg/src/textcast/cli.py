"""Command-line entry points.

Exit codes: 0 success, 1 validation/ambiguity findings reported, 2 usage
error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import castfile
from .castfile import CastDocument
from .errors import (
    AmbiguousRangeError,
    CastParseError,
    DeletedTextMismatchError,
    EmptySelectionError,
    OffsetOutOfBoundsError,
    RangeOutOfBoundsError,
    ReplacementEscapesRegionError,
    SpanOutOfBoundsError,
)
from .history import EditHistory, TextChange, apply_change, duration_ms, materialize, replay_validate
from .rewrite import HistoryRange, Replacement, editable_region, substitute, validate_rewrite
from .selection import TextSpan, TimeWindow, select_by_text, select_by_time, selection_validity
from .service import make_server

EXIT_OK = 0
EXIT_REPORTED = 1
EXIT_USAGE = 2
EXIT_IO = 3

KEY_DELAY_MS = 80  # inter-key delay for synthesized typed replacements

_CLEAR = "\x1b[2J\x1b[H"

# seam for tests; playback sleeps go through here
_sleep = time.sleep


def _fail(message: str, code: int) -> int:
    print(f"textcast: {message}", file=sys.stderr)
    return code


def _load(path: str, validate: bool = True) -> CastDocument:
    return castfile.parse(Path(path).read_bytes(), validate=validate)


def _parse_pair(text: str, flag: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{flag} expects two integers as A:B") from None


def _range_arg(text: str) -> tuple[int, int]:
    s, e = _parse_pair(text, "--range")
    if s == e:
        raise argparse.ArgumentTypeError("empty range: start and end are equal")
    return s, e


def _text_sel_arg(text: str) -> tuple[int, int, int]:
    try:
        v, a, b = text.split(":")
        return int(v), int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("--text expects three integers as VERSION:START:END") from None


def _describe_conflict(c) -> str:
    fp = c.footprint
    where = f"@{fp.start}" if fp.start == fp.end else f"@[{fp.start},{fp.end})"
    return f"conflict seq={c.seq} {fp.kind.value}{where} hits {c.interval} (frame {c.frame_version})"


def cmd_info(args) -> int:
    doc = _load(args.cast)
    history = doc.history
    final = materialize(history, len(history.changes))
    print(f"changes: {len(history.changes)}")
    print(f"duration: {duration_ms(history)}ms")
    print(f"initial length: {len(history.initial_text)}")
    print(f"final length: {len(final.text)}")
    if history.meta is not None:
        for key in ("title", "creator", "created_at"):
            value = getattr(history.meta, key)
            if value is not None:
                print(f"{key}: {value}")
    return EXIT_OK


def cmd_check(args) -> int:
    doc = _load(args.cast, validate=False)
    violations = replay_validate(doc.history)
    if not violations:
        print("ok")
        return EXIT_OK
    for v in violations:
        detail = f" {v.detail}" if v.detail else ""
        print(f"seq={v.seq} {v.kind.value}{detail}")
    return EXIT_REPORTED


def cmd_play(args) -> int:
    doc = _load(args.cast)
    history = doc.history
    if args.no_delay:
        print(materialize(history, len(history.changes)).text)
        return EXIT_OK
    text = history.initial_text
    sys.stdout.write(_CLEAR + text + "\n")
    sys.stdout.flush()
    prev_t = 0
    for change in history.changes:
        _sleep(max(0, change.t_ms - prev_t) / 1000.0 / args.speed)
        prev_t = change.t_ms
        text = apply_change(text, change)
        sys.stdout.write(_CLEAR + text + "\n")
        sys.stdout.flush()
    return EXIT_OK


def cmd_select(args) -> int:
    doc = _load(args.cast)
    history = doc.history
    try:
        if args.time is not None:
            rng = select_by_time(history, TimeWindow(*args.time))
        else:
            version, start, end = args.text
            rng = select_by_text(history, TextSpan(version, start, end))
    except EmptySelectionError as exc:
        return _fail(str(exc), EXIT_REPORTED)
    except (SpanOutOfBoundsError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    report = selection_validity(history, rng)
    if report.ok:
        print(f"range {rng.start}:{rng.end} valid")
        return EXIT_OK
    seqs = ",".join(str(c.seq) for c in report.conflicts)
    print(f"range {rng.start}:{rng.end} ambiguous seq={seqs}")
    return EXIT_REPORTED


def cmd_validate(args) -> int:
    doc = _load(args.cast)
    history = doc.history
    start, end = args.range
    try:
        report = validate_rewrite(history, HistoryRange(start, end))
    except RangeOutOfBoundsError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if report.ok:
        print(f"range {start}:{end} ok")
        return EXIT_OK
    for c in report.conflicts:
        print(_describe_conflict(c))
    return EXIT_REPORTED


def _typed_replacement(history: EditHistory, rng: HistoryRange, literal: str) -> Replacement:
    """Synthesize a typed replacement: clear the editable region, then type.

    One deletion per editable span, then one insertion per character at the
    region's start, spaced KEY_DELAY_MS apart (substitution rescales them
    into the replaced range's time window anyway).
    """
    region = editable_region(history, rng)
    base = materialize(history, rng.start).text
    changes: list[TextChange] = []
    t = 0
    removed = 0
    for iv in region.intervals:
        if iv.is_point:
            continue
        changes.append(
            TextChange(
                seq=len(changes),
                t_ms=t,
                pos=iv.start - removed,
                deleted=base[iv.start : iv.end],
                inserted="",
            )
        )
        removed += iv.width
        t += KEY_DELAY_MS
    caret = region.intervals[0].start if region.intervals else 0
    for i, ch in enumerate(literal):
        changes.append(TextChange(seq=len(changes), t_ms=t, pos=caret + i, deleted="", inserted=ch))
        t += KEY_DELAY_MS
    return Replacement(tuple(changes))


def cmd_rewrite(args) -> int:
    doc = _load(args.cast)
    history = doc.history
    start, end = args.range
    rng = HistoryRange(start, end)
    try:
        if args.with_ is not None:
            fragment = castfile.parse_fragment(Path(args.with_).read_bytes())
            if fragment and fragment[0].t_ms > 0:
                base_t = fragment[0].t_ms
                fragment = tuple(replace(c, t_ms=c.t_ms - base_t) for c in fragment)
            repl = Replacement(fragment)
        else:
            repl = _typed_replacement(history, rng, args.type)
    except RangeOutOfBoundsError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except ValueError as exc:
        return _fail(f"bad replacement: {exc}", EXIT_REPORTED)

    try:
        result = substitute(history, rng, repl)
    except AmbiguousRangeError as exc:
        for c in exc.report.conflicts:
            print(_describe_conflict(c))
        return _fail(str(exc), EXIT_REPORTED)
    except ReplacementEscapesRegionError as exc:
        return _fail(str(exc), EXIT_REPORTED)
    except (DeletedTextMismatchError, OffsetOutOfBoundsError) as exc:
        return _fail(f"replacement does not apply: {exc}", EXIT_REPORTED)
    except RangeOutOfBoundsError as exc:
        return _fail(str(exc), EXIT_USAGE)

    out_doc = CastDocument(
        initial_text=doc.initial_text,
        meta=doc.meta,
        extras=doc.extras,
        events=tuple(result.history.changes),
    )
    castfile.save(args.out, out_doc)
    new_history = result.history
    print(f"range {start}:{end} replaced ({end - start} -> {len(repl.changes)} changes)")
    for old, new in result.mapping.pairs:
        sign = new.width - old.width
        print(f"area {old} -> {new} (delta {sign:+d})")
    final = materialize(new_history, len(new_history.changes))
    print(f"wrote {args.out} ({len(new_history.changes)} changes, final length {len(final.text)})")
    return EXIT_OK


def cmd_serve(args) -> int:
    doc = _load(args.cast)
    try:
        server = make_server(doc.history, host=args.host, port=args.port, ui_dir=args.ui_dir)
    except OSError as exc:
        return _fail(f"cannot bind {args.host}:{args.port}: {exc}", EXIT_IO)
    host, port = server.server_address[:2]
    print(f"serving {args.cast} on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textcast",
        description="Record, play, and non-linearly edit text-based screencasts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print cast statistics")
    p.add_argument("cast")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("check", help="replay-validate a cast and report violations")
    p.add_argument("cast")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("play", help="replay a cast in the terminal")
    p.add_argument("cast")
    p.add_argument("--speed", type=float, default=1.0, help="playback speed multiplier")
    p.add_argument("--no-delay", action="store_true", help="skip timing; print only the final text")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("select", help="select a history range by time window or text span")
    p.add_argument("cast")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--time", type=lambda s: _parse_pair(s, "--time"), metavar="T0:T1")
    g.add_argument("--text", type=_text_sel_arg, metavar="VERSION:START:END")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("validate", help="check whether a range can be rewritten")
    p.add_argument("cast")
    p.add_argument("--range", type=_range_arg, required=True, metavar="START:END")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("rewrite", help="substitute a range and write a new cast")
    p.add_argument("cast")
    p.add_argument("--range", type=_range_arg, required=True, metavar="START:END")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--with", dest="with_", metavar="FRAGMENT.tcast",
                   help="replacement events from a cast fragment")
    g.add_argument("--type", metavar="TEXT",
                   help="synthesize a typed replacement for the editable region")
    p.add_argument("--out", required=True, metavar="OUT.tcast")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("serve", help="serve the JSON API (and editor UI) for a cast")
    p.add_argument("cast")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", default=None, help="directory with the editor's static bundle")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CastParseError as exc:
        return _fail(str(exc), EXIT_IO)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
