from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request

import pytest

from textcast import materialize, replay_validate
from textcast.castfile import changes_from_rows
from textcast.history import EditHistory
from textcast.service import make_server


@pytest.fixture
def server(history_h):
    srv = make_server(history_h)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()
    thread.join(timeout=5)


def url(srv, path):
    host, port = srv.server_address[:2]
    return f"http://{host}:{port}{path}"


def get(srv, path):
    try:
        with urllib.request.urlopen(url(srv, path)) as resp:
            return resp.status, json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode("utf-8"))


def post(srv, path, payload):
    data = json.dumps(payload).encode("utf-8")
    req = urllib.request.Request(
        url(srv, path), data=data, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode("utf-8"))
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode("utf-8"))


class TestReads:
    def test_cast_payload(self, server):
        status, body = get(server, "/api/cast")
        assert status == 200
        assert body["rev_token"] == 0
        assert len(body["changes"]) == 3
        assert body["header"]["textcast"] == 1

    def test_snapshot(self, server):
        assert get(server, "/api/snapshot?version=3") == (
            200,
            {"version": 3, "text": "The brown fox jumps"},
        )
        assert get(server, "/api/snapshot?version=0")[1]["text"] == ""

    def test_snapshot_out_of_range(self, server):
        status, body = get(server, "/api/snapshot?version=9")
        assert status == 400
        assert body["code"] == "VersionOutOfRange"

    def test_unknown_route_404(self, server):
        status, body = get(server, "/api/nope")
        assert status == 404

    def test_placeholder_page_without_bundle(self, server):
        with urllib.request.urlopen(url(server, "/")) as resp:
            assert resp.status == 200
            assert b"textcast" in resp.read()


class TestSelectEndpoints:
    def test_select_time(self, server):
        assert post(server, "/api/select/time", {"t0": 900, "t1": 1100}) == (
            200,
            {"start": 1, "end": 2},
        )

    def test_select_text(self, server):
        assert post(server, "/api/select/text", {"version": 2, "start": 19, "end": 25}) == (
            200,
            {"start": 1, "end": 2},
        )

    def test_empty_selection_404(self, server):
        status, body = post(server, "/api/select/time", {"t0": 9000, "t1": 9999})
        assert status == 404
        assert body["code"] == "EmptySelection"

    def test_bad_body_400(self, server):
        status, body = post(server, "/api/select/time", {"t0": "x", "t1": 1})
        assert status == 400


class TestValidateEndpoint:
    def test_ok_with_editable(self, server):
        status, body = post(server, "/api/validate", {"start": 1, "end": 2})
        assert status == 200
        assert body["ok"] is True
        assert body["conflicts"] == []
        assert body["editable"] == [{"start": 19, "end": 19}]

    def test_conflicts_reported(self, ambiguous_history):
        srv = make_server(ambiguous_history)
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            status, body = post(srv, "/api/validate", {"start": 1, "end": 2})
            assert status == 200
            assert body["ok"] is False
            assert [c["seq"] for c in body["conflicts"]] == [2]
            assert body["conflicts"][0]["footprint"]["kind"] == "insertion-caret"
        finally:
            srv.shutdown()
            srv.server_close()
            thread.join(timeout=5)

    def test_empty_range_400(self, server):
        status, body = post(server, "/api/validate", {"start": 2, "end": 2})
        assert status == 400
        assert body["code"] == "EmptyRange"


class TestRewriteEndpoint:
    def test_successful_rewrite_bumps_token(self, server):
        payload = {
            "start": 1,
            "end": 2,
            "replacement": [[0, 19, "", " leaps"]],
            "rev_token": 0,
        }
        status, body = post(server, "/api/rewrite", payload)
        assert status == 200
        assert body["rev_token"] == 1
        assert body["summary"]["final_length"] == len("The brown fox leaps")
        status, body = get(server, "/api/snapshot?version=3")
        assert body["text"] == "The brown fox leaps"

    def test_stale_token_409(self, server):
        payload = {"start": 1, "end": 2, "replacement": [], "rev_token": 0}
        assert post(server, "/api/rewrite", payload)[0] == 200
        status, body = post(server, "/api/rewrite", payload)
        assert status == 409
        assert body["code"] == "StaleToken"
        assert body["details"]["rev_token"] == 1

    def test_ambiguous_range_422(self, ambiguous_history):
        srv = make_server(ambiguous_history)
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            status, body = post(
                srv, "/api/rewrite", {"start": 1, "end": 2, "replacement": [], "rev_token": 0}
            )
            assert status == 422
            assert body["code"] == "AmbiguousRange"
            assert [c["seq"] for c in body["details"]["conflicts"]] == [2]
        finally:
            srv.shutdown()
            srv.server_close()
            thread.join(timeout=5)

    def test_escaping_replacement_422(self, server):
        status, body = post(
            server,
            "/api/rewrite",
            {"start": 1, "end": 2, "replacement": [[0, 0, "", "X"]], "rev_token": 0},
        )
        assert status == 422
        assert body["code"] == "ReplacementEscapesRegion"


class TestConcurrency:
    def test_sixteen_concurrent_rewrites_one_winner(self, server):
        payload = {
            "start": 1,
            "end": 2,
            "replacement": [[0, 19, "", " leaps"]],
            "rev_token": 0,
        }
        results = []
        reads = []
        stop = threading.Event()

        def reader():
            while not stop.is_set():
                status, body = get(server, "/api/cast")
                assert status == 200
                changes = changes_from_rows(body["changes"])
                history = EditHistory(body["header"]["initial"], changes)
                assert replay_validate(history) == []
                reads.append(
                    (body["rev_token"], materialize(history, len(changes)).text)
                )

        def writer():
            results.append(post(server, "/api/rewrite", payload))

        readers = [threading.Thread(target=reader) for _ in range(4)]
        for t in readers:
            t.start()
        writers = [threading.Thread(target=writer) for _ in range(16)]
        for t in writers:
            t.start()
        for t in writers:
            t.join()
        stop.set()
        for t in readers:
            t.join()

        statuses = sorted(status for status, _ in results)
        assert statuses == [200] + [409] * 15
        # every snapshot observed during the storm was a consistent state
        valid = {
            (0, "The brown fox jumps"),
            (1, "The brown fox leaps"),
        }
        assert set(reads) <= valid
        assert len(reads) > 0
