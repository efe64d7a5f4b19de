import shutil
import time

import pytest
from fastapi.testclient import TestClient

from dynsong.cli import builtin_library
from dynsong.server import Library, ServerConfig, bar_seconds, make_app


@pytest.fixture()
def library(tmp_path):
    for name in ("example.song.json", "example.curves.json"):
        shutil.copy(builtin_library() / name, tmp_path / name)
    return tmp_path


@pytest.fixture()
def client(library):
    config = ServerConfig(library=library, pace_scale=0.001)
    app = make_app(config)
    with TestClient(app) as c:
        yield c


def create_session(client, seed=42):
    response = client.post("/sessions", json={"song_id": "example", "seed": seed})
    assert response.status_code == 200
    return response.json()["session_id"]


def collect_until(ws, predicate, limit=2000):
    """Receive messages until one satisfies predicate; returns all received."""
    got = []
    for _ in range(limit):
        msg = ws.receive_json()
        got.append(msg)
        if predicate(msg):
            return got
    raise AssertionError(f"predicate never satisfied in {limit} messages")


class TestHttpEndpoints:
    def test_song_listing(self, client):
        listing = client.get("/songs").json()
        assert listing == [{"id": "example", "title": "Latent Drift", "length_bars": 16}]

    def test_get_song_returns_song_and_curves(self, client):
        body = client.get("/songs/example").json()
        assert body["id"] == "example"
        assert body["song"]["schema_version"] == 1
        assert set(body["curves"]) == {"energy", "valence", "complexity"}

    def test_get_unknown_song_404(self, client):
        assert client.get("/songs/ghost").status_code == 404

    def test_create_session(self, client):
        response = client.post("/sessions", json={"song_id": "example"})
        assert response.status_code == 200
        body = response.json()
        assert body["state"] == "stopped"
        assert body["length_bars"] == 16

    def test_create_session_unknown_song(self, client):
        assert client.post("/sessions", json={"song_id": "nope"}).status_code == 404

    def test_create_session_invalid_song(self, client, library):
        (library / "broken.song.json").write_text(
            '{"schema_version": 1, "length_bars": 2, "time_sig": [4,4], '
            '"master_seed": 0, "title": "b", '
            '"nodes": [{"id": "m", "kind": "melody_improviser", "params": {}}], '
            '"edges": []}'
        )
        (library / "broken.curves.json").write_text(
            '{"energy": [[0,0.5]], "valence": [[0,0.5]], "complexity": [[0,0.5]]}'
        )
        response = client.post("/sessions", json={"song_id": "broken"})
        assert response.status_code == 422
        codes = {d["code"] for d in response.json()["diagnostics"]}
        assert "missing_required_input" in codes

    def test_blocks_endpoint_has_colours_and_kinds(self, client):
        blocks = client.get("/blocks").json()
        kinds = [b["kind"] for b in blocks]
        assert kinds == sorted(kinds)
        assert set(kinds) == {
            "constant_progression",
            "countermelody",
            "curve_source",
            "latent_melody",
            "melody_improviser",
            "midi_sink",
            "progression_generator",
            "rhythm_generator",
            "tempo_map",
        }
        colours = {
            port["type"]: port["colour"]
            for b in blocks
            for port in b["inputs"] + b["outputs"]
        }
        assert len(set(colours.values())) == 4


class TestStream:
    def test_play_streams_bars_and_stops(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "play"})
            msgs = collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "stopped"
            )
        assert msgs[0] == {"type": "transport_changed", "state": "playing"}
        bars = [m["bar_index"] for m in msgs if m["type"] == "bar_boundary"]
        assert bars == list(range(16))
        assert any(m["type"] == "note_on" for m in msgs)

    def test_curve_edit_acks_with_effective_bar(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json(
                {
                    "type": "curve_edit",
                    "curve": "valence",
                    "op": {"kind": "insert", "point": [0.513, 0.95]},
                }
            )
            msg = ws.receive_json()
        assert msg == {"type": "ack", "effective_bar": 0}

    def test_invalid_edit_returns_error(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json(
                {"type": "curve_edit", "curve": "valence", "op": {"kind": "remove", "index": 40}}
            )
            msg = ws.receive_json()
        assert msg["type"] == "error"
        assert msg["code"] == "curve_edit_failed"

    def test_edit_mid_playback_acks_future_bar(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "play"})
            collect_until(
                ws, lambda m: m["type"] == "bar_boundary" and m["bar_index"] >= 3
            )
            ws.send_json(
                {
                    "type": "curve_edit",
                    "curve": "valence",
                    "op": {"kind": "insert", "point": [0.717, 1.0]},
                }
            )
            msgs = collect_until(ws, lambda m: m["type"] == "ack")
            ack = msgs[-1]
            assert ack["effective_bar"] >= 4
            # Drain to the end so the close is clean.
            collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "stopped"
            )

    def test_pause_and_resume(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "play"})
            collect_until(ws, lambda m: m["type"] == "bar_boundary")
            ws.send_json({"type": "pause"})
            collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "paused"
            )
            ws.send_json({"type": "play"})
            msgs = collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "stopped"
            )
        bars = [m["bar_index"] for m in msgs if m["type"] == "bar_boundary"]
        assert bars == sorted(set(bars))

    def test_seek_command(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "seek", "bar": 14})
            ws.receive_json()
            ws.send_json({"type": "play"})
            msgs = collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "stopped"
            )
        bars = [m["bar_index"] for m in msgs if m["type"] == "bar_boundary"]
        assert bars == [14, 15]

    def test_save_persists_edits(self, client, library):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json(
                {
                    "type": "curve_edit",
                    "curve": "energy",
                    "op": {"kind": "insert", "point": [0.111, 0.99]},
                }
            )
            ws.receive_json()
            ws.send_json({"type": "save"})
            msg = ws.receive_json()
        assert msg["type"] == "ack"
        saved = (library / "example.curves.json").read_text()
        assert "0.111" in saved

    def test_unknown_session_gets_error(self, client):
        with client.websocket_connect("/sessions/doesnotexist/stream") as ws:
            msg = ws.receive_json()
        assert msg["type"] == "error"
        assert msg["code"] == "session_not_found"

    def test_unknown_command_gets_error(self, client):
        sid = create_session(client)
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "wobble"})
            msg = ws.receive_json()
        assert msg["type"] == "error"
        assert msg["code"] == "unknown_command"


class TestPacing:
    def test_bar_seconds(self):
        assert bar_seconds(120, 4, 4) == pytest.approx(2.0)
        assert bar_seconds(60, 3, 4) == pytest.approx(3.0)
        assert bar_seconds(120, 6, 8) == pytest.approx(1.5)

    def test_pace_scale_compresses_time(self, client):
        sid = create_session(client)
        start = time.monotonic()
        with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
            ws.send_json({"type": "play"})
            collect_until(
                ws, lambda m: m["type"] == "transport_changed" and m["state"] == "stopped"
            )
        # 16 bars at ~2s each would be ~32s in real time; pace 0.001 makes
        # the whole song a fraction of a second plus overhead.
        assert time.monotonic() - start < 10.0


class TestConfig:
    def test_config_file_round_trip(self, tmp_path, library):
        path = tmp_path / "config.json"
        path.write_text(
            '{"library": "%s", "port": 9999, "pace_scale": 0.5, "default_seed": 7}'
            % library
        )
        config = ServerConfig.from_file(path)
        assert config.port == 9999
        assert config.pace_scale == 0.5
        assert config.default_seed == 7
        assert config.library == library

    def test_library_listing_helper(self, library):
        lib = Library(library)
        assert lib.song_ids() == ["example"]
        assert lib.song_path("example").exists()


class TestUiMount:
    def test_ui_served_when_configured(self, library, tmp_path):
        ui = tmp_path / "ui"
        (ui / "dist").mkdir(parents=True)
        (ui / "index.html").write_text("<!doctype html><title>dynsong</title>")
        (ui / "dist" / "app.js").write_text("export {};")
        config = ServerConfig(library=library, pace_scale=0.001, ui_dir=ui)
        with TestClient(make_app(config)) as c:
            assert c.get("/ui/").status_code == 200
            assert "dynsong" in c.get("/ui/index.html").text
            assert c.get("/ui/dist/app.js").status_code == 200
            # API routes are untouched by the mount.
            assert c.get("/songs").status_code == 200

    def test_no_mount_without_config(self, client):
        assert client.get("/ui/index.html").status_code == 404
