"""HTTP + WebSocket front of the transport service.

Endpoints:
    GET  /songs                library listing
    GET  /songs/{id}           song document + curve document
    POST /sessions             create a session ({"song_id": ..., "seed": ...})
    GET  /blocks               registry descriptors (ports, colours, params)
    WS   /sessions/{id}/stream the live event/command channel

Wire messages are JSON objects with a "type" field. Server to client:
note_on, note_off, bar_boundary, transport_changed, ack, error. Client to
server: play, pause, stop, seek, curve_edit, save.

A library is a directory of paired files: <id>.song.json + <id>.curves.json.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .blocks import default_registry
from .curves import CurveError, CurveFileError, curveset_to_dict, edit_from_dict, load_curves
from .graph import BlockRegistry, SongFormatError, load_song, song_to_dict
from .transport import (
    SessionManager,
    SessionNotFoundError,
    TransportError,
    TransportState,
    ValidationError,
    event_to_dict,
)

SONG_SUFFIX = ".song.json"
CURVES_SUFFIX = ".curves.json"


@dataclass
class ServerConfig:
    """Runtime configuration; file values are overridden by CLI flags."""

    library: Path
    host: str = "127.0.0.1"
    port: int = 8643
    default_seed: Optional[int] = None
    # Wall-clock seconds per bar are multiplied by this; < 1 plays faster
    # than real time (used by tests and demos).
    pace_scale: float = 1.0
    # Directory of the built browser client; served at /ui when present.
    ui_dir: Optional[Path] = None

    @staticmethod
    def from_file(path: Union[str, Path]) -> "ServerConfig":
        data = json.loads(Path(path).read_text())
        return ServerConfig(
            library=Path(data["library"]),
            host=data.get("host", "127.0.0.1"),
            port=int(data.get("port", 8643)),
            default_seed=data.get("default_seed"),
            pace_scale=float(data.get("pace_scale", 1.0)),
            ui_dir=Path(data["ui_dir"]) if data.get("ui_dir") else None,
        )


@dataclass
class Library:
    root: Path

    def song_ids(self) -> list[str]:
        return sorted(
            p.name[: -len(SONG_SUFFIX)]
            for p in self.root.glob(f"*{SONG_SUFFIX}")
            if p.is_file()
        )

    def song_path(self, song_id: str) -> Path:
        return self.root / f"{song_id}{SONG_SUFFIX}"

    def curves_path(self, song_id: str) -> Path:
        return self.root / f"{song_id}{CURVES_SUFFIX}"


def bar_seconds(bpm: float, numerator: int, denominator: int) -> float:
    return numerator * (60.0 / bpm) * (4.0 / denominator)


def make_app(config: ServerConfig, registry: Optional[BlockRegistry] = None) -> FastAPI:
    registry = registry if registry is not None else default_registry()
    library = Library(config.library)
    manager = SessionManager(registry)
    app = FastAPI(title="dynsong", version="0.1.0")
    app.state.manager = manager
    app.state.config = config

    @app.get("/songs")
    def list_songs():
        out = []
        for song_id in library.song_ids():
            try:
                graph = load_song(library.song_path(song_id))
            except SongFormatError:
                continue
            out.append(
                {"id": song_id, "title": graph.title, "length_bars": graph.length_bars}
            )
        return out

    @app.get("/songs/{song_id}")
    def get_song(song_id: str):
        song_path = library.song_path(song_id)
        curves_path = library.curves_path(song_id)
        if not song_path.is_file():
            return JSONResponse({"error": f"no song {song_id!r}"}, status_code=404)
        try:
            graph = load_song(song_path)
            curves = load_curves(curves_path)
        except (SongFormatError, CurveFileError) as exc:
            return JSONResponse(
                {"error": str(exc), "details": getattr(exc, "errors", [])},
                status_code=422,
            )
        return {
            "id": song_id,
            "song": song_to_dict(graph),
            "curves": curveset_to_dict(curves),
        }

    @app.post("/sessions")
    async def create_session(body: dict):
        song_id = body.get("song_id")
        if not isinstance(song_id, str) or song_id not in library.song_ids():
            return JSONResponse({"error": f"no song {song_id!r}"}, status_code=404)
        seed = body.get("seed", config.default_seed)
        try:
            session_id = manager.create_session(
                library.song_path(song_id), library.curves_path(song_id), seed=seed
            )
        except ValidationError as exc:
            return JSONResponse(
                {
                    "error": "song failed validation",
                    "diagnostics": [d.to_dict() for d in exc.diagnostics],
                },
                status_code=422,
            )
        except (SongFormatError, CurveFileError) as exc:
            return JSONResponse(
                {"error": str(exc), "details": getattr(exc, "errors", [])},
                status_code=422,
            )
        session = manager.get(session_id)
        return {
            "session_id": session_id,
            "state": session.transport.value,
            "length_bars": session.graph.length_bars,
            "time_sig": [session.graph.time_sig.numerator, session.graph.time_sig.denominator],
            "title": session.graph.title,
        }

    @app.get("/blocks")
    def list_blocks():
        return [d.to_dict() for d in registry.descriptors()]

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        await websocket.accept()
        try:
            manager.get(session_id)
        except SessionNotFoundError as exc:
            await websocket.send_json({"type": "error", "code": "session_not_found", "message": str(exc)})
            await websocket.close()
            return
        await _session_loop(websocket, manager, session_id, config)

    if config.ui_dir is not None and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


async def _send_error(ws: WebSocket, code: str, message: str) -> None:
    await ws.send_json({"type": "error", "code": code, "message": message})


async def _handle_command(
    ws: WebSocket, manager: SessionManager, session_id: str, msg: dict
) -> bool:
    """Apply one client command; returns True if pacing should restart now."""
    kind = msg.get("type")
    try:
        if kind in ("play", "pause", "stop"):
            changed = manager.transport_control(session_id, kind)
            await ws.send_json(event_to_dict(changed))
            return kind == "play"
        if kind == "seek":
            changed = manager.transport_control(session_id, "seek", bar=int(msg["bar"]))
            await ws.send_json(event_to_dict(changed))
            return False
        if kind == "curve_edit":
            op = edit_from_dict(msg.get("op", {}))
            ack = manager.apply_curve_edit(session_id, str(msg.get("curve")), op)
            await ws.send_json({"type": "ack", "effective_bar": ack.effective_bar})
            return False
        if kind == "save":
            path = manager.save_curves(session_id)
            await ws.send_json({"type": "ack", "saved": str(path)})
            return False
        await _send_error(ws, "unknown_command", f"unknown message type {kind!r}")
    except (CurveError, IndexError) as exc:
        await _send_error(ws, "curve_edit_failed", str(exc))
    except TransportError as exc:
        await _send_error(ws, "transport_error", str(exc))
    except (KeyError, TypeError, ValueError) as exc:
        await _send_error(ws, "bad_message", str(exc))
    return False


async def _session_loop(
    ws: WebSocket, manager: SessionManager, session_id: str, config: ServerConfig
) -> None:
    """Single writer for one session: commands and pacing on one task.

    A reader task feeds client messages into a queue; this loop alternates
    between handling them and advancing the playhead on the bar clock.
    """
    queue: asyncio.Queue = asyncio.Queue()
    closed = object()

    async def reader():
        try:
            while True:
                data = await ws.receive_text()
                try:
                    await queue.put(json.loads(data))
                except json.JSONDecodeError:
                    await queue.put({"type": "__bad_json__"})
        except WebSocketDisconnect:
            await queue.put(closed)
        except Exception:
            await queue.put(closed)

    reader_task = asyncio.create_task(reader())
    loop = asyncio.get_running_loop()
    next_due: Optional[float] = None
    try:
        while True:
            session = manager.get(session_id)
            playing = session.transport is TransportState.PLAYING
            if not playing:
                next_due = None
            timeout = None
            if playing:
                if next_due is None:
                    next_due = loop.time()
                timeout = max(0.0, next_due - loop.time())
            try:
                msg = await asyncio.wait_for(queue.get(), timeout)
            except asyncio.TimeoutError:
                msg = None
            if msg is closed:
                break
            if msg is not None:
                if msg.get("type") == "__bad_json__":
                    await _send_error(ws, "bad_message", "message is not valid JSON")
                    continue
                restart = await _handle_command(ws, manager, session_id, msg)
                if restart:
                    next_due = loop.time()
                continue
            # Bar clock fired: advance and send everything the bar produced.
            try:
                events = manager.advance(session_id)
            except Exception as exc:
                manager.transport_control(session_id, "stop")
                await _send_error(ws, "evaluation_failed", str(exc))
                continue
            bpm = next(e.bpm for e in events if hasattr(e, "bpm"))
            for event in events:
                await ws.send_json(event_to_dict(event))
            session = manager.get(session_id)
            if session.transport is TransportState.PLAYING:
                sig = session.graph.time_sig
                next_due = loop.time() + (
                    bar_seconds(bpm, sig.numerator, sig.denominator) * config.pace_scale
                )
            else:
                next_due = None
    except SessionNotFoundError:
        pass
    finally:
        reader_task.cancel()


def run_server(config: ServerConfig) -> None:  # pragma: no cover - wraps uvicorn
    import uvicorn

    uvicorn.run(make_app(config), host=config.host, port=config.port, log_level="info")
