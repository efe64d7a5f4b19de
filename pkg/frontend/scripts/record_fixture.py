#!/usr/bin/env python3
"""Record real server traffic into the steering-loop test fixture.

Runs the engine's server, plays the example session twice with a fixed seed
(once untouched, once with a scripted valence raise mid-playback), and dumps
every message verbatim. The frontend tests replay this traffic through a
scripted socket so they exercise the real wire schema without a server.
"""

import asyncio
import json
from pathlib import Path

import httpx
import uvicorn
import websockets

from dynsong.cli import builtin_library
from dynsong.server import ServerConfig, make_app

PORT = 8691
SEED = 20260811
EDIT_AFTER_BAR = 3
EDIT_OP = {"kind": "move", "index": 1, "point": [0.35, 0.95]}
OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "steering_session.json"


async def play_session(client, edit: bool):
    resp = await client.post("/sessions", json={"song_id": "example", "seed": SEED})
    sid = resp.json()["session_id"]
    messages = []
    async with websockets.connect(f"ws://127.0.0.1:{PORT}/sessions/{sid}/stream") as ws:
        await ws.send(json.dumps({"type": "play"}))
        sent_edit = False
        while True:
            msg = json.loads(await asyncio.wait_for(ws.recv(), 15))
            messages.append(msg)
            if (
                edit
                and not sent_edit
                and msg.get("type") == "bar_boundary"
                and msg["bar_index"] == EDIT_AFTER_BAR
            ):
                await ws.send(
                    json.dumps({"type": "curve_edit", "curve": "valence", "op": EDIT_OP})
                )
                sent_edit = True
            if msg.get("type") == "transport_changed" and msg["state"] == "stopped":
                break
    return messages


async def main():
    config = ServerConfig(library=builtin_library(), port=PORT, pace_scale=0.002)
    server = uvicorn.Server(
        uvicorn.Config(make_app(config), host="127.0.0.1", port=PORT, log_level="error")
    )
    task = asyncio.create_task(server.serve())
    await asyncio.sleep(1.0)
    async with httpx.AsyncClient(base_url=f"http://127.0.0.1:{PORT}") as client:
        blocks = (await client.get("/blocks")).json()
        song = (await client.get("/songs/example")).json()
        baseline = await play_session(client, edit=False)
        edited = await play_session(client, edit=True)
    server.should_exit = True
    await task

    ack = next(m for m in edited if m["type"] == "ack")
    fixture = {
        "seed": SEED,
        "edit_after_bar": EDIT_AFTER_BAR,
        "edit_op": EDIT_OP,
        "effective_bar": ack["effective_bar"],
        "blocks": blocks,
        "song": song,
        "baseline": baseline,
        "edited": edited,
    }
    OUT.write_text(json.dumps(fixture, indent=1) + "\n")
    print(f"wrote {OUT} ({len(baseline)} baseline msgs, {len(edited)} edited msgs, "
          f"effective_bar={ack['effective_bar']})")


if __name__ == "__main__":
    asyncio.run(main())
