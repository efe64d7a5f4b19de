"""Standard MIDI File (format 1) writer and the minimal reader the engine needs.

The writer is deliberately boring: no running-status compression, note-offs as
explicit 0x80 messages with velocity 0, note-off sorted before note-on at equal
ticks. Identical inputs give byte-identical files, which is what the golden
tests and the determinism contract rely on.

Same-pitch overlapping notes on one channel have no unambiguous SMF encoding;
the engine never emits them within a track.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .theory import PPQ, NoteEvent, NoteSequence, Pitch, RangeError

VLQ_MAX = (1 << 28) - 1

_META_TRACK_NAME = 0x03
_META_END_OF_TRACK = 0x2F
_META_TEMPO = 0x51


def encode_vlq(value: int) -> bytes:
    """MIDI variable-length quantity: 7 bits per byte, high bit marks continuation."""
    if not 0 <= value <= VLQ_MAX:
        raise RangeError(f"VLQ value {value} outside [0, 2^28)")
    out = bytearray([value & 0x7F])
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    out.reverse()
    return bytes(out)


def decode_vlq(data: bytes, offset: int = 0) -> tuple[int, int]:
    """Decode a VLQ at `offset`; returns (value, next offset)."""
    value = 0
    for i in range(offset, len(data)):
        byte = data[i]
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, i + 1
    raise ValueError("truncated variable-length quantity")


@dataclass(frozen=True)
class TempoEvent:
    tick: int
    bpm: float

    def __post_init__(self) -> None:
        if self.tick < 0:
            raise RangeError("tempo tick must be >= 0")
        if self.bpm <= 0:
            raise RangeError("bpm must be positive")


@dataclass(frozen=True)
class TrackPlan:
    """One instrument track: a name, a channel, a program, and its notes."""

    name: str
    channel: int
    program: int
    events: NoteSequence = field(default_factory=NoteSequence)

    def __post_init__(self) -> None:
        if not 0 <= self.channel <= 15:
            raise RangeError(f"channel {self.channel} outside [0, 15]")
        if not 0 <= self.program <= 127:
            raise RangeError(f"program {self.program} outside [0, 127]")


def bpm_to_mpqn(bpm: float) -> int:
    return int(round(60_000_000 / bpm))


def _track_chunk(messages: Iterable[tuple[int, bytes]]) -> bytes:
    """Serialize (absolute tick, message bytes) pairs into an MTrk chunk."""
    body = bytearray()
    last_tick = 0
    for tick, msg in messages:
        body += encode_vlq(tick - last_tick)
        body += msg
        last_tick = tick
    return b"MTrk" + struct.pack(">I", len(body)) + bytes(body)


def _meta(kind: int, payload: bytes) -> bytes:
    return bytes([0xFF, kind]) + encode_vlq(len(payload)) + payload


def _tempo_track(tempi: Sequence[TempoEvent]) -> bytes:
    ordered = sorted(tempi, key=lambda t: t.tick)
    for a, b in zip(ordered, ordered[1:]):
        if b.tick == a.tick:
            raise ValueError(f"two tempo events at tick {a.tick}")
    msgs = [
        (t.tick, _meta(_META_TEMPO, struct.pack(">I", bpm_to_mpqn(t.bpm))[1:]))
        for t in ordered
    ]
    end = msgs[-1][0] if msgs else 0
    msgs.append((end, _meta(_META_END_OF_TRACK, b"")))
    return _track_chunk(msgs)


def _note_track(plan: TrackPlan) -> bytes:
    msgs: list[tuple[int, int, bytes]] = []  # (tick, sort rank, bytes)
    if plan.name:
        msgs.append((0, 0, _meta(_META_TRACK_NAME, plan.name.encode("utf-8"))))
    msgs.append((0, 1, bytes([0xC0 | plan.channel, plan.program])))
    for ev in plan.events:
        on = bytes([0x90 | plan.channel, ev.pitch.midi_number, ev.velocity])
        off = bytes([0x80 | plan.channel, ev.pitch.midi_number, 0])
        msgs.append((ev.start, 3, on))
        msgs.append((ev.end, 2, off))
    msgs.sort(key=lambda m: (m[0], m[1], m[2]))
    end = msgs[-1][0] if msgs else 0
    flat = [(tick, data) for tick, _, data in msgs]
    flat.append((end, _meta(_META_END_OF_TRACK, b"")))
    return _track_chunk(flat)


def write_midi(
    tracks: Sequence[TrackPlan], tempi: Sequence[TempoEvent], ppq: int = PPQ
) -> bytes:
    """Render tracks plus a dedicated tempo track to SMF format 1 bytes."""
    if not tracks:
        raise ValueError("at least one track required")
    if ppq <= 0:
        raise RangeError("ppq must be positive")
    header = b"MThd" + struct.pack(">IHHH", 6, 1, 1 + len(tracks), ppq)
    chunks = [_tempo_track(tempi)]
    chunks += [_note_track(t) for t in tracks]
    return header + b"".join(chunks)


# ---------------------------------------------------------------------------
# Reader (corpus loading and internal round-trips)
# ---------------------------------------------------------------------------


class MidiFormatError(ValueError):
    """The bytes are not a readable SMF file."""


@dataclass(frozen=True)
class ParsedMidi:
    ppq: int
    notes: tuple[NoteEvent, ...]          # all tracks merged
    channels: tuple[int, ...]             # channel of each note, same order
    tempi: tuple[TempoEvent, ...]


def read_midi(data: bytes) -> ParsedMidi:
    """Extract note and tempo events from an SMF file.

    Handles running status and both note-off encodings (0x80, or 0x90 with
    velocity 0). Unmatched note-ons are dropped.
    """
    if len(data) < 14 or data[:4] != b"MThd":
        raise MidiFormatError("missing MThd header")
    hlen, fmt, ntrks, division = struct.unpack(">IHHH", data[4:14])
    if hlen != 6:
        raise MidiFormatError(f"unexpected MThd length {hlen}")
    if division & 0x8000:
        raise MidiFormatError("SMPTE time division is not supported")
    pos = 14
    notes: list[tuple[NoteEvent, int]] = []
    tempi: list[TempoEvent] = []
    for _ in range(ntrks):
        if data[pos : pos + 4] != b"MTrk":
            raise MidiFormatError(f"missing MTrk chunk at offset {pos}")
        (length,) = struct.unpack(">I", data[pos + 4 : pos + 8])
        body = data[pos + 8 : pos + 8 + length]
        if len(body) != length:
            raise MidiFormatError("truncated track chunk")
        pos += 8 + length
        notes_open: dict[tuple[int, int], list[tuple[int, int]]] = {}
        tick = 0
        i = 0
        status = 0
        while i < len(body):
            delta, i = decode_vlq(body, i)
            tick += delta
            byte = body[i]
            if byte >= 0x80:
                status = byte
                i += 1
            elif status == 0:
                raise MidiFormatError("running status with no prior status byte")
            kind = status & 0xF0
            channel = status & 0x0F
            if status == 0xFF:
                meta = body[i]
                length_, i = decode_vlq(body, i + 1)
                payload = body[i : i + length_]
                i += length_
                if meta == _META_TEMPO and length_ == 3:
                    mpqn = int.from_bytes(payload, "big")
                    tempi.append(TempoEvent(tick, 60_000_000 / mpqn))
                status = 0
            elif status in (0xF0, 0xF7):
                length_, i = decode_vlq(body, i)
                i += length_
                status = 0
            elif kind in (0x80, 0x90, 0xA0, 0xB0, 0xE0):
                d1, d2 = body[i], body[i + 1]
                i += 2
                if kind == 0x90 and d2 > 0:
                    notes_open.setdefault((channel, d1), []).append((tick, d2))
                elif kind == 0x80 or (kind == 0x90 and d2 == 0):
                    stack = notes_open.get((channel, d1))
                    if stack:
                        start, velocity = stack.pop(0)
                        if tick > start:
                            notes.append(
                                (NoteEvent(start, Pitch(d1), tick - start, velocity), channel)
                            )
            elif kind in (0xC0, 0xD0):
                i += 1
            else:
                raise MidiFormatError(f"unhandled status byte 0x{status:02x}")
    ordered = sorted(notes, key=lambda nc: (nc[0].start, nc[0].pitch.midi_number, nc[1]))
    return ParsedMidi(
        ppq=division,
        notes=tuple(n for n, _ in ordered),
        channels=tuple(c for _, c in ordered),
        tempi=tuple(sorted(tempi, key=lambda t: t.tick)),
    )
