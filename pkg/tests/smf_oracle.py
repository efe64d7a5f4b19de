"""Independent Standard MIDI File parser used as a test oracle.

Written straight off the SMF byte layout and kept free of any imports from
the package under test, so round-trip tests check the writer against the
format, not against itself.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class OracleNote:
    track: int
    channel: int
    pitch: int
    start: int
    duration: int
    velocity: int


@dataclass(frozen=True)
class OracleFile:
    fmt: int
    division: int
    ntracks: int
    notes: tuple[OracleNote, ...]
    tempos: tuple[tuple[int, int], ...]  # (tick, microseconds per quarter)


def read_vlq(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    while True:
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if byte < 0x80:
            return value, pos


def parse_smf(data: bytes) -> OracleFile:
    assert data[0:4] == b"MThd", "not an SMF file"
    header_len = int.from_bytes(data[4:8], "big")
    assert header_len == 6
    fmt = int.from_bytes(data[8:10], "big")
    ntracks = int.from_bytes(data[10:12], "big")
    division = int.from_bytes(data[12:14], "big")
    assert not division & 0x8000, "SMPTE division not expected"

    pos = 14
    notes: list[OracleNote] = []
    tempos: list[tuple[int, int]] = []
    for track_index in range(ntracks):
        assert data[pos : pos + 4] == b"MTrk", f"track {track_index} chunk missing"
        chunk_len = int.from_bytes(data[pos + 4 : pos + 8], "big")
        end = pos + 8 + chunk_len
        cursor = pos + 8
        tick = 0
        running = None
        pending: dict[tuple[int, int], list[tuple[int, int]]] = {}
        saw_eot = False
        while cursor < end:
            delta, cursor = read_vlq(data, cursor)
            assert delta >= 0
            tick += delta
            first = data[cursor]
            if first == 0xFF:
                meta_type = data[cursor + 1]
                length, cursor = read_vlq(data, cursor + 2)
                payload = data[cursor : cursor + length]
                cursor += length
                if meta_type == 0x51:
                    tempos.append((tick, int.from_bytes(payload, "big")))
                if meta_type == 0x2F:
                    saw_eot = True
                    assert cursor == end, "data after end-of-track"
                running = None
                continue
            if first in (0xF0, 0xF7):
                length, cursor = read_vlq(data, cursor + 1)
                cursor += length
                running = None
                continue
            if first >= 0x80:
                status = first
                cursor += 1
                running = status
            else:
                assert running is not None, "running status without prior status"
                status = running
            event = status & 0xF0
            channel = status & 0x0F
            if event in (0xC0, 0xD0):
                cursor += 1
                continue
            d1 = data[cursor]
            d2 = data[cursor + 1]
            cursor += 2
            if event == 0x90 and d2 > 0:
                pending.setdefault((channel, d1), []).append((tick, d2))
            elif event == 0x80 or (event == 0x90 and d2 == 0):
                starts = pending.get((channel, d1))
                assert starts, f"note-off with no open note (ch{channel} p{d1})"
                start, velocity = starts.pop(0)
                notes.append(
                    OracleNote(track_index, channel, d1, start, tick - start, velocity)
                )
        assert saw_eot, f"track {track_index} missing end-of-track"
        assert not any(v for v in pending.values()), "dangling note-on"
        pos = end
    assert pos == len(data), "trailing bytes after last track"
    return OracleFile(fmt, division, ntracks, tuple(notes), tuple(tempos))


def note_multiset(parsed: OracleFile) -> list[tuple[int, int, int, int, int]]:
    """(channel, pitch, start, duration, velocity) multiset, sorted."""
    return sorted(
        (n.channel, n.pitch, n.start, n.duration, n.velocity) for n in parsed.notes
    )


def decode_vlq_bytes(encoded: bytes) -> int:
    """Decode a whole VLQ byte string (oracle for encode_vlq)."""
    value, pos = read_vlq(encoded, 0)
    assert pos == len(encoded), "extra bytes after VLQ"
    return value
