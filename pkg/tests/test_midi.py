import random

import pytest
from hypothesis import given, settings, strategies as st

from dynsong.midi import (
    MidiFormatError,
    TempoEvent,
    TrackPlan,
    bpm_to_mpqn,
    decode_vlq,
    encode_vlq,
    read_midi,
    write_midi,
)
from dynsong.theory import NoteEvent, NoteSequence, Pitch, RangeError

from smf_oracle import decode_vlq_bytes, note_multiset, parse_smf


class TestVlq:
    def test_zero(self):
        assert encode_vlq(0) == bytes([0x00])

    def test_128(self):
        assert encode_vlq(128) == bytes([0x81, 0x00])

    def test_maximum(self):
        assert encode_vlq(0x0FFFFFFF) == bytes([0xFF, 0xFF, 0xFF, 0x7F])

    def test_range_enforced(self):
        with pytest.raises(RangeError):
            encode_vlq(1 << 28)
        with pytest.raises(RangeError):
            encode_vlq(-1)

    def test_known_values_from_format_spec(self):
        assert encode_vlq(0x40) == bytes([0x40])
        assert encode_vlq(0x7F) == bytes([0x7F])
        assert encode_vlq(0x2000) == bytes([0xC0, 0x00])
        assert encode_vlq(0x1FFFFF) == bytes([0xFF, 0xFF, 0x7F])

    @given(st.integers(0, (1 << 28) - 1))
    def test_oracle_decode_identity(self, value):
        assert decode_vlq_bytes(encode_vlq(value)) == value

    @given(st.integers(0, (1 << 28) - 1))
    def test_internal_decode_identity(self, value):
        decoded, consumed = decode_vlq(encode_vlq(value))
        assert decoded == value
        assert consumed == len(encode_vlq(value))


def make_events(rng: random.Random, count: int) -> NoteSequence:
    """Random note material, never overlapping itself on one pitch (the one
    shape SMF cannot encode unambiguously)."""
    events = []
    busy_until: dict[int, int] = {}
    cursor = 0
    for _ in range(count):
        cursor += rng.randrange(0, 960)
        pitch = rng.randrange(24, 96)
        start = max(cursor, busy_until.get(pitch, 0))
        duration = rng.randrange(1, 960)
        busy_until[pitch] = start + duration
        events.append(
            NoteEvent(
                start=start,
                pitch=Pitch(pitch),
                duration=duration,
                velocity=rng.randrange(1, 128),
            )
        )
    return NoteSequence(tuple(events))


class TestWriteMidi:
    def test_structural_minimum(self):
        data = write_midi([TrackPlan("empty", 0, 0)], [])
        assert data[:4] == b"MThd"
        parsed = parse_smf(data)
        assert parsed.fmt == 1
        assert parsed.ntracks == 2
        assert parsed.division == 480
        assert parsed.notes == ()

    def test_single_note_round_trip(self):
        plan = TrackPlan(
            "one", 0, 0, NoteSequence((NoteEvent(0, Pitch(60), 480, 100),))
        )
        parsed = parse_smf(write_midi([plan], [TempoEvent(0, 120)]))
        assert note_multiset(parsed) == [(0, 60, 0, 480, 100)]

    def test_byte_identical_on_repeat(self):
        rng = random.Random(5)
        plan = TrackPlan("t", 3, 10, make_events(rng, 30))
        tempi = [TempoEvent(0, 120), TempoEvent(1920, 90)]
        assert write_midi([plan], tempi) == write_midi([plan], tempi)

    def test_tempo_track_content(self):
        parsed = parse_smf(
            write_midi([TrackPlan("t", 0, 0)], [TempoEvent(0, 120), TempoEvent(960, 60)])
        )
        assert parsed.tempos == ((0, 500000), (960, 1000000))

    def test_note_off_before_note_on_at_equal_tick(self):
        # Back-to-back equal pitches: the off of the first must precede the
        # on of the second so the second note is not cut off.
        events = NoteSequence(
            (NoteEvent(0, Pitch(60), 480, 80), NoteEvent(480, Pitch(60), 480, 80))
        )
        parsed = parse_smf(write_midi([TrackPlan("t", 0, 0, events)], []))
        assert note_multiset(parsed) == [(0, 60, 0, 480, 80), (0, 60, 480, 480, 80)]

    def test_channel_and_multiple_tracks(self):
        rng = random.Random(6)
        plans = [
            TrackPlan("a", 0, 5, make_events(rng, 10)),
            TrackPlan("b", 9, 30, make_events(rng, 10)),
        ]
        parsed = parse_smf(write_midi(plans, [TempoEvent(0, 100)]))
        channels = {n.channel for n in parsed.notes}
        assert channels == {0, 9}

    def test_empty_track_list_rejected(self):
        with pytest.raises(ValueError):
            write_midi([], [])

    @given(st.integers(0, 2**32))
    @settings(max_examples=30)
    def test_random_multiset_recovery(self, seed):
        rng = random.Random(seed)
        plans = [
            TrackPlan(f"t{i}", i, rng.randrange(128), make_events(rng, rng.randrange(1, 25)))
            for i in range(rng.randrange(1, 4))
        ]
        tempi = [TempoEvent(0, rng.randrange(40, 240))]
        parsed = parse_smf(write_midi(plans, tempi))
        expected = sorted(
            (p.channel, e.pitch.midi_number, e.start, e.duration, e.velocity)
            for p in plans
            for e in p.events
        )
        assert note_multiset(parsed) == expected

    def test_delta_times_non_negative_by_oracle(self):
        # parse_smf asserts delta >= 0 internally; a big scrambled input
        # exercises the sort.
        rng = random.Random(11)
        plan = TrackPlan("big", 0, 0, make_events(rng, 200))
        parse_smf(write_midi([plan], [TempoEvent(0, 100)]))


class TestReadMidi:
    def test_round_trips_own_writer(self):
        rng = random.Random(7)
        plan = TrackPlan("t", 2, 12, make_events(rng, 40))
        parsed = read_midi(write_midi([plan], [TempoEvent(0, 110)]))
        assert parsed.ppq == 480
        got = sorted(
            (c, n.pitch.midi_number, n.start, n.duration, n.velocity)
            for n, c in zip(parsed.notes, parsed.channels)
        )
        expected = sorted(
            (2, e.pitch.midi_number, e.start, e.duration, e.velocity)
            for e in plan.events
        )
        assert got == expected

    def test_rejects_garbage(self):
        with pytest.raises(MidiFormatError):
            read_midi(b"not a midi file")

    def test_reads_running_status(self):
        # Hand-built track using running status: two notes under one status byte.
        import struct

        track = bytes(
            [
                0x00, 0x90, 60, 100,   # on C4
                0x60, 60, 0,           # running status: off via velocity 0
                0x00, 62, 100,         # running status: on D4
                0x60, 62, 0,           # off
                0x00, 0xFF, 0x2F, 0x00,
            ]
        )
        data = (
            b"MThd" + struct.pack(">IHHH", 6, 0, 1, 480)
            + b"MTrk" + struct.pack(">I", len(track)) + track
        )
        parsed = read_midi(data)
        assert [(n.pitch.midi_number, n.start, n.duration) for n in parsed.notes] == [
            (60, 0, 96),
            (62, 96, 96),
        ]


class TestTempoMath:
    def test_bpm_to_mpqn(self):
        assert bpm_to_mpqn(120) == 500000
        assert bpm_to_mpqn(60) == 1000000

    def test_tempo_event_validation(self):
        with pytest.raises(RangeError):
            TempoEvent(-1, 100)
        with pytest.raises(RangeError):
            TempoEvent(0, 0)
