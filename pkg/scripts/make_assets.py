#!/usr/bin/env python3
"""Regenerate the bundled assets: corner motifs and the example song/curves.

The four corner motifs span one 4/4 bar each and sit at the corners of the
latent square: calm and sparse near (0,0), busy and bright near (1,1).
Run from the repo root: python3 scripts/make_assets.py
"""

from __future__ import annotations

from pathlib import Path

from dynsong.curves import (
    ControlPoint,
    Curve,
    CurveSet,
    save_curves,
)
from dynsong.graph import Edge, NodeInstance, SongGraph, save_song
from dynsong.midi import TempoEvent, TrackPlan, write_midi
from dynsong.theory import NoteEvent, NoteSequence, Pitch, TimeSignature

ASSETS = Path(__file__).resolve().parent.parent / "src" / "dynsong" / "assets"


def note(start: int, pitch: int, duration: int, velocity: int = 88) -> NoteEvent:
    return NoteEvent(start, Pitch(pitch), duration, velocity)


# One bar of 4/4 at 480 PPQ = 1920 ticks.
MOTIFS = {
    # (0,0): calm, low, half notes
    "corner0.mid": [
        note(0, 60, 960, 72),
        note(960, 64, 960, 70),
    ],
    # (1,0): rising quarter arpeggio
    "corner1.mid": [
        note(0, 60, 480, 84),
        note(480, 64, 480, 84),
        note(960, 67, 480, 86),
        note(1440, 72, 480, 90),
    ],
    # (0,1): syncopated mid-register line
    "corner2.mid": [
        note(0, 67, 360, 80),
        note(480, 69, 240, 76),
        note(840, 67, 360, 78),
        note(1440, 64, 480, 80),
    ],
    # (1,1): busy eighth-note run up high
    "corner3.mid": [
        note(0, 72, 240, 92),
        note(240, 74, 240, 88),
        note(480, 76, 240, 92),
        note(720, 79, 240, 90),
        note(960, 76, 240, 92),
        note(1200, 74, 240, 88),
        note(1440, 72, 240, 92),
        note(1680, 67, 240, 86),
    ],
}


def write_corpus() -> None:
    corpus_dir = ASSETS / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for name, events in MOTIFS.items():
        track = TrackPlan(
            name=name.removesuffix(".mid"),
            channel=0,
            program=0,
            events=NoteSequence(tuple(events)),
        )
        data = write_midi([track], [TempoEvent(0, 110.0)])
        (corpus_dir / name).write_bytes(data)
        print(f"wrote {corpus_dir / name}")


def example_song() -> SongGraph:
    """The bundled demo: a latent lead with a curve-driven countermelody.

    curve_source feeds the progression generator (valence + complexity) and
    the countermelody's thinning knob; the latent melody leads and the
    countermelody follows it under the generated harmony.
    """
    nodes = (
        NodeInstance("curves", "curve_source"),
        NodeInstance("lead", "latent_melody", {"x": 0.3, "y": 0.6}),
        NodeInstance("prog", "progression_generator", {"root": "C"}),
        NodeInstance("counter", "countermelody"),
        NodeInstance("lead_out", "midi_sink", {"name": "lead", "channel": 0, "program": 73}),
        NodeInstance("counter_out", "midi_sink", {"name": "counter", "channel": 1, "program": 42}),
    )
    edges = (
        Edge("curves", "valence", "prog", "valence"),
        Edge("curves", "complexity", "prog", "complexity"),
        Edge("curves", "complexity", "counter", "complexity"),
        Edge("lead", "notes", "counter", "lead"),
        Edge("prog", "chords", "counter", "chords"),
        Edge("lead", "notes", "lead_out", "notes"),
        Edge("counter", "notes", "counter_out", "notes"),
    )
    return SongGraph(
        nodes=nodes,
        edges=edges,
        length_bars=16,
        time_sig=TimeSignature(4, 4),
        master_seed=7041,
        title="Latent Drift",
    )


def example_curves() -> CurveSet:
    return CurveSet(
        energy=Curve(
            "energy",
            (
                ControlPoint(0.0, 0.25),
                ControlPoint(0.45, 0.7),
                ControlPoint(0.8, 0.9),
                ControlPoint(1.0, 0.4),
            ),
        ),
        valence=Curve(
            "valence",
            (
                ControlPoint(0.0, 0.5),
                ControlPoint(0.35, 0.2),
                ControlPoint(0.75, 0.85),
                ControlPoint(1.0, 0.7),
            ),
        ),
        complexity=Curve(
            "complexity",
            (
                ControlPoint(0.0, 0.2),
                ControlPoint(0.6, 0.55),
                ControlPoint(1.0, 0.8),
            ),
        ),
    )


def write_library() -> None:
    library = ASSETS / "library"
    library.mkdir(parents=True, exist_ok=True)
    save_song(example_song(), library / "example.song.json")
    save_curves(example_curves(), library / "example.curves.json")
    print(f"wrote {library / 'example.song.json'}")
    print(f"wrote {library / 'example.curves.json'}")


if __name__ == "__main__":
    write_corpus()
    write_library()
