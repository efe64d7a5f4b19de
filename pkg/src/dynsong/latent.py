"""Deterministic latent-space stand-ins for the neural melody blocks.

The melody source exposes the same contract a trained latent model would
(two knobs in, one bar of notes out) but realizes it with plain geometry: a
bilinear blend between four corner motifs on the unit square. The
countermelody transformer likewise: invert the lead around its median pitch,
drop it down a fifth, snap every note to the active chord, and thin it out
at low complexity. No weights, no inference, fully reproducible.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from pathlib import Path
from random import Random
from typing import Optional, Union

from .curves import EmotionSample
from .generators import ChordProgression, SpanMismatchError
from .midi import read_midi
from .theory import NoteEvent, NoteSequence, Pitch, TimeSignature, nearest_chord_tone

# Corner layout on the unit square: index 0 at (0,0), 1 at (1,0),
# 2 at (0,1), 3 at (1,1).
CORNER_COORDS = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0))
CORNER_FILES = ("corner0.mid", "corner1.mid", "corner2.mid", "corner3.mid")

COUNTERMELODY_DROP = 7  # semitones below the inverted lead


class CorpusError(ValueError):
    """A motif corpus directory failed validation."""


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else float(x)


@dataclass(frozen=True)
class LatentCoord:
    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _clamp01(self.x))
        object.__setattr__(self, "y", _clamp01(self.y))

    def weights(self) -> tuple[float, float, float, float]:
        """Bilinear corner weights; always sums to 1."""
        x, y = self.x, self.y
        return ((1 - x) * (1 - y), x * (1 - y), (1 - x) * y, x * y)


@dataclass(frozen=True)
class MotifCorpus:
    """Exactly four one-bar motifs pinned to the corners of the latent square."""

    motifs: tuple[NoteSequence, NoteSequence, NoteSequence, NoteSequence]
    span_ticks: int

    def __post_init__(self) -> None:
        if len(self.motifs) != 4:
            raise CorpusError(f"corpus needs exactly 4 motifs, got {len(self.motifs)}")
        for i, motif in enumerate(self.motifs):
            if len(motif) == 0:
                raise CorpusError(f"motif {i} is empty")
            if motif.span_end > self.span_ticks:
                raise CorpusError(
                    f"motif {i} runs to tick {motif.span_end}, past the "
                    f"{self.span_ticks}-tick bar"
                )


def _nearest_pitch_at(motif: NoteSequence, tick: int) -> int:
    """Pitch of the motif event whose start is closest to `tick` (earlier wins ties)."""
    best = min(motif.events, key=lambda e: (abs(e.start - tick), e.start))
    return best.pitch.midi_number


def latent_melody(
    corpus: MotifCorpus,
    coord: LatentCoord,
    chords: Optional[ChordProgression] = None,
) -> NoteSequence:
    """Blend the four corner motifs at a latent coordinate.

    The rhythm (onset set, durations, velocities) comes verbatim from the
    corner with the largest bilinear weight (lowest corner index on ties);
    each onset's pitch is the weight-averaged blend of the four motifs'
    time-nearest pitches. At a corner this reduces to that corner's motif
    exactly. With chords given, every pitch snaps to the sounding chord.
    """
    weights = coord.weights()
    lead_corner = max(range(4), key=lambda i: (weights[i], -i))
    base = corpus.motifs[lead_corner]
    events = []
    for ev in base.events:
        # The event itself is its own motif's time-nearest pitch; using it
        # directly keeps corners exact even when a motif stacks a chord.
        blended = sum(
            w * (ev.pitch.midi_number if i == lead_corner else _nearest_pitch_at(m, ev.start))
            for i, (w, m) in enumerate(zip(weights, corpus.motifs))
        )
        pitch = Pitch(max(0, min(127, int(blended + 0.5))))
        if chords is not None:
            pitch = nearest_chord_tone(pitch, chords.chord_at_tick(ev.start))
        events.append(NoteEvent(ev.start, pitch, ev.duration, ev.velocity))
    return NoteSequence(tuple(events))


def countermelody(
    lead: NoteSequence,
    chords: ChordProgression,
    emotion: EmotionSample,
    seed: int,
) -> NoteSequence:
    """A chord-locked counterline derived from the lead.

    Mirror the lead around its median pitch, drop the mirror a fifth, then
    snap each pitch to the chord under it. Low complexity thins the line
    (each note survives with probability 0.5 + 0.5*complexity); the first
    note always survives, so the output is never empty.
    """
    if len(lead) == 0:
        raise ValueError("lead must be non-empty")
    if lead.span_end > chords.span_ticks:
        raise SpanMismatchError(
            f"lead runs to tick {lead.span_end} but chords span only "
            f"{chords.span_ticks} ticks"
        )
    axis2 = int(2 * statistics.median(e.pitch.midi_number for e in lead.events))
    keep_p = 0.5 + 0.5 * emotion.complexity
    rng = Random(seed)
    events = []
    for i, ev in enumerate(lead.events):
        if i > 0 and rng.random() >= keep_p:
            continue
        mirrored = axis2 - ev.pitch.midi_number - COUNTERMELODY_DROP
        pitch = nearest_chord_tone(
            Pitch(max(0, min(127, mirrored))), chords.chord_at_tick(ev.start)
        )
        events.append(NoteEvent(ev.start, pitch, ev.duration, ev.velocity))
    return NoteSequence(tuple(events))


# ---------------------------------------------------------------------------
# Corpus loading
# ---------------------------------------------------------------------------


def load_corpus(directory: Union[str, Path], time_sig: TimeSignature) -> MotifCorpus:
    """Load corner0.mid..corner3.mid; each must fit one bar of `time_sig` at 480 PPQ."""
    directory = Path(directory)
    span = time_sig.bar_ticks
    motifs = []
    problems = []
    for name in CORNER_FILES:
        path = directory / name
        if not path.is_file():
            problems.append(f"{path}: missing")
            continue
        parsed = read_midi(path.read_bytes())
        if parsed.ppq != 480:
            problems.append(f"{path}: division {parsed.ppq}, expected 480 PPQ")
            continue
        motif = NoteSequence(parsed.notes)
        if len(motif) == 0:
            problems.append(f"{path}: no notes")
        elif motif.span_end > span:
            problems.append(
                f"{path}: notes run to tick {motif.span_end}, past the "
                f"{span}-tick bar of {time_sig.numerator}/{time_sig.denominator}"
            )
        else:
            motifs.append(motif)
    if problems:
        raise CorpusError("; ".join(problems))
    return MotifCorpus(tuple(motifs), span)


_corpus_cache: dict[tuple[str, int], MotifCorpus] = {}


def cached_corpus(directory: Union[str, Path], time_sig: TimeSignature) -> MotifCorpus:
    """load_corpus with caching; corpus files are treated as immutable."""
    key = (str(Path(directory).resolve()), time_sig.bar_ticks)
    if key not in _corpus_cache:
        _corpus_cache[key] = load_corpus(directory, time_sig)
    return _corpus_cache[key]


def builtin_corpus_dir() -> Path:
    """Directory of the motifs bundled with the package."""
    return Path(__file__).resolve().parent / "assets" / "corpus"
