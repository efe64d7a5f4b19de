"""Procedural emotional generators: progressions, rhythms, melodies, tempo.

The three emotional inputs map to music like this:

* energy   -> tempo (70-160 BPM) and rhythmic density (onset probability)
* valence  -> chord palette: bright major harmony at the top, darker minor
              and diminished colours at the bottom, modal mixture between
* complexity -> chord extensions (triads / sevenths / ninths), rhythmic
              subdivision (quarters / eighths / sixteenths), syncopation,
              and how far melodies stray from chord tones

Valence and complexity proxies ("brightness" = major-family chord fraction,
extension gating thresholds at 0.4/0.7) are this engine's operationalization
of the emotional labels; the statistical tests pin them down.

Every generator is a pure function of (inputs, seed): no hidden state, no
module-level RNG.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from random import Random

from .curves import EmotionSample
from .seeding import stable_seed
from .theory import (
    PPQ,
    Chord,
    ChordQuality,
    Mode,
    NoteEvent,
    NoteSequence,
    Pitch,
    PitchClass,
    Scale,
    TimeSignature,
)

# -- tempo -------------------------------------------------------------------

TEMPO_FLOOR_BPM = 70
TEMPO_SPAN_BPM = 90

# -- complexity thresholds (shared by harmony and rhythm) ---------------------

SEVENTHS_FROM = 0.4   # sevenths admitted at complexity >= 0.4
NINTHS_ABOVE = 0.7    # ninths admitted strictly above 0.7
SPLIT_BAR_FROM = 0.5  # two chords per bar at complexity >= 0.5

# -- rhythm constants ----------------------------------------------------------

ONSET_P_FLOOR = 0.3
ONSET_P_SPAN = 0.6
SYNCOPATION_FACTOR = 0.4

# -- melody constants ----------------------------------------------------------

MELODY_CENTER = 72           # C5; melodies live within +/- one octave of this
MELODY_RANGE = (60, 84)
VELOCITY_FLOOR = 48
VELOCITY_SPAN = 64


class SpanMismatchError(ValueError):
    """Two inputs that must cover the same bar span do not."""


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else float(x)


def _iround(x: float) -> int:
    return int(x + 0.5)


def tempo_map(energy: float) -> int:
    """BPM for an energy level: 70 at rest, 160 flat out."""
    return _iround(TEMPO_FLOOR_BPM + TEMPO_SPAN_BPM * _clamp01(energy))


# ---------------------------------------------------------------------------
# Progressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChordSlot:
    chord: Chord
    duration_beats: int

    def __post_init__(self) -> None:
        if self.duration_beats < 1:
            raise ValueError("chord slot duration must be >= 1 beat")


@dataclass(frozen=True)
class ChordProgression:
    """Chords with durations in beats; slots tile whole bars of `time_sig`."""

    slots: tuple[ChordSlot, ...]
    time_sig: TimeSignature

    def __post_init__(self) -> None:
        if not self.slots:
            raise ValueError("progression must have at least one slot")
        total = sum(s.duration_beats for s in self.slots)
        if total % self.time_sig.numerator != 0:
            raise ValueError(
                f"slot durations sum to {total} beats, not a whole number of "
                f"{self.time_sig.numerator}-beat bars"
            )

    @property
    def total_beats(self) -> int:
        return sum(s.duration_beats for s in self.slots)

    @property
    def bars(self) -> int:
        return self.total_beats // self.time_sig.numerator

    @property
    def span_ticks(self) -> int:
        return self.total_beats * self.time_sig.beat_ticks

    def chord_at_tick(self, tick: int) -> Chord:
        """Chord sounding at an absolute tick within the progression's span."""
        if tick < 0:
            raise ValueError("tick must be >= 0")
        edge = 0
        for slot in self.slots:
            edge += slot.duration_beats * self.time_sig.beat_ticks
            if tick < edge:
                return slot.chord
        return self.slots[-1].chord

    def bar_slice(self, bar: int) -> "ChordProgression":
        """The single-bar progression covering bar `bar` (0-based)."""
        if not 0 <= bar < self.bars:
            raise IndexError(f"bar {bar} outside progression of {self.bars} bars")
        start = bar * self.time_sig.numerator
        end = start + self.time_sig.numerator
        out: list[ChordSlot] = []
        edge = 0
        for slot in self.slots:
            lo, hi = edge, edge + slot.duration_beats
            edge = hi
            overlap = min(hi, end) - max(lo, start)
            if overlap > 0:
                out.append(ChordSlot(slot.chord, overlap))
        return ChordProgression(tuple(out), self.time_sig)

    def chords(self) -> list[Chord]:
        return [s.chord for s in self.slots]


class HarmonicFunction(enum.Enum):
    TONIC = "tonic"
    SUBDOMINANT = "subdominant"
    DOMINANT = "dominant"


# Functional random walk, biased toward resolution.
TRANSITIONS: dict[HarmonicFunction, tuple[tuple[HarmonicFunction, float], ...]] = {
    HarmonicFunction.TONIC: (
        (HarmonicFunction.TONIC, 0.1),
        (HarmonicFunction.SUBDOMINANT, 0.5),
        (HarmonicFunction.DOMINANT, 0.4),
    ),
    HarmonicFunction.SUBDOMINANT: (
        (HarmonicFunction.TONIC, 0.2),
        (HarmonicFunction.SUBDOMINANT, 0.2),
        (HarmonicFunction.DOMINANT, 0.6),
    ),
    HarmonicFunction.DOMINANT: (
        (HarmonicFunction.TONIC, 0.8),
        (HarmonicFunction.SUBDOMINANT, 0.1),
        (HarmonicFunction.DOMINANT, 0.1),
    ),
}

DEGREE_FUNCTION = {
    1: HarmonicFunction.TONIC,
    2: HarmonicFunction.SUBDOMINANT,
    3: HarmonicFunction.TONIC,
    4: HarmonicFunction.SUBDOMINANT,
    5: HarmonicFunction.DOMINANT,
    6: HarmonicFunction.TONIC,
    7: HarmonicFunction.DOMINANT,
}


class ValenceBand(enum.Enum):
    LOW = "low"
    MID = "mid"
    HIGH = "high"


@dataclass(frozen=True)
class PaletteEntry:
    degree: int
    quality: ChordQuality
    weight: float

    def __post_init__(self) -> None:
        if not 1 <= self.degree <= 7:
            raise ValueError("palette degree must be in 1..7")
        if self.weight <= 0:
            raise ValueError("palette weight must be positive")


@dataclass(frozen=True)
class ChordPalette:
    band: ValenceBand
    mode: Mode
    entries: tuple[PaletteEntry, ...]


# Bright major harmony up top, darker modal colours at the bottom. The V
# dominant-seventh entry in the high band only becomes available once the
# complexity gate admits sevenths.
PALETTES: dict[ValenceBand, ChordPalette] = {
    ValenceBand.HIGH: ChordPalette(
        ValenceBand.HIGH,
        Mode.IONIAN,
        (
            PaletteEntry(1, ChordQuality.MAJOR, 1.0),
            PaletteEntry(4, ChordQuality.MAJOR, 1.0),
            PaletteEntry(5, ChordQuality.MAJOR, 1.0),
            PaletteEntry(5, ChordQuality.DOMINANT7, 1.0),
            PaletteEntry(6, ChordQuality.MINOR, 0.5),
        ),
    ),
    ValenceBand.MID: ChordPalette(
        ValenceBand.MID,
        Mode.DORIAN,
        (
            PaletteEntry(1, ChordQuality.MINOR, 1.0),
            PaletteEntry(4, ChordQuality.MAJOR, 1.0),
            PaletteEntry(2, ChordQuality.MINOR, 0.6),
            PaletteEntry(5, ChordQuality.MINOR, 1.0),
            PaletteEntry(7, ChordQuality.MAJOR, 0.8),
        ),
    ),
    ValenceBand.LOW: ChordPalette(
        ValenceBand.LOW,
        Mode.AEOLIAN,
        (
            PaletteEntry(1, ChordQuality.MINOR, 1.0),
            PaletteEntry(4, ChordQuality.MINOR, 1.0),
            PaletteEntry(5, ChordQuality.MINOR, 1.0),
            PaletteEntry(6, ChordQuality.MAJOR, 0.5),
            PaletteEntry(2, ChordQuality.DIMINISHED, 1.0),
        ),
    ),
}


def band_for_valence(valence: float) -> ValenceBand:
    v = _clamp01(valence)
    if v < 1.0 / 3.0:
        return ValenceBand.LOW
    if v <= 2.0 / 3.0:
        return ValenceBand.MID
    return ValenceBand.HIGH


def sevenths_allowed(complexity: float) -> bool:
    return complexity >= SEVENTHS_FROM


def ninths_allowed(complexity: float) -> bool:
    return complexity > NINTHS_ABOVE


_SEVENTH_OF = {
    ChordQuality.MAJOR: ChordQuality.MAJOR7,
    ChordQuality.MINOR: ChordQuality.MINOR7,
}
_NINTH_OF = {
    ChordQuality.MAJOR: ChordQuality.MAJOR9,
    ChordQuality.MINOR: ChordQuality.MINOR9,
}


def _weighted_pick(rng: Random, entries: list[PaletteEntry]) -> PaletteEntry:
    total = sum(e.weight for e in entries)
    u = rng.random() * total
    acc = 0.0
    for e in entries:
        acc += e.weight
        if u < acc:
            return e
    return entries[-1]


def _transition(state: HarmonicFunction, rng: Random) -> HarmonicFunction:
    u = rng.random()
    acc = 0.0
    for nxt, p in TRANSITIONS[state]:
        acc += p
        if u < acc:
            return nxt
    return TRANSITIONS[state][-1][0]


def _realize(
    state: HarmonicFunction, emotion: EmotionSample, key_root: PitchClass, rng: Random
) -> Chord:
    """Draw a concrete chord for a functional state from the valence palette."""
    band = band_for_valence(emotion.valence)
    palette = PALETTES[band]
    allow7 = sevenths_allowed(emotion.complexity)
    pool = [
        e
        for e in palette.entries
        if DEGREE_FUNCTION[e.degree] is state
        and (allow7 or len(e.quality.intervals) <= 3)
    ]
    entry = _weighted_pick(rng, pool)
    quality = entry.quality
    if quality in _SEVENTH_OF and allow7 and rng.random() < emotion.complexity:
        if ninths_allowed(emotion.complexity) and rng.random() < (
            emotion.complexity - NINTHS_ABOVE
        ) / (1.0 - NINTHS_ABOVE):
            quality = _NINTH_OF[entry.quality]
        elif entry.degree == 5 and entry.quality is ChordQuality.MAJOR:
            quality = ChordQuality.DOMINANT7
        else:
            quality = _SEVENTH_OF[entry.quality]
    root = Scale(key_root, palette.mode).degree_pitch_class(entry.degree)
    return Chord(root, quality)


def _bar_slot_durations(numerator: int, complexity: float) -> tuple[int, ...]:
    """Harmonic rhythm: one chord per bar below complexity 0.5, two above."""
    if complexity >= SPLIT_BAR_FROM and numerator >= 2:
        first = (numerator + 1) // 2
        return (first, numerator - first)
    return (numerator,)


def progression_bar(
    emotion: EmotionSample,
    key: Scale,
    time_sig: TimeSignature,
    bar_index: int,
    total_bars: int,
    seed_for_bar,
) -> ChordProgression:
    """One bar of the functional random walk.

    `seed_for_bar(i)` must return the same seed for bar i on every call; the
    walk state entering `bar_index` is replayed from bar 0 with one transition
    per bar, so any bar can be evaluated independently yet the walk stays
    coherent across the song. Realization draws (palette pick, extensions,
    the optional second slot) come after the transition draw in the bar's own
    stream, so they never perturb the persistent state.
    """
    state = HarmonicFunction.TONIC
    for i in range(1, bar_index + 1):
        state = _transition(state, Random(seed_for_bar(i)))
    rng = Random(seed_for_bar(bar_index))
    if bar_index > 0:
        _transition(HarmonicFunction.TONIC, rng)  # skip this bar's persisted draw
    durations = _bar_slot_durations(time_sig.numerator, emotion.complexity)
    states = [state]
    if len(durations) == 2:
        states.append(_transition(state, rng))
    if bar_index == total_bars - 1:
        states[-1] = HarmonicFunction.TONIC
    slots = tuple(
        ChordSlot(_realize(s, emotion, key.root, rng), d)
        for s, d in zip(states, durations)
    )
    return ChordProgression(slots, time_sig)


def generate_progression(
    emotion: EmotionSample,
    key: Scale,
    bars: int,
    seed: int,
    time_sig: TimeSignature = TimeSignature(4, 4),
) -> ChordProgression:
    """Multi-bar progression under one emotional setting.

    The key's root anchors the harmony; the sounding mode comes from the
    valence band's palette. The final bar always lands on a tonic-function
    chord.
    """
    if bars < 1:
        raise ValueError("bars must be >= 1")
    slots: list[ChordSlot] = []
    for b in range(bars):
        bar = progression_bar(
            emotion, key, time_sig, b, bars, lambda i: stable_seed(seed, i)
        )
        slots.extend(bar.slots)
    return ChordProgression(tuple(slots), time_sig)


# ---------------------------------------------------------------------------
# Rhythm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Onset:
    start: int
    duration: int
    accent: float

    def __post_init__(self) -> None:
        if self.start < 0:
            raise ValueError("onset start must be >= 0")
        if self.duration < 1:
            raise ValueError("onset duration must be >= 1")
        if not 0.0 <= self.accent <= 1.0:
            raise ValueError("accent must lie in [0, 1]")


@dataclass(frozen=True)
class RhythmPattern:
    """Onsets within one bar; positions strictly ascending, nothing past the span."""

    onsets: tuple[Onset, ...]
    span_ticks: int

    def __post_init__(self) -> None:
        if self.span_ticks < 1:
            raise ValueError("span must be >= 1 tick")
        for a, b in zip(self.onsets, self.onsets[1:]):
            if b.start <= a.start:
                raise ValueError("onset positions must be strictly ascending")
        for o in self.onsets:
            if o.start + o.duration > self.span_ticks:
                raise ValueError("onset extends past the bar span")

    def __len__(self) -> int:
        return len(self.onsets)

    def __iter__(self):
        return iter(self.onsets)


def grid_cell_ticks(complexity: float, beat_ticks: int = PPQ) -> int:
    """Base grid resolution: quarters below 0.4, eighths to 0.7, sixteenths above.

    `beat_ticks` is the tick length of a quarter note (PPQ).
    """
    c = _clamp01(complexity)
    if c < SEVENTHS_FROM:
        return beat_ticks
    if c <= NINTHS_ABOVE:
        return beat_ticks // 2
    return beat_ticks // 4


OFFBEAT_ACCENT = 0.7


def generate_rhythm(
    emotion: EmotionSample, time_sig: TimeSignature, seed: int
) -> RhythmPattern:
    """One bar of onsets on the complexity-chosen grid.

    Each cell fires with probability 0.3 + 0.6*energy; a fired onset is
    delayed off-grid by half a cell with probability 0.4*complexity. A bar
    that samples empty gets the downbeat forced so rhythms are never silent.
    """
    cell = grid_cell_ticks(emotion.complexity, PPQ)
    span = time_sig.bar_ticks
    if cell > span:
        cell = span
    n_cells = span // cell
    rng = Random(seed)
    onsets: list[Onset] = []
    for i in range(n_cells):
        if rng.random() >= ONSET_P_FLOOR + ONSET_P_SPAN * emotion.energy:
            continue
        pos = i * cell
        if rng.random() < SYNCOPATION_FACTOR * emotion.complexity:
            pos += cell // 2
        duration = min(cell, span - pos)
        accent = 1.0 if pos % time_sig.beat_ticks == 0 else OFFBEAT_ACCENT
        onsets.append(Onset(pos, duration, accent))
    if not onsets:
        onsets.append(Onset(0, cell, 1.0))
    return RhythmPattern(tuple(onsets), span)


# ---------------------------------------------------------------------------
# Melody
# ---------------------------------------------------------------------------


def _pitches_in_range(classes: set[int], lo: int, hi: int) -> list[int]:
    return [m for m in range(lo, hi + 1) if m % 12 in classes]


def melody_velocity(energy: float, accent: float) -> int:
    v = _iround(VELOCITY_FLOOR + VELOCITY_SPAN * _clamp01(energy) * accent)
    return max(1, min(127, v))


def improvise_melody(
    chords: ChordProgression,
    rhythm: RhythmPattern,
    emotion: EmotionSample,
    key: Scale,
    seed: int,
) -> NoteSequence:
    """One note per rhythm onset, mostly chord tones, stepwise otherwise.

    A note is a chord tone with probability 1 - 0.5*complexity; the rest are
    scale passing/neighbor tones within two scale steps of the previous note.
    Register stays within an octave either side of C5.
    """
    if chords.span_ticks != rhythm.span_ticks:
        raise SpanMismatchError(
            f"chords span {chords.span_ticks} ticks but rhythm spans "
            f"{rhythm.span_ticks}"
        )
    lo, hi = MELODY_RANGE
    scale_classes = {pc.value for pc in _scale_classes(key)}
    scale_pitches = _pitches_in_range(scale_classes, lo, hi)
    rng = Random(seed)
    prev = MELODY_CENTER
    events: list[NoteEvent] = []
    for onset in rhythm.onsets:
        chord = chords.chord_at_tick(onset.start)
        if rng.random() < 1.0 - 0.5 * emotion.complexity:
            tones = _pitches_in_range({pc.value for pc in chord.pitch_classes}, lo, hi)
            tones.sort(key=lambda m: (abs(m - prev), m))
            near = tones[:3]
            pitch = near[rng.randrange(len(near))]
        else:
            anchor = min(
                range(len(scale_pitches)),
                key=lambda i: (abs(scale_pitches[i] - prev), scale_pitches[i]),
            )
            step = rng.choice((-2, -1, 1, 2))
            pitch = scale_pitches[max(0, min(len(scale_pitches) - 1, anchor + step))]
        velocity = melody_velocity(emotion.energy, onset.accent)
        events.append(NoteEvent(onset.start, Pitch(pitch), onset.duration, velocity))
        prev = pitch
    return NoteSequence(tuple(events))


def _scale_classes(key: Scale) -> set[PitchClass]:
    return {key.root.transpose(i) for i in key.mode.intervals}
