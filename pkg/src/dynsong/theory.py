"""Music-theory primitives and tick arithmetic shared across the engine.

Everything here is an immutable value with pure functions over it, so the
rest of the engine can evaluate bars concurrently without locking.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

# Engine-wide tick resolution (pulses per quarter note). 480 divides cleanly
# for eighths, sixteenths and triplets.
PPQ = 480


class RangeError(ValueError):
    """A value fell outside its legal numeric range."""


# ---------------------------------------------------------------------------
# Pitch types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PitchClass:
    """Semitone class 0-11 where 0 = C. Reduced mod 12 on construction."""

    value: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", int(self.value) % 12)

    def transpose(self, semitones: int) -> "PitchClass":
        return PitchClass(self.value + semitones)


@dataclass(frozen=True, order=True)
class Pitch:
    """A concrete MIDI pitch in [0, 127]."""

    midi_number: int

    def __post_init__(self) -> None:
        if not 0 <= self.midi_number <= 127:
            raise RangeError(f"pitch {self.midi_number} outside [0, 127]")

    @property
    def pitch_class(self) -> PitchClass:
        return PitchClass(self.midi_number % 12)


class ChordQuality(enum.Enum):
    """Chord colour, each mapping to a fixed interval template above the root."""

    MAJOR = "major"
    MINOR = "minor"
    DIMINISHED = "diminished"
    AUGMENTED = "augmented"
    DOMINANT7 = "dominant7"
    MAJOR7 = "major7"
    MINOR7 = "minor7"
    MAJOR9 = "major9"
    MINOR9 = "minor9"

    @property
    def intervals(self) -> tuple[int, ...]:
        return _CHORD_TEMPLATES[self]


_CHORD_TEMPLATES: dict[ChordQuality, tuple[int, ...]] = {
    ChordQuality.MAJOR: (0, 4, 7),
    ChordQuality.MINOR: (0, 3, 7),
    ChordQuality.DIMINISHED: (0, 3, 6),
    ChordQuality.AUGMENTED: (0, 4, 8),
    ChordQuality.DOMINANT7: (0, 4, 7, 10),
    ChordQuality.MAJOR7: (0, 4, 7, 11),
    ChordQuality.MINOR7: (0, 3, 7, 10),
    ChordQuality.MAJOR9: (0, 4, 7, 11, 14),
    ChordQuality.MINOR9: (0, 3, 7, 10, 14),
}

# Qualities that read as "bright" (used by the valence tests and docs).
MAJOR_FAMILY = frozenset(
    {ChordQuality.MAJOR, ChordQuality.MAJOR7, ChordQuality.MAJOR9, ChordQuality.DOMINANT7}
)


@dataclass(frozen=True)
class Chord:
    root: PitchClass
    quality: ChordQuality

    @property
    def pitch_classes(self) -> frozenset[PitchClass]:
        return frozenset(self.root.transpose(i) for i in self.quality.intervals)

    def __str__(self) -> str:
        return f"{NOTE_NAMES[self.root.value]}:{self.quality.value}"


NOTE_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
NAME_TO_PC = {name: i for i, name in enumerate(NOTE_NAMES)} | {
    "Db": 1, "Eb": 3, "Gb": 6, "Ab": 8, "Bb": 10,
}


class Mode(enum.Enum):
    IONIAN = "ionian"
    DORIAN = "dorian"
    PHRYGIAN = "phrygian"
    LYDIAN = "lydian"
    MIXOLYDIAN = "mixolydian"
    AEOLIAN = "aeolian"
    LOCRIAN = "locrian"

    @property
    def intervals(self) -> tuple[int, ...]:
        return _MODE_INTERVALS[self]


_MODE_INTERVALS: dict[Mode, tuple[int, ...]] = {
    Mode.IONIAN: (0, 2, 4, 5, 7, 9, 11),
    Mode.DORIAN: (0, 2, 3, 5, 7, 9, 10),
    Mode.PHRYGIAN: (0, 1, 3, 5, 7, 8, 10),
    Mode.LYDIAN: (0, 2, 4, 6, 7, 9, 11),
    Mode.MIXOLYDIAN: (0, 2, 4, 5, 7, 9, 10),
    Mode.AEOLIAN: (0, 2, 3, 5, 7, 8, 10),
    Mode.LOCRIAN: (0, 1, 3, 5, 6, 8, 10),
}


@dataclass(frozen=True)
class Scale:
    root: PitchClass
    mode: Mode

    def degree_pitch_class(self, degree: int) -> PitchClass:
        """Pitch class of scale degree 1-7."""
        if not 1 <= degree <= 7:
            raise RangeError(f"scale degree {degree} outside [1, 7]")
        return self.root.transpose(self.mode.intervals[degree - 1])


@dataclass(frozen=True)
class TimeSignature:
    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.numerator < 1:
            raise RangeError("time signature numerator must be positive")
        if self.denominator not in (1, 2, 4, 8, 16):
            raise RangeError("time signature denominator must be in {1,2,4,8,16}")

    @property
    def beat_ticks(self) -> int:
        """Ticks of one beat (one 1/denominator note) at engine PPQ."""
        return PPQ * 4 // self.denominator

    @property
    def bar_ticks(self) -> int:
        return self.numerator * self.beat_ticks


# ---------------------------------------------------------------------------
# Note events
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class NoteEvent:
    """One timestamped note: start/duration in ticks, velocity 1-127."""

    start: int
    pitch: Pitch
    duration: int
    velocity: int

    def __post_init__(self) -> None:
        if self.start < 0:
            raise RangeError("note start must be >= 0")
        if self.duration < 1:
            raise RangeError("note duration must be >= 1")
        if not 1 <= self.velocity <= 127:
            raise RangeError(f"velocity {self.velocity} outside [1, 127]")

    @property
    def end(self) -> int:
        return self.start + self.duration

    def shifted(self, ticks: int) -> "NoteEvent":
        return NoteEvent(self.start + ticks, self.pitch, self.duration, self.velocity)


@dataclass(frozen=True)
class NoteSequence:
    """Sorted collection of NoteEvents. Sorting by (start, pitch) is normalized
    on construction, so two sequences with the same events always compare equal.
    """

    events: tuple[NoteEvent, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        ordered = tuple(
            sorted(
                self.events,
                key=lambda e: (e.start, e.pitch.midi_number, e.duration, e.velocity),
            )
        )
        object.__setattr__(self, "events", ordered)

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def span_end(self) -> int:
        return max((e.end for e in self.events), default=0)

    def shifted(self, ticks: int) -> "NoteSequence":
        return NoteSequence(tuple(e.shifted(ticks) for e in self.events))

    def merged(self, other: "NoteSequence") -> "NoteSequence":
        return NoteSequence(self.events + other.events)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def chord_pitches(chord: Chord, octave: int) -> list[Pitch]:
    """Root-position pitches of `chord` with the root in `octave` (0-8).

    The root lands at (octave + 1) * 12 + root class, template offsets above.
    Raises RangeError if any pitch leaves the MIDI range.
    """
    if not 0 <= octave <= 8:
        raise RangeError(f"octave {octave} outside [0, 8]")
    base = (octave + 1) * 12 + chord.root.value
    return [Pitch(base + i) for i in chord.quality.intervals]


def scale_pitch_classes(scale: Scale) -> frozenset[PitchClass]:
    """The 7 pitch classes of a diatonic mode."""
    return frozenset(scale.root.transpose(i) for i in scale.mode.intervals)


def nearest_chord_tone(pitch: Pitch, chord: Chord) -> Pitch:
    """Snap a pitch to the nearest chord tone; equidistant ties resolve downward."""
    classes = {pc.value for pc in chord.pitch_classes}
    p = pitch.midi_number
    if p % 12 in classes:
        return pitch
    for d in range(1, 12):
        if p - d >= 0 and (p - d) % 12 in classes:
            return Pitch(p - d)
        if p + d <= 127 and (p + d) % 12 in classes:
            return Pitch(p + d)
    raise RangeError(f"no chord tone reachable from {p}")  # pragma: no cover


def bar_to_tick(bar: int, time_sig: TimeSignature, ppq: int = PPQ) -> int:
    """Tick position of the start of `bar` (0-based)."""
    if ppq <= 0:
        raise RangeError("ppq must be positive")
    return bar * time_sig.numerator * (ppq * 4 // time_sig.denominator)
