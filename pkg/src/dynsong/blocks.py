"""The built-in block registry.

Every generator exposes its emotional knobs twice: as Param input ports (so
a curve source can drive them live) and as node params (so a composer can
pin them statically). A wired port wins; otherwise the param value is used.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .curves import EmotionSample
from .generators import (
    ChordProgression,
    ChordSlot,
    generate_rhythm,
    improvise_melody,
    progression_bar,
    tempo_map,
)
from .graph import (
    BlockDescriptor,
    BlockRegistry,
    EvalContext,
    ParamSpec,
    PortType,
    in_port,
    out_port,
)
from .latent import (
    LatentCoord,
    builtin_corpus_dir,
    cached_corpus,
    countermelody,
    latent_melody,
)
from .seeding import stable_seed
from .theory import (
    Chord,
    ChordQuality,
    Mode,
    NAME_TO_PC,
    PitchClass,
    Scale,
)

WORKING_OCTAVE = 4


def parse_chord_symbol(token: str) -> Chord:
    """Parse "Root:quality" (e.g. "C:major", "A:minor7") into a Chord."""
    root_name, sep, quality_name = token.partition(":")
    if not sep:
        raise ValueError(f"chord {token!r} is not in Root:quality form")
    if root_name not in NAME_TO_PC:
        raise ValueError(f"unknown root {root_name!r} in chord {token!r}")
    try:
        quality = ChordQuality(quality_name)
    except ValueError:
        raise ValueError(
            f"unknown quality {quality_name!r} in chord {token!r}; expected one of "
            f"{', '.join(q.value for q in ChordQuality)}"
        ) from None
    return Chord(PitchClass(NAME_TO_PC[root_name]), quality)


def _check_progression_text(value: object) -> Optional[str]:
    tokens = str(value).split()
    if not tokens:
        return "needs at least one chord symbol"
    for token in tokens:
        try:
            parse_chord_symbol(token)
        except ValueError as exc:
            return str(exc)
    return None


def _check_root_name(value: object) -> Optional[str]:
    if value not in NAME_TO_PC:
        return f"unknown note name {value!r}"
    return None


def _emotion_from(inputs: Mapping[str, object], ctx: EvalContext) -> EmotionSample:
    def knob(name: str) -> float:
        value = inputs.get(name)
        return float(value) if value is not None else 0.5

    return EmotionSample(knob("energy"), knob("valence"), knob("complexity"))


def _emotion_params() -> dict[str, ParamSpec]:
    return {
        name: ParamSpec("number", 0.5, minimum=0.0, maximum=1.0)
        for name in ("energy", "valence", "complexity")
    }


def _emotion_ports() -> list:
    return [
        in_port("energy", PortType.PARAM),
        in_port("valence", PortType.PARAM),
        in_port("complexity", PortType.PARAM),
    ]


def _key_from(params: Mapping[str, object]) -> Scale:
    return Scale(PitchClass(NAME_TO_PC[str(params["root"])]), Mode(str(params["mode"])))


# -- curve_source -------------------------------------------------------------


def _eval_curve_source(inputs, params, ctx: EvalContext):
    return {
        "energy": ctx.emotion.energy,
        "valence": ctx.emotion.valence,
        "complexity": ctx.emotion.complexity,
    }


CURVE_SOURCE = BlockDescriptor(
    kind="curve_source",
    inputs=(),
    outputs=(
        out_port("energy", PortType.PARAM),
        out_port("valence", PortType.PARAM),
        out_port("complexity", PortType.PARAM),
    ),
    params={},
    evaluate=_eval_curve_source,
    description="The listener's curve values for the current bar.",
)


# -- tempo_map ----------------------------------------------------------------


def _eval_tempo_map(inputs, params, ctx: EvalContext):
    return {"bpm": float(tempo_map(float(inputs["energy"])))}


TEMPO_MAP = BlockDescriptor(
    kind="tempo_map",
    inputs=(in_port("energy", PortType.PARAM),),
    outputs=(out_port("bpm", PortType.PARAM),),
    params={"energy": ParamSpec("number", 0.5, minimum=0.0, maximum=1.0)},
    evaluate=_eval_tempo_map,
    description="Energy to tempo: 70 BPM at rest, 160 at full energy.",
)


# -- constant_progression -------------------------------------------------------


def _eval_constant_progression(inputs, params, ctx: EvalContext):
    tokens = str(params["chords"]).split()
    chord = parse_chord_symbol(tokens[ctx.bar_index % len(tokens)])
    slot = ChordSlot(chord, ctx.time_sig.numerator)
    return {"chords": ChordProgression((slot,), ctx.time_sig)}


CONSTANT_PROGRESSION = BlockDescriptor(
    kind="constant_progression",
    inputs=(),
    outputs=(out_port("chords", PortType.CHORDS),),
    params={
        "chords": ParamSpec(
            "text", "C:major A:minor F:major G:major", check=_check_progression_text
        )
    },
    evaluate=_eval_constant_progression,
    description="A fixed chord-per-bar loop, one symbol per bar.",
)


# -- progression_generator ------------------------------------------------------


def _eval_progression_generator(inputs, params, ctx: EvalContext):
    emotion = _emotion_from(inputs, ctx)
    key = Scale(PitchClass(NAME_TO_PC[str(params["root"])]), Mode.IONIAN)
    progression = progression_bar(
        emotion, key, ctx.time_sig, ctx.bar_index, ctx.total_bars, ctx.seed_for_bar
    )
    return {"chords": progression}


PROGRESSION_GENERATOR = BlockDescriptor(
    kind="progression_generator",
    inputs=tuple(_emotion_ports()),
    outputs=(out_port("chords", PortType.CHORDS),),
    params={
        **_emotion_params(),
        "root": ParamSpec("text", "C", check=_check_root_name),
    },
    evaluate=_eval_progression_generator,
    description=(
        "Functional-harmony random walk; valence picks the palette, "
        "complexity gates extensions and harmonic rhythm."
    ),
)


# -- rhythm_generator -----------------------------------------------------------


def _eval_rhythm_generator(inputs, params, ctx: EvalContext):
    emotion = _emotion_from(inputs, ctx)
    return {"rhythm": generate_rhythm(emotion, ctx.time_sig, ctx.rng_seed)}


RHYTHM_GENERATOR = BlockDescriptor(
    kind="rhythm_generator",
    inputs=tuple(_emotion_ports()),
    outputs=(out_port("rhythm", PortType.RHYTHM),),
    params=_emotion_params(),
    evaluate=_eval_rhythm_generator,
    description="Grid onsets: energy sets density, complexity sets subdivision.",
)


# -- melody_improviser ----------------------------------------------------------


def _eval_melody_improviser(inputs, params, ctx: EvalContext):
    emotion = _emotion_from(inputs, ctx)
    rhythm = inputs.get("rhythm")
    if rhythm is None:
        rhythm = generate_rhythm(
            emotion, ctx.time_sig, stable_seed(ctx.rng_seed, "rhythm")
        )
    melody = improvise_melody(
        inputs["chords"], rhythm, emotion, _key_from(params), ctx.rng_seed
    )
    return {"notes": melody}


MELODY_IMPROVISER = BlockDescriptor(
    kind="melody_improviser",
    inputs=(
        in_port("chords", PortType.CHORDS, required=True),
        in_port("rhythm", PortType.RHYTHM),
        *_emotion_ports(),
    ),
    outputs=(out_port("notes", PortType.NOTES),),
    params={
        **_emotion_params(),
        "root": ParamSpec("text", "C", check=_check_root_name),
        "mode": ParamSpec(
            "enum", "ionian", choices=tuple(m.value for m in Mode)
        ),
    },
    evaluate=_eval_melody_improviser,
    description=(
        "Improvises over an input progression; makes its own rhythm when the "
        "rhythm port is unwired."
    ),
)


# -- latent_melody --------------------------------------------------------------


def _eval_latent_melody(inputs, params, ctx: EvalContext):
    directory = str(params["corpus"]) or builtin_corpus_dir()
    corpus = cached_corpus(directory, ctx.time_sig)
    coord = LatentCoord(float(inputs["x"]), float(inputs["y"]))
    return {"notes": latent_melody(corpus, coord, inputs.get("chords"))}


LATENT_MELODY = BlockDescriptor(
    kind="latent_melody",
    inputs=(
        in_port("x", PortType.PARAM),
        in_port("y", PortType.PARAM),
        in_port("chords", PortType.CHORDS),
    ),
    outputs=(out_port("notes", PortType.NOTES),),
    params={
        "x": ParamSpec("number", 0.5, minimum=0.0, maximum=1.0),
        "y": ParamSpec("number", 0.5, minimum=0.0, maximum=1.0),
        "corpus": ParamSpec("text", ""),
    },
    evaluate=_eval_latent_melody,
    description=(
        "Melody from a 2D latent square: blends four corner motifs; optional "
        "chord input snaps pitches to the harmony."
    ),
)


# -- countermelody --------------------------------------------------------------


def _eval_countermelody(inputs, params, ctx: EvalContext):
    emotion = _emotion_from(inputs, ctx)
    counter = countermelody(inputs["lead"], inputs["chords"], emotion, ctx.rng_seed)
    return {"notes": counter}


COUNTERMELODY = BlockDescriptor(
    kind="countermelody",
    inputs=(
        in_port("lead", PortType.NOTES, required=True),
        in_port("chords", PortType.CHORDS, required=True),
        in_port("complexity", PortType.PARAM),
    ),
    outputs=(out_port("notes", PortType.NOTES),),
    params={"complexity": ParamSpec("number", 0.5, minimum=0.0, maximum=1.0)},
    evaluate=_eval_countermelody,
    description=(
        "Counterline against a lead: median-inverted, dropped a fifth, "
        "chord-snapped; complexity controls how many notes survive."
    ),
)


# -- midi_sink ------------------------------------------------------------------


def _eval_midi_sink(inputs, params, ctx: EvalContext):
    return {}


MIDI_SINK = BlockDescriptor(
    kind="midi_sink",
    inputs=(in_port("notes", PortType.NOTES, required=True),),
    outputs=(),
    params={
        "name": ParamSpec("text", "track"),
        "channel": ParamSpec("integer", 0, minimum=0, maximum=15),
        "program": ParamSpec("integer", 0, minimum=0, maximum=127),
    },
    evaluate=_eval_midi_sink,
    description="Collects notes into one rendered MIDI track.",
    is_sink=True,
)


ALL_BLOCKS = (
    CONSTANT_PROGRESSION,
    COUNTERMELODY,
    CURVE_SOURCE,
    LATENT_MELODY,
    MELODY_IMPROVISER,
    MIDI_SINK,
    PROGRESSION_GENERATOR,
    RHYTHM_GENERATOR,
    TEMPO_MAP,
)


def default_registry() -> BlockRegistry:
    registry = BlockRegistry()
    for descriptor in ALL_BLOCKS:
        registry.register(descriptor)
    return registry
