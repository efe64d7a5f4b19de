"""dynsong: a dynamic-song engine.

Songs are typed dataflow graphs of music blocks, evaluated once per bar and
steered by listener-editable emotion curves (energy, valence, complexity).
Output is deterministic symbolic music: standard MIDI files offline, a JSON
event stream live.
"""

from .blocks import default_registry
from .curves import (
    ControlPoint,
    Curve,
    CurveSet,
    EmotionSample,
    constant_set,
    load_curves,
    save_curves,
)
from .generators import (
    ChordProgression,
    RhythmPattern,
    generate_progression,
    generate_rhythm,
    improvise_melody,
    tempo_map,
)
from .graph import (
    Edge,
    NodeInstance,
    PortType,
    SongGraph,
    add_node,
    connect,
    evaluate_bar,
    evaluate_song,
    load_song,
    save_song,
    topo_order,
    validate_graph,
)
from .latent import LatentCoord, MotifCorpus, countermelody, latent_melody, load_corpus
from .midi import TempoEvent, TrackPlan, encode_vlq, read_midi, write_midi
from .render import render_song
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
    bar_to_tick,
    chord_pitches,
    nearest_chord_tone,
    scale_pitch_classes,
)
from .transport import SessionManager, log_to_midi

__version__ = "0.1.0"
