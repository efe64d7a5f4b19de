"""Acceptance suite: every release criterion as one test, pass/fail per line.

Run with `pytest tests/test_acceptance.py -v` to get one line per criterion.
Statistical criteria use fixed seed ranges so reruns are exact; tolerances
are stated inline next to each assertion.
"""

import itertools
import random
import time

from dynsong.cli import EXIT_OK, builtin_library, main
from dynsong.curves import ControlPoint, EmotionSample, InsertPoint, constant_set
from dynsong.generators import (
    generate_progression,
    generate_rhythm,
    grid_cell_ticks,
    tempo_map,
)
from dynsong.graph import (
    CycleError,
    Edge,
    NodeInstance,
    PortOccupiedError,
    SongGraph,
    TypeMismatchError,
    UnknownEndpointError,
    add_node,
    connect,
    evaluate_song,
    load_song,
    topo_order,
)
from dynsong.latent import CORNER_COORDS, LatentCoord, latent_melody, load_corpus, countermelody
from dynsong.midi import encode_vlq
from dynsong.render import render_song
from dynsong.theory import (
    MAJOR_FAMILY,
    ChordQuality,
    Mode,
    NoteEvent,
    NoteSequence,
    Pitch,
    PitchClass,
    Scale,
    TimeSignature,
)
from dynsong.transport import (
    BarBoundary,
    NoteOff,
    NoteOn,
    SessionManager,
    TransportState,
    log_to_midi,
)
from dynsong.blocks import default_registry

from smf_oracle import decode_vlq_bytes, note_multiset, parse_smf

LIBRARY = builtin_library()
SONG_PATH = LIBRARY / "example.song.json"
CURVES_PATH = LIBRARY / "example.curves.json"
REGISTRY = default_registry()
KEY = Scale(PitchClass(0), Mode.IONIAN)
SIG = TimeSignature(4, 4)


def stream_notes(log):
    return [e for e in log if isinstance(e, (NoteOn, NoteOff))]


def test_c01_determinism_end_to_end(tmp_path):
    """cmd_render on the bundled example, seed 42, five runs: byte-identical, < 5 s."""
    # The bundled song carries the reference topology:
    # latent_melody -> countermelody <- progression_generator <- curve_source.
    graph = load_song(SONG_PATH)
    edges = {(e.from_node, e.from_port, e.to_node, e.to_port) for e in graph.edges}
    assert ("lead", "notes", "counter", "lead") in edges
    assert ("prog", "chords", "counter", "chords") in edges
    assert ("curves", "valence", "prog", "valence") in edges
    kinds = {n.id: n.kind for n in graph.nodes}
    assert kinds["lead"] == "latent_melody"
    assert kinds["counter"] == "countermelody"
    assert kinds["prog"] == "progression_generator"
    assert kinds["curves"] == "curve_source"

    start = time.monotonic()
    outputs = []
    for i in range(5):
        out = tmp_path / f"run{i}.mid"
        assert main(["render", "example", "--seed", "42", "--out", str(out)]) == EXIT_OK
        outputs.append(out.read_bytes())
    elapsed = time.monotonic() - start
    assert all(o == outputs[0] for o in outputs)
    assert elapsed < 5.0, f"5 renders took {elapsed:.2f}s"


def test_c02_offline_online_equivalence():
    """Full session log converted to MIDI equals cmd_render output, 10 seeds."""
    rng = random.Random(0xACCE55)
    for seed in [rng.randrange(2**32) for _ in range(10)]:
        mgr = SessionManager()
        sid = mgr.create_session(SONG_PATH, CURVES_PATH, seed=seed)
        session = mgr.get(sid)
        log = mgr.play_through(sid)
        online = log_to_midi(session.graph, mgr.registry, log)
        offline = render_song(session.graph, mgr.registry, session.curves)
        assert online == offline, f"offline/online mismatch at seed {seed}"


def test_c03_valence_brightness():
    """Mean major-family fraction: valence 0.9 minus valence 0.1 >= 0.5; < 30 s."""
    start = time.monotonic()

    def mean_brightness(valence: float) -> float:
        total = 0.0
        for seed in range(200):
            prog = generate_progression(
                EmotionSample(0.5, valence, 0.0), KEY, 8, seed
            )
            qualities = [slot.chord.quality for slot in prog.slots]
            total += sum(q in MAJOR_FAMILY for q in qualities) / len(qualities)
        return total / 200

    gap = mean_brightness(0.9) - mean_brightness(0.1)
    elapsed = time.monotonic() - start
    assert gap >= 0.5, f"brightness gap {gap:.3f} < 0.5"
    assert elapsed < 30.0, f"brightness criterion took {elapsed:.2f}s"


def test_c04_energy_density_and_tempo():
    """tempo_map exact at 0/0.5/1; onset density strictly rises with energy."""
    assert tempo_map(0.0) == 70
    assert tempo_map(0.5) == 115
    assert tempo_map(1.0) == 160

    def mean_onsets(energy: float) -> float:
        return sum(
            len(generate_rhythm(EmotionSample(energy, 0.5, 0.5), SIG, seed))
            for seed in range(200)
        ) / 200

    low, high = mean_onsets(0.1), mean_onsets(0.9)
    assert high > low, f"density not monotone: {high:.2f} <= {low:.2f}"


def test_c05_complexity_gating_exact():
    """No 7ths at complexity 0.3, no 9ths at 0.6, sixteenth grid only above 0.7."""
    sevenths = {q for q in ChordQuality if len(q.intervals) == 4}
    ninths = {q for q in ChordQuality if len(q.intervals) == 5}
    for seed in range(1000):
        for valence in (0.1, 0.9):
            low = generate_progression(EmotionSample(0.5, valence, 0.3), KEY, 2, seed)
            assert not {s.chord.quality for s in low.slots} & (sevenths | ninths)
            mid = generate_progression(EmotionSample(0.5, valence, 0.6), KEY, 2, seed)
            assert not {s.chord.quality for s in mid.slots} & ninths

    # Grid selection: sixteenth cells exist only above 0.7.
    assert grid_cell_ticks(0.3) == 480
    assert grid_cell_ticks(0.7) == 240
    assert grid_cell_ticks(0.701) == 120
    # Position-level corollary: at complexity <= 0.7 nothing lands finer than
    # a syncopated eighth (multiples of 120); pure sixteenth-grid cells (an
    # onset every 120 ticks) require complexity above 0.7.
    for seed in range(1000):
        for c in (0.3, 0.6, 0.7):
            pattern = generate_rhythm(EmotionSample(0.9, 0.5, c), SIG, seed)
            for onset in pattern:
                assert onset.start % 120 == 0
            if c < 0.4:
                assert all(o.start % 240 == 0 for o in pattern)
    seen_sixteenth_spacing = False
    for seed in range(300):
        pattern = generate_rhythm(EmotionSample(1.0, 0.5, 0.75), SIG, seed)
        starts = [o.start for o in pattern]
        if any(b - a == 120 for a, b in zip(starts, starts[1:])):
            seen_sixteenth_spacing = True
            break
    assert seen_sixteenth_spacing, "sixteenth grid never materialized above 0.7"


def _brute_force_has_cycle(edges) -> bool:
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)

    state: dict[str, int] = {}

    def visit(n) -> bool:
        state[n] = 1
        for m in adj.get(n, ()):
            if state.get(m) == 1:
                return True
            if state.get(m) is None and visit(m):
                return True
        state[n] = 2
        return False

    return any(state.get(n) is None and visit(n) for n in adj)


def _brute_force_orders(node_ids, edges):
    orders = []
    for perm in itertools.permutations(node_ids):
        pos = {nid: i for i, nid in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b in edges):
            orders.append(list(perm))
    return orders


def test_c06_type_safety_and_acyclicity():
    """10,000 random connect sequences stay typed and acyclic; topo matches brute force."""
    kinds = REGISTRY.kinds()
    rng = random.Random(1234)
    for _ in range(10_000):
        graph = SongGraph(length_bars=2)
        for i in range(rng.randrange(2, 5)):
            graph = add_node(graph, NodeInstance(f"n{i}", rng.choice(kinds)), REGISTRY)
        outputs = [
            (n.id, p.name) for n in graph.nodes for p in REGISTRY.get(n.kind).outputs
        ]
        inputs = [
            (n.id, p.name) for n in graph.nodes for p in REGISTRY.get(n.kind).inputs
        ]
        if not outputs or not inputs:
            continue
        for _ in range(rng.randrange(0, 6)):
            src, dst = rng.choice(outputs), rng.choice(inputs)
            try:
                graph = connect(
                    graph, Edge(src[0], src[1], dst[0], dst[1]), REGISTRY
                )
            except (TypeMismatchError, PortOccupiedError, CycleError, UnknownEndpointError):
                continue
        for e in graph.edges:
            src_type = REGISTRY.get(graph.node(e.from_node).kind).output(e.from_port).type
            dst_type = REGISTRY.get(graph.node(e.to_node).kind).input(e.to_port).type
            assert src_type is dst_type
        assert not _brute_force_has_cycle(
            [(e.from_node, e.to_node) for e in graph.edges]
        )
        topo_order(graph)  # never raises on accepted graphs

    # Deterministic corpus of <= 6-node graphs checked against enumeration.
    corpus = [
        ([], []),
        (["a"], []),
        (["a", "b"], []),
        (["a", "b", "c"], [("a", "b"), ("b", "c")]),
        (["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
        (["a", "b", "c", "d", "e"], [("a", "c"), ("b", "c"), ("c", "d"), ("c", "e")]),
        (
            ["a", "b", "c", "d", "e", "f"],
            [("a", "b"), ("b", "c"), ("d", "e"), ("e", "f"), ("a", "f")],
        ),
        (["x", "m", "a"], [("x", "a"), ("m", "a")]),
    ]
    for node_ids, shape in corpus:
        nodes = tuple(NodeInstance(nid, "countermelody") for nid in node_ids)
        edges = tuple(Edge(a, "notes", b, "lead") for a, b in shape)
        graph = SongGraph(nodes=nodes, edges=edges, length_bars=1)
        valid = _brute_force_orders(node_ids, shape)
        got = topo_order(graph)
        assert got in valid
        assert got == min(valid), "tie-break must pick the lexicographic minimum"


def test_c07_midi_validity():
    """100 random renders round-trip via the independent parser; VLQ fuzz 10^5."""
    rng = random.Random(20260811)
    for case in range(100):
        seed = rng.randrange(2**32)
        curves = constant_set(rng.random(), rng.random(), rng.random())
        graph = load_song(SONG_PATH).with_seed(seed).with_length(rng.randrange(1, 5))
        data = render_song(graph, REGISTRY, curves)
        parsed = parse_smf(data)
        sequences = evaluate_song(graph, REGISTRY, curves)
        channels = {"lead_out": 0, "counter_out": 1}
        expected = sorted(
            (channels[sink], e.pitch.midi_number, e.start, e.duration, e.velocity)
            for sink, seq in sequences.items()
            for e in seq
        )
        assert note_multiset(parsed) == expected, f"multiset mismatch in case {case}"

    for value in rng.sample(range(0, 1 << 28), 100_000):
        assert decode_vlq_bytes(encode_vlq(value)) == value


def test_c08_live_edit_semantics():
    """Valence edit while bar 5 is scheduled: identical through 5, differs from 6+."""
    for seed in range(20):
        mgr = SessionManager()
        frozen = mgr.create_session(SONG_PATH, CURVES_PATH, seed=seed)
        edited = mgr.create_session(SONG_PATH, CURVES_PATH, seed=seed)
        logs = {frozen: [], edited: []}
        for sid in (frozen, edited):
            mgr.transport_control(sid, "play")
            for _ in range(5):
                logs[sid].extend(mgr.advance(sid))  # bars 0-4 played, 5 scheduled
        ack = mgr.apply_curve_edit(
            edited, "valence", InsertPoint(ControlPoint(0.5101, 1.0))
        )
        assert ack.effective_bar == 6
        for sid in (frozen, edited):
            session = mgr.get(sid)
            while session.transport is TransportState.PLAYING:
                logs[sid].extend(mgr.advance(sid))
        cut = 6 * SIG.bar_ticks
        pre = [
            [e for e in stream_notes(logs[sid]) if e.tick < cut]
            for sid in (frozen, edited)
        ]
        post = [
            [e for e in stream_notes(logs[sid]) if e.tick >= cut]
            for sid in (frozen, edited)
        ]
        assert pre[0] == pre[1], f"bars before the edit diverged at seed {seed}"
        assert post[0] != post[1], f"edit had no effect from bar 6 at seed {seed}"
        early = [b for b in logs[edited] if isinstance(b, BarBoundary) and b.bar_index <= 5]
        frozen_early = [b for b in logs[frozen] if isinstance(b, BarBoundary) and b.bar_index <= 5]
        assert early == frozen_early


def test_c09_latent_corners():
    """latent_melody at each corner reproduces that corpus motif exactly."""
    corpus = load_corpus(LIBRARY.parent / "corpus", SIG)
    for index, (x, y) in enumerate(CORNER_COORDS):
        out = latent_melody(corpus, LatentCoord(x, y))
        assert out == corpus.motifs[index], f"corner {index} not exact"


def test_c10_chord_conditioning():
    """Every countermelody pitch class is a tone of the concurrent chord, 1000 cases."""
    rng = random.Random(99)
    for case in range(1000):
        emotion = EmotionSample(rng.random(), rng.random(), rng.random())
        prog = generate_progression(emotion, KEY, 1, rng.randrange(2**32))
        events = []
        cursor = 0
        for _ in range(rng.randrange(1, 9)):
            cursor += rng.randrange(0, 400)
            if cursor > SIG.bar_ticks - 60:
                break
            duration = rng.randrange(60, SIG.bar_ticks - cursor + 1)
            events.append(
                NoteEvent(cursor, Pitch(rng.randrange(30, 100)), duration, 90)
            )
            cursor += 1
        if not events:
            events.append(NoteEvent(0, Pitch(60), 480, 90))
        lead = NoteSequence(tuple(events))
        counter = countermelody(lead, prog, emotion, rng.randrange(2**32))
        for note in counter:
            chord = prog.chord_at_tick(note.start)
            classes = {pc.value for pc in chord.pitch_classes}
            assert note.pitch.midi_number % 12 in classes, (
                f"case {case}: {note.pitch.midi_number} not in {chord}"
            )
