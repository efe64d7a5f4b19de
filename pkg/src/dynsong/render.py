"""Offline rendering: a song graph plus curves down to SMF bytes.

The tempo track is driven straight off the energy curve (one tempo event per
bar where the mapped BPM changes), and each midi_sink node becomes one track,
ordered by node id. The transport's live stream is built from the same
pieces, which is what makes offline and online output byte-comparable.
"""

from __future__ import annotations

from .curves import CurveSet
from .generators import tempo_map
from .graph import BlockRegistry, SongGraph, bar_time, evaluate_song, sink_nodes
from .midi import TempoEvent, TrackPlan, write_midi
from .theory import PPQ, bar_to_tick


def tempo_events(graph: SongGraph, curves: CurveSet) -> list[TempoEvent]:
    """One TempoEvent per bar whose BPM differs from the previous bar's."""
    events: list[TempoEvent] = []
    last_bpm = None
    for bar in range(graph.length_bars):
        bpm = tempo_map(curves.sample(bar_time(bar, graph.length_bars)).energy)
        if bpm != last_bpm:
            events.append(TempoEvent(bar_to_tick(bar, graph.time_sig), float(bpm)))
            last_bpm = bpm
    return events


def assemble_tracks(
    graph: SongGraph, registry: BlockRegistry, curves: CurveSet
) -> list[TrackPlan]:
    """Evaluate the song and build one TrackPlan per midi_sink, by node id."""
    sequences = evaluate_song(graph, registry, curves)
    tracks = []
    for sink in sink_nodes(graph, registry):
        params = registry.get(sink.kind).resolve_params(sink.param_values)
        tracks.append(
            TrackPlan(
                name=str(params["name"]),
                channel=int(params["channel"]),
                program=int(params["program"]),
                events=sequences[sink.id],
            )
        )
    return tracks


def render_song(graph: SongGraph, registry: BlockRegistry, curves: CurveSet) -> bytes:
    return write_midi(assemble_tracks(graph, registry, curves), tempo_events(graph, curves), PPQ)
