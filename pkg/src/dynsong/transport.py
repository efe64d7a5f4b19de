"""Live playback sessions: bar-ahead scheduling plus mid-song curve edits.

A session owns a graph, an editable curve set and a one-bar schedule buffer.
Each call to `advance` plays the current bar and schedules the next one, so
a curve edit can never touch a bar the listener is already hearing: edits
take effect at the first unscheduled bar, and the acknowledgment says which
bar that is.

This layer is deliberately clock-free. `advance` is explicit; wall-clock
pacing (sleeping one bar's worth of seconds between advances) lives in the
server. That keeps every test here exact and instant.
"""

from __future__ import annotations

import os
import tempfile
import uuid
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .blocks import default_registry
from .curves import CurveEdit, CurveSet, EmotionSample, apply_edit, load_curves, save_curves
from .generators import tempo_map
from .graph import (
    BlockRegistry,
    Diagnostic,
    SongGraph,
    bar_time,
    evaluate_bar,
    load_song,
    sink_input_for,
    sink_nodes,
    validate_graph,
)
from .midi import TempoEvent, TrackPlan, write_midi
from .theory import PPQ, NoteEvent, NoteSequence, Pitch, bar_to_tick


class TransportState(str, Enum):
    STOPPED = "stopped"
    PLAYING = "playing"
    PAUSED = "paused"


# -- stream events ------------------------------------------------------------


@dataclass(frozen=True)
class NoteOn:
    tick: int
    channel: int
    pitch: int
    velocity: int


@dataclass(frozen=True)
class NoteOff:
    tick: int
    channel: int
    pitch: int


@dataclass(frozen=True)
class BarBoundary:
    bar_index: int
    emotion: EmotionSample
    bpm: int


@dataclass(frozen=True)
class TransportChanged:
    state: TransportState


StreamEvent = Union[NoteOn, NoteOff, BarBoundary, TransportChanged]


def event_to_dict(event: StreamEvent) -> dict:
    if isinstance(event, NoteOn):
        return {
            "type": "note_on",
            "tick": event.tick,
            "channel": event.channel,
            "pitch": event.pitch,
            "velocity": event.velocity,
        }
    if isinstance(event, NoteOff):
        return {
            "type": "note_off",
            "tick": event.tick,
            "channel": event.channel,
            "pitch": event.pitch,
        }
    if isinstance(event, BarBoundary):
        return {
            "type": "bar_boundary",
            "bar_index": event.bar_index,
            "emotion": {
                "energy": event.emotion.energy,
                "valence": event.emotion.valence,
                "complexity": event.emotion.complexity,
            },
            "bpm": event.bpm,
        }
    if isinstance(event, TransportChanged):
        return {"type": "transport_changed", "state": event.state.value}
    raise TypeError(f"not a stream event: {event!r}")


@dataclass(frozen=True)
class Ack:
    effective_bar: int


# -- errors --------------------------------------------------------------------


class TransportError(Exception):
    pass


class SessionNotFoundError(TransportError):
    pass


class SeekOutOfRangeError(TransportError):
    pass


class TransportStateError(TransportError):
    pass


class ValidationError(TransportError):
    """A song failed validation; `diagnostics` carries the details."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


# -- sessions --------------------------------------------------------------------


@dataclass(frozen=True)
class ScheduledBar:
    boundary: BarBoundary
    notes: tuple[StreamEvent, ...]


@dataclass
class Session:
    id: str
    graph: SongGraph
    curves: CurveSet
    registry: BlockRegistry
    curves_path: Optional[Path] = None
    transport: TransportState = TransportState.STOPPED
    playhead_bar: int = 0
    buffer: dict[int, ScheduledBar] = field(default_factory=dict)

    @property
    def next_unscheduled_bar(self) -> int:
        """First bar a curve edit can still influence."""
        return max(self.buffer) + 1 if self.buffer else self.playhead_bar

    @property
    def scheduled_horizon_bar(self) -> int:
        return max(self.buffer) if self.buffer else self.playhead_bar


def _note_sort_key(event: StreamEvent) -> tuple:
    on = isinstance(event, NoteOn)
    return (event.tick, 1 if on else 0, event.pitch, event.channel)


class SessionManager:
    """All live sessions. Each session is a single-writer state machine: the
    caller (the server's per-session loop, or a test) serializes commands."""

    def __init__(self, registry: Optional[BlockRegistry] = None):
        self.registry = registry if registry is not None else default_registry()
        self._sessions: dict[str, Session] = {}

    # -- lifecycle ---------------------------------------------------------

    def create_session(
        self,
        song_path: Union[str, Path],
        curves_path: Union[str, Path],
        seed: Optional[int] = None,
    ) -> str:
        graph = load_song(song_path)
        curves = load_curves(curves_path)
        return self.create_from(graph, curves, seed=seed, curves_path=Path(curves_path))

    def create_from(
        self,
        graph: SongGraph,
        curves: CurveSet,
        seed: Optional[int] = None,
        curves_path: Optional[Path] = None,
    ) -> str:
        if seed is not None:
            graph = graph.with_seed(seed)
        diagnostics = validate_graph(graph, self.registry)
        if diagnostics:
            raise ValidationError(diagnostics)
        session_id = uuid.uuid4().hex[:12]
        self._sessions[session_id] = Session(
            id=session_id,
            graph=graph,
            curves=curves,
            registry=self.registry,
            curves_path=curves_path,
        )
        return session_id

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFoundError(f"no session {session_id!r}") from None

    def close(self, session_id: str) -> None:
        self._sessions.pop(session_id, None)

    # -- curve edits --------------------------------------------------------

    def apply_curve_edit(self, session_id: str, label: str, op: CurveEdit) -> Ack:
        """Apply an edit to the session's curves; already-scheduled bars keep
        the curve state they were evaluated with."""
        session = self.get(session_id)
        edited = apply_edit(session.curves.curve(label), op)
        session.curves = session.curves.with_curve(edited)
        return Ack(effective_bar=session.next_unscheduled_bar)

    # -- transport -----------------------------------------------------------

    def transport_control(
        self, session_id: str, command: str, bar: Optional[int] = None
    ) -> TransportChanged:
        session = self.get(session_id)
        length = session.graph.length_bars
        if command == "play":
            if session.playhead_bar >= length:
                session.transport = TransportState.STOPPED
            else:
                session.transport = TransportState.PLAYING
        elif command == "pause":
            session.transport = TransportState.PAUSED
        elif command == "stop":
            session.transport = TransportState.STOPPED
            session.playhead_bar = 0
            session.buffer.clear()
        elif command == "seek":
            if bar is None or not 0 <= bar <= length:
                raise SeekOutOfRangeError(f"seek target {bar!r} outside [0, {length}]")
            session.playhead_bar = bar
            session.buffer.clear()
        else:
            raise TransportError(f"unknown transport command {command!r}")
        return TransportChanged(session.transport)

    def advance(self, session_id: str) -> list[StreamEvent]:
        """Play one bar: emit its events, then schedule the next bar so it is
        pinned before any further curve edits."""
        session = self.get(session_id)
        if session.transport is not TransportState.PLAYING:
            raise TransportStateError("advance requires a playing session")
        bar = session.playhead_bar
        if bar not in session.buffer:
            session.buffer[bar] = self._schedule(session, bar)
        scheduled = session.buffer[bar]
        events: list[StreamEvent] = [scheduled.boundary, *scheduled.notes]
        nxt = bar + 1
        if nxt < session.graph.length_bars and nxt not in session.buffer:
            session.buffer[nxt] = self._schedule(session, nxt)
        session.playhead_bar = nxt
        if session.playhead_bar >= session.graph.length_bars:
            session.transport = TransportState.STOPPED
            events.append(TransportChanged(TransportState.STOPPED))
        return events

    def play_through(self, session_id: str) -> list[StreamEvent]:
        """Play from the current position to the end; the full event log."""
        log = [self.transport_control(session_id, "play")]
        session = self.get(session_id)
        while session.transport is TransportState.PLAYING:
            log.extend(self.advance(session_id))
        return log

    def _schedule(self, session: Session, bar: int) -> ScheduledBar:
        emotion = session.curves.sample(bar_time(bar, session.graph.length_bars))
        values = evaluate_bar(session.graph, session.registry, bar, emotion)
        notes: list[StreamEvent] = []
        for sink in sink_nodes(session.graph, session.registry):
            source = sink_input_for(session.graph, session.registry, sink)
            if source is None:
                continue
            params = session.registry.get(sink.kind).resolve_params(sink.param_values)
            channel = int(params["channel"])
            for ev in values[source].payload.events:
                notes.append(NoteOn(ev.start, channel, ev.pitch.midi_number, ev.velocity))
                notes.append(NoteOff(ev.end, channel, ev.pitch.midi_number))
        notes.sort(key=_note_sort_key)
        boundary = BarBoundary(bar, emotion, tempo_map(emotion.energy))
        return ScheduledBar(boundary, tuple(notes))

    # -- persistence -----------------------------------------------------------

    def save_curves(self, session_id: str) -> Path:
        """Write the session's curves back to their file, atomically."""
        session = self.get(session_id)
        if session.curves_path is None:
            raise TransportError("session has no curve file to save to")
        target = session.curves_path
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
        try:
            os.close(fd)
            save_curves(session.curves, tmp)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target


# ---------------------------------------------------------------------------
# Log conversion (offline/online equivalence)
# ---------------------------------------------------------------------------


def log_to_midi(
    graph: SongGraph, registry: BlockRegistry, log: list[StreamEvent]
) -> bytes:
    """Rebuild the MIDI file a full playback log describes.

    Sinks must sit on distinct channels (the stream identifies notes by
    channel only). With no curve edits during playback this reproduces the
    offline render byte for byte.
    """
    sinks = sink_nodes(graph, registry)
    plans: dict[int, tuple[str, int, list[NoteEvent]]] = {}
    order: list[int] = []
    for sink in sinks:
        params = registry.get(sink.kind).resolve_params(sink.param_values)
        channel = int(params["channel"])
        if channel in plans:
            raise ValueError(f"two sinks share channel {channel}; log is ambiguous")
        plans[channel] = (str(params["name"]), int(params["program"]), [])
        order.append(channel)

    open_notes: dict[tuple[int, int], list[tuple[int, int]]] = {}
    tempi: list[TempoEvent] = []
    last_bpm: Optional[int] = None
    for event in log:
        if isinstance(event, BarBoundary):
            if event.bpm != last_bpm:
                tempi.append(
                    TempoEvent(bar_to_tick(event.bar_index, graph.time_sig), float(event.bpm))
                )
                last_bpm = event.bpm
        elif isinstance(event, NoteOn):
            open_notes.setdefault((event.channel, event.pitch), []).append(
                (event.tick, event.velocity)
            )
        elif isinstance(event, NoteOff):
            stack = open_notes.get((event.channel, event.pitch))
            if stack:
                start, velocity = stack.pop(0)
                if event.tick > start and event.channel in plans:
                    plans[event.channel][2].append(
                        NoteEvent(start, Pitch(event.pitch), event.tick - start, velocity)
                    )
    tracks = [
        TrackPlan(plans[ch][0], ch, plans[ch][1], NoteSequence(tuple(plans[ch][2])))
        for ch in order
    ]
    return write_midi(tracks, tempi, PPQ)
