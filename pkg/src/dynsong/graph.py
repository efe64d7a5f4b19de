"""Typed dataflow graph of music blocks, evaluated once per bar.

A song is a DAG of block instances. Ports are typed (chords, notes, rhythm,
or a scalar parameter) and edges are only accepted between equal types, into
unoccupied inputs, and when they keep the graph acyclic — so a graph that
exists is a graph that can be evaluated.

Evaluation is pure: a (graph, curves, master seed, bar index) tuple always
produces the same values. Per-node randomness comes from
``stable_seed(master_seed, node_id, bar_index)``; see the seeding module and
the song-schema notes in the README.
"""

from __future__ import annotations

import enum
import heapq
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence, Union

from .curves import CurveSet, EmotionSample
from .generators import ChordProgression, RhythmPattern
from .seeding import stable_seed
from .theory import NoteSequence, TimeSignature, bar_to_tick


class GraphError(Exception):
    """Base for graph construction and evaluation failures."""


class UnknownBlockKindError(GraphError):
    def __init__(self, kind: str, known: Sequence[str]):
        super().__init__(f"unknown block kind {kind!r}; known kinds: {', '.join(known)}")
        self.kind = kind
        self.known = tuple(known)


class DuplicateNodeError(GraphError):
    pass


class UnknownEndpointError(GraphError):
    pass


class TypeMismatchError(GraphError):
    pass


class PortOccupiedError(GraphError):
    pass


class CycleError(GraphError):
    pass


class ParamError(GraphError):
    pass


class MissingRequiredInputError(GraphError):
    pass


class EvaluationError(GraphError):
    def __init__(self, message: str, bar: int):
        super().__init__(message)
        self.bar = bar


class SongFormatError(GraphError):
    """A song file failed structural parsing; `errors` lists what was wrong."""

    def __init__(self, errors: Sequence[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


# ---------------------------------------------------------------------------
# Ports, params, descriptors
# ---------------------------------------------------------------------------


class PortType(enum.Enum):
    CHORDS = "Chords"
    NOTES = "Notes"
    RHYTHM = "Rhythm"
    PARAM = "Param"

    @property
    def colour(self) -> str:
        return _PORT_COLOURS[self]


_PORT_COLOURS = {
    PortType.CHORDS: "#e8a33d",
    PortType.NOTES: "#4f9fe0",
    PortType.RHYTHM: "#a45fd0",
    PortType.PARAM: "#57c468",
}

_PAYLOAD_TYPES = {
    PortType.CHORDS: ChordProgression,
    PortType.NOTES: NoteSequence,
    PortType.RHYTHM: RhythmPattern,
    PortType.PARAM: float,
}


class PortDirection(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class PortSpec:
    name: str
    type: PortType
    direction: PortDirection
    required: bool = False


def in_port(name: str, type_: PortType, required: bool = False) -> PortSpec:
    return PortSpec(name, type_, PortDirection.INPUT, required)


def out_port(name: str, type_: PortType) -> PortSpec:
    return PortSpec(name, type_, PortDirection.OUTPUT)


@dataclass(frozen=True)
class ParamSpec:
    """A block parameter: kind is one of number/integer/enum/text."""

    kind: str
    default: object
    minimum: Optional[float] = None
    maximum: Optional[float] = None
    choices: Optional[tuple[str, ...]] = None
    check: Optional[Callable[[object], Optional[str]]] = None

    def validate(self, name: str, value: object):
        """Normalize `value` or raise ParamError."""
        if self.kind == "number":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParamError(f"param {name!r} expects a number, got {value!r}")
            value = float(value)
        elif self.kind == "integer":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParamError(f"param {name!r} expects an integer, got {value!r}")
        elif self.kind == "enum":
            if value not in (self.choices or ()):
                raise ParamError(
                    f"param {name!r} expects one of {self.choices}, got {value!r}"
                )
        elif self.kind == "text":
            if not isinstance(value, str):
                raise ParamError(f"param {name!r} expects text, got {value!r}")
        else:  # pragma: no cover - descriptor construction bug
            raise ParamError(f"param {name!r} has unknown kind {self.kind!r}")
        if self.minimum is not None and value < self.minimum:
            raise ParamError(f"param {name!r} must be >= {self.minimum}, got {value!r}")
        if self.maximum is not None and value > self.maximum:
            raise ParamError(f"param {name!r} must be <= {self.maximum}, got {value!r}")
        if self.check is not None:
            problem = self.check(value)
            if problem:
                raise ParamError(f"param {name!r}: {problem}")
        return value


@dataclass(frozen=True)
class EvalContext:
    """Everything a block may depend on when evaluating one bar.

    `rng_seed` is always ``stable_seed(master_seed, node_id, bar_index)``;
    `seed_for_bar` lets blocks that replay history (the progression walk)
    derive their own seeds for other bars without breaking that contract.
    """

    bar_index: int
    emotion: EmotionSample
    rng_seed: int
    node_id: str
    master_seed: int
    time_sig: TimeSignature
    total_bars: int

    def seed_for_bar(self, bar_index: int) -> int:
        return stable_seed(self.master_seed, self.node_id, bar_index)


BlockFn = Callable[[Mapping[str, object], Mapping[str, object], EvalContext], Mapping[str, object]]


@dataclass(frozen=True)
class BlockDescriptor:
    kind: str
    inputs: tuple[PortSpec, ...]
    outputs: tuple[PortSpec, ...]
    params: Mapping[str, ParamSpec]
    evaluate: BlockFn
    description: str = ""
    is_sink: bool = False

    def __post_init__(self) -> None:
        for ports in (self.inputs, self.outputs):
            names = [p.name for p in ports]
            if len(names) != len(set(names)):
                raise GraphError(f"block {self.kind!r} repeats a port name")

    def input(self, name: str) -> Optional[PortSpec]:
        return next((p for p in self.inputs if p.name == name), None)

    def output(self, name: str) -> Optional[PortSpec]:
        return next((p for p in self.outputs if p.name == name), None)

    def resolve_params(self, overrides: Mapping[str, object]) -> dict[str, object]:
        resolved = {name: spec.default for name, spec in self.params.items()}
        for name, value in overrides.items():
            spec = self.params.get(name)
            if spec is None:
                raise ParamError(f"block {self.kind!r} has no param {name!r}")
            resolved[name] = spec.validate(name, value)
        return resolved

    def to_dict(self) -> dict:
        def port(p: PortSpec) -> dict:
            return {
                "name": p.name,
                "type": p.type.value,
                "colour": p.type.colour,
                "required": p.required,
            }

        return {
            "kind": self.kind,
            "description": self.description,
            "sink": self.is_sink,
            "inputs": [port(p) for p in self.inputs],
            "outputs": [port(p) for p in self.outputs],
            "params": {
                name: {
                    "kind": spec.kind,
                    "default": spec.default,
                    **({"minimum": spec.minimum} if spec.minimum is not None else {}),
                    **({"maximum": spec.maximum} if spec.maximum is not None else {}),
                    **({"choices": list(spec.choices)} if spec.choices else {}),
                }
                for name, spec in self.params.items()
            },
        }


class BlockRegistry:
    """The compiled-in set of available block kinds."""

    def __init__(self) -> None:
        self._descriptors: dict[str, BlockDescriptor] = {}

    def register(self, descriptor: BlockDescriptor) -> None:
        if descriptor.kind in self._descriptors:
            raise GraphError(f"block kind {descriptor.kind!r} registered twice")
        self._descriptors[descriptor.kind] = descriptor

    def get(self, kind: str) -> BlockDescriptor:
        try:
            return self._descriptors[kind]
        except KeyError:
            raise UnknownBlockKindError(kind, self.kinds()) from None

    def __contains__(self, kind: str) -> bool:
        return kind in self._descriptors

    def kinds(self) -> list[str]:
        return sorted(self._descriptors)

    def descriptors(self) -> list[BlockDescriptor]:
        return [self._descriptors[k] for k in self.kinds()]


# ---------------------------------------------------------------------------
# Graph values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PortValue:
    """A typed value travelling along an edge; tag always matches the port type."""

    kind: PortType
    payload: object

    def __post_init__(self) -> None:
        expected = _PAYLOAD_TYPES[self.kind]
        if not isinstance(self.payload, expected):
            raise GraphError(
                f"{self.kind.value} port carrying {type(self.payload).__name__}"
            )

    @staticmethod
    def chords(progression: ChordProgression) -> "PortValue":
        return PortValue(PortType.CHORDS, progression)

    @staticmethod
    def notes(sequence: NoteSequence) -> "PortValue":
        return PortValue(PortType.NOTES, sequence)

    @staticmethod
    def rhythm(pattern: RhythmPattern) -> "PortValue":
        return PortValue(PortType.RHYTHM, pattern)

    @staticmethod
    def param(value: float) -> "PortValue":
        return PortValue(PortType.PARAM, float(value))


@dataclass(frozen=True)
class NodeInstance:
    id: str
    kind: str
    param_values: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    from_node: str
    from_port: str
    to_node: str
    to_port: str

    def __str__(self) -> str:
        return f"{self.from_node}.{self.from_port} -> {self.to_node}.{self.to_port}"


@dataclass(frozen=True)
class SongGraph:
    nodes: tuple[NodeInstance, ...] = ()
    edges: tuple[Edge, ...] = ()
    length_bars: int = 8
    time_sig: TimeSignature = TimeSignature(4, 4)
    master_seed: int = 0
    title: str = ""

    def __post_init__(self) -> None:
        if self.length_bars < 1:
            raise GraphError("length_bars must be >= 1")
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    def node(self, node_id: str) -> Optional[NodeInstance]:
        return next((n for n in self.nodes if n.id == node_id), None)

    def incoming(self) -> dict[tuple[str, str], tuple[str, str]]:
        """Map of (node, input port) -> (node, output port) feeding it."""
        return {(e.to_node, e.to_port): (e.from_node, e.from_port) for e in self.edges}

    def with_seed(self, master_seed: int) -> "SongGraph":
        return replace(self, master_seed=master_seed)

    def with_length(self, length_bars: int) -> "SongGraph":
        return replace(self, length_bars=length_bars)


def add_node(
    graph: SongGraph, node: NodeInstance, registry: BlockRegistry
) -> SongGraph:
    """Return the graph with `node` added; params are validated immediately."""
    if graph.node(node.id) is not None:
        raise DuplicateNodeError(f"node id {node.id!r} already present")
    descriptor = registry.get(node.kind)
    descriptor.resolve_params(node.param_values)
    return replace(graph, nodes=graph.nodes + (node,))


def _would_cycle(graph: SongGraph, edge: Edge) -> bool:
    """True if `edge` closes a path back from its destination to its source."""
    adjacency: dict[str, set[str]] = {}
    for e in graph.edges + (edge,):
        adjacency.setdefault(e.from_node, set()).add(e.to_node)
    stack = [edge.to_node]
    seen = set()
    while stack:
        nid = stack.pop()
        if nid == edge.from_node:
            return True
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(adjacency.get(nid, ()))
    return False


def connect(graph: SongGraph, edge: Edge, registry: BlockRegistry) -> SongGraph:
    """Return the graph with `edge` added, or raise:

    UnknownEndpointError  - either endpoint node/port does not exist
    TypeMismatchError     - the port types differ
    PortOccupiedError     - the input port already has an edge
    CycleError            - the edge would make the graph cyclic
    """
    src_node = graph.node(edge.from_node)
    dst_node = graph.node(edge.to_node)
    if src_node is None:
        raise UnknownEndpointError(f"no node {edge.from_node!r}")
    if dst_node is None:
        raise UnknownEndpointError(f"no node {edge.to_node!r}")
    src_port = registry.get(src_node.kind).output(edge.from_port)
    dst_port = registry.get(dst_node.kind).input(edge.to_port)
    if src_port is None:
        raise UnknownEndpointError(
            f"node {edge.from_node!r} ({src_node.kind}) has no output {edge.from_port!r}"
        )
    if dst_port is None:
        raise UnknownEndpointError(
            f"node {edge.to_node!r} ({dst_node.kind}) has no input {edge.to_port!r}"
        )
    if src_port.type is not dst_port.type:
        raise TypeMismatchError(
            f"cannot connect {src_port.type.value} output to "
            f"{dst_port.type.value} input ({edge})"
        )
    if any(e.to_node == edge.to_node and e.to_port == edge.to_port for e in graph.edges):
        raise PortOccupiedError(f"input {edge.to_node}.{edge.to_port} already connected")
    if _would_cycle(graph, edge):
        raise CycleError(f"edge {edge} would create a cycle")
    return replace(graph, edges=graph.edges + (edge,))


def topo_order(graph: SongGraph) -> list[str]:
    """Dependency order of node ids, ties broken lexicographically.

    The tie-break makes the order unique, which keeps golden files stable.
    """
    indegree = {n.id: 0 for n in graph.nodes}
    adjacency: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    for e in graph.edges:
        if e.from_node in adjacency and e.to_node in indegree:
            adjacency[e.from_node].append(e.to_node)
            indegree[e.to_node] += 1
    ready = [nid for nid, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        nid = heapq.heappop(ready)
        order.append(nid)
        for succ in adjacency[nid]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)
    if len(order) != len(indegree):
        raise CycleError("graph contains a cycle")
    return order


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    node_id: Optional[str] = None
    edge: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.node_id is not None:
            out["node_id"] = self.node_id
        if self.edge is not None:
            out["edge"] = self.edge
        return out

    def __str__(self) -> str:
        where = f" [{self.node_id or self.edge}]" if (self.node_id or self.edge) else ""
        return f"{self.code}{where}: {self.message}"


def validate_graph(graph: SongGraph, registry: BlockRegistry) -> list[Diagnostic]:
    """Every problem in the graph, as data; an empty list means evaluable.

    Loaded files bypass the construction-time checks in connect/add_node, so
    this re-checks everything those enforce plus required-input coverage.
    """
    diags: list[Diagnostic] = []
    seen_ids: set[str] = set()
    for node in graph.nodes:
        if node.id in seen_ids:
            diags.append(
                Diagnostic("duplicate_node_id", f"node id {node.id!r} used twice", node.id)
            )
            continue
        seen_ids.add(node.id)
        if node.kind not in registry:
            diags.append(
                Diagnostic(
                    "unknown_block_kind",
                    f"unknown block kind {node.kind!r}; known kinds: "
                    f"{', '.join(registry.kinds())}",
                    node.id,
                )
            )
            continue
        try:
            registry.get(node.kind).resolve_params(node.param_values)
        except ParamError as exc:
            diags.append(Diagnostic("bad_param", str(exc), node.id))

    occupied: set[tuple[str, str]] = set()
    for edge in graph.edges:
        label = str(edge)
        src = graph.node(edge.from_node)
        dst = graph.node(edge.to_node)
        if src is None or dst is None:
            missing = edge.from_node if src is None else edge.to_node
            diags.append(
                Diagnostic("unknown_endpoint", f"no node {missing!r}", edge=label)
            )
            continue
        if src.kind not in registry or dst.kind not in registry:
            continue  # already reported as unknown_block_kind
        src_port = registry.get(src.kind).output(edge.from_port)
        dst_port = registry.get(dst.kind).input(edge.to_port)
        if src_port is None or dst_port is None:
            port = edge.from_port if src_port is None else edge.to_port
            diags.append(
                Diagnostic("unknown_endpoint", f"no port {port!r}", edge=label)
            )
            continue
        if src_port.type is not dst_port.type:
            diags.append(
                Diagnostic(
                    "type_mismatch",
                    f"{src_port.type.value} output wired to {dst_port.type.value} input",
                    edge=label,
                )
            )
        key = (edge.to_node, edge.to_port)
        if key in occupied:
            diags.append(
                Diagnostic(
                    "port_occupied",
                    f"input {edge.to_node}.{edge.to_port} has more than one edge",
                    edge=label,
                )
            )
        occupied.add(key)

    try:
        topo_order(graph)
    except CycleError:
        diags.append(Diagnostic("cycle", "graph contains a cycle"))

    incoming = {(e.to_node, e.to_port) for e in graph.edges}
    for node in graph.nodes:
        if node.kind not in registry:
            continue
        for port in registry.get(node.kind).inputs:
            if port.required and (node.id, port.name) not in incoming:
                diags.append(
                    Diagnostic(
                        "missing_required_input",
                        f"required input {node.id}.{port.name} "
                        f"({port.type.value}) is not connected",
                        node.id,
                    )
                )
    return diags


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate_bar(
    graph: SongGraph,
    registry: BlockRegistry,
    bar_index: int,
    emotion: EmotionSample,
) -> dict[tuple[str, str], PortValue]:
    """Evaluate every node for one bar.

    Blocks see and produce bar-relative ticks; the returned map has all Notes
    payloads shifted to the bar's absolute tick offset. Rhythm and chord
    values stay bar-relative (they are intra-bar patterns by definition).
    """
    incoming = graph.incoming()
    values: dict[tuple[str, str], PortValue] = {}
    for nid in topo_order(graph):
        node = graph.node(nid)
        descriptor = registry.get(node.kind)
        params = descriptor.resolve_params(node.param_values)
        inputs: dict[str, object] = {}
        for port in descriptor.inputs:
            source = incoming.get((nid, port.name))
            if source is not None:
                inputs[port.name] = values[source].payload
            elif port.type is PortType.PARAM and port.name in params:
                inputs[port.name] = float(params[port.name])
            elif port.required:
                raise MissingRequiredInputError(
                    f"required input {nid}.{port.name} has no edge and no default"
                )
            else:
                inputs[port.name] = None
        ctx = EvalContext(
            bar_index=bar_index,
            emotion=emotion,
            rng_seed=stable_seed(graph.master_seed, nid, bar_index),
            node_id=nid,
            master_seed=graph.master_seed,
            time_sig=graph.time_sig,
            total_bars=graph.length_bars,
        )
        produced = descriptor.evaluate(inputs, params, ctx)
        for port in descriptor.outputs:
            if port.name not in produced:
                raise GraphError(
                    f"block {node.kind!r} did not produce output {port.name!r}"
                )
            values[(nid, port.name)] = PortValue(port.type, produced[port.name])
    offset = bar_to_tick(bar_index, graph.time_sig)
    if offset == 0:
        return values
    return {
        key: PortValue(PortType.NOTES, pv.payload.shifted(offset))
        if pv.kind is PortType.NOTES
        else pv
        for key, pv in values.items()
    }


def bar_time(bar_index: int, length_bars: int) -> float:
    """Normalized curve time of a bar: bar b of an L-bar song is b/(L-1)."""
    return bar_index / max(length_bars - 1, 1)


def sink_nodes(graph: SongGraph, registry: BlockRegistry) -> list[NodeInstance]:
    return sorted(
        (n for n in graph.nodes if n.kind in registry and registry.get(n.kind).is_sink),
        key=lambda n: n.id,
    )


def sink_input_for(
    graph: SongGraph, registry: BlockRegistry, sink: NodeInstance
) -> Optional[tuple[str, str]]:
    """The (node, port) feeding a sink's first Notes input, if wired."""
    descriptor = registry.get(sink.kind)
    incoming = graph.incoming()
    for port in descriptor.inputs:
        if port.type is PortType.NOTES:
            return incoming.get((sink.id, port.name))
    return None


def evaluate_song(
    graph: SongGraph, registry: BlockRegistry, curves: CurveSet
) -> dict[str, NoteSequence]:
    """Full-song evaluation: one NoteSequence per sink node, absolute ticks."""
    collected: dict[str, list] = {s.id: [] for s in sink_nodes(graph, registry)}
    for bar in range(graph.length_bars):
        emotion = curves.sample(bar_time(bar, graph.length_bars))
        try:
            bar_values = evaluate_bar(graph, registry, bar, emotion)
        except GraphError as exc:
            raise EvaluationError(f"bar {bar}: {exc}", bar=bar) from exc
        for sink in sink_nodes(graph, registry):
            source = sink_input_for(graph, registry, sink)
            if source is not None:
                collected[sink.id].extend(bar_values[source].payload.events)
    return {sid: NoteSequence(tuple(events)) for sid, events in collected.items()}


# ---------------------------------------------------------------------------
# Song file I/O
# ---------------------------------------------------------------------------

SONG_SCHEMA_VERSION = 1


def song_to_dict(graph: SongGraph) -> dict:
    return {
        "schema_version": SONG_SCHEMA_VERSION,
        "title": graph.title,
        "length_bars": graph.length_bars,
        "time_sig": [graph.time_sig.numerator, graph.time_sig.denominator],
        "master_seed": graph.master_seed,
        "nodes": [
            {"id": n.id, "kind": n.kind, "params": dict(n.param_values)}
            for n in graph.nodes
        ],
        "edges": [
            {"from": f"{e.from_node}.{e.from_port}", "to": f"{e.to_node}.{e.to_port}"}
            for e in graph.edges
        ],
    }


def _parse_endpoint(text: object, side: str, index: int, errors: list[str]):
    if not isinstance(text, str) or text.count(".") != 1:
        errors.append(f"edges[{index}].{side}: expected 'nodeId.portName', got {text!r}")
        return None
    node, port = text.split(".")
    if not node or not port:
        errors.append(f"edges[{index}].{side}: empty node or port in {text!r}")
        return None
    return node, port


def song_from_dict(data: dict) -> SongGraph:
    """Build a SongGraph from its JSON form.

    Structural problems (wrong types, bad endpoint syntax) raise
    SongFormatError; semantic problems (unknown kinds, dangling edges) are
    left for validate_graph so they can be reported as diagnostics.
    """
    errors: list[str] = []
    if not isinstance(data, dict):
        raise SongFormatError(["song document must be a JSON object"])
    version = data.get("schema_version")
    if version != SONG_SCHEMA_VERSION:
        errors.append(f"schema_version: expected {SONG_SCHEMA_VERSION}, got {version!r}")
    length = data.get("length_bars")
    if not isinstance(length, int) or isinstance(length, bool) or length < 1:
        errors.append(f"length_bars: expected a positive integer, got {length!r}")
        length = 1
    raw_sig = data.get("time_sig", [4, 4])
    try:
        time_sig = TimeSignature(int(raw_sig[0]), int(raw_sig[1]))
    except Exception:
        errors.append(f"time_sig: expected [numerator, denominator], got {raw_sig!r}")
        time_sig = TimeSignature(4, 4)
    seed = data.get("master_seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        errors.append(f"master_seed: expected an integer, got {seed!r}")
        seed = 0
    title = data.get("title", "")
    if not isinstance(title, str):
        errors.append("title: expected a string")
        title = ""

    nodes: list[NodeInstance] = []
    for i, raw in enumerate(data.get("nodes", [])):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str) or not isinstance(raw.get("kind"), str):
            errors.append(f"nodes[{i}]: expected an object with string 'id' and 'kind'")
            continue
        params = raw.get("params", {})
        if not isinstance(params, dict):
            errors.append(f"nodes[{i}].params: expected an object")
            params = {}
        nodes.append(NodeInstance(raw["id"], raw["kind"], params))

    edges: list[Edge] = []
    for i, raw in enumerate(data.get("edges", [])):
        if not isinstance(raw, dict):
            errors.append(f"edges[{i}]: expected an object with 'from' and 'to'")
            continue
        src = _parse_endpoint(raw.get("from"), "from", i, errors)
        dst = _parse_endpoint(raw.get("to"), "to", i, errors)
        if src and dst:
            edges.append(Edge(src[0], src[1], dst[0], dst[1]))

    if errors:
        raise SongFormatError(errors)
    return SongGraph(
        nodes=tuple(nodes),
        edges=tuple(edges),
        length_bars=length,
        time_sig=time_sig,
        master_seed=seed,
        title=title,
    )


def load_song(path: Union[str, Path]) -> SongGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SongFormatError([f"{path}: {exc.strerror or exc}"]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SongFormatError([f"{path}: line {exc.lineno}: {exc.msg}"]) from exc
    return song_from_dict(data)


def save_song(graph: SongGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(song_to_dict(graph), indent=2) + "\n")
