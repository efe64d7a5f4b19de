"""Listener-editable parameter curves: energy, valence and complexity.

A curve is a piecewise-linear function over normalized song time [0, 1].
The engine samples the whole set once per bar; the player edits points live.
Curves are immutable: every edit returns a new value, which is what lets the
transport keep already-scheduled bars pinned to the curve state they saw.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Union

CURVE_LABELS = ("energy", "valence", "complexity")

# Two control points closer than this in time are considered colliding.
TIME_EPSILON = 1e-9


class CurveError(ValueError):
    """Base for curve construction/edit failures."""


class DegenerateCurveError(CurveError):
    """Removing the last remaining control point."""


class DuplicateTimeError(CurveError):
    """A control point's time collides with an existing point."""


class CurveFileError(CurveError):
    """A curve file failed validation; `errors` lists every offence found."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else float(x)


@dataclass(frozen=True, order=True)
class ControlPoint:
    """A (time, value) pair, both clamped into [0, 1]."""

    time: float
    value: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "time", _clamp01(self.time))
        object.__setattr__(self, "value", _clamp01(self.value))


@dataclass(frozen=True)
class Curve:
    label: str
    points: tuple[ControlPoint, ...]

    def __post_init__(self) -> None:
        if self.label not in CURVE_LABELS:
            raise CurveError(f"unknown curve label {self.label!r}")
        pts = tuple(self.points)
        if not pts:
            raise DegenerateCurveError(f"curve {self.label!r} has no points")
        for a, b in zip(pts, pts[1:]):
            if b.time < a.time:
                raise CurveError(f"curve {self.label!r}: points not sorted by time")
            if b.time - a.time <= TIME_EPSILON:
                raise DuplicateTimeError(
                    f"curve {self.label!r}: point times {a.time} and {b.time} collide"
                )
        object.__setattr__(self, "points", pts)

    # -- sampling -----------------------------------------------------------

    def sample(self, t: float) -> float:
        """Piecewise-linear value at normalized time t.

        Holds the first/last value outside the defined range, so any real t
        is legal and the result is always within [0, 1].
        """
        pts = self.points
        t = _clamp01(t)
        if t <= pts[0].time:
            return pts[0].value
        if t >= pts[-1].time:
            return pts[-1].value
        hi = bisect_right([p.time for p in pts], t)
        a, b = pts[hi - 1], pts[hi]
        frac = (t - a.time) / (b.time - a.time)
        return _clamp01(a.value + (b.value - a.value) * frac)

    # -- edits (each returns a new Curve) -----------------------------------

    def insert(self, point: ControlPoint) -> "Curve":
        self._reject_collision(point.time, exclude=None)
        return Curve(self.label, tuple(sorted(self.points + (point,))))

    def move(self, index: int, point: ControlPoint) -> "Curve":
        self._check_index(index)
        self._reject_collision(point.time, exclude=index)
        pts = list(self.points)
        pts[index] = point
        return Curve(self.label, tuple(sorted(pts)))

    def remove(self, index: int) -> "Curve":
        self._check_index(index)
        if len(self.points) == 1:
            raise DegenerateCurveError(f"cannot remove the last point of {self.label!r}")
        pts = self.points[:index] + self.points[index + 1 :]
        return Curve(self.label, pts)

    def _check_index(self, index: int) -> None:
        if not 0 <= index < len(self.points):
            raise IndexError(f"point index {index} out of range for {self.label!r}")

    def _reject_collision(self, time: float, exclude: int | None) -> None:
        time = _clamp01(time)
        for i, p in enumerate(self.points):
            if i != exclude and abs(p.time - time) <= TIME_EPSILON:
                raise DuplicateTimeError(
                    f"curve {self.label!r} already has a point at t={p.time}"
                )


# ---------------------------------------------------------------------------
# Edit operations as data (the shape curve_edit messages travel in)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InsertPoint:
    point: ControlPoint
    kind = "insert"


@dataclass(frozen=True)
class MovePoint:
    index: int
    point: ControlPoint
    kind = "move"


@dataclass(frozen=True)
class RemovePoint:
    index: int
    kind = "remove"


CurveEdit = Union[InsertPoint, MovePoint, RemovePoint]


def apply_edit(curve: Curve, op: CurveEdit) -> Curve:
    if isinstance(op, InsertPoint):
        return curve.insert(op.point)
    if isinstance(op, MovePoint):
        return curve.move(op.index, op.point)
    if isinstance(op, RemovePoint):
        return curve.remove(op.index)
    raise TypeError(f"unknown curve edit {op!r}")


def edit_from_dict(data: dict) -> CurveEdit:
    """Parse the wire form of an edit op: {"kind": ..., "index": ..., "point": [t, v]}."""
    kind = data.get("kind")
    if kind == "insert":
        t, v = data["point"]
        return InsertPoint(ControlPoint(float(t), float(v)))
    if kind == "move":
        t, v = data["point"]
        return MovePoint(int(data["index"]), ControlPoint(float(t), float(v)))
    if kind == "remove":
        return RemovePoint(int(data["index"]))
    raise CurveError(f"unknown edit kind {kind!r}")


def edit_to_dict(op: CurveEdit) -> dict:
    if isinstance(op, InsertPoint):
        return {"kind": "insert", "point": [op.point.time, op.point.value]}
    if isinstance(op, MovePoint):
        return {"kind": "move", "index": op.index, "point": [op.point.time, op.point.value]}
    if isinstance(op, RemovePoint):
        return {"kind": "remove", "index": op.index}
    raise TypeError(f"unknown curve edit {op!r}")


# ---------------------------------------------------------------------------
# The full curve set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmotionSample:
    """One bar's worth of emotional input, each component in [0, 1]."""

    energy: float
    valence: float
    complexity: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "energy", _clamp01(self.energy))
        object.__setattr__(self, "valence", _clamp01(self.valence))
        object.__setattr__(self, "complexity", _clamp01(self.complexity))


@dataclass(frozen=True)
class CurveSet:
    energy: Curve
    valence: Curve
    complexity: Curve

    def __post_init__(self) -> None:
        for label in CURVE_LABELS:
            curve = getattr(self, label)
            if curve.label != label:
                raise CurveError(f"curve labelled {curve.label!r} in the {label!r} slot")

    def sample(self, t: float) -> EmotionSample:
        return EmotionSample(
            energy=self.energy.sample(t),
            valence=self.valence.sample(t),
            complexity=self.complexity.sample(t),
        )

    def curve(self, label: str) -> Curve:
        if label not in CURVE_LABELS:
            raise CurveError(f"unknown curve label {label!r}")
        return getattr(self, label)

    def with_curve(self, curve: Curve) -> "CurveSet":
        return CurveSet(**{**{l: getattr(self, l) for l in CURVE_LABELS}, curve.label: curve})


def sample(curve: Curve, t: float) -> float:
    return curve.sample(t)


def sample_set(curves: CurveSet, t: float) -> EmotionSample:
    return curves.sample(t)


def constant_curve(label: str, value: float) -> Curve:
    return Curve(label, (ControlPoint(0.0, value),))


def constant_set(energy: float, valence: float, complexity: float) -> CurveSet:
    return CurveSet(
        energy=constant_curve("energy", energy),
        valence=constant_curve("valence", valence),
        complexity=constant_curve("complexity", complexity),
    )


# ---------------------------------------------------------------------------
# Curve file I/O
# ---------------------------------------------------------------------------
# Schema: {"energy": [[t, v], ...], "valence": [...], "complexity": [...]}
# with times strictly ascending within each list.


def curveset_to_dict(curves: CurveSet) -> dict:
    return {
        label: [[p.time, p.value] for p in curves.curve(label).points]
        for label in CURVE_LABELS
    }


def curveset_from_dict(data: dict) -> CurveSet:
    if not isinstance(data, dict):
        raise CurveFileError(["curve document must be a JSON object"])
    errors: list[str] = []
    built: dict[str, Curve] = {}
    for label in CURVE_LABELS:
        raw = data.get(label)
        if raw is None:
            errors.append(f"{label}: missing curve")
            continue
        if not isinstance(raw, list) or not raw:
            errors.append(f"{label}: expected a non-empty list of [time, value] pairs")
            continue
        points: list[ControlPoint] = []
        ok = True
        for i, pair in enumerate(raw):
            if (
                not isinstance(pair, (list, tuple))
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                errors.append(f"{label}[{i}]: expected a [time, value] number pair")
                ok = False
                continue
            t, v = float(pair[0]), float(pair[1])
            if not 0.0 <= t <= 1.0 or not 0.0 <= v <= 1.0:
                errors.append(f"{label}[{i}]: time and value must lie in [0, 1]")
                ok = False
                continue
            points.append(ControlPoint(t, v))
        for i, (a, b) in enumerate(zip(points, points[1:])):
            if b.time - a.time <= TIME_EPSILON:
                errors.append(f"{label}[{i + 1}]: time {b.time} not strictly after {a.time}")
                ok = False
        if ok:
            built[label] = Curve(label, tuple(points))
    unknown = set(data) - set(CURVE_LABELS)
    for name in sorted(unknown):
        errors.append(f"{name}: unknown curve label")
    if errors:
        raise CurveFileError(errors)
    return CurveSet(**built)


def load_curves(path: Union[str, Path]) -> CurveSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CurveFileError([f"{path}: {exc.strerror or exc}"]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurveFileError([f"{path}: line {exc.lineno}: {exc.msg}"]) from exc
    return curveset_from_dict(data)


def save_curves(curves: CurveSet, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(curveset_to_dict(curves), indent=2) + "\n")
