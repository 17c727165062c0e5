"""Normal-mismatch evaluation of stroke trajectories.

The quality metric is the angle between the back-surface normal B and the
end-effector plane normal E at each waypoint: arccos(B . E), reported in
degrees, 0 meaning perfect surface following. Both normals live in the +z
hemisphere by convention; a mismatch larger than 90 degrees therefore means
the two hemispheres disagree and is reported as-is, never silently flipped.

Reference statistics measured on a physical rig (a robot arm and two human
demonstrators stroking an instrumented mannequin back, markers at 5.0 cm
spacing over a 20 cm stroke) ship as constants and are echoed into every
report for side-by-side comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curvefit import CubicCurve, derivative
from .depthcam import SyntheticScene
from .errors import (
    CoverageError,
    EmptyTraceError,
    FormatError,
    FrameError,
    InvalidInputError,
    OrderingError,
)
from .geometry import UnitVec3, angle_between
from .kvconfig import kv_float, kv_int, read_kv, write_kv
from .trajgen import CAMERA_FRAME, Trajectory

REFERENCE_ROBOT_MEAN_DEG = 5.97
REFERENCE_ROBOT_MAX_DEG = 8.26
REFERENCE_HUMAN_MEAN_DEG = (4.78, 5.52)
REFERENCE_HUMAN_MAX_DEG = (7.30, 8.13)

# Waypoints may sit a hair outside the reference domain from float grid
# arithmetic; anything beyond this is a genuine coverage violation.
DOMAIN_TOL_M = 1e-9

_TRACE_HEADER = "y_m,Bx,By,Bz,Ex,Ey,Ez"
_STATS_KEYS = ("mean_deg", "max_deg", "count", "per_point_deg")
_REFERENCE_ENTRIES = {
    "reference_robot_mean_deg": REFERENCE_ROBOT_MEAN_DEG,
    "reference_robot_max_deg": REFERENCE_ROBOT_MAX_DEG,
    "reference_human1_mean_deg": REFERENCE_HUMAN_MEAN_DEG[0],
    "reference_human1_max_deg": REFERENCE_HUMAN_MAX_DEG[0],
    "reference_human2_mean_deg": REFERENCE_HUMAN_MEAN_DEG[1],
    "reference_human2_max_deg": REFERENCE_HUMAN_MAX_DEG[1],
}


def surface_normal(curve: CubicCurve, y: float) -> UnitVec3:
    """Unit normal of the profile curve at y, in the y-z plane.

    normalize((0, -z'(y), 1)): orthogonal to the tangent (0, 1, z') and in
    the +z hemisphere.
    """
    slope = derivative(curve, float(y))
    return UnitVec3.normalized(0.0, -slope, 1.0)


def scene_normal(scene: SyntheticScene, x: float, y: float) -> UnitVec3:
    """Analytic heightfield normal of a synthetic scene at (x, y).

    Includes the lateral curvature term, so with lateral != 0 the normal
    leaves the y-z plane and a pitch-only effector cannot fully match it.
    """
    dz_dx = 2.0 * scene.lateral * float(x)
    dz_dy = (3.0 * scene.a * y + 2.0 * scene.b) * float(y) + scene.c
    return UnitVec3.normalized(-dz_dx, -dz_dy, 1.0)


def effector_normal(pitch: float) -> UnitVec3:
    """Unit normal of an effector plane pitched about the x axis.

    (0, -sin(pitch), cos(pitch)); equals the surface normal exactly when
    pitch = arctan(z').
    """
    pitch = float(pitch)
    if not math.isfinite(pitch):
        raise InvalidInputError("pitch must be finite")
    return UnitVec3(0.0, -math.sin(pitch), math.cos(pitch))


@dataclass(frozen=True)
class ErrorStats:
    """Per-point normal-mismatch angles with their mean and maximum, degrees."""

    per_point: tuple[float, ...]
    mean: float
    max: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "per_point", tuple(float(v) for v in self.per_point))
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "max", float(self.max))
        object.__setattr__(self, "count", int(self.count))
        if self.count != len(self.per_point) or self.count < 1:
            raise InvalidInputError(f"count {self.count} does not match {len(self.per_point)} angles")
        if any(not (0.0 <= v <= 180.0) for v in self.per_point):
            raise InvalidInputError("angles must lie in [0, 180] degrees")
        if self.mean > self.max:
            raise InvalidInputError(f"mean {self.mean} exceeds max {self.max}")

    @classmethod
    def from_angles(cls, angles) -> "ErrorStats":
        angles = tuple(float(v) for v in angles)
        if not angles:
            raise EmptyTraceError("no angles to aggregate")
        return cls(
            per_point=angles,
            mean=math.fsum(angles) / len(angles),
            max=max(angles),
            count=len(angles),
        )


def evaluate_trajectory(traj: Trajectory, reference) -> ErrorStats:
    """Normal-mismatch statistics of a trajectory against a reference surface.

    The reference is either the CubicCurve the trajectory should follow or
    a SyntheticScene ground truth. Per waypoint the error is the angle
    between the reference surface normal at the waypoint and the effector
    normal implied by the waypoint pitch.

    Raises
    ------
    FrameError
        If the trajectory is not in the camera frame (the reference is).
    CoverageError
        If a waypoint y leaves a curve reference's fit domain.
    """
    if traj.frame != CAMERA_FRAME:
        raise FrameError(f"evaluation needs a camera-frame trajectory, got {traj.frame!r}")
    angles = []
    if isinstance(reference, CubicCurve):
        for wp in traj.waypoints:
            y = wp.position.y
            if y < reference.y_min - DOMAIN_TOL_M or y > reference.y_max + DOMAIN_TOL_M:
                raise CoverageError(
                    f"waypoint y = {y} outside curve domain [{reference.y_min}, {reference.y_max}]"
                )
            angles.append(angle_between(surface_normal(reference, y), effector_normal(wp.pitch)))
    elif isinstance(reference, SyntheticScene):
        for wp in traj.waypoints:
            b = scene_normal(reference, wp.position.x, wp.position.y)
            angles.append(angle_between(b, effector_normal(wp.pitch)))
    else:
        raise TypeError(f"reference must be CubicCurve or SyntheticScene, got {type(reference).__name__}")
    return ErrorStats.from_angles(angles)


@dataclass(frozen=True)
class TraceEntry:
    """One recorded sample: stroke y plus paired surface/effector normals."""

    y: float
    surface: UnitVec3
    effector: UnitVec3

    def __post_init__(self):
        object.__setattr__(self, "y", float(self.y))
        if not math.isfinite(self.y):
            raise InvalidInputError("trace y must be finite")


@dataclass(frozen=True)
class NormalTrace:
    """Ordered (y, B, E) samples, e.g. from a motion-capture recording."""

    entries: tuple[TraceEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        ys = [e.y for e in self.entries]
        if any(y1 <= y0 for y0, y1 in zip(ys, ys[1:])):
            raise OrderingError("trace y values must be strictly increasing")

    def __len__(self) -> int:
        return len(self.entries)


def trace_stats(trace: NormalTrace) -> ErrorStats:
    """Per-entry angle between B and E, aggregated."""
    if len(trace) == 0:
        raise EmptyTraceError("trace has no entries")
    return ErrorStats.from_angles(
        angle_between(e.surface, e.effector) for e in trace.entries
    )


def compare_traces(trace_a: NormalTrace, trace_b: NormalTrace) -> tuple[ErrorStats, ErrorStats]:
    """Evaluate two recorded traces by the same metric, independently.

    No cross-trace alignment is performed; each trace is scored against
    itself (B against E), mirroring how a robot recording and a human
    recording are each reduced to mean/max mismatch before comparison.
    """
    return trace_stats(trace_a), trace_stats(trace_b)


def write_trace(trace: NormalTrace, path) -> None:
    """Write a trace as CSV; floats use repr() for a lossless round trip."""
    lines = [_TRACE_HEADER]
    for e in trace.entries:
        b, ef = e.surface, e.effector
        lines.append(
            f"{e.y!r},{b.x!r},{b.y!r},{b.z!r},{ef.x!r},{ef.y!r},{ef.z!r}"
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace(path) -> NormalTrace:
    """Read a trace written by :func:`write_trace`."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != _TRACE_HEADER:
        raise FormatError(f"{path}: expected trace header {_TRACE_HEADER!r}")
    entries = []
    for n, row in enumerate(lines[1:]):
        fields = row.split(",")
        if len(fields) != 7:
            raise FormatError(f"{path}: row {n} has {len(fields)} fields, expected 7")
        try:
            y, bx, by, bz, ex, ey, ez = (float(f) for f in fields)
            entries.append(TraceEntry(y=y, surface=UnitVec3(bx, by, bz), effector=UnitVec3(ex, ey, ez)))
        except (ValueError, InvalidInputError) as exc:
            raise FormatError(f"{path}: row {n}: {exc}") from None
    return NormalTrace(entries=tuple(entries))


def write_report(stats: ErrorStats, path, context: dict[str, object] | None = None) -> None:
    """Write an evaluation report as a key = value file.

    The report carries the statistics, the full per-point series, the rig
    reference values, and any caller-supplied generation parameters.
    """
    entries: dict[str, object] = {
        "mean_deg": stats.mean,
        "max_deg": stats.max,
        "count": stats.count,
        "per_point_deg": ",".join(repr(v) for v in stats.per_point),
    }
    entries.update(_REFERENCE_ENTRIES)
    for key, value in (context or {}).items():
        if key in entries:
            raise InvalidInputError(f"context key {key!r} collides with a report field")
        entries[key] = value
    write_kv(path, entries, header="stroke evaluation report")


def read_report(path) -> tuple[ErrorStats, dict[str, str]]:
    """Read a report back into its statistics and remaining raw entries."""
    raw = read_kv(path)
    src = str(path)
    try:
        per_point = tuple(float(tok) for tok in raw["per_point_deg"].split(","))
    except KeyError:
        raise FormatError(f"{src}: missing per_point_deg") from None
    except ValueError:
        raise FormatError(f"{src}: malformed per_point_deg") from None
    stats = ErrorStats(
        per_point=per_point,
        mean=kv_float(raw, "mean_deg", src),
        max=kv_float(raw, "max_deg", src),
        count=kv_int(raw, "count", src),
    )
    extras = {k: v for k, v in raw.items() if k not in _STATS_KEYS}
    return stats, extras
