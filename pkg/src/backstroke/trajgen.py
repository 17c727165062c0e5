"""Stroke-trajectory generation from a fitted back curve.

A stroke runs top to bottom: waypoints are laid out on the curve at fixed y
increments (1.0 mm by default), each carrying the end-effector pitch that
keeps the effector plane tangent to the back, and timestamps for a constant
travel speed along the polyline.

Pitch is the single controlled orientation angle, a rotation about the
frame's x axis: pitch_i = arctan((z_i - z_{i-1}) / (y_i - y_{i-1})). The
first waypoint has no predecessor and reuses pitch_1 so the motion starts
smoothly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curvefit import CURVE_KEYS, CubicCurve, curve_from_kv, curve_to_kv, eval_cubic
from .errors import (
    DegeneratePathError,
    DomainTooShortError,
    FormatError,
    FrameError,
    InvalidInputError,
    OrderingError,
    UnsupportedTransformError,
)
from .geometry import Point3, RigidTransform, apply_transform

DEFAULT_STEP_M = 0.001  # 1.0 mm waypoint spacing

# Stroke speed conditions, meters/second.
SLOW_SPEED_MPS = 0.028
MEDIUM_SPEED_MPS = 0.085

CAMERA_FRAME = "camera"
ROBOT_FRAME = "robot"
_FRAMES = (CAMERA_FRAME, ROBOT_FRAME)

# A camera->robot transform must keep the stroke plane: its rotation has to
# map the camera x axis onto the robot x axis within this tolerance, or a
# single pitch angle cannot represent the orientation.
X_AXIS_TOL = 1e-6

_HALF_PI = math.pi / 2
_CSV_HEADER = "index,time_s,frame,x_m,y_m,z_m,pitch_rad"


@dataclass(frozen=True)
class Waypoint:
    """One via point: position (meters), pitch (radians), time (seconds)."""

    position: Point3
    pitch: float
    time: float

    def __post_init__(self):
        object.__setattr__(self, "pitch", float(self.pitch))
        object.__setattr__(self, "time", float(self.time))
        if not math.isfinite(self.pitch) or abs(self.pitch) >= _HALF_PI:
            raise InvalidInputError(f"pitch {self.pitch} outside (-pi/2, pi/2)")
        if not math.isfinite(self.time) or self.time < 0:
            raise InvalidInputError(f"waypoint time {self.time} must be >= 0")


@dataclass(frozen=True)
class Trajectory:
    """Ordered timestamped waypoints tagged with their coordinate frame.

    speed is the constant travel speed the timestamps encode. curve is the
    generating back-shape fit, kept for provenance; it stays expressed in
    the camera frame even after a robot-frame transform.
    """

    waypoints: tuple[Waypoint, ...]
    frame: str
    speed: float
    curve: CubicCurve | None = None

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(self.waypoints))
        object.__setattr__(self, "speed", float(self.speed))
        if self.frame not in _FRAMES:
            raise FrameError(f"unknown frame {self.frame!r}, expected one of {_FRAMES}")
        if len(self.waypoints) < 2:
            raise InvalidInputError("a trajectory needs at least 2 waypoints")
        if not (math.isfinite(self.speed) and self.speed > 0):
            raise InvalidInputError(f"speed {self.speed} must be positive")
        times = [wp.time for wp in self.waypoints]
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise InvalidInputError("waypoint times must be strictly increasing")
        if self.frame == CAMERA_FRAME:
            ys = [wp.position.y for wp in self.waypoints]
            if any(y1 <= y0 for y0, y1 in zip(ys, ys[1:])):
                raise OrderingError("camera-frame waypoint y must be strictly increasing")

    def positions(self) -> list[Point3]:
        return [wp.position for wp in self.waypoints]

    @property
    def duration(self) -> float:
        return self.waypoints[-1].time


def generate_waypoints(curve: CubicCurve, step: float = DEFAULT_STEP_M, x_fixed: float = 0.0) -> list[Point3]:
    """Camera-frame positions (x_fixed, y_i, curve(y_i)) at fixed y steps.

    y runs from the curve's y_min in increments of `step`; the final point
    lands exactly on y_max, appended as a short last segment when the grid
    does not reach it.
    """
    if not (math.isfinite(step) and step > 0):
        raise InvalidInputError(f"step {step} must be positive")
    if not math.isfinite(x_fixed):
        raise InvalidInputError("x_fixed must be finite")
    span = curve.y_max - curve.y_min
    if span < 2 * step:
        raise DomainTooShortError(f"domain {span} m is shorter than two steps of {step} m")
    # The 1e-9 nudge keeps a grid that lands on y_max (up to float rounding)
    # from losing its last point to floor().
    n = int(math.floor(span / step + 1e-9))
    ys = [curve.y_min + i * step for i in range(n + 1)]
    if ys[-1] >= curve.y_max - 1e-12:
        ys[-1] = curve.y_max
    else:
        ys.append(curve.y_max)
    return [Point3(x_fixed, y, eval_cubic(curve, y)) for y in ys]


def compute_pitch(points: list[Point3]) -> list[float]:
    """Backward-difference pitch angle at each point, radians.

    pitch_i = arctan(dz / dy) over the segment ending at point i; the first
    point reuses the first computed value.
    """
    if len(points) < 2:
        raise InvalidInputError("need at least 2 points to compute pitch")
    pitches = [0.0]
    for prev, cur in zip(points, points[1:]):
        dy = cur.y - prev.y
        if dy <= 0:
            raise OrderingError("point y must be strictly increasing for pitch computation")
        pitches.append(math.atan((cur.z - prev.z) / dy))
    pitches[0] = pitches[1]
    return pitches


def _arc_times(points: list[Point3], speed: float) -> list[float]:
    """Cumulative polyline arc length through each point, divided by speed."""
    if not (math.isfinite(speed) and speed > 0):
        raise InvalidInputError(f"speed {speed} must be positive")
    total = 0.0
    cum = [0.0]
    for prev, cur in zip(points, points[1:]):
        total += math.dist((prev.x, prev.y, prev.z), (cur.x, cur.y, cur.z))
        cum.append(total)
    if total <= 0:
        raise DegeneratePathError("zero-length path cannot be time-parameterized")
    return [c / speed for c in cum]


def generate_trajectory(
    curve: CubicCurve,
    speed: float,
    step: float = DEFAULT_STEP_M,
    x_fixed: float = 0.0,
) -> Trajectory:
    """Full camera-frame stroke: waypoints, pitches, constant-speed times."""
    points = generate_waypoints(curve, step=step, x_fixed=x_fixed)
    pitches = compute_pitch(points)
    times = _arc_times(points, speed)
    waypoints = tuple(
        Waypoint(position=p, pitch=a, time=t) for p, a, t in zip(points, pitches, times)
    )
    return Trajectory(waypoints=waypoints, frame=CAMERA_FRAME, speed=speed, curve=curve)


def timestamp(traj: Trajectory, speed: float) -> Trajectory:
    """Re-time an existing trajectory for a new constant speed.

    Halving the speed exactly doubles every timestamp; positions, pitches,
    frame, and provenance are untouched.
    """
    times = _arc_times(traj.positions(), speed)
    waypoints = tuple(
        Waypoint(position=wp.position, pitch=wp.pitch, time=t)
        for wp, t in zip(traj.waypoints, times)
    )
    return Trajectory(waypoints=waypoints, frame=traj.frame, speed=speed, curve=traj.curve)


def to_robot_frame(traj: Trajectory, t: RigidTransform) -> Trajectory:
    """Re-express a camera-frame trajectory in the robot frame.

    Positions go through the rigid transform. Pitch, the rotation about the
    frame's x axis, changes by the transform's own rotation angle about x;
    that is only well defined when the rotation maps the camera x axis onto
    the robot x axis, which is checked up front.

    Raises
    ------
    FrameError
        If the trajectory is not in the camera frame.
    UnsupportedTransformError
        If the rotation does not preserve the stroke plane, or a
        transformed pitch falls outside (-pi/2, pi/2).
    """
    if traj.frame != CAMERA_FRAME:
        raise FrameError(f"expected a camera-frame trajectory, got frame {traj.frame!r}")
    rot = t.rotation
    if max(abs(rot[0, 0] - 1.0), abs(rot[1, 0]), abs(rot[2, 0])) > X_AXIS_TOL:
        raise UnsupportedTransformError(
            "rotation does not map the camera x axis to the robot x axis; "
            "a single pitch angle cannot represent the orientation"
        )
    # Rotation angle about x; for stroke-plane-preserving rotations the
    # lower-right 2x2 block is a plane rotation by this angle.
    phi = math.atan2(rot[2, 1], rot[1, 1])
    waypoints = []
    for wp in traj.waypoints:
        # Pitch angles that differ by pi describe the same effector plane,
        # so fold into (-pi/2, pi/2]; this keeps e.g. a 180 degree flip
        # about x from leaving the representable range.
        pitch = math.remainder(wp.pitch + phi, math.pi)
        if abs(pitch) >= _HALF_PI:
            raise UnsupportedTransformError(
                f"transformed pitch {pitch} rad falls outside (-pi/2, pi/2)"
            )
        waypoints.append(
            Waypoint(position=apply_transform(t, wp.position), pitch=pitch, time=wp.time)
        )
    return Trajectory(waypoints=tuple(waypoints), frame=ROBOT_FRAME, speed=traj.speed, curve=traj.curve)


def write_trajectory(traj: Trajectory, path) -> None:
    """Write a trajectory as CSV with key = value provenance comments.

    Floats are written with repr() so a read back reproduces them exactly.
    """
    lines = []
    if traj.curve is not None:
        for key, value in curve_to_kv(traj.curve).items():
            lines.append(f"# {key} = {value!r}")
    lines.append(f"# speed_mps = {traj.speed!r}")
    lines.append(_CSV_HEADER)
    for i, wp in enumerate(traj.waypoints):
        p = wp.position
        lines.append(
            f"{i},{wp.time!r},{traj.frame},{p.x!r},{p.y!r},{p.z!r},{wp.pitch!r}"
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trajectory(path) -> Trajectory:
    """Read a trajectory written by :func:`write_trajectory`."""
    meta: dict[str, str] = {}
    rows: list[str] = []
    header_seen = False
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if not header_seen:
                if line != _CSV_HEADER:
                    raise FormatError(f"{path}:{lineno}: expected header {_CSV_HEADER!r}")
                header_seen = True
                continue
            rows.append(line)
    if not header_seen:
        raise FormatError(f"{path}: missing trajectory header")
    if "speed_mps" not in meta:
        raise FormatError(f"{path}: missing speed_mps comment")

    curve = None
    if all(key in meta for key in CURVE_KEYS):
        curve = curve_from_kv(meta, source=str(path))

    waypoints = []
    frames = set()
    for n, row in enumerate(rows):
        fields = row.split(",")
        if len(fields) != 7:
            raise FormatError(f"{path}: row {n} has {len(fields)} fields, expected 7")
        try:
            index = int(fields[0])
            time = float(fields[1])
            x, y, z, pitch = (float(f) for f in fields[3:7])
        except ValueError:
            raise FormatError(f"{path}: row {n} has a malformed number") from None
        if index != n:
            raise FormatError(f"{path}: row index {index} out of sequence, expected {n}")
        frames.add(fields[2])
        waypoints.append(Waypoint(position=Point3(x, y, z), pitch=pitch, time=time))
    if len(frames) > 1:
        raise FormatError(f"{path}: mixed frames {sorted(frames)} in one trajectory")
    if not waypoints:
        raise FormatError(f"{path}: no waypoint rows")
    try:
        speed = float(meta["speed_mps"])
    except ValueError:
        raise FormatError(f"{path}: malformed speed_mps") from None
    return Trajectory(waypoints=tuple(waypoints), frame=frames.pop(), speed=speed, curve=curve)
