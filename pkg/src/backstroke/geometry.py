"""Value types and core operations for 3D geometry.

Conventions follow a depth camera looking at a surface: x is image-horizontal,
y is image-vertical, z is depth along the optical axis. Internal units are
meters and radians; angles returned to callers are in degrees.

All types are immutable values and all operations are pure, so everything here
is safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

UNIT_NORM_TOL = 1e-9
ROTATION_TOL = 1e-9


@dataclass(frozen=True)
class Point3:
    """A position in meters, in whatever frame the caller is working in."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise InvalidInputError(f"point components must be finite, got ({self.x}, {self.y}, {self.z})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "Point3":
        px, py, pz = arr
        return cls(float(px), float(py), float(pz))


@dataclass(frozen=True)
class UnitVec3:
    """A direction with Euclidean norm 1 (within 1e-9)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise InvalidInputError(f"direction components must be finite, got ({self.x}, {self.y}, {self.z})")
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise InvalidInputError(f"direction must be unit length, |v| = {norm!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVec3":
        """Build a unit vector by normalizing (x, y, z)."""
        norm = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(norm) or norm == 0.0:
            raise InvalidInputError(f"cannot normalize ({x}, {y}, {z})")
        return cls(x / norm, y / norm, z / norm)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __neg__(self) -> "UnitVec3":
        return UnitVec3(-self.x, -self.y, -self.z)


@dataclass(frozen=True)
class RigidTransform:
    """Rotation (3x3, orthonormal, det +1) plus translation in meters."""

    rotation: np.ndarray
    translation: Point3

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float)
        if rot.shape != (3, 3) or not np.all(np.isfinite(rot)):
            raise InvalidInputError("rotation must be a finite 3x3 matrix")
        if np.max(np.abs(rot @ rot.T - np.eye(3))) > ROTATION_TOL:
            raise InvalidInputError("rotation must be orthonormal")
        if abs(np.linalg.det(rot) - 1.0) > ROTATION_TOL:
            raise InvalidInputError("rotation must have determinant +1")
        rot.setflags(write=False)
        object.__setattr__(self, "rotation", rot)

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), Point3(0.0, 0.0, 0.0))


def angle_between(a: UnitVec3, b: UnitVec3) -> float:
    """Angle between two unit directions, in degrees.

    Returns arccos of the dot product, clamped to [-1, 1] so that rounding on
    near-parallel inputs (the common case for surface-following error) cannot
    push it outside the arccos domain. Symmetric in its arguments; result is
    an unsigned magnitude in [0, 180].

    Identical inputs return exactly 0 and exactly mirrored inputs return
    exactly 180, bypassing arccos rounding near the ends of its domain.
    """
    if (a.x, a.y, a.z) == (b.x, b.y, b.z):
        return 0.0
    if (a.x, a.y, a.z) == (-b.x, -b.y, -b.z):
        return 180.0
    dot = a.x * b.x + a.y * b.y + a.z * b.z
    dot = min(1.0, max(-1.0, dot))
    return math.degrees(math.acos(dot))


def apply_transform(t: RigidTransform, p: Point3) -> Point3:
    """Map a point through the transform: rotation @ p + translation."""
    out = t.rotation @ p.as_array() + t.translation.as_array()
    return Point3.from_array(out)


def rotate_direction(t: RigidTransform, v: UnitVec3) -> UnitVec3:
    """Rotate a direction (translation does not apply); output is unit length."""
    out = t.rotation @ v.as_array()
    return UnitVec3.normalized(out[0], out[1], out[2])


def rotation_about_x(angle: float) -> np.ndarray:
    """Rotation matrix for `angle` radians about the x axis."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rotation_about_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rotation_about_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
