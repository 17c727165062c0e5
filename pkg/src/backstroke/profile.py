"""Back-shape profile extraction along a vertical stroke line.

The stroke start and end are user-selected pixels sharing one image column,
so the profile is a single column of depths turned into (y, z) samples in
the camera frame. Invalid pixels inside the segment are filled by linear
interpolation of depth between their nearest valid neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .depthcam import MM_PER_M, CameraIntrinsics, DepthImage
from .errors import (
    BoundsError,
    GapError,
    InsufficientDataError,
    InvalidInputError,
    OrderingError,
)

MIN_PROFILE_SAMPLES = 4  # cubic fit needs 4 degrees of freedom


@dataclass(frozen=True)
class StrokeLine:
    """A vertical image segment: one column, rows v_start through v_end."""

    u: int
    v_start: int
    v_end: int

    def __post_init__(self):
        object.__setattr__(self, "u", int(self.u))
        object.__setattr__(self, "v_start", int(self.v_start))
        object.__setattr__(self, "v_end", int(self.v_end))
        if self.u < 0 or self.v_start < 0:
            raise InvalidInputError("stroke line pixels must be non-negative")
        if self.v_start >= self.v_end:
            raise InvalidInputError(f"v_start {self.v_start} must be < v_end {self.v_end}")


@dataclass(frozen=True)
class BackProfile:
    """Ordered (y, z) samples of the back shape at a fixed lateral offset.

    x_fixed is the mean deprojected x over the stroke line, in meters; y and
    z are parallel arrays in meters with y strictly increasing.
    """

    x_fixed: float
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_fixed", float(self.x_fixed))
        y = np.array(self.y, dtype=float)
        z = np.array(self.z, dtype=float)
        if y.ndim != 1 or y.shape != z.shape:
            raise InvalidInputError("y and z must be 1-D arrays of equal length")
        if len(y) < MIN_PROFILE_SAMPLES:
            raise InsufficientDataError(f"profile needs >= {MIN_PROFILE_SAMPLES} samples, got {len(y)}")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
            raise InvalidInputError("profile samples must be finite")
        if not np.all(np.diff(y) > 0):
            raise OrderingError("profile y values must be strictly increasing")
        y.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    def __len__(self) -> int:
        return len(self.y)

    @property
    def samples(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.y, self.z)]


def extract_profile(img: DepthImage, line: StrokeLine, k: CameraIntrinsics) -> BackProfile:
    """Deproject the stroke-line column into a BackProfile.

    Every row from v_start through v_end contributes one sample, sorted by
    deprojected y. Rows whose depth is invalid (0) are filled by linear
    interpolation between the nearest valid rows, so the y grid stays
    regular and the downstream fit well conditioned.

    Raises
    ------
    BoundsError
        If the line does not fit inside the image.
    InvalidInputError
        If the intrinsics do not describe this image.
    InsufficientDataError
        If fewer than 4 pixels on the segment are valid.
    GapError
        If either endpoint of the segment is invalid (nothing to
        interpolate from).
    """
    if (img.width, img.height) != (k.width, k.height):
        raise InvalidInputError(
            f"intrinsics are for {k.width}x{k.height}, image is {img.width}x{img.height}"
        )
    if line.u >= img.width or line.v_end >= img.height:
        raise BoundsError(
            f"stroke line (u={line.u}, v={line.v_start}..{line.v_end}) "
            f"outside {img.width}x{img.height} image"
        )

    depth_mm = img.data[line.v_start : line.v_end + 1, line.u].astype(float)
    valid = depth_mm > 0
    n_valid = int(np.count_nonzero(valid))
    if n_valid < MIN_PROFILE_SAMPLES:
        raise InsufficientDataError(
            f"only {n_valid} valid pixels on the stroke line, need {MIN_PROFILE_SAMPLES}"
        )
    if not valid[0] or not valid[-1]:
        raise GapError("stroke line endpoint has invalid depth; gap cannot be interpolated")
    rows = np.arange(len(depth_mm), dtype=float)
    if not np.all(valid):
        depth_mm = np.interp(rows, rows[valid], depth_mm[valid])

    v = line.v_start + rows
    z = depth_mm / MM_PER_M
    y = (v - k.cy) * z / k.fy
    x = (line.u - k.cx) * z / k.fx
    # Noisy depth can locally invert deprojected y, so order by y, not row.
    order = np.argsort(y, kind="stable")
    y = y[order]
    z = z[order]
    if not np.all(np.diff(y) > 0):
        raise OrderingError("stroke line deprojects to duplicate y values")
    return BackProfile(x_fixed=float(np.mean(x)), y=y, z=z)
