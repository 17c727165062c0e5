"""Pinhole camera model, depth-image I/O, and a synthetic back renderer.

Depth values are millimeters along the optical axis (z); 3D positions are
meters in the camera frame (x image-horizontal, y image-vertical, z depth).

The depth file format is binary 16-bit grayscale PGM (magic ``P5``, maxval
65535), big-endian sample order, one sample unit = 1 mm, 0 = invalid pixel.
In memory depths are kept as float64 millimeters so synthetic renders are
not quantized; saving rounds to the nearest millimeter.

The synthetic renderer replaces a physical depth camera: it images a
heightfield z = a*y**3 + b*y**2 + c*y + d + lateral*x**2 (meters) and adds
optional per-pixel Gaussian depth noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BehindCameraError,
    BoundsError,
    ConfigError,
    FormatError,
    InvalidInputError,
    InvalidPixelError,
    RenderError,
)
from .geometry import Point3
from .kvconfig import kv_float, kv_int, read_kv

MM_PER_M = 1000.0
MAX_DEPTH_MM = 65535

# Fixed-point heightfield solve: back surfaces are shallow relative to the
# camera distance, so z -> f(x(z), y(z)) contracts and a short iteration
# converges well below the millimeter quantization of the file format.
SOLVE_TOL_M = 1e-7
MAX_SOLVE_ITERATIONS = 50

# Noisy depths are clamped to this floor so noise can never turn a rendered
# pixel into the invalid-pixel marker (0).
MIN_VALID_DEPTH_MM = 0.1

_PGM_MAGIC = b"P5"


@dataclass(frozen=True)
class CameraIntrinsics:
    """Calibrated pinhole parameters, all in pixels."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        object.__setattr__(self, "fx", float(self.fx))
        object.__setattr__(self, "fy", float(self.fy))
        object.__setattr__(self, "cx", float(self.cx))
        object.__setattr__(self, "cy", float(self.cy))
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        if not (self.fx > 0 and self.fy > 0):
            raise InvalidInputError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise InvalidInputError("principal point must lie inside the image")


# RealSense-D435-like desk-scale default: VGA, ~53 deg horizontal FOV,
# surface about half a meter from the camera.
DEFAULT_INTRINSICS = CameraIntrinsics(fx=600.0, fy=600.0, cx=320.0, cy=240.0, width=640, height=480)


def deproject(u: float, v: float, depth_mm: float, k: CameraIntrinsics) -> Point3:
    """3D camera-frame position of pixel (u, v) at the given depth.

    Returns ((u - cx) * z / fx, (v - cy) * z / fy, z) with z = depth_mm
    converted to meters.

    Raises
    ------
    InvalidPixelError
        If depth_mm is 0 (the invalid-pixel marker) or negative.
    BoundsError
        If (u, v) lies outside the image.
    """
    if not (math.isfinite(u) and math.isfinite(v) and math.isfinite(depth_mm)):
        raise InvalidInputError("pixel and depth must be finite")
    if depth_mm <= 0:
        raise InvalidPixelError(f"invalid depth {depth_mm} mm at pixel ({u}, {v})")
    if not (0 <= u < k.width and 0 <= v < k.height):
        raise BoundsError(f"pixel ({u}, {v}) outside {k.width}x{k.height} image")
    z = depth_mm / MM_PER_M
    return Point3((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z)


def project(p: Point3, k: CameraIntrinsics) -> tuple[float, float, float]:
    """Pixel coordinates and depth (mm) of a camera-frame point.

    u = fx * x / z + cx, v = fy * y / z + cy. The returned pixel may lie
    outside the image bounds; callers that care must check.

    Raises
    ------
    BehindCameraError
        If p.z <= 0.
    """
    if p.z <= 0:
        raise BehindCameraError(f"point with z = {p.z} m is behind the camera")
    u = k.fx * p.x / p.z + k.cx
    v = k.fy * p.y / p.z + k.cy
    return u, v, p.z * MM_PER_M


@dataclass(frozen=True)
class DepthImage:
    """A width x height grid of depth samples in millimeters; 0 = invalid."""

    width: int
    height: int
    data: np.ndarray  # (height, width) float64, row-major

    def __post_init__(self):
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        data = np.array(self.data, dtype=float)
        if data.shape != (self.height, self.width):
            raise InvalidInputError(f"data shape {data.shape} does not match {self.height}x{self.width}")
        if not np.all(np.isfinite(data)) or np.any(data < 0):
            raise InvalidInputError("depth values must be finite and >= 0")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def valid_mask(self) -> np.ndarray:
        return self.data > 0


def save_depth_image(img: DepthImage, path) -> None:
    """Write a depth image as 16-bit big-endian PGM, rounding to whole mm."""
    rounded = np.rint(img.data)
    if np.any(rounded > MAX_DEPTH_MM):
        raise FormatError(f"depth exceeds {MAX_DEPTH_MM} mm and cannot be stored")
    header = b"P5\n%d %d\n%d\n" % (img.width, img.height, MAX_DEPTH_MM)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(rounded.astype(">u2").tobytes())


def load_depth_image(path) -> DepthImage:
    """Read a depth image written by :func:`save_depth_image`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(_PGM_MAGIC):
        raise FormatError(f"{path}: not a P5 PGM depth file")
    tokens, offset = _pgm_header_tokens(blob, want=3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"{path}: bad image size {width}x{height}")
    if maxval != MAX_DEPTH_MM:
        raise FormatError(f"{path}: maxval {maxval}, expected {MAX_DEPTH_MM}")
    expected = width * height * 2
    payload = blob[offset : offset + expected]
    if len(payload) != expected:
        raise FormatError(f"{path}: truncated data ({len(payload)} of {expected} bytes)")
    data = np.frombuffer(payload, dtype=">u2").reshape(height, width).astype(float)
    return DepthImage(width, height, data)


def _pgm_header_tokens(blob: bytes, want: int) -> tuple[list[bytes], int]:
    """Collect `want` whitespace-separated header tokens after the magic,
    skipping '#' comment lines. Returns the tokens and the offset of the
    first data byte (one whitespace byte past the last token)."""
    tokens: list[bytes] = []
    i = len(_PGM_MAGIC)
    n = len(blob)
    while len(tokens) < want:
        while i < n and blob[i : i + 1].isspace():
            i += 1
        if i < n and blob[i : i + 1] == b"#":
            while i < n and blob[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < n and not blob[i : i + 1].isspace():
            i += 1
        if start == i:
            raise FormatError("truncated PGM header")
        tokens.append(blob[start:i])
    if i >= n or not blob[i : i + 1].isspace():
        raise FormatError("PGM header not terminated by whitespace")
    return tokens, i + 1


@dataclass(frozen=True)
class SyntheticScene:
    """A cubic back surface as seen by a pinhole depth camera.

    The surface is z = a*y**3 + b*y**2 + c*y + d (+ lateral*x**2), meters,
    spanning the whole field of view. noise_sigma_mm is the standard
    deviation of per-pixel Gaussian depth noise; rendering is deterministic
    for a given seed.
    """

    a: float
    b: float
    c: float
    d: float
    lateral: float = 0.0
    noise_sigma_mm: float = 0.0
    intrinsics: CameraIntrinsics = field(default=DEFAULT_INTRINSICS)
    seed: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "lateral", "noise_sigma_mm"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise InvalidInputError(f"scene field {name} must be finite")
        object.__setattr__(self, "seed", int(self.seed))
        if self.noise_sigma_mm < 0:
            raise InvalidInputError("noise_sigma_mm must be >= 0")
        if self.seed < 0:
            raise InvalidInputError("seed must be >= 0")

    def surface_depth(self, x, y):
        """Surface z (meters) at lateral offset x and vertical offset y."""
        return ((self.a * y + self.b) * y + self.c) * y + self.d + self.lateral * x * x


def render_synthetic(scene: SyntheticScene) -> DepthImage:
    """Render the scene to a depth image.

    Each pixel's ray x = ru*z, y = rv*z is intersected with the heightfield
    by fixed-point iteration z <- f(ru*z, rv*z) started from the nominal
    depth d. Gaussian noise (if any) is added after the geometric solve and
    clamped so no pixel becomes invalid.

    Raises
    ------
    RenderError
        If any pixel fails to converge within the iteration budget, or the
        solved surface is not strictly in front of the camera.
    """
    k = scene.intrinsics
    ru = (np.arange(k.width, dtype=float) - k.cx) / k.fx
    rv = (np.arange(k.height, dtype=float) - k.cy) / k.fy
    z = _solve_heightfield(scene, ru[np.newaxis, :], rv[:, np.newaxis])
    depth_mm = z * MM_PER_M
    if scene.noise_sigma_mm > 0:
        rng = np.random.default_rng(scene.seed)
        depth_mm = depth_mm + rng.normal(0.0, scene.noise_sigma_mm, depth_mm.shape)
        depth_mm = np.maximum(depth_mm, MIN_VALID_DEPTH_MM)
    return DepthImage(k.width, k.height, depth_mm)


def _solve_heightfield(scene: SyntheticScene, ru, rv) -> np.ndarray:
    """Fixed-point depth solve on broadcastable ray-slope grids."""
    shape = np.broadcast_shapes(np.shape(ru), np.shape(rv))
    z = np.full(shape, scene.d, dtype=float)
    converged = False
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(MAX_SOLVE_ITERATIONS):
            z_next = scene.surface_depth(ru * z, rv * z)
            if not np.all(np.isfinite(z_next)):
                break
            delta = np.max(np.abs(z_next - z))
            z = z_next
            if delta <= SOLVE_TOL_M:
                converged = True
                break
    if not converged:
        raise RenderError(
            f"heightfield solve did not reach {SOLVE_TOL_M} m in {MAX_SOLVE_ITERATIONS} iterations; "
            "surface too steep for the camera geometry"
        )
    if np.any(z <= 0):
        raise RenderError("solved surface is not strictly in front of the camera")
    return z


def visible_y_span(scene: SyntheticScene) -> tuple[float, float]:
    """Vertical extent (meters, camera frame) of the surface along the
    principal column, from the first to the last image row."""
    k = scene.intrinsics
    rv = np.array([(0 - k.cy) / k.fy, (k.height - 1 - k.cy) / k.fy])
    z = _solve_heightfield(scene, np.zeros(2), rv)
    ys = rv * z
    return float(ys.min()), float(ys.max())


def intrinsics_from_kv(raw: dict[str, str], source: str, defaults: CameraIntrinsics = DEFAULT_INTRINSICS) -> CameraIntrinsics:
    """Intrinsics from parsed key = value text; absent keys use `defaults`."""
    def opt_float(key, default):
        return kv_float(raw, key, source) if key in raw else default

    return CameraIntrinsics(
        fx=opt_float("fx", defaults.fx),
        fy=opt_float("fy", defaults.fy),
        cx=opt_float("cx", defaults.cx),
        cy=opt_float("cy", defaults.cy),
        width=kv_int(raw, "width", source) if "width" in raw else defaults.width,
        height=kv_int(raw, "height", source) if "height" in raw else defaults.height,
    )


def load_scene(path) -> SyntheticScene:
    """Read a scene description from a key = value config file.

    Required keys: a, b, c, d. Optional: lateral, noise_sigma_mm, seed
    (default 0), and fx, fy, cx, cy, width, height (each defaulting to the
    desk-scale intrinsics).
    """
    raw = read_kv(path)
    src = str(path)
    known = {
        "a", "b", "c", "d", "lateral", "noise_sigma_mm", "seed",
        "fx", "fy", "cx", "cy", "width", "height",
    }
    for key in raw:
        if key not in known:
            raise ConfigError(f"{src}: unknown scene key {key!r}")

    def opt_float(key, default):
        return kv_float(raw, key, src) if key in raw else default

    return SyntheticScene(
        a=kv_float(raw, "a", src),
        b=kv_float(raw, "b", src),
        c=kv_float(raw, "c", src),
        d=kv_float(raw, "d", src),
        lateral=opt_float("lateral", 0.0),
        noise_sigma_mm=opt_float("noise_sigma_mm", 0.0),
        intrinsics=intrinsics_from_kv(raw, src),
        seed=kv_int(raw, "seed", src) if "seed" in raw else 0,
    )
