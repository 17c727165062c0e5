"""Surface-following stroke trajectories from depth images of a human back.

The pipeline mirrors a depth-camera + robot-arm massage rig at desk scale:
a depth image (real or synthetic) is reduced to a back profile along a
vertical stroke line, a cubic z = a*y**3 + b*y**2 + c*y + d is fitted to
it, waypoints with end-effector pitch angles are generated on the curve at
1 mm increments with constant-speed timestamps, and trajectory quality is
scored by the angle between surface normals and effector normals.
"""

from .curvefit import CubicCurve, derivative, eval_cubic, fit_cubic, load_curve, save_curve
from .depthcam import (
    DEFAULT_INTRINSICS,
    CameraIntrinsics,
    DepthImage,
    SyntheticScene,
    deproject,
    load_depth_image,
    load_scene,
    project,
    render_synthetic,
    save_depth_image,
    visible_y_span,
)
from .errors import (
    BackstrokeError,
    BehindCameraError,
    BoundsError,
    ConfigError,
    CoverageError,
    DegeneratePathError,
    DomainTooShortError,
    EmptyTraceError,
    FormatError,
    FrameError,
    GapError,
    InsufficientDataError,
    InvalidInputError,
    InvalidPixelError,
    OrderingError,
    RenderError,
    SingularFitError,
    UnsupportedTransformError,
)
from .evaluate import (
    REFERENCE_HUMAN_MAX_DEG,
    REFERENCE_HUMAN_MEAN_DEG,
    REFERENCE_ROBOT_MAX_DEG,
    REFERENCE_ROBOT_MEAN_DEG,
    ErrorStats,
    NormalTrace,
    TraceEntry,
    compare_traces,
    effector_normal,
    evaluate_trajectory,
    read_report,
    read_trace,
    scene_normal,
    surface_normal,
    trace_stats,
    write_report,
    write_trace,
)
from .geometry import (
    Point3,
    RigidTransform,
    UnitVec3,
    angle_between,
    apply_transform,
    rotate_direction,
    rotation_about_x,
    rotation_about_y,
    rotation_about_z,
)
from .profile import BackProfile, StrokeLine, extract_profile
from .trajgen import (
    CAMERA_FRAME,
    DEFAULT_STEP_M,
    MEDIUM_SPEED_MPS,
    ROBOT_FRAME,
    SLOW_SPEED_MPS,
    Trajectory,
    Waypoint,
    compute_pitch,
    generate_trajectory,
    generate_waypoints,
    read_trajectory,
    timestamp,
    to_robot_frame,
    write_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "BackProfile",
    "BackstrokeError",
    "BehindCameraError",
    "BoundsError",
    "CAMERA_FRAME",
    "CameraIntrinsics",
    "ConfigError",
    "CoverageError",
    "CubicCurve",
    "DEFAULT_INTRINSICS",
    "DEFAULT_STEP_M",
    "DegeneratePathError",
    "DepthImage",
    "DomainTooShortError",
    "EmptyTraceError",
    "ErrorStats",
    "FormatError",
    "FrameError",
    "GapError",
    "InsufficientDataError",
    "InvalidInputError",
    "InvalidPixelError",
    "MEDIUM_SPEED_MPS",
    "NormalTrace",
    "OrderingError",
    "Point3",
    "REFERENCE_HUMAN_MAX_DEG",
    "REFERENCE_HUMAN_MEAN_DEG",
    "REFERENCE_ROBOT_MAX_DEG",
    "REFERENCE_ROBOT_MEAN_DEG",
    "ROBOT_FRAME",
    "RenderError",
    "RigidTransform",
    "SLOW_SPEED_MPS",
    "SingularFitError",
    "StrokeLine",
    "SyntheticScene",
    "TraceEntry",
    "Trajectory",
    "UnitVec3",
    "UnsupportedTransformError",
    "Waypoint",
    "angle_between",
    "apply_transform",
    "compare_traces",
    "compute_pitch",
    "deproject",
    "derivative",
    "effector_normal",
    "eval_cubic",
    "evaluate_trajectory",
    "extract_profile",
    "fit_cubic",
    "generate_trajectory",
    "generate_waypoints",
    "load_curve",
    "load_depth_image",
    "load_scene",
    "project",
    "read_report",
    "read_trace",
    "read_trajectory",
    "render_synthetic",
    "rotate_direction",
    "rotation_about_x",
    "rotation_about_y",
    "rotation_about_z",
    "save_curve",
    "save_depth_image",
    "scene_normal",
    "surface_normal",
    "timestamp",
    "to_robot_frame",
    "trace_stats",
    "visible_y_span",
    "write_report",
    "write_trace",
    "write_trajectory",
]
