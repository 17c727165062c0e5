"""Batch command-line front end for the stroke pipeline.

Subcommands cover each stage plus a one-shot chain:

  synth     render a synthetic scene config to a depth image
  extract   depth image + stroke line -> back profile
  fit       depth image + stroke line -> fitted cubic curve
  gen       curve file -> timestamped trajectory (optionally robot frame)
  eval      normal-trace file -> mismatch report
  pipeline  scene or depth image -> all artifacts from one config

Artifacts land in the --out directory under fixed names (depth.pgm,
profile.csv, curve.txt, trajectory.csv, trajectory_robot.csv, report.txt),
so stages chain by convention. All randomness is seed-controlled; the same
config and seed produce byte-identical artifacts.

`pipeline` chains stages in memory at full float precision and writes the
artifacts on the side; running the stages one at a time goes through the
files instead, which quantizes depth to whole millimeters (the PGM unit).

Every failure exits nonzero after printing exactly one diagnostic line to
stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curvefit import curve_from_kv, fit_cubic, save_curve
from .depthcam import (
    DEFAULT_INTRINSICS,
    CameraIntrinsics,
    DepthImage,
    SyntheticScene,
    intrinsics_from_kv,
    load_depth_image,
    load_scene,
    render_synthetic,
    save_depth_image,
)
from .errors import BackstrokeError, ConfigError, FormatError, InvalidInputError
from .evaluate import evaluate_trajectory, read_trace, trace_stats, write_report
from .geometry import Point3, RigidTransform
from .kvconfig import kv_float, kv_int, kv_str, read_kv
from .profile import BackProfile, StrokeLine, extract_profile
from .trajgen import (
    MEDIUM_SPEED_MPS,
    generate_trajectory,
    to_robot_frame,
    write_trajectory,
)

DEPTH_NAME = "depth.pgm"
PROFILE_NAME = "profile.csv"
CURVE_NAME = "curve.txt"
TRAJECTORY_NAME = "trajectory.csv"
TRAJECTORY_ROBOT_NAME = "trajectory_robot.csv"
REPORT_NAME = "report.txt"

_PROFILE_HEADER = "y_m,z_m"
_TRANSFORM_KEYS = ("r00", "r01", "r02", "r10", "r11", "r12", "r20", "r21", "r22", "tx", "ty", "tz")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def load_transform(path) -> RigidTransform:
    """Read a rigid transform config: 12 keys, row-major rotation + translation."""
    raw = read_kv(path)
    src = str(path)
    values = [kv_float(raw, key, src) for key in _TRANSFORM_KEYS]
    rotation = np.array(values[:9]).reshape(3, 3)
    try:
        return RigidTransform(rotation=rotation, translation=Point3(*values[9:]))
    except InvalidInputError as exc:
        raise ConfigError(f"{src}: {exc}") from None


def write_profile_csv(profile: BackProfile, path) -> None:
    lines = [f"# x_fixed = {profile.x_fixed!r}", _PROFILE_HEADER]
    lines.extend(f"{float(y)!r},{float(z)!r}" for y, z in zip(profile.y, profile.z))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_profile_csv(path) -> BackProfile:
    x_fixed = None
    ys, zs = [], []
    header_seen = False
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                key, _, value = body.partition("=")
                if key.strip() == "x_fixed":
                    x_fixed = float(value)
                continue
            if not header_seen:
                if line != _PROFILE_HEADER:
                    raise FormatError(f"{path}:{lineno}: expected header {_PROFILE_HEADER!r}")
                header_seen = True
                continue
            fields = line.split(",")
            if len(fields) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'y_m,z_m' row")
            try:
                ys.append(float(fields[0]))
                zs.append(float(fields[1]))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: malformed number") from None
    if x_fixed is None:
        raise FormatError(f"{path}: missing x_fixed comment")
    if not header_seen:
        raise FormatError(f"{path}: missing profile header")
    return BackProfile(x_fixed=x_fixed, y=np.array(ys), z=np.array(zs))


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one pipeline run needs, resolved from a config file."""

    scene: SyntheticScene | None
    depth_path: Path | None
    intrinsics: CameraIntrinsics
    transform_path: Path | None
    out_dir: Path
    line: StrokeLine
    step_m: float
    speed_mps: float


def load_pipeline_config(path, out_override=None, seed_override=None) -> PipelineConfig:
    """Parse a pipeline config file; relative paths resolve beside the file.

    Keys: scene_config or depth_image (exactly one); line_u, line_v_start,
    line_v_end; optional step_mm (default 1.0), speed_mps (default 0.085),
    transform_config, out_dir, seed (scene-seed override), and fx, fy, cx,
    cy, width, height for depth-image intrinsics.
    """
    path = Path(path)
    raw = read_kv(path)
    src = str(path)
    base = path.parent

    def resolve(key):
        return (base / kv_str(raw, key, src)).resolve() if key in raw else None

    scene_path = resolve("scene_config")
    depth_path = resolve("depth_image")
    if (scene_path is None) == (depth_path is None):
        raise ConfigError(f"{src}: give exactly one of scene_config or depth_image")

    scene = None
    if scene_path is not None:
        scene = load_scene(scene_path)
        seed = seed_override if seed_override is not None else (
            kv_int(raw, "seed", src) if "seed" in raw else None
        )
        if seed is not None:
            scene = dataclasses.replace(scene, seed=seed)
        intrinsics = scene.intrinsics
    else:
        intrinsics = intrinsics_from_kv(raw, src, DEFAULT_INTRINSICS)

    out_dir = out_override if out_override is not None else (
        (base / kv_str(raw, "out_dir", src)) if "out_dir" in raw else None
    )
    if out_dir is None:
        raise ConfigError(f"{src}: no out_dir key and no --out flag")

    step_mm = kv_float(raw, "step_mm", src) if "step_mm" in raw else 1.0
    if step_mm <= 0:
        raise ConfigError(f"{src}: step_mm must be positive")
    speed = kv_float(raw, "speed_mps", src) if "speed_mps" in raw else MEDIUM_SPEED_MPS
    if speed <= 0:
        raise ConfigError(f"{src}: speed_mps must be positive")
    try:
        line = StrokeLine(
            u=kv_int(raw, "line_u", src),
            v_start=kv_int(raw, "line_v_start", src),
            v_end=kv_int(raw, "line_v_end", src),
        )
    except InvalidInputError as exc:
        raise ConfigError(f"{src}: {exc}") from None
    return PipelineConfig(
        scene=scene,
        depth_path=depth_path,
        intrinsics=intrinsics,
        transform_path=resolve("transform_config"),
        out_dir=Path(out_dir),
        line=line,
        step_m=step_mm / 1000.0,
        speed_mps=speed,
    )


def _parse_line(text: str) -> StrokeLine:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigError(f"--line expects 'u,v0,v1', got {text!r}")
    try:
        u, v0, v1 = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--line expects three integers, got {text!r}") from None
    try:
        return StrokeLine(u=u, v_start=v0, v_end=v1)
    except InvalidInputError as exc:
        raise ConfigError(str(exc)) from None


def _out_dir(args) -> Path:
    out = Path(args.out)
    os.makedirs(out, exist_ok=True)
    return out


def _intrinsics_for(args) -> CameraIntrinsics:
    if getattr(args, "config", None):
        return load_scene(args.config).intrinsics
    return DEFAULT_INTRINSICS


def _extract(args) -> tuple[BackProfile, DepthImage, CameraIntrinsics]:
    k = _intrinsics_for(args)
    img = load_depth_image(args.depth)
    line = _parse_line(args.line)
    return extract_profile(img, line, k), img, k


def _cmd_synth(args) -> None:
    scene = load_scene(args.config)
    if args.seed is not None:
        scene = dataclasses.replace(scene, seed=args.seed)
    out = _out_dir(args)
    img = render_synthetic(scene)
    depth_path = out / DEPTH_NAME
    save_depth_image(img, depth_path)
    print(f"wrote {depth_path}")


def _cmd_extract(args) -> None:
    profile, _, _ = _extract(args)
    out = _out_dir(args)
    profile_path = out / PROFILE_NAME
    write_profile_csv(profile, profile_path)
    print(f"wrote {profile_path} ({len(profile)} samples)")


def _cmd_fit(args) -> None:
    profile, _, _ = _extract(args)
    curve = fit_cubic(profile)
    out = _out_dir(args)
    profile_path = out / PROFILE_NAME
    curve_path = out / CURVE_NAME
    write_profile_csv(profile, profile_path)
    save_curve(curve, curve_path, extras={"x_fixed": profile.x_fixed})
    print(f"wrote {profile_path}")
    print(f"wrote {curve_path} (rms residual {curve.rms_residual:.3e} m)")


def _cmd_gen(args) -> None:
    raw = read_kv(args.curve)
    curve = curve_from_kv(raw, source=str(args.curve))
    x_fixed = kv_float(raw, "x_fixed", str(args.curve)) if "x_fixed" in raw else 0.0
    traj = generate_trajectory(
        curve, speed=args.speed_mps, step=args.step_mm / 1000.0, x_fixed=x_fixed
    )
    out = _out_dir(args)
    traj_path = out / TRAJECTORY_NAME
    write_trajectory(traj, traj_path)
    print(f"wrote {traj_path} ({len(traj.waypoints)} waypoints, {traj.duration:.4f} s)")
    if args.transform:
        robot = to_robot_frame(traj, load_transform(args.transform))
        robot_path = out / TRAJECTORY_ROBOT_NAME
        write_trajectory(robot, robot_path)
        print(f"wrote {robot_path}")


def _cmd_eval(args) -> None:
    trace = read_trace(args.trace)
    stats = trace_stats(trace)
    out = _out_dir(args)
    report_path = out / REPORT_NAME
    write_report(stats, report_path, context={"trace": str(args.trace)})
    print(f"wrote {report_path}")
    print(f"mean_deg = {stats.mean!r}")
    print(f"max_deg = {stats.max!r}")


def run_pipeline(config: PipelineConfig) -> dict[str, object]:
    """Chain synth/ingest -> extract -> fit -> gen -> eval at full precision.

    Returns the artifact paths plus the fitted curve, trajectory, and
    statistics for callers that want them in-process.
    """
    os.makedirs(config.out_dir, exist_ok=True)
    written = []

    if config.scene is not None:
        img = render_synthetic(config.scene)
        depth_path = config.out_dir / DEPTH_NAME
        save_depth_image(img, depth_path)
        written.append(depth_path)
    else:
        img = load_depth_image(config.depth_path)

    profile = extract_profile(img, config.line, config.intrinsics)
    profile_path = config.out_dir / PROFILE_NAME
    write_profile_csv(profile, profile_path)
    written.append(profile_path)

    curve = fit_cubic(profile)
    curve_path = config.out_dir / CURVE_NAME
    save_curve(curve, curve_path, extras={"x_fixed": profile.x_fixed})
    written.append(curve_path)

    traj = generate_trajectory(
        curve, speed=config.speed_mps, step=config.step_m, x_fixed=profile.x_fixed
    )
    traj_path = config.out_dir / TRAJECTORY_NAME
    write_trajectory(traj, traj_path)
    written.append(traj_path)

    if config.transform_path is not None:
        robot = to_robot_frame(traj, load_transform(config.transform_path))
        robot_path = config.out_dir / TRAJECTORY_ROBOT_NAME
        write_trajectory(robot, robot_path)
        written.append(robot_path)

    reference = config.scene if config.scene is not None else curve
    stats = evaluate_trajectory(traj, reference)
    context: dict[str, object] = {
        "reference": "scene" if config.scene is not None else "curve",
        "step_m": config.step_m,
        "speed_mps": config.speed_mps,
        "line_u": config.line.u,
        "line_v_start": config.line.v_start,
        "line_v_end": config.line.v_end,
        "x_fixed": profile.x_fixed,
        "waypoints": len(traj.waypoints),
    }
    if config.scene is not None:
        scene = config.scene
        context.update(
            scene_a=scene.a, scene_b=scene.b, scene_c=scene.c, scene_d=scene.d,
            scene_lateral=scene.lateral, noise_sigma_mm=scene.noise_sigma_mm, seed=scene.seed,
        )
    for name in ("a", "b", "c", "d", "y_min", "y_max", "rms_residual"):
        context[f"fit_{name}"] = getattr(curve, name)
    report_path = config.out_dir / REPORT_NAME
    write_report(stats, report_path, context=context)
    written.append(report_path)

    return {
        "written": written,
        "curve": curve,
        "trajectory": traj,
        "stats": stats,
    }


def _cmd_pipeline(args) -> None:
    out_override = Path(args.out) if args.out else None
    config = load_pipeline_config(args.config, out_override=out_override, seed_override=args.seed)
    result = run_pipeline(config)
    for p in result["written"]:
        print(f"wrote {p}")
    stats = result["stats"]
    print(f"mean_deg = {stats.mean!r}")
    print(f"max_deg = {stats.max!r}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="backstroke", description="Back-stroke trajectory pipeline.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    p = sub.add_parser("synth", help="render a synthetic scene to a depth image")
    p.add_argument("--config", required=True, help="scene config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the scene seed")
    p.set_defaults(handler=_cmd_synth)

    p = sub.add_parser("extract", help="extract a back profile along a stroke line")
    p.add_argument("--depth", required=True, help="depth image (16-bit PGM)")
    p.add_argument("--line", required=True, help="stroke line as u,v0,v1 (pixels)")
    p.add_argument("--config", default=None, help="scene config supplying intrinsics")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_extract)

    p = sub.add_parser("fit", help="extract a profile and fit the cubic curve")
    p.add_argument("--depth", required=True, help="depth image (16-bit PGM)")
    p.add_argument("--line", required=True, help="stroke line as u,v0,v1 (pixels)")
    p.add_argument("--config", default=None, help="scene config supplying intrinsics")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("gen", help="generate a timestamped trajectory from a curve file")
    p.add_argument("curve", help="curve file written by fit")
    p.add_argument("--step-mm", type=float, default=1.0, help="waypoint spacing, mm (default 1.0)")
    p.add_argument(
        "--speed-mps", type=float, default=MEDIUM_SPEED_MPS,
        help="stroke speed, m/s (slow 0.028, medium 0.085; default medium)",
    )
    p.add_argument("--transform", default=None, help="camera-to-robot transform config")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("eval", help="mismatch statistics of a recorded normal trace")
    p.add_argument("trace", help="trace CSV (y_m,Bx,By,Bz,Ex,Ey,Ez)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("pipeline", help="run every stage from one config file")
    p.add_argument("--config", required=True, help="pipeline config file")
    p.add_argument("--out", default=None, help="output directory (overrides out_dir key)")
    p.add_argument("--seed", type=int, default=None, help="override the scene seed")
    p.set_defaults(handler=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        args.handler(args)
    except ConfigError as exc:
        print(f"backstroke: {exc}", file=sys.stderr)
        return 2
    except (BackstrokeError, OSError) as exc:
        print(f"backstroke: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
