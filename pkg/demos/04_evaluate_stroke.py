"""Score a stroke by the angle between surface normals and effector normals.

Runs the full loop in memory: render a scene, extract and fit the back
curve, generate a trajectory, then evaluate it against the scene that
produced the image. The per-waypoint error is the angle between the true
surface normal and the normal implied by the commanded pitch. A detuned
copy of the trajectory shows the metric reacting to misalignment, and the
numbers land next to the physical-rig benchmark values shipped with the
package.

Run from the repository root:

    python3 demos/04_evaluate_stroke.py
"""

import dataclasses
import math
import pathlib

from backstroke import (
    DEFAULT_INTRINSICS,
    MEDIUM_SPEED_MPS,
    NormalTrace,
    REFERENCE_ROBOT_MAX_DEG,
    REFERENCE_ROBOT_MEAN_DEG,
    StrokeLine,
    TraceEntry,
    effector_normal,
    evaluate_trajectory,
    extract_profile,
    fit_cubic,
    generate_trajectory,
    load_depth_image,
    load_scene,
    read_report,
    read_trace,
    render_synthetic,
    save_depth_image,
    scene_normal,
    trace_stats,
    write_report,
    write_trace,
)

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
OUT = pathlib.Path(__file__).resolve().parent / "out"


def main():
    OUT.mkdir(exist_ok=True)

    scene = load_scene(FIXTURES / "scene_smooth.cfg")
    depth_path = OUT / "scene_smooth.pgm"
    save_depth_image(render_synthetic(scene), depth_path)
    profile = extract_profile(load_depth_image(depth_path),
                              StrokeLine(u=320, v_start=90, v_end=390),
                              DEFAULT_INTRINSICS)
    curve = fit_cubic(profile)
    traj = generate_trajectory(curve, MEDIUM_SPEED_MPS,
                               x_fixed=profile.x_fixed)
    print(f"pipeline produced {len(traj.waypoints)} waypoints from the "
          f"rendered scene")

    stats = evaluate_trajectory(traj, scene)
    print(f"\nevaluated against the true scene surface:")
    print(f"  mean error {stats.mean:.4f} deg, max {stats.max:.4f} deg "
          f"over {stats.count} waypoints")
    print(f"  benchmark stroke on the physical rig: mean "
          f"{REFERENCE_ROBOT_MEAN_DEG} deg, max {REFERENCE_ROBOT_MAX_DEG} deg")

    detuned = dataclasses.replace(traj, waypoints=tuple(
        dataclasses.replace(w, pitch=w.pitch + math.radians(5.0))
        for w in traj.waypoints))
    detuned_stats = evaluate_trajectory(detuned, scene)
    print(f"  adding 5 deg of pitch bias moves the mean to "
          f"{detuned_stats.mean:.4f} deg")

    entries = tuple(
        TraceEntry(y=w.position.y,
                   surface=scene_normal(scene, w.position.x, w.position.y),
                   effector=effector_normal(w.pitch))
        for w in traj.waypoints)
    trace = NormalTrace(entries=entries)
    trace_path = OUT / "trace.csv"
    write_trace(trace, trace_path)
    per_trace = trace_stats(trace)
    print(f"\nwrote {trace_path.name} with {len(trace)} normal pairs "
          f"(mean {per_trace.mean:.4f} deg)")

    fixture_trace = read_trace(FIXTURES / "trace_offset_5deg.csv")
    fixture_stats = trace_stats(fixture_trace)
    print(f"bundled trace fixture: constant {fixture_stats.mean:.4f} deg "
          f"offset across {fixture_stats.count} entries")

    report_path = OUT / "report.txt"
    write_report(stats, report_path, context={
        "reference": "scene",
        "speed_mps": MEDIUM_SPEED_MPS,
        "waypoints": stats.count,
    })
    restored, extras = read_report(report_path)
    assert restored == stats
    print(f"\nwrote {report_path.name} and verified an exact reload")
    print(f"  context keys carried through: {sorted(extras)}")


if __name__ == "__main__":
    main()
