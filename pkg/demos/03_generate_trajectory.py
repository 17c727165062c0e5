"""Turn a fitted curve into a timed stroke trajectory and move it to the
robot frame.

Waypoints are placed every millimeter of stroke length along y. Each one
carries the effector pitch that keeps the tool aligned with the local
surface slope, and timestamps follow from constant speed along the
polyline arc length. A rigid transform whose rotation is a pure roll about
x carries the whole trajectory, pitches included, into the robot frame.

Run from the repository root:

    python3 demos/03_generate_trajectory.py
"""

import math
import pathlib

from backstroke import (
    CubicCurve,
    MEDIUM_SPEED_MPS,
    SLOW_SPEED_MPS,
    derivative,
    generate_trajectory,
    load_curve,
    read_trajectory,
    timestamp,
    to_robot_frame,
    write_trajectory,
)
from backstroke.cli import load_transform

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
OUT = pathlib.Path(__file__).resolve().parent / "out"


def summarize(traj, label):
    first = traj.waypoints[0]
    last = traj.waypoints[-1]
    pitches = [w.pitch for w in traj.waypoints]
    print(f"{label}: {len(traj.waypoints)} waypoints in frame "
          f"'{traj.frame}', duration {traj.duration:.4f} s")
    print(f"  start ({first.position.x:+.3f}, {first.position.y:+.3f}, "
          f"{first.position.z:+.3f}) m, "
          f"end ({last.position.x:+.3f}, {last.position.y:+.3f}, "
          f"{last.position.z:+.3f}) m")
    print(f"  pitch range [{math.degrees(min(pitches)):+.2f}, "
          f"{math.degrees(max(pitches)):+.2f}] deg")


def main():
    OUT.mkdir(exist_ok=True)

    curve = load_curve(FIXTURES / "curve_straight.cfg")
    print(f"loaded straight test curve: constant z = {curve.d} m over "
          f"[{curve.y_min}, {curve.y_max}] m")

    slow = generate_trajectory(curve, SLOW_SPEED_MPS)
    summarize(slow, f"slow stroke ({SLOW_SPEED_MPS} m/s)")

    medium = timestamp(slow, MEDIUM_SPEED_MPS)
    summarize(medium, f"retimed stroke ({MEDIUM_SPEED_MPS} m/s)")
    ratio = slow.duration / medium.duration
    print(f"  slowing from {MEDIUM_SPEED_MPS} to {SLOW_SPEED_MPS} m/s "
          f"stretches the stroke {ratio:.4f}x")

    camera_path = OUT / "trajectory.csv"
    write_trajectory(medium, camera_path)
    restored = read_trajectory(camera_path)
    assert restored == medium
    print(f"wrote {camera_path.name} and verified an exact reload")

    t = load_transform(FIXTURES / "transform_flip_x180.cfg")
    robot = to_robot_frame(medium, t)
    summarize(robot, "robot-frame stroke (180 deg roll plus offset)")
    print("  y now decreases along the stroke because the roll flips the "
          "camera y axis")

    robot_path = OUT / "trajectory_robot.csv"
    write_trajectory(robot, robot_path)
    print(f"wrote {robot_path.name}")

    # Pitch survives a half-turn roll: remainder(p + pi, pi) folds back to p.
    worst = max(abs(r.pitch - m.pitch)
                for r, m in zip(robot.waypoints, medium.waypoints))
    print(f"  largest pitch change under the half-turn roll: {worst:.2e} rad")

    bent = CubicCurve(a=2.0, b=-1.0, c=0.3, d=0.45,
                      y_min=0.05, y_max=0.25, rms_residual=0.0)
    stroke = generate_trajectory(bent, MEDIUM_SPEED_MPS)
    summarize(stroke, "\ncurved stroke (pitch now tracks the slope)")
    mid = stroke.waypoints[len(stroke.waypoints) // 2]
    slope = derivative(bent, mid.position.y)
    print(f"  midpoint pitch {math.degrees(mid.pitch):+.3f} deg vs "
          f"atan(dz/dy) = {math.degrees(math.atan(slope)):+.3f} deg")


if __name__ == "__main__":
    main()
