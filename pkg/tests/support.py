"""Independent oracles and small helpers shared by the test suite.

Everything here recomputes expected values through a different route than
the library under test: extended-precision normal equations instead of the
scaled polynomial solver, fine-grid quadrature instead of polyline sums,
finite differences instead of the analytic derivative.
"""

import math

import numpy as np
from mpmath import mp

ORACLE_DPS = 50


def oracle_cubic_fit(y, z, dps=ORACLE_DPS):
    """Least-squares cubic via explicit normal equations at `dps` digits.

    Builds the power sums S_k = sum(y**k) for k = 0..6 and moments
    T_k = sum(z * y**k) for k = 0..3, then solves the 4x4 system directly.
    Returns ascending-power coefficients [d, c, b, a] as mpf values.
    """
    with mp.workdps(dps):
        ym = [mp.mpf(float(v)) for v in y]
        zm = [mp.mpf(float(v)) for v in z]
        powers = [[mp.mpf(1)] * len(ym)]
        for _ in range(6):
            powers.append([p * yi for p, yi in zip(powers[-1], ym)])
        s = [mp.fsum(row) for row in powers]
        t = [mp.fsum(p * zi for p, zi in zip(powers[k], zm)) for k in range(4)]
        design = mp.matrix([[s[i + j] for j in range(4)] for i in range(4)])
        return list(mp.lu_solve(design, mp.matrix(t)))


def oracle_cubic_grid(coeffs_ascending, ys, dps=ORACLE_DPS):
    """Evaluate ascending-power mpf coefficients on a float grid."""
    out = []
    with mp.workdps(dps):
        for y in ys:
            ym = mp.mpf(float(y))
            acc = mp.mpf(0)
            for c in reversed(coeffs_ascending):
                acc = acc * ym + c
            out.append(float(acc))
    return np.array(out)


def brute_force_angle_deg(a, b):
    """arccos of the clamped dot product, degrees. a, b are 3-sequences."""
    dot = float(np.clip(np.dot(np.asarray(a, dtype=float), np.asarray(b, dtype=float)), -1.0, 1.0))
    return math.degrees(math.acos(dot))


def random_unit(rng):
    """Isotropic random unit 3-vector as a numpy array."""
    while True:
        v = rng.normal(size=3)
        n = np.linalg.norm(v)
        if n > 1e-6:
            return v / n


def random_rotation(rng):
    """Random rotation matrix: QR of a Gaussian matrix, det forced to +1."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.where(np.diag(r) < 0.0, -1.0, 1.0)
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q


def curve_arc_length(a, b, c, d, y_lo, y_hi, step=1e-5):
    """Trapezoid quadrature of integral sqrt(1 + z'(y)**2) dy on a fine grid.

    The slope is written out directly so this does not share code with the
    library's derivative().
    """
    n = max(2, int(math.ceil((y_hi - y_lo) / step)) + 1)
    ys = np.linspace(y_lo, y_hi, n)
    slope = 3.0 * a * ys**2 + 2.0 * b * ys + c
    return float(np.trapezoid(np.sqrt(1.0 + slope * slope), ys))


def polyline_length(points):
    """Total length of a Point3 polyline via numpy, not math.dist."""
    arr = np.array([[p.x, p.y, p.z] for p in points])
    return float(np.sum(np.linalg.norm(np.diff(arr, axis=0), axis=1)))


def central_difference(f, y, h=1e-6):
    return (f(y + h) - f(y - h)) / (2.0 * h)


def cubic_samples(a, b, c, d, y_lo, y_hi, n, sigma=0.0, rng=None):
    """Sample z = cubic(y) on a uniform grid, optionally with Gaussian noise."""
    ys = np.linspace(y_lo, y_hi, n)
    zs = np.polyval([a, b, c, d], ys)
    if sigma > 0.0:
        zs = zs + rng.normal(0.0, sigma, ys.shape)
    return ys, zs
