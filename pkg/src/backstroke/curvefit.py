"""Cubic back-shape model: least-squares fit and evaluation.

The model is z = a*y**3 + b*y**2 + c*y + d with y and z in meters. A cubic
is enough to capture the single S-bend of a back profile while staying
immune to depth-noise overfitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidInputError, SingularFitError
from .kvconfig import kv_float, read_kv, write_kv
from .profile import BackProfile

CURVE_KEYS = ("a", "b", "c", "d", "y_min", "y_max", "rms_residual")


@dataclass(frozen=True)
class CubicCurve:
    """Fitted coefficients of z = a*y**3 + b*y**2 + c*y + d plus fit metadata.

    y_min and y_max delimit the y interval the fit was computed on;
    rms_residual is the root-mean-square misfit over the input samples in
    meters. Evaluation outside the domain is permitted but is extrapolation,
    and downstream consumers refuse to evaluate trajectories there.
    """

    a: float
    b: float
    c: float
    d: float
    y_min: float
    y_max: float
    rms_residual: float

    def __post_init__(self):
        for name in CURVE_KEYS:
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise InvalidInputError(f"curve field {name} must be finite")
        if not self.y_min < self.y_max:
            raise InvalidInputError(f"empty curve domain [{self.y_min}, {self.y_max}]")
        if self.rms_residual < 0:
            raise InvalidInputError("rms_residual must be >= 0")


def fit_cubic(profile: BackProfile) -> CubicCurve:
    """Least-squares cubic through a back profile.

    The y values are centered and scaled to [-1, 1] internally before
    solving (raw meter-scale cubic design matrices are ill-conditioned) and
    the coefficients are mapped back to the monomial basis afterwards.

    Raises SingularFitError when the design matrix is rank deficient, which
    with the profile invariants can only mean fewer than 4 distinct y
    values slipped through.
    """
    y = profile.y
    z = profile.z
    try:
        series, diagnostics = np.polynomial.Polynomial.fit(y, z, deg=3, full=True)
    except np.linalg.LinAlgError as exc:
        raise SingularFitError(f"cubic fit failed: {exc}") from None
    rank = int(diagnostics[1])
    if rank < 4:
        raise SingularFitError(f"design matrix rank {rank} < 4; need 4 distinct y values")
    coef = series.convert().coef
    coef = np.pad(coef, (0, 4 - len(coef)))
    d0, c0, b0, a0 = (float(v) for v in coef)
    fitted = ((a0 * y + b0) * y + c0) * y + d0
    rms = float(np.sqrt(np.mean((z - fitted) ** 2)))
    return CubicCurve(a=a0, b=b0, c=c0, d=d0, y_min=float(y[0]), y_max=float(y[-1]), rms_residual=rms)


def eval_cubic(curve: CubicCurve, y):
    """Evaluate the cubic at y (scalar or array) by Horner's scheme."""
    out = ((curve.a * y + curve.b) * y + curve.c) * y + curve.d
    if isinstance(out, np.ndarray):
        return out
    return float(out)


def derivative(curve: CubicCurve, y):
    """Slope dz/dy = 3*a*y**2 + 2*b*y + c at y (scalar or array)."""
    out = (3.0 * curve.a * y + 2.0 * curve.b) * y + curve.c
    if isinstance(out, np.ndarray):
        return out
    return float(out)


def curve_to_kv(curve: CubicCurve) -> dict[str, float]:
    """The curve as an ordered key -> float mapping for serialization."""
    return {name: getattr(curve, name) for name in CURVE_KEYS}


def curve_from_kv(raw: dict[str, str], source: str = "curve record") -> CubicCurve:
    """Rebuild a curve from parsed key = value text; extra keys are ignored."""
    try:
        return CubicCurve(**{name: kv_float(raw, name, source) for name in CURVE_KEYS})
    except InvalidInputError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def save_curve(curve: CubicCurve, path, extras: dict[str, object] | None = None) -> None:
    """Write a curve (plus optional extra keys) as a key = value file."""
    entries: dict[str, object] = dict(curve_to_kv(curve))
    for key, value in (extras or {}).items():
        if key in entries:
            raise InvalidInputError(f"extra key {key!r} collides with a curve field")
        entries[key] = value
    write_kv(path, entries, header="fitted cubic back-shape curve")


def load_curve(path) -> CubicCurve:
    return curve_from_kv(read_kv(path), str(path))
