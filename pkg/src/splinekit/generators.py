"""Generators for experimental inputs: geometric-progression (Mineur-Farin)
polygons, circle-arc Bezier polygons, and analytic curves sampled into
float-format polygons."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import (
    FORMAT_CLAMPED,
    ControlPolygon,
    as_points,
    make_float_polygon,
)


@dataclass(frozen=True)
class MineurFarinParams:
    """Polygon with geometrically growing legs at a constant turning angle.

    ``q`` is the leg elongation coefficient (q = 1 gives equal legs, the
    constant-curvature limiting case), ``theta`` the in-plane turning angle
    between consecutive legs, ``phi`` the torsion angle applied about each new
    leg direction (3D only).
    """

    L0: float
    q: float
    theta: float
    count: int
    phi: float = 0.0
    start: tuple = (0.0, 0.0)
    start_dir: tuple = (1.0, 0.0)
    normal: tuple | None = None  # 3D turning-plane normal, default +z

    def __post_init__(self):
        if self.L0 <= 0:
            raise ValueError("L0 must be positive")
        if self.q <= 0:
            raise ValueError("q must be positive")
        if self.count < 2:
            raise ValueError("count must be >= 2")
        if len(self.start) != len(self.start_dir) or len(self.start) not in (2, 3):
            raise ValueError("start and start_dir must both be 2D or 3D")


def _rotate_2d(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _rotate_about_axis(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    axis = axis / np.linalg.norm(axis)
    c, s = np.cos(angle), np.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


def mineur_farin_vertices(p: MineurFarinParams) -> np.ndarray:
    """Vertex sequence V_{k+1} = V_k + L0 q^k dir_k with dir_k turned by theta
    each step (and the turning plane twisted by phi about dir_k in 3D)."""
    dim = len(p.start)
    v = np.asarray(p.start, dtype=float)
    d = np.asarray(p.start_dir, dtype=float)
    d = d / np.linalg.norm(d)
    verts = [v.copy()]
    if dim == 2:
        for k in range(p.count - 1):
            verts.append(verts[-1] + p.L0 * p.q**k * d)
            d = _rotate_2d(d, p.theta)
    else:
        n = np.array([0.0, 0.0, 1.0]) if p.normal is None else np.asarray(p.normal, float)
        n = n - np.dot(n, d) * d
        if np.linalg.norm(n) < 1e-12:
            raise ValueError("turning-plane normal parallel to start_dir")
        n = n / np.linalg.norm(n)
        for k in range(p.count - 1):
            verts.append(verts[-1] + p.L0 * p.q**k * d)
            d = _rotate_about_axis(d, n, p.theta)
            n = _rotate_about_axis(n, d, p.phi)
    return as_points(np.array(verts))


def mineur_farin_polygon(p: MineurFarinParams, degree: int) -> ControlPolygon:
    """Mineur-Farin vertices wrapped as a float-format polygon."""
    return make_float_polygon(mineur_farin_vertices(p), degree)


def bezier_arc_polygon(a, b, center, degree: int) -> ControlPolygon:
    """Clamped Bezier polygon approximating the circular arc from a to b.

    Terminal vertices sit exactly on a and b; the terminal legs follow the
    circle tangents there; all legs share one length and consecutive legs all
    turn by the same angle (the arc angle split over the degree - 1 joints).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    center = np.asarray(center, dtype=float)
    if a.shape != (2,) or b.shape != (2,) or center.shape != (2,):
        raise ValueError("bezier_arc_polygon is 2D only")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    ra = np.linalg.norm(a - center)
    rb = np.linalg.norm(b - center)
    if ra == 0 or abs(ra - rb) > 1e-9 * max(ra, rb):
        raise ValueError(f"endpoints must share a radius: |a-c|={ra:.12g}, |b-c|={rb:.12g}")
    ang_a = np.arctan2(a[1] - center[1], a[0] - center[0])
    ang_b = np.arctan2(b[1] - center[1], b[0] - center[0])
    delta = (ang_b - ang_a + np.pi) % (2.0 * np.pi) - np.pi
    knots = np.concatenate([np.zeros(degree + 1), np.ones(degree + 1)])
    if degree == 1:
        if delta != 0.0:
            warnings.warn("degree 1 cannot satisfy arc tangents; returning the chord")
        return ControlPolygon(1, np.array([a, b]), FORMAT_CLAMPED, knots)
    radial = (a - center) / ra
    tangent = np.array([-radial[1], radial[0]]) * (1.0 if delta >= 0 else -1.0)
    step = delta / (degree - 1)
    dirs = np.array([_rotate_2d(tangent, k * step) for k in range(degree)])
    resultant = dirs.sum(axis=0)
    leg = np.linalg.norm(b - a) / np.linalg.norm(resultant)
    verts = np.empty((degree + 1, 2))
    verts[0] = a
    for k in range(degree):
        verts[k + 1] = verts[k] + leg * dirs[k]
    verts[degree] = b
    return ControlPolygon(degree, verts, FORMAT_CLAMPED, knots)


@dataclass(frozen=True)
class AnalyticCurve:
    """Closed-form curve: evaluator plus first three derivatives.

    ``point`` and each derivative accept scalars or arrays of the parameter.
    """

    name: str
    dim: int
    domain: tuple
    point_fn: Callable = field(repr=False)
    deriv_fns: tuple = field(repr=False)  # (d1, d2, d3)

    def point(self, t):
        return self.point_fn(np.asarray(t, dtype=float))

    def derivatives(self, t, order: int):
        if not 1 <= order <= len(self.deriv_fns):
            raise ValueError(f"order must be in 1..{len(self.deriv_fns)}")
        t = np.asarray(t, dtype=float)
        return [fn(t) for fn in self.deriv_fns[:order]]


def _stack(*cols):
    cols = [np.asarray(c, dtype=float) for c in cols]
    if cols[0].ndim == 0:
        return np.array(cols)
    return np.column_stack(cols)


def conical_spiral() -> AnalyticCurve:
    """Spatial spiral (2 + s sin s, 2 + s cos s, s) with closed-form derivatives."""

    def pt(s):
        return _stack(2.0 + s * np.sin(s), 2.0 + s * np.cos(s), s)

    def d1(s):
        return _stack(np.sin(s) + s * np.cos(s), np.cos(s) - s * np.sin(s), np.ones_like(s))

    def d2(s):
        return _stack(2.0 * np.cos(s) - s * np.sin(s), -2.0 * np.sin(s) - s * np.cos(s), np.zeros_like(s))

    def d3(s):
        return _stack(-3.0 * np.sin(s) - s * np.cos(s), -3.0 * np.cos(s) + s * np.sin(s), np.zeros_like(s))

    return AnalyticCurve(
        name="conical-spiral",
        dim=3,
        domain=(0.0, 25.0),
        point_fn=pt,
        deriv_fns=(d1, d2, d3),
    )


def analytic_circle(radius: float = 1.0, center=(0.0, 0.0)) -> AnalyticCurve:
    """Parametric circle, mainly an oracle curve for tests."""
    cx, cy = float(center[0]), float(center[1])
    r = float(radius)

    def pt(t):
        return _stack(cx + r * np.cos(t), cy + r * np.sin(t))

    def d1(t):
        return _stack(-r * np.sin(t), r * np.cos(t))

    def d2(t):
        return _stack(-r * np.cos(t), -r * np.sin(t))

    def d3(t):
        return _stack(r * np.sin(t), -r * np.cos(t))

    return AnalyticCurve(
        name="circle",
        dim=2,
        domain=(0.0, 2.0 * np.pi),
        point_fn=pt,
        deriv_fns=(d1, d2, d3),
    )


CURVE_REGISTRY = {
    "conical-spiral": conical_spiral,
    "circle": analytic_circle,
}


@dataclass(frozen=True)
class SamplingSpec:
    """Uniform parameter sampling: s0, s0 + h, ..., s0 + (count - 1) h."""

    s0: float
    h: float
    count: int

    def __post_init__(self):
        if self.h == 0:
            raise ValueError("step h must be nonzero")
        if self.count < 2:
            raise ValueError("count must be >= 2")

    @property
    def parameters(self) -> np.ndarray:
        return self.s0 + self.h * np.arange(self.count)


def sample_analytic_to_polygon(curve: AnalyticCurve, spec: SamplingSpec, degree: int) -> ControlPolygon:
    """Float polygon whose vertices are curve points at the sampled parameters."""
    if spec.count < degree + 1:
        raise ValueError(f"need at least degree + 1 = {degree + 1} samples")
    return make_float_polygon(curve.point(spec.parameters), degree)
