"""Core value types: points, knot vectors, control polygons and B-spline curves.

Two polygon formats are supported throughout the kernel:

* ``float``   -- unclamped uniform knots ``0, 1, ..., N + n`` (implied, never
  stored).  The curve lives on ``[n, N]`` and does not interpolate the
  terminal vertices.
* ``clamped`` -- end knots of multiplicity ``n + 1`` (stored explicitly).
  The curve interpolates the terminal vertices and its end legs align with
  the end tangents.

All types are immutable values; arrays are defensively copied and marked
read-only, so instances are safe to share between threads.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

FORMAT_FLOAT = "float"
FORMAT_CLAMPED = "clamped"


def as_points(points, dim: int | None = None) -> np.ndarray:
    """Coerce to a read-only (N, dim) float array, dim in {2, 3}.

    Raises ValueError on non-finite coordinates or inconsistent dimension.
    """
    pts = np.array(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise ValueError(f"points must be an (N, 2) or (N, 3) array, got shape {pts.shape}")
    if dim is not None and pts.shape[1] != dim:
        raise ValueError(f"expected dim {dim}, got {pts.shape[1]}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    pts.setflags(write=False)
    return pts


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def uniform_float_knots(count: int, degree: int) -> np.ndarray:
    """Implied knot vector of a float-format polygon: 0, 1, ..., count + degree."""
    return _frozen(np.arange(count + degree + 1, dtype=float))


def clamped_knots(count: int, degree: int, a: float = 0.0, b: float = 1.0) -> np.ndarray:
    """Clamped knot vector on [a, b] with uniformly spaced simple interior knots."""
    segments = count - degree
    if segments < 1:
        raise ValueError("need at least degree + 1 control points")
    interior = a + (b - a) * np.arange(1, segments) / segments
    return _frozen(np.concatenate([[a] * (degree + 1), interior, [b] * (degree + 1)]))


def validate_knots(knots: np.ndarray, degree: int) -> None:
    if len(knots) < 2 * (degree + 1):
        raise ValueError("knot vector too short")
    if np.any(np.diff(knots) < 0):
        raise ValueError("knot vector must be nondecreasing")


def is_clamped(knots: np.ndarray, degree: int) -> bool:
    k = np.asarray(knots)
    return bool(np.all(k[: degree + 1] == k[0]) and np.all(k[-(degree + 1):] == k[-1]))


@dataclass(frozen=True, eq=False)
class ControlPolygon:
    """Ordered control vertices plus degree and format tag.

    For ``float`` format the uniform knot vector is implied and ``knots`` must
    be None; for ``clamped`` format the knot vector is stored.
    """

    degree: int
    vertices: np.ndarray
    format: str = FORMAT_FLOAT
    knots: np.ndarray | None = None

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        object.__setattr__(self, "vertices", as_points(self.vertices))
        if len(self.vertices) < self.degree + 1:
            raise ValueError(
                f"need at least {self.degree + 1} vertices for degree {self.degree}, "
                f"got {len(self.vertices)}"
            )
        if self.format == FORMAT_FLOAT:
            if self.knots is not None:
                raise ValueError("float format implies uniform knots; do not pass any")
        elif self.format == FORMAT_CLAMPED:
            if self.knots is None:
                raise ValueError("clamped format requires an explicit knot vector")
            knots = _frozen(self.knots)
            validate_knots(knots, self.degree)
            if len(knots) != len(self.vertices) + self.degree + 1:
                raise ValueError("knot count must equal vertex count + degree + 1")
            if not is_clamped(knots, self.degree):
                raise ValueError("knot vector is not clamped")
            object.__setattr__(self, "knots", knots)
        else:
            raise ValueError(f"unknown format {self.format!r}")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def count(self) -> int:
        return len(self.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, ControlPolygon)
            and self.degree == other.degree
            and self.format == other.format
            and np.array_equal(self.vertices, other.vertices)
            and (
                (self.knots is None and other.knots is None)
                or (
                    self.knots is not None
                    and other.knots is not None
                    and np.array_equal(self.knots, other.knots)
                )
            )
        )


@dataclass(frozen=True, eq=False)
class BSplineCurve:
    """Piecewise-polynomial curve: degree, explicit knots and control points."""

    degree: int
    knots: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "knots", _frozen(self.knots))
        object.__setattr__(self, "points", as_points(self.points))
        validate_knots(self.knots, self.degree)
        if len(self.points) != len(self.knots) - self.degree - 1:
            raise ValueError("point count must equal knot count - degree - 1")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.knots[self.degree]), float(self.knots[self.count])

    @property
    def segment_count(self) -> int:
        a, b = self.domain
        inner = self.knots[(self.knots > a) & (self.knots < b)]
        return len(np.unique(inner)) + 1

    def point(self, t):
        from . import evaluate

        return evaluate.de_boor_point(self, t)

    def derivatives(self, t, order: int):
        from . import evaluate

        return evaluate.derivatives(self, t, order)

    def __eq__(self, other):
        return (
            isinstance(other, BSplineCurve)
            and self.degree == other.degree
            and np.array_equal(self.knots, other.knots)
            and np.array_equal(self.points, other.points)
        )


def regular_polygon_vertices(
    n_vertices: int, radius: float, start_angle: float = 0.0, orientation: str = "ccw"
) -> np.ndarray:
    """Vertices of a regular polygon inscribed in the circle of ``radius`` at the origin.

    Angular step is 2*pi/n_vertices starting at ``start_angle`` (radians),
    counterclockwise for ``ccw`` and clockwise for ``cw``.
    """
    if n_vertices < 3:
        raise ValueError("need at least 3 vertices")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if orientation not in ("cw", "ccw"):
        raise ValueError(f"orientation must be 'cw' or 'ccw', got {orientation!r}")
    sign = 1.0 if orientation == "ccw" else -1.0
    ang = start_angle + sign * 2.0 * np.pi * np.arange(n_vertices) / n_vertices
    return as_points(radius * np.column_stack([np.cos(ang), np.sin(ang)]))


def make_float_polygon(points, degree: int) -> ControlPolygon:
    """Wrap a vertex list as a float-format polygon of the given degree."""
    return ControlPolygon(degree=degree, vertices=points, format=FORMAT_FLOAT)


def make_clamped_polygon(points, degree: int, knots=None) -> ControlPolygon:
    """Wrap a vertex list as a clamped polygon; default knots are uniform on [0, 1]."""
    pts = as_points(points)
    if knots is None:
        knots = clamped_knots(len(pts), degree)
    return ControlPolygon(degree=degree, vertices=pts, format=FORMAT_CLAMPED, knots=knots)


def curve_of(polygon: ControlPolygon) -> BSplineCurve:
    """Evaluable curve of a polygon: implied uniform knots for float, stored otherwise."""
    if polygon.format == FORMAT_FLOAT:
        knots = uniform_float_knots(polygon.count, polygon.degree)
    else:
        knots = polygon.knots
    return BSplineCurve(degree=polygon.degree, knots=knots, points=polygon.vertices)


def polygon_of(curve: BSplineCurve) -> ControlPolygon:
    """Inverse of curve_of; requires the knot vector to be uniform-float or clamped."""
    uniform = uniform_float_knots(curve.count, curve.degree)
    if np.array_equal(curve.knots, uniform):
        return ControlPolygon(curve.degree, curve.points, FORMAT_FLOAT)
    if is_clamped(curve.knots, curve.degree):
        return ControlPolygon(curve.degree, curve.points, FORMAT_CLAMPED, curve.knots)
    raise ValueError("curve knots are neither uniform-float nor clamped")


# ---------------------------------------------------------------------------
# Polygon JSON interchange format (used by all CLI commands)
# ---------------------------------------------------------------------------

def polygon_to_dict(polygon: ControlPolygon) -> dict:
    data = {
        "degree": polygon.degree,
        "format": polygon.format,
        "dim": polygon.dim,
        "points": [[float(x) for x in p] for p in polygon.vertices],
    }
    if polygon.format == FORMAT_CLAMPED:
        data["knots"] = [float(k) for k in polygon.knots]
    return data


def polygon_from_dict(data: dict) -> ControlPolygon:
    fmt = data["format"]
    knots = data.get("knots")
    if fmt == FORMAT_FLOAT and knots is not None:
        raise ValueError("float format must not carry knots")
    pts = as_points(data["points"], dim=data.get("dim"))
    return ControlPolygon(degree=int(data["degree"]), vertices=pts, format=fmt, knots=knots)


def save_polygon(polygon: ControlPolygon, path) -> None:
    """Write polygon JSON atomically with 17 significant digits."""
    text = json.dumps(polygon_to_dict(polygon), indent=2)
    write_text_atomic(path, text + "\n")


def load_polygon(path) -> ControlPolygon:
    with open(path, "r", encoding="utf-8") as fh:
        return polygon_from_dict(json.load(fh))


def write_text_atomic(path, text: str) -> None:
    """Write via a temp file + rename so partial output is never left behind."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
