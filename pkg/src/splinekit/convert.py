"""Control-polygon format conversions.

``to_clamped`` (unclamped uniform -> clamped) uses Boehm knot insertion only:
every step is a convex combination, so the direction is numerically stable.
``to_float`` (clamped -> unclamped uniform) reverses those insertions by
corner-cutting in the opposite direction; each solve step is an extrapolation
(affine weights outside [0, 1]), so perturbations of clamped vertices near
the ends are amplified.  Reports carry the largest extrapolation weight used
so callers can see the conditioning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoExactFloatFormError
from .geometry import (
    FORMAT_CLAMPED,
    FORMAT_FLOAT,
    BSplineCurve,
    ControlPolygon,
    curve_of,
    uniform_float_knots,
)

_KNOT_REL_TOL = 1e-9


@dataclass(frozen=True)
class ConversionReport:
    """What a conversion did and how well-conditioned it was.

    ``max_extrapolation_ratio`` is the largest |affine weight| used in any
    non-convex combination; it stays 0.0 for subdivision-only directions.
    """

    direction: str
    inserted_knots: tuple = field(default_factory=tuple)
    removed_knots: tuple = field(default_factory=tuple)
    max_extrapolation_ratio: float = 0.0


def _multiplicity(knots: np.ndarray, value: float) -> int:
    return int(np.count_nonzero(knots == value))


def _boehm_insert(knots: np.ndarray, pts: np.ndarray, p: int, t: float):
    """Raw Boehm insertion on plain arrays; dtype-preserving."""
    k = int(np.clip(np.searchsorted(knots, t, side="right") - 1, p, len(pts) - 1))
    new_pts = np.empty((len(pts) + 1, pts.shape[1]), dtype=pts.dtype)
    new_pts[: k - p + 1] = pts[: k - p + 1]
    for i in range(k - p + 1, k + 1):
        alpha = (t - knots[i]) / (knots[i + p] - knots[i])
        new_pts[i] = (1.0 - alpha) * pts[i - 1] + alpha * pts[i]
    new_pts[k + 1 :] = pts[k:]
    new_knots = np.insert(knots, k + 1, t)
    return new_knots, new_pts


def insert_knot(curve: BSplineCurve, t: float) -> BSplineCurve:
    """Boehm single knot insertion; the curve is unchanged pointwise."""
    p, knots, pts = curve.degree, curve.knots, curve.points
    a, b = curve.domain
    if t < a or t > b:
        raise DomainError(f"insertion parameter {t} outside domain [{a}, {b}]")
    if _multiplicity(knots, t) >= p + 1:
        raise ValueError(f"knot {t} already has full multiplicity {p + 1}")
    new_knots, new_pts = _boehm_insert(knots, pts, p, t)
    return BSplineCurve(degree=p, knots=new_knots, points=new_pts)


def _flip(curve: BSplineCurve) -> BSplineCurve:
    total = curve.knots[0] + curve.knots[-1]
    return BSplineCurve(
        degree=curve.degree,
        knots=(total - curve.knots)[::-1],
        points=curve.points[::-1],
    )


def _clamp_left(curve: BSplineCurve):
    """Insert the left domain knot to multiplicity degree+1, then trim the
    exterior knots and the control points that no longer influence the domain."""
    p = curve.degree
    a = curve.domain[0]
    inserted = []
    work = curve
    for _ in range(p + 1 - _multiplicity(work.knots, a)):
        work = insert_knot(work, a)
        inserted.append(a)
    i0 = int(np.searchsorted(work.knots, a, side="left"))
    removed = work.knots[:i0]
    trimmed = BSplineCurve(degree=p, knots=work.knots[i0:], points=work.points[i0:])
    return trimmed, list(inserted), list(removed)


def _clamp_both(curve: BSplineCurve):
    """Clamp both domain ends; knots are realigned with the input domain."""
    a = curve.domain[0]
    left, ins_l, rem_l = _clamp_left(curve)
    right_flipped, ins_r, rem_r = _clamp_left(_flip(left))
    clamped = _flip(right_flipped)
    total = right_flipped.knots[0] + right_flipped.knots[-1]
    shift = clamped.knots[curve.degree] - a
    if shift != 0.0:
        clamped = BSplineCurve(curve.degree, clamped.knots - shift, clamped.points)
    inserted = tuple(ins_l) + tuple(total - k - shift for k in ins_r)
    removed = tuple(rem_l) + tuple(total - k - shift for k in rem_r)
    return clamped, inserted, removed


def to_clamped(polygon: ControlPolygon) -> tuple[ControlPolygon, ConversionReport]:
    """Convert a float-format polygon to the clamped polygon of the same curve.

    Subdivision steps only; the first/last clamped vertices lie on the curve
    and the terminal legs align with the end tangents.
    """
    if polygon.format != FORMAT_FLOAT:
        raise ValueError("to_clamped expects a float-format polygon")
    clamped, inserted, removed = _clamp_both(curve_of(polygon))
    report = ConversionReport(
        direction="float->clamped",
        inserted_knots=inserted,
        removed_knots=removed,
        max_extrapolation_ratio=0.0,
    )
    out = ControlPolygon(
        degree=polygon.degree,
        vertices=clamped.points,
        format=FORMAT_CLAMPED,
        knots=clamped.knots,
    )
    return out, report


def _uniform_spacing(knots: np.ndarray, degree: int, count: int) -> float:
    """Spacing of the unique knots; raises if interior structure rules out an
    exact unclamped-uniform representation."""
    a, b = float(knots[degree]), float(knots[count])
    interior = knots[(knots > a) & (knots < b)]
    uniq, mult = np.unique(interior, return_counts=True)
    if np.any(mult > 1):
        raise NoExactFloatFormError("interior knot multiplicities must all be 1")
    levels = np.concatenate([[a], uniq, [b]])
    gaps = np.diff(levels)
    h = gaps[0]
    if np.any(np.abs(gaps - h) > _KNOT_REL_TOL * (b - a)):
        raise NoExactFloatFormError("interior knots must be uniformly spaced")
    return float(h)


def _unclamp_left(curve: BSplineCurve, h: float):
    """Reverse the left-end clamping insertions; returns the curve with the
    left exterior knots restored and the max extrapolation weight used.

    The triangular relations are seeded at the innermost affected vertex
    (which the clamped polygon still carries) and solved toward the boundary;
    every step divides by (1 - alpha), an extrapolation.
    """
    p = curve.degree
    pts = curve.points
    n_pts = len(pts)
    a = float(curve.knots[0])
    rest = curve.knots[p + 1 :]  # knots strictly after the left cluster
    exterior = a - h * np.arange(p, 0, -1)

    # g holds G^(j) with NaN in the (unknown, never-read) leading entries.
    g = np.full((n_pts + p, curve.dim), np.nan)
    g[p:] = pts
    max_ratio = 0.0
    for j in range(p, 0, -1):
        # knot vector before the j-th forward insertion: cluster of j copies of a
        knots_prev = np.concatenate([exterior, np.full(j, a), rest])
        k = p + j - 1
        prev = np.full((len(g) - 1, curve.dim), np.nan)
        prev[k:] = g[k + 1 :]
        for i in range(k, j - 1, -1):
            alpha = (a - knots_prev[i]) / (knots_prev[i + p] - knots_prev[i])
            if alpha == 0.0:
                prev[i - 1] = g[i]
            else:
                w = 1.0 / (1.0 - alpha)
                max_ratio = max(max_ratio, abs(w), abs(alpha * w))
                prev[i - 1] = w * (g[i] - alpha * prev[i])
        g = prev
    unclamped = BSplineCurve(
        degree=p, knots=np.concatenate([exterior, [a], rest]), points=g
    )
    return unclamped, max_ratio


def to_float(polygon: ControlPolygon) -> tuple[ControlPolygon, ConversionReport]:
    """Convert a clamped polygon to the unique float-format polygon of the
    same curve.

    Requires simple, uniformly spaced interior knots (any such clamped
    polygon defines a C^(degree-1) spline with an exact float form).  The
    direction is ill-conditioned by nature; the report carries the largest
    extrapolation weight used.
    """
    if polygon.format != FORMAT_CLAMPED:
        raise ValueError("to_float expects a clamped polygon")
    curve = curve_of(polygon)
    h = _uniform_spacing(curve.knots, curve.degree, curve.count)
    removed = list(curve.knots[: curve.degree]) + list(curve.knots[-curve.degree :])
    left, ratio_l = _unclamp_left(curve, h)
    right_flipped, ratio_r = _unclamp_left(_flip(left), h)
    full = _flip(right_flipped)
    uniform = uniform_float_knots(full.count, full.degree)
    span = full.knots[-1] - full.knots[0]
    if np.any(np.abs((full.knots - full.knots[0]) / h - uniform) > _KNOT_REL_TOL * span):
        raise NoExactFloatFormError("unclamped knots failed the uniformity check")
    out = ControlPolygon(degree=full.degree, vertices=full.points, format=FORMAT_FLOAT)
    report = ConversionReport(
        direction="clamped->float",
        inserted_knots=(),
        removed_knots=tuple(removed),
        max_extrapolation_ratio=float(max(ratio_l, ratio_r)),
    )
    return out, report


def _extract_segments_raw(knots: np.ndarray, pts: np.ndarray, p: int, dtype=float):
    """Bezier extraction on raw arrays: clamp both ends (with trims), raise
    every interior knot to multiplicity p, slice per span.

    Returns (breaks, segment point arrays).  All arithmetic runs in ``dtype``
    so callers needing high-order end derivatives can use extended precision.
    """
    knots = np.asarray(knots, dtype=dtype)
    pts = np.asarray(pts, dtype=dtype)
    a, b = knots[p], knots[len(pts)]
    orig_a = a
    for end_flip in (False, True):
        if end_flip:
            total = knots[0] + knots[-1]
            knots = (total - knots)[::-1].copy()
            pts = pts[::-1].copy()
            a, b = total - b, total - a
        for _ in range(p + 1 - _multiplicity(knots, a)):
            knots, pts = _boehm_insert(knots, pts, p, a)
        i0 = int(np.searchsorted(knots, a, side="left"))
        knots, pts = knots[i0:], pts[i0:]
    total = knots[0] + knots[-1]
    knots = (total - knots)[::-1].copy()
    pts = pts[::-1].copy()
    a, b = total - b, total - a
    knots = knots - (knots[p] - orig_a)  # realign with the input domain
    b = b - (a - orig_a)
    a = orig_a
    for value in np.unique(knots[(knots > a) & (knots < b)]):
        for _ in range(p - _multiplicity(knots, value)):
            knots, pts = _boehm_insert(knots, pts, p, value)
    breaks = np.unique(knots)
    segments = [pts[i * p : i * p + p + 1] for i in range(len(breaks) - 1)]
    return breaks, segments


def extract_bezier_segments(curve: BSplineCurve) -> list[ControlPolygon]:
    """Per-span Bezier polygons via insertion to full interior multiplicity.

    Concatenated evaluation of the returned segments is identical to the
    original curve.
    """
    p = curve.degree
    breaks, seg_points = _extract_segments_raw(curve.knots, curve.points, p)
    segments = []
    for i, pts in enumerate(seg_points):
        knots = np.concatenate([np.full(p + 1, breaks[i]), np.full(p + 1, breaks[i + 1])])
        segments.append(
            ControlPolygon(degree=p, vertices=pts, format=FORMAT_CLAMPED, knots=knots)
        )
    return segments
