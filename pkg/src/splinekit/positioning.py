"""End-point positioning for float polygons and composite-curve construction.

A float polygon does not interpolate its terminal vertices, so hitting a
prescribed endpoint/tangent takes a correction: measure the mismatch on the
clamped form, then rigidly move the ``degree`` terminal vertices (the curve
point and tangent at a domain end depend on those alone, making one pass
exact).  Joining float polygons by concatenation keeps the automatic
C^(degree-1) smoothness of the uniform representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convert import _extract_segments_raw, to_clamped
from .errors import RegularityError
from .geometry import FORMAT_FLOAT, BSplineCurve, ControlPolygon
from .metrics import HarmonicityReport, HarmonicitySpec, harmonicity_report

EPS_LEG = 1e-12


@dataclass(frozen=True)
class EndTarget:
    """Desired endpoint and tangent direction for one end of a curve."""

    endpoint: np.ndarray
    tangent_dir: np.ndarray
    which_end: str  # "start" | "end"

    def __post_init__(self):
        e = np.asarray(self.endpoint, dtype=float)
        d = np.asarray(self.tangent_dir, dtype=float)
        if self.which_end not in ("start", "end"):
            raise ValueError("which_end must be 'start' or 'end'")
        if e.shape != d.shape or e.shape[0] not in (2, 3):
            raise ValueError("endpoint and tangent_dir must both be 2D or 3D")
        norm = np.linalg.norm(d)
        if abs(norm - 1.0) > 1e-12:
            if norm < EPS_LEG:
                raise ValueError("tangent_dir must be nonzero")
            d = d / norm
        object.__setattr__(self, "endpoint", e)
        object.__setattr__(self, "tangent_dir", d)


@dataclass(frozen=True)
class EndMismatch:
    """Offset from actual to target endpoint plus the tangent angle difference.

    ``axis`` is the rotation axis for 3D corrections (None in 2D, where the
    angle is signed in the plane).
    """

    d: np.ndarray
    alpha: float
    axis: np.ndarray | None = None


def _end_state(polygon: ControlPolygon, which_end: str):
    """Actual endpoint and unit tangent of a float polygon, read off the
    clamped form's terminal vertex and leg."""
    clamped, _ = to_clamped(polygon)
    v = clamped.vertices
    if which_end == "start":
        point, leg = v[0], v[1] - v[0]
    else:
        point, leg = v[-1], v[-1] - v[-2]
    norm = np.linalg.norm(leg)
    if norm < EPS_LEG:
        raise RegularityError("degenerate terminal leg")
    return point, leg / norm


def measure_end_mismatch(polygon: ControlPolygon, target: EndTarget) -> EndMismatch:
    """Positional and angular mismatch between a float polygon's end and a target."""
    if polygon.format != FORMAT_FLOAT:
        raise ValueError("measure_end_mismatch expects a float polygon")
    point, tangent = _end_state(polygon, target.which_end)
    d = target.endpoint - point
    t_goal = target.tangent_dir
    cosang = float(np.clip(np.dot(tangent, t_goal), -1.0, 1.0))
    if polygon.dim == 2:
        sinang = float(tangent[0] * t_goal[1] - tangent[1] * t_goal[0])
        alpha = float(np.arctan2(sinang, cosang))
        axis = None
    else:
        cross = np.cross(tangent, t_goal)
        sinang = float(np.linalg.norm(cross))
        alpha = float(np.arctan2(sinang, cosang))
        axis = cross / sinang if sinang > EPS_LEG else None
    return EndMismatch(d=d, alpha=alpha, axis=axis)


def _rotation_matrix(dim: int, alpha: float, axis) -> np.ndarray:
    if dim == 2:
        c, s = np.cos(alpha), np.sin(alpha)
        return np.array([[c, -s], [s, c]])
    if axis is None:
        return np.eye(3)
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    c, s = np.cos(alpha), np.sin(alpha)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + s * K + (1.0 - c) * (K @ K)


def apply_end_correction(
    polygon: ControlPolygon,
    mismatch: EndMismatch,
    which_end: str,
    m_count: int | None = None,
    damping: float = 1.0,
) -> ControlPolygon:
    """Translate the m_count terminal vertices by d, then rotate them about the
    new target endpoint by alpha.

    With m_count = degree (the default) one pass is exact: the curve endpoint
    and end tangent depend only on those vertices.
    """
    if polygon.format != FORMAT_FLOAT:
        raise ValueError("apply_end_correction expects a float polygon")
    if not 0.0 < damping <= 1.0:
        raise ValueError("damping must be in (0, 1]")
    m = polygon.degree if m_count is None else m_count
    if m < 1 or m > polygon.count:
        raise ValueError(f"m_count must be in 1..{polygon.count}")
    verts = np.array(polygon.vertices)
    block = slice(0, m) if which_end == "start" else slice(len(verts) - m, len(verts))
    moved = verts[block] + damping * mismatch.d
    point, _ = _end_state(polygon, which_end)
    pivot = point + damping * mismatch.d  # the endpoint after translation
    rot = _rotation_matrix(polygon.dim, damping * mismatch.alpha, mismatch.axis)
    verts[block] = (moved - pivot) @ rot.T + pivot
    return ControlPolygon(polygon.degree, verts, FORMAT_FLOAT)


@dataclass(frozen=True)
class PositioningReport:
    iterations: int
    converged: bool
    pos_errors: dict
    ang_errors: dict
    harmonicity: HarmonicityReport


def _fair_interior(polygon: ControlPolygon, strength: float = 0.25) -> ControlPolygon:
    """One Laplacian fairing pass over vertices degree..count-degree-1 only,
    so end blocks are never touched."""
    n, count = polygon.degree, polygon.count
    lo, hi = n, count - n  # half-open interior range
    if hi - lo <= 0:
        return polygon
    verts = np.array(polygon.vertices)
    mid = 0.5 * (verts[lo - 1 : hi - 1] + verts[lo + 1 : hi + 1])
    verts[lo:hi] = (1.0 - strength) * verts[lo:hi] + strength * mid
    return ControlPolygon(n, verts, FORMAT_FLOAT)


def position_endpoints(
    polygon: ControlPolygon,
    targets: list[EndTarget],
    spec: HarmonicitySpec | None = None,
    tol_pos: float | None = None,
    tol_ang: float = 1e-9,
    max_iter: int = 100,
    fair: bool = True,
    m_count: int | None = None,
    damping: float = 1.0,
) -> tuple[ControlPolygon, PositioningReport]:
    """Iterate measure/correct (and optionally fair) until both the mismatch
    tolerances and the harmonicity spec are satisfied.

    The default tol_pos is 1e-9 times the polygon diameter.  On failure the
    best iterate is returned with converged=False.
    """
    if polygon.format != FORMAT_FLOAT:
        raise ValueError("position_endpoints expects a float polygon")
    if not targets or len(targets) > 2:
        raise ValueError("need 1 or 2 targets")
    ends = [t.which_end for t in targets]
    if len(set(ends)) != len(ends):
        raise ValueError("at most one target per end")
    if len(targets) == 2 and 2 * polygon.degree > polygon.count:
        raise ValueError(
            "end blocks overlap: need 2 * degree <= vertex count to target both ends"
        )
    if spec is None:
        spec = HarmonicitySpec()
    if tol_pos is None:
        spread = polygon.vertices.max(axis=0) - polygon.vertices.min(axis=0)
        tol_pos = 1e-9 * float(np.linalg.norm(spread))

    work = polygon
    best = None
    best_key = None
    iterations = 0
    for iterations in range(max_iter + 1):
        mismatches = {t.which_end: measure_end_mismatch(work, t) for t in targets}
        pos_errors = {end: float(np.linalg.norm(m.d)) for end, m in mismatches.items()}
        ang_errors = {end: abs(m.alpha) for end, m in mismatches.items()}
        harmony = harmonicity_report(work, spec)
        on_target = max(pos_errors.values()) <= tol_pos and max(ang_errors.values()) <= tol_ang
        key = (0 if on_target else 1, max(pos_errors.values()) + max(ang_errors.values()))
        if best_key is None or key < best_key:
            best, best_key = (work, pos_errors, ang_errors, harmony), key
        if on_target and harmony.passed:
            report = PositioningReport(
                iterations=iterations,
                converged=True,
                pos_errors=pos_errors,
                ang_errors=ang_errors,
                harmonicity=harmony,
            )
            return work, report
        if iterations == max_iter:
            break
        for t in targets:
            m = measure_end_mismatch(work, t)
            work = apply_end_correction(work, m, t.which_end, m_count, damping)
        if fair:
            work = _fair_interior(work)
    work, pos_errors, ang_errors, harmony = best
    report = PositioningReport(
        iterations=iterations,
        converged=False,
        pos_errors=pos_errors,
        ang_errors=ang_errors,
        harmonicity=harmony,
    )
    return work, report


def join_float_polygons(a: ControlPolygon, b: ControlPolygon, bridge=None) -> ControlPolygon:
    """Concatenate two float polygons (with optional bridge vertices between).

    The composite uniform B-spline is automatically C^(degree-1) everywhere.
    """
    if a.format != FORMAT_FLOAT or b.format != FORMAT_FLOAT:
        raise ValueError("join expects float polygons")
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} != {b.degree}")
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    parts = [a.vertices]
    if bridge is not None and len(bridge):
        mid = np.asarray(bridge, dtype=float)
        if mid.ndim != 2 or mid.shape[1] != a.dim:
            raise ValueError("bridge must be a list of points of matching dimension")
        parts.append(mid)
    parts.append(b.vertices)
    return ControlPolygon(a.degree, np.vstack(parts), FORMAT_FLOAT)


def default_bridge(a: ControlPolygon, b: ControlPolygon, count: int) -> np.ndarray:
    """Bridge vertices blending the exit ray of ``a`` into the entry ray of ``b``.

    Points interpolate between the two tangent rays at uniform fractions; a
    heuristic, not an optimizer -- callers may pass any vertex list instead.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    pa, ta = _end_state(a, "end")
    pb, tb = _end_state(b, "start")
    dist = float(np.linalg.norm(pb - pa))
    u = np.arange(1, count + 1) / (count + 1)
    ray_a = pa[None, :] + np.outer(u * dist, ta)
    ray_b = pb[None, :] - np.outer((1.0 - u) * dist, tb)
    return (1.0 - u)[:, None] * ray_a + u[:, None] * ray_b


def _bezier_end_derivatives(points: np.ndarray, span: float, at_start: bool, max_order: int):
    """One-sided derivatives (orders 1..max_order) of a Bezier segment from
    its difference table, with per-order magnitude scales and the resolution
    limit a float64 representation of the data imposes on each order."""
    n = len(points) - 1
    pts = points if at_start else points[::-1]
    sign = 1.0 if at_start else -1.0
    eps64 = float(np.finfo(np.float64).eps)
    magnitude = float(np.max(np.sqrt(np.sum((points * points).astype(float), axis=1))))
    derivs = []
    scales = []
    floors = []
    diff = np.array(pts)
    factor = 1.0
    for k in range(1, max_order + 1):
        diff = np.diff(diff, axis=0)
        factor *= (n - k + 1) / span
        derivs.append(sign**k * factor * diff[0])
        norms = np.sqrt(np.sum(diff * diff, axis=1))
        scales.append(factor * float(np.max(norms)))
        floors.append(factor * 2.0**k * eps64 * magnitude)
    return derivs, scales, floors


def junction_smoothness_check(curve: BSplineCurve, t0: float, max_order: int) -> list[float]:
    """Relative one-sided derivative jumps at an interior knot, orders 1..max_order.

    Jumps come from the adjacent Bezier segments' exact derivatives,
    normalized by the larger per-order derivative-magnitude scale of the two
    segments (0 when both sides vanish identically).  High-order difference
    tables cancel heavily, so extraction runs in extended precision.
    """
    if max_order < 1 or max_order > curve.degree:
        raise ValueError(f"max_order must be in 1..{curve.degree}")
    a, b = curve.domain
    interior = np.unique(curve.knots[(curve.knots > a) & (curve.knots < b)])
    hits = interior[np.isclose(interior, t0, rtol=0, atol=1e-9 * max(1.0, abs(b - a)))]
    if len(hits) == 0:
        raise ValueError(f"{t0} is not an interior knot")
    t0 = float(hits[0])
    breaks, seg_points = _extract_segments_raw(
        curve.knots, curve.points, curve.degree, dtype=np.longdouble
    )
    idx = int(np.argmin(np.abs(breaks.astype(float) - t0)))
    if idx == 0 or idx == len(breaks) - 1:
        raise ValueError(f"could not locate segments adjacent to {t0}")
    left, right = seg_points[idx - 1], seg_points[idx]
    span_l = float(breaks[idx] - breaks[idx - 1])
    span_r = float(breaks[idx + 1] - breaks[idx])
    d_left, s_left, f_left = _bezier_end_derivatives(left, span_l, at_start=False, max_order=max_order)
    d_right, s_right, f_right = _bezier_end_derivatives(right, span_r, at_start=True, max_order=max_order)
    jumps = []
    for k in range(max_order):
        scale = max(s_left[k], s_right[k])
        floor = max(f_left[k], f_right[k])
        if scale <= floor:
            # both sides' derivatives vanish at the resolution the float64
            # data admits: numerically zero, no jump
            jumps.append(0.0)
            continue
        gap = d_right[k] - d_left[k]
        gap = float(np.sqrt(np.sum((gap * gap).astype(float))))
        jumps.append(gap / scale)
    return jumps
