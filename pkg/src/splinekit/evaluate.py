"""Curve evaluation and differential geometry.

Point evaluation uses the de Boor triangular scheme (convex combinations
only); derivatives come from exact derivative-spline construction with
differenced control points.  Curvature/torsion/evolute and the circle
accuracy metric build on those.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CurvatureSingularityError, DomainError, RegularityError
from .geometry import BSplineCurve

EPS_REGULAR = 1e-12
EPS_CURVATURE = 1e-12

_DOMAIN_SLACK = 1e-9


def _check_domain(curve, t: np.ndarray) -> np.ndarray:
    a, b = curve.domain
    slack = _DOMAIN_SLACK * (b - a)
    if np.any(t < a - slack) or np.any(t > b + slack):
        raise DomainError(f"parameter outside domain [{a}, {b}]")
    return np.clip(t, a, b)


def _find_spans(knots: np.ndarray, degree: int, count: int, t: np.ndarray) -> np.ndarray:
    spans = np.searchsorted(knots, t, side="right") - 1
    return np.clip(spans, degree, count - 1)


def _de_boor_raw(knots, points, degree, t):
    """Vectorized de Boor over an array of parameters; no domain check."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    spans = _find_spans(knots, degree, len(points), t)
    idx = spans[:, None] + np.arange(-degree, 1)[None, :]
    d = points[idx].copy()  # (m, degree+1, dim)
    for r in range(1, degree + 1):
        for j in range(degree, r - 1, -1):
            i = spans - degree + j
            left = knots[i]
            denom = knots[i + degree - r + 1] - left
            safe = np.where(denom > 0, denom, 1.0)
            alpha = np.where(denom > 0, (t - left) / safe, 0.0)
            d[:, j] = (1.0 - alpha)[:, None] * d[:, j - 1] + alpha[:, None] * d[:, j]
    return d[:, degree]


def de_boor_point(curve: BSplineCurve, t):
    """Curve point(s) at parameter t (scalar or array) via de Boor's algorithm."""
    scalar = np.isscalar(t) or np.ndim(t) == 0
    tt = _check_domain(curve, np.atleast_1d(np.asarray(t, dtype=float)))
    out = _de_boor_raw(curve.knots, curve.points, curve.degree, tt)
    return out[0] if scalar else out


def derivative_curve(curve: BSplineCurve) -> BSplineCurve:
    """Exact derivative spline: reduced degree, differenced control points."""
    p, knots, pts = curve.degree, curve.knots, curve.points
    if p < 1:
        raise ValueError("cannot differentiate a degree-0 curve")
    denom = knots[p + 1 : p + len(pts)] - knots[1 : len(pts)]
    safe = np.where(denom > 0, denom, 1.0)
    q = p * (pts[1:] - pts[:-1]) / safe[:, None]
    q[denom <= 0] = 0.0
    return BSplineCurve(degree=p - 1, knots=knots[1:-1], points=q)


def derivatives(curve: BSplineCurve, t, order: int):
    """Derivatives of orders 1..order at t; order must not exceed the degree.

    Returns a list of arrays, one per order, each shaped like de_boor_point's
    output for the same t.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > curve.degree:
        raise ValueError(f"order {order} exceeds degree {curve.degree}")
    scalar = np.isscalar(t) or np.ndim(t) == 0
    tt = _check_domain(curve, np.atleast_1d(np.asarray(t, dtype=float)))
    out = []
    work = curve
    for _ in range(order):
        work = derivative_curve(work)
        if work.degree >= 0 and len(work.points):
            val = _de_boor_raw(work.knots, work.points, work.degree, tt)
        else:
            val = np.zeros((len(tt), curve.dim))
        out.append(val[0] if scalar else val)
    return out


def _derivs_any(curve_like, t, order: int):
    """Derivatives for a BSplineCurve or any object exposing .derivatives(t, k).

    Orders above a spline's degree are returned as exact zeros.
    """
    if isinstance(curve_like, BSplineCurve):
        avail = min(order, curve_like.degree)
        ds = derivatives(curve_like, t, avail)
        if avail < order:
            zeros = np.zeros_like(ds[0])
            ds = ds + [zeros] * (order - avail)
        return ds
    return curve_like.derivatives(t, order)


def _cross(a: np.ndarray, b: np.ndarray):
    """Cross product along the last axis: scalar z-component in 2D, vector in 3D."""
    if a.shape[-1] == 2:
        return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]
    return np.cross(a, b)


def _norm(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(v * v, axis=-1))


@dataclass(frozen=True)
class FrenetData:
    """Point, first three derivatives, curvature/torsion and the local frame."""

    point: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    jerk: np.ndarray
    curvature: float
    torsion: float | None
    tangent: np.ndarray
    normal: np.ndarray | None


def _kappa_normal(d1: np.ndarray, d2: np.ndarray):
    """Vectorized curvature and unit principal normal; normal rows are NaN where
    curvature falls below EPS_CURVATURE."""
    speed = _norm(d1)
    cr = _cross(d1, d2)
    if d1.shape[-1] == 2:
        cross_mag = np.abs(cr)
    else:
        cross_mag = _norm(cr)
    kappa = cross_mag / speed**3
    if d1.shape[-1] == 2:
        tangent = d1 / speed[:, None]
        perp = np.column_stack([-tangent[:, 1], tangent[:, 0]])
        normal = perp * np.sign(cr)[:, None]
    else:
        # N = (C' x C'') x C' / (|C' x C''| |C'|)
        nvec = np.cross(cr, d1)
        denom = (cross_mag * speed)[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            normal = nvec / denom
    normal = np.where((kappa > EPS_CURVATURE)[:, None], normal, np.nan)
    return kappa, normal


def frenet(curve_like, t) -> FrenetData:
    """Frenet data at a single parameter; torsion only for 3D curves."""
    d1, d2, d3 = (np.atleast_2d(d) for d in _derivs_any(curve_like, t, 3))
    speed = float(_norm(d1)[0])
    if speed < EPS_REGULAR:
        raise RegularityError(f"velocity {speed:g} below regularity threshold at t={t}")
    kappa, normal = _kappa_normal(d1, d2)
    kappa = float(kappa[0])
    dim = d1.shape[-1]
    torsion = None
    if dim == 3:
        cr = np.cross(d1, d2)
        den = float(np.sum(cr * cr, axis=-1)[0])
        if den > EPS_REGULAR**2:
            torsion = float(np.sum(cr * d3, axis=-1)[0] / den)
    point = np.atleast_2d(_point_any(curve_like, t))[0]
    nrm = normal[0] if kappa > EPS_CURVATURE else None
    return FrenetData(
        point=point,
        velocity=d1[0],
        acceleration=d2[0],
        jerk=d3[0],
        curvature=kappa,
        torsion=torsion,
        tangent=d1[0] / speed,
        normal=nrm,
    )


def _point_any(curve_like, t):
    if isinstance(curve_like, BSplineCurve):
        return de_boor_point(curve_like, t)
    return curve_like.point(t)


def evolute_point(curve_like, t) -> np.ndarray:
    """Center of curvature E(t) = C(t) + N(t)/kappa(t)."""
    fr = frenet(curve_like, t)
    if fr.curvature <= EPS_CURVATURE or fr.normal is None:
        raise CurvatureSingularityError(f"curvature {fr.curvature:g} too small at t={t}")
    return fr.point + fr.normal / fr.curvature


def _evolute_batch(curve_like, t: np.ndarray) -> np.ndarray:
    points = np.atleast_2d(_point_any(curve_like, t))
    d1, d2 = (np.atleast_2d(d) for d in _derivs_any(curve_like, t, 2))
    speed = _norm(d1)
    if np.any(speed < EPS_REGULAR):
        raise RegularityError("velocity below regularity threshold in sampled range")
    kappa, normal = _kappa_normal(d1, d2)
    if np.any(kappa <= EPS_CURVATURE):
        raise CurvatureSingularityError("curvature vanishes in sampled range")
    return points + normal / kappa[:, None]


def _golden_max(f, lo: float, hi: float, tol: float = 1e-13) -> tuple[float, float]:
    """Golden-section maximization of a unimodal-ish scalar function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(lo) + abs(hi)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    t = c if fc > fd else d
    return t, max(fc, fd)


def max_evolute_deviation(curve_like, center, sample_count: int = 10000):
    """Largest |E(t) - center| over uniform samples plus one golden-section pass.

    Returns (deviation, argmax_t).  The refinement searches the bracket
    around the discrete argmax, so the result is insensitive to the exact
    sample count; ties resolve to the smallest t.
    """
    if sample_count < 100:
        raise ValueError("sample_count must be >= 100")
    center = np.asarray(center, dtype=float)
    a, b = _domain_any(curve_like)
    t = np.linspace(a, b, sample_count + 1)
    dev = _norm(_evolute_batch(curve_like, t) - center)
    i = int(np.argmax(dev))
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, len(t) - 1)]

    def f(x):
        return float(_norm(_evolute_batch(curve_like, np.array([x])) - center)[0])

    t_star, d_star = _golden_max(f, lo, hi)
    if dev[i] >= d_star:
        return float(dev[i]), float(t[i])
    return float(d_star), float(t_star)


def _domain_any(curve_like) -> tuple[float, float]:
    return curve_like.domain


@dataclass(frozen=True)
class CurvatureProfile:
    """Uniform-in-parameter samples of arc length, curvature and torsion.

    ``tau`` is None for planar curves.  Arc length accumulates per-interval
    5-point Gauss-Legendre quadrature of the speed.
    """

    t: np.ndarray
    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray | None

    @property
    def dim(self) -> int:
        return 2 if self.tau is None else 3

    @property
    def length(self) -> float:
        return float(self.s[-1])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


def arc_length_table(curve_like, t: np.ndarray) -> np.ndarray:
    """Cumulative arc length at the given parameters, s[0] = 0."""
    mid = 0.5 * (t[1:] + t[:-1])
    half = 0.5 * np.diff(t)
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    (d1,) = _derivs_any(curve_like, nodes, 1)
    speed = _norm(d1).reshape(len(mid), len(_GL_NODES))
    seg = half * (speed @ _GL_WEIGHTS)
    return np.concatenate([[0.0], np.cumsum(seg)])


def profile(curve_like, sample_count: int = 256, domain=None) -> CurvatureProfile:
    """Curvature/torsion profile over uniform parameter samples."""
    if sample_count < 16:
        raise ValueError("sample_count must be >= 16")
    a, b = domain if domain is not None else _domain_any(curve_like)
    t = np.linspace(a, b, sample_count)
    d = _derivs_any(curve_like, t, 3)
    d1, d2, d3 = (np.atleast_2d(x) for x in d)
    speed = _norm(d1)
    if np.any(speed < EPS_REGULAR):
        raise RegularityError("velocity below regularity threshold in profiled range")
    kappa, _ = _kappa_normal(d1, d2)
    tau = None
    if d1.shape[-1] == 3:
        cr = np.cross(d1, d2)
        den = np.sum(cr * cr, axis=-1)
        safe = np.where(den > EPS_REGULAR**2, den, 1.0)
        tau = np.where(den > EPS_REGULAR**2, np.sum(cr * d3, axis=-1) / safe, 0.0)
    s = arc_length_table(curve_like, t)
    return CurvatureProfile(t=t, s=s, kappa=kappa, tau=tau)
