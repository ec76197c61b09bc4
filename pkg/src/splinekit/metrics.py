"""Discrete differential geometry of control polygons and shape signatures.

Discrete curvature/torsion come from central divided differences of the
vertex sequence.  The harmonicity check segments the discrete curvature into
monotone runs and compares against configurable bounds.  Graph curvature
K[f] = f'' / (1 + f'^2)^(3/2) iterates into level-n curvature functions, and
shape signatures reduce sampled functions to their ordered extremum and
inflection events.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .evaluate import CurvatureProfile
from .geometry import ControlPolygon

EPS_REGULAR = 1e-12
PLATEAU_REL_TOL = 1e-12
DEFAULT_NOISE_FLOOR = 1e-6


@dataclass(frozen=True)
class DiscreteGeometry:
    """Central divided differences and discrete curvature/torsion per interior vertex.

    Entry ``i`` of each array corresponds to polygon vertex ``index[i]``.
    Torsion needs a 5-point stencil, so it is NaN at the outermost interior
    vertices and for planar polygons.
    """

    index: np.ndarray
    tangent: np.ndarray
    second: np.ndarray
    curvature: np.ndarray          # magnitude, >= 0
    curvature_signed: np.ndarray   # 2D: signed by turning direction; 3D: binormal-continuity sign
    torsion: np.ndarray
    degenerate: np.ndarray         # True where |tangent| < EPS_REGULAR


def discrete_geometry(polygon: ControlPolygon) -> DiscreteGeometry:
    """Divided-difference geometry of the polygon vertices.

    tangent  t_i = (S_{i+1} - S_{i-1}) / 2
    second   c_i = S_{i+1} - 2 S_i + S_{i-1}
    curvature    = |t_i x c_i| / |t_i|^3
    third    d_i = (S_{i+2} - 2 S_{i+1} + 2 S_{i-1} - S_{i-2}) / 2
    torsion      = ((t_i x c_i) . d_i) / |t_i x c_i|^2     (3D only)
    """
    S = polygon.vertices
    if len(S) < 3:
        raise ValueError("need at least 3 vertices")
    idx = np.arange(1, len(S) - 1)
    t = 0.5 * (S[2:] - S[:-2])
    c = S[2:] - 2.0 * S[1:-1] + S[:-2]
    t_norm = np.linalg.norm(t, axis=1)
    degenerate = t_norm < EPS_REGULAR
    safe = np.where(degenerate, 1.0, t_norm)
    if polygon.dim == 2:
        cross = t[:, 0] * c[:, 1] - t[:, 1] * c[:, 0]
        kappa_signed = cross / safe**3
        kappa = np.abs(kappa_signed)
        tau = np.full(len(idx), np.nan)
    else:
        cross_vec = np.cross(t, c)
        cross_norm = np.linalg.norm(cross_vec, axis=1)
        kappa = cross_norm / safe**3
        # orient by continuity of the discrete binormal
        sign = np.ones(len(idx))
        for i in range(1, len(idx)):
            flip = np.dot(cross_vec[i - 1], cross_vec[i])
            sign[i] = sign[i - 1] * (1.0 if flip >= 0 else -1.0)
        kappa_signed = kappa * sign
        tau = np.full(len(idx), np.nan)
        if len(S) >= 5:
            inner = np.arange(2, len(S) - 2)
            d = 0.5 * (S[4:] - 2.0 * S[3:-1] + 2.0 * S[1:-3] - S[:-4])
            den = cross_norm[inner - 1] ** 2
            ok = den > EPS_REGULAR**2
            val = np.einsum("ij,ij->i", cross_vec[inner - 1], d)
            tau[inner - 1] = np.where(ok, val / np.where(ok, den, 1.0), np.nan)
    kappa = np.where(degenerate, np.nan, kappa)
    kappa_signed = np.where(degenerate, np.nan, kappa_signed)
    return DiscreteGeometry(
        index=idx,
        tangent=t,
        second=c,
        curvature=kappa,
        curvature_signed=kappa_signed,
        torsion=tau,
        degenerate=degenerate,
    )


@dataclass(frozen=True)
class HarmonicitySpec:
    """Bounds a control polygon must satisfy to count as harmonious/regular."""

    max_curvature_sign_changes: int = 0
    max_monotone_runs: int = 1
    min_leg_length: float = 1e-9
    max_turning_angle: float = np.pi / 2

    def __post_init__(self):
        if (
            self.max_curvature_sign_changes < 0
            or self.max_monotone_runs < 0
            or self.min_leg_length < 0
            or self.max_turning_angle < 0
        ):
            raise ValueError("harmonicity bounds must be nonnegative")


@dataclass(frozen=True)
class HarmonicityReport:
    leg_lengths: np.ndarray
    turning_angles: np.ndarray
    discrete_curvatures: np.ndarray
    monotone_runs: tuple
    sign_changes: int
    passed: bool
    reasons: tuple = field(default_factory=tuple)


def monotone_runs(values: np.ndarray, rel_tol: float = PLATEAU_REL_TOL) -> list[tuple[int, int, str]]:
    """Maximal monotone runs (start, end, direction) partitioning the index range.

    Differences within rel_tol of zero (relative to the value scale) extend
    the current run as a plateau.
    """
    n = len(values)
    if n == 0:
        return []
    scale = np.nanmax(np.abs(values)) if np.any(np.isfinite(values)) else 0.0
    tol = rel_tol * (scale if scale > 0 else 1.0)
    runs = []
    start = 0
    direction = 0  # 0 unknown, +1 up, -1 down
    for i in range(1, n):
        d = values[i] - values[i - 1]
        step = 0 if abs(d) <= tol or not np.isfinite(d) else (1 if d > 0 else -1)
        if step == 0:
            continue
        if direction == 0:
            direction = step
        elif step != direction:
            runs.append((start, i - 1, "up" if direction > 0 else "down"))
            start = i - 1
            direction = step
    runs.append((start, n - 1, {0: "flat", 1: "up", -1: "down"}[direction]))
    return runs


def _sign_changes(values: np.ndarray) -> int:
    finite = values[np.isfinite(values)]
    signs = np.sign(finite)
    signs = signs[signs != 0]
    if len(signs) < 2:
        return 0
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def harmonicity_report(polygon: ControlPolygon, spec: HarmonicitySpec) -> HarmonicityReport:
    """Check a polygon against a harmonicity spec.

    Computes leg lengths, turning angles and the discrete-curvature sequence,
    segments the latter into monotone runs, and passes iff every bound in the
    spec is satisfied.
    """
    S = polygon.vertices
    if len(S) < 3:
        raise ValueError("need at least 3 vertices")
    legs = np.diff(S, axis=0)
    leg_lengths = np.linalg.norm(legs, axis=1)
    reasons = []
    if np.any(leg_lengths < spec.min_leg_length):
        reasons.append(
            f"leg length {leg_lengths.min():.3e} below minimum {spec.min_leg_length:.3e}"
        )
    safe = np.where(leg_lengths > 0, leg_lengths, 1.0)
    unit = legs / safe[:, None]
    cosang = np.clip(np.einsum("ij,ij->i", unit[:-1], unit[1:]), -1.0, 1.0)
    turning = np.arccos(cosang)
    if np.any(turning > spec.max_turning_angle):
        reasons.append(
            f"turning angle {turning.max():.6f} exceeds maximum {spec.max_turning_angle:.6f}"
        )
    geo = discrete_geometry(polygon)
    if np.any(geo.degenerate):
        reasons.append("degenerate interior vertex (vanishing central difference)")
    runs = monotone_runs(geo.curvature_signed)
    if len(runs) > spec.max_monotone_runs:
        reasons.append(f"{len(runs)} monotone runs exceed maximum {spec.max_monotone_runs}")
    changes = _sign_changes(geo.curvature_signed)
    if changes > spec.max_curvature_sign_changes:
        reasons.append(
            f"{changes} curvature sign changes exceed maximum {spec.max_curvature_sign_changes}"
        )
    return HarmonicityReport(
        leg_lengths=leg_lengths,
        turning_angles=turning,
        discrete_curvatures=geo.curvature_signed,
        monotone_runs=tuple(runs),
        sign_changes=changes,
        passed=not reasons,
        reasons=tuple(reasons),
    )


# ---------------------------------------------------------------------------
# Sampled functions, graph curvature, level-n curvature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SampledFunction:
    """A function sampled on a strictly increasing grid.

    ``low_confidence`` marks samples whose derivatives could only be formed
    one-sided (the grid endpoints, propagated by graph_curvature).
    """

    s: np.ndarray
    values: np.ndarray
    low_confidence: np.ndarray | None = None

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.ndim != 1 or v.shape != s.shape:
            raise ValueError("s and values must be 1-D arrays of equal length")
        if np.any(np.diff(s) <= 0):
            raise ValueError("s must be strictly increasing")
        mask = self.low_confidence
        if mask is None:
            mask = np.zeros(len(s), dtype=bool)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "low_confidence", np.asarray(mask, dtype=bool))


def _grid_derivatives(s: np.ndarray, f: np.ndarray):
    """First and second derivatives on a possibly nonuniform grid.

    Central three-point formulas inside, one-sided at the endpoints.
    """
    n = len(s)
    d1 = np.empty(n)
    d2 = np.empty(n)
    h1 = s[1:-1] - s[:-2]
    h2 = s[2:] - s[1:-1]
    denom = h1 * h2 * (h1 + h2)
    d1[1:-1] = (f[2:] * h1**2 - f[:-2] * h2**2 + f[1:-1] * (h2**2 - h1**2)) / denom
    d2[1:-1] = 2.0 * (f[:-2] * h2 - f[1:-1] * (h1 + h2) + f[2:] * h1) / denom
    d1[0] = (f[1] - f[0]) / (s[1] - s[0])
    d1[-1] = (f[-1] - f[-2]) / (s[-1] - s[-2])
    d2[0] = d2[1]
    d2[-1] = d2[-2]
    return d1, d2


def graph_curvature(fn: SampledFunction) -> SampledFunction:
    """Curvature of the plane graph (s, f(s)): f'' / (1 + f'^2)^(3/2).

    Derivatives come from central finite differences on the grid; endpoint
    values use one-sided differences and are flagged low-confidence.
    """
    if len(fn.s) < 5:
        raise ValueError("need at least 5 samples")
    d1, d2 = _grid_derivatives(fn.s, fn.values)
    k = d2 / (1.0 + d1**2) ** 1.5
    mask = fn.low_confidence.copy()
    mask[0] = mask[-1] = True
    return SampledFunction(s=fn.s, values=k, low_confidence=mask)


def level_curvature(profile: CurvatureProfile, source: str = "curvature", level: int = 1) -> SampledFunction:
    """Level-n curvature: level 1 is kappa(s) (or tau(s)); each further level
    applies the graph-curvature operator to the previous one."""
    if level < 1:
        raise ValueError("level must be >= 1")
    if source == "curvature":
        values = profile.kappa
    elif source == "torsion":
        if profile.tau is None:
            raise ValueError("torsion source requires a 3D profile")
        values = profile.tau
    else:
        raise ValueError(f"unknown source {source!r}")
    fn = SampledFunction(s=profile.s, values=values)
    for _ in range(level - 1):
        fn = graph_curvature(fn)
    return fn


# ---------------------------------------------------------------------------
# Shape signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignatureEvent:
    kind: str  # "max" | "min" | "inflection"
    s: float


@dataclass(frozen=True)
class ShapeSignature:
    """Ordered extremum/inflection events of a sampled function."""

    events: tuple

    @property
    def kinds(self) -> tuple:
        return tuple(e.kind for e in self.events)

    def to_dict(self) -> dict:
        return {"events": [{"kind": e.kind, "s": float(e.s)} for e in self.events]}


def _alternating_extrema(f: np.ndarray) -> list[tuple[int, str]]:
    """Interior extremum candidates from sign changes of first differences,
    with plateaus carrying the previous direction forward."""
    events = []
    last_sign = 0
    for i, d in enumerate(np.diff(f)):
        s = 0 if d == 0 else (1 if d > 0 else -1)
        if s == 0:
            continue
        if last_sign != 0 and s != last_sign:
            events.append((i, "max" if last_sign > 0 else "min"))
        last_sign = s
    return events


def _prune_extrema(events: list, f: np.ndarray, floor: float) -> list:
    """Drop events whose prominence against their neighbors is below floor;
    data endpoints act as sentinels so boundary wiggles are pruned too."""
    evs = list(events)
    while evs:
        vals = [f[i] for i, _ in evs]
        proms = []
        for j in range(len(evs)):
            left = f[0] if j == 0 else vals[j - 1]
            right = f[-1] if j == len(evs) - 1 else vals[j + 1]
            proms.append(min(abs(vals[j] - left), abs(vals[j] - right)))
        jmin = int(np.argmin(proms))
        if proms[jmin] >= floor:
            break
        evs.pop(jmin)
        if 0 < jmin < len(evs) and evs[jmin - 1][1] == evs[jmin][1]:
            a, b = evs[jmin - 1], evs[jmin]
            if a[1] == "max":
                drop = jmin if f[a[0]] >= f[b[0]] else jmin - 1
            else:
                drop = jmin if f[a[0]] <= f[b[0]] else jmin - 1
            evs.pop(drop)
    return evs


def _quadratic_vertex(s: np.ndarray, f: np.ndarray, i: int) -> float:
    """Vertex abscissa of the parabola through samples i-1, i, i+1."""
    s0, s1, s2 = s[i - 1 : i + 2]
    f0, f1, f2 = f[i - 1 : i + 2]
    denom = (s1 - s0) * (f1 - f2) - (s1 - s2) * (f1 - f0)
    if denom == 0:
        return float(s1)
    num = (s1 - s0) ** 2 * (f1 - f2) - (s1 - s2) ** 2 * (f1 - f0)
    vert = s1 - 0.5 * num / denom
    return float(np.clip(vert, s0, s2))


def shape_signature(fn: SampledFunction, noise_floor: float = DEFAULT_NOISE_FLOOR) -> ShapeSignature:
    """Extremum and inflection events of a sampled function, noise-pruned.

    Extrema come from sign changes of first differences; inflections are the
    (pruned) extrema of the discrete first derivative.  Events with prominence
    below noise_floor * (value range) are suppressed; locations come from a
    local quadratic fit.
    """
    s, f = fn.s, fn.values
    if len(s) < 7:
        raise ValueError("need at least 7 samples")
    events = []
    frange = float(np.max(f) - np.min(f))
    if frange > 0:
        for i, kind in _prune_extrema(_alternating_extrema(f), f, noise_floor * frange):
            events.append(SignatureEvent(kind=kind, s=_quadratic_vertex(s, f, i)))
    g, _ = _grid_derivatives(s, f)
    grange = float(np.max(g) - np.min(g))
    if grange > 0:
        for i, _kind in _prune_extrema(_alternating_extrema(g), g, noise_floor * grange):
            events.append(SignatureEvent(kind="inflection", s=_quadratic_vertex(s, g, i)))
    events.sort(key=lambda e: e.s)
    return ShapeSignature(events=tuple(events))


def shape_equivalent(a: ShapeSignature, b: ShapeSignature) -> bool:
    """Same number and order of event kinds, locations ignored."""
    return a.kinds == b.kinds
