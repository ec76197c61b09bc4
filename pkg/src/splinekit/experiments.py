"""The numerical experiments behind the CLI commands.

Each function is pure (inputs -> report dict plus artifacts) so the test
suite can drive it directly; the CLI layer only parses flags and serializes
results.  Default parameters are pinned, including the polygon frame (start
angle 225 degrees, clockwise), so repeated runs emit identical reports.
"""

from __future__ import annotations

import numpy as np

from .convert import to_clamped, to_float
from .evaluate import de_boor_point, max_evolute_deviation, profile
from .generators import (
    CURVE_REGISTRY,
    MineurFarinParams,
    SamplingSpec,
    bezier_arc_polygon,
    mineur_farin_vertices,
    sample_analytic_to_polygon,
)
from .geometry import (
    FORMAT_CLAMPED,
    ControlPolygon,
    curve_of,
    make_float_polygon,
    regular_polygon_vertices,
)
from .metrics import (
    DEFAULT_NOISE_FLOOR,
    HarmonicitySpec,
    SampledFunction,
    harmonicity_report,
    level_curvature,
    monotone_runs,
    shape_equivalent,
    shape_signature,
)

DEFAULT_START_ANGLE = np.deg2rad(225.0)
DEFAULT_ORIENTATION = "cw"
DEFAULT_RADIUS = 10.0
DEFAULT_SAMPLES_PER_SEGMENT = 10000
DEFAULT_PROFILE_SAMPLES = 800
SPIRAL_NOISE_FLOOR = 2e-3  # level-2 functions carry genuine sub-0.1% segment ripple

CIRCLE_TEST_DEGREES = (3, 5, 7, 9)


def circle_polygon(degree: int, n_vertices: int | None = None, radius: float = DEFAULT_RADIUS) -> ControlPolygon:
    """Float polygon on a regular polygon inscribed in the test circle.

    Defaults: hexagon for degree 3, dodecagon otherwise.
    """
    if n_vertices is None:
        n_vertices = 6 if degree == 3 else 12
    verts = regular_polygon_vertices(n_vertices, radius, DEFAULT_START_ANGLE, DEFAULT_ORIENTATION)
    return make_float_polygon(verts, degree)


def circle_test(
    degree: int,
    n_vertices: int | None = None,
    radius: float = DEFAULT_RADIUS,
    samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT,
) -> dict:
    """Circle-approximation accuracy: evolute deviation of the uniform
    B-spline vs the matched equal-leg Bezier arc of the same degree.

    The Bezier endpoints sit on the B-spline segment's effective circle; a
    radius-``radius`` endpoint variant is reported alongside for sensitivity.
    """
    if degree not in CIRCLE_TEST_DEGREES:
        raise ValueError(f"degree must be one of {CIRCLE_TEST_DEGREES}")
    polygon = circle_polygon(degree, n_vertices, radius)
    curve = curve_of(polygon)
    center = np.zeros(2)
    dev_b, t_b = max_evolute_deviation(curve, center, samples_per_segment * curve.segment_count)

    a = de_boor_point(curve, float(degree))
    b = de_boor_point(curve, float(degree + 1))
    effective_radius = float(np.linalg.norm(a))
    bez = bezier_arc_polygon(a, b, center, degree)
    dev_z, t_z = max_evolute_deviation(curve_of(bez), center, samples_per_segment)

    a10 = radius * a / np.linalg.norm(a)
    b10 = radius * b / np.linalg.norm(b)
    bez10 = bezier_arc_polygon(a10, b10, center, degree)
    dev_z10, _ = max_evolute_deviation(curve_of(bez10), center, samples_per_segment)

    return {
        "degree": degree,
        "vertex_count": polygon.count,
        "radius": radius,
        "samples_per_segment": samples_per_segment,
        "effective_radius": effective_radius,
        "bspline_deviation": dev_b,
        "bspline_argmax_t": t_b,
        "bezier_deviation": dev_z,
        "bezier_argmax_t": t_z,
        "bezier_deviation_circle_endpoints": dev_z10,
        "_polygon": polygon,
        "_bezier": bez,
    }


def perturb_test(decimals: int = 3, samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT) -> dict:
    """Format-conversion instability: truncate one clamped vertex, convert
    back to float format, and measure the damage.

    Uses the single-segment degree-9 arc (10 dodecagon vertices).  The second
    clamped vertex is truncated toward zero at ``decimals`` decimals; the
    float polygon recovered from the perturbed clamped polygon shows the
    extrapolation blow-up and the evolute deviation degrades by orders of
    magnitude.
    """
    degree = 9
    verts = regular_polygon_vertices(12, DEFAULT_RADIUS, DEFAULT_START_ANGLE, DEFAULT_ORIENTATION)
    polygon = make_float_polygon(verts[: degree + 1], degree)
    curve = curve_of(polygon)
    center = np.zeros(2)
    baseline, _ = max_evolute_deviation(curve, center, samples_per_segment)

    clamped, _ = to_clamped(polygon)
    factor = 10.0**decimals
    perturbed_vertices = np.array(clamped.vertices)
    original_vertex = perturbed_vertices[1].copy()
    perturbed_vertices[1] = np.trunc(perturbed_vertices[1] * factor) / factor
    perturbation = float(np.linalg.norm(perturbed_vertices[1] - original_vertex))
    perturbed = ControlPolygon(degree, perturbed_vertices, FORMAT_CLAMPED, clamped.knots)

    back, report = to_float(perturbed)
    displacements = np.linalg.norm(back.vertices - polygon.vertices, axis=1)
    degraded, _ = max_evolute_deviation(curve_of(perturbed), center, samples_per_segment)

    return {
        "degree": degree,
        "decimals": decimals,
        "baseline_deviation": baseline,
        "perturbed_deviation": degraded,
        "clamped_vertex_before": original_vertex,
        "clamped_vertex_after": perturbed_vertices[1],
        "perturbation_size": perturbation,
        "float_vertex_displacements": displacements,
        "max_displacement": float(displacements.max()),
        "amplification": float(displacements.max() / perturbation),
        "max_extrapolation_ratio": report.max_extrapolation_ratio,
        "unperturbed_round_trip_error": _round_trip_error(polygon),
        "_polygon": polygon,
        "_perturbed_float": back,
    }


def _round_trip_error(polygon: ControlPolygon) -> float:
    clamped, _ = to_clamped(polygon)
    back, _ = to_float(clamped)
    return float(np.max(np.linalg.norm(back.vertices - polygon.vertices, axis=1)))


def _interior_extrema(signature) -> int:
    return sum(1 for e in signature.events if e.kind in ("max", "min"))


def typical_compare(
    q: float = 2.0,
    theta: float = np.pi / 2,
    count: int = 5,
    leg0: float = 1.0,
    profile_samples: int = DEFAULT_PROFILE_SAMPLES,
    noise_floor: float = DEFAULT_NOISE_FLOOR,
) -> dict:
    """Bezier vs B-spline curvature behavior on one geometric-progression polygon.

    The polygon of ``count`` points serves both as the Bezier control polygon
    (degree count-1) and as the float polygon of a B-spline of the same
    degree; curvature profiles and their signatures are compared.
    """
    if count < 3:
        raise ValueError("count must be >= 3")
    params = MineurFarinParams(L0=leg0, q=q, theta=theta, count=count)
    verts = mineur_farin_vertices(params)
    degree = count - 1
    knots = np.concatenate([np.zeros(degree + 1), np.ones(degree + 1)])
    bezier = ControlPolygon(degree, verts, FORMAT_CLAMPED, knots)
    bspline = make_float_polygon(verts, degree)

    out = {"q": q, "theta": theta, "count": count, "leg0": leg0, "noise_floor": noise_floor}
    for name, poly in (("bezier", bezier), ("bspline", bspline)):
        prof = profile(curve_of(poly), profile_samples)
        fn = SampledFunction(prof.s, prof.kappa)
        sig = shape_signature(fn, noise_floor)
        extrema = _interior_extrema(sig)
        runs = monotone_runs(prof.kappa)
        out[name] = {
            "interior_extrema": extrema,
            "monotone": extrema == 0,
            "monotone_runs": len(runs),
            "kappa_range": [float(prof.kappa.min()), float(prof.kappa.max())],
            "signature": sig.to_dict(),
            "_profile": prof,
        }
    out["_polygon"] = bspline
    return out


SPIRAL_FUNCTIONS = ("kappa", "tau", "kappa2", "tau2")


def spiral_approx(
    degree: int = 8,
    s0: float = 0.0,
    h: float = 1.0,
    count: int = 20,
    curve_name: str = "conical-spiral",
    profile_samples: int = DEFAULT_PROFILE_SAMPLES,
    noise_floor: float = SPIRAL_NOISE_FLOOR,
) -> dict:
    """Shape approximation of an analytic curve by a float-polygon B-spline.

    Samples the analytic curve into a float polygon, then compares curvature,
    torsion and their level-2 curvatures between the spline and the analytic
    curve over the shared domain (spline parameter t corresponds to analytic
    parameter s0 + (t - (degree+1)/2) h).
    """
    if curve_name not in CURVE_REGISTRY:
        raise ValueError(f"unknown curve {curve_name!r}; known: {sorted(CURVE_REGISTRY)}")
    analytic = CURVE_REGISTRY[curve_name]()
    spec = SamplingSpec(s0=s0, h=h, count=count)
    polygon = sample_analytic_to_polygon(analytic, spec, degree)
    spline = curve_of(polygon)
    t0, t1 = spline.domain
    offset = (degree + 1) / 2.0
    shared = (s0 + (t0 - offset) * h, s0 + (t1 - offset) * h)

    prof_spline = profile(spline, profile_samples)
    prof_analytic = profile(analytic, profile_samples, domain=shared)

    levels = {
        "kappa": ("curvature", 1),
        "tau": ("torsion", 1),
        "kappa2": ("curvature", 2),
        "tau2": ("torsion", 2),
    }
    functions = {}
    verdicts = {}
    for name, (source, level) in levels.items():
        if prof_spline.tau is None and source == "torsion":
            continue
        f_sp = level_curvature(prof_spline, source, level)
        f_an = level_curvature(prof_analytic, source, level)
        sig_sp = shape_signature(f_sp, noise_floor)
        sig_an = shape_signature(f_an, noise_floor)
        verdicts[name] = shape_equivalent(sig_sp, sig_an)
        functions[name] = {
            "spline": {"signature": sig_sp.to_dict(), "_fn": f_sp},
            "analytic": {"signature": sig_an.to_dict(), "_fn": f_an},
        }
    return {
        "curve": curve_name,
        "degree": degree,
        "s0": s0,
        "h": h,
        "count": count,
        "noise_floor": noise_floor,
        "shared_domain": list(shared),
        "verdicts": verdicts,
        "all_equivalent": all(verdicts.values()) and len(verdicts) > 0,
        "functions": functions,
        "_polygon": polygon,
        "_analytic": analytic,
        "_profiles": {"spline": prof_spline, "analytic": prof_analytic},
    }


def typical_polygon_report(
    q: float,
    theta: float,
    count: int,
    degree: int,
    leg0: float = 1.0,
    phi: float = 0.0,
    dim: int = 2,
    start=None,
    start_dir=None,
    profile_samples: int = DEFAULT_PROFILE_SAMPLES,
    spec: HarmonicitySpec | None = None,
) -> dict:
    """Build a geometric-progression float polygon and report its curvature
    behavior (constant-curvature statistics for q = 1, monotonicity otherwise)."""
    if start is None:
        start = (0.0, 0.0) if dim == 2 else (0.0, 0.0, 0.0)
    if start_dir is None:
        start_dir = (1.0, 0.0) if dim == 2 else (1.0, 0.0, 0.0)
    params = MineurFarinParams(
        L0=leg0, q=q, theta=theta, phi=phi, count=count, start=tuple(start), start_dir=tuple(start_dir)
    )
    polygon = make_float_polygon(mineur_farin_vertices(params), degree)
    prof = profile(curve_of(polygon), profile_samples)
    kmin, kmax = float(prof.kappa.min()), float(prof.kappa.max())
    spread = (kmax - kmin) / kmax if kmax > 0 else 0.0
    harmony = harmonicity_report(polygon, spec or HarmonicitySpec())
    runs = monotone_runs(prof.kappa, rel_tol=1e-9)
    return {
        "q": q,
        "theta": theta,
        "phi": phi,
        "count": count,
        "degree": degree,
        "leg0": leg0,
        "kappa_min": kmin,
        "kappa_max": kmax,
        "kappa_relative_spread": float(spread),
        "kappa_monotone": len(runs) == 1,
        "harmonicity_passed": harmony.passed,
        "harmonicity_reasons": list(harmony.reasons),
        "_polygon": polygon,
        "_profile": prof,
    }
