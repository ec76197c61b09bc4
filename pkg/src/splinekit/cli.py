"""Command-line harness.

Every command writes machine-readable reports (JSON, CSV) and, unless
disabled via --format, matplotlib-rendered SVG figures, all atomically into
--out-dir.  Exit codes: 0 success, 2 usage error, 3 numeric failure
(tolerance violation / degenerate geometry), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import experiments
from .convert import extract_bezier_segments, to_clamped, to_float
from .errors import SplinekitError
from .evaluate import de_boor_point, profile
from .geometry import (
    FORMAT_CLAMPED,
    FORMAT_FLOAT,
    curve_of,
    load_polygon,
    polygon_to_dict,
    save_polygon,
)
from .metrics import HarmonicitySpec
from .positioning import (
    EndTarget,
    default_bridge,
    join_float_polygons,
    junction_smoothness_check,
    position_endpoints,
)
from .reports import write_function_csv, write_json, write_profile_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class NumericFailure(Exception):
    """Raised by commands when a required tolerance is violated."""


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out-dir", default=".", help="directory for report files")
    parser.add_argument(
        "--format",
        choices=["csv", "json", "svg", "all"],
        default="all",
        help="which output kinds to write (default: all)",
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=None,
        help="sample count: per segment for deviation commands (default 10000), "
        "total for profile commands (default 800)",
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for randomized checks (reserved)"
    )


class _Emitter:
    def __init__(self, out_dir: str, fmt: str):
        self.out_dir = out_dir
        self.fmt = fmt
        os.makedirs(out_dir, exist_ok=True)

    def wants(self, kind: str) -> bool:
        return self.fmt in (kind, "all")

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def json(self, name: str, data: dict) -> None:
        if self.wants("json"):
            write_json(self.path(name), data)

    def csv(self, name: str, writer, *args) -> None:
        if self.wants("csv"):
            writer(self.path(name), *args)

    def svg(self, name: str, build_figure) -> None:
        if self.wants("svg"):
            from .plotting import save_figure

            save_figure(build_figure(), self.path(name))


def _public(report: dict) -> dict:
    """Strip private artifact entries (keys starting with underscore)."""
    return {
        k: (_public(v) if isinstance(v, dict) else v)
        for k, v in report.items()
        if not k.startswith("_")
    }


def _curve_samples(curve_like, n=600, domain=None):
    a, b = domain if domain is not None else curve_like.domain
    t = np.linspace(a, b, n)
    if hasattr(curve_like, "point_fn"):
        return curve_like.point(t)
    return de_boor_point(curve_like, t)


def _geometry_svg(title, report_polygon, extra_curves=()):
    from .plotting import geometry_figure

    curve = curve_of(report_polygon)
    layers = [("curve", _curve_samples(curve))]
    layers.extend(extra_curves)
    return geometry_figure(
        title,
        curves=layers,
        polygons=[("control polygon", np.asarray(report_polygon.vertices))],
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_circle_test(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    samples = args.samples or experiments.DEFAULT_SAMPLES_PER_SEGMENT
    degrees = [args.degree] if args.degree else list(experiments.CIRCLE_TEST_DEGREES)
    for degree in degrees:
        rep = experiments.circle_test(degree, args.n_vertices, args.radius, samples)
        name = f"circle_test_deg{degree}"
        em.json(name + ".json", _public(rep))
        curve = curve_of(rep["_polygon"])
        prof = profile(curve, 2000)
        em.csv(name + "_profile.csv", write_profile_csv, prof)

        def build():
            from .evaluate import _evolute_batch
            from .plotting import geometry_figure

            t = np.linspace(*curve.domain, 600)
            ev = _evolute_batch(curve, t)
            bez_curve = curve_of(rep["_bezier"])
            tz = np.linspace(*bez_curve.domain, 300)
            return geometry_figure(
                f"circle test, degree {degree}",
                curves=[
                    ("B-spline", de_boor_point(curve, t)),
                    ("Bezier arc", de_boor_point(bez_curve, tz)),
                ],
                polygons=[
                    ("float polygon", np.asarray(rep["_polygon"].vertices)),
                    ("Bezier polygon", np.asarray(rep["_bezier"].vertices)),
                ],
                evolutes=[("B-spline evolute (x 1e7)", ev * 1e7)],
            )

        em.svg(name + ".svg", build)
        print(
            f"degree {degree}: B-spline deviation {rep['bspline_deviation']:.6e}, "
            f"Bezier deviation {rep['bezier_deviation']:.6e}"
        )
    return EXIT_OK


def cmd_perturb_test(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    samples = args.samples or experiments.DEFAULT_SAMPLES_PER_SEGMENT
    rep = experiments.perturb_test(args.decimals, samples)
    em.json("perturb_test.json", _public(rep))

    def build():
        from .plotting import geometry_figure

        orig = rep["_polygon"]
        pert = rep["_perturbed_float"]
        return geometry_figure(
            "clamped-vertex truncation blow-up",
            curves=[("curve", _curve_samples(curve_of(orig)))],
            polygons=[
                ("original float polygon", np.asarray(orig.vertices)),
                ("perturbed float polygon", np.asarray(pert.vertices)),
            ],
        )

    em.svg("perturb_test.svg", build)
    print(
        f"deviation {rep['baseline_deviation']:.6e} -> {rep['perturbed_deviation']:.6e}, "
        f"amplification {rep['amplification']:.3e}"
    )
    return EXIT_OK


def cmd_curvature_compare(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    samples = args.samples or experiments.DEFAULT_PROFILE_SAMPLES
    rep = experiments.typical_compare(
        args.q, np.deg2rad(args.theta), args.count, args.l0, samples, args.noise_floor
    )
    em.json("curvature_compare.json", _public(rep))
    for side in ("bezier", "bspline"):
        em.csv(f"curvature_compare_{side}.csv", write_profile_csv, rep[side]["_profile"])

    def build():
        from .plotting import profiles_figure

        return profiles_figure(
            f"curvature on one control polygon (q={args.q}, theta={args.theta} deg)",
            [
                (
                    "kappa(s)",
                    [
                        ("Bezier", rep["bezier"]["_profile"].s, rep["bezier"]["_profile"].kappa),
                        ("B-spline", rep["bspline"]["_profile"].s, rep["bspline"]["_profile"].kappa),
                    ],
                )
            ],
        )

    em.svg("curvature_compare.svg", build)
    print(
        f"Bezier interior extrema: {rep['bezier']['interior_extrema']}, "
        f"B-spline interior extrema: {rep['bspline']['interior_extrema']}"
    )
    return EXIT_OK


def cmd_spiral_approx(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    samples = args.samples or experiments.DEFAULT_PROFILE_SAMPLES
    rep = experiments.spiral_approx(
        args.degree, args.s0, args.h, args.count, args.curve, samples, args.noise_floor
    )
    em.json("spiral_approx.json", _public(rep))
    for name, sides in rep["functions"].items():
        for side in ("spline", "analytic"):
            em.csv(f"spiral_approx_{name}_{side}.csv", write_function_csv, sides[side]["_fn"])

    def build():
        from .plotting import profiles_figure

        panels = []
        for name, sides in rep["functions"].items():
            panels.append(
                (
                    name,
                    [
                        ("spline", sides["spline"]["_fn"].s, sides["spline"]["_fn"].values),
                        ("analytic", sides["analytic"]["_fn"].s, sides["analytic"]["_fn"].values),
                    ],
                )
            )
        return profiles_figure(f"shape approximation of {args.curve}", panels)

    em.svg("spiral_approx.svg", build)

    def build_curves():
        from .plotting import geometry_figure

        spline = curve_of(rep["_polygon"])
        analytic = rep["_analytic"]
        return geometry_figure(
            f"{args.curve} and degree-{args.degree} approximant",
            curves=[
                ("B-spline", _curve_samples(spline)),
                ("analytic", _curve_samples(analytic, domain=rep["shared_domain"])),
            ],
            polygons=[("float polygon", np.asarray(rep["_polygon"].vertices))],
        )

    em.svg("spiral_approx_curves.svg", build_curves)
    print("verdicts:", {k: bool(v) for k, v in rep["verdicts"].items()})
    if not rep["all_equivalent"]:
        print("shape equivalence does not hold at every level", file=sys.stderr)
    return EXIT_OK


def cmd_typical(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    samples = args.samples or experiments.DEFAULT_PROFILE_SAMPLES
    if args.params:
        with open(args.params, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        kwargs = {
            "q": loaded["q"],
            "theta": np.deg2rad(loaded["theta"]),
            "count": loaded["count"],
            "degree": loaded.get("degree", args.degree),
            "leg0": loaded.get("L0", 1.0),
            "phi": np.deg2rad(loaded.get("phi", 0.0)),
            "dim": loaded.get("dim", 2),
            "start": loaded.get("start"),
            "start_dir": loaded.get("start_dir"),
        }
        if kwargs["degree"] is None:
            raise ValueError("degree must be given (flag or params file)")
    else:
        if args.q is None or args.theta is None or args.count is None or args.degree is None:
            raise ValueError("--q, --theta, --count and --degree are required without --params")
        kwargs = {
            "q": args.q,
            "theta": np.deg2rad(args.theta),
            "count": args.count,
            "degree": args.degree,
            "leg0": args.l0,
            "phi": np.deg2rad(args.phi),
            "dim": args.dim,
        }
    rep = experiments.typical_polygon_report(profile_samples=samples, **kwargs)
    em.json("typical.json", _public(rep))
    if em.wants("json"):
        save_polygon(rep["_polygon"], em.path("typical_polygon.json"))
    em.csv("typical_profile.csv", write_profile_csv, rep["_profile"])
    em.svg("typical.svg", lambda: _geometry_svg("typical curve", rep["_polygon"]))
    print(
        f"kappa in [{rep['kappa_min']:.6g}, {rep['kappa_max']:.6g}], "
        f"relative spread {rep['kappa_relative_spread']:.3e}, monotone={rep['kappa_monotone']}"
    )
    return EXIT_OK


def _parse_target(text: str, which_end: str) -> EndTarget:
    try:
        pos_part, tan_part = text.split(";")
        endpoint = np.array([float(x) for x in pos_part.split(",")])
        tangent = np.array([float(x) for x in tan_part.split(",")])
    except Exception as exc:
        raise ValueError(f"bad target spec {text!r}: expected 'x,y[,z];tx,ty[,tz]'") from exc
    return EndTarget(endpoint=endpoint, tangent_dir=tangent, which_end=which_end)


def cmd_position(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    polygon = load_polygon(args.polygon)
    targets = []
    if args.target_start:
        targets.append(_parse_target(args.target_start, "start"))
    if args.target_end:
        targets.append(_parse_target(args.target_end, "end"))
    if not targets:
        raise ValueError("need --target-start and/or --target-end")
    result, report = position_endpoints(
        polygon,
        targets,
        spec=HarmonicitySpec(
            max_curvature_sign_changes=args.max_sign_changes,
            max_monotone_runs=args.max_runs,
        ),
        tol_pos=args.tol_pos,
        tol_ang=args.tol_ang,
        max_iter=args.max_iter,
        fair=args.fair,
    )
    if em.wants("json"):
        save_polygon(result, em.path("positioned_polygon.json"))
    em.json(
        "position_report.json",
        {
            "iterations": report.iterations,
            "converged": report.converged,
            "pos_errors": report.pos_errors,
            "ang_errors": report.ang_errors,
            "harmonicity_passed": report.harmonicity.passed,
            "harmonicity_reasons": list(report.harmonicity.reasons),
        },
    )
    em.svg("position.svg", lambda: _geometry_svg("positioned curve", result))
    print(
        f"converged={report.converged} after {report.iterations} iterations; "
        f"pos errors {report.pos_errors}, angle errors {report.ang_errors}"
    )
    if not report.converged:
        raise NumericFailure("positioning did not converge within the iteration budget")
    return EXIT_OK


def cmd_join(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    a = load_polygon(args.first)
    b = load_polygon(args.second)
    bridge = None
    if args.bridge:
        with open(args.bridge, "r", encoding="utf-8") as fh:
            bridge = np.asarray(json.load(fh), dtype=float)
    elif args.auto_bridge:
        bridge = default_bridge(a, b, args.auto_bridge)
    joined = join_float_polygons(a, b, bridge)
    curve = curve_of(joined)
    dom = curve.domain
    # knots whose spans mix vertices of a with bridge/b vertices
    bridge_count = 0 if bridge is None else len(bridge)
    seam_lo = a.count
    seam_hi = a.count + bridge_count + joined.degree
    seams = [
        float(k)
        for k in np.unique(curve.knots)
        if dom[0] < k < dom[1] and seam_lo <= k <= seam_hi
    ]
    jumps = {
        str(k): junction_smoothness_check(curve, k, joined.degree) for k in seams
    }
    if em.wants("json"):
        save_polygon(joined, em.path("joined_polygon.json"))
    em.json(
        "join_report.json",
        {
            "degree": joined.degree,
            "vertex_count": joined.count,
            "bridge_count": 0 if bridge is None else int(len(bridge)),
            "seam_knots": seams,
            "jumps_by_order": jumps,
            "max_jump_below_degree": max(
                (max(v[:-1]) if len(v) > 1 else 0.0) for v in jumps.values()
            )
            if jumps
            else 0.0,
        },
    )
    em.svg("join.svg", lambda: _geometry_svg("composite curve", joined))
    print(f"joined polygon: {joined.count} vertices, seam knots {seams}")
    return EXIT_OK


def cmd_convert(args) -> int:
    em = _Emitter(args.out_dir, args.format)
    polygon = load_polygon(args.polygon)
    target = args.to
    if target is None:
        target = FORMAT_CLAMPED if polygon.format == FORMAT_FLOAT else FORMAT_FLOAT

    if target == "bezier":
        segments = extract_bezier_segments(curve_of(polygon))
        if em.wants("json"):
            write_json(
                em.path("bezier_segments.json"),
                {"segments": [polygon_to_dict(s) for s in segments]},
            )
        print(f"extracted {len(segments)} Bezier segment(s)")
        return EXIT_OK

    if target == polygon.format:
        raise ValueError(f"polygon is already in {target} format")
    if target == FORMAT_CLAMPED:
        converted, report = to_clamped(polygon)
    else:
        converted, report = to_float(polygon)
    if em.wants("json"):
        save_polygon(converted, em.path("converted_polygon.json"))
    if args.report:
        em.json(
            "conversion_report.json",
            {
                "direction": report.direction,
                "inserted_knots": list(report.inserted_knots),
                "removed_knots": list(report.removed_knots),
                "max_extrapolation_ratio": report.max_extrapolation_ratio,
            },
        )
    if args.round_trip:
        back = to_float(converted)[0] if target == FORMAT_CLAMPED else to_clamped(converted)[0]
        if back.format == polygon.format:
            err = float(np.max(np.linalg.norm(back.vertices - polygon.vertices, axis=1)))
            spread = polygon.vertices.max(axis=0) - polygon.vertices.min(axis=0)
            scale = float(np.linalg.norm(spread))
            em.json("round_trip.json", {"max_vertex_error": err, "scale": scale})
            print(f"round trip max vertex error {err:.3e} (scale {scale:.3g})")
            if err > 1e-9 * max(scale, 1.0):
                raise NumericFailure("round trip identity exceeded 1e-9 * scale")
    print(f"converted {polygon.format} -> {target}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splinekit",
        description="B-spline control-polygon experiments: circle accuracy, "
        "format-conversion stability, curvature shape comparisons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("circle-test", help="circle approximation accuracy by degree")
    p.add_argument("--degree", type=int, choices=experiments.CIRCLE_TEST_DEGREES, default=None)
    p.add_argument("--n-vertices", type=int, default=None, help="default: 6 for degree 3, else 12")
    p.add_argument("--radius", type=float, default=experiments.DEFAULT_RADIUS)
    _add_common(p)
    p.set_defaults(func=cmd_circle_test)

    p = sub.add_parser("perturb-test", help="clamped-vertex rounding instability")
    p.add_argument("--decimals", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_perturb_test)

    p = sub.add_parser("curvature-compare", help="Bezier vs B-spline curvature on one polygon")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--theta", type=float, default=90.0, help="turning angle, degrees")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--l0", type=float, default=1.0)
    p.add_argument("--noise-floor", type=float, default=1e-6)
    _add_common(p)
    p.set_defaults(func=cmd_curvature_compare)

    p = sub.add_parser("spiral-approx", help="shape approximation of an analytic curve")
    p.add_argument("--curve", default="conical-spiral", help="registered analytic curve name")
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--s0", type=float, default=0.0)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument(
        "--noise-floor",
        type=float,
        default=experiments.SPIRAL_NOISE_FLOOR,
        help="signature prominence floor relative to each function's range",
    )
    _add_common(p)
    p.set_defaults(func=cmd_spiral_approx)

    p = sub.add_parser("typical", help="monotone/constant-curvature polygon report")
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--theta", type=float, default=None, help="turning angle, degrees")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--l0", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0, help="torsion angle, degrees (3D)")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--params", default=None, help="JSON file with the polygon parameters "
                   "(q, theta, count, degree, L0, phi, dim, start, start_dir; angles in degrees)")
    _add_common(p)
    p.set_defaults(func=cmd_typical)

    p = sub.add_parser("position", help="position float-polygon curve endpoints")
    p.add_argument("polygon", help="polygon JSON file")
    p.add_argument("--target-start", default=None, metavar="x,y[,z];tx,ty[,tz]")
    p.add_argument("--target-end", default=None, metavar="x,y[,z];tx,ty[,tz]")
    p.add_argument("--tol-pos", type=float, default=None)
    p.add_argument("--tol-ang", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--fair", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--max-runs", type=int, default=1, help="harmonicity: max monotone runs")
    p.add_argument("--max-sign-changes", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_position)

    p = sub.add_parser("join", help="concatenate two float polygons")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--bridge", default=None, help="JSON file with bridge vertices")
    p.add_argument("--auto-bridge", type=int, default=None, help="generate N bridge vertices")
    _add_common(p)
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("convert", help="convert polygon formats")
    p.add_argument("polygon", help="polygon JSON file")
    p.add_argument("--to", choices=[FORMAT_FLOAT, FORMAT_CLAMPED, "bezier"], default=None)
    p.add_argument("--report", action="store_true", help="write the conversion report")
    p.add_argument("--round-trip", action="store_true", help="verify there-and-back identity")
    _add_common(p)
    p.set_defaults(func=cmd_convert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, SplinekitError) as exc:
        kind = EXIT_NUMERIC if isinstance(exc, SplinekitError) else EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return kind
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
