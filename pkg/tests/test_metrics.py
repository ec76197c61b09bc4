import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splinekit import (
    ControlPolygon,
    HarmonicitySpec,
    SampledFunction,
    ShapeSignature,
    SignatureEvent,
    analytic_circle,
    curve_of,
    discrete_geometry,
    graph_curvature,
    harmonicity_report,
    level_curvature,
    make_float_polygon,
    mineur_farin_vertices,
    MineurFarinParams,
    monotone_runs,
    profile,
    regular_polygon_vertices,
    shape_equivalent,
    shape_signature,
    to_clamped,
    to_float,
)


class TestDiscreteGeometry:
    def test_collinear_zero_curvature(self):
        poly = make_float_polygon([(x, 0.0) for x in range(6)], 2)
        geo = discrete_geometry(poly)
        assert np.allclose(geo.curvature, 0.0, atol=1e-15)

    def test_regular_ngon_constant(self):
        verts = regular_polygon_vertices(12, 10.0, 0.2, "ccw")
        geo = discrete_geometry(make_float_polygon(verts, 3))
        assert np.allclose(geo.curvature, geo.curvature[0], rtol=1e-12)

    def test_ngon_value_matches_closed_form(self):
        # kappa_hat = 2 / (R (1 + cos(2 pi / N))) for a regular N-gon
        n, r = 24, 5.0
        verts = regular_polygon_vertices(n, r, 0.0, "ccw")
        geo = discrete_geometry(make_float_polygon(verts, 3))
        expected = 2.0 / (r * (1.0 + np.cos(2 * np.pi / n)))
        assert geo.curvature[0] == pytest.approx(expected, rel=1e-12)

    def test_mineur_farin_strictly_decreasing(self):
        params = MineurFarinParams(L0=1.0, q=2.0, theta=np.pi / 2, count=5)
        geo = discrete_geometry(make_float_polygon(mineur_farin_vertices(params), 4))
        assert np.all(np.diff(geo.curvature) < 0)

    def test_convergence_to_circle_curvature(self):
        # doubling N must reduce the error by at least 2x (observed order >= 1)
        r = 10.0
        errors = []
        for n in (12, 24, 48):
            verts = regular_polygon_vertices(n, r, 0.0, "ccw")
            geo = discrete_geometry(make_float_polygon(verts, 3))
            errors.append(abs(geo.curvature[0] - 1.0 / r))
        assert errors[0] / errors[1] >= 2.0
        assert errors[1] / errors[2] >= 2.0

    def test_scaling_covariance(self):
        rng = np.random.default_rng(2)
        verts = np.cumsum(rng.uniform(-1, 1, size=(9, 2)), axis=0)
        lam = 3.7
        geo1 = discrete_geometry(make_float_polygon(verts, 3))
        geo2 = discrete_geometry(make_float_polygon(lam * verts, 3))
        assert np.allclose(geo2.curvature, geo1.curvature / lam, rtol=1e-10)

    def test_torsion_needs_3d(self):
        verts = np.column_stack([np.arange(7.0), np.sin(np.arange(7.0)), 0.3 * np.arange(7.0) ** 2])
        geo = discrete_geometry(make_float_polygon(verts, 3))
        assert np.isfinite(geo.torsion[1:-1]).all()
        geo2d = discrete_geometry(make_float_polygon(verts[:, :2], 3))
        assert np.isnan(geo2d.torsion).all()

    def test_helix_torsion_sign(self):
        t = np.linspace(0, 4 * np.pi, 24)
        verts = np.column_stack([np.cos(t), np.sin(t), 0.5 * t])
        geo = discrete_geometry(make_float_polygon(verts, 3))
        inner = geo.torsion[np.isfinite(geo.torsion)]
        assert np.all(inner > 0)  # right-handed helix


class TestHarmonicity:
    def test_dodecagon_single_run(self, dodecagon9):
        report = harmonicity_report(dodecagon9, HarmonicitySpec())
        assert report.passed
        assert len(report.monotone_runs) == 1
        assert report.sign_changes == 0

    def test_mineur_farin_monotone_passes(self):
        params = MineurFarinParams(L0=1.0, q=2.0, theta=np.pi / 2, count=5)
        poly = make_float_polygon(mineur_farin_vertices(params), 4)
        report = harmonicity_report(poly, HarmonicitySpec())
        assert report.passed
        assert len(report.monotone_runs) == 1

    def test_perturbed_float_polygon_fails(self, dodecagon9_segment):
        clamped, _ = to_clamped(dodecagon9_segment)
        verts = np.array(clamped.vertices)
        verts[1] = np.trunc(verts[1] * 1000) / 1000
        back, _ = to_float(ControlPolygon(9, verts, "clamped", clamped.knots))
        report = harmonicity_report(back, HarmonicitySpec())
        assert not report.passed
        assert report.sign_changes > 0
        assert len(report.monotone_runs) > 1

    def test_short_leg_fails_with_reason(self):
        poly = make_float_polygon([(0, 0), (1e-12, 0), (1, 1), (2, 0)], 2)
        report = harmonicity_report(poly, HarmonicitySpec(min_leg_length=1e-6))
        assert not report.passed
        assert any("leg length" in r for r in report.reasons)

    def test_runs_partition_range(self):
        values = np.array([0.0, 1.0, 2.0, 1.0, 0.5, 2.0, 3.0])
        runs = monotone_runs(values)
        assert runs[0][0] == 0 and runs[-1][1] == len(values) - 1
        for a, b in zip(runs[:-1], runs[1:]):
            assert a[1] == b[0]
        assert [r[2] for r in runs] == ["up", "down", "up"]

    def test_plateau_merges(self):
        values = np.array([1.0, 1.0, 1.0 + 1e-15, 1.0, 1.0])
        assert len(monotone_runs(values)) == 1

    def test_scaling_leaves_verdict_unchanged(self):
        rng = np.random.default_rng(8)
        verts = np.cumsum(rng.uniform(-1, 1, size=(10, 2)), axis=0)
        spec = HarmonicitySpec(max_monotone_runs=10, max_curvature_sign_changes=10)
        r1 = harmonicity_report(make_float_polygon(verts, 3), spec)
        r2 = harmonicity_report(make_float_polygon(100.0 * verts, 3), spec)
        assert r1.passed == r2.passed
        assert np.allclose(r1.turning_angles, r2.turning_angles, atol=1e-12)
        assert len(r1.monotone_runs) == len(r2.monotone_runs)


class TestGraphCurvature:
    def test_constant_function_zero(self):
        fn = SampledFunction(np.linspace(0, 1, 50), np.full(50, 2.5))
        assert np.allclose(graph_curvature(fn).values, 0.0, atol=1e-12)

    def test_linear_function_zero(self):
        s = np.linspace(0, 2, 64)
        fn = SampledFunction(s, 3.1 * s - 0.7)
        assert np.allclose(graph_curvature(fn).values, 0.0, atol=1e-10)

    def test_semicircle_graph_unit_curvature(self):
        s = np.linspace(-0.95, 0.95, 1000)
        fn = SampledFunction(s, -np.sqrt(1.0 - s**2))
        k = graph_curvature(fn)
        inner = (np.abs(s) < 0.9) & ~k.low_confidence
        assert np.max(np.abs(k.values[inner] - 1.0)) < 1e-3

    def test_endpoints_flagged(self):
        fn = SampledFunction(np.linspace(0, 1, 20), np.linspace(0, 1, 20) ** 2)
        k = graph_curvature(fn)
        assert k.low_confidence[0] and k.low_confidence[-1]
        assert not k.low_confidence[1:-1].any()

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            graph_curvature(SampledFunction([0, 1, 2], [0, 1, 2]))

    def test_nonuniform_grid(self):
        # smoothly stretched grid, the shape arc-length grids actually take
        u = np.linspace(-1, 1, 400)
        s = 0.8 * np.sin(1.2 * u) / np.sin(1.2)
        fn = SampledFunction(s, -np.sqrt(1.0 - s**2))
        k = graph_curvature(fn)
        inner = (np.abs(s) < 0.6) & ~k.low_confidence
        assert np.max(np.abs(k.values[inner] - 1.0)) < 1e-4


class TestLevelCurvature:
    def test_circle_level2_zero(self):
        circle = analytic_circle(5.0)
        prof = profile(circle, 256, domain=(0.0, np.pi))
        level2 = level_curvature(prof, "curvature", 2)
        assert np.max(np.abs(level2.values)) < 1e-8

    def test_line_all_levels_zero(self):
        curve = curve_of(make_float_polygon([(x, 0.0) for x in range(8)], 2))
        prof = profile(curve, 128)
        for level in (1, 2, 3):
            fn = level_curvature(prof, "curvature", level)
            assert np.max(np.abs(fn.values)) < 1e-12

    def test_level1_is_kappa(self, hexagon3):
        prof = profile(curve_of(hexagon3), 64)
        fn = level_curvature(prof, "curvature", 1)
        assert np.array_equal(fn.values, prof.kappa)

    def test_torsion_requires_3d(self, hexagon3):
        prof = profile(curve_of(hexagon3), 64)
        with pytest.raises(ValueError):
            level_curvature(prof, "torsion", 1)

    def test_invalid_source(self, hexagon3):
        prof = profile(curve_of(hexagon3), 64)
        with pytest.raises(ValueError):
            level_curvature(prof, "speed", 1)


class TestShapeSignature:
    def test_monotone_no_extrema(self):
        s = np.linspace(0, 1, 100)
        sig = shape_signature(SampledFunction(s, np.exp(-s)))
        assert all(e.kind == "inflection" for e in sig.events)

    def test_single_hump(self):
        s = np.linspace(-3, 3, 301)
        sig = shape_signature(SampledFunction(s, np.exp(-(s**2))))
        kinds = sig.kinds
        assert kinds.count("max") == 1
        assert kinds.count("min") == 0
        assert kinds.count("inflection") == 2
        assert kinds == ("inflection", "max", "inflection")

    def test_hump_location(self):
        s = np.linspace(-3, 3, 301)
        sig = shape_signature(SampledFunction(s, np.exp(-((s - 0.4) ** 2))))
        (ev,) = [e for e in sig.events if e.kind == "max"]
        assert ev.s == pytest.approx(0.4, abs=1e-3)

    def test_noise_below_floor_suppressed(self):
        rng = np.random.default_rng(12)
        s = np.linspace(0, 1, 400)
        base = 2.0 - s
        noisy = base + 1e-9 * rng.standard_normal(len(s))
        sig = shape_signature(SampledFunction(s, noisy), noise_floor=1e-6)
        assert sum(1 for e in sig.events if e.kind in ("max", "min")) == 0

    def test_locations_strictly_increasing(self):
        s = np.linspace(0, 10, 500)
        f = np.sin(s)
        sig = shape_signature(SampledFunction(s, f))
        locs = [e.s for e in sig.events]
        assert all(b > a for a, b in zip(locs, locs[1:]))

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            shape_signature(SampledFunction(np.arange(5.0), np.arange(5.0)))

    def test_offset_invariance(self):
        s = np.linspace(0, 6, 300)
        f = np.sin(s) * np.exp(-0.3 * s)
        k1 = shape_signature(graph_curvature(SampledFunction(s, f)))
        k2 = shape_signature(graph_curvature(SampledFunction(s, f + 42.0)))
        assert k1.kinds == k2.kinds


class TestShapeEquivalent:
    def _sig(self, kinds):
        return ShapeSignature(tuple(SignatureEvent(k, float(i)) for i, k in enumerate(kinds)))

    def test_identical_true(self):
        a = self._sig(["inflection", "max", "inflection"])
        b = self._sig(["inflection", "max", "inflection"])
        assert shape_equivalent(a, b)

    def test_max_vs_min_false(self):
        assert not shape_equivalent(self._sig(["max"]), self._sig(["min"]))

    def test_locations_ignored(self):
        a = ShapeSignature((SignatureEvent("max", 1.0),))
        b = ShapeSignature((SignatureEvent("max", 99.0),))
        assert shape_equivalent(a, b)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.sampled_from(["max", "min", "inflection"]), max_size=6),
        st.lists(st.sampled_from(["max", "min", "inflection"]), max_size=6),
        st.lists(st.sampled_from(["max", "min", "inflection"]), max_size=6),
    )
    def test_equivalence_relation(self, ka, kb, kc):
        a, b, c = self._sig(ka), self._sig(kb), self._sig(kc)
        assert shape_equivalent(a, a)
        assert shape_equivalent(a, b) == shape_equivalent(b, a)
        if shape_equivalent(a, b) and shape_equivalent(b, c):
            assert shape_equivalent(a, c)
