import numpy as np
import pytest

import oracles
from splinekit import (
    analytic_circle,
    curve_of,
    derivatives,
    evolute_point,
    extract_bezier_segments,
    frenet,
    make_float_polygon,
    max_evolute_deviation,
    profile,
)
from splinekit.errors import CurvatureSingularityError, DomainError
from conftest import random_float_polygon

# Exact maximum of |E(t)| for the degree-9 dodecagon construction, frozen from
# an independent 50-digit basis-recursion evaluation (attained at the knots).
DEG9_DEVIATION_EXACT = 5.9012862e-8


class TestDeBoor:
    def test_degree1_midpoint(self):
        curve = curve_of(make_float_polygon([(0, 0), (1, 0)], 1))
        assert np.allclose(curve.point(1.5), (0.5, 0.0))

    def test_degree3_knot_value_closed_form(self, hexagon3):
        curve = curve_of(hexagon3)
        P = hexagon3.vertices
        for k in (3, 4, 5, 6):
            expected = (P[k - 3] + 4 * P[k - 2] + P[k - 1]) / 6.0
            assert np.allclose(curve.point(float(k)), expected, atol=1e-13)

    def test_degree3_against_basis_summation(self, hexagon3):
        curve = curve_of(hexagon3)
        for t in np.linspace(*curve.domain, 17):
            assert np.allclose(curve.point(t), oracles.basis_sum_point(curve, t), atol=1e-13)

    def test_degree9_radius_constant_and_inside(self, dodecagon9):
        curve = curve_of(dodecagon9)
        t = np.linspace(*curve.domain, 5000)
        radii = np.linalg.norm(curve.point(t), axis=1)
        assert radii.max() < 10.0
        assert (radii.max() - radii.min()) / radii.max() < 1e-6

    def test_outside_domain_raises(self, dodecagon9):
        curve = curve_of(dodecagon9)
        with pytest.raises(DomainError):
            curve.point(8.9)
        with pytest.raises(DomainError):
            curve.point(12.1)

    def test_triple_oracle_equivalence_random(self):
        rng = np.random.default_rng(7)
        for _ in range(60):
            poly = random_float_polygon(rng)
            curve = curve_of(poly)
            scale = float(np.max(np.linalg.norm(poly.vertices, axis=1))) or 1.0
            segments = extract_bezier_segments(curve)
            a, b = curve.domain
            for t in rng.uniform(a, b, size=6):
                p_deboor = curve.point(t)
                p_basis = oracles.basis_sum_point(curve, t)
                p_bernstein = oracles.bernstein_point(curve, t, segments)
                assert np.linalg.norm(p_deboor - p_basis) < 1e-12 * scale
                assert np.linalg.norm(p_deboor - p_bernstein) < 1e-12 * scale


class TestDerivatives:
    def test_degree1_constant_derivative(self):
        curve = curve_of(make_float_polygon([(1, 2), (4, 6)], 1))
        (d1,) = derivatives(curve, 1.5, 1)
        assert np.allclose(d1, (3.0, 4.0))

    def test_against_finite_differences(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            poly = random_float_polygon(rng, degree=int(rng.integers(3, 9)))
            curve = curve_of(poly)
            a, b = curve.domain
            t = rng.uniform(a + 0.17, b - 0.17)
            if abs(t - round(t)) < 0.05:
                t += 0.07
            d1, d2 = derivatives(curve, t, 2)
            fd1 = oracles.fd_derivative(curve.point, t, 1)
            fd2 = oracles.fd_derivative(curve.point, t, 2, h=1e-4)
            assert np.linalg.norm(d1 - fd1) < 1e-6 * max(1.0, np.linalg.norm(d1))
            assert np.linalg.norm(d2 - fd2) < 1e-5 * max(1.0, np.linalg.norm(d2))

    def test_degree9_speed_constant(self, dodecagon9):
        curve = curve_of(dodecagon9)
        t = np.linspace(10.0, 11.0, 2000)
        (d1,) = derivatives(curve, t, 1)
        speed = np.linalg.norm(d1, axis=1)
        assert (speed.max() - speed.min()) / speed.max() < 1e-6

    def test_order_beyond_degree_rejected(self, hexagon3):
        with pytest.raises(ValueError):
            derivatives(curve_of(hexagon3), 4.0, 4)


class TestFrenet:
    def test_straight_line_zero_curvature(self):
        curve = curve_of(make_float_polygon([(0, 0), (1, 0), (2, 0), (3, 0)], 2))
        for t in np.linspace(*curve.domain, 9):
            assert frenet(curve, t).curvature < 1e-14

    def test_degree9_curvature_constant(self, dodecagon9):
        curve = curve_of(dodecagon9)
        kappas = np.array([frenet(curve, t).curvature for t in np.linspace(9, 12, 200)])
        assert (kappas.max() - kappas.min()) / kappas.max() < 1e-6

    def test_planar_in_3d_zero_torsion(self):
        rng = np.random.default_rng(3)
        poly2 = random_float_polygon(rng, degree=4, count=9, dim=2)
        verts3 = np.column_stack([poly2.vertices, np.zeros(len(poly2.vertices))])
        curve = curve_of(make_float_polygon(verts3, 4))
        a, b = curve.domain
        for t in np.linspace(a, b, 11):
            fr = frenet(curve, t)
            assert fr.torsion is None or abs(fr.torsion) < 1e-9

    def test_unit_vectors(self, dodecagon9):
        fr = frenet(curve_of(dodecagon9), 10.3)
        assert abs(np.linalg.norm(fr.tangent) - 1.0) < 1e-12
        assert abs(np.linalg.norm(fr.normal) - 1.0) < 1e-12

    def test_curvature_periodic_across_segments(self, dodecagon9):
        curve = curve_of(dodecagon9)
        t = np.linspace(9.0, 10.0, 101)
        k0 = np.array([frenet(curve, x).curvature for x in t])
        k1 = np.array([frenet(curve, x + 1.0).curvature for x in t[:-1]])
        assert np.max(np.abs(k1 - k0[:-1]) / k0[:-1]) < 1e-10


class TestEvolute:
    def test_exact_circle_evolute_is_center(self):
        circle = analytic_circle(5.0, center=(1.0, -2.0))
        for t in np.linspace(0.1, 6.0, 13):
            assert np.linalg.norm(evolute_point(circle, t) - (1.0, -2.0)) < 1e-12

    def test_degree9_dodecagon_deviation(self, dodecagon9):
        dev, t_star = max_evolute_deviation(curve_of(dodecagon9), (0.0, 0.0), 30000)
        assert dev == pytest.approx(DEG9_DEVIATION_EXACT, rel=1e-5)
        # the maximum sits at an interior knot
        assert min(abs(t_star - k) for k in (9.0, 10.0, 11.0, 12.0)) < 1e-3

    def test_degree9_evolute_stays_near_origin(self, dodecagon9):
        curve = curve_of(dodecagon9)
        for t in np.linspace(9, 12, 500):
            assert np.linalg.norm(evolute_point(curve, t)) < 1e-7

    def test_straight_line_curvature_singularity(self):
        curve = curve_of(make_float_polygon([(0, 0), (1, 0), (2, 0), (3, 0)], 2))
        with pytest.raises(CurvatureSingularityError):
            evolute_point(curve, 2.5)

    def test_exact_circle_deviation_zero(self):
        circle = analytic_circle(7.0)
        dev, _ = max_evolute_deviation(circle, (0.0, 0.0), 1000)
        assert dev < 1e-12

    def test_sample_count_validated(self, dodecagon9):
        with pytest.raises(ValueError):
            max_evolute_deviation(curve_of(dodecagon9), (0.0, 0.0), 50)


class TestProfile:
    def test_straight_segment_length(self):
        curve = curve_of(make_float_polygon([(0, 0), (1, 0), (2, 0), (3, 0)], 1))
        prof = profile(curve, 64)
        assert prof.s[0] == 0.0
        assert abs(prof.length - 3.0) < 1e-10  # polyline P0..P3 over domain [1, 4]

    def test_arc_length_matches_chord_sum(self, dodecagon9):
        curve = curve_of(dodecagon9)
        prof = profile(curve, 128, domain=(9.0, 10.0))
        chord = oracles.chord_arc_length(curve.point, 9.0, 10.0)
        assert prof.length == pytest.approx(chord, rel=1e-7)

    def test_kappa_column_matches_frenet(self, hexagon3):
        curve = curve_of(hexagon3)
        prof = profile(curve, 32)
        for t, k in zip(prof.t, prof.kappa):
            assert k == pytest.approx(frenet(curve, float(t)).curvature, abs=1e-15)

    def test_s_strictly_increasing(self, dodecagon9):
        prof = profile(curve_of(dodecagon9), 256)
        assert np.all(np.diff(prof.s) > 0)

    def test_minimum_samples(self, hexagon3):
        with pytest.raises(ValueError):
            profile(curve_of(hexagon3), 8)

    def test_3d_profile_has_torsion(self):
        rng = np.random.default_rng(5)
        poly = random_float_polygon(rng, degree=4, count=10, dim=3)
        prof = profile(curve_of(poly), 64)
        assert prof.tau is not None and len(prof.tau) == 64
