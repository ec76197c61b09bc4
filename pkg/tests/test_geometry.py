import numpy as np
import pytest

from splinekit import (
    BSplineCurve,
    ControlPolygon,
    curve_of,
    load_polygon,
    make_clamped_polygon,
    make_float_polygon,
    polygon_from_dict,
    polygon_of,
    polygon_to_dict,
    regular_polygon_vertices,
    save_polygon,
    uniform_float_knots,
)


class TestRegularPolygon:
    def test_unit_square(self):
        pts = regular_polygon_vertices(4, 1.0, 0.0, "ccw")
        expected = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        assert np.allclose(pts, expected, atol=1e-15)

    def test_dodecagon_start225_cw(self):
        pts = regular_polygon_vertices(12, 10.0, np.deg2rad(225), "cw")
        assert np.allclose(pts[0], (-7.071, -7.071), atol=5e-4)
        assert np.allclose(pts[1], (-9.659, -2.588), atol=5e-4)
        assert np.allclose(pts[2], (-9.659, 2.588), atol=5e-4)

    def test_hexagon_vertex(self):
        pts = regular_polygon_vertices(6, 10.0, 0.0, "ccw")
        assert np.allclose(pts[1], (5.0, 8.6603), atol=5e-5)

    def test_rotation_invariance(self):
        n, r = 12, 10.0
        pts = regular_polygon_vertices(n, r, 0.3, "ccw")
        ang = 2 * np.pi / n
        rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
        rotated = pts @ rot.T
        shifted = np.roll(pts, -1, axis=0)
        assert np.max(np.linalg.norm(rotated - shifted, axis=1)) < 1e-12 * r

    @pytest.mark.parametrize("n,r", [(2, 1.0), (3, 0.0), (3, -1.0)])
    def test_invalid_arguments(self, n, r):
        with pytest.raises(ValueError):
            regular_polygon_vertices(n, r)


class TestControlPolygon:
    def test_float_segment_count(self, dodecagon9):
        assert curve_of(dodecagon9).segment_count == 3
        assert curve_of(dodecagon9).domain == (9.0, 12.0)

    def test_hexagon_domain(self, hexagon3):
        assert curve_of(hexagon3).domain == (3.0, 6.0)
        assert curve_of(hexagon3).segment_count == 3

    def test_two_point_degree_one(self):
        poly = make_float_polygon([(0, 0), (2, 0)], 1)
        curve = curve_of(poly)
        assert curve.domain == (1.0, 2.0)
        assert np.allclose(curve.point(1.5), (1.0, 0.0))

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            make_float_polygon([(0, 0), (1, 1)], 2)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            make_float_polygon([(0, 0), (np.nan, 1)], 1)

    def test_float_with_knots_rejected(self):
        with pytest.raises(ValueError):
            ControlPolygon(1, [(0, 0), (1, 1)], "float", knots=[0, 1, 2, 3])

    def test_clamped_requires_knots(self):
        with pytest.raises(ValueError):
            ControlPolygon(2, [(0, 0), (1, 1), (2, 0)], "clamped")

    def test_immutability(self, dodecagon9):
        with pytest.raises(ValueError):
            dodecagon9.vertices[0] = (0.0, 0.0)

    def test_equality_is_exact(self):
        a = make_float_polygon([(0, 0), (1, 0), (2, 1)], 2)
        b = make_float_polygon([(0, 0), (1, 0), (2, 1)], 2)
        c = make_float_polygon([(0, 0), (1, 0), (2, 1 + 1e-16)], 2)
        assert a == b
        assert (a == c) == (1.0 + 1e-16 == 1.0)  # exact representation comparison


class TestCurveOf:
    def test_round_trip_identity(self, dodecagon9):
        assert polygon_of(curve_of(dodecagon9)) == dodecagon9

    def test_clamped_interpolates_ends(self):
        poly = make_clamped_polygon([(0, 0), (1, 2), (3, 2), (4, 0)], 3)
        curve = curve_of(poly)
        a, b = curve.domain
        assert np.allclose(curve.point(a), (0, 0), atol=1e-14)
        assert np.allclose(curve.point(b), (4, 0), atol=1e-14)

    def test_float_knot_vector(self, hexagon3):
        curve = curve_of(hexagon3)
        assert np.array_equal(curve.knots, uniform_float_knots(6, 3))

    def test_point_count_knot_consistency(self):
        with pytest.raises(ValueError):
            BSplineCurve(2, [0, 1, 2, 3, 4], [(0, 0), (1, 1), (2, 2)])


class TestPolygonJson:
    def test_round_trip(self, tmp_path, dodecagon9):
        path = tmp_path / "poly.json"
        save_polygon(dodecagon9, path)
        loaded = load_polygon(path)
        assert loaded == dodecagon9

    def test_clamped_round_trip(self, tmp_path):
        poly = make_clamped_polygon([(0, 0), (1, 2), (3, 2), (4, 0)], 3)
        path = tmp_path / "poly.json"
        save_polygon(poly, path)
        assert load_polygon(path) == poly

    def test_precision_at_least_15_digits(self, tmp_path):
        value = 1.0 + 1e-14
        poly = make_float_polygon([(value, 0), (1, 1)], 1)
        path = tmp_path / "poly.json"
        save_polygon(poly, path)
        assert load_polygon(path).vertices[0, 0] == value

    def test_schema_fields(self, dodecagon9):
        data = polygon_to_dict(dodecagon9)
        assert set(data) == {"degree", "format", "dim", "points"}
        clamped = make_clamped_polygon([(0, 0), (1, 2), (3, 2)], 2)
        data_c = polygon_to_dict(clamped)
        assert "knots" in data_c
        assert polygon_from_dict(data_c) == clamped

    def test_float_with_knots_rejected(self):
        data = {"degree": 1, "format": "float", "dim": 2, "points": [[0, 0], [1, 1]], "knots": [0, 1, 2, 3]}
        with pytest.raises(ValueError):
            polygon_from_dict(data)

    def test_no_partial_files(self, tmp_path, dodecagon9):
        save_polygon(dodecagon9, tmp_path / "poly.json")
        leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".tmp")]
        assert leftovers == []
