import numpy as np
import pytest

from splinekit import make_float_polygon, regular_polygon_vertices

START_ANGLE = np.deg2rad(225.0)


@pytest.fixture
def dodecagon_vertices():
    return regular_polygon_vertices(12, 10.0, START_ANGLE, "cw")


@pytest.fixture
def dodecagon9(dodecagon_vertices):
    """Degree-9 float polygon on the full dodecagon (3 segments)."""
    return make_float_polygon(dodecagon_vertices, 9)


@pytest.fixture
def dodecagon9_segment(dodecagon_vertices):
    """Degree-9 float polygon of a single 30-degree arc segment (10 vertices)."""
    return make_float_polygon(dodecagon_vertices[:10], 9)


@pytest.fixture
def hexagon3():
    verts = regular_polygon_vertices(6, 10.0, START_ANGLE, "cw")
    return make_float_polygon(verts, 3)


def random_float_polygon(rng, degree=None, count=None, dim=2, scale=10.0, max_degree=10):
    """Random float polygon with mildly spread vertices (no exact degeneracies)."""
    if degree is None:
        cap = max_degree if count is None else min(max_degree, count - 1)
        degree = int(rng.integers(2, cap + 1))
    if count is None:
        count = int(rng.integers(max(5, degree + 1), 41))
    steps = rng.uniform(-1.0, 1.0, size=(count, dim)) * scale / np.sqrt(count)
    verts = np.cumsum(steps, axis=0)
    return make_float_polygon(verts, degree)
