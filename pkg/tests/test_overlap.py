import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_pair, shapely_overlap
from polyoverlap.errors import DegenerateConfigurationError
from polyoverlap.geometry import ConvexPolygon, overlap_area, overlap_area_many
from polyoverlap.overlap import event_polygons, event_segments, face_quadratic, on_event_boundary
from polyoverlap.quadratic import (Quadratic2, maximize_quadratic_over_convex,
                                   maximize_quadratic_over_region)
from polyoverlap.shapes import random_convex_polygon, rectangle, unit_square


def distance_to_segments(segs, p):
    a = segs[:, 0]
    d = segs[:, 1] - a
    s = np.clip(np.sum((p - a) * d, axis=1) / np.sum(d * d, axis=1), 0, 1)
    return float(np.sqrt(np.min(np.sum((a + s[:, None] * d - p) ** 2, axis=1))))


def points_in_disk(rng, center, radius, count):
    ang = rng.uniform(0, 2 * np.pi, count)
    rad = radius * np.sqrt(rng.uniform(size=count))
    return np.asarray(center) + np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])


class TestOverlapArea:
    @pytest.mark.parametrize("t, expected", [((0, 0), 1.0), ((0.5, 0), 0.5), ((0.25, 0.25), 0.5625)])
    def test_unit_squares(self, t, expected):
        assert overlap_area(unit_square(), unit_square(), t) == pytest.approx(expected)

    def test_many_matches_single(self, rng):
        X, Y = random_pair(rng)
        ts = rng.uniform(-2, 2, size=(50, 2))
        assert np.allclose(overlap_area_many(X, Y, ts), [overlap_area(X, Y, t) for t in ts], atol=0)


class TestFaceQuadratic:
    def test_unit_squares_positive_quadrant(self):
        q = face_quadratic(unit_square(), unit_square(), (0.5, 0.5))
        assert q.coefficients() == pytest.approx((0, 1, 0, -1, -1, 1))

    def test_unit_squares_fourth_quadrant(self):
        q = face_quadratic(unit_square(), unit_square(), (0.5, -0.5))
        assert q.coefficients() == pytest.approx((0, -1, 0, -1, 1, 1))

    def test_on_boundary_raises(self):
        with pytest.raises(DegenerateConfigurationError):
            face_quadratic(unit_square(), unit_square(), (0.5, 0.0))

    def test_empty_overlap_is_zero(self):
        assert face_quadratic(unit_square(), unit_square(), (3.3, 0.7)) == Quadratic2()

    def test_random_12_gons(self, rng):
        for _ in range(100):
            X = random_convex_polygon(rng, 12)
            Y = random_convex_polygon(rng, 12, radius=rng.uniform(0.3, 1.5))
            segs = event_segments(X, Y)
            t0 = rng.uniform(-1.5, 1.5, 2)
            radius = min(1e-3, 0.5 * distance_to_segments(segs, t0))
            q = face_quadratic(X, Y, t0)
            pts = points_in_disk(rng, t0, radius, 20)
            assert np.abs(q.evaluate_many(pts) - overlap_area_many(X, Y, pts)).max() <= 1e-9

    def test_whole_face_against_shapely(self, rng):
        for _ in range(30):
            X, Y = random_pair(rng, (3, 10))
            segs = event_segments(X, Y)
            t0 = rng.uniform(-1, 1, 2)
            radius = 0.9 * distance_to_segments(segs, t0)
            q = face_quadratic(X, Y, t0)
            for p in points_in_disk(rng, t0, radius, 10):
                assert q(p) == pytest.approx(shapely_overlap(X, Y, p), abs=1e-9)


class TestEvents:
    def test_event_polygon_counts(self, rng):
        X, Y = random_pair(rng, (3, 12))
        polys = event_polygons(X, Y)
        assert len(polys) == len(X) + len(Y)
        assert len(event_segments(X, Y)) == 2 * len(X) * len(Y)

    def test_boundary_detection(self):
        S = unit_square()
        assert on_event_boundary(S, S, (1.0, 0.3))
        assert not on_event_boundary(S, S, (0.4, 0.3))


class TestMaximizeQuadratic:
    def test_concave_peak(self):
        q = Quadratic2(a=-1, c=-1)
        res = maximize_quadratic_over_convex(q, rectangle(2, 2, -1, -1))
        assert np.allclose(res.point, (0, 0)) and res.value == pytest.approx(0)

    def test_linear_on_box(self):
        res = maximize_quadratic_over_convex(Quadratic2(d=1), unit_square())
        assert res.point[0] == pytest.approx(1) and res.value == pytest.approx(1)

    def test_decreasing_saddle(self):
        q = Quadratic2(b=1, d=-1, e=-1, g=1)
        res = maximize_quadratic_over_convex(q, rectangle(0.5, 0.5))
        assert np.allclose(res.point, (0, 0)) and res.value == pytest.approx(1)

    def test_region_with_hole_excludes_interior_peak(self):
        q = Quadratic2(a=-1, c=-1)
        outer = rectangle(2, 2, -1, -1).vertices
        hole = rectangle(1, 1, -0.5, -0.5).vertices
        res = maximize_quadratic_over_region(q, outer, [hole])
        assert res.value == pytest.approx(-0.25)

    def test_random_against_dense_sampling(self, rng):
        for _ in range(50):
            face = random_convex_polygon(rng, int(rng.integers(3, 12)))
            q = Quadratic2(*rng.normal(size=6))
            res = maximize_quadratic_over_convex(q, face)
            assert face.contains(res.point, tol=1e-9)
            assert q(res.point) == pytest.approx(res.value)
            lo, hi = face.vertices.min(0), face.vertices.max(0)
            pts = rng.uniform(lo, hi, size=(4000, 2))
            pts = pts[face.contains_points(pts, tol=0)]
            assert np.all(q.evaluate_many(pts) <= res.value + 1e-9)


def test_unimodal_along_lines(rng):
    for _ in range(20):
        X, Y = random_pair(rng, (3, 20))
        for _ in range(10):
            p = rng.uniform(-2, 2, 2)
            u = rng.normal(size=2)
            s = np.linspace(-4, 4, 201)
            f = overlap_area_many(X, Y, p + s[:, None] * u)
            dips = (f[1:-1] < f[:-2] - 1e-9) & (f[1:-1] < f[2:] - 1e-9)
            assert not dips.any()


coords = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), coords, coords)
def test_quadratic_exact_at_generic_points(seed, tx, ty):
    rng = np.random.default_rng(seed)
    X, Y = random_pair(rng, (3, 10))
    if on_event_boundary(X, Y, (tx, ty), tol=1e-7):
        return
    q = face_quadratic(X, Y, (tx, ty))
    assert q((tx, ty)) == pytest.approx(overlap_area(X, Y, (tx, ty)), abs=1e-9)
