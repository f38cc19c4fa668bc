import math

import numpy as np
import pytest
from scipy.optimize import linprog

from conftest import boundary_samples, distance_to_convex, hexagon, random_pair
from polyoverlap.approx import (ApproxConfig, approx_polygon, bounding_rectangle, const_approx_by_rect,
                                containment_translation, preprocess, scaling_similarity)
from polyoverlap.errors import ValidationError
from polyoverlap.geometry import ConvexPolygon, contains_polygon, convex_intersection, width_and_diameter
from polyoverlap.oracle import grid_max_overlap
from polyoverlap.pairapprox import classify_pair
from polyoverlap.shapes import random_convex_polygon, rectangle, unit_square

TAU = 1e-9


def scipy_scaling(X, Y):
    """Minimal alpha with t + X inside alpha * Y, from scipy's LP solver."""
    n, b = Y.halfplanes()
    rows = []
    rhs = []
    for x in X.vertices:
        for nj, bj in zip(n, b):
            rows.append([-bj, nj[0], nj[1]])
            rhs.append(-(nj @ x))
    res = linprog([1, 0, 0], A_ub=rows, b_ub=rhs, bounds=[(0, None), (None, None), (None, None)],
                  method="highs")
    return res.fun


def fits_scaled(X, Y, alpha):
    n, b = Y.halfplanes()
    rows, rhs = [], []
    for x in X.vertices:
        for nj, bj in zip(n, b):
            rows.append([nj[0], nj[1]])
            rhs.append(alpha * bj - nj @ x)
    res = linprog([0, 0], A_ub=rows, b_ub=rhs, bounds=[(None, None)] * 2, method="highs")
    return res.status == 0


class TestScalingSimilarity:
    def test_identical(self):
        assert scaling_similarity(unit_square(), unit_square()).alpha == pytest.approx(1.0)

    def test_double_size(self):
        assert scaling_similarity(unit_square(), unit_square().scaled(2)).alpha == pytest.approx(0.5)

    def test_rectangle_into_square(self):
        assert scaling_similarity(rectangle(2, 1), unit_square()).alpha == pytest.approx(2.0)

    def test_random_against_scipy_with_witness_and_minimality(self, rng):
        for _ in range(60):
            X, Y = random_pair(rng, (3, 16))
            res = scaling_similarity(X, Y)
            assert res.alpha == pytest.approx(scipy_scaling(X, Y), rel=1e-7)
            moved = X.translated(res.witness)
            scaled = ConvexPolygon(Y.vertices * res.alpha)
            assert contains_polygon(scaled, moved, tol=TAU * max(1.0, res.alpha) * 10)
            assert not fits_scaled(X, Y, res.alpha * (1 - 1e-4))

    def test_containment_translation(self, rng):
        for _ in range(30):
            Y = random_convex_polygon(rng, 10, radius=2.0)
            X = random_convex_polygon(rng, 8, radius=0.5, center=(3, 3))
            if scaling_similarity(X, Y).alpha >= 1:
                continue
            s = containment_translation(X, Y)
            assert contains_polygon(Y, X.translated(s), tol=1e-9)


def check_sandwich(C):
    sw = bounding_rectangle(C)
    inner = sw.rect.translated(sw.anchor)
    outer = sw.scaled(5.0).translated(sw.anchor)
    return contains_polygon(C, inner, tol=TAU) and contains_polygon(outer, C, tol=TAU), sw


class TestBoundingRectangle:
    def test_triangle(self):
        C = ConvexPolygon([(0, 0), (2, 0), (1, 1)])
        ok, sw = check_sandwich(C)
        assert ok
        assert sorted(2 * np.array(sw.half_lengths))[0] == pytest.approx(0.5)
        assert abs(abs(sw.axes[0][0]) - 1.0) < 1e-12 or abs(abs(sw.axes[1][0]) - 1.0) < 1e-12

    def test_unit_square_area_ratio(self):
        ok, sw = check_sandwich(unit_square())
        assert ok
        assert unit_square().area / sw.rect.area <= 25 + 1e-9

    def test_thin_rectangle(self):
        C = rectangle(10, 0.1)
        ok, sw = check_sandwich(C)
        assert ok
        # the base follows the diameter, which for a rectangle is its diagonal
        long_axis = sw.axes[int(np.argmax(sw.half_lengths))]
        assert abs(long_axis[1]) <= math.sin(math.atan2(0.1, 10)) + 1e-12
        assert min(sw.half_lengths) / max(sw.half_lengths) < 0.05

    def test_random(self, rng):
        for _ in range(200):
            C = random_convex_polygon(rng, int(rng.integers(3, 64)), anisotropy=rng.uniform(1, 8))
            assert check_sandwich(C)[0]


def directed_distance(P, Pp, count=10_000):
    return distance_to_convex(boundary_samples(P, count), Pp).max()


class TestApproxPolygon:
    @pytest.mark.parametrize("m", [1, 2, 5, 17])
    def test_square_is_reproduced(self, m):
        Pp = approx_polygon(unit_square(), m)
        assert Pp.area == pytest.approx(1.0)
        assert len(Pp) == 4

    def test_hexagon(self):
        H = hexagon()
        Pp = approx_polygon(H, 4)
        assert contains_polygon(H, Pp, tol=TAU)
        assert directed_distance(H, Pp) <= math.sqrt(3) / 4 + TAU

    def test_random_64_gon(self, rng):
        P = random_convex_polygon(rng, 64)
        Pp = approx_polygon(P, 16)
        assert len(Pp) <= 40
        assert contains_polygon(P, Pp, tol=TAU)
        assert directed_distance(P, Pp) <= width_and_diameter(P).width / 16 + TAU

    def test_rejects_bad_m(self):
        with pytest.raises(ValidationError):
            approx_polygon(unit_square(), 0)


def fits_in(inner, outer, factor):
    """Some translate of ``inner`` lies in ``factor * outer``."""
    return scaling_similarity(inner, outer).alpha <= factor * (1 + 1e-9)


class TestConstApproxByRect:
    def test_unit_squares(self, rng):
        X = Y = unit_square()
        rect, c_r = const_approx_by_rect(X, Y)
        assert fits_in(rect, unit_square(), 1.0)
        for t in rng.uniform(-1, 1, size=(100, 2)):
            inter = convex_intersection(X, Y, t)
            if inter is not None:
                assert fits_in(ConvexPolygon(inter.vertices), rect, c_r)

    def test_crossed_rectangles(self, rng):
        X, Y = rectangle(10, 1), rectangle(1, 10)
        report = grid_max_overlap(X, Y, base=101, levels=2)
        assert report.best_value == pytest.approx(1.0, abs=report.value_slack_bound)
        rect, c_r = const_approx_by_rect(X, Y)
        assert fits_in(rect, unit_square(), 1.0)
        lo = X.vertices.min(0) - Y.vertices.max(0)
        hi = X.vertices.max(0) - Y.vertices.min(0)
        for t in rng.uniform(lo, hi, size=(100, 2)):
            inter = convex_intersection(X, Y, t)
            if inter is not None:
                assert fits_in(ConvexPolygon(inter.vertices), rect, c_r)

    def test_thin_identical(self, rng):
        X = Y = rectangle(5, 0.05)
        rect, c_r = const_approx_by_rect(X, Y)
        assert fits_in(rect, X, 1.0)
        for t in rng.uniform(-5, 5, size=(100, 2)) * [1, 0.01]:
            inter = convex_intersection(X, Y, t)
            if inter is not None:
                assert fits_in(ConvexPolygon(inter.vertices), rect, c_r)


class TestPreprocess:
    def test_unit_squares(self):
        X = Y = unit_square()
        pre = preprocess(X, Y, 0.25)
        square = pre.map(pre.rect.scaled(2 * ApproxConfig().c_r))
        assert np.allclose(np.sort(square.vertices, axis=0), [[0, 0], [0, 0], [1, 1], [1, 1]], atol=1e-9)
        assert contains_polygon(pre.x_mapped, pre.x_approx, tol=TAU)
        assert contains_polygon(pre.y_mapped, pre.y_approx, tol=TAU)
        assert pre.resolution == 128

    def test_crossed_rectangles_width_bound(self):
        pre = preprocess(rectangle(10, 1), rectangle(1, 10), 0.1)
        assert width_and_diameter(pre.x_mapped).width <= 7 + TAU
        assert width_and_diameter(pre.y_mapped).width <= 7 + TAU

    def test_pullback_is_inner(self, rng):
        for _ in range(50):
            X, Y = random_pair(rng, (3, 30))
            pre = preprocess(X, Y, float(rng.uniform(0.05, 0.5)))
            assert pre.x_back.area <= X.area * (1 + 1e-12)
            assert pre.y_back.area <= Y.area * (1 + 1e-12)
            assert contains_polygon(X, pre.x_back, tol=1e-9)

    def test_rejects_bad_eps(self):
        with pytest.raises(ValidationError):
            preprocess(unit_square(), unit_square(), 1.0)

    def test_width_bound_on_incomparable_pairs(self, rng):
        count = 0
        while count < 30:
            X, Y = random_pair(rng, (3, 20))
            if classify_pair(X, Y) != "incomparable":
                continue
            count += 1
            pre = preprocess(X, Y, 0.25)
            assert width_and_diameter(pre.x_mapped).width <= 7 + TAU
            assert width_and_diameter(pre.y_mapped).width <= 7 + TAU


def test_config_rejects_nonpositive_constants():
    with pytest.raises(ValidationError):
        ApproxConfig(c3=0)
