import numpy as np
import pytest

from conftest import random_pair, shapely_overlap
from polyoverlap.geometry import SimplePolygon
from polyoverlap.oracle import _best_of, exact_overlap_general, exact_overlap_general_many, grid_max_overlap
from polyoverlap.shapes import FIXTURES, l_shape, plus_sign, rectangle, unit_square


def square():
    return SimplePolygon(unit_square().vertices)


class TestExactOverlap:
    def test_l_shape_examples(self):
        assert exact_overlap_general(l_shape(), l_shape(), (0, 0)) == pytest.approx(3.0, rel=1e-15)
        assert exact_overlap_general(l_shape(), l_shape(), (10, 0)) == 0.0

    def test_square_quarter(self):
        assert exact_overlap_general(square(), square(), (0.5, 0.5)) == pytest.approx(0.25, rel=1e-15)

    def test_symmetry(self, rng):
        for name in FIXTURES:
            P, Q = FIXTURES[name](), plus_sign()
            for t in rng.uniform(-4, 4, size=(30, 2)):
                assert abs(exact_overlap_general(P, Q, t) - exact_overlap_general(Q, P, -t)) <= 1e-12

    def test_against_shapely(self, rng):
        for name in FIXTURES:
            P = FIXTURES[name]()
            ts = rng.uniform(-3, 3, size=(50, 2))
            vals = exact_overlap_general_many(P, l_shape(), ts)
            for t, v in zip(ts, vals):
                assert v == pytest.approx(shapely_overlap(P, l_shape(), t), rel=1e-9, abs=1e-12)


class TestGrid:
    def test_unit_squares_from_fine_pitch(self):
        rep = grid_max_overlap(square(), square(), pitch=0.01, levels=3)
        assert rep.grid_pitch == pytest.approx(1e-5)
        assert rep.best_value >= 1 - 4 * rep.grid_pitch
        assert rep.refinement_levels == 3

    def test_crossed_rectangles(self):
        rep = grid_max_overlap(SimplePolygon(rectangle(10, 1).vertices), SimplePolygon(rectangle(1, 10).vertices))
        assert abs(rep.best_value - 1.0) <= rep.value_slack_bound

    def test_l_shape_self(self):
        rep = grid_max_overlap(l_shape(), l_shape())
        assert abs(rep.best_value - 3.0) <= rep.value_slack_bound

    def test_invariants(self, rng):
        for _ in range(10):
            X, Y = random_pair(rng, (4, 16))
            rep = grid_max_overlap(X, Y, base=41)
            assert rep.best_value <= min(X.area, Y.area) + 1e-9
            assert rep.value_slack_bound >= 0
            assert all(b >= a for a, b in zip(rep.level_values, rep.level_values[1:]))
            assert rep.level_values[-1] == rep.best_value

    def test_slack_covers_true_maximum(self):
        # a translate of a small square fits inside the big one: maximum is the small area
        rep = grid_max_overlap(SimplePolygon(rectangle(2, 2).vertices),
                               SimplePolygon(rectangle(0.3, 0.3).vertices), base=31)
        assert rep.best_value + rep.value_slack_bound >= 0.09

    def test_workers_agree(self):
        a = grid_max_overlap(plus_sign(), l_shape(), base=51)
        b = grid_max_overlap(plus_sign(), l_shape(), base=51, workers=4)
        assert a == b

    def test_tie_break_is_lexicographic(self):
        values = np.array([1.0, 2.0, 2.0, 2.0, 0.5])
        T = np.array([[0.0, 0.0], [1.0, 3.0], [1.0, -2.0], [4.0, -9.0], [-5.0, 0.0]])
        assert _best_of(values, T) == 2
