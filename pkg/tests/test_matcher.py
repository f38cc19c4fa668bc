import numpy as np
import pytest

from conftest import hexagon, sample_translations, shapely_overlap
from polyoverlap.errors import ValidationError
from polyoverlap.geometry import AffineMap, SimplePolygon, overlap_area
from polyoverlap.matcher import MatchConfig, PairSum, build_query_structure, match_polygons, query_overlap
from polyoverlap.oracle import exact_overlap_general, grid_max_overlap
from polyoverlap.shapes import l_shape, plus_sign, rectangle, unit_square


def reflected(P):
    return SimplePolygon(-np.asarray(P.ring))


def square():
    return SimplePolygon(unit_square().vertices)


@pytest.fixture(scope="module")
def l_match():
    return match_polygons(l_shape(), l_shape(), 0.25)


class TestExamples:
    def test_unit_squares(self):
        res = match_polygons(square(), square(), 0.2)
        assert res.value >= 0.8
        assert np.hypot(res.translation.x, res.translation.y) <= 1e-6
        assert res.pair_budget == 0.2

    def test_l_shape_self(self, l_match):
        assert l_match.value >= 0.75 * 3.0
        assert l_match.stats["parts_p"] == 2
        assert l_match.pair_budget == pytest.approx(0.25 / 4)
        assert exact_overlap_general(l_shape(), l_shape(), l_match.translation) >= 0.75 * 3.0 - 0.25 * 3.0

    def test_l_shape_reflected(self):
        P, Q = l_shape(), reflected(l_shape())
        rep = grid_max_overlap(P, Q)
        res = match_polygons(P, Q, 0.25)
        assert res.value >= 0.75 * rep.best_value - rep.value_slack_bound

    def test_crossed_rectangles(self):
        P = SimplePolygon(rectangle(10, 1).vertices)
        Q = SimplePolygon(rectangle(1, 10).vertices)
        res = match_polygons(P, Q, 0.1)
        assert res.value >= 0.9
        assert res.stats["branches"] == ["incomparable"]

    @pytest.mark.parametrize("eps", [0.0, 1.0, 2.0])
    def test_eps_rejected(self, eps):
        with pytest.raises(ValidationError):
            match_polygons(square(), square(), eps)


class TestQuery:
    def test_far_and_half_shift(self):
        res = match_polygons(square(), square(), 0.2)
        qs = build_query_structure(res)
        assert qs((2.0, 2.0)) == 0.0
        assert qs((0.5, 0.0)) == pytest.approx(0.5, abs=0.2)

    def test_value_equals_query_at_translation(self, l_match):
        qs = build_query_structure(l_match)
        t = l_match.translation
        assert abs(query_overlap(qs, t) - l_match.value) <= 1e-12
        assert abs(l_match.pairsum(t) - l_match.value) <= 1e-12

    def test_query_matches_direct_sum(self, l_match, rng):
        qs = build_query_structure(l_match)
        ps = l_match.pairsum
        ts = sample_translations(rng, l_shape(), l_shape(), 400, center=(0, 0))
        direct = ps.evaluate_many(ts)
        for t, d in zip(ts, direct):
            v = qs(t)
            assert abs(v - d) <= 1e-12
            assert qs(t, linear_scan=True) == v

    def test_rebuilt_from_pairsum(self, l_match, rng):
        ps = PairSum(l_shape(), l_shape(), 0.25)
        qs = build_query_structure(ps)
        for t in rng.uniform(-2, 2, size=(50, 2)):
            assert qs(t) == build_query_structure(l_match)(t)

    def test_bad_context(self):
        with pytest.raises(ValidationError):
            build_query_structure("not a context")


class TestGuarantees:
    def test_error_decomposition(self, l_match, rng):
        ps = l_match.pairsum
        mu_ij = [grid_max_overlap(ps.dec_p.parts[i], ps.dec_q.parts[j], base=61).best_value for i, j in ps.index]
        budget = ps.pair_budget * sum(mu_ij)
        for t in sample_translations(rng, l_shape(), l_shape(), 200, center=(0, 0)):
            assert abs(ps(t) - ps.exact_pair_overlaps(t).sum()) <= budget + 1e-9

    def test_additivity(self, rng):
        ps = PairSum(plus_sign(), l_shape(), 0.25)
        for t in sample_translations(rng, plus_sign(), l_shape(), 100):
            whole = shapely_overlap(plus_sign(), l_shape(), t)
            assert ps.exact_pair_overlaps(t).sum() == pytest.approx(whole, rel=1e-9, abs=1e-12)

    def test_error_bound_covers_samples(self, rng):
        ps = PairSum(plus_sign(), l_shape(), 0.25)
        bound = ps.error_bound()
        for t in sample_translations(rng, plus_sign(), l_shape(), 100):
            assert abs(ps(t) - ps.exact_pair_overlaps(t).sum()) <= bound + 1e-12

    def test_certified_stop(self):
        small = SimplePolygon(AffineMap(0.5 * np.eye(2))(l_shape()).ring)
        P = plus_sign()
        cfg = MatchConfig(certified_stop=True)
        res = match_polygons(P, small, 0.25, cfg)
        rep = grid_max_overlap(P, small)
        assert res.stats["stop"] in ("certified", "exhausted")
        assert res.value >= 0.75 * rep.best_value - rep.value_slack_bound
        assert abs(res.pairsum(res.translation) - res.value) <= 1e-12

    def test_smaller_eps_not_much_worse(self):
        P = SimplePolygon(hexagon().vertices)
        Q = SimplePolygon(AffineMap([[1.3, 0.2], [0.0, 0.7]])(hexagon()).vertices)
        mu = grid_max_overlap(P, Q).best_value
        coarse = match_polygons(P, Q, 0.25).value
        fine = match_polygons(P, Q, 0.1).value
        assert fine >= coarse - 0.25 * mu
        assert overlap_area(hexagon(), AffineMap([[1.3, 0.2], [0.0, 0.7]])(hexagon()), (0, 0)) <= mu + 1e-9


class TestDeterminism:
    def test_parallel_pairs_bit_identical(self):
        P, Q = plus_sign(), reflected(l_shape())
        serial = match_polygons(P, Q, 0.25, MatchConfig(certified_stop=True))
        threaded = match_polygons(P, Q, 0.25, MatchConfig(certified_stop=True, parallel=True))
        assert serial.value == threaded.value
        assert serial.translation == threaded.translation
        assert serial.face_count == threaded.face_count

    def test_repeatable(self, l_match):
        again = match_polygons(l_shape(), l_shape(), 0.25)
        assert again.value == l_match.value
        assert again.translation == l_match.translation
