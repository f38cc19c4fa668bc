from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from polyoverlap.predicates import lex_less, orient, orient_exact, orient_many


def rational_sign(a, b, c):
    ax, ay, bx, by, cx, cy = (Fraction(float(v)) for v in (*a, *b, *c))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def test_basic_turns():
    assert orient((0, 0), (1, 0), (0, 1)) == 1
    assert orient((0, 0), (0, 1), (1, 0)) == -1
    assert orient((0, 0), (1, 1), (2, 2)) == 0


def test_near_collinear_grid():
    # classic failure of the naive determinant: points near the diagonal through (12, 12), (24, 24)
    b, c = (12.0, 12.0), (24.0, 24.0)
    ulp = np.spacing(0.5)
    for i in range(64):
        for j in range(64):
            a = (0.5 + i * ulp, 0.5 + j * ulp)
            assert orient(a, b, c) == rational_sign(a, b, c)


def test_points_on_a_line(rng):
    for _ in range(500):
        p = rng.normal(size=2)
        q = p + rng.normal(size=2)
        s = rng.uniform(-3, 3)
        r = p + s * (q - p)
        assert orient(p, q, r) == rational_sign(p, q, r)


def test_vectorised_matches_scalar(rng):
    a = rng.normal(size=(2000, 2))
    b = rng.normal(size=(2000, 2))
    s = rng.uniform(-2, 2, size=(2000, 1))
    c = a + s * (b - a) + rng.choice([0.0, 1e-17, -1e-17, 1e-3], size=(2000, 2))
    many = orient_many(a, b, c)
    assert all(many[k] == orient(a[k], b[k], c[k]) == rational_sign(a[k], b[k], c[k]) for k in range(2000))


def test_exact_is_antisymmetric():
    assert orient_exact(0, 0, 1, 0, 0.5, 1e-300) == 1
    assert orient_exact(0, 0, 0.5, 1e-300, 1, 0) == -1


def test_lex_order():
    assert lex_less((0, 5), (1, 0))
    assert lex_less((1, 0), (1, 1))
    assert not lex_less((1, 1), (1, 1))


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(st.tuples(finite, finite), st.tuples(finite, finite), st.tuples(finite, finite))
def test_matches_rational_arithmetic(a, b, c):
    s = orient(a, b, c)
    assert s == rational_sign(a, b, c)
    assert orient(b, c, a) == s
    assert orient(b, a, c) == -s
