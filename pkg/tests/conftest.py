import math

import numpy as np
import pytest
from shapely.geometry import Polygon

from polyoverlap.geometry import ConvexPolygon, SimplePolygon
from polyoverlap.shapes import random_convex_polygon


def to_shapely(poly):
    if isinstance(poly, ConvexPolygon):
        return Polygon(poly.vertices)
    if isinstance(poly, SimplePolygon):
        return Polygon(poly.ring)
    return Polygon(np.asarray(poly, dtype=float))


def shapely_overlap(P, Q, t):
    """Reference overlap ``area(P ∩ (t + Q))`` from shapely."""
    q = to_shapely(Q)
    from shapely import affinity
    return to_shapely(P).intersection(affinity.translate(q, float(t[0]), float(t[1]))).area


def random_pair(rng, n_range=(8, 64)):
    """Two random convex polygons with mixed sizes and elongations."""
    n1, n2 = rng.integers(n_range[0], n_range[1] + 1, size=2)
    X = random_convex_polygon(rng, int(n1), radius=rng.uniform(0.5, 1.5), anisotropy=rng.uniform(1, 4),
                              center=rng.uniform(-1, 1, 2))
    Y = random_convex_polygon(rng, int(n2), radius=rng.uniform(0.2, 1.5), anisotropy=rng.uniform(1, 4),
                              center=rng.uniform(-1, 1, 2))
    return X, Y


def translation_box(X, Y):
    """Box of translations ``t`` with ``X ∩ (t + Y)`` possibly non-empty."""
    xv = X.vertices if isinstance(X, ConvexPolygon) else X.ring
    yv = Y.vertices if isinstance(Y, ConvexPolygon) else Y.ring
    lo = xv.min(axis=0) - yv.max(axis=0)
    hi = xv.max(axis=0) - yv.min(axis=0)
    return lo, hi


def sample_translations(rng, X, Y, count, center=None, spread=0.25):
    """Half uniform over the translation box, half clustered around ``center``."""
    lo, hi = translation_box(X, Y)
    uniform = rng.uniform(lo, hi, size=(count - count // 2, 2))
    if center is None:
        center = 0.5 * (lo + hi)
    near = np.asarray(center) + rng.normal(scale=spread * float((hi - lo).max()), size=(count // 2, 2))
    return np.vstack([uniform, near])


def distance_to_convex(points, poly):
    """Euclidean distance from each point to the convex polygon (0 inside)."""
    v = poly.vertices
    e = np.roll(v, -1, axis=0) - v
    rel = points[:, None, :] - v[None, :, :]
    cross = e[None, :, 0] * rel[..., 1] - e[None, :, 1] * rel[..., 0]
    inside = np.all(cross >= 0, axis=1)
    L2 = np.sum(e * e, axis=1)
    s = np.clip(np.sum(rel * e[None], axis=2) / L2[None], 0, 1)
    closest = v[None] + s[..., None] * e[None]
    d = np.sqrt(np.min(np.sum((points[:, None, :] - closest) ** 2, axis=2), axis=1))
    return np.where(inside, 0.0, d)


def boundary_samples(poly, count):
    """``count`` points spread along the boundary by arc length."""
    v = poly.vertices
    e = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(e[:, 0], e[:, 1])
    cum = np.concatenate([[0], np.cumsum(lengths)])
    s = np.linspace(0, cum[-1], count, endpoint=False)
    k = np.searchsorted(cum, s, side="right") - 1
    frac = (s - cum[k]) / lengths[k]
    return v[k] + frac[:, None] * e[k]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def hexagon():
    a = 2 * math.pi * np.arange(6) / 6
    return ConvexPolygon(np.column_stack([np.cos(a), np.sin(a)]))


ACCEPTANCE = {}


def report(criterion: int, passed: bool, detail: str) -> None:
    """Record the outcome of an acceptance criterion and print it."""
    line = f"criterion {criterion:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE.setdefault(criterion, []).append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        for line in ACCEPTANCE[criterion]:
            terminalreporter.write_line(line)
