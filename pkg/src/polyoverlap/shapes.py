"""Named test shapes and random convex polygon generators."""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConvexPolygon, SimplePolygon


def unit_square() -> ConvexPolygon:
    return ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def rectangle(w: float, h: float, x0: float = 0.0, y0: float = 0.0) -> ConvexPolygon:
    return ConvexPolygon([(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)])


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> ConvexPolygon:
    a = phase + 2 * math.pi * np.arange(n) / n
    return ConvexPolygon(np.column_stack([radius * np.cos(a), radius * np.sin(a)]))


def l_shape() -> SimplePolygon:
    """``[0,2]x[0,1] ∪ [0,1]x[1,2]``, area 3."""
    return SimplePolygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


def plus_sign() -> SimplePolygon:
    """Plus made of five unit squares, area 5."""
    return SimplePolygon([(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (2, 2),
                          (2, 3), (1, 3), (1, 2), (0, 2), (0, 1), (1, 1)])


def u_shape() -> SimplePolygon:
    return SimplePolygon([(0, 0), (3, 0), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])


def staircase(steps: int = 4) -> SimplePolygon:
    pts = [(0, 0), (steps, 0)]
    for k in range(steps, 0, -1):
        pts.append((k, steps - k + 1))
        if k > 1:
            pts.append((k - 1, steps - k + 1))
    pts.append((0, steps))
    return SimplePolygon(pts)


FIXTURES = {
    "l-shape": l_shape,
    "plus": plus_sign,
    "u-shape": u_shape,
    "staircase": staircase,
}


def random_convex_polygon(rng: np.random.Generator, n: int, *, radius: float = 1.0,
                          anisotropy: float = 1.0, center=(0.0, 0.0)) -> ConvexPolygon:
    """Random convex polygon with exactly ``n`` vertices (Valtr's method).

    The result is scaled to the given radius, stretched by ``anisotropy``
    along a random direction and translated to ``center``.
    """
    def chains(k):
        v = np.sort(rng.uniform(size=k))
        lo, hi = v[0], v[-1]
        a, b = [lo], [lo]
        for x in v[1:-1]:
            (a if rng.uniform() < 0.5 else b).append(x)
        a.append(hi)
        b.append(hi)
        d1 = np.diff(a)
        d2 = -np.diff(b)
        return np.concatenate([d1, d2])

    while True:
        xs = chains(n)
        ys = chains(n)
        rng.shuffle(ys)
        vec = np.column_stack([xs, ys])
        ang = np.arctan2(vec[:, 1], vec[:, 0])
        vec = vec[np.argsort(ang)]
        pts = np.cumsum(vec, axis=0)
        pts -= pts.mean(axis=0)
        theta = rng.uniform(0, 2 * math.pi)
        R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        pts = pts @ R.T
        pts[:, 0] *= anisotropy
        pts = pts @ R
        pts *= radius / np.abs(pts).max()
        pts += np.asarray(center, dtype=float)
        try:
            P = ConvexPolygon(pts)
        except Exception:
            continue
        if len(P) == n:
            return P
