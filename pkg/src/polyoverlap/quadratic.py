"""Bivariate quadratics and their maximisation over polygonal regions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import ConvexPolygon, Point, points_in_ring


@dataclass(frozen=True)
class Quadratic2:
    """``q(t) = a tx^2 + b tx ty + c ty^2 + d tx + e ty + g``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: float = 0.0
    g: float = 0.0

    def __call__(self, t) -> float:
        x, y = float(t[0]), float(t[1])
        return self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.g

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.atleast_2d(np.asarray(ts, dtype=float))
        x, y = ts[:, 0], ts[:, 1]
        return self.a * x * x + self.b * x * y + self.c * y * y + self.d * x + self.e * y + self.g

    def __add__(self, other: "Quadratic2") -> "Quadratic2":
        return Quadratic2(self.a + other.a, self.b + other.b, self.c + other.c,
                          self.d + other.d, self.e + other.e, self.g + other.g)

    def coefficients(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e, self.g)

    def reflected(self) -> "Quadratic2":
        """The quadratic ``t -> q(-t)``."""
        return Quadratic2(self.a, self.b, self.c, -self.d, -self.e, self.g)

    def gradient(self, t) -> np.ndarray:
        x, y = float(t[0]), float(t[1])
        return np.array([2 * self.a * x + self.b * y + self.d, self.b * x + 2 * self.c * y + self.e])

    def hessian(self) -> np.ndarray:
        return np.array([[2 * self.a, self.b], [self.b, 2 * self.c]])

    def stationary_point(self):
        """Critical point, or ``None`` if the Hessian is (numerically) singular."""
        H = self.hessian()
        scale = float(np.abs(H).max())
        det = float(np.linalg.det(H))
        if scale == 0.0 or abs(det) <= 1e-12 * scale * scale:
            return None
        return np.linalg.solve(H, [-self.d, -self.e])

    def along(self, p0, direction) -> tuple:
        """Coefficients ``(A, B, C)`` of ``s -> q(p0 + s * direction)``."""
        px, py = float(p0[0]), float(p0[1])
        ux, uy = float(direction[0]), float(direction[1])
        A = self.a * ux * ux + self.b * ux * uy + self.c * uy * uy
        B = 2 * self.a * px * ux + self.b * (px * uy + py * ux) + 2 * self.c * py * uy + self.d * ux + self.e * uy
        C = self(p0)
        return A, B, C


class QuadraticMax(NamedTuple):
    point: Point
    value: float


def _max_on_segment(q: Quadratic2, p0: np.ndarray, p1: np.ndarray):
    d = p1 - p0
    A, B, C = q.along(p0, d)
    cands = [0.0, 1.0]
    if A < 0:
        s = -B / (2 * A)
        if 0.0 < s < 1.0:
            cands.append(s)
    best_s, best_v = 0.0, -np.inf
    for s in cands:
        v = A * s * s + B * s + C
        if v > best_v:
            best_s, best_v = s, v
    return p0 + best_s * d, best_v


def _max_on_rings(q: Quadratic2, rings, inside) -> QuadraticMax:
    best_p, best_v = None, -np.inf
    sp = q.stationary_point()
    if sp is not None and inside(sp):
        best_p, best_v = sp, q(sp)
    for ring in rings:
        n = len(ring)
        for i in range(n):
            p, v = _max_on_segment(q, ring[i], ring[(i + 1) % n])
            if v > best_v:
                best_p, best_v = p, v
    return QuadraticMax(Point(float(best_p[0]), float(best_p[1])), float(best_v))


def maximize_quadratic_over_convex(q: Quadratic2, face: ConvexPolygon) -> QuadraticMax:
    """Maximum of ``q`` over a convex polygon.

    Candidates are the interior critical point (when it lies in the face),
    the maxima of ``q`` restricted to each edge, and the vertices.
    """
    return _max_on_rings(q, [face.vertices], lambda p: bool(face.contains(p, tol=0.0)))


def maximize_quadratic_over_region(q: Quadratic2, outer: np.ndarray, holes=()) -> QuadraticMax:
    """Maximum of ``q`` over a polygon with holes (outer ring ccw, holes any)."""

    def inside(p):
        if not points_in_ring(outer, p, tol=0.0)[0]:
            return False
        return not any(points_in_ring(h, p, tol=0.0)[0] for h in holes)

    return _max_on_rings(q, [outer, *holes], inside)
