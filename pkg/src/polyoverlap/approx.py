"""Coarse convex approximations used to normalise a pair of convex polygons.

* :func:`scaling_similarity` - smallest factor ``alpha`` such that a translate
  of ``X`` fits inside ``alpha * Y``.
* :func:`bounding_rectangle` - rectangle sandwich ``z + r ⊆ C ⊆ z + 5r``.
* :func:`approx_polygon` - inner approximation by slicing along the width.
* :func:`const_approx_by_rect` and :func:`preprocess` - the normalising map
  that sends a scaled copy of a common rectangle to the unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .geometry import (AffineMap, ConvexPolygon, Point, as_point, convex_hull,
                       convex_intersection, width_and_diameter)
from .lp import solve_lp


@dataclass(frozen=True)
class ApproxConfig:
    """Constants of the normalisation step and the LP seed.

    ``c3`` shrinks the rectangle that approximates the optimal overlap,
    ``c_r`` is the scale-up factor defining the normalising window, ``c4``
    sets the approximation resolution ``ceil(c4 / eps)``.
    """

    c3: float = 20.0
    c_r: float = 100.0
    c4: float = 32.0
    lp_seed: int = 0

    def __post_init__(self):
        for name in ("c3", "c_r", "c4"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be a positive number, got {v!r}")

    def resolution(self, eps: float) -> int:
        return int(math.ceil(self.c4 / eps))


class ScalingSimilarity(NamedTuple):
    alpha: float
    witness: Point


def scaling_similarity(X: ConvexPolygon, Y: ConvexPolygon, seed: int = 0) -> ScalingSimilarity:
    """Smallest ``alpha >= 0`` with ``t + X ⊆ alpha * Y`` for some ``t``.

    Solved as a three-variable linear program in ``(alpha, tx, ty)``: every
    vertex of ``t + X`` must satisfy every half-plane of ``alpha * Y``.
    ``alpha * Y`` scales about the origin; the witness ``t`` refers to that.
    """
    center = np.asarray(Y.centroid)
    scale = max(np.ptp(np.vstack([X.vertices, Y.vertices]), axis=0).max(), 1e-300)
    xs = (X.vertices - center) / scale
    ys = ConvexPolygon.trusted((Y.vertices - center) / scale)
    n, b = ys.halfplanes()
    # n_j . (x_i + t) <= alpha * b_j
    rows_alpha = -np.repeat(b[None, :], len(xs), axis=0).reshape(-1)
    rows_t = np.tile(n, (len(xs), 1))
    rhs = -(xs @ n.T).reshape(-1)
    A = np.column_stack([rows_alpha, rows_t])
    A = np.vstack([A, [-1.0, 0.0, 0.0]])
    rhs = np.concatenate([rhs, [0.0]])
    sol = solve_lp(np.array([1.0, 0.0, 0.0]), A, rhs, bound=1e7, seed=seed)
    alpha = max(float(sol.x[0]), 0.0)
    t_norm = sol.x[1:]
    t = scale * t_norm + (alpha - 1.0) * center
    return ScalingSimilarity(alpha, Point(float(t[0]), float(t[1])))


def containment_translation(X: ConvexPolygon, Y: ConvexPolygon, seed: int = 0) -> Point:
    """A translation ``s`` with ``X + s ⊆ Y``, assuming ``X`` fits in ``Y``.

    From a witness ``w`` with ``w + X ⊆ alpha Y`` (``alpha <= 1``), the
    translation ``w + (1 - alpha) c`` works for any ``c`` in ``Y``; the
    centroid is used.
    """
    alpha, w = scaling_similarity(X, Y, seed)
    c = np.asarray(Y.centroid)
    s = np.asarray(w) + (1.0 - alpha) * c
    return Point(float(s[0]), float(s[1]))


@dataclass(frozen=True, eq=False)
class RectSandwich:
    """Rectangle ``rect`` centred at the origin and anchor ``z``.

    ``z + rect ⊆ C ⊆ z + 5 rect`` for the polygon ``C`` it was built from.
    ``axes`` holds the unit directions of the rectangle sides and
    ``half_lengths`` the corresponding half side lengths.
    """

    rect: ConvexPolygon
    anchor: Point
    axes: np.ndarray
    half_lengths: tuple

    def scaled(self, s: float) -> ConvexPolygon:
        return self.rect.scaled(s)


def _rect_polygon(axes: np.ndarray, half: tuple) -> ConvexPolygon:
    u1, u2 = axes
    a, b = half
    corners = [-a * u1 - b * u2, a * u1 - b * u2, a * u1 + b * u2, -a * u1 + b * u2]
    return ConvexPolygon(corners)


def bounding_rectangle(C: ConvexPolygon) -> RectSandwich:
    """Rectangle sandwich of a convex polygon.

    Take a diameter ``uv`` and the vertex ``w`` farthest from the line ``uv``.
    The rectangle with base on ``uv``, height half the distance of ``w`` and
    top side joining the midpoints of ``uw`` and ``vw`` lies in the triangle
    ``uvw ⊆ C``; scaling it by five about its centre covers ``C``.
    """
    wd = width_and_diameter(C)
    u = np.asarray(wd.diameter_pair[0])
    v = np.asarray(wd.diameter_pair[1])
    d = v - u
    D = float(np.hypot(*d))
    u1 = d / D
    normal = np.array([-u1[1], u1[0]])
    rel = C.vertices - u
    heights = rel @ normal
    k = int(np.argmax(np.abs(heights)))
    h = float(heights[k])
    if h < 0:
        normal = -normal
        h = -h
    w = C.vertices[k]
    s_w = float((w - u) @ u1)
    s_lo = 0.5 * s_w
    s_hi = 0.5 * (D + s_w)
    center_s = 0.5 * (s_lo + s_hi)
    z = u + center_s * u1 + 0.25 * h * normal
    half = (0.5 * (s_hi - s_lo), 0.25 * h)
    axes = np.array([u1, normal])
    rect = _rect_polygon(axes, half)
    return RectSandwich(rect, as_point(z), axes, half)


def _line_hits(P: np.ndarray, origin: np.ndarray, normal: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Intersections of lines ``normal . (x - origin) = offset`` with ``∂P``."""
    h = (P - origin) @ normal
    a, b = h, np.roll(h, -1)
    pa, pb = P, np.roll(P, -1, axis=0)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    off = offsets[:, None]
    hit = (lo[None, :] <= off) & (off <= hi[None, :]) & (hi - lo > 0)[None, :]
    rows, cols = np.nonzero(hit)
    s = (offsets[rows] - a[cols]) / (b - a)[cols]
    return pa[cols] + s[:, None] * (pb - pa)[cols]


def approx_polygon(P: ConvexPolygon, m: int) -> ConvexPolygon:
    """Inner approximation ``P' ⊆ P`` with at most ``2m + 8`` vertices.

    Let ``w`` be the width of ``P``.  Two parallel supporting lines at
    distance ``w`` and the two supporting lines orthogonal to them touch
    ``P``; the vertices on these lines are kept.  Then ``m`` equally spaced
    lines between the first pair cut ``∂P`` twice each; the hull of all kept
    points is ``P'``.  Every point of ``P`` is within ``w / m`` of ``P'``.
    """
    if int(m) != m or m < 1:
        raise ValidationError(f"slice count must be a positive integer, got {m!r}")
    m = int(m)
    wd = width_and_diameter(P)
    V = P.vertices
    n = len(V)
    i = wd.width_edge
    origin = V[i]
    direction = V[(i + 1) % n] - origin
    direction = direction / np.hypot(*direction)
    normal = np.array([-direction[1], direction[0]])
    width = wd.width
    h = (V - origin) @ normal
    s = (V - origin) @ direction
    tol = 1e-12 * max(width, np.ptp(s))
    marked = [V[(np.abs(h) <= tol) | (np.abs(h - width) <= tol)
               | (np.abs(s - s.min()) <= tol) | (np.abs(s - s.max()) <= tol)]]
    offsets = width * np.arange(1, m + 1) / (m + 1)
    marked.append(_line_hits(V, origin, normal, offsets))
    pts = np.vstack(marked)
    return ConvexPolygon(convex_hull(pts))


def const_approx_by_rect(X: ConvexPolygon, Y: ConvexPolygon, config: ApproxConfig = ApproxConfig()):
    """Rectangle approximating the optimal overlap region up to constants.

    The centred sandwich rectangles of ``X`` and ``Y`` intersect in a
    centrally symmetric convex set ``K``; with ``r`` its sandwich rectangle,
    ``K ⊆ 5r`` and the returned rectangle is ``5r / c3`` (centred at the
    origin).  Returns ``(rect, c_r)``.
    """
    rx = bounding_rectangle(X).rect
    ry = bounding_rectangle(Y).rect
    inter = convex_intersection(rx, ry)
    if inter is None:
        raise ValidationError("degenerate rectangles")
    K = ConvexPolygon(inter.vertices)
    rk = bounding_rectangle(K)
    # K is centrally symmetric, so the sandwich anchor is (up to rounding) the origin
    rect = _rect_polygon(rk.axes, (rk.half_lengths[0] * 5 / config.c3, rk.half_lengths[1] * 5 / config.c3))
    return rect, config.c_r


@dataclass(frozen=True, eq=False)
class Preprocessed:
    """Normalising map and the inner approximations of both polygons.

    ``map`` sends ``2 c_r rect`` onto the unit square.  ``x_approx`` and
    ``y_approx`` approximate the mapped polygons; ``x_back`` and ``y_back``
    are the same approximations in original coordinates.
    """

    map: AffineMap
    rect: ConvexPolygon
    x_mapped: ConvexPolygon
    y_mapped: ConvexPolygon
    x_approx: ConvexPolygon
    y_approx: ConvexPolygon
    x_back: ConvexPolygon
    y_back: ConvexPolygon
    resolution: int


def rect_frame(rect: ConvexPolygon):
    """Unit side directions and half lengths of a centred rectangle."""
    v = rect.vertices
    e1 = v[1] - v[0]
    e2 = v[2] - v[1]
    l1 = float(np.hypot(*e1))
    l2 = float(np.hypot(*e2))
    return np.array([e1 / l1, e2 / l2]), (0.5 * l1, 0.5 * l2)


def normalizing_map(rect: ConvexPolygon, c_r: float) -> AffineMap:
    """Affine map sending ``2 c_r rect`` (centred at the origin) to ``[0, 1]^2``."""
    axes, (a, b) = rect_frame(rect)
    center = np.asarray(rect.centroid)
    lin = np.array([axes[0] / (4 * c_r * a), axes[1] / (4 * c_r * b)])
    off = np.array([0.5, 0.5]) - lin @ center
    return AffineMap(lin, off)


def preprocess(X: ConvexPolygon, Y: ConvexPolygon, eps: float, config: ApproxConfig = ApproxConfig()) -> Preprocessed:
    """Normalise the pair and build inner approximations at resolution ``ceil(c4/eps)``."""
    if not (0 < eps < 1):
        raise ValidationError(f"eps must lie in (0, 1), got {eps!r}")
    rect, c_r = const_approx_by_rect(X, Y, config)
    T = normalizing_map(rect, c_r)
    n = config.resolution(eps)
    xm = T(X)
    ym = T(Y)
    xa = approx_polygon(xm, n)
    ya = approx_polygon(ym, n)
    Ti = T.inverse()
    return Preprocessed(T, rect, xm, ym, xa, ya, Ti(xa), Ti(ya), n)
