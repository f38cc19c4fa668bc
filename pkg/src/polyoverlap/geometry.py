"""Planar primitives: points, convex and simple polygons, affine maps.

Every polygon stored by this module is canonical: counter-clockwise, without
repeated vertices and without vertices lying on the segment joining their
neighbours.  Containment and equality predicates take an absolute tolerance,
``TAU`` by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import ValidationError

TAU = 1e-9
# Relative tolerance used when canonicalising vertex lists.  It is tied to the
# polygon extent so that very small polygons (tiny level sets, for instance)
# keep their shape.
_CANON_REL = 1e-12


class Point(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point:
    return Point(float(p[0]), float(p[1]))


def _as_array(points) -> np.ndarray:
    if isinstance(points, (ConvexPolygon,)):
        return points.vertices
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"expected a sequence of 2D points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("polygon coordinates must be finite numbers")
    return arr


def signed_area(points) -> float:
    """Shoelace signed area (positive for counter-clockwise rings)."""
    p = np.asarray(points, dtype=float)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _extent(points: np.ndarray) -> float:
    if len(points) == 0:
        return 0.0
    span = points.max(axis=0) - points.min(axis=0)
    return float(max(span[0], span[1]))


def canonical_tolerance(points) -> float:
    """Tolerance used to merge duplicates and drop collinear vertices."""
    ext = _extent(np.asarray(points, dtype=float))
    return max(_CANON_REL * ext, 1e-300)


def _drop_duplicates(p: np.ndarray, tol: float) -> np.ndarray:
    if len(p) == 0:
        return p
    keep = [0]
    for i in range(1, len(p)):
        if np.max(np.abs(p[i] - p[keep[-1]])) > tol:
            keep.append(i)
    while len(keep) > 1 and np.max(np.abs(p[keep[-1]] - p[keep[0]])) <= tol:
        keep.pop()
    return p[keep]


def _collinear_distances(p: np.ndarray) -> np.ndarray:
    prev = np.roll(p, 1, axis=0)
    nxt = np.roll(p, -1, axis=0)
    chord = nxt - prev
    length = np.hypot(chord[:, 0], chord[:, 1])
    cross = chord[:, 0] * (p[:, 1] - prev[:, 1]) - chord[:, 1] * (p[:, 0] - prev[:, 0])
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.where(length > 0, np.abs(cross) / np.where(length > 0, length, 1.0),
                        np.hypot(*(p - prev).T))
    return dist


def _drop_collinear(p: np.ndarray, tol: float) -> np.ndarray:
    while len(p) >= 3:
        dist = _collinear_distances(p)
        drop = dist <= tol
        if not drop.any():
            break
        # never drop two neighbours in the same pass
        idx = np.flatnonzero(drop)
        chosen = np.zeros(len(p), dtype=bool)
        for i in idx:
            if not chosen[i - 1] and not chosen[(i + 1) % len(p)]:
                chosen[i] = True
        p = p[~chosen]
    return p


def canonicalize_ring(points, tol: Optional[float] = None) -> np.ndarray:
    """Return the canonical counter-clockwise form of a polygon ring.

    Repeated vertices and vertices lying (within ``tol``) on the segment
    joining their neighbours are removed.  Rings given clockwise are reversed.
    """
    p = _as_array(points).copy()
    if tol is None:
        tol = canonical_tolerance(p)
    p = _drop_duplicates(p, tol)
    p = _drop_collinear(p, tol)
    if len(p) >= 3 and signed_area(p) < 0:
        p = p[::-1].copy()
    return p


def convex_hull(points) -> np.ndarray:
    """Counter-clockwise strictly convex hull (Andrew's monotone chain)."""
    p = _as_array(points)
    p = np.unique(p, axis=0)
    if len(p) < 3:
        return p
    tol = canonical_tolerance(p) * _extent(p)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for q in p:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= tol:
            lower.pop()
        lower.append(q)
    upper: list = []
    for q in p[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= tol:
            upper.pop()
        upper.append(q)
    hull = np.array(lower[:-1] + upper[:-1])
    return hull


class ConvexPolygon:
    """Immutable convex polygon with counter-clockwise, strictly convex vertices.

    Args:
        vertices: ``(n, 2)`` array-like.  Duplicates and collinear vertices
            are removed and clockwise input is reversed.
        tol: tolerance for canonicalisation; defaults to a small multiple of
            the polygon extent.

    Raises:
        ValidationError: fewer than three distinct non-collinear vertices, or
            the ring is not convex.
    """

    __slots__ = ("vertices", "_area")

    def __init__(self, vertices, tol: Optional[float] = None):
        p = canonicalize_ring(vertices, tol)
        if len(p) < 3:
            raise ValidationError("convex polygon needs at least 3 non-collinear vertices")
        e = np.roll(p, -1, axis=0) - p
        turn = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(turn <= 0):
            bad = int(np.flatnonzero(turn <= 0)[0])
            raise ValidationError(f"polygon is not convex at vertex {(bad + 1) % len(p)}")
        self._set(p)

    def _set(self, p: np.ndarray) -> None:
        p = np.ascontiguousarray(p, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "vertices", p)
        object.__setattr__(self, "_area", None)

    @classmethod
    def trusted(cls, vertices: np.ndarray) -> "ConvexPolygon":
        """Wrap an array already known to be canonical (no checks)."""
        obj = cls.__new__(cls)
        obj._set(np.asarray(vertices, dtype=np.float64))
        return obj

    @classmethod
    def hull_of(cls, points) -> "ConvexPolygon":
        return cls(convex_hull(points))

    def __setattr__(self, name, value):
        raise AttributeError("ConvexPolygon is immutable")

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexPolygon({self.vertices.tolist()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvexPolygon) or len(other) != len(self):
            return False
        return bool(np.array_equal(self.vertices, other.vertices))

    def __hash__(self) -> int:
        return hash(self.vertices.tobytes())

    @property
    def area(self) -> float:
        if self._area is None:
            object.__setattr__(self, "_area", float(_kernels.polygon_area(self.vertices)))
        return self._area

    @property
    def perimeter(self) -> float:
        e = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.hypot(e[:, 0], e[:, 1]).sum())

    @property
    def centroid(self) -> Point:
        p = self.vertices
        q = np.roll(p, -1, axis=0)
        cr = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
        a = cr.sum() * 0.5
        cx = ((p[:, 0] + q[:, 0]) * cr).sum() / (6 * a)
        cy = ((p[:, 1] + q[:, 1]) * cr).sum() / (6 * a)
        return Point(float(cx), float(cy))

    @property
    def bbox(self) -> tuple:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def edges(self) -> np.ndarray:
        """``(n, 2, 2)`` array; edge ``i`` runs from vertex ``i`` to ``i + 1``."""
        p = self.vertices
        return np.stack([p, np.roll(p, -1, axis=0)], axis=1)

    def halfplanes(self) -> tuple:
        """Outward unit normals ``N`` and offsets ``b`` with ``P = {x : N x <= b}``."""
        p = self.vertices
        e = np.roll(p, -1, axis=0) - p
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)
        n /= np.hypot(n[:, 0], n[:, 1])[:, None]
        return n, np.einsum("ij,ij->i", n, p)

    def translated(self, t) -> "ConvexPolygon":
        return ConvexPolygon.trusted(self.vertices + np.asarray(t, dtype=float))

    def scaled(self, s: float) -> "ConvexPolygon":
        """Scaling about the origin by a positive factor."""
        if not s > 0:
            raise ValidationError("scale factor must be positive")
        return ConvexPolygon.trusted(self.vertices * float(s))

    def reflected(self) -> "ConvexPolygon":
        """Point reflection through the origin, ``-P``."""
        return ConvexPolygon.trusted(-self.vertices)

    def contains_points(self, pts, tol: float = TAU) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n, b = self.halfplanes()
        return np.all(pts @ n.T <= b + tol, axis=1)

    def contains(self, p, tol: float = TAU) -> bool:
        return bool(self.contains_points([p], tol)[0])

    def signed_distances(self, pts) -> np.ndarray:
        """Max over edges of the signed distance (negative inside)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n, b = self.halfplanes()
        return np.max(pts @ n.T - b, axis=1)


def contains_polygon(outer: ConvexPolygon, inner, tol: float = TAU) -> bool:
    """True when every vertex of ``inner`` lies in ``outer`` within ``tol``."""
    pts = inner.vertices if isinstance(inner, ConvexPolygon) else np.asarray(inner, float)
    return bool(np.all(outer.contains_points(pts, tol)))


def polygon_from_box(x0: float, y0: float, x1: float, y1: float) -> ConvexPolygon:
    return ConvexPolygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])


# ---------------------------------------------------------------------------
# Simple polygons


def _segments_cross(a, b, c, d) -> np.ndarray:
    """Vectorised closed-segment intersection test (touching counts)."""
    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    proper = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) & (((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0)))

    def on_seg(p, q, r, o):
        return (o == 0) & (np.minimum(p[..., 0], q[..., 0]) <= r[..., 0]) & (r[..., 0] <= np.maximum(p[..., 0], q[..., 0])) \
            & (np.minimum(p[..., 1], q[..., 1]) <= r[..., 1]) & (r[..., 1] <= np.maximum(p[..., 1], q[..., 1]))

    touch = on_seg(c, d, a, d1) | on_seg(c, d, b, d2) | on_seg(a, b, c, d3) | on_seg(a, b, d, d4)
    return proper | touch


def _crosses_clear_of(a, b, c, d, tol: float) -> np.ndarray:
    """``(len(a),)`` mask: segment ``ab`` crosses some ``cd`` with every endpoint
    farther than ``tol`` from the other segment's line."""
    a, b = a[:, None, :], b[:, None, :]
    c, d = c[None, :, :], d[None, :, :]

    def side(p, q, r):
        e = q - p
        length = np.maximum(np.hypot(e[..., 0], e[..., 1]), 1e-300)
        return (e[..., 0] * (r[..., 1] - p[..., 1]) - e[..., 1] * (r[..., 0] - p[..., 0])) / length

    d1, d2 = side(c, d, a), side(c, d, b)
    d3, d4 = side(a, b, c), side(a, b, d)
    apart = ((d1 > tol) & (d2 < -tol)) | ((d1 < -tol) & (d2 > tol))
    return np.any(apart & (((d3 > tol) & (d4 < -tol)) | ((d3 < -tol) & (d4 > tol))), axis=1)


def is_simple_ring(p: np.ndarray) -> bool:
    n = len(p)
    if n < 3:
        return False
    a = p
    b = np.roll(p, -1, axis=0)
    for i in range(n - 2):
        js = np.arange(i + 2, n if i > 0 else n - 1)
        if len(js) == 0:
            continue
        hit = _segments_cross(a[i][None, :], b[i][None, :], a[js], b[js])
        if hit.any():
            return False
    return True


def points_in_ring(ring: np.ndarray, pts, tol: float = TAU) -> np.ndarray:
    """Closed point-in-polygon test (points within ``tol`` of the boundary count)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    a = ring
    b = np.roll(ring, -1, axis=0)
    px = pts[:, 0][:, None]
    py = pts[:, 1][:, None]
    ay, by = a[:, 1][None, :], b[:, 1][None, :]
    ax, bx = a[:, 0][None, :], b[:, 0][None, :]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = ax + (py - ay) * (bx - ax) / (by - ay)
    crossings = np.sum(straddle & (px < xint), axis=1)
    inside = (crossings % 2) == 1
    # boundary proximity
    e = b - a
    L2 = np.maximum((e[:, 0] ** 2 + e[:, 1] ** 2)[None, :], 1e-300)
    s = np.clip(((px - ax) * e[:, 0][None, :] + (py - ay) * e[:, 1][None, :]) / L2, 0.0, 1.0)
    dx = px - (ax + s * e[:, 0][None, :])
    dy = py - (ay + s * e[:, 1][None, :])
    near = np.min(dx * dx + dy * dy, axis=1) <= tol * tol
    return inside | near


def validate_parts(ring: np.ndarray, parts: Sequence["ConvexPolygon"], rel_tol: float = 1e-9) -> None:
    """Check that ``parts`` tile ``ring``: interior-disjoint, union equal to it.

    Raises:
        ValidationError: naming the overlapping pair or reporting missing area.
    """
    total = abs(signed_area(ring))
    tol = max(TAU, rel_tol * _extent(ring))
    ring_next = np.roll(ring, -1, axis=0)
    for idx, part in enumerate(parts):
        inside = points_in_ring(ring, part.vertices, tol=tol)
        # a convex part of a non-convex ring can have all vertices inside
        # while one of its edges passes outside through a notch
        v = part.vertices
        if not inside.all() or _crosses_clear_of(v, np.roll(v, -1, axis=0), ring, ring_next, tol).any():
            raise ValidationError(f"part {idx} is not contained in the polygon")
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            a = _kernels.clip_area(parts[i].vertices, parts[j].vertices, 0.0, 0.0)
            if a > rel_tol * max(total, 1e-300):
                raise ValidationError(f"parts {i} and {j} overlap (shared area {a:.3g})")
    covered = sum(p.area for p in parts)
    if abs(covered - total) > rel_tol * total:
        raise ValidationError(f"parts cover area {covered!r} but the polygon has area {total!r}")


class SimplePolygon:
    """Simple polygon given by its boundary ring, with an optional convex partition.

    The ring is stored counter-clockwise without duplicate or collinear
    vertices.  When ``parts`` are supplied they must be interior-disjoint and
    their union must equal the region bounded by the ring.
    """

    __slots__ = ("ring", "parts")

    def __init__(self, ring, parts: Optional[Iterable] = None, validate: bool = True):
        p = canonicalize_ring(ring)
        if len(p) < 3 or abs(signed_area(p)) == 0.0:
            raise ValidationError("polygon ring needs at least 3 non-collinear vertices")
        if validate and not is_simple_ring(p):
            raise ValidationError("polygon ring is self-intersecting")
        p = np.ascontiguousarray(p)
        p.setflags(write=False)
        object.__setattr__(self, "ring", p)
        if parts is not None:
            parts = tuple(q if isinstance(q, ConvexPolygon) else ConvexPolygon(q) for q in parts)
            if validate:
                validate_parts(p, parts)
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("SimplePolygon is immutable")

    def __repr__(self) -> str:
        k = "none" if self.parts is None else len(self.parts)
        return f"SimplePolygon(n={len(self.ring)}, parts={k})"

    def __len__(self) -> int:
        return len(self.ring)

    @property
    def area(self) -> float:
        return signed_area(self.ring)

    @property
    def perimeter(self) -> float:
        e = np.roll(self.ring, -1, axis=0) - self.ring
        return float(np.hypot(e[:, 0], e[:, 1]).sum())

    def with_parts(self, parts) -> "SimplePolygon":
        return SimplePolygon(self.ring, parts)

    def reflected(self) -> "SimplePolygon":
        parts = None if self.parts is None else [p.reflected() for p in self.parts]
        obj = SimplePolygon.__new__(SimplePolygon)
        ring = np.ascontiguousarray(-self.ring)
        ring.setflags(write=False)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "parts", None if parts is None else tuple(parts))
        return obj

    def contains_points(self, pts, tol: float = TAU) -> np.ndarray:
        return points_in_ring(self.ring, pts, tol)


def area(poly) -> float:
    """Area of a ConvexPolygon, SimplePolygon or raw vertex ring."""
    if isinstance(poly, (ConvexPolygon, SimplePolygon)):
        return float(poly.area)
    return abs(signed_area(_as_array(poly)))


def perimeter(poly) -> float:
    if isinstance(poly, (ConvexPolygon, SimplePolygon)):
        return poly.perimeter
    p = _as_array(poly)
    e = np.roll(p, -1, axis=0) - p
    return float(np.hypot(e[:, 0], e[:, 1]).sum())


# ---------------------------------------------------------------------------
# Affine maps


@dataclass(frozen=True, eq=False)
class AffineMap:
    """Invertible map ``x -> linear @ x + offset``."""

    linear: np.ndarray
    offset: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        lin = np.array(self.linear, dtype=float).reshape(2, 2)
        off = np.array(self.offset, dtype=float).reshape(2)
        scale = float(np.abs(lin).max())
        det = float(np.linalg.det(lin))
        if not np.all(np.isfinite(lin)) or scale == 0.0 or abs(det) <= 1e-14 * scale * scale:
            raise ValidationError("affine map is singular")
        lin.setflags(write=False)
        off.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    def apply_points(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ self.linear.T + self.offset

    def __call__(self, obj):
        if isinstance(obj, ConvexPolygon):
            v = self.apply_points(obj.vertices)
            return ConvexPolygon(v if self.det > 0 else v[::-1])
        if isinstance(obj, SimplePolygon):
            v = self.apply_points(obj.ring)
            parts = None if obj.parts is None else [self(p) for p in obj.parts]
            return SimplePolygon(v if self.det > 0 else v[::-1], parts, validate=False)
        arr = np.asarray(obj, dtype=float)
        if arr.shape == (2,):
            return Point(*map(float, self.apply_points(arr)))
        return self.apply_points(arr)

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.offset)

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """The map ``x -> self(inner(x))``."""
        return AffineMap(self.linear @ inner.linear, self.linear @ inner.offset + self.offset)


def apply_affine(m: AffineMap, poly):
    return m(poly)


def invert_affine(m: AffineMap) -> AffineMap:
    return m.inverse()


# ---------------------------------------------------------------------------
# Width and diameter


class WidthDiameter(NamedTuple):
    width: float
    width_direction: Point
    diameter: float
    diameter_pair: tuple
    width_edge: int
    width_vertex: int


def width_and_diameter(poly: ConvexPolygon) -> WidthDiameter:
    """Minimum width and diameter by rotating calipers.

    The width direction is the unit inward normal of the edge realising the
    width; ``width_edge`` and ``width_vertex`` index that edge and the
    antipodal vertex.  The diameter pair is a pair of vertices at maximum
    distance.
    """
    v = poly.vertices
    n = len(v)
    e = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(e[:, 0], e[:, 1])

    def height(i, j):
        return e[i, 0] * (v[j, 1] - v[i, 1]) - e[i, 1] * (v[j, 0] - v[i, 0])

    best_w = math.inf
    bi = bj = 0
    best_d2 = -1.0
    pair = (0, 0)

    def consider(a, b):
        nonlocal best_d2, pair
        d = v[a] - v[b]
        d2 = d[0] * d[0] + d[1] * d[1]
        if d2 > best_d2:
            best_d2 = d2
            pair = (a, b)

    j = 1 % n
    for i in range(n):
        while height(i, (j + 1) % n) > height(i, j):
            j = (j + 1) % n
        h = height(i, j) / lengths[i]
        if h < best_w:
            best_w, bi, bj = h, i, j
        consider(i, j)
        consider((i + 1) % n, j)
        # parallel opposite edge: the next vertex is antipodal too
        if height(i, (j + 1) % n) >= height(i, j) * (1 - 1e-15):
            consider(i, (j + 1) % n)
            consider((i + 1) % n, (j + 1) % n)
    normal = np.array([-e[bi, 1], e[bi, 0]]) / lengths[bi]
    a, b = pair
    return WidthDiameter(
        width=float(best_w),
        width_direction=Point(float(normal[0]), float(normal[1])),
        diameter=float(math.sqrt(best_d2)),
        diameter_pair=(as_point(v[a]), as_point(v[b])),
        width_edge=int(bi),
        width_vertex=int(bj),
    )


# ---------------------------------------------------------------------------
# Convex intersection with provenance

# A supporting line of a clipped polygon: (0, i) is edge i of X, (1, j) edge j of Y.
Line = tuple


class VertexSource(NamedTuple):
    """Where a vertex of ``X ∩ (t + Y)`` comes from.

    ``kind`` is ``"x"`` (vertex ``x_index`` of X), ``"y"`` (vertex ``y_index``
    of Y) or ``"cross"`` (edge ``x_index`` of X meets edge ``y_index`` of Y).
    Degenerate clips may produce ``"xx"`` or ``"yy"`` (two non-adjacent edges
    of the same polygon).  ``lines`` holds the two supporting lines.
    """

    kind: str
    x_index: int
    y_index: int
    lines: tuple


def _classify(l1: Line, l2: Line, nx: int, ny: int) -> VertexSource:
    if l1[0] == 0 and l2[0] == 0:
        a, b = l1[1], l2[1]
        if (a + 1) % nx == b:
            return VertexSource("x", b, -1, (l1, l2))
        if (b + 1) % nx == a:
            return VertexSource("x", a, -1, (l1, l2))
        return VertexSource("xx", a, b, (l1, l2))
    if l1[0] == 1 and l2[0] == 1:
        a, b = l1[1], l2[1]
        if (a + 1) % ny == b:
            return VertexSource("y", -1, b, (l1, l2))
        if (b + 1) % ny == a:
            return VertexSource("y", -1, a, (l1, l2))
        return VertexSource("yy", a, b, (l1, l2))
    xl = l1 if l1[0] == 0 else l2
    yl = l2 if l1[0] == 0 else l1
    return VertexSource("cross", xl[1], yl[1], (l1, l2))


@dataclass(frozen=True, eq=False)
class Intersection:
    """Result of :func:`convex_intersection`: the region plus vertex provenance."""

    vertices: np.ndarray
    sources: tuple
    translation: Point

    @property
    def area(self) -> float:
        return abs(signed_area(self.vertices))

    @property
    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon(self.vertices)


def convex_intersection(X: ConvexPolygon, Y: ConvexPolygon, t=(0.0, 0.0)) -> Optional[Intersection]:
    """Intersection of ``X`` and ``t + Y`` with every vertex tagged by origin.

    Returns ``None`` when the intersection has no interior.
    """
    tx, ty = float(t[0]), float(t[1])
    xv = X.vertices
    ny = len(Y)
    nx = len(X)
    # current polygon: list of (point, line_in, line_out)
    cur = [((float(p[0]) + tx, float(p[1]) + ty), (1, (k - 1) % ny), (1, k)) for k, p in enumerate(Y.vertices)]
    for i in range(nx):
        if not cur:
            break
        ax, ay = xv[i]
        bx, by = xv[(i + 1) % nx]
        ex, ey = bx - ax, by - ay
        clip = (0, i)
        out = []
        prev = cur[-1]
        pd = ex * (prev[0][1] - ay) - ey * (prev[0][0] - ax)
        for q in cur:
            qd = ex * (q[0][1] - ay) - ey * (q[0][0] - ax)
            edge_line = q[1]  # line of the edge prev -> q
            if qd >= 0.0:
                if pd < 0.0:
                    s = pd / (pd - qd)
                    pt = (prev[0][0] + s * (q[0][0] - prev[0][0]), prev[0][1] + s * (q[0][1] - prev[0][1]))
                    out.append((pt, clip, edge_line))
                out.append(q)
            elif pd >= 0.0:
                s = pd / (pd - qd)
                pt = (prev[0][0] + s * (q[0][0] - prev[0][0]), prev[0][1] + s * (q[0][1] - prev[0][1]))
                out.append((pt, edge_line, clip))
            prev, pd = q, qd
        cur = out
    if len(cur) < 3:
        return None
    pts = np.array([c[0] for c in cur], dtype=float)
    # merge coincident vertices produced by degenerate clips
    tol = canonical_tolerance(pts)
    keep = []
    for k in range(len(cur)):
        if keep and np.max(np.abs(pts[k] - pts[keep[-1]])) <= tol:
            continue
        keep.append(k)
    while len(keep) > 1 and np.max(np.abs(pts[keep[-1]] - pts[keep[0]])) <= tol:
        keep.pop()
    if len(keep) < 3:
        return None
    pts = pts[keep]
    if signed_area(pts) <= tol * _extent(pts):
        return None
    sources = tuple(_classify(cur[k][1], cur[k][2], nx, ny) for k in keep)
    return Intersection(pts, sources, Point(tx, ty))


def overlap_area(X: ConvexPolygon, Y: ConvexPolygon, t=(0.0, 0.0)) -> float:
    """``area(X ∩ (t + Y))``."""
    return float(_kernels.clip_area(X.vertices, Y.vertices, float(t[0]), float(t[1])))


def overlap_area_many(X: ConvexPolygon, Y: ConvexPolygon, ts) -> np.ndarray:
    ts = np.ascontiguousarray(np.atleast_2d(np.asarray(ts, dtype=float)))
    return _kernels.clip_area_many(X.vertices, Y.vertices, ts)


def minkowski_sum(A: ConvexPolygon, B: ConvexPolygon) -> ConvexPolygon:
    """Minkowski sum of two convex polygons (hull of pairwise vertex sums)."""
    pts = (A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, 2)
    return ConvexPolygon(convex_hull(pts))


def inscribed_disk_radius(poly: ConvexPolygon, seed: int = 0) -> float:
    """Radius of the largest disk inside a convex polygon (linear program)."""
    from .lp import solve_lp

    c0 = np.asarray(poly.centroid)
    s = max(_extent(poly.vertices), 1e-300)
    v = (poly.vertices - c0) / s
    n, b = ConvexPolygon.trusted(v).halfplanes()
    A = np.column_stack([n, np.ones(len(n))])
    A = np.vstack([A, [0.0, 0.0, -1.0]])
    bb = np.concatenate([b, [0.0]])
    sol = solve_lp(np.array([0.0, 0.0, -1.0]), A, bb, bound=10.0, seed=seed)
    return float(sol.x[2] * s)


def convex_minkowski_sum(A: ConvexPolygon, B: ConvexPolygon) -> ConvexPolygon:
    """Minkowski sum by merging the edge sequences of two convex polygons."""
    def edges_from_bottom(P):
        v = P.vertices
        k = int(np.lexsort((v[:, 0], v[:, 1]))[0])
        v = np.roll(v, -k, axis=0)
        e = np.roll(v, -1, axis=0) - v
        ang = np.mod(np.arctan2(e[:, 1], e[:, 0]), 2 * np.pi)
        return v[0], e, ang

    a0, ea, anga = edges_from_bottom(A)
    b0, eb, angb = edges_from_bottom(B)
    e = np.vstack([ea, eb])
    ang = np.concatenate([anga, angb])
    order = np.argsort(ang, kind="stable")
    pts = (a0 + b0) + np.vstack([[0.0, 0.0], np.cumsum(e[order], axis=0)[:-1]])
    return ConvexPolygon(pts)


def box_polygon(box) -> ConvexPolygon:
    x0, y0, x1, y1 = box
    return ConvexPolygon.trusted(np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float))


def segments_meeting_box(seg: np.ndarray, box) -> np.ndarray:
    """Mask of segments (``(S, 2, 2)``) that meet the closed axis-parallel box."""
    x0, y0, x1, y1 = box
    p = seg[:, 0, :]
    d = seg[:, 1, :] - p
    lo = np.zeros(len(seg))
    hi = np.ones(len(seg))
    ok = np.ones(len(seg), dtype=bool)
    for axis, (bmin, bmax) in enumerate(((x0, x1), (y0, y1))):
        dv = d[:, axis]
        pv = p[:, axis]
        zero = dv == 0.0
        ok &= ~zero | ((pv >= bmin) & (pv <= bmax))
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = (bmin - pv) / dv
            t2 = (bmax - pv) / dv
        tmin = np.where(zero, -np.inf, np.minimum(t1, t2))
        tmax = np.where(zero, np.inf, np.maximum(t1, t2))
        lo = np.maximum(lo, tmin)
        hi = np.minimum(hi, tmax)
    return ok & (lo <= hi)
