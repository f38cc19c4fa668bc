"""Piecewise-quadratic approximations of the overlap of a convex pair.

Three constructions are provided, and :func:`approx_convex_pair` picks one:

* lattice counting when one polygon fits inside the other: points of a
  grid inside the smaller polygon are counted by the translated larger one;
* nested superlevel sets (optional alternative for the same case);
* overlap of inner approximations when neither polygon fits in the other.

Every approximation is a function of the translation ``t`` that is a
quadratic on each face of the arrangement of its event polygons.  Besides
direct evaluation the classes expose upper bounds and local views over
axis-parallel boxes, which the matcher uses for branch and bound.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from . import _kernels
from .approx import (ApproxConfig, bounding_rectangle, containment_translation,
                     preprocess, scaling_similarity)
from .errors import PreconditionError, ValidationError
from .geometry import (TAU, ConvexPolygon, box_polygon, convex_intersection,
                       convex_minkowski_sum, segments_meeting_box)
from .overlap import event_segments, face_quadratic
from .quadratic import Quadratic2
from .slices import compute_slice

SSIM_TOL = 1e-9


def _check_eps(eps):
    if not (isinstance(eps, (int, float)) and 0 < eps < 1):
        raise ValidationError(f"eps must lie in (0, 1), got {eps!r}")


def _polygon_edges(P: ConvexPolygon) -> np.ndarray:
    return P.edges()


class LocalView:
    """Restriction of an approximation to a box.

    ``segments`` are the event segments meeting the box; ``values(points)``
    evaluates the approximation at points of the box; ``quadratic(point)``
    returns the quadratic of the face containing an interior point.
    """

    def __init__(self, segments, values, quadratic):
        self.segments = segments
        self.values = values
        self.quadratic = quadratic


class PiecewiseQuadratic:
    """Common interface of the pair approximations."""

    branch: str = ""
    eps_budget: float = 0.0

    def __call__(self, t) -> float:
        raise NotImplementedError

    def evaluate_many(self, ts) -> np.ndarray:
        return np.array([self(t) for t in np.atleast_2d(ts)])

    def face_function(self, t) -> Quadratic2:
        raise NotImplementedError

    @property
    def event_polygons(self) -> list:
        raise NotImplementedError

    @property
    def polygon_kinds(self) -> list:
        raise NotImplementedError

    def segments(self) -> np.ndarray:
        return np.concatenate([_polygon_edges(p) for p in self.event_polygons], axis=0)

    def support_box(self) -> tuple:
        seg = self.segments()
        lo = seg.reshape(-1, 2).min(axis=0)
        hi = seg.reshape(-1, 2).max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def upper_bound(self, box) -> float:
        raise NotImplementedError

    def localize(self, box) -> LocalView:
        raise NotImplementedError

    def __len__(self) -> int:
        return len(self.event_polygons)


class LatticeCount(PiecewiseQuadratic):
    """``psi(t) = weight * #{k : t in base + offsets[k]}``.

    Used for the lattice construction: with lattice points ``p`` inside the
    small polygon ``X`` the event polygons are ``p - Y``, so ``base = -Y`` and
    the offsets are the points.  The reflected case uses ``base = X`` and
    negated points.
    """

    def __init__(self, base: ConvexPolygon, offsets: np.ndarray, weight: float, eps_budget: float,
                 branch: str = "small_in_large", kind: str = "grid-point copy"):
        self.base = base
        self.offsets = np.ascontiguousarray(np.asarray(offsets, dtype=float).reshape(-1, 2))
        self._neg_offsets = np.ascontiguousarray(-self.offsets)
        self.weight = float(weight)
        self.eps_budget = float(eps_budget)
        self.branch = branch
        self.kind = kind
        self._n, self._b = base.halfplanes()

    def __call__(self, t) -> float:
        c = _kernels.count_in_convex(self._neg_offsets, self.base.vertices, -float(t[0]), -float(t[1]), 0.0)
        return self.weight * c

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.ascontiguousarray(-np.atleast_2d(np.asarray(ts, dtype=float)))
        return self.weight * _kernels.count_in_convex_many(self._neg_offsets, self.base.vertices, ts, 0.0)

    def face_function(self, t) -> Quadratic2:
        return Quadratic2(g=self(t))

    @property
    def event_polygons(self) -> list:
        return [self.base.translated(o) for o in self.offsets]

    @property
    def polygon_kinds(self) -> list:
        return [self.kind] * len(self.offsets)

    def __len__(self) -> int:
        return len(self.offsets)

    def segments(self) -> np.ndarray:
        e = self.base.edges()
        return (e[None, :, :, :] + self.offsets[:, None, None, :]).reshape(-1, 2, 2)

    def support_box(self) -> tuple:
        lo = self.offsets.min(axis=0) + self.base.vertices.min(axis=0)
        hi = self.offsets.max(axis=0) + self.base.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def _offsets_in(self, P: Optional[ConvexPolygon], subset=None) -> np.ndarray:
        off = self.offsets if subset is None else self.offsets[subset]
        if P is None:
            return np.zeros(len(off), dtype=bool)
        n, b = P.halfplanes()
        return np.all(off @ n.T <= b + 1e-12 * (1 + np.abs(b)), axis=1)

    def _meeting(self, box) -> ConvexPolygon:
        # base + o meets the box  <=>  o in box - base
        return convex_minkowski_sum(box_polygon(box), self.base.reflected())

    def _containing(self, box) -> Optional[ConvexPolygon]:
        # box inside base + o  <=>  o in (c - base) for every corner c
        x0, y0, x1, y1 = box
        neg = self.base.reflected()
        region = neg.translated((x0, y0))
        for c in ((x1, y0), (x1, y1), (x0, y1)):
            inter = convex_intersection(region, neg, c)
            if inter is None:
                return None
            region = ConvexPolygon(inter.vertices)
        return region

    def upper_bound(self, box) -> float:
        return self.weight * int(np.count_nonzero(self._offsets_in(self._meeting(box))))

    def localize(self, box) -> LocalView:
        meet = np.flatnonzero(self._offsets_in(self._meeting(box)))
        inside = self._offsets_in(self._containing(box), meet)
        base_count = int(np.count_nonzero(inside))
        crossing = self.offsets[meet[~inside]]
        e = self.base.edges()
        seg = (e[None] + crossing[:, None, None, :]).reshape(-1, 2, 2)
        neg_cross = np.ascontiguousarray(-crossing)
        verts = self.base.vertices
        weight = self.weight

        def values(points):
            pts = np.ascontiguousarray(-np.atleast_2d(np.asarray(points, dtype=float)))
            extra = _kernels.count_in_convex_many(neg_cross, verts, pts, 0.0)
            return weight * (base_count + extra)

        def quadratic(point):
            return Quadratic2(g=float(values([point])[0]))

        return LocalView(seg, values, quadratic)


class NestedLevels(PiecewiseQuadratic):
    """Step function over nested convex rings: the level of the innermost ring."""

    def __init__(self, rings: list, alphas: list, eps_budget: float, branch: str = "small_in_large_slices"):
        if len(rings) != len(alphas):
            raise ValueError("one level per ring")
        self.rings = list(rings)
        self.alphas = [float(a) for a in alphas]
        self.eps_budget = float(eps_budget)
        self.branch = branch
        self._hp = [r.halfplanes() for r in self.rings]

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.atleast_2d(np.asarray(ts, dtype=float))
        out = np.zeros(len(ts))
        for (n, b), a in zip(self._hp, self.alphas):
            inside = np.all(ts @ n.T <= b, axis=1)
            out = np.where(inside, np.maximum(out, a), out)
        return out

    def __call__(self, t) -> float:
        return float(self.evaluate_many([t])[0])

    def face_function(self, t) -> Quadratic2:
        return Quadratic2(g=self(t))

    @property
    def event_polygons(self) -> list:
        return list(self.rings)

    @property
    def polygon_kinds(self) -> list:
        return ["slice ring"] * len(self.rings)

    def _relation(self, box):
        """Per ring: 0 disjoint from the box, 1 crossing, 2 containing."""
        corners = np.array([[box[0], box[1]], [box[2], box[1]], [box[2], box[3]], [box[0], box[3]]])
        rel = []
        B = box_polygon(box)
        for ring, (n, b) in zip(self.rings, self._hp):
            inside = np.all(corners @ n.T <= b, axis=1)
            if inside.all():
                rel.append(2)
            elif inside.any() or _kernels.clip_area(B.vertices, ring.vertices, 0.0, 0.0) > 0.0:
                rel.append(1)
            else:
                x0, y0, x1, y1 = box
                v = ring.vertices
                touch = np.any((v[:, 0] >= x0) & (v[:, 0] <= x1) & (v[:, 1] >= y0) & (v[:, 1] <= y1))
                rel.append(1 if touch else 0)
        return rel

    def upper_bound(self, box) -> float:
        rel = self._relation(box)
        return max([a for a, r in zip(self.alphas, rel) if r > 0], default=0.0)

    def localize(self, box) -> LocalView:
        rel = self._relation(box)
        base = max([a for a, r in zip(self.alphas, rel) if r == 2], default=0.0)
        cross = [k for k, r in enumerate(rel) if r == 1 and self.alphas[k] > base]
        seg = np.concatenate([self.rings[k].edges() for k in cross], axis=0) if cross else np.zeros((0, 2, 2))
        hp = [self._hp[k] for k in cross]
        al = [self.alphas[k] for k in cross]

        def values(points):
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            out = np.full(len(pts), base)
            for (n, b), a in zip(hp, al):
                inside = np.all(pts @ n.T <= b, axis=1)
                out = np.where(inside, np.maximum(out, a), out)
            return out

        return LocalView(seg, values, lambda p: Quadratic2(g=float(values([p])[0])))


class ApproxOverlap(PiecewiseQuadratic):
    """``psi(t) = area(X' ∩ (t + Y'))`` for inner approximations ``X'``, ``Y'``."""

    def __init__(self, x_approx: ConvexPolygon, y_approx: ConvexPolygon, eps_budget: float,
                 branch: str = "incomparable"):
        self.x_approx = x_approx
        self.y_approx = y_approx
        self.eps_budget = float(eps_budget)
        self.branch = branch
        self._segments = event_segments(x_approx, y_approx)

    def __call__(self, t) -> float:
        return float(_kernels.clip_area(self.x_approx.vertices, self.y_approx.vertices, float(t[0]), float(t[1])))

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.ascontiguousarray(np.atleast_2d(np.asarray(ts, dtype=float)))
        return _kernels.clip_area_many(self.x_approx.vertices, self.y_approx.vertices, ts)

    def face_function(self, t) -> Quadratic2:
        return face_quadratic(self.x_approx, self.y_approx, t)

    @property
    def event_polygons(self) -> list:
        negY = self.y_approx.reflected()
        return [negY.translated(v) for v in self.x_approx.vertices] + \
               [self.x_approx.translated(-w) for w in self.y_approx.vertices]

    @property
    def polygon_kinds(self) -> list:
        return ["vertex-in-region"] * (len(self.x_approx) + len(self.y_approx))

    def __len__(self) -> int:
        return len(self.x_approx) + len(self.y_approx)

    def segments(self) -> np.ndarray:
        return self._segments

    def support_box(self) -> tuple:
        lo = self.x_approx.vertices.min(axis=0) - self.y_approx.vertices.max(axis=0)
        hi = self.x_approx.vertices.max(axis=0) - self.y_approx.vertices.min(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def upper_bound(self, box) -> float:
        region = convex_minkowski_sum(box_polygon(box), self.y_approx)
        return float(_kernels.clip_area(self.x_approx.vertices, region.vertices, 0.0, 0.0))

    def localize(self, box) -> LocalView:
        seg = self._segments[segments_meeting_box(self._segments, box)]
        return LocalView(seg, self.evaluate_many, self.face_function)


# ---------------------------------------------------------------------------
# constructions


def _require_fits(X, Y, config):
    alpha, _ = scaling_similarity(X, Y, config.lp_seed)
    if not alpha < 1:
        raise PreconditionError(f"first polygon does not fit inside the second (scaling factor {alpha!r})")


def lattice_points(X: ConvexPolygon, intervals: int):
    """Cell centres of the outer sandwich rectangle of ``X`` that lie in ``X``.

    Returns ``(points, cell_area)``.
    """
    sw = bounding_rectangle(X)
    u1, u2 = sw.axes
    a, b = sw.half_lengths
    n = int(intervals)
    k = (np.arange(n) + 0.5) / n * 2.0 - 1.0
    gi, gj = np.meshgrid(k * 5 * a, k * 5 * b, indexing="ij")
    pts = np.asarray(sw.anchor) + gi.reshape(-1, 1) * u1 + gj.reshape(-1, 1) * u2
    keep = X.contains_points(pts, tol=0.0)
    cell = (10 * a / n) * (10 * b / n)
    return pts[keep], cell


def approx_small_in_large(X: ConvexPolygon, Y: ConvexPolygon, eps: float,
                          config: ApproxConfig = ApproxConfig(), check: bool = True) -> LatticeCount:
    """Lattice approximation when ``X`` fits inside ``Y``.

    The outer sandwich rectangle of ``X`` is split into ``ceil(4/eps)``
    intervals per side; the cell centres inside ``X`` form the point set
    ``S`` and ``psi(t) = cellArea * #{p in S : p in t + Y}``.
    """
    _check_eps(eps)
    if check:
        _require_fits(X, Y, config)
    pts, cell = lattice_points(X, math.ceil(4.0 / eps))
    return LatticeCount(Y.reflected(), pts, cell, eps)


def approx_small_in_large_slices(X: ConvexPolygon, Y: ConvexPolygon, eps: float,
                                 config: ApproxConfig = ApproxConfig(), check: bool = True,
                                 chord_rel: float = 1e-4) -> NestedLevels:
    """Nested-slice approximation when ``X`` fits inside ``Y``.

    ``X`` is replaced by its inner approximation ``X'`` (budget ``eps/4``);
    the maximum overlap of ``X'`` and ``Y`` is ``area(X')``.  Rings are the
    superlevel sets at ``alpha_i = min(1, (i + 1) e) area(X')`` with
    ``e = eps/4``; the top level is the exact set of containing translations.
    """
    _check_eps(eps)
    if check:
        _require_fits(X, Y, config)
    small = eps / 4.0
    xp = preprocess(X, Y, small, config).x_back
    mu = xp.area
    # X' + s ⊆ Y  means  X' ⊆ -s + Y, so the overlap peaks at t = -s
    seed = -np.asarray(containment_translation(xp, Y, config.lp_seed))
    levels = sorted({min(1.0, (i + 1) * small) for i in range(math.ceil(1.0 / small) + 1)})
    rings, alphas = [], []
    extent = float(max(np.ptp(xp.vertices, axis=0).max(), np.ptp(Y.vertices, axis=0).max()))
    for frac in levels:
        alpha = frac * mu
        if frac < 1.0:
            try:
                sl = compute_slice(xp, Y, alpha, seed, chord_tol=chord_rel * extent)
            except PreconditionError:
                continue
            rings.append(sl.boundary)
        else:
            top = _containing_translations(xp, Y)
            if top is None:
                continue
            rings.append(top)
        alphas.append(alpha)
    return NestedLevels(rings, alphas, eps)


def _containing_translations(X: ConvexPolygon, Y: ConvexPolygon) -> Optional[ConvexPolygon]:
    """``{t : X ⊆ t + Y}`` as the intersection of ``v - Y`` over vertices ``v``."""
    negY = Y.reflected()
    region = negY.translated(X.vertices[0])
    for v in X.vertices[1:]:
        inter = convex_intersection(region, negY, v)
        if inter is None:
            return None
        region = ConvexPolygon(inter.vertices)
    return region


def approx_incomparable(X: ConvexPolygon, Y: ConvexPolygon, eps: float,
                        config: ApproxConfig = ApproxConfig(), check: bool = True) -> ApproxOverlap:
    """Approximation by the overlap of the inner approximations from preprocessing."""
    _check_eps(eps)
    if check:
        a, _ = scaling_similarity(X, Y, config.lp_seed)
        b, _ = scaling_similarity(Y, X, config.lp_seed)
        if a < 1 - SSIM_TOL or b < 1 - SSIM_TOL:
            raise PreconditionError("one polygon fits inside the other; use the small-in-large construction")
    pre = preprocess(X, Y, eps, config)
    return ApproxOverlap(pre.x_back, pre.y_back, eps)


def _reflect_lattice(inner: LatticeCount) -> LatticeCount:
    # inner: psi'(s) = w #{p : s in p - X}; psi(t) = psi'(-t) = w #{p : t in X - p}
    return LatticeCount(inner.base.reflected(), -inner.offsets, inner.weight, inner.eps_budget,
                        branch="small_in_large_reflected")


def _reflect_levels(inner: NestedLevels) -> NestedLevels:
    return NestedLevels([r.reflected() for r in inner.rings], inner.alphas, inner.eps_budget,
                        branch="small_in_large_slices_reflected")


def classify_pair(X: ConvexPolygon, Y: ConvexPolygon, config: ApproxConfig = ApproxConfig()) -> str:
    """``"small_in_large"``, ``"small_in_large_reflected"`` or ``"incomparable"``."""
    a, _ = scaling_similarity(X, Y, config.lp_seed)
    if a < 1 - SSIM_TOL:
        return "small_in_large"
    b, _ = scaling_similarity(Y, X, config.lp_seed)
    if b < 1 - SSIM_TOL:
        return "small_in_large_reflected"
    return "incomparable"


def approx_convex_pair(X: ConvexPolygon, Y: ConvexPolygon, eps: float,
                       config: ApproxConfig = ApproxConfig(), use_slices: bool = False) -> PiecewiseQuadratic:
    """Approximation of ``t -> area(X ∩ (t + Y))`` with error at most ``eps`` times its maximum.

    Dispatches on the scaling similarity: lattice (or nested slices) when one
    polygon fits into the other, the inner-approximation overlap otherwise.
    Ties within ``1e-9`` count as incomparable.
    """
    _check_eps(eps)
    branch = classify_pair(X, Y, config)
    small = approx_small_in_large_slices if use_slices else approx_small_in_large
    if branch == "small_in_large":
        return small(X, Y, eps, config, check=False)
    if branch == "small_in_large_reflected":
        inner = small(Y, X, eps, config, check=False)
        return _reflect_levels(inner) if use_slices else _reflect_lattice(inner)
    return approx_incomparable(X, Y, eps, config, check=False)
