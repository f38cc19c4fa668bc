"""Maximum overlap of two simple polygons under translation.

Both polygons are split into convex parts.  Every pair of parts ``(P_i,
Q_j)`` gets a piecewise-quadratic approximation ``psi_ij`` with error budget
``eps / k^2`` (``k`` the larger part count), and ``psi`` is their sum.

``psi`` is quadratic on every face of the overlay of all event polygons.
That overlay is never built in one piece: translation space is covered by a
quadtree whose leaves hold few event segments, and a leaf overlay is built
only when a leaf is needed.  The maximisation is a best-first branch and
bound over this quadtree using the per-pair upper bounds; the query
structure descends the same quadtree, so both see the same faces.
"""

from __future__ import annotations

import heapq
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .approx import ApproxConfig
from .arrangement import Arrangement
from .decompose import Decomposition, decompose
from .errors import DegenerateConfigurationError, ValidationError
from .geometry import Point, SimplePolygon, segments_meeting_box
from .overlap import face_quadratic
from .pairapprox import ApproxOverlap, approx_convex_pair
from .quadratic import Quadratic2, maximize_quadratic_over_region
from .trapezoid import TrapezoidalMap

LEAF_SEGMENTS = 96
MAX_DEPTH = 22


@dataclass(frozen=True)
class MatchConfig:
    """Tuning of :func:`match_polygons`.

    ``leaf_segments`` and ``max_depth`` decide when a quadtree box becomes a
    leaf; ``linear_scan`` switches point location to a scan over all edges.
    With ``certified_stop`` the search ends as soon as the incumbent provably
    reaches ``(1 - eps)`` of the true maximum overlap instead of proving it
    maximises ``psi``; this is much faster when ``psi`` has wide plateaus.
    """

    approx: ApproxConfig = ApproxConfig()
    use_slices: bool = False
    parallel: bool = False
    linear_scan: bool = False
    leaf_segments: int = LEAF_SEGMENTS
    max_depth: int = MAX_DEPTH
    trapezoid_seed: int = 0
    certified_stop: bool = False


def _check_eps(eps):
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and 0 < eps < 1):
        raise ValidationError(f"eps must lie in (0, 1), got {eps!r}")


class PairSum:
    """``psi = sum_ij psi_ij`` over all part pairs, evaluated in ``(i, j)`` order."""

    def __init__(self, P: SimplePolygon, Q: SimplePolygon, eps: float,
                 config: MatchConfig = MatchConfig()):
        _check_eps(eps)
        self.P = P if isinstance(P, SimplePolygon) else SimplePolygon(P)
        self.Q = Q if isinstance(Q, SimplePolygon) else SimplePolygon(Q)
        self.eps = float(eps)
        self.config = config
        self.dec_p: Decomposition = decompose(self.P)
        self.dec_q: Decomposition = decompose(self.Q)
        self.k = max(len(self.dec_p), len(self.dec_q))
        self.pair_budget = self.eps / (self.k * self.k)
        index = [(i, j) for i in range(len(self.dec_p)) for j in range(len(self.dec_q))]

        def build(ij):
            i, j = ij
            return approx_convex_pair(self.dec_p.parts[i], self.dec_q.parts[j], self.pair_budget,
                                      config.approx, use_slices=config.use_slices)

        if config.parallel and len(index) > 1:
            with ThreadPoolExecutor() as pool:
                pairs = list(pool.map(build, index))
        else:
            pairs = [build(ij) for ij in index]
        self.index = index
        self.pairs: list = pairs

    def __call__(self, t) -> float:
        total = 0.0
        for psi in self.pairs:
            total += psi(t)
        return float(total)

    def evaluate_many(self, ts) -> np.ndarray:
        ts = np.atleast_2d(np.asarray(ts, dtype=float))
        total = np.zeros(len(ts))
        for psi in self.pairs:
            total = total + psi.evaluate_many(ts)
        return total

    def exact_pair_overlaps(self, t) -> np.ndarray:
        """``area(P_i ∩ (t + Q_j))`` in pair order."""
        from .geometry import overlap_area
        return np.array([overlap_area(self.dec_p.parts[i], self.dec_q.parts[j], t) for i, j in self.index])

    def upper_bound(self, box) -> float:
        return float(sum(psi.upper_bound(box) for psi in self.pairs))

    def support_box(self) -> tuple:
        boxes = np.array([psi.support_box() for psi in self.pairs])
        return (float(boxes[:, 0].min()), float(boxes[:, 1].min()),
                float(boxes[:, 2].max()), float(boxes[:, 3].max()))

    def branches(self) -> list:
        return [psi.branch for psi in self.pairs]

    def error_bound(self) -> float:
        """Upper bound on ``|psi(t) - area(P ∩ (t + Q))|`` valid for every ``t``.

        Each pair errs by at most ``pair_budget`` times its own maximum
        overlap, which is at most the smaller of the two part areas.
        """
        total = 0.0
        for i, j in self.index:
            total += min(self.dec_p.parts[i].area, self.dec_q.parts[j].area)
        return self.pair_budget * total


def _quadrants(box) -> list:
    x0, y0, x1, y1 = box
    mx, my = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return [(x0, y0, mx, my), (mx, y0, x1, my), (x0, my, mx, y1), (mx, my, x1, y1)]


def _quadrant_of(box, t) -> int:
    x0, y0, x1, y1 = box
    return int(t[0] >= 0.5 * (x0 + x1)) + 2 * int(t[1] >= 0.5 * (y0 + y1))


def _box_contains(box, t) -> bool:
    return box[0] <= t[0] <= box[2] and box[1] <= t[1] <= box[3]


class Leaf:
    """Overlay of one quadtree box with the summed quadratic of every face.

    Quadratics are stored in coordinates relative to the box centre, which
    keeps their evaluation well conditioned far from the origin.
    """

    def __init__(self, pairsum: PairSum, box, segments: np.ndarray, seg_pair: np.ndarray,
                 config: MatchConfig):
        self.box = box
        self.center = np.array([0.5 * (box[0] + box[2]), 0.5 * (box[1] + box[3])])
        self.arrangement = Arrangement(segments, box)
        self.config = config
        self._locator = None
        self._lock = threading.Lock()
        A = self.arrangement
        reps = A.representatives
        F = len(A.faces)
        coef = np.zeros((F, 6))
        active = set(np.unique(seg_pair).tolist())
        c = self.center
        for p, psi in enumerate(pairsum.pairs):
            if isinstance(psi, ApproxOverlap):
                xc = psi.x_approx.translated(-c)
                if p in active:
                    for f, face in enumerate(A.faces):
                        coef[f] += _robust_quadratic(xc, psi.y_approx, face, c, A).coefficients()
                else:
                    coef += np.array(_robust_quadratic(xc, psi.y_approx, None, c, A).coefficients())
            else:
                if p in active:
                    if F:
                        coef[:, 5] += psi.evaluate_many(reps)
                else:
                    coef[:, 5] += psi(c)
        self.coefficients = coef

    def __len__(self) -> int:
        return len(self.arrangement.faces)

    def quadratic(self, f: int) -> Quadratic2:
        """Face quadratic in coordinates relative to :attr:`center`."""
        return Quadratic2(*self.coefficients[f])

    @property
    def locator(self):
        with self._lock:
            if self._locator is None:
                self._locator = TrapezoidalMap(self.arrangement, self.config.trapezoid_seed)
            return self._locator

    def locate(self, t, linear_scan: bool = False) -> int:
        if linear_scan:
            return self.arrangement.locate_linear(t)
        return self.locator.locate(t)

    def value(self, t, linear_scan: bool = False) -> float:
        f = self.locate(t, linear_scan)
        if f < 0:
            return 0.0
        return float(self.quadratic(f)(np.asarray(t, dtype=float) - self.center))

    def maximum(self, pairsum: PairSum):
        """Best face: ``(value, translation)`` with the translation inside the face."""
        A = self.arrangement
        best = (-math.inf, None)
        c = self.center
        for f, face in enumerate(A.faces):
            co = self.coefficients[f]
            if not np.any(co[:5]):
                if co[5] > best[0]:
                    best = (float(co[5]), face.representative)
                continue
            q = Quadratic2(*co)
            m = maximize_quadratic_over_region(q, face.outer - c, tuple(h - c for h in face.holes))
            if m.value > best[0]:
                best = (m.value, _nudge(A, f, np.asarray(m.point) + c))
        if best[1] is None:
            return None
        t = np.asarray(best[1], dtype=float)
        return pairsum(t), t


def _robust_quadratic(xc, y, face, c, A) -> Quadratic2:
    """Local quadratic of one pair at an interior point of ``face`` (the whole box if ``None``).

    Segments of different pairs that coincide mathematically differ by
    rounding and leave sliver faces whose interior points are within
    rounding distance of a segment.  The pair is continuous across such a
    segment and both neighbouring quadratics agree on it, so the quadratic
    is then taken at a nearby point off the segment.
    """
    if face is None:
        return face_quadratic(xc, y, (0.0, 0.0))
    rep = face.representative - c
    try:
        return face_quadratic(xc, y, rep)
    except DegenerateConfigurationError:
        pass
    scale = max(1.0, float(np.abs(xc.vertices).max()), float(np.abs(y.vertices).max()))
    for step in (1e-10, 1e-9, 1e-8, 1e-7):
        for k in range(8):
            ang = 2 * math.pi * (k + 0.5) / 8
            try:
                return face_quadratic(xc, y, rep + step * scale * np.array([math.cos(ang), math.sin(ang)]))
            except DegenerateConfigurationError:
                continue
    raise DegenerateConfigurationError(f"no regular point near face {face.id}")


def _nudge(A: Arrangement, f: int, p: np.ndarray) -> np.ndarray:
    """A point of face ``f`` near ``p`` that is clear of every edge."""
    rep = A.faces[f].representative
    size = max(A.box[2] - A.box[0], A.box[3] - A.box[1])
    clearance = 1e-10 * size
    for lam in (1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5):
        cand = p + lam * (rep - p)
        if A.distance_to_edges(cand)[0] > clearance and A.locate_linear(cand) == f:
            return cand
    return rep


class Subdivision:
    """Quadtree over translation space shared by maximisation and queries.

    A box is a leaf when at most ``leaf_segments`` event segments meet it or
    it sits at ``max_depth``.  Internal nodes cache the indices of the
    segments meeting them; leaves cache their overlay.  Construction of
    leaves is guarded by a lock so queries may run from several threads.
    """

    def __init__(self, pairsum: PairSum, config: MatchConfig = MatchConfig()):
        self.pairsum = pairsum
        self.config = config
        segs, owner = [], []
        for p, psi in enumerate(pairsum.pairs):
            s = psi.segments()
            segs.append(s)
            owner.append(np.full(len(s), p))
        self.segments = np.concatenate(segs, axis=0)
        self.seg_pair = np.concatenate(owner)
        x0, y0, x1, y1 = pairsum.support_box()
        side = max(x1 - x0, y1 - y0)
        pad = 1e-6 * side
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        half = 0.5 * side + pad
        self.root_box = (cx - half, cy - half, cx + half, cy + half)
        self._nodes = {(): np.arange(len(self.segments))}
        self._leaves = {}
        self._lock = threading.Lock()

    def box_of(self, path) -> tuple:
        box = self.root_box
        for q in path:
            box = _quadrants(box)[q]
        return box

    def segment_indices(self, path) -> np.ndarray:
        with self._lock:
            idx = self._nodes.get(path)
        if idx is not None:
            return idx
        parent = self.segment_indices(path[:-1])
        box = self.box_of(path)
        idx = parent[segments_meeting_box(self.segments[parent], box)]
        with self._lock:
            self._nodes.setdefault(path, idx)
        return idx

    def is_leaf(self, path) -> bool:
        return len(path) >= self.config.max_depth or len(self.segment_indices(path)) <= self.config.leaf_segments

    def leaf(self, path) -> Leaf:
        with self._lock:
            leaf = self._leaves.get(path)
        if leaf is not None:
            return leaf
        idx = self.segment_indices(path)
        leaf = Leaf(self.pairsum, self.box_of(path), self.segments[idx], self.seg_pair[idx], self.config)
        with self._lock:
            return self._leaves.setdefault(path, leaf)

    def leaf_path(self, t) -> Optional[tuple]:
        if not _box_contains(self.root_box, t):
            return None
        path = ()
        while not self.is_leaf(path):
            path = path + (_quadrant_of(self.box_of(path), t),)
        return path

    @property
    def face_count(self) -> int:
        with self._lock:
            return sum(len(leaf) for leaf in self._leaves.values())

    @property
    def leaf_count(self) -> int:
        with self._lock:
            return len(self._leaves)


@dataclass(frozen=True, eq=False)
class MatchResult:
    """Outcome of :func:`match_polygons`.

    ``value`` is ``psi(translation)``; ``pair_budget`` the per-pair error
    budget ``eps / k^2``; ``face_count`` the number of overlay faces built.
    """

    translation: Point
    value: float
    epsilon: float
    pair_budget: float
    face_count: int
    stats: dict
    subdivision: Subdivision = field(repr=False)

    @property
    def pairsum(self) -> PairSum:
        return self.subdivision.pairsum


def _probe(box) -> np.ndarray:
    # a fixed off-centre point, unlikely to sit on a structured edge
    x0, y0, x1, y1 = box
    return np.array([x0 + 0.5123456789 * (x1 - x0), y0 + 0.4876543211 * (y1 - y0)])


def maximize(sub: Subdivision, stats: Optional[dict] = None):
    """Best-first branch and bound for the maximum of ``psi`` over the quadtree.

    Returns ``(value, translation)``; the translation lies in the interior
    of a face so that direct evaluation and point location agree there.
    """
    ps = sub.pairsum
    best_v, best_t = 0.0, np.array(sub.root_box[2:]) + 1.0  # psi vanishes outside the root box
    counter = 0
    heap = [(-ps.upper_bound(sub.root_box), counter, ())]
    expanded = leaves = pruned = 0
    tol = 1e-12
    certified = False
    if sub.config.certified_stop:
        error = ps.error_bound()
        area_cap = min(ps.P.area, ps.Q.area)

    def consider(value, t):
        nonlocal best_v, best_t
        if value > best_v:
            best_v, best_t = float(value), np.asarray(t, dtype=float)

    while heap:
        neg_ub, _, path = heapq.heappop(heap)
        if -neg_ub <= best_v + tol * max(1.0, best_v):
            pruned += 1 + len(heap)
            break
        if sub.config.certified_stop:
            # the true maximum is at most max(psi) + error <= ub + error
            ceiling = min(max(-neg_ub, best_v) + error, area_cap)
            if best_v >= (1.0 - ps.eps) * ceiling:
                certified = True
                pruned += 1 + len(heap)
                break
        if sub.is_leaf(path):
            leaves += 1
            res = sub.leaf(path).maximum(ps)
            if res is not None:
                consider(*res)
            continue
        expanded += 1
        box = sub.box_of(path)
        for q, child in enumerate(_quadrants(box)):
            cpath = path + (q,)
            idx = sub.segment_indices(cpath)
            probe = _probe(child)
            segs = sub.segments[idx]
            if len(segs) == 0 or _clear_of(segs, probe, 1e-9 * (child[2] - child[0])):
                consider(ps(probe), probe)
            ub = ps.upper_bound(child)
            if ub > best_v + tol * max(1.0, best_v):
                counter += 1
                heapq.heappush(heap, (-ub, counter, cpath))
            else:
                pruned += 1
    if stats is not None:
        stats.update(nodes_expanded=expanded, leaves_solved=leaves, pruned=pruned,
                     stop="certified" if certified else "exhausted")
    return best_v, best_t


def _clear_of(segs: np.ndarray, p: np.ndarray, clearance: float) -> bool:
    a = segs[:, 0, :]
    d = segs[:, 1, :] - a
    L2 = np.maximum(np.sum(d * d, axis=1), 1e-300)
    s = np.clip(np.sum((p - a) * d, axis=1) / L2, 0.0, 1.0)
    diff = p - (a + s[:, None] * d)
    return bool(np.min(np.sum(diff * diff, axis=1)) > clearance * clearance)


def match_polygons(P, Q, eps: float, config: MatchConfig = MatchConfig()) -> MatchResult:
    """Translation ``t`` with ``psi(t) >= (1 - eps) * max_t area(P ∩ (t + Q))``.

    Args:
        P, Q: simple polygons (optionally carrying a convex decomposition).
        eps: relative error in ``(0, 1)``.
        config: see :class:`MatchConfig`.

    Raises:
        ValidationError: ``eps`` out of range or an invalid polygon.
    """
    _check_eps(eps)
    stats = {}
    t0 = time.perf_counter()
    ps = PairSum(P, Q, eps, config)
    t1 = time.perf_counter()
    sub = Subdivision(ps, config)
    value, t = maximize(sub, stats)
    t2 = time.perf_counter()
    stats.update(
        parts_p=len(ps.dec_p), parts_q=len(ps.dec_q), pairs=len(ps.pairs),
        branches=ps.branches(), segments=int(len(sub.segments)), leaves_built=sub.leaf_count,
        pair_seconds=t1 - t0, search_seconds=t2 - t1,
    )
    return MatchResult(Point(float(t[0]), float(t[1])), float(value), float(eps), ps.pair_budget,
                       sub.face_count, stats, sub)


class QueryStructure:
    """Evaluates ``psi`` by point location in the quadtree leaves.

    Outside the root box ``psi`` is zero because no event polygon reaches
    there.  A point on an edge takes the value of the adjacent face with the
    smallest id.
    """

    def __init__(self, subdivision: Subdivision, linear_scan: bool = False):
        self.subdivision = subdivision
        self.linear_scan = linear_scan

    def __call__(self, t, linear_scan: Optional[bool] = None) -> float:
        scan = self.linear_scan if linear_scan is None else linear_scan
        t = np.asarray(t, dtype=float)
        path = self.subdivision.leaf_path(t)
        if path is None:
            return 0.0
        return self.subdivision.leaf(path).value(t, scan)

    def face_id(self, t, linear_scan: Optional[bool] = None) -> tuple:
        """``(leaf path, face id)`` of the face containing ``t``."""
        scan = self.linear_scan if linear_scan is None else linear_scan
        path = self.subdivision.leaf_path(t)
        if path is None:
            return None, -1
        return path, self.subdivision.leaf(path).locate(t, scan)


def build_query_structure(context, config: Optional[MatchConfig] = None) -> QueryStructure:
    """Query structure from a :class:`MatchResult`, a :class:`PairSum` or a :class:`Subdivision`."""
    if isinstance(context, MatchResult):
        sub = context.subdivision
    elif isinstance(context, Subdivision):
        sub = context
    elif isinstance(context, PairSum):
        sub = Subdivision(context, config or context.config)
    else:
        raise ValidationError(f"cannot build a query structure from {type(context).__name__}")
    scan = (config or sub.config).linear_scan
    return QueryStructure(sub, scan)


def query_overlap(qs: QueryStructure, t, linear_scan: Optional[bool] = None) -> float:
    """``psi(t)`` through the query structure."""
    return qs(t, linear_scan)
