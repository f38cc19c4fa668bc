"""Randomised incremental trapezoidal map over the edges of an arrangement.

Points are ordered lexicographically by ``(x, y)``, which amounts to a
symbolic shear and removes the special cases of vertical edges and shared
x-coordinates.  All above/below decisions use the filtered exact
orientation predicate.

The trapezoids crossed by a new segment are found by repeated point
location of "the point of the segment just right of ``r``" instead of by
neighbour pointers; each step costs a search path, which keeps the
structure small and the code free of neighbour bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .predicates import orient

_X, _Y, _LEAF = 0, 1, 2


class _Trap:
    __slots__ = ("top", "bottom", "leftp", "rightp", "node")

    def __init__(self, top, bottom, leftp, rightp):
        self.top = top
        self.bottom = bottom
        self.leftp = leftp
        self.rightp = rightp
        self.node = None


class _Node:
    __slots__ = ("kind", "key", "left", "right", "trap")

    def __init__(self, kind, key=None, left=None, right=None, trap=None):
        self.kind = kind
        self.key = key
        self.left = left      # x-node: left of key; y-node: above key
        self.right = right    # x-node: right of key; y-node: below key
        self.trap = trap


def _leaf(trap: _Trap) -> _Node:
    node = _Node(_LEAF, trap=trap)
    trap.node = node
    return node


def _direction_sign(d1, d2) -> int:
    """Sign of ``d1 x d2`` computed exactly."""
    v = Fraction(d1[0]) * Fraction(d2[1]) - Fraction(d1[1]) * Fraction(d2[0])
    return (v > 0) - (v < 0)


def _side_at(sp, sq, p, q, r) -> int:
    """Side of segment ``sp sq`` on which the point of ``p q`` below or above ``r`` lies."""
    if r == p or p[0] == q[0]:
        return orient(sp, sq, p)
    lam = (r[0] - p[0]) / (q[0] - p[0])
    y = p[1] + lam * (q[1] - p[1])
    ux, uy = sq[0] - sp[0], sq[1] - sp[1]
    wx, wy = r[0] - sp[0], y - sp[1]
    det = ux * wy - uy * wx
    bound = 1e-12 * (abs(ux) + abs(uy)) * (abs(wx) + abs(wy) + abs(p[1]) + abs(q[1]))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    F = Fraction
    lam = (F(r[0]) - F(p[0])) / (F(q[0]) - F(p[0]))
    y = F(p[1]) + lam * (F(q[1]) - F(p[1]))
    det = (F(sq[0]) - F(sp[0])) * (y - F(sp[1])) - (F(sq[1]) - F(sp[1])) * (F(r[0]) - F(sp[0]))
    return (det > 0) - (det < 0)


class TrapezoidalMap:
    """Point location over the edges of an :class:`~polyoverlap.arrangement.Arrangement`."""

    def __init__(self, arrangement, seed: int = 0):
        self.arrangement = arrangement
        V = arrangement.vertices
        self._pts = [(float(x), float(y)) for x, y in V]
        segs = []
        for e, (a, b) in enumerate(arrangement.edges.tolist()):
            pa, pb = self._pts[a], self._pts[b]
            if pa < pb:
                segs.append((pa, pb, e, a, b))
            else:
                segs.append((pb, pa, e, b, a))
        self._segs = segs
        self._vertex_ids = {}
        for v, pt in enumerate(self._pts):
            self._vertex_ids.setdefault(pt, []).append(v)
        inf = float("inf")
        root_trap = _Trap(None, None, (-inf, -inf), (inf, inf))
        self.root = _leaf(root_trap)
        order = np.random.default_rng(seed).permutation(len(segs))
        for k in order.tolist():
            self._insert(k)

    # -- search --------------------------------------------------------------

    def _locate_on_segment(self, r, k):
        """Trapezoid containing the point of segment ``k`` just right of the wall through ``r``."""
        p, q = self._segs[k][0], self._segs[k][1]
        node = self.root
        while node.kind != _LEAF:
            if node.kind == _X:
                node = node.left if r < node.key else node.right
            else:
                sp, sq = self._segs[node.key][0], self._segs[node.key][1]
                o = _side_at(sp, sq, p, q, r)
                if o == 0:
                    # the segments touch below or above r; under the shear the
                    # point lies right of the contact when r is above it
                    o = _direction_sign((sq[0] - sp[0], sq[1] - sp[1]), (q[0] - p[0], q[1] - p[1]))
                    if r != p and p[0] != q[0] and orient(p, q, r) < 0:
                        o = -o
                node = node.left if o >= 0 else node.right
        return node.trap

    def locate_trapezoid(self, t):
        t = (float(t[0]), float(t[1]))
        node = self.root
        while node.kind != _LEAF:
            if node.kind == _X:
                node = node.left if t < node.key else node.right
            else:
                sp, sq = self._segs[node.key][0], self._segs[node.key][1]
                node = node.left if orient(sp, sq, t) >= 0 else node.right
        return node.trap

    # -- construction ----------------------------------------------------------

    def _insert(self, k):
        p, q = self._segs[k][0], self._segs[k][1]
        traps = [self._locate_on_segment(p, k)]
        while traps[-1].rightp < q:
            traps.append(self._locate_on_segment(traps[-1].rightp, k))
        first, last = traps[0], traps[-1]
        A = _Trap(first.top, first.bottom, first.leftp, p) if first.leftp < p else None
        D = _Trap(last.top, last.bottom, q, last.rightp) if q < last.rightp else None
        uppers, lowers = [], []
        up = _Trap(first.top, k, p, None)
        low = _Trap(k, first.bottom, p, None)
        for j, trap in enumerate(traps):
            if j > 0:
                r = trap.leftp
                if orient(p, q, r) > 0:
                    up.rightp = r
                    up = _Trap(trap.top, k, r, None)
                else:
                    low.rightp = r
                    low = _Trap(k, trap.bottom, r, None)
            uppers.append(up)
            lowers.append(low)
        up.rightp = q
        low.rightp = q
        leaves = {}

        def leaf_of(t):
            if id(t) not in leaves:
                leaves[id(t)] = _leaf(t)
            return leaves[id(t)]

        for j, trap in enumerate(traps):
            node = trap.node
            ynode = _Node(_Y, key=k, left=leaf_of(uppers[j]), right=leaf_of(lowers[j]))
            sub = ynode
            if j == len(traps) - 1 and D is not None:
                sub = _Node(_X, key=q, left=sub, right=leaf_of(D))
            if j == 0 and A is not None:
                sub = _Node(_X, key=p, left=leaf_of(A), right=sub)
            node.kind, node.key, node.left, node.right, node.trap = sub.kind, sub.key, sub.left, sub.right, None

    # -- point location ----------------------------------------------------------

    def _face_below_top(self, trap):
        if trap.top is not None:
            # below a segment means left of its right-to-left half-edge
            return self._face_of_side(trap.top, below=True)
        if trap.bottom is not None:
            return self._face_of_side(trap.bottom, below=False)
        return -1

    def _face_of_side(self, k, below):
        A = self.arrangement
        _, _, e, a, _ = self._segs[k]
        forward = int(A.edges[e, 0]) == a      # half-edge 2e runs left to right
        h = 2 * e if forward != below else 2 * e + 1
        return int(A.half_edge_face[h])

    def locate(self, t) -> int:
        """Face id containing ``t``; points on edges get the smallest adjacent id."""
        A = self.arrangement
        t = (float(t[0]), float(t[1]))
        trap = self.locate_trapezoid(t)
        candidates = set()
        vertices = set()
        for s in (trap.top, trap.bottom):
            if s is not None:
                sp, sq, e, a, b = self._segs[s]
                if sp == t:
                    vertices.add(a)
                elif sq == t:
                    vertices.add(b)
                elif orient(sp, sq, t) == 0 and sp <= t <= sq:
                    candidates.update(A.faces_of_edge(e))
        for pnt in (trap.leftp, trap.rightp):
            if pnt == t:
                vertices.update(self._vertex_ids.get(pnt, ()))
        if vertices:
            cand = set()
            for v in vertices:
                cand.update(A.faces_around_vertex(v))
            return min(cand) if cand else -1
        f = self._face_below_top(trap)
        if f >= 0:
            candidates.add(f)
        return min(candidates) if candidates else -1
