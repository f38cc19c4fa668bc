"""Convex decomposition of simple polygons.

Ear-clipping triangulation followed by Hertel-Mehlhorn merging: a diagonal
is removed whenever the two pieces it separates form a convex polygon.
Several triangulations and merge orders are tried and the decomposition
with the fewest parts is kept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import ConvexPolygon, SimplePolygon, canonical_tolerance, validate_parts


@dataclass(frozen=True)
class Decomposition:
    parts: tuple
    source_ring: np.ndarray
    notches: int
    supplied: bool = False

    def __len__(self) -> int:
        return len(self.parts)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def count_notches(P) -> int:
    """Number of reflex vertices of a counter-clockwise ring."""
    ring = P.ring if isinstance(P, SimplePolygon) else np.asarray(P, dtype=float)
    prev = np.roll(ring, 1, axis=0)
    nxt = np.roll(ring, -1, axis=0)
    turn = (ring[:, 0] - prev[:, 0]) * (nxt[:, 1] - ring[:, 1]) - (ring[:, 1] - prev[:, 1]) * (nxt[:, 0] - ring[:, 0])
    tol = canonical_tolerance(ring) * float(np.ptp(ring, axis=0).max())
    return int(np.count_nonzero(turn < -tol))


def _in_triangle(p, a, b, c, strict: bool) -> bool:
    d1 = _cross(a, b, p)
    d2 = _cross(b, c, p)
    d3 = _cross(c, a, p)
    if strict:
        return d1 > 0 and d2 > 0 and d3 > 0
    return d1 >= 0 and d2 >= 0 and d3 >= 0


def triangulate(ring: np.ndarray, start: int = 0) -> list:
    """Ear-clipping triangulation; returns index triples into ``ring``.

    The scan for the next ear begins at position ``start`` of the remaining
    vertex list, so different starts give different triangulations.
    """
    n = len(ring)
    idx = list(range(n))
    tris = []
    pos = start % n
    pts = [tuple(p) for p in ring]
    while len(idx) > 3:
        m = len(idx)
        found = False
        for strict in (False, True):
            for step in range(m):
                k = (pos + step) % m
                i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
                a, b, c = pts[i0], pts[i1], pts[i2]
                if _cross(a, b, c) <= 0:
                    continue
                blocked = False
                for j in idx:
                    if j in (i0, i1, i2):
                        continue
                    q = pts[j]
                    if q in (a, b, c):
                        continue
                    if _in_triangle(q, a, b, c, strict):
                        blocked = True
                        break
                if blocked:
                    continue
                tris.append((i0, i1, i2))
                del idx[k]
                pos = k % len(idx)
                found = True
                break
            if found:
                break
        if not found:
            raise ValidationError("triangulation failed: polygon ring is degenerate")
    tris.append(tuple(idx))
    return tris


def _merge_convex(ring, pieces: list, order: str) -> list:
    pts = ring
    parts = {k: list(t) for k, t in enumerate(pieces)}
    owner = {}
    for pid, poly in parts.items():
        for a, b in zip(poly, poly[1:] + poly[:1]):
            owner.setdefault(frozenset((a, b)), []).append(pid)
    diagonals = [e for e, o in owner.items() if len(o) == 2]
    if order == "long":
        diagonals.sort(key=lambda e: -_length(pts, e))
    elif order == "short":
        diagonals.sort(key=lambda e: _length(pts, e))
    elif order == "reverse":
        diagonals.reverse()
    tol = canonical_tolerance(pts) * float(np.ptp(pts, axis=0).max())
    for e in diagonals:
        p1, p2 = owner[e]
        if p1 == p2:
            continue
        A, B = parts[p1], parts[p2]
        a, b = tuple(e)
        # orient so that A contains the directed edge a -> b
        ia = A.index(a)
        if A[(ia + 1) % len(A)] != b:
            a, b = b, a
            ia = A.index(a)
        ib_A = (ia + 1) % len(A)
        walk_a = A[ib_A:] + A[:ib_A]          # starts at b, ends at a
        ja = B.index(a)
        walk_b = B[ja:] + B[:ja]              # starts at a, ends at b
        merged = walk_a + walk_b[1:-1]
        ok = True
        for v in (a, b):
            k = merged.index(v)
            if _cross(pts[merged[k - 1]], pts[v], pts[merged[(k + 1) % len(merged)]]) < -tol:
                ok = False
                break
        if not ok:
            continue
        parts[p1] = merged
        del parts[p2]
        for u, w in zip(merged, merged[1:] + merged[:1]):
            key = frozenset((u, w))
            if key in owner:
                owner[key] = [p1 if o == p2 else o for o in owner[key]]
        del owner[e]
    return list(parts.values())


def _length(pts, e) -> float:
    a, b = tuple(e)
    return float(np.hypot(*(pts[a] - pts[b])))


def hertel_mehlhorn(ring: np.ndarray, triangles: list, order: str = "given") -> list:
    """Merge triangles across inessential diagonals; returns index lists."""
    return _merge_convex(ring, triangles, order)


def _reflex_index(pts, poly, tol):
    m = len(poly)
    for k in range(m):
        if _cross(pts[poly[k - 1]], pts[poly[k]], pts[poly[(k + 1) % m]]) < -tol:
            return k
    return None


def _drop_straight(pts, poly, tol):
    out = list(poly)
    changed = True
    while changed and len(out) > 3:
        changed = False
        for k in range(len(out)):
            a, b, c = out[k - 1], out[k], out[(k + 1) % len(out)]
            if abs(_cross(pts[a], pts[b], pts[c])) <= tol:
                del out[k]
                changed = True
                break
    return out


def notch_cut(ring: np.ndarray) -> tuple:
    """Convex decomposition with at most ``notches + 1`` parts.

    At a reflex vertex the incoming edge is extended into the interior
    until it meets the boundary, and the polygon is split along that
    segment.  The vertex stops being reflex in both halves and the new
    boundary point is convex in both, so each cut removes at least one
    notch.  Returns ``(points, index_lists)``; new boundary points are
    appended to ``points``.
    """
    pts = [np.asarray(p, dtype=float) for p in ring]
    tol = canonical_tolerance(ring) * float(np.ptp(ring, axis=0).max())
    done = []
    stack = [list(range(len(ring)))]
    while stack:
        poly = _drop_straight(pts, stack.pop(), tol)
        k = _reflex_index(pts, poly, tol)
        if k is None:
            done.append(poly)
            continue
        m = len(poly)
        v = pts[poly[k]]
        d = v - pts[poly[k - 1]]
        best = None
        for j in range(m):
            if j in (k, (k - 1) % m):
                continue
            a, b = pts[poly[j]], pts[poly[(j + 1) % m]]
            e = b - a
            den = d[0] * e[1] - d[1] * e[0]
            if den == 0:
                continue
            w = a - v
            ray = (w[0] * e[1] - w[1] * e[0]) / den
            along = (w[0] * d[1] - w[1] * d[0]) / den
            if ray <= 0 or along < 0 or along > 1:
                continue
            if best is None or ray < best[0]:
                best = (ray, j, along)
        if best is None:
            raise ValidationError("notch cut failed: polygon ring is degenerate")
        _, j, along = best
        jn = (j + 1) % m
        if along <= 1e-12:
            hit = poly[j]
        elif along >= 1 - 1e-12:
            hit = poly[jn]
        else:
            pts.append(pts[poly[j]] + along * (pts[poly[jn]] - pts[poly[j]]))
            hit = len(pts) - 1
        # walk k -> ... -> j, then hit; and hit -> jn ... -> k
        first, second = [], []
        i = k
        while True:
            first.append(poly[i])
            if i == j:
                break
            i = (i + 1) % m
        if hit != poly[j]:
            first.append(hit)
        if hit == poly[jn]:
            i = jn
        else:
            second.append(hit)
            i = jn
        while True:
            second.append(poly[i])
            if i == k:
                break
            i = (i + 1) % m
        stack.extend([first, second])
    return np.array(pts), done


def decompose(P: SimplePolygon, attempts: int = 12) -> Decomposition:
    """Convex decomposition of a simple polygon.

    Caller-supplied parts are validated and returned unchanged.  Otherwise
    ``attempts`` triangulation starts are combined with four diagonal
    orders and the smallest resulting decomposition is returned; if it
    still has more than ``notches + 1`` parts, the remaining starts are
    tried until that bound is met.  When no triangulation reaches it, the
    polygon is split by :func:`notch_cut` instead, which always does.

    Keyword arguments:
    attempts -- number of distinct ear-clipping starts to try
    """
    if not isinstance(P, SimplePolygon):
        P = SimplePolygon(P)
    ring = np.asarray(P.ring)
    notches = count_notches(P)
    if P.parts is not None:
        validate_parts(ring, P.parts)
        return Decomposition(tuple(P.parts), ring, notches, supplied=True)
    if notches == 0:
        return Decomposition((ConvexPolygon(ring),), ring, 0)
    n = len(ring)
    best = None
    spread = sorted({int(round(s)) for s in np.linspace(0, n - 1, min(attempts, n))})
    starts = spread + [s for s in range(n) if s not in spread]
    for k, s in enumerate(starts):
        if k >= len(spread) and len(best) <= notches + 1:
            break
        tris = triangulate(ring, s)
        for order in ("given", "reverse", "long", "short"):
            pieces = hertel_mehlhorn(ring, tris, order)
            if best is None or len(pieces) < len(best):
                best = pieces
    pts = ring
    if len(best) > notches + 1:
        pts, pieces = notch_cut(ring)
        best = min((hertel_mehlhorn(pts, pieces, order) for order in ("given", "long")), key=len)
    parts = tuple(ConvexPolygon(pts[p]) for p in best)
    validate_parts(ring, parts)
    return Decomposition(parts, ring, notches)
