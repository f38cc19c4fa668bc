"""Brute-force reference values for overlap under translation.

:func:`exact_overlap_general` sums convex clipping areas over the part
pairs of two decomposed polygons.  :func:`grid_max_overlap` maximises it
on a uniform grid over all translations with non-empty overlap and then
refines locally around the best grid point.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .decompose import decompose
from .geometry import ConvexPolygon, Point, SimplePolygon


@dataclass(frozen=True)
class OracleReport:
    """Best grid translation and a bound on how far the true maximum can lie above it.

    ``value_slack_bound`` assumes the maximum sits within one final pitch of
    the refined window; it is a Lipschitz estimate, not a proof.
    """

    best_translation: Point
    best_value: float
    grid_pitch: float
    refinement_levels: int
    value_slack_bound: float
    level_values: tuple = ()


class _PartStack:
    """Convex parts of one polygon packed for the clipping kernel."""

    def __init__(self, P):
        if isinstance(P, ConvexPolygon):
            parts = (P,)
            self.perimeter = P.perimeter
            self.area = P.area
            pts = P.vertices
        else:
            P = P if isinstance(P, SimplePolygon) else SimplePolygon(P)
            parts = decompose(P).parts
            self.perimeter = P.perimeter
            self.area = P.area
            pts = P.ring
        self.flat = np.ascontiguousarray(np.concatenate([q.vertices for q in parts], axis=0))
        self.offsets = np.concatenate([[0], np.cumsum([len(q.vertices) for q in parts])]).astype(np.int64)
        self.lo = pts.min(axis=0)
        self.hi = pts.max(axis=0)


_STACK_CACHE: OrderedDict = OrderedDict()
_STACK_CACHE_SIZE = 32
_STACK_LOCK = threading.Lock()


def _stack_key(P):
    if isinstance(P, ConvexPolygon):
        return ("convex", P.vertices.tobytes())
    if isinstance(P, SimplePolygon):
        parts = None if P.parts is None else tuple(q.vertices.tobytes() for q in P.parts)
        return ("simple", P.ring.tobytes(), parts)
    return None


def _part_stack(P) -> _PartStack:
    """Packed parts of ``P``, reusing the decomposition of recently seen polygons."""
    key = _stack_key(P)
    if key is None:
        return _PartStack(P)
    with _STACK_LOCK:
        stack = _STACK_CACHE.get(key)
        if stack is not None:
            _STACK_CACHE.move_to_end(key)
            return stack
    stack = _PartStack(P)
    with _STACK_LOCK:
        _STACK_CACHE[key] = stack
        if len(_STACK_CACHE) > _STACK_CACHE_SIZE:
            _STACK_CACHE.popitem(last=False)
    return stack


def _overlaps(ps: _PartStack, qs: _PartStack, T: np.ndarray) -> np.ndarray:
    T = np.ascontiguousarray(np.atleast_2d(np.asarray(T, dtype=float)))
    return _kernels.sum_clip_area_many(ps.flat, ps.offsets, qs.flat, qs.offsets, T)


def exact_overlap_general(P, Q, t) -> float:
    """``area(P ∩ (t + Q))`` as the sum of overlaps of all convex part pairs."""
    return float(_overlaps(_part_stack(P), _part_stack(Q), np.asarray(t, dtype=float)[None, :])[0])


def exact_overlap_general_many(P, Q, ts) -> np.ndarray:
    return _overlaps(_part_stack(P), _part_stack(Q), ts)


def _best_of(values: np.ndarray, T: np.ndarray) -> int:
    # largest value; ties go to the lexicographically smallest translation
    top = values.max()
    cand = np.flatnonzero(values == top)
    order = np.lexsort((T[cand, 1], T[cand, 0]))
    return int(cand[order[0]])


def _grid(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


def grid_max_overlap(P, Q, base: int = 201, levels: int = 3, *, pitch: Optional[float] = None,
                     window: int = 10, workers: Optional[int] = None) -> OracleReport:
    """Grid search for ``max_t area(P ∩ (t + Q))``.

    The base grid spans the box of translations where the supports can meet,
    with ``base`` points per axis (or spacing ``pitch`` when given).  Each
    refinement level lays a grid ten times finer over ``±window`` new pitches
    around the current best point, which itself stays on the grid, so the
    best value never decreases from one level to the next.

    Keyword arguments:
    pitch -- base grid spacing; overrides ``base``
    window -- half-width of each refinement window in refined pitches
    workers -- threads for grid evaluation; ``None`` evaluates inline
    """
    ps, qs = _part_stack(P), _part_stack(Q)
    lo = ps.lo - qs.hi
    hi = ps.hi - qs.lo
    if pitch is None:
        h = float((hi - lo).max()) / (base - 1)
    else:
        h = float(pitch)
    counts = [int(math.ceil((hi[d] - lo[d]) / h)) + 1 for d in range(2)]
    xs = lo[0] + h * np.arange(counts[0])
    ys = lo[1] + h * np.arange(counts[1])

    def evaluate(xs, ys):
        if workers and workers > 1 and len(xs) > 1:
            rows = np.array_split(np.arange(len(xs)), min(workers, len(xs)))
            with ThreadPoolExecutor(workers) as pool:
                parts = list(pool.map(lambda r: _overlaps(ps, qs, _grid(xs[r], ys)), rows))
            return _grid(xs, ys), np.concatenate(parts)
        T = _grid(xs, ys)
        return T, _overlaps(ps, qs, T)

    T, values = evaluate(xs, ys)
    k = _best_of(values, T)
    best_t, best_v = T[k], float(values[k])
    history = [best_v]
    for _ in range(levels):
        h /= 10.0
        offsets = h * np.arange(-window, window + 1)
        T, values = evaluate(best_t[0] + offsets, best_t[1] + offsets)
        k = _best_of(values, T)
        if values[k] >= best_v:
            best_t, best_v = T[k], float(values[k])
        history.append(best_v)
    slack = (ps.perimeter + qs.perimeter) * h
    return OracleReport(Point(float(best_t[0]), float(best_t[1])), best_v, h, levels, slack, tuple(history))
