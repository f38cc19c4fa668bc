"""Filtered exact orientation predicate.

The floating point determinant is trusted when its magnitude exceeds a
forward error bound; otherwise the sign is recomputed with rationals.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_ERRBOUND = 3.3306690738754716e-16  # (3 + 16 u) u for IEEE doubles


def orient_exact(ax, ay, bx, by, cx, cy) -> int:
    """Sign of ``(b - a) x (c - a)`` computed with rationals."""
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (ax, ay, bx, by, cx, cy))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def orient(a, b, c) -> int:
    """Sign of the turn ``a -> b -> c``: 1 left, -1 right, 0 collinear."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    cx, cy = float(c[0]), float(c[1])
    left = (ax - cx) * (by - cy)
    right = (ay - cy) * (bx - cx)
    det = left - right
    bound = _ERRBOUND * (abs(left) + abs(right))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    return orient_exact(ax, ay, bx, by, cx, cy)


def orient_many(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorised :func:`orient` over broadcastable ``(..., 2)`` arrays."""
    a, b, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float), np.asarray(c, float))
    left = (a[..., 0] - c[..., 0]) * (b[..., 1] - c[..., 1])
    right = (a[..., 1] - c[..., 1]) * (b[..., 0] - c[..., 0])
    det = left - right
    bound = _ERRBOUND * (np.abs(left) + np.abs(right))
    out = np.where(det > bound, 1, np.where(-det > bound, -1, 0)).astype(np.int8)
    unsure = np.flatnonzero((np.abs(det) <= bound).ravel())
    if len(unsure):
        flat = out.reshape(-1)
        A = a.reshape(-1, 2)
        B = b.reshape(-1, 2)
        C = c.reshape(-1, 2)
        for k in unsure:
            flat[k] = orient_exact(A[k, 0], A[k, 1], B[k, 0], B[k, 1], C[k, 0], C[k, 1])
        out = flat.reshape(out.shape)
    return out


def lex_less(p, q) -> bool:
    """Lexicographic order on ``(x, y)``; the symbolic shear used for sweeps."""
    return (p[0], p[1]) < (q[0], q[1])
