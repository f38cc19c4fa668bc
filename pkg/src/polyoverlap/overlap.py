"""The overlap function of two convex polygons and its local quadratic form.

For convex ``X`` and ``Y`` the map ``t -> area(X ∩ (t + Y))`` is piecewise
quadratic.  The pieces are the faces of the arrangement of the event
segments: the edges of the polygons ``v - Y`` (``v`` a vertex of ``X``) and
``X - w`` (``w`` a vertex of ``Y``).  Inside one face every vertex of the
overlap polygon moves affinely with ``t``, so the shoelace formula yields the
quadratic exactly.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DegenerateConfigurationError
from .geometry import _CANON_REL, ConvexPolygon, TAU, _extent, overlap_area, overlap_area_many
from .quadratic import Quadratic2

__all__ = [
    "overlap_area",
    "overlap_area_many",
    "face_quadratic",
    "event_segments",
    "event_polygons",
    "on_event_boundary",
]

def event_polygons(X: ConvexPolygon, Y: ConvexPolygon) -> list:
    """``[v - Y for v in X] + [X - w for w in Y]``."""
    negY = Y.reflected()
    out = [negY.translated(v) for v in X.vertices]
    out += [X.translated(-w) for w in Y.vertices]
    return out


def event_segments(X: ConvexPolygon, Y: ConvexPolygon) -> np.ndarray:
    """All edges of the event polygons as an ``(S, 2, 2)`` array.

    Segment ``v - e'`` for every vertex ``v`` of X and edge ``e'`` of Y,
    then ``e - w`` for every edge ``e`` of X and vertex ``w`` of Y.
    """
    xv, yv = X.vertices, Y.vertices
    ye = np.stack([yv, np.roll(yv, -1, axis=0)], axis=1)  # (m, 2, 2)
    xe = np.stack([xv, np.roll(xv, -1, axis=0)], axis=1)  # (n, 2, 2)
    first = xv[:, None, None, :] - ye[None, :, :, :]
    second = xe[:, None, :, :] - yv[None, :, None, :]
    return np.concatenate([first.reshape(-1, 2, 2), second.reshape(-1, 2, 2)], axis=0)


def on_event_boundary(X: ConvexPolygon, Y: ConvexPolygon, t, tol: float | None = None) -> bool:
    """True when ``t`` lies within ``tol`` of an event segment of ``(X, Y)``.

    Equivalently, a vertex of one of ``X``, ``t + Y`` lies on the boundary of
    the other.
    """
    t = np.asarray(t, dtype=float)
    if tol is None:
        tol = _boundary_tolerance(X, Y, t)
    ty = np.ascontiguousarray(Y.vertices + t)
    return (_kernels.distance_below(X.vertices, ty, tol)
            or _kernels.distance_below(ty, X.vertices, tol))


def _boundary_tolerance(X, Y, t) -> float:
    scale = max(np.abs(X.vertices).max(), np.abs(Y.vertices).max(), float(np.abs(t).max()), 1.0)
    return 1e-11 * scale


def face_quadratic(X: ConvexPolygon, Y: ConvexPolygon, t0, tol: float | None = None) -> Quadratic2:
    """Closed form of ``t -> area(X ∩ (t + Y))`` on the face containing ``t0``.

    Every vertex of the overlap polygon is the meet of two supporting lines
    and is therefore affine in ``t``; the shoelace formula over these affine
    vertices is the quadratic.

    Args:
        X, Y: convex polygons.
        t0: a translation in the interior of a face of the event arrangement.
        tol: distance below which ``t0`` is considered to lie on an event
            segment; defaults to ``1e-11`` times the coordinate scale.

    Raises:
        DegenerateConfigurationError: ``t0`` lies on an event segment.
    """
    t0 = np.asarray(t0, dtype=float)
    if on_event_boundary(X, Y, t0, tol):
        raise DegenerateConfigurationError(
            f"translation ({t0[0]!r}, {t0[1]!r}) lies on an event segment")
    merge_tol = _CANON_REL * min(_extent(X.vertices), _extent(Y.vertices))
    coef, status = _kernels.face_quadratic_coefficients(X.vertices, Y.vertices, float(t0[0]),
                                                       float(t0[1]), merge_tol)
    if status == 2:
        raise DegenerateConfigurationError("parallel edges meet at an overlap vertex")
    if status == 1:
        return Quadratic2()
    a, b, c, d, e, g = (float(v) for v in coef)
    return Quadratic2(a=a, b=b, c=c, d=d, e=e, g=g)


def overlap_tolerance() -> float:
    return TAU
