"""Superlevel sets of the overlap function of two convex polygons.

The set ``{t : area(X ∩ (t + Y)) >= alpha}`` is convex (the square root of
the overlap is concave on its support).  Its boundary is traced radially
from an interior centre.  Along any line the overlap is piecewise quadratic
with breakpoints where the line crosses event segments, so each boundary
point is found by bisecting over the breakpoints and then solving the
quadratic of the final piece.  Points where the boundary crosses an event
segment are inserted as well, so kinks of the level curve are kept exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import NoSuchSliceError, PreconditionError, ValidationError
from .geometry import ConvexPolygon, Point, convex_hull
from .overlap import event_segments


@dataclass(frozen=True, eq=False)
class Slice:
    """Inscribed polygonal approximation of an overlap superlevel set.

    Every vertex of ``boundary`` lies on the level curve (up to rounding),
    so by convexity the whole polygon lies inside the superlevel set.
    """

    alpha: float
    boundary: ConvexPolygon
    center: Point
    _tracer: "_LevelTracer" = field(repr=False)

    def sample_boundary(self, count: int, offset: float = 0.0) -> np.ndarray:
        """``count`` points of the exact level curve at equally spaced angles."""
        angles = offset + 2 * math.pi * np.arange(count) / count
        return np.array([self._tracer.boundary_point(a) for a in angles])


class _LevelTracer:
    def __init__(self, X: ConvexPolygon, Y: ConvexPolygon, alpha: float, center: np.ndarray):
        self.X = X.vertices
        self.Y = Y.vertices
        self.alpha = float(alpha)
        self.center = np.asarray(center, dtype=float)
        seg = event_segments(X, Y)
        self.seg_a = seg[:, 0, :].copy()
        self.seg_d = seg[:, 1, :] - seg[:, 0, :]
        self.scale = float(max(np.ptp(self.seg_a, axis=0).max(), 1e-300))
        self.evals = 0

    def f(self, p) -> float:
        self.evals += 1
        return _kernels.clip_area(self.X, self.Y, float(p[0]), float(p[1]))

    def _crossings(self, p0: np.ndarray, u: np.ndarray, lo: float, hi: float) -> np.ndarray:
        """Parameters ``s`` in ``(lo, hi)`` where ``p0 + s u`` meets an event segment."""
        d = self.seg_d
        den = u[0] * d[:, 1] - u[1] * d[:, 0]
        w = self.seg_a - p0
        ok = den != 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]) / den
            v = (w[:, 0] * u[1] - w[:, 1] * u[0]) / den
        ok &= (v >= 0.0) & (v <= 1.0) & (s > lo) & (s < hi)
        return np.unique(s[ok])

    def solve_on_line(self, p0: np.ndarray, u: np.ndarray, lo: float, hi: float,
                      f_lo: float, f_hi: float) -> float:
        """Parameter ``s`` in ``[lo, hi]`` with ``f(p0 + s u) == alpha``.

        Requires ``f_lo - alpha`` and ``f_hi - alpha`` of opposite signs and a
        single crossing in between.
        """
        alpha = self.alpha
        above_lo = f_lo >= alpha
        bps = self._crossings(p0, u, lo, hi)
        # bisection over the breakpoints
        i, j = -1, len(bps)
        while j - i > 1:
            k = (i + j) // 2
            fk = self.f(p0 + bps[k] * u)
            if (fk >= alpha) == above_lo:
                i, lo, f_lo = k, bps[k], fk
            else:
                j, hi, f_hi = k, bps[k], fk
        # on [lo, hi] the overlap restricted to the line is one quadratic
        width = hi - lo
        if width <= 1e-14 * (abs(lo) + abs(hi) + 1e-300):
            return lo if abs(f_lo - alpha) <= abs(f_hi - alpha) else hi
        f_mid = self.f(p0 + (lo + 0.5 * width) * u)
        A = 2.0 * (f_hi - 2.0 * f_mid + f_lo)
        B = f_hi - f_lo - A
        C = f_lo - alpha
        root = _quadratic_root_in_unit(A, B, C)
        if root is not None:
            s = lo + root * width
            fs = self.f(p0 + s * u)
            if abs(fs - alpha) <= 1e-10 * max(alpha, 1e-300):
                return s
        return self._bisect(p0, u, lo, hi, above_lo)

    def _bisect(self, p0, u, lo, hi, above_lo) -> float:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if (self.f(p0 + mid * u) >= self.alpha) == above_lo:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def radius(self, theta: float) -> float:
        u = np.array([math.cos(theta), math.sin(theta)])
        far = self._crossings(self.center, u, 0.0, np.inf)
        if len(far) == 0:
            raise PreconditionError("centre lies outside the support of the overlap")
        hi = float(far[-1]) * (1 + 1e-12) + 1e-300
        return self.solve_on_line(self.center, u, 0.0, hi, self.f(self.center), 0.0)

    def boundary_point(self, theta: float) -> np.ndarray:
        r = self.radius(theta)
        return self.center + r * np.array([math.cos(theta), math.sin(theta)])

    def chord_crossing_points(self, pa: np.ndarray, pb: np.ndarray) -> list:
        """Level-curve points on event segments crossing the chord ``pa pb``."""
        a, d = self.seg_a, self.seg_d
        e = pb - pa
        den = e[0] * d[:, 1] - e[1] * d[:, 0]
        w = a - pa
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * d[:, 1] - w[:, 1] * d[:, 0]) / den
            v = (w[:, 0] * e[1] - w[:, 1] * e[0]) / den
        hit = np.flatnonzero((den != 0.0) & (s > 0.0) & (s < 1.0) & (v >= 0.0) & (v <= 1.0))
        out = []
        c = self.center
        for k in hit:
            dk = d[k]
            off = (c[0] - a[k][0]) * dk[1] - (c[1] - a[k][1]) * dk[0]
            if abs(off) <= 1e-12 * self.scale * math.hypot(dk[0], dk[1]):
                # the segment's line passes through the centre: it is a ray
                sgn = 1.0 if dk[0] * (pa[0] - c[0]) + dk[1] * (pa[1] - c[1]) > 0 else -1.0
                out.append(self.boundary_point(math.atan2(sgn * dk[1], sgn * dk[0])))
                continue
            # the segment's line between the two rays through pa and pb
            ra = _line_param(a[k], d[k], c, pa - c)
            rb = _line_param(a[k], d[k], c, pb - c)
            if ra is None or rb is None:
                continue
            fa = self.f(a[k] + ra * d[k])
            fb = self.f(a[k] + rb * d[k])
            if (fa >= self.alpha) == (fb >= self.alpha):
                continue
            lo, hi, flo, fhi = (ra, rb, fa, fb) if ra < rb else (rb, ra, fb, fa)
            s_k = self.solve_on_line(a[k], d[k], lo, hi, flo, fhi)
            out.append(a[k] + s_k * d[k])
        return out


def _line_param(a, d, c, u):
    """Parameter ``s`` with ``a + s d`` on the ray ``c + r u`` (r > 0)."""
    den = d[0] * u[1] - d[1] * u[0]
    if den == 0.0:
        return None
    w = c - a
    s = (w[0] * u[1] - w[1] * u[0]) / den
    r = (w[0] * d[1] - w[1] * d[0]) / den
    if r <= 0:
        return None
    return s


def _quadratic_root_in_unit(A: float, B: float, C: float):
    """Root of ``A s^2 + B s + C`` in ``[0, 1]`` (the sign-changing one)."""
    tol = 1e-9
    if abs(A) <= 1e-14 * (abs(B) + abs(C) + 1e-300):
        if B == 0.0:
            return None
        s = -C / B
        return min(max(s, 0.0), 1.0) if -tol <= s <= 1 + tol else None
    disc = B * B - 4 * A * C
    if disc < 0:
        if disc > -1e-12 * B * B:
            disc = 0.0
        else:
            return None
    sq = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(sq, B)) if B != 0 else -0.5 * sq
    roots = []
    if q != 0:
        roots.append(C / q)
    roots.append(q / A)
    good = [r for r in roots if -tol <= r <= 1 + tol]
    if not good:
        return None
    return min(max(good[0], 0.0), 1.0)


def _golden_max(f, p0, u, lo, hi, iters=60):
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(p0 + c * u), f(p0 + d * u)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(p0 + d * u)
        else:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(p0 + c * u)
    s = c if fc >= fd else d
    return s, max(fc, fd)


def ascend(X: ConvexPolygon, Y: ConvexPolygon, start, rounds: int = 8):
    """Climb the overlap function from ``start`` by line searches.

    The square root of the overlap is concave on its support, so searches
    along a few fixed directions converge towards the maximum.
    """
    f = lambda p: _kernels.clip_area(X.vertices, Y.vertices, float(p[0]), float(p[1]))
    p = np.asarray(start, dtype=float)
    best = f(p)
    span = float(max(np.ptp(X.vertices, axis=0).max(), np.ptp(Y.vertices, axis=0).max()))
    dirs = [np.array([1.0, 0.0]), np.array([0.0, 1.0]),
            np.array([1.0, 1.0]) / math.sqrt(2), np.array([1.0, -1.0]) / math.sqrt(2)]
    step = 2 * span
    for _ in range(rounds):
        improved = False
        for u in dirs:
            s, v = _golden_max(f, p, u, -step, step)
            if v > best:
                p, best = p + s * u, v
                improved = True
        step *= 0.5
        if not improved and step < 1e-6 * span:
            break
    return p, best


def compute_slice(X: ConvexPolygon, Y: ConvexPolygon, alpha: float, seed=None, *,
                  chord_tol: float | None = None, min_rays: int = 32,
                  exact_breakpoints: bool = True) -> Slice:
    """Convex polygon inscribed in ``{t : area(X ∩ (t + Y)) >= alpha}``.

    Args:
        X, Y: convex polygons.
        alpha: level, must be positive and below the maximum overlap.
        seed: a translation with overlap at least ``alpha``; defaults to the
            result of a short ascent from the difference of centroids.
        chord_tol: maximum distance between a boundary chord and the level
            curve at the chord's mid-angle; defaults to ``1e-4`` times the
            extent of the translation domain.
        min_rays: number of initial equally spaced directions.
        exact_breakpoints: also insert the points where the level curve
            crosses event segments.

    Raises:
        ValidationError: ``alpha`` is not positive.
        PreconditionError: the seed has overlap below ``alpha``.
        NoSuchSliceError: ``alpha`` is not below the maximum overlap.
    """
    if not alpha > 0:
        raise ValidationError(f"slice level must be positive, got {alpha!r}")
    f = lambda p: _kernels.clip_area(X.vertices, Y.vertices, float(p[0]), float(p[1]))
    if seed is None:
        seed = np.asarray(X.centroid) - np.asarray(Y.centroid)
    else:
        seed = np.asarray(seed, dtype=float)
        if f(seed) < alpha:
            raise PreconditionError(f"seed overlap {f(seed)!r} is below the level {alpha!r}")
    center, fc = ascend(X, Y, seed)
    if fc <= alpha:
        raise NoSuchSliceError(f"level {alpha!r} is not below the maximum overlap {fc!r}")
    tracer = _LevelTracer(X, Y, alpha, center)
    if chord_tol is None:
        chord_tol = 1e-4 * tracer.scale
    phase = 0.1234567
    n0 = max(int(min_rays), 8)
    thetas = [phase + 2 * math.pi * k / n0 for k in range(n0)]
    pts = {th: tracer.boundary_point(th) for th in thetas}
    min_gap = 2 * math.pi / 2 ** 18

    def refine(ta, tb, depth=0):
        pa, pb = pts[ta], pts[tb]
        tm = 0.5 * (ta + tb)
        pm = tracer.boundary_point(tm)
        pts[tm] = pm
        e = pb - pa
        L = math.hypot(e[0], e[1])
        dev = abs(e[0] * (pm[1] - pa[1]) - e[1] * (pm[0] - pa[0])) / L if L > 0 else 0.0
        if dev > chord_tol and tb - ta > min_gap:
            refine(ta, tm, depth + 1)
            refine(tm, tb, depth + 1)

    for k in range(n0):
        ta = thetas[k]
        tb = thetas[k + 1] if k + 1 < n0 else thetas[0] + 2 * math.pi
        if k + 1 == n0:
            pts[tb] = pts[thetas[0]]
        refine(ta, tb)
    keys = sorted(k for k in pts if k < phase + 2 * math.pi - 1e-15)
    ring = [pts[k] for k in keys]
    if exact_breakpoints:
        extra = []
        for k in range(len(ring)):
            extra.extend(tracer.chord_crossing_points(ring[k], ring[(k + 1) % len(ring)]))
        ring.extend(extra)
    ring = np.array(ring)
    hull = convex_hull(ring)
    if len(hull) < 3:
        raise NoSuchSliceError(f"level {alpha!r} leaves a degenerate superlevel set")
    return Slice(alpha, ConvexPolygon(hull), Point(float(center[0]), float(center[1])), tracer)
