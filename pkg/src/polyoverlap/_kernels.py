"""Compiled inner loops for the hot paths (convex clipping and area).

All kernels take ``(n, 2)`` float64 arrays holding counter-clockwise convex
polygons.  They are compiled lazily by numba and cached on disk.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def polygon_area(poly):
    n = poly.shape[0]
    s = 0.0
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        s += poly[i, 0] * poly[j, 1] - poly[j, 0] * poly[i, 1]
    return 0.5 * s


@njit(cache=True)
def _clip_into(X, Y, tx, ty, buf_a, buf_b):
    """Clip ``Y + t`` by the half-planes of ``X``; return (buffer, count)."""
    m = Y.shape[0]
    for k in range(m):
        buf_a[k, 0] = Y[k, 0] + tx
        buf_a[k, 1] = Y[k, 1] + ty
    cnt = m
    src = buf_a
    dst = buf_b
    n = X.shape[0]
    for i in range(n):
        if cnt == 0:
            break
        ax = X[i, 0]
        ay = X[i, 1]
        j = i + 1 if i + 1 < n else 0
        ex = X[j, 0] - ax
        ey = X[j, 1] - ay
        out = 0
        px = src[cnt - 1, 0]
        py = src[cnt - 1, 1]
        pd = ex * (py - ay) - ey * (px - ax)
        for k in range(cnt):
            qx = src[k, 0]
            qy = src[k, 1]
            qd = ex * (qy - ay) - ey * (qx - ax)
            if qd >= 0.0:
                if pd < 0.0:
                    s = pd / (pd - qd)
                    dst[out, 0] = px + s * (qx - px)
                    dst[out, 1] = py + s * (qy - py)
                    out += 1
                dst[out, 0] = qx
                dst[out, 1] = qy
                out += 1
            elif pd >= 0.0:
                s = pd / (pd - qd)
                dst[out, 0] = px + s * (qx - px)
                dst[out, 1] = py + s * (qy - py)
                out += 1
            px = qx
            py = qy
            pd = qd
        tmp = src
        src = dst
        dst = tmp
        cnt = out
    return src, cnt


@njit(cache=True)
def _area_of(buf, cnt):
    s = 0.0
    for i in range(cnt):
        j = i + 1 if i + 1 < cnt else 0
        s += buf[i, 0] * buf[j, 1] - buf[j, 0] * buf[i, 1]
    return 0.5 * s


@njit(cache=True)
def clip_area(X, Y, tx, ty):
    """Area of ``X ∩ (Y + (tx, ty))`` for convex ccw polygons."""
    size = X.shape[0] + Y.shape[0] + 2
    buf_a = np.empty((size, 2))
    buf_b = np.empty((size, 2))
    out, cnt = _clip_into(X, Y, tx, ty, buf_a, buf_b)
    if cnt < 3:
        return 0.0
    a = _area_of(out, cnt)
    return a if a > 0.0 else 0.0


@njit(cache=True)
def clip_area_many(X, Y, T):
    """Vector of ``clip_area(X, Y, *T[k])`` over the rows of ``T``."""
    size = X.shape[0] + Y.shape[0] + 2
    buf_a = np.empty((size, 2))
    buf_b = np.empty((size, 2))
    res = np.empty(T.shape[0])
    for k in range(T.shape[0]):
        out, cnt = _clip_into(X, Y, T[k, 0], T[k, 1], buf_a, buf_b)
        if cnt < 3:
            res[k] = 0.0
        else:
            a = _area_of(out, cnt)
            res[k] = a if a > 0.0 else 0.0
    return res


@njit(cache=True)
def clip_polygon(X, Y, tx, ty):
    """Vertices of ``X ∩ (Y + t)`` (possibly fewer than three rows)."""
    size = X.shape[0] + Y.shape[0] + 2
    buf_a = np.empty((size, 2))
    buf_b = np.empty((size, 2))
    out, cnt = _clip_into(X, Y, tx, ty, buf_a, buf_b)
    return out[:cnt].copy()


@njit(cache=True, nogil=True)
def sum_clip_area_many(xs_flat, x_off, ys_flat, y_off, T):
    """Sum over all part pairs of the clipped areas, for every row of ``T``.

    ``xs_flat`` stacks the vertices of all parts of one polygon and ``x_off``
    holds the prefix offsets (length ``parts + 1``); likewise for ``ys``.
    """
    res = np.zeros(T.shape[0])
    nx = x_off.shape[0] - 1
    ny = y_off.shape[0] - 1
    maxx = 0
    for i in range(nx):
        maxx = max(maxx, x_off[i + 1] - x_off[i])
    maxy = 0
    for j in range(ny):
        maxy = max(maxy, y_off[j + 1] - y_off[j])
    size = maxx + maxy + 2
    buf_a = np.empty((size, 2))
    buf_b = np.empty((size, 2))
    for i in range(nx):
        X = xs_flat[x_off[i]:x_off[i + 1]]
        for j in range(ny):
            Y = ys_flat[y_off[j]:y_off[j + 1]]
            for k in range(T.shape[0]):
                out, cnt = _clip_into(X, Y, T[k, 0], T[k, 1], buf_a, buf_b)
                if cnt >= 3:
                    a = _area_of(out, cnt)
                    if a > 0.0:
                        res[k] += a
    return res


@njit(cache=True)
def count_in_convex(points, poly, tx, ty, slack):
    """Number of ``points`` inside ``poly + t`` (closed, with ``slack``)."""
    n = poly.shape[0]
    total = 0
    for k in range(points.shape[0]):
        px = points[k, 0] - tx
        py = points[k, 1] - ty
        inside = True
        for i in range(n):
            j = i + 1 if i + 1 < n else 0
            ex = poly[j, 0] - poly[i, 0]
            ey = poly[j, 1] - poly[i, 1]
            d = ex * (py - poly[i, 1]) - ey * (px - poly[i, 0])
            if d < -slack * np.sqrt(ex * ex + ey * ey):
                inside = False
                break
        if inside:
            total += 1
    return total


@njit(cache=True)
def count_in_convex_many(points, poly, T, slack):
    res = np.empty(T.shape[0], dtype=np.int64)
    for k in range(T.shape[0]):
        res[k] = count_in_convex(points, poly, T[k, 0], T[k, 1], slack)
    return res


@njit(cache=True)
def distance_below(points, poly, tol):
    """True when some point lies within ``tol`` of an edge of ``poly``."""
    n = poly.shape[0]
    tol2 = tol * tol
    for k in range(points.shape[0]):
        px = points[k, 0]
        py = points[k, 1]
        for i in range(n):
            j = i + 1 if i + 1 < n else 0
            ax = poly[i, 0]
            ay = poly[i, 1]
            ex = poly[j, 0] - ax
            ey = poly[j, 1] - ay
            L2 = ex * ex + ey * ey
            s = ((px - ax) * ex + (py - ay) * ey) / L2
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
            dx = px - (ax + s * ex)
            dy = py - (ay + s * ey)
            if dx * dx + dy * dy <= tol2:
                return True
    return False


@njit(cache=True)
def face_quadratic_coefficients(X, Y, tx, ty, merge_tol):
    """Coefficients ``(a, b, c, d, e, g)`` of the overlap quadratic at ``t0``.

    Clips ``Y + t0`` by ``X`` while tagging every vertex with its two
    supporting lines (edge ``i`` of X is line ``i``, edge ``j`` of Y is line
    ``nx + j``).  Each vertex is affine in ``t``; the shoelace sum of the
    affine vertices gives the quadratic.  Returns ``(coefficients, status)``
    with status 0 on success, 1 for an empty overlap and 2 when two
    parallel edges meet at a vertex.
    """
    nx = X.shape[0]
    ny = Y.shape[0]
    size = nx + ny + 2
    pa = np.empty((size, 2))
    pb = np.empty((size, 2))
    la = np.empty((size, 2), dtype=np.int64)
    lb = np.empty((size, 2), dtype=np.int64)
    for k in range(ny):
        pa[k, 0] = Y[k, 0] + tx
        pa[k, 1] = Y[k, 1] + ty
        la[k, 0] = nx + (k - 1 if k > 0 else ny - 1)
        la[k, 1] = nx + k
    cnt = ny
    src, dst, lsrc, ldst = pa, pb, la, lb
    for i in range(nx):
        if cnt == 0:
            break
        ax = X[i, 0]
        ay = X[i, 1]
        j = i + 1 if i + 1 < nx else 0
        ex = X[j, 0] - ax
        ey = X[j, 1] - ay
        out = 0
        px = src[cnt - 1, 0]
        py = src[cnt - 1, 1]
        pd = ex * (py - ay) - ey * (px - ax)
        for k in range(cnt):
            qx = src[k, 0]
            qy = src[k, 1]
            qd = ex * (qy - ay) - ey * (qx - ax)
            edge_line = lsrc[k, 0]
            if qd >= 0.0:
                if pd < 0.0:
                    s = pd / (pd - qd)
                    dst[out, 0] = px + s * (qx - px)
                    dst[out, 1] = py + s * (qy - py)
                    ldst[out, 0] = i
                    ldst[out, 1] = edge_line
                    out += 1
                dst[out, 0] = qx
                dst[out, 1] = qy
                ldst[out, 0] = lsrc[k, 0]
                ldst[out, 1] = lsrc[k, 1]
                out += 1
            elif pd >= 0.0:
                s = pd / (pd - qd)
                dst[out, 0] = px + s * (qx - px)
                dst[out, 1] = py + s * (qy - py)
                ldst[out, 0] = edge_line
                ldst[out, 1] = i
                out += 1
            px = qx
            py = qy
            pd = qd
        src, dst = dst, src
        lsrc, ldst = ldst, lsrc
        cnt = out
    coef = np.zeros(6)
    if cnt < 3:
        return coef, 1
    # drop vertices that coincide with their predecessor
    keep = np.empty(cnt, dtype=np.int64)
    m = 0
    for k in range(cnt):
        if m > 0:
            q = keep[m - 1]
            if abs(src[k, 0] - src[q, 0]) <= merge_tol and abs(src[k, 1] - src[q, 1]) <= merge_tol:
                continue
        keep[m] = k
        m += 1
    while m > 1:
        q = keep[m - 1]
        r = keep[0]
        if abs(src[q, 0] - src[r, 0]) <= merge_tol and abs(src[q, 1] - src[r, 1]) <= merge_tol:
            m -= 1
        else:
            break
    if m < 3:
        return coef, 1
    # affine form p(t) = c + J t of every kept vertex
    C = np.empty((m, 2))
    J = np.zeros((m, 2, 2))
    for idx in range(m):
        k = keep[idx]
        l1 = lsrc[k, 0]
        l2 = lsrc[k, 1]
        if l1 < nx and l2 < nx:
            C[idx, 0] = src[k, 0]
            C[idx, 1] = src[k, 1]
        elif l1 >= nx and l2 >= nx:
            C[idx, 0] = src[k, 0] - tx
            C[idx, 1] = src[k, 1] - ty
            J[idx, 0, 0] = 1.0
            J[idx, 1, 1] = 1.0
        else:
            xi = l1 if l1 < nx else l2
            yj = (l2 if l1 < nx else l1) - nx
            xn = xi + 1 if xi + 1 < nx else 0
            yn = yj + 1 if yj + 1 < ny else 0
            a0 = X[xi, 0]
            a1 = X[xi, 1]
            d0 = X[xn, 0] - a0
            d1 = X[xn, 1] - a1
            b0 = Y[yj, 0]
            b1 = Y[yj, 1]
            e0 = Y[yn, 0] - b0
            e1 = Y[yn, 1] - b1
            den = d0 * e1 - d1 * e0
            if den == 0.0:
                return coef, 2
            s0 = ((b0 - a0) * e1 - (b1 - a1) * e0) / den
            C[idx, 0] = a0 + d0 * s0
            C[idx, 1] = a1 + d1 * s0
            J[idx, 0, 0] = d0 * e1 / den
            J[idx, 0, 1] = -d0 * e0 / den
            J[idx, 1, 0] = d1 * e1 / den
            J[idx, 1, 1] = -d1 * e0 / den
    # shoelace: sum over k of cross(p_k, p_next) with cross(u, v) = u0 v1 - u1 v0
    A00 = 0.0
    A01 = 0.0
    A10 = 0.0
    A11 = 0.0
    L0 = 0.0
    L1 = 0.0
    G = 0.0
    for k in range(m):
        n = k + 1 if k + 1 < m else 0
        c0 = C[k, 0]
        c1 = C[k, 1]
        g0 = C[n, 0]
        g1 = C[n, 1]
        G += c0 * g1 - c1 * g0
        # linear part: cross(c_k, J_n t) + cross(J_k t, c_n)
        L0 += c0 * J[n, 1, 0] - c1 * J[n, 0, 0] + J[k, 0, 0] * g1 - J[k, 1, 0] * g0
        L1 += c0 * J[n, 1, 1] - c1 * J[n, 0, 1] + J[k, 0, 1] * g1 - J[k, 1, 1] * g0
        # quadratic part: cross(J_k t, J_n t) = t^T M t
        A00 += J[k, 0, 0] * J[n, 1, 0] - J[k, 1, 0] * J[n, 0, 0]
        A01 += J[k, 0, 0] * J[n, 1, 1] - J[k, 1, 0] * J[n, 0, 1]
        A10 += J[k, 0, 1] * J[n, 1, 0] - J[k, 1, 1] * J[n, 0, 0]
        A11 += J[k, 0, 1] * J[n, 1, 1] - J[k, 1, 1] * J[n, 0, 1]
    coef[0] = 0.5 * A00
    coef[1] = 0.5 * (A01 + A10)
    coef[2] = 0.5 * A11
    coef[3] = 0.5 * L0
    coef[4] = 0.5 * L1
    coef[5] = 0.5 * G
    return coef, 0
