"""Small-dimensional linear programming by randomized incremental construction.

Solves ``minimize c @ x  subject to  A @ x <= b`` for a handful of variables
(two or three in this package).  Constraints are processed in a seeded random
order; whenever the current optimum violates a constraint, the problem is
restricted to that constraint's hyperplane and solved one dimension lower.
An explicit box ``|x_i| <= bound`` keeps every subproblem bounded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    value: float


def _violation_tol(A: np.ndarray, b: np.ndarray, x: np.ndarray, rel: float) -> np.ndarray:
    return rel * (1.0 + np.abs(b) + np.abs(A) @ np.abs(x))


def _solve_1d(c: float, a: np.ndarray, b: np.ndarray, rel: float) -> float:
    lo, hi = -np.inf, np.inf
    scale = 1.0 + np.abs(b)
    small = np.abs(a) <= 1e-14 * (1.0 + np.abs(a).max(initial=0.0))
    if np.any(b[small] < -rel * scale[small]):
        raise InfeasibleError("linear program is infeasible")
    pos = (a > 0) & ~small
    neg = (a < 0) & ~small
    if pos.any():
        hi = float(np.min(b[pos] / a[pos]))
    if neg.any():
        lo = float(np.max(b[neg] / a[neg]))
    if lo > hi:
        if lo - hi > rel * (1.0 + abs(lo) + abs(hi)) * 1e3:
            raise InfeasibleError("linear program is infeasible")
        return 0.5 * (lo + hi)
    if c > 0:
        return lo
    if c < 0:
        return hi
    return lo if np.isfinite(lo) else (hi if np.isfinite(hi) else 0.0)


def _solve(c: np.ndarray, A: np.ndarray, b: np.ndarray, bound: float, rel: float) -> np.ndarray:
    d = len(c)
    # the box is part of every level so the start point is a box vertex
    box_A = np.vstack([np.eye(d), -np.eye(d)])
    box_b = np.full(2 * d, bound)
    if d == 1:
        return np.array([_solve_1d(float(c[0]), np.concatenate([A[:, 0], box_A[:, 0]]),
                                   np.concatenate([b, box_b]), rel)])
    x = np.where(c > 0, -bound, bound).astype(float)
    x[c == 0] = -bound
    m = len(b)
    start = 0
    while start < m:
        slack = A[start:] @ x - b[start:]
        tol = _violation_tol(A[start:], b[start:], x, rel)
        bad = np.flatnonzero(slack > tol)
        if len(bad) == 0:
            break
        k = start + int(bad[0])
        row = A[k]
        p = int(np.argmax(np.abs(row)))
        if abs(row[p]) == 0.0:
            raise InfeasibleError("linear program is infeasible")
        keep = [j for j in range(d) if j != p]
        # x_p = (b_k - row[keep] @ y) / row[p]
        coef = -row[keep] / row[p]
        const = b[k] / row[p]
        prev_A = np.vstack([A[:k], box_A])
        prev_b = np.concatenate([b[:k], box_b])
        sub_A = prev_A[:, keep] + np.outer(prev_A[:, p], coef)
        sub_b = prev_b - prev_A[:, p] * const
        sub_c = c[keep] + c[p] * coef
        y = _solve(sub_c, sub_A, sub_b, bound, rel)
        x = np.empty(d)
        x[keep] = y
        x[p] = const + coef @ y
        start = k + 1
    return x


def solve_lp(c, A, b, *, bound: float = 1e7, seed: int = 0, rel_tol: float = 1e-10) -> LPSolution:
    """Minimise ``c @ x`` subject to ``A @ x <= b`` and ``|x_i| <= bound``.

    Args:
        c: objective, shape ``(d,)``.
        A: constraint matrix, shape ``(m, d)``.
        b: right-hand sides, shape ``(m,)``.
        bound: half-width of the bounding box added to keep the problem bounded.
        seed: seed of the random constraint order; results are reproducible.
        rel_tol: relative feasibility tolerance.

    Raises:
        InfeasibleError: when no point satisfies the constraints.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(-1, len(c))
    b = np.asarray(b, dtype=float).reshape(-1)
    order = np.random.default_rng(seed).permutation(len(b))
    x = _solve(c, A[order], b[order], float(bound), rel_tol)
    return LPSolution(x=x, value=float(c @ x))
