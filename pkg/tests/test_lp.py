import numpy as np
import pytest
from scipy.optimize import linprog

from polyoverlap.errors import InfeasibleError
from polyoverlap.lp import solve_lp


def random_feasible_lp(rng, d, m):
    x0 = rng.normal(size=d)
    A = rng.normal(size=(m, d))
    b = A @ x0 + rng.uniform(0.1, 1.0, size=m)
    return rng.normal(size=d), A, b


@pytest.mark.parametrize("d", [1, 2, 3])
def test_matches_scipy_on_random_programs(rng, d):
    for _ in range(60):
        c, A, b = random_feasible_lp(rng, d, int(rng.integers(d + 1, 40)))
        bound = 50.0
        ref = linprog(c, A_ub=A, b_ub=b, bounds=[(-bound, bound)] * d, method="highs")
        sol = solve_lp(c, A, b, bound=bound, seed=int(rng.integers(1000)))
        assert sol.value == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
        assert np.all(A @ sol.x <= b + 1e-7)


def test_infeasible_raises():
    A = np.array([[1.0, 0.0], [-1.0, 0.0]])
    b = np.array([-1.0, -1.0])  # x <= -1 and x >= 1
    with pytest.raises(InfeasibleError):
        solve_lp(np.array([1.0, 0.0]), A, b)


def test_seed_reproducible(rng):
    c, A, b = random_feasible_lp(rng, 3, 30)
    assert np.array_equal(solve_lp(c, A, b, seed=7).x, solve_lp(c, A, b, seed=7).x)


def test_unbounded_direction_clipped_by_box():
    sol = solve_lp(np.array([-1.0, 0.0]), np.array([[0.0, 1.0]]), np.array([1.0]), bound=10.0)
    assert sol.x[0] == pytest.approx(10.0)
