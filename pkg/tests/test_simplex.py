"""LP core tests: handcrafted cases plus randomized cross-checks.

Randomized instances are compared against two independent references: the
dense tableau simplex in naive_lp.py and, when installed, scipy's HiGHS
wrapper.  Instances are built around a known interior point so feasibility
is guaranteed by construction.
"""

from __future__ import annotations

import numpy as np
import pytest

from isruplan.simplex import BoundedSimplex

from naive_lp import naive_lp

INF = np.inf


def solve(c, A, senses, b, lb, ub):
    A = np.asarray(A, dtype=float).reshape(len(senses), len(c))
    return BoundedSimplex(A, senses, b, c, lb, ub).solve()


def close(a, b, tol=1e-7):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


# -- handcrafted cases ------------------------------------------------------


def test_min_x_above_three():
    res = solve([1.0], [[1.0]], [">="], [3.0], [0.0], [INF])
    assert res.status == "optimal"
    assert close(res.obj, 3.0)
    assert close(res.x[0], 3.0)


def test_two_variable_max():
    # max 3x + 2y st x + y <= 4, x + 3y <= 6
    res = solve([-3.0, -2.0], [[1, 1], [1, 3]], ["<=", "<="], [4, 6], [0, 0], [INF, INF])
    assert res.status == "optimal"
    assert close(res.obj, -12.0)
    assert np.allclose(res.x, [4.0, 0.0], atol=1e-7)


def test_equality_row():
    res = solve([1.0, 2.0], [[1, 1]], ["="], [5.0], [0, 0], [INF, INF])
    assert res.status == "optimal"
    assert close(res.obj, 5.0)
    assert np.allclose(res.x, [5.0, 0.0], atol=1e-7)


def test_upper_bounds_drive_solution():
    res = solve([-1.0, -1.0], [[1, 1]], ["<="], [10.0], [0, 0], [2.0, 3.0])
    assert res.status == "optimal"
    assert close(res.obj, -5.0)


def test_free_variable():
    res = solve([1.0], [[1.0]], [">="], [-5.0], [-INF], [INF])
    assert res.status == "optimal"
    assert close(res.obj, -5.0)


def test_negative_lower_bounds():
    res = solve([1.0, 1.0], [[1, -1]], ["="], [0.0], [-4.0, -4.0], [4.0, 4.0])
    assert res.status == "optimal"
    assert close(res.obj, -8.0)


def test_infeasible_rows():
    res = solve([1.0], [[1.0], [1.0]], [">=", "<="], [3.0, 1.0], [0.0], [INF])
    assert res.status == "infeasible"


def test_infeasible_equality_vs_bounds():
    res = solve([0.0, 0.0], [[1, 1]], ["="], [5.0], [0, 0], [1.0, 1.0])
    assert res.status == "infeasible"


def test_unbounded():
    res = solve([-1.0], [[1.0]], [">="], [1.0], [0.0], [INF])
    assert res.status == "unbounded"


def test_no_rows_bounded():
    res = solve([-1.0, 2.0], np.zeros((0, 2)), [], [], [0.0, -1.0], [5.0, INF])
    assert res.status == "optimal"
    assert close(res.obj, -7.0)


def test_no_rows_unbounded():
    res = solve([-1.0], np.zeros((0, 1)), [], [], [0.0], [INF])
    assert res.status == "unbounded"


def test_degenerate_cycling_example():
    # classic cycling instance for textbook pricing; must still terminate
    c = [-0.75, 150.0, -0.02, 6.0]
    A = [
        [0.25, -60.0, -0.04, 9.0],
        [0.5, -90.0, -0.02, 3.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
    res = solve(c, A, ["<=", "<=", "<="], [0.0, 0.0, 1.0], [0.0] * 4, [INF] * 4)
    assert res.status == "optimal"
    assert close(res.obj, -0.05)


def test_dual_ready_cold_start():
    # nonnegative costs with >= rows start dual feasible at the slack basis
    c = [2.0, 3.0]
    A = [[1.0, 1.0], [1.0, -1.0]]
    res = solve(c, A, [">=", ">="], [10.0, -5.0], [0.0, 0.0], [INF, INF])
    assert res.status == "optimal"
    st, obj, _ = naive_lp(c, A, [">=", ">="], [10.0, -5.0], [0.0, 0.0], [INF, INF])
    assert st == "optimal" and close(res.obj, obj)


def test_huge_cost_scaling():
    c = [1.0e9, 2.0e9, 5.0]
    A = [[1.0, 1.0, 1.0]]
    res = solve(c, A, [">="], [3.0], [0.0] * 3, [INF] * 3)
    assert res.status == "optimal"
    assert close(res.obj, 15.0)


# -- randomized cross-checks ------------------------------------------------


def random_instance(rng, allow_inf=False, degenerate=False):
    n = int(rng.integers(1, 21))
    m = int(rng.integers(0, 21))
    A = np.round(rng.uniform(-5, 5, size=(m, n)), 3)
    A *= rng.random((m, n)) < 0.7
    x0 = np.round(rng.uniform(-3, 3, n), 3)
    lb = np.round(x0 - rng.uniform(0.1, 4, n), 3)
    ub = np.round(x0 + rng.uniform(0.1, 4, n), 3)
    if allow_inf:
        drop_ub = rng.random(n) < 0.2
        ub[drop_ub] = INF
        drop_lb = rng.random(n) < 0.1
        lb[drop_lb] = -INF
    senses = [("<=", ">=", "=")[k] for k in rng.integers(0, 3, m)]
    margin = rng.uniform(0.1, 2.0, m)
    if degenerate:
        margin[rng.random(m) < 0.5] = 0.0
    b = np.empty(m)
    for i in range(m):
        ax = float(A[i] @ x0)
        if senses[i] == "<=":
            b[i] = ax + margin[i]
        elif senses[i] == ">=":
            b[i] = ax - margin[i]
        else:
            b[i] = ax
    c = np.round(rng.uniform(-4, 4, n), 3)
    return c, A, senses, b, lb, ub


def test_random_vs_naive_reference():
    rng = np.random.default_rng(20240311)
    for k in range(40):
        c, A, senses, b, lb, ub = random_instance(rng)
        res = solve(c, A, senses, b, lb, ub)
        st, obj, _ = naive_lp(c, A, senses, b, lb, ub)
        assert st == "optimal", f"instance {k}: oracle says {st}"
        assert res.status == "optimal", f"instance {k}: solver says {res.status}"
        assert close(res.obj, obj), f"instance {k}: {res.obj} vs {obj}"


def test_random_degenerate_vs_naive_reference():
    rng = np.random.default_rng(77001)
    for k in range(25):
        c, A, senses, b, lb, ub = random_instance(rng, degenerate=True)
        res = solve(c, A, senses, b, lb, ub)
        st, obj, _ = naive_lp(c, A, senses, b, lb, ub)
        assert st == "optimal"
        assert res.status == "optimal", f"instance {k}: solver says {res.status}"
        assert close(res.obj, obj), f"instance {k}: {res.obj} vs {obj}"


def test_random_vs_scipy():
    scipy_opt = pytest.importorskip("scipy.optimize")
    rng = np.random.default_rng(555)
    for k in range(30):
        c, A, senses, b, lb, ub = random_instance(rng, allow_inf=True)
        res = solve(c, A, senses, b, lb, ub)
        A_ub, b_ub, A_eq, b_eq = [], [], [], []
        for i, s in enumerate(senses):
            if s == "<=":
                A_ub.append(A[i])
                b_ub.append(b[i])
            elif s == ">=":
                A_ub.append(-A[i])
                b_ub.append(-b[i])
            else:
                A_eq.append(A[i])
                b_eq.append(b[i])
        ref = scipy_opt.linprog(
            c,
            A_ub=np.array(A_ub) if A_ub else None,
            b_ub=np.array(b_ub) if b_ub else None,
            A_eq=np.array(A_eq) if A_eq else None,
            b_eq=np.array(b_eq) if b_eq else None,
            bounds=list(zip(lb, ub)),
            method="highs",
        )
        if ref.status == 3:
            assert res.status == "unbounded", f"instance {k}: {res.status}"
        elif ref.status == 0:
            assert res.status == "optimal", f"instance {k}: {res.status}"
            assert close(res.obj, ref.fun, 1e-6), f"instance {k}: {res.obj} vs {ref.fun}"
        elif ref.status == 2:
            assert res.status == "infeasible", f"instance {k}: {res.status}"


def test_warm_resolve_matches_cold():
    rng = np.random.default_rng(9042)
    checked = 0
    for _ in range(30):
        c, A, senses, b, lb, ub = random_instance(rng)
        sx = BoundedSimplex(np.asarray(A, float).reshape(len(senses), len(c)), senses, b, c, lb, ub)
        base = sx.solve()
        if base.status != "optimal" or sx.m == 0:
            continue
        # branch-style tightening around the midpoint of one variable
        j = int(rng.integers(0, len(c)))
        mid = 0.5 * (lb[j] + ub[j])
        for side in ("down", "up"):
            lb2, ub2 = lb.copy(), ub.copy()
            if side == "down":
                ub2[j] = mid
            else:
                lb2[j] = mid
            warm = sx.resolve(lb2, ub2, base.basis, base.vstat)
            st, obj, _ = naive_lp(c, A, senses, b, lb2, ub2)
            assert warm.status == st, f"{warm.status} vs {st}"
            if st == "optimal":
                assert close(warm.obj, obj), f"{warm.obj} vs {obj}"
                checked += 1
    assert checked >= 20


def test_warm_resolve_detects_infeasible():
    # fixing both variables below the row requirement must come back infeasible
    c = [1.0, 1.0]
    A = np.array([[1.0, 1.0]])
    sx = BoundedSimplex(A, [">="], [4.0], c, [0.0, 0.0], [10.0, 10.0])
    base = sx.solve()
    assert base.status == "optimal"
    res = sx.resolve([0.0, 0.0], [1.0, 1.0], base.basis, base.vstat)
    assert res.status == "infeasible"


def test_resolve_after_relaxing_bounds():
    c = [-1.0, -2.0]
    A = np.array([[1.0, 1.0]])
    sx = BoundedSimplex(A, ["<="], [8.0], c, [0.0, 0.0], [3.0, 3.0])
    base = sx.solve()
    assert base.status == "optimal" and close(base.obj, -9.0)
    res = sx.resolve([0.0, 0.0], [3.0, 6.0], base.basis, base.vstat)
    assert res.status == "optimal"
    assert close(res.obj, -14.0)
    assert np.allclose(res.x, [2.0, 6.0], atol=1e-7)
