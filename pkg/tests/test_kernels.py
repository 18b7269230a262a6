"""Backend equivalence: the compiled kernels must match the numpy reference.

Every test drives both implementations with identical inputs and requires
identical decisions (indices, steps).  Random instances are seeded, and tie
cases are constructed exactly so both sides see the same degenerate data.
"""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from isruplan import _kernels_py as kpy

kc = pytest.importorskip("isruplan._kernels", reason="compiled kernels not built")

STATUSES = np.array([kpy.NB_LOWER, kpy.NB_UPPER, kpy.BASIC, kpy.NB_FREE], dtype=np.int8)


def random_pricing_instance(rng, n):
    d = rng.standard_normal(n) * rng.choice([1e-9, 1e-4, 1.0, 1e3], size=n)
    vstat = rng.choice(STATUSES, size=n).astype(np.int8)
    return d, vstat


def test_backend_labels_differ():
    assert kpy.BACKEND == "python"
    assert kc.BACKEND == "compiled"
    assert (kpy.NB_LOWER, kpy.NB_UPPER, kpy.BASIC, kpy.NB_FREE) == (
        kc.NB_LOWER,
        kc.NB_UPPER,
        kc.BASIC,
        kc.NB_FREE,
    )


def test_update_binv_matches():
    rng = np.random.default_rng(7)
    for m in (1, 2, 3, 8, 40):
        for _ in range(20):
            binv_a = rng.standard_normal((m, m))
            binv_b = binv_a.copy()
            alpha = rng.standard_normal(m)
            r = int(rng.integers(m))
            alpha[r] = rng.choice([-1.0, 1.0]) * (0.1 + abs(alpha[r]))
            kpy.update_binv(binv_a, alpha, r)
            kc.update_binv(binv_b, alpha, r)
            assert np.array_equal(binv_a, binv_b)


def test_pricing_matches():
    rng = np.random.default_rng(11)
    for n in (1, 2, 5, 50, 400):
        for _ in range(40):
            d, vstat = random_pricing_instance(rng, n)
            for tol in (1e-7, 0.5):
                assert kpy.price_dantzig(d, vstat, tol) == kc.price_dantzig(d, vstat, tol)
                assert kpy.price_bland(d, vstat, tol) == kc.price_bland(d, vstat, tol)


def test_pricing_all_basic_returns_none():
    d = np.array([5.0, -3.0])
    vstat = np.array([kpy.BASIC, kpy.BASIC], dtype=np.int8)
    assert kpy.price_dantzig(d, vstat, 1e-7) == kc.price_dantzig(d, vstat, 1e-7) == -1
    assert kpy.price_bland(d, vstat, 1e-7) == kc.price_bland(d, vstat, 1e-7) == -1


def test_pricing_tie_breaks_match():
    # identical violations: both backends must keep the first occurrence
    d = np.array([-2.0, -2.0, -2.0])
    vstat = np.zeros(3, dtype=np.int8)
    assert kpy.price_dantzig(d, vstat, 1e-7) == kc.price_dantzig(d, vstat, 1e-7) == 0


def random_ratio_instance(rng, m):
    lb = rng.standard_normal(m) * 10
    width = rng.exponential(5.0, size=m)
    width[rng.random(m) < 0.2] = np.inf
    ub = lb + width
    xb = np.where(np.isinf(ub), lb + rng.exponential(2.0, size=m), lb + rng.random(m) * np.minimum(width, 1e6))
    alpha = rng.standard_normal(m)
    alpha[rng.random(m) < 0.3] = 0.0
    basis = rng.permutation(m + 17)[:m].astype(np.int64)
    return xb, alpha, lb, ub, basis


def test_primal_ratio_matches():
    rng = np.random.default_rng(23)
    for m in (1, 2, 6, 60):
        for _ in range(60):
            xb, alpha, lb, ub, basis = random_ratio_instance(rng, m)
            sigma = float(rng.choice([-1.0, 1.0]))
            cap = float(rng.choice([np.inf, 0.0, 2.5, 1e4]))
            for bland in (False, True):
                got_py = kpy.primal_ratio_test(xb, alpha, lb, ub, sigma, cap, 1e-9, bland, basis)
                got_c = kc.primal_ratio_test(xb, alpha, lb, ub, sigma, cap, 1e-9, bland, basis)
                assert got_py[0] == got_c[0]
                assert got_py[1] == got_c[1]


def test_primal_ratio_tie_handling_matches():
    # rows 0 and 1 block at exactly theta = 0.5; the policies disagree on purpose
    xb = np.array([0.0, 0.0, 5.0])
    lb = np.array([-0.25, -1.0, 0.0])
    ub = np.array([np.inf, np.inf, np.inf])
    alpha = np.array([0.5, 2.0, 0.0])
    basis = np.array([3, 9, 1], dtype=np.int64)
    for bland, expect in ((False, 1), (True, 0)):
        got_py = kpy.primal_ratio_test(xb, alpha, lb, ub, 1.0, np.inf, 1e-9, bland, basis)
        got_c = kc.primal_ratio_test(xb, alpha, lb, ub, 1.0, np.inf, 1e-9, bland, basis)
        assert got_py == got_c
        assert got_py[0] == expect
        assert got_py[1] == 0.5


def test_primal_ratio_cap_and_unbounded_match():
    xb = np.array([1.0])
    lb = np.array([0.0])
    ub = np.array([np.inf])
    alpha = np.array([0.0])
    basis = np.array([0], dtype=np.int64)
    for cap in (np.inf, 7.5):
        got_py = kpy.primal_ratio_test(xb, alpha, lb, ub, 1.0, cap, 1e-9, False, basis)
        got_c = kc.primal_ratio_test(xb, alpha, lb, ub, 1.0, cap, 1e-9, False, basis)
        assert got_py == got_c == (-1, cap)


def test_dual_ratio_matches():
    rng = np.random.default_rng(41)
    for n in (1, 3, 30, 300):
        for _ in range(60):
            d, vstat = random_pricing_instance(rng, n)
            arow = rng.standard_normal(n)
            arow[rng.random(n) < 0.3] = 0.0
            fixed = rng.random(n) < 0.2
            sign_r = float(rng.choice([-1.0, 1.0]))
            for bland in (False, True):
                got_py = kpy.dual_ratio_test(d, arow, vstat, sign_r, 1e-9, bland, fixed)
                got_c = kc.dual_ratio_test(d, arow, vstat, sign_r, 1e-9, bland, fixed)
                assert got_py == got_c


def test_dual_ratio_tie_handling_matches():
    # equal ratios, different pivot magnitudes
    d = np.array([-4.0, -8.0, -2.0])
    arow = np.array([-1.0, -2.0, -0.5])
    vstat = np.zeros(3, dtype=np.int8)
    fixed = np.zeros(3, dtype=bool)
    for bland in (False, True):
        got_py = kpy.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, bland, fixed)
        got_c = kc.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, bland, fixed)
        assert got_py == got_c
    assert kpy.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, False, fixed) == 1
    assert kpy.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, True, fixed) == 0


def test_dual_ratio_excludes_fixed_columns():
    d = np.array([-4.0, -8.0])
    arow = np.array([-1.0, -2.0])
    vstat = np.zeros(2, dtype=np.int8)
    fixed = np.array([True, False])
    assert kpy.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, False, fixed) == 1
    assert kc.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, False, fixed) == 1
    fixed = np.array([True, True])
    assert kpy.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, False, fixed) == -1
    assert kc.dual_ratio_test(d, arow, vstat, 1.0, 1e-9, False, fixed) == -1


def test_env_var_forces_python_backend():
    env = dict(os.environ, ISRUPLAN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from isruplan._accel import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_default_backend_is_compiled_when_available():
    env = {k: v for k, v in os.environ.items() if k != "ISRUPLAN_PURE_PYTHON"}
    out = subprocess.run(
        [sys.executable, "-c", "from isruplan._accel import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "compiled"


def test_full_solve_identical_across_backends():
    # the solver must trace the same pivots either way: same objective, same x
    code = (
        "import numpy as np\n"
        "from isruplan.simplex import BoundedSimplex\n"
        "rng = np.random.default_rng(5)\n"
        "m, n = 40, 90\n"
        "A = rng.standard_normal((m, n))\n"
        "b = A @ rng.random(n)\n"
        "c = rng.standard_normal(n)\n"
        "lp = BoundedSimplex(A, ['<='] * m, b, c, np.zeros(n), np.full(n, 10.0))\n"
        "res = lp.solve()\n"
        "print(res.status, repr(res.obj), res.iters, repr(res.x.sum()))\n"
    )
    runs = {}
    for name, env in (
        ("python", dict(os.environ, ISRUPLAN_PURE_PYTHON="1")),
        ("compiled", {k: v for k, v in os.environ.items() if k != "ISRUPLAN_PURE_PYTHON"}),
    ):
        out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
        runs[name] = out.stdout.strip()
    assert runs["python"] == runs["compiled"]
