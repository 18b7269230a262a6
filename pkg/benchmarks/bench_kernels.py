"""Benchmark the compiled simplex kernels against the numpy reference.

Times each hot kernel on synthetic data at a few sizes, then solves one
dense LP end to end with each backend.  Run from a checkout or an install:

    python3 benchmarks/bench_kernels.py --size 400 --repeat 9
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

from isruplan import _kernels_py as kpy

try:
    from isruplan import _kernels as kc
except ImportError:
    kc = None


def timeit(fn, args, repeat: int) -> float:
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best.append(time.perf_counter() - t0)
    return statistics.median(best)


def bench_kernels(m: int, repeat: int) -> list[tuple[str, float, float]]:
    rng = np.random.default_rng(2024)
    n = 2 * m
    rows = []

    binv = rng.standard_normal((m, m))
    alpha = rng.standard_normal(m)
    alpha[m // 2] = 1.5
    rows.append(
        (
            f"update_binv        m={m}",
            timeit(kpy.update_binv, (binv.copy(), alpha, m // 2), repeat),
            timeit(kc.update_binv, (binv.copy(), alpha, m // 2), repeat) if kc else float("nan"),
        )
    )

    d = rng.standard_normal(n)
    vstat = rng.choice(
        np.array([kpy.NB_LOWER, kpy.NB_UPPER, kpy.BASIC, kpy.NB_FREE], dtype=np.int8), size=n
    ).astype(np.int8)
    for label, f_py, f_c in (
        ("price_dantzig", kpy.price_dantzig, kc.price_dantzig if kc else None),
        ("price_bland", kpy.price_bland, kc.price_bland if kc else None),
    ):
        rows.append(
            (
                f"{label:<18} n={n}",
                timeit(f_py, (d, vstat, 1e-7), repeat),
                timeit(f_c, (d, vstat, 1e-7), repeat) if f_c else float("nan"),
            )
        )

    xb = rng.random(m) * 10
    al = rng.standard_normal(m)
    lb = np.zeros(m)
    ub = np.full(m, 20.0)
    basis = np.arange(m, dtype=np.int64)
    rows.append(
        (
            f"primal_ratio_test  m={m}",
            timeit(kpy.primal_ratio_test, (xb, al, lb, ub, 1.0, np.inf, 1e-9, False, basis), repeat),
            timeit(kc.primal_ratio_test, (xb, al, lb, ub, 1.0, np.inf, 1e-9, False, basis), repeat)
            if kc
            else float("nan"),
        )
    )

    arow = rng.standard_normal(n)
    dd = np.abs(rng.standard_normal(n))
    fixed = rng.random(n) < 0.1
    rows.append(
        (
            f"dual_ratio_test    n={n}",
            timeit(kpy.dual_ratio_test, (dd, arow, vstat, 1.0, 1e-9, False, fixed), repeat),
            timeit(kc.dual_ratio_test, (dd, arow, vstat, 1.0, 1e-9, False, fixed), repeat)
            if kc
            else float("nan"),
        )
    )
    return rows


SOLVE_SNIPPET = """
import time
import numpy as np
from isruplan.simplex import BoundedSimplex
rng = np.random.default_rng(99)
m, n = {m}, {n}
A = rng.standard_normal((m, n))
b = A @ rng.random(n)
c = rng.standard_normal(n)
lp = BoundedSimplex(A, ['<='] * m, b, c, np.zeros(n), np.full(n, 10.0))
t0 = time.perf_counter()
res = lp.solve()
print(time.perf_counter() - t0, res.iters, res.status)
"""


def bench_solve(m: int) -> None:
    n = 2 * m
    print(f"\nfull LP solve, dense {m}x{n}:")
    for name, extra in (("python", {"ISRUPLAN_PURE_PYTHON": "1"}), ("compiled", {})):
        if name == "compiled" and kc is None:
            print("  compiled : unavailable")
            continue
        env = {k: v for k, v in os.environ.items() if k != "ISRUPLAN_PURE_PYTHON"}
        env.update(extra)
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET.format(m=m, n=n)],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        secs, iters, status = out.stdout.split()
        print(f"  {name:<9}: {float(secs) * 1e3:9.2f} ms  ({iters} iterations, {status})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=300, help="basis dimension m (columns are 2m)")
    ap.add_argument("--repeat", type=int, default=11, help="timing repeats per kernel (median)")
    args = ap.parse_args()

    if kc is None:
        print("compiled kernels unavailable; timing the numpy reference only\n")

    print(f"{'kernel':<28} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, t_py, t_c in bench_kernels(args.size, args.repeat):
        ratio = f"{t_py / t_c:8.1f}x" if t_c == t_c else "      n/a"
        c_txt = f"{t_c * 1e6:10.1f}us" if t_c == t_c else "       n/a"
        print(f"{label:<28} {t_py * 1e6:10.1f}us {c_txt} {ratio}")

    bench_solve(max(60, args.size // 3))


if __name__ == "__main__":
    main()
