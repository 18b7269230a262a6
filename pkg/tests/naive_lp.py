"""Independent dense-tableau simplex used as a test oracle.

Deliberately naive: full Gauss-Jordan tableau, two-phase with artificial
variables, Bland's rule throughout.  Slow but easy to trust on the small
instances the tests feed it.  No code shared with the package solver.
"""

from __future__ import annotations

import numpy as np

INF = float("inf")


def naive_lp(c, A, senses, b, lb, ub, maxiter=20000):
    """Minimize c@x subject to A x (senses) b and lb <= x <= ub.

    Returns (status, objective, x) with status in optimal | infeasible |
    unbounded.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(len(senses), len(c)) if len(senses) else np.zeros((0, len(c)))
    b = np.asarray(b, dtype=float)
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    n = len(c)

    # shift to x' >= 0; free variables split into positive and negative parts
    cols = []  # (orig index, sign, shift)
    for j in range(n):
        if np.isfinite(lb[j]):
            cols.append((j, 1.0, lb[j]))
        elif np.isfinite(ub[j]):
            cols.append((j, -1.0, ub[j]))  # x = ub - x'
        else:
            cols.append((j, 1.0, 0.0))
            cols.append((j, -1.0, 0.0))

    nn = len(cols)
    G_rows = []
    h = []
    row_senses = []
    for i in range(len(senses)):
        row = np.zeros(nn)
        shift = 0.0
        for k, (j, sgn, sh) in enumerate(cols):
            row[k] = A[i, j] * sgn
            shift += A[i, j] * sh
        G_rows.append(row)
        h.append(b[i] - shift)
        row_senses.append(senses[i])
    # finite ranges become explicit upper-bound rows on the shifted variable
    for k, (j, sgn, sh) in enumerate(cols):
        if sgn > 0 and np.isfinite(lb[j]) and np.isfinite(ub[j]):
            row = np.zeros(nn)
            row[k] = 1.0
            G_rows.append(row)
            h.append(ub[j] - lb[j])
            row_senses.append("<=")
        elif sgn < 0 and np.isfinite(lb[j]) and np.isfinite(ub[j]):
            row = np.zeros(nn)
            row[k] = 1.0
            G_rows.append(row)
            h.append(ub[j] - lb[j])
            row_senses.append("<=")

    m = len(G_rows)
    G = np.array(G_rows) if m else np.zeros((0, nn))
    h = np.array(h)

    # canonicalize every row to nonnegative rhs
    slack_cols = []
    art_rows = []
    for i in range(m):
        if h[i] < 0:
            G[i] *= -1.0
            h[i] *= -1.0
            row_senses[i] = {"<=": ">=", ">=": "<=", "=": "="}[row_senses[i]]
        if row_senses[i] == "<=":
            slack_cols.append((i, 1.0, False))
        elif row_senses[i] == ">=":
            slack_cols.append((i, -1.0, True))
        else:
            art_rows.append(i)

    n_slack = len(slack_cols)
    total = nn + n_slack + m  # worst case one artificial per row
    T = np.zeros((m, total))
    T[:, :nn] = G
    art_of_row = {}
    next_art = nn + n_slack
    basis = [-1] * m
    for k, (i, sgn, neg) in enumerate(slack_cols):
        T[i, nn + k] = sgn
        if not neg:
            basis[i] = nn + k
    for i in range(m):
        if basis[i] == -1:
            T[i, next_art] = 1.0
            art_of_row[i] = next_art
            basis[i] = next_art
            next_art += 1
    n_total = next_art
    T = T[:, :n_total]
    rhs = h.copy()

    def pivot(T, rhs, basis, r, q):
        piv = T[r, q]
        T[r] /= piv
        rhs[r] /= piv
        for i in range(len(basis)):
            if i != r and T[i, q] != 0.0:
                rhs[i] -= T[i, q] * rhs[r]
                T[i] -= T[i, q] * T[r]
        basis[r] = q

    def run(T, rhs, basis, cost, allowed):
        for _ in range(maxiter):
            cb = np.array([cost[bj] for bj in basis])
            red = cost - cb @ T
            cand = [j for j in range(allowed) if red[j] < -1e-9 and j not in basis]
            if not cand:
                return "optimal"
            q = cand[0]  # Bland
            ratios = [(rhs[i] / T[i, q], basis[i], i) for i in range(len(basis)) if T[i, q] > 1e-9]
            if not ratios:
                return "unbounded"
            theta = min(r_[0] for r_ in ratios)
            r = min((bl, i) for t, bl, i in ratios if t <= theta + 1e-12)[1]
            pivot(T, rhs, basis, r, q)
        raise RuntimeError("naive simplex iteration limit")

    # phase 1: drive artificials to zero
    if art_of_row:
        cost1 = np.zeros(n_total)
        for a in art_of_row.values():
            cost1[a] = 1.0
        status = run(T, rhs, basis, cost1, n_total)
        cb = np.array([cost1[bj] for bj in basis])
        if status != "optimal" or cb @ rhs > 1e-7:
            return "infeasible", np.nan, None
        # pivot any lingering artificial out of the basis if possible
        for i in range(m):
            if basis[i] in art_of_row.values():
                for q in range(nn + n_slack):
                    if abs(T[i, q]) > 1e-9:
                        pivot(T, rhs, basis, i, q)
                        break

    cost2 = np.zeros(n_total)
    for k, (j, sgn, sh) in enumerate(cols):
        cost2[k] = c[j] * sgn
    # forbid artificials from re-entering
    status = run(T, rhs, basis, cost2, nn + n_slack)
    if status == "unbounded":
        return "unbounded", np.nan, None

    xprime = np.zeros(n_total)
    for i, bj in enumerate(basis):
        xprime[bj] = rhs[i]
    x = np.zeros(n)
    k = 0
    for j in range(n):
        if np.isfinite(lb[j]):
            x[j] = lb[j] + xprime[k]
            k += 1
        elif np.isfinite(ub[j]):
            x[j] = ub[j] - xprime[k]
            k += 1
        else:
            x[j] = xprime[k] - xprime[k + 1]
            k += 2
    obj = float(c @ x)
    return "optimal", obj, x
