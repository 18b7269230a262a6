"""Bounded-variable revised simplex with primal and dual pivoting.

Rows enter as inequalities or equalities and receive one slack column each,
so the working matrix is [A | I] and every basis has m columns.  The basis
inverse is kept explicitly and repaired by periodic refactorization; Bland's
rule takes over pricing whenever progress stalls, which guarantees
termination on degenerate problems.

Dual pivoting serves two purposes: cold starts on models whose objective is
already dual-feasible at the slack basis (typical for pure cost-minimization
models) and warm restarts after variable-bound changes during branch and
bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from ._kernels_py import BASIC, NB_FREE, NB_LOWER, NB_UPPER

FEAS_TOL = 1e-7
DUAL_TOL = 1e-7
PIVOT_TOL = 1e-9
STALL_LIMIT = 300


class SimplexError(RuntimeError):
    """Numerical failure that survived refactorization retries."""


@dataclass
class LpResult:
    status: str  # optimal | infeasible | unbounded
    obj: float
    x: np.ndarray  # structural variable values
    basis: np.ndarray
    vstat: np.ndarray
    iters: int


def _geometric_scale(v_max: np.ndarray, v_min: np.ndarray) -> np.ndarray:
    ok = v_min > 0
    s = np.ones_like(v_max)
    s[ok] = 1.0 / np.sqrt(v_max[ok] * v_min[ok])
    return s


class BoundedSimplex:
    """One LP instance; solve cold or re-solve under changed variable bounds."""

    def __init__(self, A, senses, b, c, lb, ub, refactor_every: int = 100, maxiter: int | None = None):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise ValueError("A must be a matrix")
        m, n = A.shape
        self.m, self.n = m, n
        self.N = n + m
        b = np.asarray(b, dtype=float)
        c = np.asarray(c, dtype=float)
        lb = np.asarray(lb, dtype=float)
        ub = np.asarray(ub, dtype=float)
        senses = list(senses)
        if len(senses) != m or b.shape != (m,) or c.shape != (n,) or lb.shape != (n,) or ub.shape != (n,):
            raise ValueError("inconsistent dimensions")
        if np.any(lb > ub):
            raise ValueError("crossed bounds")
        self.lb0 = lb.copy()
        self.ub0 = ub.copy()

        # geometric-mean equilibration, two rounds, then unit slack columns
        row_s = np.ones(m)
        col_s = np.ones(n)
        if m and n:
            work = np.abs(A)
            for _ in range(2):
                scaled = work * row_s[:, None] * col_s[None, :]
                nz = scaled > 0
                rmax = np.where(nz.any(axis=1), scaled.max(axis=1), 1.0)
                rmin = np.where(nz.any(axis=1), np.where(nz, scaled, np.inf).min(axis=1), 1.0)
                row_s *= _geometric_scale(rmax, rmin)
                scaled = work * row_s[:, None] * col_s[None, :]
                nz = scaled > 0
                cmax = np.where(nz.any(axis=0), scaled.max(axis=0), 1.0)
                cmin = np.where(nz.any(axis=0), np.where(nz, scaled, np.inf).min(axis=0), 1.0)
                col_s *= _geometric_scale(cmax, cmin)
        self.row_s, self.col_s = row_s, col_s

        self.A = np.empty((m, self.N))
        self.A[:, :n] = A * row_s[:, None] * col_s[None, :]
        self.A[:, n:] = np.eye(m)
        self.b = b * row_s
        self.c_orig = c

        slack_lb = np.empty(m)
        slack_ub = np.empty(m)
        for i, s in enumerate(senses):
            if s == "<=":
                slack_lb[i], slack_ub[i] = 0.0, np.inf
            elif s == ">=":
                slack_lb[i], slack_ub[i] = -np.inf, 0.0
            elif s == "=":
                slack_lb[i], slack_ub[i] = 0.0, 0.0
            else:
                raise ValueError(f"unknown sense {s!r}")
        self.slack_lb, self.slack_ub = slack_lb, slack_ub

        cs = c * col_s
        self.obj_scale = max(1.0, float(np.max(np.abs(cs))) if n else 1.0)
        self.c = np.concatenate([cs / self.obj_scale, np.zeros(m)])

        self.refactor_every = refactor_every
        self.maxiter = maxiter if maxiter is not None else 200 * (m + n) + 20000

        # mutable per-solve state
        self.lb = np.empty(self.N)
        self.ub = np.empty(self.N)
        self.basis = np.empty(m, dtype=np.int64)
        self.vstat = np.empty(self.N, dtype=np.int8)
        self.binv = np.empty((m, m))
        self.xB = np.empty(m)
        self._pivots_since_refactor = 0

    # -- bound handling ----------------------------------------------------

    def _load_bounds(self, lb, ub):
        self.lb[: self.n] = np.asarray(lb, dtype=float) / self.col_s
        self.ub[: self.n] = np.asarray(ub, dtype=float) / self.col_s
        self.lb[self.n :] = self.slack_lb
        self.ub[self.n :] = self.slack_ub

    def _nonbasic_value(self, j: int) -> float:
        s = self.vstat[j]
        if s == NB_LOWER:
            return self.lb[j]
        if s == NB_UPPER:
            return self.ub[j]
        return 0.0

    def _nonbasic_vector(self) -> np.ndarray:
        x = np.where(self.vstat == NB_UPPER, self.ub, np.where(self.vstat == NB_LOWER, self.lb, 0.0))
        x[self.vstat == BASIC] = 0.0
        return x

    def _fix_nonbasic_statuses(self):
        """Peg every nonbasic variable to a representable bound."""
        nb = self.vstat != BASIC
        lo_f = np.isfinite(self.lb)
        hi_f = np.isfinite(self.ub)
        bad_lo = nb & (self.vstat == NB_LOWER) & ~lo_f
        self.vstat[bad_lo & hi_f] = NB_UPPER
        self.vstat[bad_lo & ~hi_f] = NB_FREE
        bad_up = nb & (self.vstat == NB_UPPER) & ~hi_f
        self.vstat[bad_up & lo_f] = NB_LOWER
        self.vstat[bad_up & ~lo_f] = NB_FREE
        self.vstat[nb & (self.vstat == NB_FREE) & lo_f] = NB_LOWER

    def _recompute_xb(self):
        resid = self.b - self.A @ self._nonbasic_vector()
        self.xB = self.binv @ resid

    def _refactorize(self):
        try:
            self.binv = np.linalg.inv(self.A[:, self.basis])
        except np.linalg.LinAlgError as exc:
            raise SimplexError("singular basis during refactorization") from exc
        self._pivots_since_refactor = 0
        self._recompute_xb()

    def _pivot(self, r: int, j: int, new_val: float, alpha: np.ndarray):
        if abs(alpha[r]) <= PIVOT_TOL:
            raise SimplexError("vanishing pivot element")
        leaving = self.basis[r]
        lo, hi = self.lb[leaving], self.ub[leaving]
        # classify the leaving variable by the nearer bound
        if np.isfinite(lo) and (not np.isfinite(hi) or abs(self.xB[r] - lo) <= abs(self.xB[r] - hi)):
            self.vstat[leaving] = NB_LOWER
        elif np.isfinite(hi):
            self.vstat[leaving] = NB_UPPER
        else:
            self.vstat[leaving] = NB_FREE
        kernels.update_binv(self.binv, alpha, r)
        self.basis[r] = j
        self.vstat[j] = BASIC
        self.xB[r] = new_val
        self._pivots_since_refactor += 1
        if self._pivots_since_refactor >= self.refactor_every:
            self._refactorize()

    # -- primal ------------------------------------------------------------

    def _phase1(self) -> str:
        bland = False
        stall = 0
        while True:
            lb_b = self.lb[self.basis]
            ub_b = self.ub[self.basis]
            below = self.xB < lb_b - FEAS_TOL
            above = self.xB > ub_b + FEAS_TOL
            if not below.any() and not above.any():
                return "feasible"
            if self._iters > self.maxiter:
                raise SimplexError("phase-1 iteration limit")
            self._iters += 1
            w = above.astype(float) - below.astype(float)
            y = w @ self.binv
            d1 = -(y @ self.A)
            d1[self.basis] = 0.0
            j = (kernels.price_bland if bland else kernels.price_dantzig)(d1, self.vstat, DUAL_TOL)
            if j < 0:
                return "infeasible"
            sigma = 1.0
            if self.vstat[j] == NB_UPPER or (self.vstat[j] == NB_FREE and d1[j] > 0):
                sigma = -1.0
            alpha = self.binv @ self.A[:, j]
            coef = -sigma * alpha
            # feasible basics block at their bounds; infeasible ones block
            # where they regain feasibility
            with np.errstate(divide="ignore", invalid="ignore"):
                t_up = np.where(~above & ~below & (coef > PIVOT_TOL), (ub_b - self.xB) / coef, np.inf)
                t_lo = np.where(~above & ~below & (coef < -PIVOT_TOL), (lb_b - self.xB) / coef, np.inf)
                t_in_lo = np.where(below & (coef > PIVOT_TOL), (lb_b - self.xB) / coef, np.inf)
                t_in_up = np.where(above & (coef < -PIVOT_TOL), (ub_b - self.xB) / coef, np.inf)
            theta_i = np.minimum(np.minimum(t_up, t_lo), np.minimum(t_in_lo, t_in_up))
            theta_i = np.maximum(theta_i, 0.0)
            r = int(np.argmin(theta_i))
            theta = float(theta_i[r])
            flip_cap = (
                self.ub[j] - self.lb[j]
                if self.vstat[j] != NB_FREE and np.isfinite(self.ub[j]) and np.isfinite(self.lb[j])
                else np.inf
            )
            if not np.isfinite(theta) and not np.isfinite(flip_cap):
                # descent without any blocking bound contradicts the phase-1
                # objective being bounded below; numbers have gone bad
                raise SimplexError("phase-1 ray without blocking bound")
            if theta >= flip_cap:
                # entering variable swaps bounds without a basis change
                self.vstat[j] = NB_UPPER if self.vstat[j] == NB_LOWER else NB_LOWER
                self.xB += -sigma * flip_cap * alpha
                stall = 0 if flip_cap > 1e-10 else stall + 1
            else:
                near = np.nonzero(theta_i <= theta + 1e-9)[0]
                if near.size > 1:
                    r = int(near[np.argmin(self.basis[near])] if bland else near[np.argmax(np.abs(alpha[near]))])
                new_val = self._nonbasic_value(j) + sigma * float(theta_i[r])
                self.xB += -sigma * float(theta_i[r]) * alpha
                self._pivot(r, j, new_val, alpha)
                stall = stall + 1 if theta_i[r] <= 1e-10 else 0
            if stall > STALL_LIMIT:
                bland = True
            elif stall == 0:
                bland = False

    def _phase2(self) -> str:
        bland = False
        stall = 0
        while True:
            if self._iters > self.maxiter:
                raise SimplexError("phase-2 iteration limit")
            self._iters += 1
            y = self.c[self.basis] @ self.binv
            d = self.c - y @ self.A
            d[self.basis] = 0.0
            j = (kernels.price_bland if bland else kernels.price_dantzig)(d, self.vstat, DUAL_TOL)
            if j < 0:
                return "optimal"
            sigma = 1.0
            if self.vstat[j] == NB_UPPER or (self.vstat[j] == NB_FREE and d[j] > 0):
                sigma = -1.0
            alpha = self.binv @ self.A[:, j]
            flip_cap = (
                self.ub[j] - self.lb[j]
                if self.vstat[j] != NB_FREE and np.isfinite(self.ub[j]) and np.isfinite(self.lb[j])
                else np.inf
            )
            r, theta = kernels.primal_ratio_test(
                self.xB, alpha, self.lb[self.basis], self.ub[self.basis],
                sigma, flip_cap, PIVOT_TOL, bland, self.basis,
            )
            if r < 0:
                if not np.isfinite(theta):
                    return "unbounded"
                self.vstat[j] = NB_UPPER if self.vstat[j] == NB_LOWER else NB_LOWER
                self.xB += -sigma * theta * alpha
                stall = 0 if theta > 1e-10 else stall + 1
            else:
                new_val = self._nonbasic_value(j) + sigma * theta
                self.xB += -sigma * theta * alpha
                self._pivot(r, j, new_val, alpha)
                stall = stall + 1 if theta <= 1e-10 else 0
            if stall > STALL_LIMIT:
                bland = True
            elif stall == 0:
                bland = False

    # -- dual --------------------------------------------------------------

    def _dual_loop(self) -> str:
        bland = False
        stall = 0
        prev_viol = np.inf
        fixed = self.ub - self.lb < 1e-12
        while True:
            if self._iters > self.maxiter:
                raise SimplexError("dual iteration limit")
            self._iters += 1
            lb_b = self.lb[self.basis]
            ub_b = self.ub[self.basis]
            below = np.maximum(lb_b - self.xB, 0.0)
            above = np.maximum(self.xB - ub_b, 0.0)
            viol = below + above
            total = float(viol.sum())
            if total <= FEAS_TOL * max(1.0, len(viol) ** 0.5):
                return "optimal"
            stall = stall + 1 if total >= prev_viol - 1e-12 else 0
            prev_viol = total
            if stall > STALL_LIMIT:
                bland = True
            elif stall == 0:
                bland = False
            if bland:
                cand = np.nonzero(viol > FEAS_TOL)[0]
                r = int(cand[np.argmin(self.basis[cand])])
            else:
                r = int(np.argmax(viol))
            sign_r = 1.0 if below[r] > 0 else -1.0
            y = self.c[self.basis] @ self.binv
            d = self.c - y @ self.A
            d[self.basis] = 0.0
            arow = self.binv[r] @ self.A
            arow[self.basis] = 0.0
            j = kernels.dual_ratio_test(d, arow, self.vstat, sign_r, PIVOT_TOL, bland, fixed)
            if j < 0:
                return "infeasible"
            target = lb_b[r] if sign_r > 0 else ub_b[r]
            alpha = self.binv @ self.A[:, j]
            if self.vstat[j] == NB_UPPER:
                t = (target - self.xB[r]) / alpha[r]
                new_val = self.ub[j] - t
                self.xB += alpha * t
            else:
                t = (self.xB[r] - target) / alpha[r]
                new_val = self._nonbasic_value(j) + t
                self.xB += -t * alpha
            self._pivot(r, j, new_val, alpha)

    # -- drivers -----------------------------------------------------------

    def _result(self, status: str) -> LpResult:
        x = self._nonbasic_vector()
        x[self.basis] = self.xB
        xs = x[: self.n] * self.col_s
        obj = float(self.c_orig @ xs) if status == "optimal" else np.nan
        return LpResult(
            status=status,
            obj=obj,
            x=xs,
            basis=self.basis.copy(),
            vstat=self.vstat.copy(),
            iters=self._iters,
        )

    def solve(self, lb=None, ub=None) -> LpResult:
        """Cold start from the slack basis."""
        if self.m == 0:
            return self._solve_unconstrained(lb, ub)
        self._load_bounds(lb if lb is not None else self.lb0,
                          ub if ub is not None else self.ub0)
        self._iters = 0
        self.basis = np.arange(self.n, self.N, dtype=np.int64)
        self.vstat[:] = NB_LOWER
        self.vstat[self.basis] = BASIC
        self._fix_nonbasic_statuses()
        self.binv = np.eye(self.m)
        self._recompute_xb()

        # pure-cost models are dual feasible at the slack basis once each
        # nonbasic sits on the bound matching its cost sign
        dual_ready = True
        for j in range(self.n):
            if self.vstat[j] == BASIC:
                continue
            cj = self.c[j]
            if cj < -DUAL_TOL:
                if np.isfinite(self.ub[j]):
                    self.vstat[j] = NB_UPPER
                else:
                    dual_ready = False
            elif cj > DUAL_TOL:
                if np.isfinite(self.lb[j]):
                    self.vstat[j] = NB_LOWER
                else:
                    dual_ready = False
            elif self.vstat[j] == NB_FREE and abs(cj) > DUAL_TOL:
                dual_ready = False
        self._recompute_xb()

        if dual_ready:
            status = self._run_with_retry(self._dual_loop)
        else:
            status = self._run_with_retry(self._phase1)
            if status == "feasible":
                status = self._run_with_retry(self._phase2)
        if status == "optimal":
            status = self._polish()
        return self._result(status)

    def resolve(self, lb, ub, basis, vstat) -> LpResult:
        """Warm restart from a dual-feasible basis after bound changes."""
        if self.m == 0:
            return self._solve_unconstrained(lb, ub)
        self._iters = 0
        self._load_bounds(lb, ub)
        self.basis = np.asarray(basis, dtype=np.int64).copy()
        self.vstat = np.asarray(vstat, dtype=np.int8).copy()
        self._fix_nonbasic_statuses()
        try:
            self._refactorize()
        except SimplexError:
            return self.solve(lb, ub)
        status = self._run_with_retry(self._dual_loop)
        if status == "optimal":
            status = self._polish()
        return self._result(status)

    def _polish(self) -> str:
        """Re-verify feasibility and optimality on fresh numbers."""
        self._refactorize()
        lb_b = self.lb[self.basis]
        ub_b = self.ub[self.basis]
        bad = np.maximum(lb_b - self.xB, 0.0) + np.maximum(self.xB - ub_b, 0.0)
        if bad.max(initial=0.0) > 10 * FEAS_TOL:
            status = self._run_with_retry(self._dual_loop)
            if status != "optimal":
                return status
        return self._run_with_retry(self._phase2)

    def _run_with_retry(self, fn):
        try:
            return fn()
        except SimplexError:
            # one repair attempt on fresh factors before giving up
            self._refactorize()
            return fn()

    def _solve_unconstrained(self, lb, ub) -> LpResult:
        lb = np.asarray(lb, dtype=float) if lb is not None else self.lb0
        ub = np.asarray(ub, dtype=float) if ub is not None else self.ub0
        x = np.where(self.c_orig > 0, lb, np.where(self.c_orig < 0, ub, np.where(np.isfinite(lb), lb, 0.0)))
        if not np.all(np.isfinite(x[self.c_orig != 0])):
            return LpResult("unbounded", np.nan, np.zeros(self.n), np.empty(0, np.int64), np.empty(0, np.int8), 0)
        x = np.where(np.isfinite(x), x, 0.0)
        return LpResult("optimal", float(self.c_orig @ x), x, np.empty(0, np.int64), np.empty(0, np.int8), 0)
