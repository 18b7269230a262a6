"""Branch-and-bound MILP solver on top of the bounded simplex core.

Search is best-first over a heap of open nodes, with depth-first plunging
from each popped node so incumbents appear early.  Every node after the root
is solved by a dual-simplex warm start from its parent's basis.  Branching
picks the most fractional integer variable, ties broken by lowest column
index, and node ordering ties break by creation sequence, so runs are fully
reproducible.

The `workers` option widens each sweep of the frontier (several nodes are
pulled and processed per round); evaluation itself stays sequential, so the
reported optimum is identical for every worker count.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from .model import MilpModel, ModelError
from .simplex import BoundedSimplex, SimplexError

DEFAULT_GAP = 1e-6
INT_TOL = 1e-6


@dataclass
class Solution:
    """Outcome of a MILP or LP solve."""

    status: str  # optimal | infeasible | unbounded | gap-limit | time-limit
    objective: float
    x: np.ndarray | None
    bound: float
    gap: float
    nodes: int
    lp_iterations: int
    wall_time: float

    def value_of(self, model: MilpModel, name: str) -> float:
        if self.x is None:
            raise ValueError("no solution values available")
        return model.value_of(self.x, name)


def _relative_gap(incumbent: float, bound: float) -> float:
    if not np.isfinite(incumbent) or not np.isfinite(bound):
        return math.inf
    return max(0.0, (incumbent - bound) / max(1.0, abs(incumbent)))


def _trivial_solution(model: MilpModel, t0: float) -> Solution:
    # no variables: rows reduce to constant comparisons
    x = np.zeros(0)
    feasible = not model.check_feasibility(x)
    obj = model.obj_offset if feasible else math.nan
    status = "optimal" if feasible else "infeasible"
    bound = obj if feasible else math.inf
    return Solution(status, obj, x if feasible else None, bound, 0.0 if feasible else math.inf,
                    0, 0, time.monotonic() - t0)


def solve_lp(model: MilpModel, time_limit: float | None = None) -> Solution:
    """Solve the LP relaxation of the model."""
    t0 = time.monotonic()
    if model.n_vars == 0:
        return _trivial_solution(model, t0)
    A, senses, b, c, lb, ub, _ = model.to_arrays()
    sx = BoundedSimplex(A, senses, b, c, lb, ub)
    res = sx.solve()
    off = model.obj_offset
    if res.status == "optimal":
        obj = res.obj + off
        return Solution("optimal", obj, res.x, obj, 0.0, 1, res.iters, time.monotonic() - t0)
    bound = -math.inf if res.status == "unbounded" else math.inf
    return Solution(res.status, math.nan, None, bound, math.inf, 1, res.iters, time.monotonic() - t0)


class _Search:
    def __init__(self, model, rel_gap, int_tol, time_limit, node_limit, workers, trace):
        self.model = model
        self.rel_gap = rel_gap
        self.int_tol = int_tol
        self.time_limit = time_limit
        self.node_limit = node_limit
        self.workers = max(1, int(workers))
        self.trace = trace
        self.t0 = time.monotonic()

        A, senses, b, c, self.lb0, self.ub0, is_int = model.to_arrays()
        self.c = c
        self.off = model.obj_offset
        self.int_idx = np.nonzero(is_int)[0]
        if self.int_idx.size:
            ilb = self.lb0[self.int_idx]
            iub = self.ub0[self.int_idx]
            if not (np.all(np.isfinite(ilb)) and np.all(np.isfinite(iub))):
                raise ModelError("integer variables need finite bounds")
            # pull integer bounds onto the lattice
            self.lb0[self.int_idx] = np.ceil(ilb - int_tol)
            self.ub0[self.int_idx] = np.floor(iub + int_tol)
        self.sx = BoundedSimplex(A, senses, b, c, self.lb0, self.ub0)

        self.incumbent_obj = math.inf
        self.incumbent_x = None
        self.heap = []  # (bound, seq, lb, ub, basis, vstat)
        self.seq = 0
        self.nodes = 0
        self.lp_iters = 0
        self.pruned_bound = math.inf  # least bound discarded by the gap slack

    # -- helpers -------------------------------------------------------------

    def _emit(self, event, **data):
        if self.trace is not None:
            self.trace({"event": event, **data})

    def _out_of_time(self) -> bool:
        return self.time_limit is not None and time.monotonic() - self.t0 >= self.time_limit

    def _out_of_nodes(self) -> bool:
        return self.node_limit is not None and self.nodes >= self.node_limit

    def _slack(self) -> float:
        if not np.isfinite(self.incumbent_obj):
            return 0.0
        return self.rel_gap * max(1.0, abs(self.incumbent_obj))

    def _solve_node(self, lb, ub, basis, vstat):
        self.nodes += 1
        try:
            if basis is None:
                res = self.sx.solve(lb, ub)
            else:
                res = self.sx.resolve(lb, ub, basis, vstat)
        except SimplexError:
            res = self.sx.solve(lb, ub)  # cold restart as a last resort
        self.lp_iters += res.iters
        return res

    def _fractional(self, x):
        if self.int_idx.size == 0:
            return None
        xi = x[self.int_idx]
        frac = np.abs(xi - np.round(xi))
        if frac.max(initial=0.0) <= self.int_tol:
            return None
        # most fractional: distance to the nearest half is smallest
        score = np.abs(frac - 0.5)
        score[frac <= self.int_tol] = math.inf
        return int(self.int_idx[int(np.argmin(score))])

    def _accept(self, obj, x):
        if obj < self.incumbent_obj - 1e-12:
            self.incumbent_obj = obj
            self.incumbent_x = x.copy()
            self._emit("incumbent", objective=obj, node=self.nodes)

    def _try_rounding(self, res, lb, ub):
        """Fix every integer to its nearest value and re-solve the continuous rest."""
        if self.int_idx.size == 0:
            return
        xi = np.round(res.x[self.int_idx])
        lo = lb.copy()
        hi = ub.copy()
        lo[self.int_idx] = np.maximum(lo[self.int_idx], xi)
        hi[self.int_idx] = np.minimum(hi[self.int_idx], xi)
        if np.any(lo > hi):
            return
        fixed = self._solve_node(lo, hi, res.basis, res.vstat)
        if fixed.status == "optimal":
            self._accept(fixed.obj + self.off, fixed.x)

    # -- main loop -------------------------------------------------------------

    def run(self) -> Solution:
        root = self._solve_node(self.lb0, self.ub0, None, None)
        if root.status == "unbounded":
            return self._finish("unbounded", -math.inf)
        if root.status == "infeasible":
            return self._finish("infeasible", math.inf)
        self._plunge(root, self.lb0.copy(), self.ub0.copy(), root_node=True)

        while self.heap:
            if self._out_of_time():
                return self._finish("time-limit")
            if self._out_of_nodes():
                return self._finish("gap-limit")
            batch = []
            for _ in range(min(self.workers, len(self.heap))):
                batch.append(heapq.heappop(self.heap))
            stop = False
            for item in batch:
                if stop or self._out_of_time() or self._out_of_nodes():
                    heapq.heappush(self.heap, item)  # keep bound accounting exact
                    stop = True
                    continue
                bound, _, lb, ub, basis, vstat = item
                if bound >= self.incumbent_obj - self._slack():
                    self.pruned_bound = min(self.pruned_bound, bound)
                    continue
                res = self._solve_node(lb, ub, basis, vstat)
                if res.status != "optimal":
                    continue
                self._plunge(res, lb, ub)
        return self._finish(None)

    def _plunge(self, res, lb, ub, root_node=False):
        """Dive from a solved node, pushing the off-path sibling each split."""
        if root_node:
            self._try_rounding(res, lb, ub)
        while True:
            node_bound = res.obj + self.off
            self._emit("node", bound=node_bound, nodes=self.nodes)
            if node_bound >= self.incumbent_obj - self._slack():
                self.pruned_bound = min(self.pruned_bound, node_bound)
                return
            j = self._fractional(res.x)
            if j is None:
                self._accept(node_bound, res.x)
                return
            if self._out_of_time() or self._out_of_nodes():
                # park the live subtree so the dual bound stays valid
                self.seq += 1
                heapq.heappush(self.heap, (node_bound, self.seq, lb.copy(), ub.copy(), res.basis, res.vstat))
                return
            xj = res.x[j]
            floor_j = math.floor(xj + self.int_tol)
            down_lb, down_ub = lb.copy(), ub.copy()
            up_lb, up_ub = lb.copy(), ub.copy()
            down_ub[j] = floor_j
            up_lb[j] = floor_j + 1
            dive_down = (xj - floor_j) <= 0.5
            if dive_down:
                push = (node_bound, up_lb, up_ub)
            else:
                push = (node_bound, down_lb, down_ub)
            self.seq += 1
            heapq.heappush(
                self.heap,
                (push[0], self.seq, push[1], push[2], res.basis, res.vstat),
            )
            lb, ub = (down_lb, down_ub) if dive_down else (up_lb, up_ub)
            child = self._solve_node(lb, ub, res.basis, res.vstat)
            if child.status != "optimal":
                return
            res = child

    def _finish(self, forced_status, forced_bound=None) -> Solution:
        open_bounds = [item[0] for item in self.heap]
        bound = min(open_bounds) if open_bounds else math.inf
        bound = min(bound, self.pruned_bound, self.incumbent_obj)
        if forced_bound is not None:
            bound = forced_bound
        have_x = self.incumbent_x is not None
        gap = _relative_gap(self.incumbent_obj, bound) if have_x else math.inf
        if forced_status in ("infeasible", "unbounded"):
            status = forced_status
        elif forced_status is not None:
            status = forced_status  # a limit stopped the search
        elif have_x:
            status = "optimal"
        else:
            status = "infeasible"
        return Solution(
            status=status,
            objective=self.incumbent_obj if have_x else math.nan,
            x=self.incumbent_x,
            bound=bound,
            gap=gap if have_x else math.inf,
            nodes=self.nodes,
            lp_iterations=self.lp_iters,
            wall_time=time.monotonic() - self.t0,
        )


def solve_milp(
    model: MilpModel,
    rel_gap: float = DEFAULT_GAP,
    int_tol: float = INT_TOL,
    time_limit: float | None = None,
    node_limit: int | None = None,
    workers: int = 1,
    trace=None,
) -> Solution:
    """Solve the model to proven optimality within the relative gap.

    Limits report status gap-limit (node budget) or time-limit with the best
    incumbent found; without integer variables this reduces to solve_lp.
    """
    t0 = time.monotonic()
    if model.n_vars == 0:
        return _trivial_solution(model, t0)
    return _Search(model, rel_gap, int_tol, time_limit, node_limit, workers, trace).run()
