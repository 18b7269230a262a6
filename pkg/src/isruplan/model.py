"""Mixed-integer linear model container.

Rows and columns are created through add_var / add_constr and keep their
insertion order everywhere: array export, text dumps, and file formats all
see the same ordering, which keeps every artifact of a build reproducible.
The objective sense is always minimization; callers wanting a maximum negate
their costs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

INF = float("inf")

SENSES = ("<=", ">=", "=")


class ModelError(ValueError):
    """Malformed model construction request."""


@dataclass(frozen=True)
class VariableRef:
    """Handle returned by add_var; interchangeable with the column index."""

    index: int
    name: str

    def __index__(self) -> int:
        return self.index


@dataclass
class LinearConstraint:
    name: str
    coeffs: dict[int, float]
    sense: str
    rhs: float


@dataclass
class _Var:
    name: str
    lb: float
    ub: float
    obj: float
    is_integer: bool


class MilpModel:
    """Incrementally built MILP: min c@x + offset st rows, bounds, integrality."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.vars: list[_Var] = []
        self.constrs: list[LinearConstraint] = []
        self.obj_offset = 0.0
        self._var_index: dict[str, int] = {}
        self._constr_index: dict[str, int] = {}

    # -- construction --------------------------------------------------------

    def add_var(
        self,
        name: str,
        lb: float = 0.0,
        ub: float = INF,
        obj: float = 0.0,
        is_integer: bool = False,
    ) -> VariableRef:
        if name in self._var_index:
            raise ModelError(f"duplicate variable name {name!r}")
        if not np.isfinite(lb) and lb != -INF:
            raise ModelError(f"bad lower bound for {name!r}")
        if not np.isfinite(ub) and ub != INF:
            raise ModelError(f"bad upper bound for {name!r}")
        if lb > ub:
            raise ModelError(f"crossed bounds for {name!r}: [{lb}, {ub}]")
        idx = len(self.vars)
        self.vars.append(_Var(name, float(lb), float(ub), float(obj), bool(is_integer)))
        self._var_index[name] = idx
        return VariableRef(idx, name)

    def add_constr(self, name: str, coeffs, sense: str, rhs: float) -> int:
        if name in self._constr_index:
            raise ModelError(f"duplicate constraint name {name!r}")
        if sense not in SENSES:
            raise ModelError(f"unknown sense {sense!r} for {name!r}")
        clean: dict[int, float] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for key, val in items:
            j = self._as_index(key)
            val = float(val)
            if val != 0.0:
                clean[j] = clean.get(j, 0.0) + val
        idx = len(self.constrs)
        self.constrs.append(LinearConstraint(name, clean, sense, float(rhs)))
        self._constr_index[name] = idx
        return idx

    def add_coeff_to_constr(self, constr_name: str, var, delta: float) -> None:
        """Accumulate delta onto a variable's coefficient in an existing row."""
        try:
            i = self._constr_index[constr_name]
        except KeyError:
            raise ModelError(f"unknown constraint {constr_name!r}") from None
        j = self._as_index(var)
        con = self.constrs[i]
        val = con.coeffs.get(j, 0.0) + float(delta)
        if val == 0.0:
            con.coeffs.pop(j, None)
        else:
            con.coeffs[j] = val

    def constr_named(self, name: str) -> LinearConstraint:
        try:
            return self.constrs[self._constr_index[name]]
        except KeyError:
            raise ModelError(f"unknown constraint {name!r}") from None

    def has_constr(self, name: str) -> bool:
        return name in self._constr_index

    def set_objective_coeff(self, var, coeff: float) -> None:
        self.vars[self._as_index(var)].obj = float(coeff)

    def add_objective_offset(self, delta: float) -> None:
        self.obj_offset += float(delta)

    def set_bounds(self, var, lb: float | None = None, ub: float | None = None) -> None:
        v = self.vars[self._as_index(var)]
        if lb is not None:
            v.lb = float(lb)
        if ub is not None:
            v.ub = float(ub)
        if v.lb > v.ub:
            raise ModelError(f"crossed bounds for {v.name!r}")

    def _as_index(self, key) -> int:
        if isinstance(key, VariableRef):
            return key.index
        if isinstance(key, str):
            try:
                return self._var_index[key]
            except KeyError:
                raise ModelError(f"unknown variable {key!r}") from None
        j = int(key)
        if not 0 <= j < len(self.vars):
            raise ModelError(f"variable index {j} out of range")
        return j

    # -- introspection ---------------------------------------------------------

    @property
    def n_vars(self) -> int:
        return len(self.vars)

    @property
    def n_constrs(self) -> int:
        return len(self.constrs)

    def var_named(self, name: str) -> VariableRef:
        return VariableRef(self._as_index(name), name)

    def has_var(self, name: str) -> bool:
        return name in self._var_index

    def value_of(self, x, name: str) -> float:
        return float(np.asarray(x)[self._as_index(name)])

    def vars_matching(self, prefix: str) -> list[VariableRef]:
        return [VariableRef(i, v.name) for i, v in enumerate(self.vars) if v.name.startswith(prefix)]

    # -- export ----------------------------------------------------------------

    def to_arrays(self):
        """Dense arrays: (A, senses, b, c, lb, ub, integer mask)."""
        m, n = len(self.constrs), len(self.vars)
        A = np.zeros((m, n))
        b = np.empty(m)
        senses = []
        for i, con in enumerate(self.constrs):
            for j, v in con.coeffs.items():
                A[i, j] = v
            b[i] = con.rhs
            senses.append(con.sense)
        c = np.array([v.obj for v in self.vars]) if n else np.zeros(0)
        lb = np.array([v.lb for v in self.vars]) if n else np.zeros(0)
        ub = np.array([v.ub for v in self.vars]) if n else np.zeros(0)
        is_int = np.array([v.is_integer for v in self.vars], dtype=bool) if n else np.zeros(0, bool)
        return A, senses, b, c, lb, ub, is_int

    def dump(self) -> str:
        """Deterministic text rendering of every symbol in the model."""
        out = [f"model {self.name}"]
        out.append(f"offset {self.obj_offset!r}")
        for v in self.vars:
            kind = "int" if v.is_integer else "cont"
            out.append(f"var {v.name} {kind} lb={v.lb!r} ub={v.ub!r} obj={v.obj!r}")
        for con in self.constrs:
            terms = " ".join(
                f"{con.coeffs[j]!r}*{self.vars[j].name}" for j in sorted(con.coeffs)
            )
            out.append(f"row {con.name} {con.sense} {con.rhs!r} : {terms}")
        return "\n".join(out) + "\n"

    # -- verification ------------------------------------------------------------

    def check_feasibility(self, x, tol: float = 1e-6) -> list[str]:
        """Violation descriptions for a candidate point; empty means feasible."""
        x = np.asarray(x, dtype=float)
        if x.shape != (len(self.vars),):
            raise ModelError("solution length does not match variable count")
        bad: list[str] = []
        for j, v in enumerate(self.vars):
            scale = max(1.0, abs(x[j]))
            if x[j] < v.lb - tol * scale or x[j] > v.ub + tol * scale:
                bad.append(f"bound {v.name}: {x[j]!r} outside [{v.lb!r}, {v.ub!r}]")
            if v.is_integer and abs(x[j] - round(x[j])) > tol:
                bad.append(f"integrality {v.name}: {x[j]!r}")
        for con in self.constrs:
            act = sum(coef * x[j] for j, coef in con.coeffs.items())
            scale = max(1.0, abs(act), abs(con.rhs))
            if con.sense == "<=" and act > con.rhs + tol * scale:
                bad.append(f"row {con.name}: {act!r} > {con.rhs!r}")
            elif con.sense == ">=" and act < con.rhs - tol * scale:
                bad.append(f"row {con.name}: {act!r} < {con.rhs!r}")
            elif con.sense == "=" and abs(act - con.rhs) > tol * scale:
                bad.append(f"row {con.name}: {act!r} != {con.rhs!r}")
        return bad

    def objective_value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(sum(v.obj * x[j] for j, v in enumerate(self.vars))) + self.obj_offset
