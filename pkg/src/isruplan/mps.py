"""Fixed-format MPS export and import.

Sections NAME, ROWS, COLUMNS (integrality via INTORG/INTEND markers), RHS,
BOUNDS, ENDATA.  RANGES is not produced and is rejected on input.  Rows and
columns are written in declaration order under canonical 8-character labels
(COST, R0000001.., X0000001..), so exporting the same model twice yields
byte-identical text, and exporting an imported model reproduces the file.

Values are written in shortest round-trip decimal form, so numeric content
survives export plus import bit-exactly.  Lines are parsed by whitespace
tokens, which accepts both strict column-aligned files and looser variants.
"""

from __future__ import annotations

import numpy as np

from .model import INF, MilpModel, ModelError


class MpsFormatError(ValueError):
    """Input text is not a readable fixed-format MPS document."""


_SENSE_TO_TYPE = {"<=": "L", ">=": "G", "=": "E"}
_TYPE_TO_SENSE = {"L": "<=", "G": ">=", "E": "="}


def _num(v: float) -> str:
    """Shortest decimal that parses back to exactly v."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _field(name: str, width: int = 8) -> str:
    return name.ljust(width)


def export_mps(model: MilpModel) -> str:
    """Render the model as fixed-format MPS text."""
    lines = [f"NAME          {model.name}"]
    lines.append("ROWS")
    lines.append(" N  COST")
    row_label = {}
    for i, con in enumerate(model.constrs):
        label = f"R{i + 1:07d}"
        row_label[i] = label
        lines.append(f" {_SENSE_TO_TYPE[con.sense]}  {label}")

    # column-major entries: objective first, then rows in declaration order
    col_label = [f"X{j + 1:07d}" for j in range(model.n_vars)]
    by_col: list[list[tuple[str, float]]] = [[] for _ in range(model.n_vars)]
    for j, v in enumerate(model.vars):
        if v.obj != 0.0:
            by_col[j].append(("COST", v.obj))
    for i, con in enumerate(model.constrs):
        for j in sorted(con.coeffs):
            by_col[j].append((row_label[i], con.coeffs[j]))

    lines.append("COLUMNS")
    marker = 0
    inside_int = False
    for j, v in enumerate(model.vars):
        if v.is_integer and not inside_int:
            marker += 1
            lines.append(f"    M{marker:07d}  'MARKER'                 'INTORG'")
            inside_int = True
        elif not v.is_integer and inside_int:
            marker += 1
            lines.append(f"    M{marker:07d}  'MARKER'                 'INTEND'")
            inside_int = False
        entries = by_col[j] or [("COST", 0.0)]  # keep empty columns alive
        for row, val in entries:
            lines.append(f"    {_field(col_label[j])}  {_field(row)}  {_num(val)}")
    if inside_int:
        marker += 1
        lines.append(f"    M{marker:07d}  'MARKER'                 'INTEND'")

    lines.append("RHS")
    if model.obj_offset != 0.0:
        lines.append(f"    RHS1      COST      {_num(-model.obj_offset)}")
    for i, con in enumerate(model.constrs):
        if con.rhs != 0.0:
            lines.append(f"    RHS1      {_field(row_label[i])}  {_num(con.rhs)}")

    lines.append("BOUNDS")
    for j, v in enumerate(model.vars):
        label = _field(col_label[j])
        if v.lb == v.ub:
            lines.append(f" FX BND       {label}  {_num(v.lb)}")
            continue
        if v.lb == -INF and v.ub == INF:
            lines.append(f" FR BND       {label}")
            continue
        if v.lb == -INF:
            lines.append(f" MI BND       {label}")
        else:
            lines.append(f" LO BND       {label}  {_num(v.lb)}")
        if v.ub != INF:
            lines.append(f" UP BND       {label}  {_num(v.ub)}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def write_mps(model: MilpModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(export_mps(model))


_SECTION_ORDER = ["NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"]


def import_mps(text: str) -> MilpModel:
    """Parse fixed-format MPS text back into a model."""
    name = "model"
    section = None
    seen: list[str] = []
    rows: list[tuple[str, str]] = []  # (label, sense)
    obj_row = None
    col_order: list[str] = []
    col_entries: dict[str, list[tuple[str, float]]] = {}
    col_is_int: dict[str, bool] = {}
    rhs: dict[str, float] = {}
    bounds: dict[str, dict[str, float | None]] = {}
    inside_int = False

    def fail(msg, lineno):
        raise MpsFormatError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        is_header = not raw[0].isspace()
        tokens = raw.split()
        if is_header:
            head = tokens[0].upper()
            if head == "NAME":
                if seen:
                    fail("NAME must come first", lineno)
                name = tokens[1] if len(tokens) > 1 else "model"
                seen.append("NAME")
                continue
            if head == "RANGES":
                fail("RANGES section not supported", lineno)
            if head not in _SECTION_ORDER:
                fail(f"unknown section {head!r}", lineno)
            expected = [s for s in _SECTION_ORDER if s not in seen and s != "NAME"]
            if not expected or head != expected[0]:
                # RHS and BOUNDS may be absent, so fast-forward through them
                while expected and expected[0] in ("RHS", "BOUNDS") and head != expected[0]:
                    seen.append(expected.pop(0))
                if not expected or head != expected[0]:
                    fail(f"section {head} out of order", lineno)
            seen.append(head)
            section = head
            if head == "ENDATA":
                break
            continue
        if section == "ROWS":
            if len(tokens) != 2:
                fail("ROWS entries need a type and a label", lineno)
            rtype, label = tokens[0].upper(), tokens[1]
            if rtype == "N":
                if obj_row is not None:
                    fail("multiple objective rows", lineno)
                obj_row = label
            elif rtype in _TYPE_TO_SENSE:
                rows.append((label, _TYPE_TO_SENSE[rtype]))
            else:
                fail(f"unknown row type {rtype!r}", lineno)
        elif section == "COLUMNS":
            if len(tokens) >= 3 and tokens[1] == "'MARKER'":
                kind = tokens[2].strip("'").upper()
                if kind == "INTORG":
                    inside_int = True
                elif kind == "INTEND":
                    inside_int = False
                else:
                    fail(f"unknown marker {tokens[2]!r}", lineno)
                continue
            if len(tokens) not in (3, 5):
                fail("COLUMNS entries come in row/value pairs", lineno)
            col = tokens[0]
            if col not in col_entries:
                col_entries[col] = []
                col_order.append(col)
                col_is_int[col] = inside_int
            for k in range(1, len(tokens), 2):
                try:
                    val = float(tokens[k + 1])
                except ValueError:
                    fail(f"bad numeric literal {tokens[k + 1]!r}", lineno)
                col_entries[col].append((tokens[k], val))
        elif section == "RHS":
            if len(tokens) not in (3, 5):
                fail("RHS entries come in row/value pairs", lineno)
            for k in range(1, len(tokens), 2):
                try:
                    rhs[tokens[k]] = float(tokens[k + 1])
                except ValueError:
                    fail(f"bad numeric literal {tokens[k + 1]!r}", lineno)
        elif section == "BOUNDS":
            btype = tokens[0].upper()
            if btype in ("FR", "MI", "PL", "BV"):
                if len(tokens) != 3:
                    fail(f"{btype} bound takes no value", lineno)
                col, val = tokens[2], None
            elif btype in ("LO", "UP", "FX"):
                if len(tokens) != 4:
                    fail(f"{btype} bound needs a value", lineno)
                col = tokens[2]
                try:
                    val = float(tokens[3])
                except ValueError:
                    fail(f"bad numeric literal {tokens[3]!r}", lineno)
            else:
                fail(f"unknown bound type {btype!r}", lineno)
            bounds.setdefault(col, {})[btype] = val
        elif section is None:
            fail("data before any section header", lineno)
        else:
            fail(f"unexpected data in section {section}", lineno)

    if "ENDATA" not in seen:
        raise MpsFormatError("missing ENDATA")
    if obj_row is None:
        raise MpsFormatError("missing objective row")

    model = MilpModel(name)
    row_sense = dict(rows)
    unknown = [c for entries in col_entries.values() for c, _ in entries
               if c != obj_row and c not in row_sense]
    if unknown:
        raise MpsFormatError(f"column entry references unknown row {unknown[0]!r}")

    for col in col_order:
        is_int = col_is_int[col]
        spec = bounds.get(col, {})
        if is_int and "FR" in spec:
            raise MpsFormatError(f"free bound on integer column {col!r}")
        lb, ub = 0.0, INF
        if "BV" in spec:
            lb, ub, is_int = 0.0, 1.0, True
        if "MI" in spec:
            lb = -INF
        if "FR" in spec:
            lb, ub = -INF, INF
        if "LO" in spec:
            lb = spec["LO"]
        if "UP" in spec:
            ub = spec["UP"]
        if "FX" in spec:
            lb = ub = spec["FX"]
        obj = sum(v for r, v in col_entries[col] if r == obj_row)
        model.add_var(col, lb=lb, ub=ub, obj=obj, is_integer=is_int)

    for label, sense in rows:
        coeffs = {}
        for col in col_order:
            for r, v in col_entries[col]:
                if r == label:
                    coeffs[col] = coeffs.get(col, 0.0) + v
        model.add_constr(label, coeffs, sense, rhs.get(label, 0.0))
    if obj_row in rhs:
        model.add_objective_offset(-rhs[obj_row])
    return model


def read_mps(path) -> MilpModel:
    with open(path) as fh:
        return import_mps(fh.read())


def models_equal(a: MilpModel, b: MilpModel, tol: float = 0.0) -> bool:
    """Structural equality up to labels: same arrays, senses, integrality."""
    Aa, sa, ba, ca, la, ua, ia = a.to_arrays()
    Ab, sb, bb, cb, lb, ub, ib = b.to_arrays()
    if Aa.shape != Ab.shape or sa != sb or not np.array_equal(ia, ib):
        return False
    def ok(x, y):
        if tol == 0.0:
            return np.array_equal(x, y)
        return np.allclose(x, y, rtol=tol, atol=tol, equal_nan=True)
    bounds_ok = (
        ok(np.where(np.isfinite(la), la, 0.0), np.where(np.isfinite(lb), lb, 0.0))
        and np.array_equal(np.isfinite(la), np.isfinite(lb))
        and ok(np.where(np.isfinite(ua), ua, 0.0), np.where(np.isfinite(ub), ub, 0.0))
        and np.array_equal(np.isfinite(ua), np.isfinite(ub))
    )
    return (
        ok(Aa, Ab) and ok(ba, bb) and ok(ca, cb) and bounds_ok
        and abs(a.obj_offset - b.obj_offset) <= tol * max(1.0, abs(a.obj_offset))
    )
