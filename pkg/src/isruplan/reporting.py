"""Mission plans, cost breakdowns, sensitivity sweeps, and report files.

A solved model is an opaque vector; this module turns it back into the
things a mission planner talks about: who flies where carrying what, which
plants get built at what size, and where the money goes.  Sweeps re-solve
a scenario over a parameter grid and the emitters render tables as CSV or
SVG with byte-stable output.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .bnb import Solution, solve_milp
from .scenario import ScenarioConfig, apply_override

FLOW_EPS = 1e-6


@dataclass(frozen=True)
class FlowRecord:
    """One nonzero shipment or holdover: what a vehicle slot carries."""

    vehicle: str
    origin: str
    dest: str
    depart_step: int
    arrive_step: int
    cargo: tuple  # ((commodity, amount), ...) sorted by commodity


@dataclass(frozen=True)
class DeploymentEvent:
    structure: str
    node: str
    step: int
    mass_kg: float


@dataclass(frozen=True)
class ManufacturingRecord:
    structure: str
    mass_kg: float
    cost: float


@dataclass(frozen=True)
class MissionPlan:
    """Human-auditable account of one solved scenario."""

    scenario: str
    status: str
    objective: float
    step_months: float
    flows: tuple
    deployments: tuple
    manufacturing: tuple
    vehicles_bought: tuple  # ((vehicle, step, count), ...)
    x: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def isru_mass(self) -> float:
        return sum(rec.mass_kg for rec in self.manufacturing)

    def month(self, step: int) -> float:
        return step * self.step_months


@dataclass(frozen=True)
class CostBreakdown:
    """Where the objective dollars land, recomputed from the plan itself."""

    launch: float = 0.0
    flight_ops: float = 0.0
    propellant_purchase: float = 0.0
    tank: float = 0.0
    isru_manufacturing: float = 0.0
    spacecraft_manufacturing: float = 0.0
    spares: float = 0.0
    other_purchase: float = 0.0

    def total(self) -> float:
        return (
            self.launch
            + self.flight_ops
            + self.propellant_purchase
            + self.tank
            + self.isru_manufacturing
            + self.spacecraft_manufacturing
            + self.spares
            + self.other_purchase
        )

    def as_rows(self) -> list:
        return [
            ("launch", self.launch),
            ("flight-ops", self.flight_ops),
            ("propellant-purchase", self.propellant_purchase),
            ("tank", self.tank),
            ("isru-manufacturing", self.isru_manufacturing),
            ("spacecraft-manufacturing", self.spacecraft_manufacturing),
            ("spares", self.spares),
            ("other-purchase", self.other_purchase),
        ]


def extract_plan(solution: Solution, model, config: ScenarioConfig, builder=None) -> MissionPlan:
    """Read a solved vector back into flows, deployments, and purchases.

    The model is rebuilt from the config when no builder is passed, which
    works because construction is deterministic.  Flows below 1e-6 are
    noise from the tolerance of the solve and are dropped.
    """
    if solution.x is None:
        raise ValueError(f"solution has no values (status {solution.status!r})")
    if builder is None:
        builder, rebuilt = config.build_model()
        if len(rebuilt.vars) != len(model.vars):
            raise ValueError("model does not match the scenario configuration")
    x = np.asarray(solution.x, dtype=float)

    flows = []
    for slot in builder.net.slots:
        cargo = []
        for cid in builder.order:
            val = x[int(builder.flow[(slot.key(), cid)])]
            if val > FLOW_EPS:
                cargo.append((cid, float(val)))
        if cargo:
            v, o, d, t = slot.key()
            flows.append(FlowRecord(v, o, d, t, slot.t_arr, tuple(sorted(cargo))))

    deployments = []
    for sid, ref in sorted(builder.deployment.items()):
        val = float(x[int(ref)])
        if val > FLOW_EPS:
            st = builder._struct_by_id[sid]
            deployments.append(DeploymentEvent(sid, st.node, st.step, val))

    manufacturing = []
    for sid in sorted(builder.choice):
        if x[int(builder.choice[sid])] > 0.5:
            mass = float(x[int(builder.sizing[sid].total)])
            cost = float(x[int(builder.manufacturing[sid])])
            manufacturing.append(ManufacturingRecord(sid, mass, cost))

    bought: dict = {}
    for (vid, t, _k), ref in builder.vehicle_choice.items():
        if x[int(ref)] > 0.5:
            bought[(vid, t)] = bought.get((vid, t), 0) + 1
    vehicles = tuple((vid, t, n) for (vid, t), n in sorted(bought.items()))

    return MissionPlan(
        scenario=config.name,
        status=solution.status,
        objective=float(solution.objective),
        step_months=float(config.step_months),
        flows=tuple(flows),
        deployments=tuple(deployments),
        manufacturing=tuple(manufacturing),
        vehicles_bought=vehicles,
        x=x,
    )


def cost_breakdown(plan: MissionPlan, config: ScenarioConfig) -> CostBreakdown:
    """Re-price a plan from unit costs alone, never from solver terms.

    Purchases happen where cargo leaves the origin; classification follows
    the transport rules so propellant, tankage, and spares dollars land in
    their own buckets.  Preplaced plant delivery fees count as launch
    services since that is bought lift, pre-acquired.
    """
    origin = next(n.id for n in config.nodes if n.body_kind == "planet-surface-origin")
    unit_mass = {c.id: c.unit_mass for c in config.commodities}
    prices = dict(config.prices)
    vehicle_by_commodity = {v.commodity: v for v in config.vehicles}
    tanks = {row[1] for row in config.rules.containment}
    if config.rules.propellant_tank is not None:
        tanks.add(config.rules.propellant_tank)
    propellants = set(config.rules.propellants)

    launch = sum(p.delivery_cost for p in config.plants if p.preplaced)
    ops = 0.0
    buckets = {"prop": 0.0, "tank": 0.0, "spares": 0.0, "other": 0.0}
    for rec in plan.flows:
        if rec.origin == rec.dest:
            continue
        if rec.origin == origin:
            for cid, amount in rec.cargo:
                mass = amount * unit_mass[cid]
                launch += config.launch_cost_per_kg * mass
                paid = prices.get(cid, 0.0) * mass
                if not paid:
                    continue
                if cid in propellants:
                    buckets["prop"] += paid
                elif cid in tanks:
                    buckets["tank"] += paid
                elif cid == config.rules.spares_commodity:
                    buckets["spares"] += paid
                else:
                    buckets["other"] += paid
        else:
            for cid, amount in rec.cargo:
                veh = vehicle_by_commodity.get(cid)
                if veh is not None:
                    ops += veh.ops_cost_per_flight * amount

    isru = 0.0
    for rec in plan.manufacturing:
        plant = next(p for p in config.plants if p.id == rec.structure)
        isru += plant.cost.build().eval(rec.mass_kg)

    fleet = 0.0
    for vid, _t, count in plan.vehicles_bought:
        veh = next(v for v in config.vehicles if v.id == vid)
        fleet += veh.manufacturing_cost * count

    return CostBreakdown(
        launch=launch,
        flight_ops=ops,
        propellant_purchase=buckets["prop"],
        tank=buckets["tank"],
        isru_manufacturing=isru,
        spacecraft_manufacturing=fleet,
        spares=buckets["spares"],
        other_purchase=buckets["other"],
    )


# -- sensitivity sweeps ----------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    parameter: float  # the grid value the scenario was scaled by
    variant: str
    setup: bool
    objective: float
    isru_mass: float
    status: str
    wall_time: float
    timed_out: bool


def _variant_label(cfg: ScenarioConfig) -> str:
    name = cfg.name
    for known in ("distributed", "concentrated"):
        if known in name:
            return known
    return name


def _solve_point(args) -> SweepRow:
    cfg, parameter, value, time_limit, rel_gap = args
    scaled = apply_override(cfg, parameter, value)
    builder, model = scaled.build_model()
    t0 = time.perf_counter()
    sol = solve_milp(model, rel_gap=rel_gap, time_limit=time_limit)
    dt = time.perf_counter() - t0
    mass = math.nan
    if sol.x is not None:
        mass = sum(
            float(sol.x[int(builder.sizing[sid].total)])
            for sid in builder.choice
            if sol.x[int(builder.choice[sid])] > 0.5
        )
    return SweepRow(
        parameter=value,
        variant=_variant_label(cfg),
        setup=cfg.setup_phase,
        objective=float(sol.objective),
        isru_mass=mass,
        status=sol.status,
        wall_time=dt,
        timed_out=sol.status == "time-limit",
    )


def default_workers() -> int:
    env = os.environ.get("ISRUPLAN_WORKERS")
    if env is not None:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(
    base,
    parameter: str,
    grid,
    *,
    time_limit: float = 120.0,
    rel_gap: float = 1e-4,
    workers: int | None = None,
) -> tuple:
    """Solve one scenario (or several) across a parameter grid.

    A point that hits its time limit is flagged and kept; the sweep never
    aborts on it.  Rows come back sorted by (value, variant, setup) no
    matter which worker finished first.
    """
    configs = [base] if isinstance(base, ScenarioConfig) else list(base)
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError("sweep grid is empty")
    points = [(cfg, parameter, value, time_limit, rel_gap) for value in grid for cfg in configs]
    for cfg, param, value, _tl, _gap in points:
        apply_override(cfg, param, value)  # validate the whole grid up front

    n_workers = default_workers() if workers is None else max(1, workers)
    if n_workers > 1 and len(points) > 1:
        import multiprocessing as mp

        with mp.get_context("spawn").Pool(n_workers) as pool:
            rows = pool.map(_solve_point, points)
    else:
        rows = [_solve_point(p) for p in points]
    return tuple(sorted(rows, key=lambda r: (r.parameter, r.variant, r.setup)))


# -- emission --------------------------------------------------------------------


CSV_HEADER = "parameter,variant,setup,objective,isru_mass,status"


def _fmt(value: float, digits: int) -> str:
    if value != value:
        return "nan"
    return f"{value:.{digits}f}"


def sweep_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        status = r.status + ("*" if r.timed_out and not r.status.endswith("limit") else "")
        lines.append(
            f"{r.parameter:g},{r.variant},{str(r.setup).lower()},"
            f"{_fmt(r.objective, 2)},{_fmt(r.isru_mass, 1)},{status}"
        )
    return "\n".join(lines) + "\n"


def _svg_polyline(points, color: str) -> str:
    coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in points)
    return f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>'


_SERIES_COLORS = ("#1b6ca8", "#d1495b", "#3a7d44", "#8d6a9f", "#c08552", "#5c677d")


def sweep_to_svg(rows, title: str = "objective vs parameter") -> str:
    """Line chart of objective against the swept value, one series per case."""
    width, height, margin = 640.0, 400.0, 60.0
    finite = [r for r in rows if r.objective == r.objective]
    if not finite:
        raise ValueError("no finite objectives to plot")
    xs = sorted({r.parameter for r in finite})
    x_lo, x_hi = min(xs), max(xs)
    y_lo = min(r.objective for r in finite)
    y_hi = max(r.objective for r in finite)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0

    def to_px(value: float) -> float:
        return margin + (value - x_lo) / x_span * (width - 2 * margin)

    def to_py(value: float) -> float:
        return height - margin - (value - y_lo) / y_span * (height - 2 * margin)

    series: dict = {}
    for r in finite:
        series.setdefault((r.variant, r.setup), []).append(r)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="24" text-anchor="middle" font-size="16">{title}</text>',
        f'<line x1="{margin:g}" y1="{height - margin:g}" x2="{width - margin:g}" '
        f'y2="{height - margin:g}" stroke="black"/>',
        f'<line x1="{margin:g}" y1="{margin:g}" x2="{margin:g}" y2="{height - margin:g}" stroke="black"/>',
    ]
    for value in xs:
        px = to_px(value)
        parts.append(f'<line x1="{px:.2f}" y1="{height - margin:g}" x2="{px:.2f}" y2="{height - margin + 5:g}" stroke="black"/>')
        parts.append(f'<text x="{px:.2f}" y="{height - margin + 20:g}" text-anchor="middle" font-size="11">{value:g}</text>')
    for frac in (0.0, 0.5, 1.0):
        value = y_lo + frac * y_span
        py = to_py(value)
        parts.append(f'<text x="{margin - 8:g}" y="{py + 4:.2f}" text-anchor="end" font-size="11">{value:.3g}</text>')
    for i, (key, pts) in enumerate(sorted(series.items())):
        pts = sorted(pts, key=lambda r: r.parameter)
        color = _SERIES_COLORS[i % len(_SERIES_COLORS)]
        parts.append(_svg_polyline([(to_px(r.parameter), to_py(r.objective)) for r in pts], color))
        label = key[0] + (" setup" if key[1] else "")
        parts.append(
            f'<text x="{width - margin:g}" y="{margin + 16 * i:.2f}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def plan_to_text(plan: MissionPlan) -> str:
    """Render a plan the way a campaign review reads it, step by step."""
    lines = [
        f"scenario: {plan.scenario}",
        f"status: {plan.status}",
        f"objective: ${plan.objective:,.0f}",
        f"isru mass deployed: {plan.isru_mass:,.1f} kg",
        f"time steps are {plan.step_months:g} months long; month = step x {plan.step_months:g}",
        "",
    ]
    if plan.manufacturing:
        lines.append("structures built:")
        for rec in plan.manufacturing:
            lines.append(f"  {rec.structure}: {rec.mass_kg:,.1f} kg for ${rec.cost:,.0f}")
        lines.append("")
    if plan.deployments:
        lines.append("deployment cargo:")
        for ev in plan.deployments:
            lines.append(
                f"  step {ev.step} (month {plan.month(ev.step):g}): {ev.mass_kg:,.1f} kg to {ev.node} for {ev.structure}"
            )
        lines.append("")
    if plan.vehicles_bought:
        lines.append("vehicles purchased:")
        for vid, t, n in plan.vehicles_bought:
            lines.append(f"  step {t} (month {plan.month(t):g}): {n} x {vid}")
        lines.append("")
    lines.append("flows (kg unless the commodity is discrete):")
    for rec in plan.flows:
        man = ", ".join(f"{cid} {amount:,.1f}" for cid, amount in rec.cargo)
        kind = "hold" if rec.origin == rec.dest else "move"
        lines.append(
            f"  step {rec.depart_step} (month {plan.month(rec.depart_step):g}) "
            f"{kind} {rec.origin}->{rec.dest} [{rec.vehicle}]: {man}"
        )
    return "\n".join(lines) + "\n"


def emit_report(table, fmt: str, title: str = "objective vs parameter") -> str:
    """Render a sweep table (or a plan) to one of the supported formats."""
    if isinstance(table, MissionPlan):
        if fmt != "csv" and fmt != "text":
            raise ValueError("plans render as text or csv")
        if fmt == "text":
            return plan_to_text(table)
        lines = ["record,step,origin,dest,vehicle,commodity,amount"]
        for rec in table.flows:
            for cid, amount in rec.cargo:
                lines.append(
                    f"flow,{rec.depart_step},{rec.origin},{rec.dest},{rec.vehicle},{cid},{amount!r}"
                )
        for ev in table.deployments:
            lines.append(f"deploy,{ev.step},,{ev.node},,{ev.structure},{ev.mass_kg!r}")
        for rec in table.manufacturing:
            lines.append(f"build,,,,,{rec.structure},{rec.mass_kg!r}")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        return sweep_to_csv(table)
    if fmt == "svg":
        return sweep_to_svg(table, title=title)
    raise ValueError(f"unknown report format {fmt!r}")
