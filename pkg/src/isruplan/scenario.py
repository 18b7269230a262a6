"""Scenario configuration: strict JSON parsing, bundled cases, overrides.

A scenario holds the static network, commodity set, vehicles, candidate
plants, prices, and annual demand schedule.  Curves are stored as scaling
rules rather than raw breakpoints so parameter overrides can regenerate
them consistently.  Parsing is strict: unknown keys and type mismatches
fail with the offending JSON path in the message.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources

from .builder import MilpBuilder, StructureSpec, TransportRules, VehicleSpec
from .network import ArcSpec, Commodity, NodeSpec, build_time_expanded_graph, validate_network
from .pwl import PiecewiseLinearConcave, from_scaling_rule

BUILTIN_SCENARIOS = {
    "cislunar-concentrated": "cislunar_concentrated.json",
    "cislunar-distributed": "cislunar_distributed.json",
}

OVERRIDE_PARAMS = (
    "isru-productivity",
    "volume-discount",
    "cost-discount",
    "mass-interval",
    "mission-years",
)


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario data."""


@dataclass(frozen=True)
class CurveRule:
    """Generator parameters for one piecewise-linear curve."""

    base_slope: float
    interval: float
    rate: float
    direction: str
    intervals: int
    flat_head: tuple | None = None

    def build(self) -> PiecewiseLinearConcave:
        return from_scaling_rule(
            self.base_slope,
            self.interval,
            self.rate,
            self.direction,
            self.intervals,
            flat_head=self.flat_head,
        )


@dataclass(frozen=True)
class PlantConfig:
    """One candidate plant deployment, with its curve rules."""

    id: str
    kind: str
    node: str
    step: int
    sizing: CurveRule
    cost: CurveRule
    maintenance_fraction: float = 0.0
    preplaced: bool = False
    fixed_mass: float | None = None
    delivery_cost: float = 0.0

    def to_structure(self) -> StructureSpec:
        return StructureSpec(
            id=self.id,
            kind=self.kind,
            node=self.node,
            step=self.step,
            sizing=self.sizing.build(),
            cost=self.cost.build(),
            maintenance_fraction=self.maintenance_fraction,
            preplaced=self.preplaced,
            fixed_mass=self.fixed_mass,
            delivery_cost=self.delivery_cost,
        )


@dataclass(frozen=True)
class DemandSpec:
    """Annual commodity demand (negative) or cap on supply (positive) at a node."""

    node: str
    commodity: str
    kg_per_year: float


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    step_months: int
    mission_years: int
    first_demand_step: int
    nodes: tuple
    arcs: tuple
    commodities: tuple
    launch_cost_per_kg: float
    demands: tuple
    description: str = ""
    setup_phase: bool = False
    vehicles: tuple = ()
    plants: tuple = ()
    rules: TransportRules = field(default_factory=TransportRules)
    prices: dict = field(default_factory=dict)
    supply_commodities: tuple = ()
    supply_amount: float = 0.0

    # -- derived timing ----------------------------------------------------

    @property
    def steps_per_year(self) -> int:
        return 12 // self.step_months

    @property
    def step_years(self) -> float:
        return self.step_months / 12.0

    @property
    def effective_first_step(self) -> int:
        # a setup phase postpones deliveries by one year of quiet build-up
        shift = self.steps_per_year if self.setup_phase else 0
        return self.first_demand_step + shift

    @property
    def demand_steps(self) -> tuple:
        first = self.effective_first_step
        spy = self.steps_per_year
        return tuple(first + k * spy for k in range(self.mission_years))

    @property
    def horizon(self) -> int:
        return self.demand_steps[-1]

    # -- model construction --------------------------------------------------

    def demand_map(self) -> dict:
        out: dict = {}
        for d in self.demands:
            for t in self.demand_steps:
                key = (d.node, d.commodity, t)
                out[key] = out.get(key, 0.0) + d.kg_per_year
        if self.supply_commodities:
            origin = next(n.id for n in self.nodes if n.body_kind == "planet-surface-origin")
            for cid in self.supply_commodities:
                for t in range(self.horizon):
                    key = (origin, cid, t)
                    out[key] = out.get(key, 0.0) + self.supply_amount
        return out

    def build_network(self):
        vehicle_ids = tuple(v.id for v in self.vehicles) or ("v0",)
        net = build_time_expanded_graph(self.nodes, self.arcs, self.horizon, vehicles=vehicle_ids)
        defects = validate_network(net, demand_nodes={d.node for d in self.demands})
        if defects:
            raise ScenarioError(f"scenario {self.name!r}: " + "; ".join(defects))
        return net

    def build_model(self):
        """Assemble the MILP; returns (builder, model)."""
        builder = MilpBuilder(
            self.build_network(),
            self.commodities,
            vehicles=self.vehicles,
            structures=tuple(p.to_structure() for p in self.plants),
            rules=self.rules,
            prices=self.prices,
            launch_cost_per_kg=self.launch_cost_per_kg,
            demands=self.demand_map(),
            step_years=self.step_years,
            name=self.name,
        )
        return builder, builder.build()


# -- strict parsing ------------------------------------------------------------

_REQUIRED = object()


def _pop(data: dict, key: str, kind: str, path: str, default=_REQUIRED):
    if key not in data:
        if default is _REQUIRED:
            raise ScenarioError(f"{path}: missing required key {key!r}")
        return default
    val = data.pop(key)
    if val is None and default is not _REQUIRED:
        # an explicit null opts out of an optional value
        return None
    ok = {
        "str": lambda v: isinstance(v, str),
        "num": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
        "int": lambda v: isinstance(v, int) and not isinstance(v, bool),
        "bool": lambda v: isinstance(v, bool),
        "list": lambda v: isinstance(v, list),
        "dict": lambda v: isinstance(v, dict),
    }[kind]
    if not ok(val):
        raise ScenarioError(f"{path}.{key}: expected {kind}, got {type(val).__name__}")
    if kind == "num":
        return float(val)
    return val


def _done(data: dict, path: str) -> None:
    if data:
        raise ScenarioError(f"{path}: unknown keys {sorted(data)}")


def _str_list(val, path: str) -> tuple:
    for i, v in enumerate(val):
        if not isinstance(v, str):
            raise ScenarioError(f"{path}[{i}]: expected str")
    return tuple(val)


def _parse_curve(data, path: str) -> CurveRule:
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: expected dict")
    data = dict(data)
    base = _pop(data, "base_slope", "num", path)
    interval = _pop(data, "interval_kg", "num", path)
    rate = _pop(data, "rate", "num", path)
    direction = _pop(data, "direction", "str", path)
    intervals = _pop(data, "intervals", "int", path)
    head = _pop(data, "flat_head", "dict", path, default=None)
    flat = None
    if head is not None:
        head = dict(head)
        flat = (_pop(head, "width_kg", "num", f"{path}.flat_head"), _pop(head, "value", "num", f"{path}.flat_head"))
        _done(head, f"{path}.flat_head")
    _done(data, path)
    rule = CurveRule(base, interval, rate, direction, intervals, flat)
    try:
        rule.build()
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    return rule


def _parse_node(data, path: str) -> NodeSpec:
    data = dict(data)
    node = NodeSpec(
        id=_pop(data, "id", "str", path),
        name=_pop(data, "name", "str", path),
        body_kind=_pop(data, "body_kind", "str", path),
        deployment_allowed=frozenset(_str_list(_pop(data, "deployment_allowed", "list", path, default=[]), f"{path}.deployment_allowed")),
        regolith=_pop(data, "regolith", "bool", path, default=False),
    )
    _done(data, path)
    return node


def _parse_arc(data, path: str) -> ArcSpec:
    data = dict(data)
    windows = _pop(data, "windows", "list", path, default=None)
    arc = ArcSpec(
        origin=_pop(data, "origin", "str", path),
        dest=_pop(data, "dest", "str", path),
        delta_v=_pop(data, "delta_v", "num", path, default=0.0),
        tof=_pop(data, "tof", "int", path, default=1),
        windows=None if windows is None else frozenset(windows),
    )
    _done(data, path)
    return arc


def _parse_commodity(data, path: str) -> Commodity:
    data = dict(data)
    com = Commodity(
        id=_pop(data, "id", "str", path),
        name=_pop(data, "name", "str", path),
        kind=_pop(data, "kind", "str", path),
        unit=_pop(data, "unit", "str", path, default="kg"),
        unit_mass=_pop(data, "unit_mass", "num", path, default=1.0),
    )
    _done(data, path)
    return com


def _parse_vehicle(data, path: str) -> VehicleSpec:
    data = dict(data)
    windows = _pop(data, "windows", "list", path, default=None)
    veh = VehicleSpec(
        id=_pop(data, "id", "str", path),
        commodity=_pop(data, "commodity", "str", path),
        isp=_pop(data, "isp", "num", path),
        propellant_capacity=_pop(data, "propellant_capacity", "num", path),
        payload_capacity=_pop(data, "payload_capacity", "num", path, default=None),
        availability=_pop(data, "availability", "int", path),
        manufacturing_cost=_pop(data, "manufacturing_cost", "num", path),
        ops_cost_per_flight=_pop(data, "ops_cost_per_flight", "num", path),
        windows=None if windows is None else tuple(windows),
    )
    _done(data, path)
    return veh


def _parse_plant(data, path: str) -> PlantConfig:
    data = dict(data)
    plant = PlantConfig(
        id=_pop(data, "id", "str", path),
        kind=_pop(data, "kind", "str", path),
        node=_pop(data, "node", "str", path),
        step=_pop(data, "step", "int", path),
        sizing=_parse_curve(_pop(data, "sizing", "dict", path), f"{path}.sizing"),
        cost=_parse_curve(_pop(data, "cost", "dict", path), f"{path}.cost"),
        maintenance_fraction=_pop(data, "maintenance_fraction", "num", path, default=0.0),
        preplaced=_pop(data, "preplaced", "bool", path, default=False),
        fixed_mass=_pop(data, "fixed_mass", "num", path, default=None),
        delivery_cost=_pop(data, "delivery_cost", "num", path, default=0.0),
    )
    _done(data, path)
    return plant


def _parse_transport(data, path: str) -> TransportRules:
    data = dict(data)
    containment = []
    for i, row in enumerate(_pop(data, "containment", "list", path, default=[])):
        if not (isinstance(row, list) and len(row) == 3):
            raise ScenarioError(f"{path}.containment[{i}]: expected [commodity, tank, kg_per_kg]")
        containment.append((str(row[0]), str(row[1]), float(row[2])))
    rules = TransportRules(
        cargo=_str_list(_pop(data, "cargo", "list", path, default=[]), f"{path}.cargo"),
        propellants=_str_list(_pop(data, "propellants", "list", path, default=[]), f"{path}.propellants"),
        propellant_tank=_pop(data, "propellant_tank", "str", path, default=None),
        propellant_tank_rate=_pop(data, "propellant_tank_rate", "num", path, default=0.0),
        containment=tuple(containment),
        deployment_commodity=_pop(data, "deployment_commodity", "str", path, default="payload"),
        spares_commodity=_pop(data, "spares_commodity", "str", path, default="spares"),
        discrete_flow_caps=_pop(data, "discrete_flow_caps", "dict", path, default={}),
    )
    _done(data, path)
    return rules


def _parse_demand(data, path: str) -> DemandSpec:
    data = dict(data)
    dem = DemandSpec(
        node=_pop(data, "node", "str", path),
        commodity=_pop(data, "commodity", "str", path),
        kg_per_year=_pop(data, "kg_per_year", "num", path),
    )
    _done(data, path)
    return dem


def parse_scenario(data: dict) -> ScenarioConfig:
    """Validate a scenario dictionary and return the typed configuration."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario: expected a JSON object")
    data = dict(data)
    path = "scenario"
    name = _pop(data, "name", "str", path)
    description = _pop(data, "description", "str", path, default="")
    step_months = _pop(data, "step_months", "int", path)
    if step_months < 1 or 12 % step_months != 0:
        raise ScenarioError(f"{path}.step_months: must divide 12")
    mission_years = _pop(data, "mission_years", "int", path)
    if mission_years < 1:
        raise ScenarioError(f"{path}.mission_years: must be at least 1")
    setup_phase = _pop(data, "setup_phase", "bool", path, default=False)
    first_step = _pop(data, "first_demand_step", "int", path)
    if first_step < 1:
        raise ScenarioError(f"{path}.first_demand_step: must be at least 1")

    nodes = tuple(
        _parse_node(n, f"{path}.nodes[{i}]") for i, n in enumerate(_pop(data, "nodes", "list", path))
    )
    arcs = tuple(
        _parse_arc(a, f"{path}.arcs[{i}]") for i, a in enumerate(_pop(data, "arcs", "list", path))
    )
    commodities = tuple(
        _parse_commodity(c, f"{path}.commodities[{i}]")
        for i, c in enumerate(_pop(data, "commodities", "list", path))
    )
    vehicles = tuple(
        _parse_vehicle(v, f"{path}.vehicles[{i}]")
        for i, v in enumerate(_pop(data, "vehicles", "list", path, default=[]))
    )
    transport = _pop(data, "transport", "dict", path, default=None)
    rules = _parse_transport(transport, f"{path}.transport") if transport is not None else TransportRules()
    prices = _pop(data, "prices", "dict", path, default={})
    plants = tuple(
        _parse_plant(p, f"{path}.structures[{i}]")
        for i, p in enumerate(_pop(data, "structures", "list", path, default=[]))
    )
    demands = tuple(
        _parse_demand(d, f"{path}.demands[{i}]")
        for i, d in enumerate(_pop(data, "demands", "list", path))
    )
    supplies = _pop(data, "supplies", "dict", path, default=None)
    supply_commodities: tuple = ()
    supply_amount = 0.0
    if supplies is not None:
        supplies = dict(supplies)
        supply_commodities = _str_list(
            _pop(supplies, "commodities", "list", f"{path}.supplies"), f"{path}.supplies.commodities"
        )
        supply_amount = _pop(supplies, "amount", "num", f"{path}.supplies")
        _done(supplies, f"{path}.supplies")
    launch = _pop(data, "launch_cost_per_kg", "num", path)
    _done(data, path)

    cfg = ScenarioConfig(
        name=name,
        description=description,
        step_months=step_months,
        mission_years=mission_years,
        setup_phase=setup_phase,
        first_demand_step=first_step,
        nodes=nodes,
        arcs=arcs,
        commodities=commodities,
        vehicles=vehicles,
        plants=plants,
        rules=rules,
        prices=dict(prices),
        launch_cost_per_kg=launch,
        demands=demands,
        supply_commodities=supply_commodities,
        supply_amount=supply_amount,
    )
    _validate_references(cfg)
    return cfg


def _validate_references(cfg: ScenarioConfig) -> None:
    node_ids = {n.id for n in cfg.nodes}
    com_ids = {c.id for c in cfg.commodities}
    for i, p in enumerate(cfg.plants):
        if p.node not in node_ids:
            raise ScenarioError(f"scenario.structures[{i}]: unknown node {p.node!r}")
    for i, d in enumerate(cfg.demands):
        if d.node not in node_ids:
            raise ScenarioError(f"scenario.demands[{i}]: unknown node {d.node!r}")
        if d.commodity not in com_ids:
            raise ScenarioError(f"scenario.demands[{i}]: unknown commodity {d.commodity!r}")
    for i, v in enumerate(cfg.vehicles):
        if v.commodity not in com_ids:
            raise ScenarioError(f"scenario.vehicles[{i}]: unknown commodity {v.commodity!r}")
    for cid in cfg.prices:
        if cid not in com_ids:
            raise ScenarioError(f"scenario.prices: unknown commodity {cid!r}")
    for cid in cfg.supply_commodities:
        if cid not in com_ids:
            raise ScenarioError(f"scenario.supplies: unknown commodity {cid!r}")
    for group, ids in (
        ("cargo", cfg.rules.cargo),
        ("propellants", cfg.rules.propellants),
    ):
        for cid in ids:
            if cid not in com_ids:
                raise ScenarioError(f"scenario.transport.{group}: unknown commodity {cid!r}")


# -- serialization --------------------------------------------------------------


def _curve_dict(rule: CurveRule) -> dict:
    out = {
        "base_slope": rule.base_slope,
        "interval_kg": rule.interval,
        "rate": rule.rate,
        "direction": rule.direction,
        "intervals": rule.intervals,
    }
    if rule.flat_head is not None:
        out["flat_head"] = {"width_kg": rule.flat_head[0], "value": rule.flat_head[1]}
    return out


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    """Inverse of parse_scenario: the result parses back to an equal config."""
    out: dict = {
        "name": cfg.name,
        "description": cfg.description,
        "step_months": cfg.step_months,
        "mission_years": cfg.mission_years,
        "setup_phase": cfg.setup_phase,
        "first_demand_step": cfg.first_demand_step,
        "nodes": [
            {
                "id": n.id,
                "name": n.name,
                "body_kind": n.body_kind,
                "deployment_allowed": sorted(n.deployment_allowed),
                "regolith": n.regolith,
            }
            for n in cfg.nodes
        ],
        "arcs": [
            {
                "origin": a.origin,
                "dest": a.dest,
                "delta_v": a.delta_v,
                "tof": a.tof,
                **({"windows": sorted(a.windows)} if a.windows is not None else {}),
            }
            for a in cfg.arcs
        ],
        "commodities": [
            {"id": c.id, "name": c.name, "kind": c.kind, "unit": c.unit, "unit_mass": c.unit_mass}
            for c in cfg.commodities
        ],
        "vehicles": [
            {
                "id": v.id,
                "commodity": v.commodity,
                "isp": v.isp,
                "propellant_capacity": v.propellant_capacity,
                **({"payload_capacity": v.payload_capacity} if v.payload_capacity is not None else {}),
                "availability": v.availability,
                "manufacturing_cost": v.manufacturing_cost,
                "ops_cost_per_flight": v.ops_cost_per_flight,
                **({"windows": list(v.windows)} if v.windows is not None else {}),
            }
            for v in cfg.vehicles
        ],
        "transport": {
            "cargo": list(cfg.rules.cargo),
            "propellants": list(cfg.rules.propellants),
            **(
                {"propellant_tank": cfg.rules.propellant_tank, "propellant_tank_rate": cfg.rules.propellant_tank_rate}
                if cfg.rules.propellant_tank is not None
                else {}
            ),
            "containment": [list(row) for row in cfg.rules.containment],
            "deployment_commodity": cfg.rules.deployment_commodity,
            "spares_commodity": cfg.rules.spares_commodity,
            "discrete_flow_caps": dict(cfg.rules.discrete_flow_caps),
        },
        "prices": dict(cfg.prices),
        "structures": [
            {
                "id": p.id,
                "kind": p.kind,
                "node": p.node,
                "step": p.step,
                "sizing": _curve_dict(p.sizing),
                "cost": _curve_dict(p.cost),
                "maintenance_fraction": p.maintenance_fraction,
                "preplaced": p.preplaced,
                **({"fixed_mass": p.fixed_mass} if p.fixed_mass is not None else {}),
                "delivery_cost": p.delivery_cost,
            }
            for p in cfg.plants
        ],
        "demands": [
            {"node": d.node, "commodity": d.commodity, "kg_per_year": d.kg_per_year} for d in cfg.demands
        ],
        "launch_cost_per_kg": cfg.launch_cost_per_kg,
    }
    if cfg.supply_commodities:
        out["supplies"] = {"commodities": list(cfg.supply_commodities), "amount": cfg.supply_amount}
    return out


def loads_scenario(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario: invalid JSON ({exc})") from None
    return parse_scenario(data)


def load_scenario(source: str) -> ScenarioConfig:
    """Load a scenario from a file path or a builtin:<name> reference."""
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        if name not in BUILTIN_SCENARIOS:
            known = ", ".join(sorted(BUILTIN_SCENARIOS))
            raise ScenarioError(f"unknown builtin scenario {name!r} (known: {known})")
        text = resources.files("isruplan.data").joinpath(BUILTIN_SCENARIOS[name]).read_text()
        return loads_scenario(text)
    with open(source, "r", encoding="utf-8") as fh:
        return loads_scenario(fh.read())


def builtin_cislunar_case(variant: str = "concentrated", setup_phase: bool = False) -> ScenarioConfig:
    """The bundled cislunar water-mining case study.

    variant picks where electrolysis may be deployed: concentrated keeps
    every plant on the lunar surface, distributed adds an orbital
    electrolysis candidate.  With a setup phase, deliveries start one year
    later and no plant is preplaced: the fleet builds its own capacity.
    """
    if variant not in ("concentrated", "distributed"):
        raise ScenarioError(f"unknown variant {variant!r}")
    cfg = load_scenario(f"builtin:cislunar-{variant}")
    return with_setup_phase(cfg) if setup_phase else cfg


def with_setup_phase(cfg: ScenarioConfig) -> ScenarioConfig:
    """Shift deliveries a year out and make the fleet build its own capacity."""
    if cfg.setup_phase:
        return cfg
    return replace(
        cfg,
        name=f"{cfg.name}-setup",
        setup_phase=True,
        plants=tuple(p for p in cfg.plants if not p.preplaced),
    )


# -- parameter overrides ---------------------------------------------------------


def _scaled_curve(rule: CurveRule, *, slope=1.0, rate=1.0, interval=1.0) -> CurveRule:
    return replace(
        rule,
        base_slope=rule.base_slope * slope,
        rate=rule.rate * rate,
        interval=rule.interval * interval,
    )


def apply_override(cfg: ScenarioConfig, param: str, multiplier: float) -> ScenarioConfig:
    """Scale one scenario parameter by a positive multiplier."""
    if param not in OVERRIDE_PARAMS:
        known = ", ".join(OVERRIDE_PARAMS)
        raise ScenarioError(f"unknown override parameter {param!r} (known: {known})")
    if not multiplier > 0:
        raise ScenarioError(f"override {param}: multiplier must be positive, got {multiplier}")

    if param == "mission-years":
        years = round(cfg.mission_years * multiplier)
        if years < 1:
            raise ScenarioError(f"override {param}: {multiplier} leaves no mission years")
        return replace(cfg, mission_years=int(years))

    plants = []
    for p in cfg.plants:
        if param == "isru-productivity":
            p = replace(p, sizing=_scaled_curve(p.sizing, slope=multiplier))
        elif param == "volume-discount":
            p = replace(p, sizing=_scaled_curve(p.sizing, rate=multiplier))
        elif param == "cost-discount":
            p = replace(p, cost=_scaled_curve(p.cost, rate=multiplier))
        elif param == "mass-interval":
            p = replace(
                p,
                sizing=_scaled_curve(p.sizing, interval=multiplier),
                cost=_scaled_curve(p.cost, interval=multiplier),
            )
        plants.append(p)
    out = replace(cfg, plants=tuple(plants))
    for i, p in enumerate(out.plants):
        for label, rule in (("sizing", p.sizing), ("cost", p.cost)):
            try:
                rule.build()
            except ValueError as exc:
                raise ScenarioError(f"override {param}: structures[{i}].{label}: {exc}") from None
        if p.fixed_mass is not None and p.fixed_mass > p.sizing.interval * p.sizing.intervals:
            raise ScenarioError(f"override {param}: structures[{i}] fixed mass exceeds curve range")
    return out
