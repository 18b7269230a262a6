"""Assembly of the mission-planning MILP over a time-expanded network.

The model is a multicommodity flow problem with side structure: piecewise
linear plant sizing and cost curves whose active interval is picked by
binaries, big-M products tying purchase decisions to plant cost and
deployed mass, vehicle capacity coupling rows, and per-slot propellant
feasibility for every burn.  Construction is deterministic: variable and
row order depend only on declared input order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import INF, MilpModel, ModelError, VariableRef
from .network import LH2, LO2, burn_transformation, processing_deltas
from .pwl import PiecewiseLinearConcave


@dataclass(frozen=True)
class VehicleSpec:
    """A reusable transport vehicle purchased at the launch origin.

    The vehicle itself travels as the discrete commodity named by
    ``commodity``; its count on a slot is what capacity rows scale with.
    ``windows`` lists admissible purchase steps, None meaning every step.
    A payload_capacity of None leaves cargo mass unconstrained.
    """

    id: str
    commodity: str
    isp: float
    propellant_capacity: float
    payload_capacity: float | None
    availability: int
    manufacturing_cost: float
    ops_cost_per_flight: float
    windows: tuple | None = None

    def __post_init__(self):
        if self.isp <= 0:
            raise ModelError("vehicle isp must be positive")
        if self.availability < 1:
            raise ModelError("vehicle availability must be at least 1")
        if self.windows is not None:
            object.__setattr__(self, "windows", tuple(sorted(int(w) for w in self.windows)))


@dataclass(frozen=True)
class StructureSpec:
    """A deployable processing plant with sizing and cost curves.

    sizing maps plant mass to rated annual throughput; cost maps plant
    mass to purchase price.  node/step place the single deployment.  A
    preplaced plant is already on site at its step: no transport demand
    is generated, the mass is pinned to fixed_mass, and delivery_cost is
    charged as a constant.
    """

    id: str
    kind: str
    node: str
    step: int
    sizing: PiecewiseLinearConcave
    cost: PiecewiseLinearConcave
    maintenance_fraction: float = 0.0  # deployed-mass fraction per year, as spares
    preplaced: bool = False
    fixed_mass: float | None = None
    delivery_cost: float = 0.0

    def __post_init__(self):
        if self.maintenance_fraction < 0:
            raise ModelError("maintenance fraction must be non-negative")
        if self.preplaced and (self.fixed_mass is None or self.fixed_mass <= 0):
            raise ModelError(f"preplaced structure {self.id!r} needs a positive fixed_mass")


@dataclass(frozen=True)
class TransportRules:
    """Commodity roles: what shares cargo space, what burns, what contains what."""

    cargo: tuple = ()
    propellants: tuple = ()
    propellant_tank: str | None = None
    propellant_tank_rate: float = 0.0  # kg propellant per kg of tank
    containment: tuple = ()  # (commodity, tank commodity, kg per kg of tank)
    deployment_commodity: str = "payload"
    spares_commodity: str = "spares"
    discrete_flow_caps: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "cargo", tuple(self.cargo))
        object.__setattr__(self, "propellants", tuple(self.propellants))
        object.__setattr__(self, "containment", tuple(tuple(c) for c in self.containment))


@dataclass(frozen=True)
class PwlEncoding:
    """Handles to one encoded curve: total input, curve value, per-interval vars."""

    total: VariableRef
    value: VariableRef
    segment_vars: tuple
    binary_vars: tuple
    pwl: PiecewiseLinearConcave


def encode_piecewise(
    model: MilpModel,
    pwl: PiecewiseLinearConcave,
    *,
    seg_base: str,
    bin_base: str,
    total_name: str,
    value_name: str,
    row_base: str | None = None,
    gate: VariableRef | None = None,
) -> PwlEncoding:
    """Exact interval encoding of value = pwl(total).

    One binary per interval picks the active segment; the matching segment
    variable is forced into [lower, upper] while the others collapse to 0,
    so the value expression reproduces the curve exactly rather than its
    convex envelope.  With no interval picked, total and value are both 0.
    gate replaces the at-most-one row's right side: sum of binaries <= gate.
    """
    if row_base is None:
        row_base = total_name
    segs: list[VariableRef] = []
    bins: list[VariableRef] = []
    vdef: dict[VariableRef, float] = {}
    for r, lo, hi, slope, intercept in pwl.segments():
        g = model.add_var(f"{bin_base}_{r}", 0.0, 1.0, is_integer=True)
        q = model.add_var(f"{seg_base}_{r}", 0.0, hi)
        # lo*g <= q <= hi*g
        model.add_constr(f"{row_base}_lo_{r}", {q: 1.0, g: -lo}, ">=", 0.0)
        model.add_constr(f"{row_base}_hi_{r}", {q: 1.0, g: -hi}, "<=", 0.0)
        vdef[q] = -slope
        vdef[g] = -intercept
        segs.append(q)
        bins.append(g)
    pick: dict[VariableRef, float] = {g: 1.0 for g in bins}
    if gate is None:
        model.add_constr(f"{row_base}_pick", pick, "<=", 1.0)
    else:
        pick[gate] = -1.0
        model.add_constr(f"{row_base}_pick", pick, "<=", 0.0)
    total = model.add_var(total_name, 0.0, pwl.domain_max)
    tdef: dict[VariableRef, float] = {total: 1.0}
    for q in segs:
        tdef[q] = -1.0
    model.add_constr(f"{row_base}_total", tdef, "=", 0.0)
    # value is linear per segment, so its range is spanned at breakpoints
    vals = [pwl.eval(b) for b in pwl.breakpoints[1:]]
    value = model.add_var(value_name, min(0.0, min(vals)), max(0.0, max(vals)))
    vdef[value] = 1.0
    model.add_constr(f"{row_base}_def", vdef, "=", 0.0)
    return PwlEncoding(total, value, tuple(segs), tuple(bins), pwl)


def link_product(
    model: MilpModel,
    name: str,
    switch: VariableRef,
    factor: VariableRef,
    upper: float,
) -> VariableRef:
    """Linearize product = switch * factor for a binary switch, 0 <= factor <= upper."""
    if not np.isfinite(upper) or upper < 0:
        raise ModelError(f"product {name!r} needs a finite non-negative cap")
    upper = float(upper)
    z = model.add_var(name, 0.0, upper)
    model.add_constr(f"{name}_cap", {z: 1.0, switch: -upper}, "<=", 0.0)
    model.add_constr(f"{name}_ub", {z: 1.0, factor: -1.0}, "<=", 0.0)
    # switch at 1 pins z onto factor from below; switch at 0 slackens the row
    model.add_constr(f"{name}_lb", {z: 1.0, factor: -1.0, switch: -upper}, ">=", -upper)
    return z


class MilpBuilder:
    """Builds the full mission MILP; keep the instance for its lookup maps.

    Flow, balance-row, structure, and capacity maps are how reports and
    post-solve checks find their variables again.  build() runs the
    assembly operations in a fixed canonical order.
    """

    def __init__(
        self,
        net,
        commodities,
        vehicles=(),
        structures=(),
        rules: TransportRules | None = None,
        prices=None,
        launch_cost_per_kg: float = 0.0,
        demands=None,
        step_years: float = 0.5,
        name: str = "mission",
    ):
        self.net = net
        self.commodities = tuple(commodities)
        self.order = tuple(c.id for c in self.commodities)
        self._cidx = {cid: i for i, cid in enumerate(self.order)}
        self.vehicles = tuple(vehicles)
        self.structures = tuple(structures)
        self.rules = rules if rules is not None else TransportRules()
        self.prices = dict(prices) if prices else {}
        self.launch_cost_per_kg = float(launch_cost_per_kg)
        self.demands = dict(demands) if demands else {}
        self.step_years = float(step_years)
        if self.step_years <= 0:
            raise ModelError("step_years must be positive")
        self.model = MilpModel(name)

        self.flow: dict = {}
        self.balance: dict = {}
        self.sizing: dict = {}
        self.cost: dict = {}
        self.choice: dict = {}
        self.manufacturing: dict = {}
        self.deployment: dict = {}
        self.processing: dict = {}
        self.capacity: dict = {}
        self.vehicle_choice: dict = {}
        self.vehicle_manufacturing: dict = {}

        self._transforms: dict = {}
        self._built = False
        self._by_vehicle_id = {}
        self._vehicle_by_commodity = {}
        for v in self.vehicles:
            if v.id in self._by_vehicle_id:
                raise ModelError(f"duplicate vehicle id {v.id!r}")
            if v.commodity not in self._cidx:
                raise ModelError(f"vehicle {v.id!r} rides unknown commodity {v.commodity!r}")
            self._by_vehicle_id[v.id] = v
            self._vehicle_by_commodity[v.commodity] = v
        self._struct_by_id = {}
        for st in self.structures:
            if st.id in self._struct_by_id:
                raise ModelError(f"duplicate structure id {st.id!r}")
            self._struct_by_id[st.id] = st
            self._validate_structure(st)
        self._validate_demands()
        neg = [t for (_, _, t), d in self.demands.items() if d < 0]
        self._last_delivery_step = max(neg) if neg else self.net.horizon

    # -- validation ------------------------------------------------------

    def _validate_structure(self, st: StructureSpec) -> None:
        node = self.net.nodes.get(st.node)
        if node is None:
            raise ModelError(f"structure {st.id!r} sits at unknown node {st.node!r}")
        if st.kind not in node.deployment_allowed:
            raise ModelError(f"node {st.node!r} does not admit {st.kind!r} deployment")
        if not 0 <= st.step < self.net.horizon:
            raise ModelError(f"structure {st.id!r} deploys outside the horizon")
        if st.fixed_mass is not None and st.fixed_mass > st.sizing.domain_max:
            raise ModelError(f"fixed mass of {st.id!r} exceeds its sizing curve range")
        if st.cost.domain_max < st.sizing.domain_max:
            raise ModelError(f"cost curve of {st.id!r} covers less mass than its sizing curve")

    def _validate_demands(self) -> None:
        for nid, cid, t in self.demands:
            if nid not in self.net.nodes:
                raise ModelError(f"demand at unknown node {nid!r}")
            if cid not in self._cidx:
                raise ModelError(f"demand for unknown commodity {cid!r}")
            if not 0 <= t <= self.net.horizon:
                raise ModelError(f"demand step {t} outside horizon {self.net.horizon}")

    # -- assembly operations ----------------------------------------------

    def build(self) -> MilpModel:
        if self._built:
            raise ModelError("model already built")
        self.add_flow_variables()
        self.add_mass_balance()
        for st in self.structures:
            self.encode_pwl_sizing(st.id)
            self.encode_pwl_cost(st.id)
            self.add_manufacturing(st.id)
            self.add_facility_deployment(st.id)
        self.add_spacecraft_supply()
        self.add_concurrency()
        self.assemble_objective()
        self._built = True
        return self.model

    def add_flow_variables(self) -> dict:
        """One variable per (vehicle, arc, departure step, commodity)."""
        for slot in self.net.slots:
            v, o, d, t = slot.key()
            for c in self.commodities:
                name = f"x_{v}_{o}_{d}_{t}_{c.id}"
                if c.kind == "discrete":
                    ref = self.model.add_var(name, 0.0, self._discrete_cap(c, t), is_integer=True)
                else:
                    ref = self.model.add_var(name, 0.0, INF)
                self.flow[(slot.key(), c.id)] = ref
        return self.flow

    def _discrete_cap(self, c, t: int) -> float:
        veh = self._vehicle_by_commodity.get(c.id)
        if veh is not None:
            if veh.windows is None:
                n = t + 1
            else:
                n = sum(1 for w in veh.windows if w <= t)
            return float(veh.availability * n)
        cap = self.rules.discrete_flow_caps.get(c.id)
        if cap is None:
            raise ModelError(f"discrete commodity {c.id!r} needs a flow cap")
        return float(cap)

    def _slot_linear_transform(self, slot):
        """Linear commodity transform along a slot; None means identity.

        Slots departing the origin are purchased lift: their per-kg launch
        price stands in for ascent propulsion, so no burn applies even when
        the arc records a delta-v.
        """
        arc = slot.arc
        if arc.is_holdover or arc.delta_v == 0.0 or arc.origin == self.net.origin_id:
            return None
        veh = self._by_vehicle_id.get(slot.vehicle)
        if veh is None:
            raise ModelError(f"burning arc {arc.origin}->{arc.dest} needs a vehicle spec for {slot.vehicle!r}")
        key = (slot.vehicle, arc.delta_v)
        if key not in self._transforms:
            tm = burn_transformation(arc.delta_v, veh.isp, self.commodities)
            n = len(self.order)
            self._transforms[key] = tm.matrix[:n, :n]
        return self._transforms[key]

    def add_mass_balance(self) -> dict:
        """Conservation row per (node, step, commodity).

        Departures count positively, arrivals negatively through the slot
        transform; the right side is the net exogenous supply (positive) or
        delivery requirement (negative).  Later operations accumulate their
        own terms onto these rows by name.
        """
        for nid in self.net.nodes:
            for t in range(self.net.horizon + 1):
                for c in self.commodities:
                    k = self._cidx[c.id]
                    coeffs: dict[VariableRef, float] = {}
                    for slot in self.net.departing(nid, t):
                        ref = self.flow[(slot.key(), c.id)]
                        coeffs[ref] = coeffs.get(ref, 0.0) + 1.0
                    for slot in self.net.arriving(nid, t):
                        q = self._slot_linear_transform(slot)
                        if q is None:
                            ref = self.flow[(slot.key(), c.id)]
                            coeffs[ref] = coeffs.get(ref, 0.0) - 1.0
                            continue
                        for j, cj in enumerate(self.order):
                            if q[k, j] != 0.0:
                                ref = self.flow[(slot.key(), cj)]
                                coeffs[ref] = coeffs.get(ref, 0.0) - q[k, j]
                    name = f"mb_{nid}_{t}_{c.id}"
                    self.model.add_constr(name, coeffs, "<=", self.demands.get((nid, c.id, t), 0.0))
                    self.balance[(nid, c.id, t)] = name
        return self.balance

    def _ensure_choice(self, sid: str) -> VariableRef:
        if sid in self.choice:
            return self.choice[sid]
        st = self._struct_by_id[sid]
        lb = 1.0 if st.preplaced else 0.0
        ref = self.model.add_var(f"Y_{sid}", lb, 1.0, is_integer=True)
        self.choice[sid] = ref
        return ref

    def encode_pwl_sizing(self, sid: str) -> PwlEncoding:
        """Plant mass segments and the rated-throughput value they define."""
        st = self._struct_by_id[sid]
        gate = self._ensure_choice(sid)
        enc = encode_piecewise(
            self.model,
            st.sizing,
            seg_base=f"q_{sid}",
            bin_base=f"g_{sid}",
            total_name=f"q_{sid}",
            value_name=f"W_{sid}",
            row_base=f"sz_{sid}",
            gate=gate,
        )
        if st.fixed_mass is not None:
            self.model.set_bounds(enc.total, st.fixed_mass, st.fixed_mass)
        self.sizing[sid] = enc
        return enc

    def encode_pwl_cost(self, sid: str) -> PwlEncoding:
        """Purchase-cost segments over the same plant mass as the sizing curve."""
        st = self._struct_by_id[sid]
        if sid not in self.sizing:
            raise ModelError(f"encode sizing for {sid!r} before its cost curve")
        gate = self._ensure_choice(sid)
        enc = encode_piecewise(
            self.model,
            st.cost,
            seg_base=f"F_{sid}",
            bin_base=f"h_{sid}",
            total_name=f"F_{sid}",
            value_name=f"J_{sid}",
            row_base=f"ct_{sid}",
            gate=gate,
        )
        # both curves meter the same physical mass
        self.model.add_constr(f"link_{sid}", {enc.total: 1.0, self.sizing[sid].total: -1.0}, "=", 0.0)
        self.cost[sid] = enc
        return enc

    def add_manufacturing(self, sid: str, big_m: float | None = None) -> VariableRef:
        """Charge for building the plant only when it is actually picked."""
        st = self._struct_by_id[sid]
        if sid not in self.cost:
            raise ModelError(f"encode the cost curve for {sid!r} before manufacturing")
        attainable = max(st.cost.eval(b) for b in st.cost.breakpoints[1:])
        if big_m is None:
            big_m = attainable
        elif big_m < attainable - 1e-9:
            raise ModelError(f"big-M {big_m} is below the attainable cost {attainable} of {sid!r}")
        z = link_product(self.model, f"z_{sid}", self.choice[sid], self.cost[sid].value, big_m)
        self.manufacturing[sid] = z
        return z

    def add_facility_deployment(self, sid: str) -> None:
        """Deployed mass demand, maintenance spares, and processing activity.

        A picked plant's mass must arrive at its node as deployment cargo
        (skipped for preplaced plants), a yearly fraction of that mass must
        arrive as spares while deliveries run, and each step from its
        deployment on it may process commodities up to the per-step share
        of its rated annual throughput.
        """
        st = self._struct_by_id[sid]
        if sid not in self.sizing:
            raise ModelError(f"encode sizing for {sid!r} before deployment")
        sz = self.sizing[sid]
        stride = max(1, int(round(1.0 / self.step_years)))
        if st.preplaced:
            mass_var = sz.total
            if st.delivery_cost:
                self.model.add_objective_offset(st.delivery_cost)
        else:
            x_dep = link_product(self.model, f"X_{sid}", self.choice[sid], sz.total, st.sizing.domain_max)
            self.deployment[sid] = x_dep
            row = self.balance[(st.node, self.rules.deployment_commodity, st.step)]
            self.model.add_coeff_to_constr(row, x_dep, 1.0)
            mass_var = x_dep
        if st.maintenance_fraction > 0.0:
            for t in range(st.step + stride, self._last_delivery_step + 1, stride):
                row = self.balance[(st.node, self.rules.spares_commodity, t)]
                self.model.add_coeff_to_constr(row, mass_var, st.maintenance_fraction)

        deltas = processing_deltas(st.kind, self.commodities)
        if st.kind == "SWE" and not self.net.nodes[st.node].regolith:
            warnings.warn(f"extraction plant {sid} at {st.node} has no regolith to process")
            deltas = {}
        w_ub = self.model.vars[int(sz.value)].ub
        for s in range(st.step, self.net.horizon):
            p = self.model.add_var(f"proc_{sid}_{s}", 0.0, self.step_years * w_ub)
            self.model.add_constr(f"cap_proc_{sid}_{s}", {p: 1.0, sz.value: -self.step_years}, "<=", 0.0)
            self.processing[(sid, s)] = p
            for cid, d in deltas.items():
                if d < 0:
                    # consumed during the step, at its start
                    self.model.add_coeff_to_constr(self.balance[(st.node, cid, s)], p, -d)
                else:
                    # emitted when the step completes
                    self.model.add_coeff_to_constr(self.balance[(st.node, cid, s + 1)], p, -d)

    def add_spacecraft_supply(self) -> None:
        """Vehicle purchases: binaries per window slot feeding the origin node.

        Units within a window are interchangeable, so a later unit may only
        be bought when the earlier one is; that symmetry break removes
        mirrored search branches without cutting any distinct plan.
        """
        origin = self.net.origin_id
        for v in self.vehicles:
            if v.windows is None:
                steps = range(self.net.horizon)
            else:
                steps = [w for w in v.windows if 0 <= w < self.net.horizon]
            for t in steps:
                prev = None
                for k in range(1, v.availability + 1):
                    y = self.model.add_var(f"Y_{v.id}_{t}_{k}", 0.0, 1.0, is_integer=True)
                    z = self.model.add_var(f"z_{v.id}_{t}_{k}", 0.0, v.manufacturing_cost)
                    self.model.add_constr(
                        f"z_{v.id}_{t}_{k}_def", {z: 1.0, y: -v.manufacturing_cost}, "=", 0.0
                    )
                    self.model.add_coeff_to_constr(self.balance[(origin, v.commodity, t)], y, -1.0)
                    if prev is not None:
                        self.model.add_constr(f"sym_{v.id}_{t}_{k}", {y: 1.0, prev: -1.0}, "<=", 0.0)
                    self.vehicle_choice[(v.id, t, k)] = y
                    self.vehicle_manufacturing[(v.id, t, k)] = z
                    prev = y

    def add_concurrency(self) -> None:
        """Capacity coupling and burn feasibility on every slot.

        A ship's stage tank bounds all the propellant aboard at departure,
        burned en route or carried through.  The stage feeds its engine,
        though, not the customer: cryogens that survive the leg are freight
        and must arrive inside depot-grade tanks, and parked propellant
        likewise boils off unless it sits in tank capacity.  Water travels
        and keeps in its own tanks on every leg.  The origin is exempt both
        ways, since lift is bought containerized and warehousing is part of
        the purchase price.  Burning slots must also arrive with
        non-negative propellant, and vehicles with a rated payload capacity
        cap their cargo on off-origin legs.
        """
        origin = self.net.origin_id
        for slot in self.net.slots:
            v, o, d, t = slot.key()
            sname = f"{v}_{o}_{d}_{t}"
            if slot.is_holdover:
                if o == origin:
                    continue
                for cid, tank, rate in self.rules.containment:
                    self.model.add_constr(
                        f"cap_{sname}_hold_{cid}",
                        {self.flow[(slot.key(), cid)]: 1.0, self.flow[(slot.key(), tank)]: -rate},
                        "<=",
                        0.0,
                    )
                if self.rules.propellant_tank is not None and self.rules.propellants:
                    row = {self.flow[(slot.key(), cid)]: 1.0 for cid in self.rules.propellants}
                    tank_ref = self.flow[(slot.key(), self.rules.propellant_tank)]
                    row[tank_ref] = row.get(tank_ref, 0.0) - self.rules.propellant_tank_rate
                    self.model.add_constr(f"cap_{sname}_tank", row, "<=", 0.0)
                continue
            veh = self._by_vehicle_id.get(v)
            x_sc = self.flow[(slot.key(), veh.commodity)] if veh is not None else None
            q = self._slot_linear_transform(slot)
            if veh is not None and o != origin and self.rules.cargo and veh.payload_capacity is not None:
                ships_ub = self.model.vars[int(x_sc)].ub
                cap = veh.payload_capacity
                p = self.model.add_var(f"P_{sname}_cargo", 0.0, cap * ships_ub)
                row: dict[VariableRef, float] = {}
                for cid in self.rules.cargo:
                    row[self.flow[(slot.key(), cid)]] = 1.0
                row[p] = -1.0
                self.model.add_constr(f"cap_{sname}_cargo", row, "<=", 0.0)
                self.model.add_constr(f"P_{sname}_cargo_def", {p: 1.0, x_sc: -cap}, "=", 0.0)
                self.capacity[(slot.key(), "payload_capacity")] = (p, cap)
            if veh is not None and self.rules.propellants and q is not None:
                ships_ub = self.model.vars[int(x_sc)].ub
                cap = veh.propellant_capacity
                p = self.model.add_var(f"P_{sname}_prop", 0.0, cap * ships_ub)
                row = {}
                for cid in self.rules.propellants:
                    ref = self.flow[(slot.key(), cid)]
                    row[ref] = row.get(ref, 0.0) + 1.0
                row[p] = row.get(p, 0.0) - 1.0
                self.model.add_constr(f"cap_{sname}_prop", row, "<=", 0.0)
                self.model.add_constr(f"P_{sname}_prop_def", {p: 1.0, x_sc: -cap}, "=", 0.0)
                self.capacity[(slot.key(), "propellant_capacity")] = (p, cap)
            if o != origin and self.rules.propellant_tank is not None and self.rules.propellants:
                # propellant surviving the leg is freight and rides in tanks
                row = {}
                for cid in self.rules.propellants:
                    k = self._cidx[cid]
                    if q is None:
                        ref = self.flow[(slot.key(), cid)]
                        row[ref] = row.get(ref, 0.0) + 1.0
                        continue
                    for j, cj in enumerate(self.order):
                        if q[k, j] != 0.0:
                            ref = self.flow[(slot.key(), cj)]
                            row[ref] = row.get(ref, 0.0) + q[k, j]
                tank_ref = self.flow[(slot.key(), self.rules.propellant_tank)]
                row[tank_ref] = row.get(tank_ref, 0.0) - self.rules.propellant_tank_rate
                self.model.add_constr(f"cap_{sname}_freight", row, "<=", 0.0)
            if o != origin:
                for cid, tank, rate in self.rules.containment:
                    self.model.add_constr(
                        f"cap_{sname}_hold_{cid}",
                        {self.flow[(slot.key(), cid)]: 1.0, self.flow[(slot.key(), tank)]: -rate},
                        "<=",
                        0.0,
                    )
            if q is not None:
                # whatever burns along the slot must have been aboard
                for cid in (LO2, LH2):
                    k = self._cidx[cid]
                    row = {}
                    for j, cj in enumerate(self.order):
                        if q[k, j] != 0.0:
                            row[self.flow[(slot.key(), cj)]] = -q[k, j]
                    self.model.add_constr(f"burn_{sname}_{cid}", row, "<=", 0.0)

    def assemble_objective(self) -> None:
        """Launch pricing, purchase prices, flight operations, manufacturing."""
        origin = self.net.origin_id
        unpriced: list[str] = []
        for slot in self.net.slots:
            if slot.is_holdover:
                continue
            if slot.arc.origin == origin:
                for c in self.commodities:
                    coeff = self.launch_cost_per_kg * c.unit_mass
                    if c.id in self.prices:
                        coeff += self.prices[c.id] * c.unit_mass
                    elif c.id not in self._vehicle_by_commodity and c.id not in unpriced:
                        unpriced.append(c.id)
                    if coeff:
                        self.model.set_objective_coeff(self.flow[(slot.key(), c.id)], coeff)
            else:
                veh = self._by_vehicle_id.get(slot.vehicle)
                if veh is not None and veh.ops_cost_per_flight:
                    self.model.set_objective_coeff(
                        self.flow[(slot.key(), veh.commodity)], veh.ops_cost_per_flight
                    )
        for z in self.manufacturing.values():
            self.model.set_objective_coeff(z, 1.0)
        for z in self.vehicle_manufacturing.values():
            self.model.set_objective_coeff(z, 1.0)
        if unpriced:
            warnings.warn(f"commodities {unpriced} leave {origin} without a purchase price")
