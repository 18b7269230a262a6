"""Static logistics graph, its time expansion, and per-arc commodity transforms.

Nodes are orbits or surfaces, arcs are transfers with a delta-v and a time
of flight, and each (vehicle, arc, departure step) becomes one flow slot in
the time-expanded network.  Transformation matrices describe what happens
to the commodity vector along an arc: propellant burned, water electrolyzed,
or nothing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

G0 = 9.80665  # m/s^2
LO2_FRACTION = 5.5 / 6.5  # oxidizer share of burned propellant mass
LH2_FRACTION = 1.0 / 6.5
ELECTROLYSIS_O2 = 8.0 / 9.0  # mass shares of split water
ELECTROLYSIS_H2 = 1.0 / 9.0

BODY_KINDS = ("surface", "orbit", "planet-surface-origin")

# Conventional commodity ids used by the transform builders.
PAYLOAD = "payload"
WATER = "water"
LO2 = "lo2"
LH2 = "lh2"
SPARES = "spares"
WATER_TANK = "water_tank"
PROP_TANK = "prop_tank"
SPACECRAFT = "spacecraft"

CAPACITY_KINDS = ("payload_capacity", "propellant_capacity", "tank_capacity", "processing_rate")


@dataclass(frozen=True)
class NodeSpec:
    """A location: planetary surface, orbit, or the launch origin."""

    id: str
    name: str
    body_kind: str
    deployment_allowed: frozenset = frozenset()
    regolith: bool = False

    def __post_init__(self):
        if self.body_kind not in BODY_KINDS:
            raise ValueError(f"unknown body_kind {self.body_kind!r}")
        object.__setattr__(self, "deployment_allowed", frozenset(self.deployment_allowed))


@dataclass(frozen=True)
class ArcSpec:
    """A transfer between nodes, or a holdover loop when origin == dest.

    windows is the set of admissible departure steps; None admits every step.
    """

    origin: str
    dest: str
    delta_v: float = 0.0
    tof: int = 1
    windows: frozenset | None = None

    def __post_init__(self):
        if self.windows is not None:
            object.__setattr__(self, "windows", frozenset(int(w) for w in self.windows))
        if self.is_holdover:
            if self.delta_v != 0.0:
                raise ValueError("holdover arcs carry no burn")
            if self.tof != 1:
                raise ValueError("holdover arcs span exactly one step")
        elif self.tof < 1:
            raise ValueError("transport arcs need tof >= 1")

    @property
    def is_holdover(self) -> bool:
        return self.origin == self.dest

    def departures(self, horizon: int):
        """Departure steps whose arrival lands within the horizon."""
        for t in range(horizon):
            if t + self.tof > horizon:
                break
            if self.windows is None or t in self.windows:
                yield t


@dataclass(frozen=True)
class Commodity:
    """One flow commodity; unit_mass converts counts to kg for discrete kinds."""

    id: str
    name: str
    kind: str  # "continuous" | "discrete"
    unit: str = "kg"
    unit_mass: float = 1.0

    def __post_init__(self):
        if self.kind not in ("continuous", "discrete"):
            raise ValueError(f"unknown commodity kind {self.kind!r}")
        if self.unit_mass < 0:
            raise ValueError("unit_mass must be non-negative")


def _order_ids(commodity_order) -> list[str]:
    return [c.id if isinstance(c, Commodity) else str(c) for c in commodity_order]


def _unit_masses(commodity_order) -> np.ndarray:
    return np.array(
        [c.unit_mass if isinstance(c, Commodity) else 1.0 for c in commodity_order],
        dtype=float,
    )


@dataclass(frozen=True)
class TransformationMatrix:
    """Square matrix over commodities plus one affine slot.

    Arrived vector = matrix @ [departed flows, 1].  The trailing slot lets a
    transform emit commodities proportional to a processing activity rather
    than to another flow.
    """

    order: tuple
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.order) + 1
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (n, n):
            raise ValueError(f"matrix must be {n}x{n} for {len(self.order)} commodities")
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, commodity_order) -> "TransformationMatrix":
        ids = _order_ids(commodity_order)
        return cls(order=tuple(ids), matrix=np.eye(len(ids) + 1))

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(len(self.order) + 1)))

    def index(self, commodity_id: str) -> int:
        return self.order.index(commodity_id)

    def apply(self, flows: dict) -> dict:
        """Transform a departed commodity vector (by id) into the arrived one."""
        x = np.zeros(len(self.order) + 1)
        for cid, qty in flows.items():
            x[self.index(cid)] = qty
        x[-1] = 1.0
        y = self.matrix @ x
        return {cid: float(y[i]) for i, cid in enumerate(self.order)}


def burn_transformation(delta_v: float, isp: float, commodity_order) -> TransformationMatrix:
    """Transform for a propulsive transfer.

    Propellant is debited so the departed and arrived total masses obey the
    rocket equation m_dep = m_arr * exp(dv / (g0 * isp)), with the burn drawn
    from oxidizer and fuel at the fixed engine mixture ratio.  Non-propellant
    commodities pass through unchanged.  The arrived propellant entries go
    negative when the vector aboard cannot cover the burn; flow bounds in the
    optimization model are what rule that out.
    """
    if isp <= 0:
        raise ValueError("isp must be positive")
    if delta_v < 0:
        raise ValueError("delta_v must be non-negative")
    ids = _order_ids(commodity_order)
    masses = _unit_masses(commodity_order)
    n = len(ids)
    m = np.eye(n + 1)
    if delta_v > 0:
        if LO2 not in ids or LH2 not in ids:
            raise ValueError("burning arcs need lo2 and lh2 commodities")
        # burned mass per kg departed: 1 - exp(-dv / (g0 isp))
        burned_per_kg = 1.0 - math.exp(-delta_v / (G0 * isp))
        i_lo2, i_lh2 = ids.index(LO2), ids.index(LH2)
        for j in range(n):
            m[i_lo2, j] -= LO2_FRACTION * burned_per_kg * masses[j]
            m[i_lh2, j] -= LH2_FRACTION * burned_per_kg * masses[j]
    return TransformationMatrix(order=tuple(ids), matrix=m)


def isru_transformation(kind: str, commodity_order, regolith: bool = True) -> TransformationMatrix:
    """Transform for one unit of processing by an extraction or electrolysis plant.

    SWE emits water into the affine slot (one kg water per unit of processing
    activity; the admissible activity level is capped elsewhere by the plant's
    rated throughput).  DWE consumes water and emits oxygen and hydrogen at
    the fixed electrolysis mass split.  Without regolith there is nothing to
    extract and SWE degenerates to the identity.
    """
    ids = _order_ids(commodity_order)
    n = len(ids)
    m = np.eye(n + 1)
    if kind == "SWE":
        if regolith:
            m[ids.index(WATER), n] = 1.0
    elif kind == "DWE":
        i_w = ids.index(WATER)
        m[i_w, i_w] = 0.0
        m[ids.index(LO2), i_w] = ELECTROLYSIS_O2
        m[ids.index(LH2), i_w] = ELECTROLYSIS_H2
    else:
        raise ValueError(f"unknown plant kind {kind!r}")
    return TransformationMatrix(order=tuple(ids), matrix=m)


def processing_deltas(kind: str, commodity_order) -> dict:
    """Net commodity change per unit of plant processing, keyed by commodity id.

    Derived from the plant's transformation matrix: for SWE the unit activity
    is read off the affine column, for DWE it is the net effect of pushing one
    kg of water through the conversion column.
    """
    tm = isru_transformation(kind, commodity_order)
    ids = list(tm.order)
    n = len(ids)
    if kind == "SWE":
        col = tm.matrix[:n, n]
    else:
        col = tm.matrix[:n, ids.index(WATER)].copy()
        col[ids.index(WATER)] -= 1.0
    return {cid: float(col[i]) for i, cid in enumerate(ids) if col[i] != 0.0}


@dataclass(frozen=True)
class ConcurrencyMatrix:
    """Capacity coefficients per commodity for one (vehicle, arc) pair.

    Each row is one capacity type; row . flow must stay within the matching
    capacity amount, which the optimization model supplies.
    """

    kinds: tuple
    order: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (len(self.kinds), len(self.order)):
            raise ValueError("coeffs must be len(kinds) x len(order)")
        for k in self.kinds:
            if k not in CAPACITY_KINDS:
                raise ValueError(f"unknown capacity kind {k!r}")
        object.__setattr__(self, "kinds", tuple(self.kinds))
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "coeffs", c)

    def row(self, kind: str) -> dict:
        i = self.kinds.index(kind)
        return {cid: float(v) for cid, v in zip(self.order, self.coeffs[i]) if v != 0.0}


@dataclass(frozen=True)
class FlowSlot:
    """One flow variable slot: a vehicle departing along an arc at a step."""

    vehicle: str
    arc: ArcSpec
    t_dep: int

    @property
    def t_arr(self) -> int:
        return self.t_dep + self.arc.tof

    @property
    def is_holdover(self) -> bool:
        return self.arc.is_holdover

    def key(self) -> tuple:
        return (self.vehicle, self.arc.origin, self.arc.dest, self.t_dep)


@dataclass
class TimeExpandedNetwork:
    """Nodes, arcs, and the enumerated flow slots over a step horizon."""

    nodes: dict
    transport_arcs: tuple
    holdover_arcs: tuple
    horizon: int
    vehicles: tuple
    slots: tuple = field(default_factory=tuple)

    def __post_init__(self):
        by_dep: dict = {}
        by_arr: dict = {}
        for idx, s in enumerate(self.slots):
            by_dep.setdefault((s.arc.origin, s.t_dep), []).append(idx)
            by_arr.setdefault((s.arc.dest, s.t_arr), []).append(idx)
        self._departing = by_dep
        self._arriving = by_arr

    @property
    def origin_id(self) -> str:
        for n in self.nodes.values():
            if n.body_kind == "planet-surface-origin":
                return n.id
        raise LookupError("no launch origin node")

    def departing(self, node_id: str, t: int) -> list:
        return [self.slots[i] for i in self._departing.get((node_id, t), ())]

    def arriving(self, node_id: str, t: int) -> list:
        return [self.slots[i] for i in self._arriving.get((node_id, t), ())]

    def transport_slots(self):
        return [s for s in self.slots if not s.is_holdover]

    def holdover_slots(self):
        return [s for s in self.slots if s.is_holdover]


def build_time_expanded_graph(nodes, arcs, horizon: int, vehicles=("v0",)) -> TimeExpandedNetwork:
    """Expand the static graph over steps 0..horizon.

    One slot exists per (vehicle, arc, departure t) with t + tof <= horizon
    and t admitted by the arc's windows.  Holdover loops are generated at
    every node for every step; arcs too long for the horizon are dropped
    with a warning.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    node_map = {}
    for n in nodes:
        if n.id in node_map:
            raise ValueError(f"duplicate node id {n.id!r}")
        node_map[n.id] = n
    if not any(n.body_kind == "planet-surface-origin" for n in nodes):
        raise ValueError("network needs a launch origin node")

    kept = []
    for a in arcs:
        if a.origin not in node_map or a.dest not in node_map:
            raise ValueError(f"arc {a.origin}->{a.dest} references a missing node")
        if a.tof > horizon:
            warnings.warn(f"dropping arc {a.origin}->{a.dest}: tof {a.tof} exceeds horizon {horizon}")
            continue
        kept.append(a)

    holdovers = tuple(ArcSpec(origin=nid, dest=nid, delta_v=0.0, tof=1) for nid in node_map)
    slots = []
    for v in vehicles:
        for a in list(kept) + list(holdovers):
            for t in a.departures(horizon):
                slots.append(FlowSlot(vehicle=v, arc=a, t_dep=t))

    return TimeExpandedNetwork(
        nodes=node_map,
        transport_arcs=tuple(kept),
        holdover_arcs=holdovers,
        horizon=horizon,
        vehicles=tuple(vehicles),
        slots=tuple(slots),
    )


def validate_network(net: TimeExpandedNetwork, demand_nodes=None) -> list:
    """Diagnostic sweep; returns a list of defect strings, empty when clean.

    demand_nodes limits the reachability check to nodes that actually carry
    demands; by default every non-origin node must be reachable from the
    launch origin through transport arcs.
    """
    defects = []
    for a in net.transport_arcs:
        if a.delta_v < 0:
            defects.append(f"negative delta-v on arc {a.origin}->{a.dest}")
        if a.windows is not None:
            for w in sorted(a.windows):
                if w < 0 or w + a.tof > net.horizon:
                    defects.append(f"window {w} outside horizon on arc {a.origin}->{a.dest}")

    reachable = {net.origin_id}
    frontier = [net.origin_id]
    out_arcs: dict = {}
    for a in net.transport_arcs:
        out_arcs.setdefault(a.origin, []).append(a.dest)
    while frontier:
        cur = frontier.pop()
        for nxt in out_arcs.get(cur, ()):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    targets = set(demand_nodes) if demand_nodes is not None else set(net.nodes) - {net.origin_id}
    for nid in sorted(targets):
        if nid not in reachable:
            defects.append(f"unreachable demand node {nid}")
    return defects
