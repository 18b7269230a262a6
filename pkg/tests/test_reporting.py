"""Plan extraction, cost breakdowns, sweeps, and CSV/SVG emission."""

from __future__ import annotations

import numpy as np
import pytest

from isruplan.bnb import solve_milp
from isruplan.reporting import (
    CSV_HEADER,
    CostBreakdown,
    FlowRecord,
    MissionPlan,
    SweepRow,
    cost_breakdown,
    default_workers,
    emit_report,
    extract_plan,
    plan_to_text,
    run_sweep,
    sweep_to_csv,
    sweep_to_svg,
)
from cases import hop_scenario, launch_only_scenario, pond_scenario
from isruplan.scenario import ScenarioError, parse_scenario


def solve_case(data):
    cfg = parse_scenario(data)
    builder, model = cfg.build_model()
    sol = solve_milp(model, rel_gap=1e-9)
    assert sol.status == "optimal"
    return cfg, builder, model, sol


# -- plan extraction -------------------------------------------------------------


def test_launch_only_plan_and_costs():
    cfg, builder, model, sol = solve_case(launch_only_scenario())
    assert sol.objective == pytest.approx(5_000_000.0, abs=1e-3)
    plan = extract_plan(sol, model, cfg)
    lifts = [f for f in plan.flows if f.origin == "earth" and f.dest == "leo"]
    assert len(lifts) == 1
    assert lifts[0].cargo == (("payload", pytest.approx(1000.0)),)
    assert lifts[0].depart_step == 0 and lifts[0].arrive_step == 1
    assert plan.manufacturing == () and plan.deployments == () and plan.vehicles_bought == ()
    assert plan.isru_mass == 0.0

    bd = cost_breakdown(plan, cfg)
    assert bd.launch == pytest.approx(5_000_000.0, abs=1e-3)
    for name, value in bd.as_rows():
        if name != "launch":
            assert value == 0.0
    assert bd.total() == pytest.approx(plan.objective, abs=1e-6 * plan.objective)


def test_zero_demand_gives_empty_plan_and_zero_costs():
    data = launch_only_scenario()
    data["demands"] = []
    cfg, builder, model, sol = solve_case(data)
    assert sol.objective == pytest.approx(0.0, abs=1e-9)
    plan = extract_plan(sol, model, cfg)
    assert plan.flows == () and plan.manufacturing == ()
    bd = cost_breakdown(plan, cfg)
    assert bd.total() == 0.0
    assert all(value == 0.0 for _name, value in bd.as_rows())


def test_extraction_plan_reports_builds_and_deployments():
    cfg, builder, model, sol = solve_case(pond_scenario())
    plan = extract_plan(sol, model, cfg)
    built = {rec.structure for rec in plan.manufacturing}
    assert built == {"mine", "splitter"}
    assert plan.isru_mass == pytest.approx(
        sum(rec.mass_kg for rec in plan.manufacturing)
    )
    assert plan.isru_mass > 0
    by_id = {ev.structure: ev for ev in plan.deployments}
    assert set(by_id) == {"mine", "splitter"}
    for rec in plan.manufacturing:
        ev = by_id[rec.structure]
        assert ev.node == "site" and ev.step == 1
        assert ev.mass_kg == pytest.approx(rec.mass_kg, rel=1e-9)
    # ISRU beat hauling oxygen from Earth for two delivery years
    assert sol.objective < 2 * 800.0 * 5000.15


def test_plan_flows_replay_through_the_model():
    cfg, builder, model, sol = solve_case(pond_scenario())
    plan = extract_plan(sol, model, cfg)
    assert model.check_feasibility(plan.x, tol=1e-6) == []
    replay = plan.x.copy()
    for slot in builder.net.slots:
        for cid in builder.order:
            replay[int(builder.flow[(slot.key(), cid)])] = 0.0
    for rec in plan.flows:
        key = (rec.vehicle, rec.origin, rec.dest, rec.depart_step)
        for cid, amount in rec.cargo:
            replay[int(builder.flow[(key, cid)])] = amount
    assert model.check_feasibility(replay, tol=1e-5) == []
    assert model.objective_value(replay) == pytest.approx(plan.objective, rel=1e-9, abs=1e-6)


def test_breakdown_matches_objective_on_isru_case():
    cfg, builder, model, sol = solve_case(pond_scenario())
    plan = extract_plan(sol, model, cfg)
    bd = cost_breakdown(plan, cfg)
    assert bd.isru_manufacturing == pytest.approx(
        sum(rec.cost for rec in plan.manufacturing), rel=1e-9
    )
    assert bd.spares > 0  # maintenance deliveries carry a spares price
    assert bd.total() == pytest.approx(plan.objective, abs=1e-6 * max(1.0, plan.objective))


def test_vehicle_purchase_and_ops_buckets():
    cfg, builder, model, sol = solve_case(hop_scenario())
    plan = extract_plan(sol, model, cfg)
    assert plan.vehicles_bought == (("sc", 0, 1),)
    legs = [f for f in plan.flows if f.origin == "leo" and f.dest == "geo"]
    assert len(legs) == 1
    cargo = dict(legs[0].cargo)
    assert cargo["payload"] == pytest.approx(500.0)
    assert cargo["ship"] == pytest.approx(1.0)
    bd = cost_breakdown(plan, cfg)
    assert bd.spacecraft_manufacturing == pytest.approx(200000.0)
    assert bd.flight_ops == pytest.approx(500000.0)
    assert bd.propellant_purchase > 0
    assert bd.total() == pytest.approx(plan.objective, abs=1e-6 * plan.objective)


def test_extract_plan_rejects_mismatched_model():
    cfg, builder, model, sol = solve_case(launch_only_scenario())
    other = parse_scenario(pond_scenario())
    with pytest.raises(ValueError, match="does not match"):
        extract_plan(sol, model, other)


def test_extract_plan_requires_values():
    from isruplan.bnb import Solution

    cfg = parse_scenario(launch_only_scenario())
    _builder, model = cfg.build_model()
    empty = Solution(
        status="infeasible",
        objective=float("nan"),
        x=None,
        bound=float("nan"),
        gap=float("nan"),
        nodes=0,
        lp_iterations=0,
        wall_time=0.0,
    )
    with pytest.raises(ValueError, match="infeasible"):
        extract_plan(empty, model, cfg)


# -- sweeps ----------------------------------------------------------------------


def test_sweep_single_point_matches_direct_solve():
    cfg = parse_scenario(pond_scenario())
    _builder, model = cfg.build_model()
    direct = solve_milp(model, rel_gap=1e-9)
    rows = run_sweep(cfg, "isru-productivity", [1.0], rel_gap=1e-9, workers=1)
    assert len(rows) == 1
    row = rows[0]
    assert row.parameter == 1.0 and row.variant == "pond" and row.setup is False
    assert row.status == "optimal" and not row.timed_out
    assert row.objective == pytest.approx(direct.objective, rel=1e-9)
    assert row.isru_mass > 0


def test_sweep_rows_sorted_by_value_then_variant():
    base = parse_scenario(pond_scenario())
    other = parse_scenario({**pond_scenario(), "name": "apond"})
    rows = run_sweep([base, other], "isru-productivity", [1.2, 0.8], rel_gap=1e-6, workers=1)
    assert [(r.parameter, r.variant) for r in rows] == [
        (0.8, "apond"),
        (0.8, "pond"),
        (1.2, "apond"),
        (1.2, "pond"),
    ]


def test_sweep_parallel_workers_agree_with_serial():
    cfg = parse_scenario(pond_scenario())
    serial = run_sweep(cfg, "cost-discount", [0.5, 1.0], rel_gap=1e-9, workers=1)
    parallel = run_sweep(cfg, "cost-discount", [0.5, 1.0], rel_gap=1e-9, workers=2)
    assert [(r.parameter, r.objective) for r in parallel] == [
        (r.parameter, r.objective) for r in serial
    ]


def test_sweep_validates_grid_before_solving():
    cfg = parse_scenario(pond_scenario())
    with pytest.raises(ScenarioError, match="cost-discount"):
        run_sweep(cfg, "cost-discount", [1.0, 10.0], workers=1)
    with pytest.raises(ValueError, match="empty"):
        run_sweep(cfg, "cost-discount", [], workers=1)


def test_default_workers_env_override(monkeypatch):
    monkeypatch.setenv("ISRUPLAN_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.delenv("ISRUPLAN_WORKERS")
    assert default_workers() >= 1


# -- emission --------------------------------------------------------------------


def sample_rows():
    return (
        SweepRow(0.8, "concentrated", False, 2.922e9, 11028.0, "optimal", 12.0, False),
        SweepRow(0.8, "distributed", True, 2.083e9, 9295.25, "optimal", 8.0, False),
        SweepRow(1.2, "concentrated", False, 2.5e9, 10000.5, "optimal", 9.0, False),
        SweepRow(1.2, "distributed", True, float("nan"), float("nan"), "time-limit", 120.0, True),
    )


def test_sweep_csv_header_and_rows():
    text = sweep_to_csv(sample_rows())
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[0] == "parameter,variant,setup,objective,isru_mass,status"
    assert lines[1] == "0.8,concentrated,false,2922000000.00,11028.0,optimal"
    assert lines[2] == "0.8,distributed,true,2083000000.00,9295.2,optimal"
    assert lines[4] == "1.2,distributed,true,nan,nan,time-limit"
    assert text.endswith("\n")


def test_sweep_svg_one_series_per_case():
    rows = sample_rows()[:3]
    svg = sweep_to_svg(rows)
    assert svg.startswith("<svg ")
    assert svg.count("<polyline") == 2
    assert "concentrated" in svg and "distributed setup" in svg
    assert sweep_to_svg(rows) == svg  # byte-stable
    # both grid values appear as x-axis tick labels
    assert ">0.8</text>" in svg and ">1.2</text>" in svg


def test_sweep_svg_needs_finite_data():
    rows = (SweepRow(1.0, "a", False, float("nan"), float("nan"), "time-limit", 1.0, True),)
    with pytest.raises(ValueError, match="finite"):
        sweep_to_svg(rows)


def test_plan_text_includes_month_mapping():
    cfg, builder, model, sol = solve_case(launch_only_scenario())
    plan = extract_plan(sol, model, cfg)
    text = plan_to_text(plan)
    assert "time steps are 6 months long" in text
    assert "month = step x 6" in text
    assert "move earth->leo" in text
    assert plan.month(3) == 18.0


def test_emit_report_dispatch():
    rows = sample_rows()[:2]
    assert emit_report(rows, "csv") == sweep_to_csv(rows)
    assert emit_report(rows, "svg").startswith("<svg ")
    with pytest.raises(ValueError, match="unknown report format"):
        emit_report(rows, "pdf")


def test_emit_report_plan_csv():
    cfg, builder, model, sol = solve_case(launch_only_scenario())
    plan = extract_plan(sol, model, cfg)
    text = emit_report(plan, "csv")
    lines = text.splitlines()
    assert lines[0] == "record,step,origin,dest,vehicle,commodity,amount"
    assert any(line.startswith("flow,0,earth,leo,") and ",payload," in line for line in lines[1:])
    assert emit_report(plan, "text") == plan_to_text(plan)
    with pytest.raises(ValueError, match="text or csv"):
        emit_report(plan, "svg")
