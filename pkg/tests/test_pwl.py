"""Curve construction, evaluation, and the scaling-rule generator."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isruplan.pwl import PiecewiseLinearConcave, PwlDomainError, from_scaling_rule


def staircase_value(q, base_slope, width, rate, direction, flat_head=None):
    """Reference evaluation: accumulate marginal value interval by interval."""
    if q == 0.0:
        return 0.0
    factor = (1.0 - rate) if direction == "discount" else (1.0 + rate)
    total = 0.0
    pos = 0.0
    if flat_head is not None:
        head_width, head_value = flat_head
        total = head_value
        pos = min(q, head_width)
        if q <= head_width:
            return head_value
    k = 0
    while pos < q:
        upper = (k + 1) * width
        if upper > pos:
            take = min(q, upper) - pos
            total += base_slope * factor**k * take
            pos += take
        k += 1
    return total


def swe_sizing(n_intervals=7):
    # 10.5 kg water per year per kg of plant, 10% faster every 3000 kg band
    return from_scaling_rule(10.5, 3000.0, 0.10, "premium", n_intervals)


def dwe_sizing(n_intervals=3):
    return from_scaling_rule(35.0, 3000.0, 0.10, "premium", n_intervals)


def plant_cost(n_intervals=7):
    # $10k per kg with a 10% discount every 3000 kg band, $10M minimum buy
    return from_scaling_rule(10000.0, 3000.0, 0.10, "discount", n_intervals, flat_head=(1000.0, 10e6))


def test_swe_sizing_first_band():
    assert swe_sizing().eval(3000.0) == pytest.approx(31500.0, rel=1e-9)


def test_swe_sizing_second_band():
    assert swe_sizing().eval(4500.0) == pytest.approx(48825.0, rel=1e-9)


def test_dwe_sizing_slopes():
    assert dwe_sizing().slopes == pytest.approx((35.0, 38.5, 42.35))


def test_plant_cost_slopes_and_values():
    c = plant_cost()
    assert c.slopes[:4] == pytest.approx((0.0, 10000.0, 9000.0, 8100.0))
    assert c.eval(500.0) == pytest.approx(10e6)
    assert c.eval(1000.0) == pytest.approx(10e6)
    assert c.eval(3000.0) == pytest.approx(30e6, rel=1e-9)
    assert c.eval(4000.0) == pytest.approx(39e6, rel=1e-9)


def test_eval_zero_is_zero():
    assert plant_cost().eval(0.0) == 0.0
    assert swe_sizing().eval(0.0) == 0.0


def test_interval_upper_inclusive():
    c = from_scaling_rule(10.0, 3000.0, 0.10, "discount", 3)
    assert c.interval_of(3000.0) == 1
    assert c.interval_of(3000.0000001) == 2
    assert c.interval_of(0.0) is None
    assert c.interval_of(9000.0) == 3


def test_out_of_domain_raises():
    c = from_scaling_rule(10.0, 3000.0, 0.10, "discount", 2)
    with pytest.raises(PwlDomainError):
        c.eval(6000.1)
    with pytest.raises(PwlDomainError):
        c.interval_of(-1.0)


def test_rate_zero_collapses_to_linear():
    c = from_scaling_rule(7.0, 100.0, 0.0, "discount", 5)
    assert c.n_intervals == 1
    assert c.domain_max == 500.0
    for q in (0.0, 1.0, 250.0, 500.0):
        assert c.eval(q) == pytest.approx(7.0 * q)


def test_continuity_at_breakpoints():
    for curve in (swe_sizing(), dwe_sizing(), plant_cost()):
        for bp in curve.breakpoints[1:-1]:
            below = curve.eval(bp)
            above = curve.eval(bp * (1 + 1e-12) if bp else 1e-12)
            assert above == pytest.approx(below, rel=1e-9)


def test_matches_staircase_reference_on_random_points():
    import random

    rng = random.Random(177)
    cases = [
        (swe_sizing(), (10.5, 3000.0, 0.10, "premium", None)),
        (dwe_sizing(), (35.0, 3000.0, 0.10, "premium", None)),
        (plant_cost(), (10000.0, 3000.0, 0.10, "discount", (1000.0, 10e6))),
    ]
    for curve, (base, width, rate, direction, head) in cases:
        for _ in range(1000):
            q = rng.random() * curve.domain_max
            want = staircase_value(q, base, width, rate, direction, head)
            assert curve.eval(q) == pytest.approx(want, rel=1e-9)


@given(
    a=st.floats(0.0, 21000.0),
    b=st.floats(0.0, 21000.0),
    lam=st.floats(0.0, 1.0),
)
@settings(max_examples=200)
def test_discount_curve_is_concave(a, b, lam):
    c = from_scaling_rule(10000.0, 3000.0, 0.10, "discount", 7)
    mid = lam * a + (1.0 - lam) * b
    chord = lam * c.eval(a) + (1.0 - lam) * c.eval(b)
    assert c.eval(min(mid, c.domain_max)) >= chord - 1e-6 * max(1.0, abs(chord))


@given(
    a=st.floats(0.0, 21000.0),
    b=st.floats(0.0, 21000.0),
    lam=st.floats(0.0, 1.0),
)
@settings(max_examples=200)
def test_premium_curve_is_convex(a, b, lam):
    c = swe_sizing()
    mid = lam * a + (1.0 - lam) * b
    chord = lam * c.eval(a) + (1.0 - lam) * c.eval(b)
    assert c.eval(min(mid, c.domain_max)) <= chord + 1e-6 * max(1.0, abs(chord))


def test_marginal_value_non_increasing_for_discount():
    c = from_scaling_rule(10000.0, 3000.0, 0.10, "discount", 7)
    delta = 50.0
    gains = [c.eval(q + delta) - c.eval(q) for q in range(0, 20000, 250)]
    for g0, g1 in zip(gains, gains[1:]):
        assert g1 <= g0 + 1e-9 * max(1.0, abs(g0))


def test_flat_head_applies_fixed_charge_above_zero():
    c = plant_cost()
    assert c.eval(1e-9) == pytest.approx(10e6)
    assert c.eval(2000.0) == pytest.approx(20e6, rel=1e-9)


def test_validation_rejects_increasing_slopes_in_concave_mode():
    with pytest.raises(ValueError):
        PiecewiseLinearConcave((0.0, 1.0, 2.0), (1.0, 2.0), (0.0, -1.0))


def test_validation_rejects_discontinuity():
    with pytest.raises(ValueError):
        PiecewiseLinearConcave((0.0, 1.0, 2.0), (2.0, 1.0), (0.0, 5.0))


def test_validation_rejects_negative_first_intercept():
    with pytest.raises(ValueError):
        PiecewiseLinearConcave((0.0, 1.0, 2.0), (2.0, 1.0), (-1.0, 0.0))


def test_validation_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        PiecewiseLinearConcave((1.0, 2.0), (1.0,), (0.0,))
    with pytest.raises(ValueError):
        PiecewiseLinearConcave((0.0, 2.0, 2.0), (2.0, 1.0), (0.0, 2.0))


def test_scaling_rule_rejects_bad_parameters():
    with pytest.raises(ValueError):
        from_scaling_rule(0.0, 100.0, 0.1, "discount", 3)
    with pytest.raises(ValueError):
        from_scaling_rule(10.0, 100.0, 1.0, "discount", 3)
    with pytest.raises(ValueError):
        from_scaling_rule(10.0, 100.0, 0.1, "sideways", 3)
    with pytest.raises(ValueError):
        from_scaling_rule(10.0, 100.0, 0.1, "premium", 3, flat_head=(10.0, 100.0))
    # head value below the linear ramp would force a negative intercept
    with pytest.raises(ValueError):
        from_scaling_rule(10.0, 100.0, 0.1, "discount", 3, flat_head=(50.0, 100.0))


def test_dict_round_trip():
    c = plant_cost()
    d = c.to_dict()
    back = PiecewiseLinearConcave.from_dict(d)
    assert back == c
