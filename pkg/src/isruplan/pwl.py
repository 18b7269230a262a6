"""Piecewise-linear value and cost curves with economies of scale.

A curve is a sequence of intervals over quantity, each with its own slope
and intercept.  Cost-style curves have strictly decreasing slopes (bulk
discounts), productivity-style curves have strictly increasing slopes
(bulk premiums); both must be continuous across interior breakpoints.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

CONTINUITY_RTOL = 1e-9


class PwlDomainError(ValueError):
    """Quantity falls outside the range covered by the curve."""


def _continuous_at(bp: float, s0: float, f0: float, s1: float, f1: float) -> bool:
    left = s0 * bp + f0
    right = s1 * bp + f1
    return abs(left - right) <= CONTINUITY_RTOL * max(1.0, abs(left), abs(right))


@dataclass(frozen=True)
class PiecewiseLinearConcave:
    """Piecewise-linear curve over quantity with per-interval slope and intercept.

    Interval r (1-based) spans ``(breakpoints[r-1], breakpoints[r]]`` and maps a
    quantity q to ``slopes[r-1] * q + intercepts[r-1]``.  The value at q = 0 is
    always 0: a positive first intercept acts as a fixed charge that applies
    only once any quantity is present.

    ``curvature`` selects the validation profile.  ``"concave"`` requires
    strictly decreasing slopes and non-negative, non-decreasing intercepts,
    optionally preceded by a single flat segment (slope 0, positive value)
    that models a fixed minimum charge.  ``"convex"`` requires strictly
    increasing slopes and non-positive, non-increasing intercepts.
    """

    breakpoints: tuple[float, ...]
    slopes: tuple[float, ...]
    intercepts: tuple[float, ...]
    curvature: str = "concave"

    def __post_init__(self) -> None:
        object.__setattr__(self, "breakpoints", tuple(float(v) for v in self.breakpoints))
        object.__setattr__(self, "slopes", tuple(float(v) for v in self.slopes))
        object.__setattr__(self, "intercepts", tuple(float(v) for v in self.intercepts))
        self._validate()

    @property
    def n_intervals(self) -> int:
        return len(self.slopes)

    @property
    def domain_max(self) -> float:
        return self.breakpoints[-1]

    def _validate(self) -> None:
        bps, slopes, intercepts = self.breakpoints, self.slopes, self.intercepts
        if len(slopes) < 1:
            raise ValueError("curve needs at least one interval")
        if len(bps) != len(slopes) + 1 or len(intercepts) != len(slopes):
            raise ValueError("breakpoints must outnumber slopes by one, intercepts match slopes")
        if bps[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        for a, b in zip(bps, bps[1:]):
            if not b > a:
                raise ValueError("breakpoints must be strictly increasing")
        for r in range(len(slopes) - 1):
            if not _continuous_at(bps[r + 1], slopes[r], intercepts[r], slopes[r + 1], intercepts[r + 1]):
                raise ValueError(f"discontinuity at breakpoint {bps[r + 1]}")
        if self.curvature == "concave":
            self._validate_concave()
        elif self.curvature == "convex":
            self._validate_convex()
        else:
            raise ValueError(f"unknown curvature {self.curvature!r}")

    def _validate_concave(self) -> None:
        slopes, intercepts = self.slopes, self.intercepts
        # A flat head (slope 0 at a positive fixed value) may precede the
        # decreasing run; everything after it must satisfy the plain rules.
        head = 1 if len(slopes) >= 2 and slopes[0] == 0.0 and intercepts[0] > 0.0 and slopes[1] > 0.0 else 0
        tail_s = slopes[head:]
        tail_f = intercepts[head:]
        if tail_f[0] < 0.0:
            raise ValueError("intercepts must be non-negative")
        for a, b in zip(tail_s, tail_s[1:]):
            if not a > b:
                raise ValueError("slopes must be strictly decreasing")
        for a, b in zip(tail_f, tail_f[1:]):
            if b < a:
                raise ValueError("intercepts must be non-decreasing")

    def _validate_convex(self) -> None:
        slopes, intercepts = self.slopes, self.intercepts
        if intercepts[0] > 0.0:
            raise ValueError("intercepts must be non-positive")
        for a, b in zip(slopes, slopes[1:]):
            if not a < b:
                raise ValueError("slopes must be strictly increasing")
        for a, b in zip(intercepts, intercepts[1:]):
            if b > a:
                raise ValueError("intercepts must be non-increasing")

    def interval_of(self, q: float) -> int | None:
        """1-based interval index holding q, or None at q = 0.

        Intervals are upper-inclusive: q equal to a breakpoint belongs to the
        interval ending there.
        """
        if q < 0.0:
            raise PwlDomainError(f"quantity {q} is negative")
        if q == 0.0:
            return None
        if q > self.breakpoints[-1]:
            raise PwlDomainError(f"quantity {q} exceeds covered range {self.breakpoints[-1]}")
        return bisect.bisect_left(self.breakpoints, q)

    def eval(self, q: float) -> float:
        """Value at quantity q; 0 at q = 0."""
        r = self.interval_of(q)
        if r is None:
            return 0.0
        return self.slopes[r - 1] * q + self.intercepts[r - 1]

    def segments(self):
        """Yield (index, lower, upper, slope, intercept) per interval, 1-based."""
        for r in range(1, self.n_intervals + 1):
            yield r, self.breakpoints[r - 1], self.breakpoints[r], self.slopes[r - 1], self.intercepts[r - 1]

    def to_dict(self) -> dict:
        return {
            "breakpoints": list(self.breakpoints),
            "slopes": list(self.slopes),
            "intercepts": list(self.intercepts),
            "curvature": self.curvature,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseLinearConcave":
        return cls(
            breakpoints=tuple(data["breakpoints"]),
            slopes=tuple(data["slopes"]),
            intercepts=tuple(data["intercepts"]),
            curvature=data.get("curvature", "concave"),
        )


def from_scaling_rule(
    base_slope: float,
    interval_width: float,
    rate: float,
    direction: str,
    n_intervals: int,
    flat_head: tuple[float, float] | None = None,
) -> PiecewiseLinearConcave:
    """Build a curve whose slope changes by a fixed rate every interval.

    Parameters
    ----------
    base_slope : float
        Marginal value per unit on the first geometric interval.
    interval_width : float
        Width of each geometric interval.
    rate : float
        Fractional slope change per interval, in [0, 1).
    direction : str
        ``"discount"`` multiplies the slope by (1 - rate) each interval and
        yields a concave curve; ``"premium"`` multiplies by (1 + rate) and
        yields a convex curve.
    n_intervals : int
        Number of geometric intervals (the flat head, if any, is extra).
    flat_head : (width, value), optional
        Prepend a flat segment at the given fixed value covering (0, width].
        Only meaningful for discount curves; width must be below
        interval_width and value must be at least base_slope * width so the
        curve stays continuous with non-negative intercepts.

    Returns
    -------
    PiecewiseLinearConcave
    """
    if base_slope <= 0.0:
        raise ValueError("base_slope must be positive")
    if not 0.0 <= rate < 1.0:
        raise ValueError("rate must lie in [0, 1)")
    if n_intervals < 1:
        raise ValueError("n_intervals must be at least 1")
    if direction not in ("discount", "premium"):
        raise ValueError(f"unknown direction {direction!r}")

    factor = 1.0 - rate if direction == "discount" else 1.0 + rate
    if rate == 0.0:
        run_slopes = [base_slope]
        run_bps = [n_intervals * interval_width]
    else:
        run_slopes = [base_slope * factor**k for k in range(n_intervals)]
        run_bps = [(k + 1) * interval_width for k in range(n_intervals)]

    if flat_head is not None:
        if direction != "discount":
            raise ValueError("flat head requires a discount curve")
        head_width, head_value = float(flat_head[0]), float(flat_head[1])
        if not 0.0 < head_width < interval_width:
            raise ValueError("flat head width must lie strictly inside the first interval")
        bps = [0.0, head_width] + run_bps
        slopes = [0.0] + run_slopes
        intercepts = [head_value]
    else:
        bps = [0.0] + run_bps
        slopes = run_slopes
        intercepts = [0.0]

    # Chain intercepts so each interval meets the previous one at its breakpoint.
    for r in range(1, len(slopes)):
        intercepts.append(intercepts[r - 1] + (slopes[r - 1] - slopes[r]) * bps[r])

    curvature = "concave" if direction == "discount" else "convex"
    return PiecewiseLinearConcave(
        breakpoints=tuple(bps),
        slopes=tuple(slopes),
        intercepts=tuple(intercepts),
        curvature=curvature,
    )
