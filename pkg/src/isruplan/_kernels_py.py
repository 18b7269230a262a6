"""Reference numpy implementations of the simplex inner-loop kernels.

The compiled extension in _kernels.pyx mirrors these signatures; _accel
picks whichever is importable.  Keep the two in behavioral lockstep: the
equivalence tests compare them call for call.
"""

from __future__ import annotations

import numpy as np

# nonbasic-at-lower, nonbasic-at-upper, basic, nonbasic-free (pegged at 0)
NB_LOWER, NB_UPPER, BASIC, NB_FREE = 0, 1, 2, 3

BACKEND = "python"


def update_binv(binv: np.ndarray, alpha: np.ndarray, r: int) -> None:
    """Pivot the basis inverse: eliminate column alpha against row r in place."""
    br = binv[r] / alpha[r]
    binv -= np.outer(alpha, br)
    binv[r] = br


def price_dantzig(d: np.ndarray, vstat: np.ndarray, tol: float) -> int:
    """Entering column with the largest reduced-cost violation, or -1.

    Free nonbasics violate optimality whenever their reduced cost is nonzero
    since they may move in either direction.
    """
    viol = np.where(
        vstat == NB_LOWER,
        -d,
        np.where(vstat == NB_UPPER, d, np.where(vstat == NB_FREE, np.abs(d), -np.inf)),
    )
    j = int(np.argmax(viol))
    return j if viol[j] > tol else -1


def price_bland(d: np.ndarray, vstat: np.ndarray, tol: float) -> int:
    """Lowest-index violating column, or -1."""
    viol = np.where(
        vstat == NB_LOWER,
        -d,
        np.where(vstat == NB_UPPER, d, np.where(vstat == NB_FREE, np.abs(d), -np.inf)),
    )
    idx = np.nonzero(viol > tol)[0]
    return int(idx[0]) if idx.size else -1


def primal_ratio_test(
    xb: np.ndarray,
    alpha: np.ndarray,
    lb_b: np.ndarray,
    ub_b: np.ndarray,
    sigma: float,
    theta_cap: float,
    piv_tol: float,
    bland: bool,
    basis: np.ndarray,
) -> tuple[int, float]:
    """Largest step for the entering variable before a basic hits a bound.

    Basics move by -sigma * alpha per unit step.  Returns (blocking row, step),
    row -1 meaning the entering variable reaches theta_cap (bound flip) or the
    LP is unbounded when theta_cap is infinite.  Ties go to the largest pivot
    magnitude, or to the smallest basis label under Bland's rule.
    """
    coef = -sigma * alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        theta_up = np.where(coef > piv_tol, (ub_b - xb) / coef, np.inf)
        theta_lo = np.where(coef < -piv_tol, (lb_b - xb) / coef, np.inf)
    theta_i = np.minimum(theta_up, theta_lo)
    theta_i = np.maximum(theta_i, 0.0)
    r = int(np.argmin(theta_i))
    theta = float(theta_i[r])
    if theta >= theta_cap:
        return -1, theta_cap
    near = np.nonzero(theta_i <= theta + 1e-9)[0]
    if near.size > 1:
        if bland:
            r = int(near[np.argmin(basis[near])])
        else:
            r = int(near[np.argmax(np.abs(alpha[near]))])
    return r, float(theta_i[r])


def dual_ratio_test(
    d: np.ndarray,
    arow: np.ndarray,
    vstat: np.ndarray,
    sign_r: float,
    piv_tol: float,
    bland: bool,
    fixed: np.ndarray,
) -> int:
    """Entering column preserving dual feasibility for the leaving row, or -1.

    sign_r is +1 when the leaving basic sits below its lower bound and -1
    when above its upper bound.  Admissible columns are nonbasic ones whose
    pivot element moves the leaving variable the right way; the winner
    minimizes |d_j / arow_j|.  Columns pinned to a single value can never
    absorb any step, so they are excluded outright.
    """
    a = sign_r * arow
    admissible = ~fixed & (
        ((vstat == NB_LOWER) & (a < -piv_tol))
        | ((vstat == NB_UPPER) & (a > piv_tol))
        | ((vstat == NB_FREE) & (np.abs(a) > piv_tol))
    )
    idx = np.nonzero(admissible)[0]
    if idx.size == 0:
        return -1
    ratios = np.abs(d[idx]) / np.abs(arow[idx])
    if bland:
        best = ratios.min()
        ties = idx[ratios <= best + 1e-12]
        return int(ties[0])
    k = int(np.argmin(ratios))
    best = ratios[k]
    ties = np.nonzero(ratios <= best + 1e-12)[0]
    if ties.size > 1:
        k = int(ties[np.argmax(np.abs(arow[idx[ties]]))])
    return int(idx[k])
