# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simplex inner-loop kernels.

Mirrors _kernels_py call for call; the equivalence tests hold the two
backends in lockstep.  All extremum scans keep the first occurrence,
matching numpy's argmin/argmax tie behavior.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs

cnp.import_array()

# nonbasic-at-lower, nonbasic-at-upper, basic, nonbasic-free (pegged at 0)
NB_LOWER, NB_UPPER, BASIC, NB_FREE = 0, 1, 2, 3

BACKEND = "compiled"

cdef signed char C_NB_LOWER = 0
cdef signed char C_NB_UPPER = 1
cdef signed char C_BASIC = 2
cdef signed char C_NB_FREE = 3


def update_binv(double[:, ::1] binv, double[:] alpha, Py_ssize_t r):
    """Pivot the basis inverse: eliminate column alpha against row r in place."""
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t i, j
    cdef double piv = alpha[r]
    cdef double[::1] br = np.empty(m)
    cdef double a
    for j in range(m):
        br[j] = binv[r, j] / piv
    for i in range(m):
        if i == r:
            continue
        a = alpha[i]
        if a != 0.0:
            for j in range(m):
                binv[i, j] -= a * br[j]
    for j in range(m):
        binv[r, j] = br[j]


cdef inline double _violation(double dj, signed char s) noexcept nogil:
    if s == C_NB_LOWER:
        return -dj
    if s == C_NB_UPPER:
        return dj
    if s == C_NB_FREE:
        return fabs(dj)
    return -INFINITY


def price_dantzig(double[:] d, signed char[:] vstat, double tol):
    """Entering column with the largest reduced-cost violation, or -1.

    Free nonbasics violate optimality whenever their reduced cost is nonzero
    since they may move in either direction.
    """
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, best = -1
    cdef double v, best_v = -INFINITY
    for j in range(n):
        v = _violation(d[j], vstat[j])
        if v > best_v:
            best_v = v
            best = j
    if best >= 0 and best_v > tol:
        return int(best)
    return -1


def price_bland(double[:] d, signed char[:] vstat, double tol):
    """Lowest-index violating column, or -1."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j
    for j in range(n):
        if _violation(d[j], vstat[j]) > tol:
            return int(j)
    return -1


def primal_ratio_test(
    double[:] xb,
    double[:] alpha,
    double[:] lb_b,
    double[:] ub_b,
    double sigma,
    double theta_cap,
    double piv_tol,
    bint bland,
    cnp.int64_t[:] basis,
):
    """Largest step for the entering variable before a basic hits a bound.

    Basics move by -sigma * alpha per unit step.  Returns (blocking row, step),
    row -1 meaning the entering variable reaches theta_cap (bound flip) or the
    LP is unbounded when theta_cap is infinite.  Ties go to the largest pivot
    magnitude, or to the smallest basis label under Bland's rule.
    """
    cdef Py_ssize_t m = xb.shape[0]
    cdef Py_ssize_t i, r = -1
    cdef double coef, t, theta = INFINITY
    cdef double[::1] theta_i = np.empty(m)
    cdef double cut, best_mag
    cdef Py_ssize_t count, pick
    cdef cnp.int64_t best_label
    for i in range(m):
        coef = -sigma * alpha[i]
        if coef > piv_tol:
            t = (ub_b[i] - xb[i]) / coef
        elif coef < -piv_tol:
            t = (lb_b[i] - xb[i]) / coef
        else:
            t = INFINITY
        if t < 0.0:
            t = 0.0
        theta_i[i] = t
        if t < theta:
            theta = t
            r = i
    if r < 0:
        r = 0
    if theta >= theta_cap:
        return -1, theta_cap
    cut = theta + 1e-9
    count = 0
    pick = r
    best_mag = -1.0
    best_label = 0
    for i in range(m):
        if theta_i[i] <= cut:
            count += 1
            if bland:
                if count == 1 or basis[i] < best_label:
                    best_label = basis[i]
                    pick = i
            else:
                if fabs(alpha[i]) > best_mag:
                    best_mag = fabs(alpha[i])
                    pick = i
    if count > 1:
        r = pick
    return int(r), float(theta_i[r])


cdef inline bint _dual_admissible(signed char s, double a, double piv_tol) noexcept nogil:
    if s == C_NB_LOWER:
        return a < -piv_tol
    if s == C_NB_UPPER:
        return a > piv_tol
    if s == C_NB_FREE:
        return fabs(a) > piv_tol
    return False


def dual_ratio_test(
    double[:] d,
    double[:] arow,
    signed char[:] vstat,
    double sign_r,
    double piv_tol,
    bint bland,
    fixed,
):
    """Entering column preserving dual feasibility for the leaving row, or -1.

    sign_r is +1 when the leaving basic sits below its lower bound and -1
    when above its upper bound.  Admissible columns are nonbasic ones whose
    pivot element moves the leaving variable the right way; the winner
    minimizes |d_j / arow_j|.  Columns pinned to a single value can never
    absorb any step, so they are excluded outright.
    """
    cdef const unsigned char[:] fx = np.asarray(fixed, dtype=np.bool_).view(np.uint8)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, best = -1, pick = -1, count = 0
    cdef double a, ratio, cut, best_mag = -1.0
    cdef double best_ratio = INFINITY
    cdef signed char s
    for j in range(n):
        if fx[j]:
            continue
        a = sign_r * arow[j]
        if not _dual_admissible(vstat[j], a, piv_tol):
            continue
        ratio = fabs(d[j]) / fabs(arow[j])
        if ratio < best_ratio:
            best_ratio = ratio
            best = j
    if best < 0:
        return -1
    cut = best_ratio + 1e-12
    if bland:
        for j in range(n):
            if fx[j]:
                continue
            a = sign_r * arow[j]
            if not _dual_admissible(vstat[j], a, piv_tol):
                continue
            if fabs(d[j]) / fabs(arow[j]) <= cut:
                return int(j)
        return int(best)
    for j in range(n):
        if fx[j]:
            continue
        a = sign_r * arow[j]
        if not _dual_admissible(vstat[j], a, piv_tol):
            continue
        if fabs(d[j]) / fabs(arow[j]) <= cut:
            count += 1
            if fabs(arow[j]) > best_mag:
                best_mag = fabs(arow[j])
                pick = j
    if count > 1:
        return int(pick)
    return int(best)
