"""Compiled inner loops shared by the point API and the rasterizers.

Two map kinds are handled: ``FAMILY`` is f_t(z) = t z^m ((1-z)/(1+z))^n and
``POLY`` is P_c(z) = c z^m (z+1)^n.  Infinity travels through the loops as
``complex(inf, 0)``; it only ever appears as a terminal point.
"""

import math

import numpy as np
from numba import njit

FAMILY = 0
POLY = 1

# orbit outcomes
ZERO = 0
INF = 1
CYCLE = 2
UNDECIDED = 3

# parameter classes, in the order of ParamKind
ALPHA_ESCAPE = 0
BETA_ESCAPE = 1
ALPHA_RESIDUAL = 2
BETA_RESIDUAL = 3
ALPHA_CYCLE = 4
BETA_CYCLE = 5
BOTH_ESCAPE = 6
PARAM_UNDECIDED = 7

POLE_EPS = 1e-13
HUGE = 1e150

_jit = njit(cache=True, nogil=True)


@_jit
def ipow(z, k):
    r = 1.0 + 0.0j
    for _ in range(k):
        r *= z
    return r


@_jit
def fmap(m, n, t, z):
    return t * ipow(z, m) * ipow((1.0 - z) / (1.0 + z), n)


@_jit
def fderiv(m, n, t, z):
    w = (1.0 - z) / (1.0 + z)
    return (t * ipow(z, m - 1) * ipow(w, n - 1)
            * (m * (1.0 - z * z) - 2.0 * n * z) / ((1.0 + z) * (1.0 + z)))


@_jit
def pmap(m, n, c, z):
    return c * ipow(z, m) * ipow(z + 1.0, n)


@_jit
def pderiv(m, n, c, z):
    return c * ipow(z, m - 1) * ipow(z + 1.0, n - 1) * ((m + n) * z + m)


@_jit
def step(kind, m, n, a, z):
    if kind == FAMILY:
        if abs(1.0 + z) < POLE_EPS:
            return complex(np.inf, 0.0)
        return fmap(m, n, a, z)
    return pmap(m, n, a, z)


@_jit
def deriv(kind, m, n, a, z):
    if kind == FAMILY:
        return fderiv(m, n, a, z)
    return pderiv(m, n, a, z)


@_jit
def trap_gauge(m, n, r):
    """g(r) = r^(m-1) ((1+r)/(1-r))^n, increasing on [0, 1)."""
    return r ** (m - 1) * ((1.0 + r) / (1.0 - r)) ** n


@_jit
def gauge_inverse(m, n, y):
    """Largest r in [0, 1) with g(r) <= y, by bisection."""
    lo = 0.0
    hi = 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if trap_gauge(m, n, mid) <= y:
            lo = mid
        else:
            hi = mid
    return lo


@_jit
def trap_radius(m, n, t_abs, r_unit, theta):
    # r|t| is forward invariant for |t| <= 1; beyond that solve |t| g(rho) = theta
    if t_abs <= 1.0:
        return r_unit * t_abs
    return gauge_inverse(m, n, theta / t_abs)


@_jit
def escape_radius(m, n, t_abs):
    return max(2.0, (2.0 * 3.0 ** n / t_abs) ** (1.0 / (m - 1)))


@_jit
def poly_gauge(m, n, c_abs, r):
    return c_abs * r ** (m - 1) * (1.0 + r) ** n


@_jit
def poly_trap_radius(m, n, c_abs, theta):
    lo = 0.0
    hi = 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if poly_gauge(m, n, c_abs, mid) <= theta:
            lo = mid
        else:
            hi = mid
    return lo


@_jit
def poly_escape_radius(m, n, c_abs):
    # |z| >= 2 gives |z+1| >= |z|/2, hence |P_c(z)| >= |c| |z|^d / 2^n
    return max(2.0, (2.0 ** (n + 1) / c_abs) ** (1.0 / (m + n - 1)))


@_jit
def run_orbit(kind, m, n, a, z0, budget, rho, big, tail):
    """Iterate from z0, storing points in the ring ``tail``.

    Returns (outcome, index): the index of the first point inside the trap
    (ZERO) or beyond the escape radius (INF), or (UNDECIDED, budget).
    """
    size = tail.shape[0]
    z = z0
    for i in range(budget + 1):
        tail[i % size] = z
        az = abs(z)
        if az < rho:
            return ZERO, i
        if not az < big:
            return INF, i
        if i == budget:
            break
        z = step(kind, m, n, a, z)
    return UNDECIDED, budget


@_jit
def detect_cycle(kind, m, n, a, tail, lo, hi, tol, max_period):
    """Look for a stable attracting cycle among stored points lo..hi.

    Returns (period, multiplier, representative); period 0 means none.
    """
    size = tail.shape[0]
    count = hi - lo + 1
    for p in range(1, max_period + 1):
        if 4 * p > count:
            break
        ok = True
        for k in range(count - 3 * p, count):
            if not abs(tail[(lo + k) % size] - tail[(lo + k - p) % size]) < tol:
                ok = False
                break
        if ok:
            mult = 1.0 + 0.0j
            for k in range(count - p, count):
                mult *= deriv(kind, m, n, a, tail[(lo + k) % size])
            if abs(mult) < 1.0:
                return p, mult, tail[hi % size]
            return 0, 0.0j, 0.0j
    return 0, 0.0j, 0.0j


@_jit
def resolve_orbit(kind, m, n, a, z0, budget, rho, big, tail, tol, max_period):
    """run_orbit followed by cycle detection on the second half of the orbit.

    Returns (outcome, index, period, multiplier, representative).
    """
    out, idx = run_orbit(kind, m, n, a, z0, budget, rho, big, tail)
    if out != UNDECIDED:
        return out, idx, 0, 0.0j, 0.0j
    lo = max(budget // 2, budget + 1 - tail.shape[0])
    p, mult, rep = detect_cycle(kind, m, n, a, tail, lo, budget, tol, max_period)
    if p > 0:
        return CYCLE, budget, p, mult, rep
    return UNDECIDED, budget, 0, 0.0j, 0.0j


@_jit
def _tail_bound(kind, n, zero_side, az):
    """Bound on |term| for every later orbit point, given the current |z|.

    Inside the trap the orbit contracts and beyond the escape radius it
    grows, so the bound at the current point covers the whole tail.
    """
    if zero_side:
        if az >= 1.0:
            return np.inf
        if kind == FAMILY:
            return n * math.log((1.0 + az) / (1.0 - az))
        return -n * math.log(1.0 - az)
    if az <= 1.0:
        return np.inf
    if kind == FAMILY:
        return n * math.log((az + 1.0) / (az - 1.0))
    return -n * math.log(1.0 - 1.0 / az)


@_jit
def green_series(kind, m, n, a, z0, zero_side, rho, big, tol, max_steps):
    """Telescoped log-modulus of the Böttcher coordinate at 0 or infinity.

    Sums log|z0| + sum_k w^-(k+1) log|z_{k+1} / (a z_k^w)| where w is the
    local degree (m, or m+n at infinity for POLY).  Returns
    (value, steps, converged); the sum stops once the orbit is inside the
    trap (beyond the escape radius) and a bound on the remaining tail is
    below tol.  Single small increments are not trusted: a term vanishes
    whenever |(1-z)/(1+z)| = 1.
    """
    if z0 == 0.0:
        return -np.inf, 0, True
    if not abs(z0) < np.inf:
        return np.inf, 0, True
    base = m
    if kind == POLY and not zero_side:
        base = m + n
    s = math.log(abs(z0))
    weight = 1.0
    z = z0
    for k in range(max_steps):
        weight /= base
        if kind == FAMILY:
            if abs(1.0 + z) < POLE_EPS:
                return np.inf, k, True
            q = abs((1.0 - z) / (1.0 + z))
            if q == 0.0:
                return -np.inf, k, True
            term = n * math.log(q)
        elif zero_side:
            q = abs(1.0 + z)
            if q == 0.0:
                return -np.inf, k, True
            term = n * math.log(q)
        else:
            term = n * math.log(abs(1.0 + 1.0 / z))
        s += weight * term
        z = step(kind, m, n, a, z)
        az = abs(z)
        if zero_side:
            if az == 0.0:
                return s, k + 1, True
            if az < rho and weight * _tail_bound(kind, n, True, az) / (base - 1) < tol:
                return s, k + 1, True
        else:
            if not az < HUGE:
                return s, k + 1, True
            if az >= big and weight * _tail_bound(kind, n, False, az) / (base - 1) < tol:
                return s, k + 1, True
    return s, max_steps, False


@_jit
def combine(a_out, b_out):
    if a_out == ZERO and b_out == INF:
        return BOTH_ESCAPE
    if a_out == ZERO and b_out == ZERO:
        return ALPHA_RESIDUAL
    if a_out == INF and b_out == INF:
        return BETA_RESIDUAL
    if b_out == CYCLE:
        return BETA_CYCLE
    if a_out == CYCLE:
        return ALPHA_CYCLE
    if a_out == ZERO:
        return ALPHA_ESCAPE
    if b_out == INF:
        return BETA_ESCAPE
    return PARAM_UNDECIDED


@_jit
def classify_param(m, n, t, budget, r_unit, theta, va1, vb1, tol, max_period, tail):
    t_abs = abs(t)
    rho = trap_radius(m, n, t_abs, r_unit, theta)
    big = escape_radius(m, n, t_abs)
    a = resolve_orbit(FAMILY, m, n, t, t * va1, budget, rho, big, tail, tol, max_period)
    b = resolve_orbit(FAMILY, m, n, t, t * vb1, budget, rho, big, tail, tol, max_period)
    return a, b, rho, big


# ---------------------------------------------------------------- batch kernels

_GREEN_STEPS_EXTRA = 200


@_jit
def _depth(kind, m, n, a, z0, zero_side, rho, big, boundary, index):
    s, _, _ = green_series(kind, m, n, a, z0, zero_side, rho, big, 1e-13,
                           index + _GREEN_STEPS_EXTRA)
    return abs(s - boundary)


@_jit
def param_batch(m, n, ts, budget, r_unit, theta, va1, vb1, tol, max_period,
                out_int, out_cplx, out_depth):
    """Classify every parameter of ``ts`` (flat array).

    out_int columns: class, a_out, a_idx, a_per, b_out, b_idx, b_per
    out_cplx columns: a_mult, b_mult
    out_depth: Green depth of the deciding critical orbit, or 1 - |mult|
    for cycles, nan when undecided.
    """
    tail = np.empty(4 * max_period, dtype=np.complex128)
    for k in range(ts.shape[0]):
        t = ts[k]
        a, b, rho, big = classify_param(m, n, t, budget, r_unit, theta, va1, vb1,
                                        tol, max_period, tail)
        cls = combine(a[0], b[0])
        out_int[k, 0] = cls
        out_int[k, 1] = a[0]
        out_int[k, 2] = a[1]
        out_int[k, 3] = a[2]
        out_int[k, 4] = b[0]
        out_int[k, 5] = b[1]
        out_int[k, 6] = b[2]
        out_cplx[k, 0] = a[3]
        out_cplx[k, 1] = b[3]
        boundary = -math.log(abs(t)) / (m - 1)
        # the shading follows the active critical orbit
        use_alpha = True
        if cls == ALPHA_RESIDUAL or cls == BETA_ESCAPE or cls == BETA_CYCLE:
            use_alpha = False
        elif cls == BOTH_ESCAPE and abs(t) <= 1.0:
            use_alpha = False
        if cls == ALPHA_CYCLE:
            out_depth[k] = 1.0 - abs(a[3])
        elif cls == BETA_CYCLE:
            out_depth[k] = 1.0 - abs(b[3])
        elif cls == PARAM_UNDECIDED:
            out_depth[k] = np.nan
        elif use_alpha:
            out_depth[k] = _depth(FAMILY, m, n, t, t * va1, a[0] == ZERO, rho, big,
                                  boundary, a[1])
        else:
            out_depth[k] = _depth(FAMILY, m, n, t, t * vb1, b[0] == ZERO, rho, big,
                                  boundary, b[1])


@_jit
def point_batch(kind, m, n, a, zs, budget, rho, big, tol, max_period,
                boundary_zero, boundary_inf, out_int, out_cplx, out_depth):
    """Classify dynamical-plane points.

    out_int columns: outcome, index, period; out_cplx: multiplier.
    """
    tail = np.empty(4 * max_period, dtype=np.complex128)
    for k in range(zs.shape[0]):
        r = resolve_orbit(kind, m, n, a, zs[k], budget, rho, big, tail, tol, max_period)
        out_int[k, 0] = r[0]
        out_int[k, 1] = r[1]
        out_int[k, 2] = r[2]
        out_cplx[k] = r[3]
        if r[0] == ZERO:
            out_depth[k] = _depth(kind, m, n, a, zs[k], True, rho, big,
                                  boundary_zero, r[1])
        elif r[0] == INF:
            out_depth[k] = _depth(kind, m, n, a, zs[k], False, rho, big,
                                  boundary_inf, r[1])
        elif r[0] == CYCLE:
            out_depth[k] = 1.0 - abs(r[3])
        else:
            out_depth[k] = np.nan


@_jit
def poly_param_batch(m, n, cs, budget, theta, tol, max_period,
                     out_int, out_cplx, out_depth):
    """Classify the free critical orbit -m/(m+n) of P_c for each c."""
    tail = np.empty(4 * max_period, dtype=np.complex128)
    z0 = complex(-m / (m + n), 0.0)
    for k in range(cs.shape[0]):
        c = cs[k]
        c_abs = abs(c)
        rho = poly_trap_radius(m, n, c_abs, theta)
        big = poly_escape_radius(m, n, c_abs)
        r = resolve_orbit(POLY, m, n, c, z0, budget, rho, big, tail, tol, max_period)
        out_int[k, 0] = r[0]
        out_int[k, 1] = r[1]
        out_int[k, 2] = r[2]
        out_cplx[k] = r[3]
        if r[0] == ZERO:
            out_depth[k] = _depth(POLY, m, n, c, z0, True, rho, big,
                                  -math.log(c_abs) / (m - 1), r[1])
        elif r[0] == INF:
            out_depth[k] = _depth(POLY, m, n, c, z0, False, rho, big,
                                  -math.log(c_abs) / (m + n - 1), r[1])
        elif r[0] == CYCLE:
            out_depth[k] = 1.0 - abs(r[3])
        else:
            out_depth[k] = np.nan
