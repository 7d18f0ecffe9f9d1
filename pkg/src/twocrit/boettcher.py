"""Böttcher coordinates, Green's functions and the E-maps of the parameter plane.

Everything here rests on the telescoped product

    Phi_t(z) = z * prod_k (f^{k+1}(z) / (t f^k(z)^m))^(1/m^(k+1)),

whose factors are ((1 - z_k)/(1 + z_k))^n and tend to 1 along an orbit
attracted to 0.  Its log-modulus gives the Green's function, and the same
series with the orbit escaping gives the normalised Green's function at
infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import BoettcherConvergenceError, DomainError, NotInBasinError, ParameterError
from .family import FamilyParams, critical_data, default_trap
from .orbits import DEFAULT_BUDGET, CYCLE_TOL, MAX_PERIOD, ParamKind, PointKind, classify_parameter
from .sphere import ExtComplex

FACTOR_EPS = 1e-14
DEFAULT_KMAX = 60
GREEN_TOL = 1e-12
SEGMENT_SAMPLES = 64


@dataclass(frozen=True)
class GreenValue:
    value: float
    iterations_used: int
    converged: bool


@dataclass(frozen=True)
class BoettcherValue:
    value: complex
    branch_warnings: int = 0


@dataclass(frozen=True)
class EValue:
    """Value of E_0, E_k or E_res at a parameter, with the branch used."""

    kind: str
    value: complex
    branch: str
    branch_warnings: int = 0


def _fate(p: FamilyParams, z: complex, budget: int):
    trap = default_trap(p.m, p.n)
    t_abs = abs(p.t)
    rho = K.trap_radius(p.m, p.n, t_abs, trap.radius_unit, trap.safety)
    big = K.escape_radius(p.m, p.n, t_abs)
    ring = np.empty(4 * MAX_PERIOD, dtype=np.complex128)
    out, idx, _, _, _ = K.resolve_orbit(K.FAMILY, p.m, p.n, p.t, z, budget, rho, big, ring,
                                       CYCLE_TOL, MAX_PERIOD)
    return out, idx, rho, big


def boundary_value(p: FamilyParams) -> float:
    """Limit of log|Phi_t| at the boundary of either basin: -log|t|/(m-1)."""
    return -math.log(abs(p.t)) / (p.m - 1)


def green_zero(p: FamilyParams, z, tol: float = GREEN_TOL,
               budget: int = DEFAULT_BUDGET) -> GreenValue:
    """log|Phi_t(z)| for z attracted to 0.

    Satisfies G(f_t(z)) = m G(z) + log|t| and tends to -log|t|/(m-1) at the
    basin boundary.
    """
    z = ExtComplex.of(z)
    zv = z.value
    out, idx, rho, big = _fate(p, zv, budget)
    if out != K.ZERO:
        raise NotInBasinError(f"orbit of {z} does not enter the trap disc within {budget} steps")
    value, steps, ok = K.green_series(K.FAMILY, p.m, p.n, p.t, zv, True, rho, big, tol,
                                      idx + 500)
    return GreenValue(value, steps, ok)


def green_infinity(p: FamilyParams, z, tol: float = GREEN_TOL,
                   budget: int = DEFAULT_BUDGET) -> GreenValue:
    """log|Psi_t(z)| for escaping z, Psi_t the Böttcher coordinate at infinity.

    Psi_t is tangent to the identity at infinity, so the value is
    lim m^-k log|f^k(z)| - log|t|/(m-1) and obeys the same functional
    equation as ``green_zero``.
    """
    z = ExtComplex.of(z)
    if z.at_infinity:
        return GreenValue(math.inf, 0, True)
    zv = z.value
    out, idx, rho, big = _fate(p, zv, budget)
    if out != K.INF:
        raise NotInBasinError(f"orbit of {z} does not escape within {budget} steps")
    value, steps, ok = K.green_series(K.FAMILY, p.m, p.n, p.t, zv, False, rho, big, tol,
                                      idx + 500)
    return GreenValue(value, steps, ok)


def green_infinity_lower_bound(m: int, n: int) -> float:
    """C with G_inf(z) >= log|z| - C whenever |z| >= escape_radius.

    Each factor |(1-z)/(1+z)| is at least 1/3 on the orbit, so the series
    loses at most n log 3 / (m - 1).
    """
    return n * math.log(3.0) / (m - 1)


def smooth_escape_time(p: FamilyParams, z, budget: int = DEFAULT_BUDGET) -> float:
    """Continuous escape count -log_m(G_inf(z) - boundary)."""
    g = green_infinity(p, z, budget=budget).value
    return -math.log(g - boundary_value(p)) / math.log(p.m)


def _log_factor_bound(n: int, az: float) -> float:
    """Bound on |n Log((1-z)/(1+z))| valid for |z| < 1/3."""
    if az >= 1.0 / 3.0:
        return math.inf
    return -n * math.log1p(-2.0 * az / (1.0 - az))


def boettcher_coordinate(p: FamilyParams, z, kmax: int = DEFAULT_KMAX,
                         budget: int = DEFAULT_BUDGET) -> BoettcherValue:
    """Phi_t(z) by the principal-branch product.

    The product stops once the orbit is in the trap disc and the remaining
    factors are provably within FACTOR_EPS of 1.  ``branch_warnings``
    counts factors (1-z_k)/(1+z_k) with argument beyond pi/2.
    """
    z = ExtComplex.of(z)
    zv = z.value
    if zv == 0:
        return BoettcherValue(0j)
    out, _, rho, _ = _fate(p, zv, budget)
    if out != K.ZERO:
        raise NotInBasinError(f"orbit of {z} does not enter the trap disc within {budget} steps")
    m, n = p.m, p.n
    acc = 0j
    warnings = 0
    zk = zv
    for k in range(kmax):
        w = (1.0 - zk) / (1.0 + zk)
        if w == 0:
            # z is a preimage of 0
            return BoettcherValue(0j, warnings)
        if abs(cmath.phase(w)) > math.pi / 2:
            warnings += 1
        weight = 1.0 / m ** (k + 1)
        acc += weight * n * cmath.log(w)
        zk = K.step(K.FAMILY, m, n, p.t, zk)
        az = abs(zk)
        if az == 0.0 or (az < rho and weight * _log_factor_bound(n, az) / (m - 1) < FACTOR_EPS):
            return BoettcherValue(zv * cmath.exp(acc), warnings)
    raise BoettcherConvergenceError(
        f"Böttcher product did not settle within {kmax} factors", zv * cmath.exp(acc))


def boettcher_residual(p: FamilyParams, z) -> float:
    """|Phi(f_t(z)) - t Phi(z)^m|."""
    phi = boettcher_coordinate(p, z).value
    fz = K.step(K.FAMILY, p.m, p.n, p.t, ExtComplex.of(z).value)
    return abs(boettcher_coordinate(p, fz).value - p.t * phi ** p.m)


def alpha_segment_in_basin(m: int, n: int, t, budget: int = DEFAULT_BUDGET,
                           samples: int = SEGMENT_SAMPLES) -> bool:
    """Sampled check that the segment [0, v_alpha_t] is attracted to 0.

    f_t maps [0, 1] onto this segment, so when it lies in the basin the
    critical value is joined to 0 inside the basin (immediate basin).
    """
    p = FamilyParams(m, n, t)
    v = p.t * critical_data(m, n).v_alpha_1
    for j in range(1, samples + 1):
        if _fate(p, v * j / samples, budget)[0] != K.ZERO:
            return False
    return True


def in_alpha_zero_locus(m: int, n: int, t, budget: int = DEFAULT_BUDGET) -> bool:
    """Certified membership of t in the locus where v_alpha_t lies in the immediate basin of 0.

    For |t| <= 1 attraction to 0 is enough (the basin is completely
    invariant); beyond the unit circle the sampled segment test is required.
    """
    cls = classify_parameter(m, n, t, budget)
    if cls.alpha.kind is not PointKind.BASIN_ZERO:
        return False
    return abs(complex(t)) <= 1.0 or alpha_segment_in_basin(m, n, t, budget)


def e_value(m: int, n: int, t, kind: str = "E0", k: int | None = None,
            budget: int = DEFAULT_BUDGET) -> EValue:
    """E_0(t) = t Phi(v_alpha)^(m-1), E_res(t) = t Phi(v_beta)^(m-1),
    E_k(t) = t^(1/(m-1)) Phi(f^k(v_alpha)) (principal root)."""
    p = FamilyParams(m, n, t)
    crit = critical_data(m, n)
    if kind == "E0":
        if not in_alpha_zero_locus(m, n, p.t, budget):
            raise DomainError(
                f"t={p.t} failed the E0 locus test: alpha orbit -> 0 and, for |t| > 1, "
                f"[0, v_alpha_t] inside the basin of 0")
        phi = boettcher_coordinate(p, p.t * crit.v_alpha_1)
        return EValue("E0", p.t * phi.value ** (m - 1), "none", phi.branch_warnings)
    if kind == "Eres":
        cls = classify_parameter(m, n, p.t, budget)
        if cls.kind is not ParamKind.ALPHA_RESIDUAL or abs(p.t) > 1.0:
            raise DomainError(
                f"t={p.t} failed the Eres locus test: need |t| <= 1 and beta orbit -> 0 "
                f"(got {cls.kind.value})")
        phi = boettcher_coordinate(p, p.t * crit.v_beta_1)
        return EValue("Eres", p.t * phi.value ** (m - 1), "none", phi.branch_warnings)
    if kind == "Ek":
        if k is None or k < 1:
            raise ParameterError("Ek needs an integer k >= 1")
        cls = classify_parameter(m, n, p.t, budget)
        if cls.alpha.kind is not PointKind.BASIN_ZERO:
            raise DomainError(f"t={p.t} failed the Ek locus test: alpha orbit does not tend to 0")
        z = p.t * crit.v_alpha_1
        for _ in range(k):
            z = K.step(K.FAMILY, m, n, p.t, z)
        phi = boettcher_coordinate(p, z)
        root = cmath.exp(cmath.log(p.t) / (m - 1))
        return EValue(f"E{k}", root * phi.value, "principal t^(1/(m-1))", phi.branch_warnings)
    raise ParameterError(f"unknown E-map kind {kind!r}; use E0, Ek or Eres")
