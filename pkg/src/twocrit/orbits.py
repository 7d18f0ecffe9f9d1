"""Orbit iteration and classification of points and parameters.

A point is attracted to 0 once it enters the trap disc and escapes once it
passes the escape radius (both are certificates, not heuristics).  Orbits
that do neither within the budget are searched for an attracting cycle on
their second half; failing that they are reported as undecided.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ParameterError, UnderflowError
from .family import FamilyParams, TrapDisc, critical_data, default_trap
from .sphere import ExtComplex

DEFAULT_BUDGET = 2000
VERIFY_BUDGET = 100_000
MAX_PERIOD = 64
CYCLE_TOL = 1e-9


class PointKind(enum.Enum):
    BASIN_ZERO = "BasinZero"
    BASIN_INFINITY = "BasinInfinity"
    CYCLE = "Cycle"
    UNDECIDED = "Undecided"


_OUTCOME_KIND = {
    K.ZERO: PointKind.BASIN_ZERO,
    K.INF: PointKind.BASIN_INFINITY,
    K.CYCLE: PointKind.CYCLE,
    K.UNDECIDED: PointKind.UNDECIDED,
}


@dataclass(frozen=True)
class PointClass:
    """Fate of one orbit.

    ``time`` is the first index inside the trap disc (BasinZero) or beyond
    the escape radius (BasinInfinity); cycles carry period and multiplier.
    """

    kind: PointKind
    time: int | None = None
    period: int | None = None
    multiplier: complex | None = None

    @classmethod
    def from_kernel(cls, outcome, index, period, multiplier):
        kind = _OUTCOME_KIND[int(outcome)]
        if kind is PointKind.CYCLE:
            return cls(kind, period=int(period), multiplier=complex(multiplier))
        if kind is PointKind.UNDECIDED:
            return cls(kind)
        return cls(kind, time=int(index))

    def mirrored(self) -> "PointClass":
        """Swap the roles of 0 and infinity (conjugation by z -> -1/z)."""
        swap = {PointKind.BASIN_ZERO: PointKind.BASIN_INFINITY,
                PointKind.BASIN_INFINITY: PointKind.BASIN_ZERO}
        return PointClass(swap.get(self.kind, self.kind), self.time, self.period,
                          self.multiplier)

    def __str__(self):
        if self.kind is PointKind.CYCLE:
            return f"Cycle(period={self.period})"
        if self.kind is PointKind.UNDECIDED:
            return "Undecided"
        return f"{self.kind.value}({self.time})"


class ParamKind(enum.Enum):
    # order matches the kernel codes
    ALPHA_ESCAPE = "AlphaEscape"
    BETA_ESCAPE = "BetaEscape"
    ALPHA_RESIDUAL = "AlphaResidual"
    BETA_RESIDUAL = "BetaResidual"
    ALPHA_CYCLE = "AlphaCycle"
    BETA_CYCLE = "BetaCycle"
    BOTH_ESCAPE = "BothEscape"
    UNDECIDED = "Undecided"


PARAM_KINDS = list(ParamKind)


@dataclass(frozen=True)
class ParamClass:
    """Classification of a parameter t from both critical orbits.

    ``alpha`` and ``beta`` are the raw fates of the orbits of the critical
    values t*v_alpha_1 and t*v_beta_1.
    """

    kind: ParamKind
    alpha: PointClass
    beta: PointClass

    @property
    def level(self) -> int | None:
        if self.kind is ParamKind.ALPHA_ESCAPE:
            return self.alpha.time
        if self.kind is ParamKind.BETA_ESCAPE:
            return self.beta.time
        return None

    @property
    def period(self) -> int | None:
        if self.kind is ParamKind.ALPHA_CYCLE:
            return self.alpha.period
        if self.kind is ParamKind.BETA_CYCLE:
            return self.beta.period
        return None

    @property
    def alpha_level(self) -> int | None:
        return self.alpha.time if self.alpha.kind is PointKind.BASIN_ZERO else None

    @property
    def beta_level(self) -> int | None:
        return self.beta.time if self.beta.kind is PointKind.BASIN_INFINITY else None

    def level_or_period(self):
        if self.kind is ParamKind.BOTH_ESCAPE:
            return (self.alpha_level, self.beta_level)
        return self.level if self.period is None else self.period


@dataclass(frozen=True)
class OrbitRecord:
    """Stored orbit: ``points[i + 1] = f_t(points[i])`` up to the decision."""

    points: tuple
    outcome: PointClass
    first_trap_entry: int | None = None
    first_escape: int | None = None


def _trap_for(p: FamilyParams, trap: TrapDisc | None) -> TrapDisc:
    if trap is None:
        return default_trap(p.m, p.n)
    if (trap.m, trap.n) != (p.m, p.n):
        raise ParameterError("trap disc was built for different exponents")
    return trap


def _radii(p: FamilyParams, trap: TrapDisc):
    t_abs = abs(p.t)
    return (K.trap_radius(p.m, p.n, t_abs, trap.radius_unit, trap.safety),
            K.escape_radius(p.m, p.n, t_abs))


def _seed(z) -> complex:
    return ExtComplex.of(z).value


def _check_budget(budget):
    if budget < 1:
        raise ParameterError(f"budget must be >= 1, got {budget}")


def iterate_orbit(p: FamilyParams, z0, budget: int = DEFAULT_BUDGET,
                  trap: TrapDisc | None = None) -> OrbitRecord:
    """Iterate f_t from z0 until trap entry, escape, or the budget runs out."""
    _check_budget(budget)
    trap = _trap_for(p, trap)
    rho, big = _radii(p, trap)
    store = np.empty(budget + 1, dtype=np.complex128)
    out, idx, period, mult, _ = K.resolve_orbit(K.FAMILY, p.m, p.n, p.t, _seed(z0), budget,
                                               rho, big, store, CYCLE_TOL, MAX_PERIOD)
    points = tuple(ExtComplex.of(complex(z)) for z in store[: idx + 1])
    outcome = PointClass.from_kernel(out, idx, period, mult)
    return OrbitRecord(
        points,
        outcome,
        first_trap_entry=outcome.time if outcome.kind is PointKind.BASIN_ZERO else None,
        first_escape=outcome.time if outcome.kind is PointKind.BASIN_INFINITY else None,
    )


@dataclass(frozen=True)
class CycleInfo:
    period: int
    multiplier: complex
    representative: complex


def detect_cycle(p: FamilyParams, orbit_tail, tol: float = CYCLE_TOL,
                 max_period: int = MAX_PERIOD) -> CycleInfo | None:
    """Minimal attracting period of an orbit tail, or None.

    A period p is accepted when |z[i+p] - z[i]| < tol for the last 3p
    indices; the multiplier is the product of f_t' over the final p points
    and must have modulus below 1.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    tail = np.array([ExtComplex.of(z).value for z in orbit_tail], dtype=np.complex128)
    if len(tail) < 4 or not np.all(np.isfinite(tail)):
        return None
    period, mult, rep = K.detect_cycle(K.FAMILY, p.m, p.n, p.t, tail, 0, len(tail) - 1,
                                       tol, max_period)
    if period == 0:
        return None
    return CycleInfo(int(period), complex(mult), complex(rep))


def classify_point(p: FamilyParams, z, budget: int = DEFAULT_BUDGET,
                   trap: TrapDisc | None = None) -> PointClass:
    _check_budget(budget)
    trap = _trap_for(p, trap)
    rho, big = _radii(p, trap)
    ring = np.empty(4 * MAX_PERIOD, dtype=np.complex128)
    out, idx, period, mult, _ = K.resolve_orbit(K.FAMILY, p.m, p.n, p.t, _seed(z), budget,
                                               rho, big, ring, CYCLE_TOL, MAX_PERIOD)
    return PointClass.from_kernel(out, idx, period, mult)


def classify_parameter(m: int, n: int, t, budget: int = DEFAULT_BUDGET,
                       trap: TrapDisc | None = None) -> ParamClass:
    """Classify t from the fates of both critical orbits.

    BothEscape: alpha -> 0 and beta -> inf.  AlphaResidual: both -> 0.
    BetaResidual: both -> inf.  Then beta cycle, alpha cycle, the single
    escapes, and Undecided.
    """
    _check_budget(budget)
    p = FamilyParams(m, n, t)
    trap = _trap_for(p, trap)
    crit = critical_data(m, n)
    ring = np.empty(4 * MAX_PERIOD, dtype=np.complex128)
    a, b, _, _ = K.classify_param(p.m, p.n, p.t, budget, trap.radius_unit, trap.safety,
                                  crit.v_alpha_1, crit.v_beta_1, CYCLE_TOL, MAX_PERIOD, ring)
    kind = PARAM_KINDS[K.combine(a[0], b[0])]
    return ParamClass(kind, PointClass.from_kernel(*a[:4]), PointClass.from_kernel(*b[:4]))


@dataclass
class ParamBatch:
    """Array form of many parameter classifications (see ``classify_parameters``)."""

    codes: np.ndarray
    alpha_outcome: np.ndarray
    alpha_index: np.ndarray
    alpha_period: np.ndarray
    beta_outcome: np.ndarray
    beta_index: np.ndarray
    beta_period: np.ndarray
    alpha_multiplier: np.ndarray
    beta_multiplier: np.ndarray
    depth: np.ndarray

    def cell(self, k) -> ParamClass:
        a = PointClass.from_kernel(self.alpha_outcome[k], self.alpha_index[k],
                                   self.alpha_period[k], self.alpha_multiplier[k])
        b = PointClass.from_kernel(self.beta_outcome[k], self.beta_index[k],
                                   self.beta_period[k], self.beta_multiplier[k])
        return ParamClass(PARAM_KINDS[int(self.codes[k])], a, b)


def classify_parameters(m: int, n: int, ts, budget: int = DEFAULT_BUDGET,
                        trap: TrapDisc | None = None) -> ParamBatch:
    """Vectorised classify_parameter over a flat array of nonzero parameters."""
    _check_budget(budget)
    FamilyParams(m, n, 1.0)
    ts = np.ascontiguousarray(np.asarray(ts, dtype=np.complex128).ravel())
    if np.any(ts == 0) or not np.all(np.isfinite(ts)):
        raise ParameterError("parameters must be finite and nonzero")
    trap = trap or default_trap(m, n)
    crit = critical_data(m, n)
    size = len(ts)
    ints = np.zeros((size, 7), dtype=np.int64)
    cplx = np.zeros((size, 2), dtype=np.complex128)
    depth = np.zeros(size)
    K.param_batch(int(m), int(n), ts, budget, trap.radius_unit, trap.safety,
                  crit.v_alpha_1, crit.v_beta_1, CYCLE_TOL, MAX_PERIOD, ints, cplx, depth)
    return ParamBatch(ints[:, 0], ints[:, 1], ints[:, 2], ints[:, 3], ints[:, 4],
                      ints[:, 5], ints[:, 6], cplx[:, 0], cplx[:, 1], depth)


def q_k(m: int, n: int, k: int, t) -> complex:
    """Q_k(t) = f_t^k(t v_alpha_1)."""
    p = FamilyParams(m, n, t)
    z = p.t * critical_data(m, n).v_alpha_1
    for _ in range(k):
        z = K.step(K.FAMILY, p.m, p.n, p.t, z)
    return z


def q_k_zero_order(m: int, n: int, k: int, ts=(1e-5, 1e-6)) -> float:
    """Slope of log|Q_k(t)| against log|t| between two small real t.

    Approximates the order of the zero of Q_k at t = 0, which is
    (m^(k+1) - 1)/(m - 1).
    """
    if k < 0:
        raise ParameterError("k must be >= 0")
    t1, t2 = ts
    logs = []
    for t in (t1, t2):
        q = abs(q_k(m, n, k, t))
        if not q > 1e-300:
            raise UnderflowError(
                f"Q_{k}({t:g}) underflows double precision for (m, n) = ({m}, {n}); "
                f"use a smaller k or larger t")
        logs.append(math.log(q))
    return (logs[0] - logs[1]) / (math.log(abs(t1)) - math.log(abs(t2)))

