"""The rational family f_t(z) = t z^m ((1-z)/(1+z))^n and its companion P_c.

Pointwise evaluation on the sphere, critical data, the t <-> ±1/t symmetry,
the trap disc around 0 and a guaranteed escape radius around infinity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from . import _kernels as K
from .errors import InfeasibleTrapError, ParameterError, PoleError, UnsupportedCaseError
from .sphere import INFINITY, POLE_EPS, ExtComplex

DEFAULT_SAFETY = 0.9


def _as_param(value, name="t") -> complex:
    if isinstance(value, ExtComplex):
        if value.at_infinity:
            raise ParameterError(f"{name} must be finite")
        value = value.value
    value = complex(value)
    if not cmath.isfinite(value):
        raise ParameterError(f"{name} must be finite")
    if value == 0:
        raise ParameterError(f"{name} must be nonzero")
    return value


def _check_exponents(m, n):
    if int(m) != m or int(n) != n:
        raise ParameterError(f"exponents must be integers, got m={m!r}, n={n!r}")
    if m < 2 or n < 1:
        raise ParameterError(f"need m >= 2 and n >= 1, got m={m}, n={n}")


@dataclass(frozen=True)
class FamilyParams:
    """One map f_t of the family: exponents (m, n) and parameter t."""

    m: int
    n: int
    t: complex

    def __post_init__(self):
        _check_exponents(self.m, self.n)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "t", _as_param(self.t))

    @property
    def d(self) -> int:
        return self.m + self.n


@dataclass(frozen=True)
class CriticalData:
    alpha: float
    beta: float
    v_alpha_1: float
    v_beta_1: float


@lru_cache(maxsize=None)
def _critical(m, n):
    s = n / m
    root = math.sqrt(1.0 + s * s)
    # -s + root written without cancellation
    alpha = 1.0 / (s + root)
    beta = -s - root
    va = K.fmap(m, n, 1.0 + 0j, complex(alpha)).real
    vb = K.fmap(m, n, 1.0 + 0j, complex(beta)).real
    return CriticalData(alpha, beta, va, vb)


def critical_data(m: int, n: int) -> CriticalData:
    """Free critical points alpha, beta (roots of m z^2 + 2n z - m) and f_1 there."""
    _check_exponents(m, n)
    return _critical(int(m), int(n))


def eval_map(p: FamilyParams, z) -> ExtComplex:
    """f_t(z) on the sphere; z = -1 and z = infinity both go to infinity."""
    z = ExtComplex.of(z)
    if z.at_infinity:
        return INFINITY
    zv = z.value
    if abs(1.0 + zv) < POLE_EPS:
        return INFINITY
    return ExtComplex.of(K.fmap(p.m, p.n, p.t, zv))


def eval_derivative(p: FamilyParams, z) -> complex:
    """f_t'(z) in the finite chart.

    Raises PoleError at z = -1 and z = infinity.
    """
    z = ExtComplex.of(z)
    if z.at_infinity or abs(1.0 + z.value) < POLE_EPS:
        raise PoleError(f"f_t' is undefined at {z} in the finite chart")
    return K.fderiv(p.m, p.n, p.t, z.value)


def conjugate_param(t, d: int) -> complex:
    """The parameter s with f_s conjugate to f_t via z -> -1/z: 1/t (d odd), -1/t (d even)."""
    t = _as_param(t)
    return 1.0 / t if d % 2 else -1.0 / t


def trap_gauge(m: int, n: int, r: float) -> float:
    return K.trap_gauge(m, n, r)


@dataclass(frozen=True)
class TrapDisc:
    """Disc |z| < r|t| that f_t maps into itself and that absorbs f_t([0, 1]).

    ``radius_unit`` is r (the radius at |t| = 1); ``safety`` bounds g(r).
    For |t| > 1 the radius used is the root of |t| g(rho) = safety instead,
    which keeps the disc forward invariant.
    """

    m: int
    n: int
    radius_unit: float
    safety: float = DEFAULT_SAFETY

    def gauge(self) -> float:
        return K.trap_gauge(self.m, self.n, self.radius_unit)

    def radius(self, t) -> float:
        return K.trap_radius(self.m, self.n, abs(complex(t)), self.radius_unit, self.safety)

    def is_valid(self) -> bool:
        crit = critical_data(self.m, self.n)
        return (0.0 < self.safety < 1.0
                and self.gauge() <= self.safety
                and crit.v_alpha_1 < self.radius_unit < 1.0)


def trap_disc(m: int, n: int, theta: float = DEFAULT_SAFETY) -> TrapDisc:
    """Largest r with g(r) <= theta, provided v_alpha_1 < r."""
    _check_exponents(m, n)
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"safety margin must lie in (0, 1), got {theta}")
    eps = 1e-12
    lo = critical_data(m, n).v_alpha_1 + eps
    hi = 1.0 - eps
    if K.trap_gauge(m, n, lo) > theta:
        raise InfeasibleTrapError(
            f"g(v_alpha_1) exceeds theta={theta} for (m, n) = ({m}, {n})", (lo, hi))
    r = K.gauge_inverse(m, n, theta)
    return TrapDisc(int(m), int(n), min(r, hi), theta)


@lru_cache(maxsize=None)
def default_trap(m: int, n: int) -> TrapDisc:
    return trap_disc(m, n, DEFAULT_SAFETY)


def escape_radius(p: FamilyParams) -> float:
    """R with |z| >= R  =>  |f_t(z)| >= 2|z|."""
    return K.escape_radius(p.m, p.n, abs(p.t))


def pc_eval(c, m: int, n: int, z) -> ExtComplex:
    """P_c(z) = c z^m (z+1)^n on the sphere."""
    c = _as_param(c, "c")
    _check_exponents(m, n)
    z = ExtComplex.of(z)
    if z.at_infinity:
        return INFINITY
    return ExtComplex.of(K.pmap(m, n, c, z.value))


def pc_derivative(c, m: int, n: int, z) -> complex:
    c = _as_param(c, "c")
    z = ExtComplex.of(z)
    if z.at_infinity:
        raise PoleError("P_c' is undefined at infinity in the finite chart")
    return K.pderiv(m, n, c, z.value)


def pc_free_critical_point(m: int, n: int) -> float:
    return -m / (m + n)


def c_of_t(t, m: int = 2, n: int = 1) -> complex:
    """c_t = -(t + 2 + 1/t)/2, the polynomial parameter matched to f_t.

    Only the (m, n) = (2, 1) correspondence is known in closed form.
    """
    if (m, n) != (2, 1):
        raise UnsupportedCaseError(f"c_of_t is only available for (m, n) = (2, 1), got ({m}, {n})")
    t = _as_param(t)
    return -(t + 2.0 + 1.0 / t) / 2.0
