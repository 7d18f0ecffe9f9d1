"""Self-checks reproducing the published results, one suite per topic.

Each suite returns a SuiteReport whose checks carry a short measured
detail, so the CLI can list exactly which assertion failed.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import IntPoly, eliminate_multiplier, multiplier_curve, pc_multiplier_curve, var
from .boettcher import (boettcher_coordinate, boettcher_residual, e_value, green_infinity,
                        green_zero, in_alpha_zero_locus)
from .errors import DynamicsError
from .family import FamilyParams, conjugate_param, critical_data, eval_derivative
from .orbits import PointKind, classify_parameter, q_k_zero_order


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteReport:
    name: str
    checks: list = field(default_factory=list)
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def lines(self):
        out = [f"{'PASS' if c.passed else 'FAIL'} {self.name}.{c.name}"
               + (f" {c.detail}" if c.detail else "") for c in self.checks]
        out.append(f"suite={self.name} passed={self.passed} checks={len(self.checks)} "
                   f"failed={len(self.failures())} elapsed={self.elapsed:.3f}s")
        return out


# Reference multiplier curves for (m, n) = (2, 1).
_t, _lam, _c, _mu = var("t"), var("lambda"), var("c"), var("mu")
REF_RF = 2 * _t * _lam ** 2 + (1 - 10 * _t + _t ** 2) * _lam + (-2 + 14 * _t - 2 * _t ** 2)
REF_RP = _mu ** 2 - (_c + 6) * _mu + (9 + 2 * _c)
REF_ELIMINATION = (1 + 2 * _t + _t ** 2 + 2 * _t * _c) ** 2

# Known real boundary point of the immediate-basin locus for (2, 1): the
# saddle-node of the real fixed points, t = 3 + 2 sqrt(2).
T_STAR_21 = 3.0 + 2.0 * math.sqrt(2.0)


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        return report
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def equal_up_to_sign(a: IntPoly, b: IntPoly) -> bool:
    return a == b or a == -b


def constant_multiple(a: IntPoly, b: IntPoly):
    """Integer k != 0 with a == k*b, or None."""
    if a.is_zero() or b.is_zero():
        return None
    a, b = a.trimmed(), b.trimmed()
    if a.variables != b.variables:
        return None
    (ea, ca), (eb, cb) = a.leading_term(), b.leading_term()
    if ea != eb or ca % cb:
        return None
    k = ca // cb
    return k if a == k * b else None


def unit_disc_params(count: int, r_max: float = 1.0, r_min: float = 0.0):
    """Deterministic parameters spread over r_min < |t| <= r_max (golden-angle spiral)."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    out = []
    for j in range(count):
        r = r_min + (r_max - r_min) * (j + 1) / count
        out.append(r * cmath.exp(1j * golden * j))
    return out


def polar_grid(r_min, r_max, n_r, n_theta):
    radii = np.linspace(r_min, r_max, n_r)
    angles = 2 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    return [complex(r * math.cos(a), r * math.sin(a)) for r in radii for a in angles]


@_timed
def lemma1(m: int = 2, n: int = 1, r: float = 1.0 / 3.0, n_params: int = 50,
           n_points: int = 10_000, seed: int = 1) -> SuiteReport:
    """The disc of radius r|t| together with [0, 1] maps into that disc; v_beta stays out."""
    rep = SuiteReport("lemma1")
    rng = np.random.default_rng(seed)
    crit = critical_data(m, n)
    n_seg = n_points // 5
    n_disc = n_points - n_seg
    worst = 0.0
    beta_ok = True
    min_beta_gap = math.inf
    for t in unit_disc_params(n_params):
        rho = r * abs(t)
        radius = rho * np.sqrt(rng.random(n_disc))
        radius[:8] = rho  # include the closed boundary
        z = radius * np.exp(2j * np.pi * rng.random(n_disc))
        z = np.concatenate([z, np.linspace(0.0, 1.0, n_seg)])
        fz = t * z ** m * ((1 - z) / (1 + z)) ** n
        worst = max(worst, float(np.max(np.abs(fz)) / rho))
        gap = abs(t * crit.v_beta_1) / rho
        min_beta_gap = min(min_beta_gap, gap)
        beta_ok &= gap > 1.0
    rep.add("image_inside_disc", worst < 1.0, f"max|f|/(r|t|)={worst:.6f}")
    rep.add("beta_value_outside", beta_ok, f"min|v_beta|/(r|t|)={min_beta_gap:.3f}")
    return rep


def _mirror_ok(p_t, p_s) -> bool:
    """alpha fate at t equals beta fate at the conjugate parameter with 0 and inf swapped."""
    return (p_t.alpha.mirrored().kind is p_s.beta.kind
            and p_t.beta.mirrored().kind is p_s.alpha.kind)


@_timed
def symmetry(m: int = 2, n: int = 1, r_min: float = 0.2, r_max: float = 0.9, size: int = 21,
             threshold: float = 0.95) -> SuiteReport:
    """Class roles of alpha and beta swap under t -> (-1)^(d+1)/t."""
    rep = SuiteReport("symmetry")
    d = m + n
    decided = agree = 0
    for t in polar_grid(r_min, r_max, size, size):
        a = classify_parameter(m, n, t)
        b = classify_parameter(m, n, conjugate_param(t, d))
        kinds = (a.alpha.kind, a.beta.kind, b.alpha.kind, b.beta.kind)
        if PointKind.UNDECIDED in kinds:
            continue
        decided += 1
        agree += _mirror_ok(a, b)
    frac = agree / decided if decided else 0.0
    rep.extra.update(decided=decided, agree=agree)
    rep.add("mirror_fraction", decided > 0 and frac >= threshold,
            f"agree={agree}/{decided} fraction={frac:.4f}")
    return rep


@_timed
def resultants() -> SuiteReport:
    """Exact multiplier curves for (2, 1) and the elimination of the multiplier."""
    rep = SuiteReport("resultants")
    rf = multiplier_curve(2, 1)
    rp = pc_multiplier_curve(2, 1)
    el = eliminate_multiplier(rf.primitive, rp.primitive)
    rep.extra.update(R_f=str(rf.primitive), R_P=str(rp.primitive), elimination=str(el.raw))
    rep.add("R_f", equal_up_to_sign(rf.primitive, REF_RF) and rf.is_consistent(),
            f"R_f={rf.primitive}")
    rep.add("R_P", equal_up_to_sign(rp.primitive, REF_RP) and rp.is_consistent(),
            f"R_P={rp.primitive}")
    k = constant_multiple(el.raw, REF_ELIMINATION)
    rep.add("elimination", k is not None, f"Res_lambda={k}*({REF_ELIMINATION})" if k else
            f"Res_lambda={el.raw}")
    return rep


@_timed
def critical(m_range=range(2, 7), n_range=range(1, 7)) -> SuiteReport:
    """Critical point identities over a grid of exponents."""
    rep = SuiteReport("critical")
    worst = dict(product=0.0, sum=0.0, deriv=0.0, values=0.0)
    for m in m_range:
        for n in n_range:
            cd = critical_data(m, n)
            p = FamilyParams(m, n, 1.0)
            worst["product"] = max(worst["product"], abs(cd.alpha * cd.beta + 1))
            worst["sum"] = max(worst["sum"], abs(cd.alpha + cd.beta + 2 * n / m))
            worst["deriv"] = max(worst["deriv"], abs(eval_derivative(p, cd.alpha)),
                                 abs(eval_derivative(p, cd.beta)))
            worst["values"] = max(worst["values"], abs(abs(cd.v_alpha_1 * cd.v_beta_1) - 1))
    rep.add("alpha_beta_product", worst["product"] < 1e-12, f"max={worst['product']:.2e}")
    rep.add("alpha_beta_sum", worst["sum"] < 1e-12, f"max={worst['sum']:.2e}")
    rep.add("derivative_vanishes", worst["deriv"] < 1e-10, f"max={worst['deriv']:.2e}")
    rep.add("critical_values_reciprocal", worst["values"] < 1e-9, f"max={worst['values']:.2e}")
    return rep


def basin_samples(count: int = 100, seed: int = 7):
    """(FamilyParams, z, basin) triples, half attracted to 0 and half escaping."""
    rng = np.random.default_rng(seed)
    want = {"zero": count - count // 2, "infinity": count // 2}
    greens_by_basin = {"zero": green_zero, "infinity": green_infinity}
    cases = [(2, 1), (3, 1), (2, 2), (3, 2)]
    out = []
    while len(out) < count:
        m, n = cases[len(out) % len(cases)]
        t = complex(*(rng.uniform(-1.5, 1.5, 2)))
        if abs(t) < 0.05:
            continue
        p = FamilyParams(m, n, t)
        z = complex(*(rng.uniform(-3, 3, 2)))
        for basin, green in greens_by_basin.items():
            if not want[basin]:
                continue
            try:
                green(p, z)
            except DynamicsError:
                continue
            out.append((p, z, basin))
            want[basin] -= 1
            break
    return out


@_timed
def greens(count: int = 100, seed: int = 7) -> SuiteReport:
    """Functional equations of the Green's functions and the Böttcher coordinate.

    The Böttcher residual is checked on every zero-basin sample: the principal
    branch is taken factor by factor, so the identity holds whatever the
    branch warnings say.
    """
    rep = SuiteReport("greens")
    worst_g = worst_phi = worst_mod = 0.0
    n_zero = n_clean = 0
    for p, z, basin in basin_samples(count, seed):
        fz = p.t * z ** p.m * ((1 - z) / (1 + z)) ** p.n
        green = green_zero if basin == "zero" else green_infinity
        g0 = green(p, z).value
        g1 = green(p, fz).value
        worst_g = max(worst_g, abs(g1 - p.m * g0 - math.log(abs(p.t))))
        if basin == "zero":
            n_zero += 1
            phi = boettcher_coordinate(p, z)
            n_clean += phi.branch_warnings == 0
            scale = max(1.0, abs(p.t) * abs(phi.value) ** p.m)
            worst_phi = max(worst_phi, boettcher_residual(p, z) / scale)
            worst_mod = max(worst_mod, abs(abs(phi.value) - math.exp(g0)))
    rep.add("green_functional_equation", worst_g < 1e-8,
            f"max={worst_g:.2e} samples={count}")
    rep.add("boettcher_functional_equation", worst_phi < 1e-8,
            f"max={worst_phi:.2e} samples={n_zero} without_branch_warnings={n_clean}")
    rep.add("modulus_matches_green", worst_mod < 1e-8, f"max={worst_mod:.2e}")
    return rep


def locus_boundary_on_ray(m: int, n: int, direction: complex = 1.0, lo: float = 1.0,
                          hi: float = 8.0, steps: int = 40) -> float:
    """Bisection for the radius where the E0 locus test starts failing along a ray."""
    if not in_alpha_zero_locus(m, n, direction * lo) or in_alpha_zero_locus(m, n, direction * hi):
        raise DynamicsError("ray does not cross the E0 locus boundary inside the bracket")
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if in_alpha_zero_locus(m, n, direction * mid):
            lo = mid
        else:
            hi = mid
    return lo


@_timed
def easymptotic(tol: float = 1e-3) -> SuiteReport:
    """E0(t) ~ f_1(alpha)^(m-1) t^m near 0, |E0| < 1 inside, |E0| -> 1 at the boundary."""
    rep = SuiteReport("easymptotic")
    for m, n in ((2, 1), (3, 1)):
        vals = []
        va = critical_data(m, n).v_alpha_1
        for t in (1e-4, 1e-4j, -1e-4):
            e = e_value(m, n, t).value
            vals.append(abs(e / (va ** (m - 1) * t ** m) - 1))
        rep.add(f"asymptotic_{m}_{n}", max(vals) < tol, f"max|ratio-1|={max(vals):.2e}")
    inside = [abs(e_value(2, 1, t).value) for t in unit_disc_params(50, r_max=1.0, r_min=0.02)]
    rep.add("modulus_below_one", max(inside) < 1.0, f"max|E0|={max(inside):.6f} samples=50")
    edge = locus_boundary_on_ray(2, 1)
    path = [edge * (1 - d) for d in (0.8, 0.5, 0.3, 0.15, 0.05)]
    mods = [abs(e_value(2, 1, t).value) for t in path]
    monotone = all(b > a for a, b in zip(mods, mods[1:]))
    rep.add("boundary_located", abs(edge - T_STAR_21) < 1e-3,
            f"t_edge={edge:.6f} expected={T_STAR_21:.6f}")
    rep.add("modulus_tends_to_one", monotone and mods[-1] > 0.9,
            "path=" + ",".join(f"{v:.6f}" for v in mods))
    return rep


@_timed
def qkorder(tol: float = 0.05) -> SuiteReport:
    """Order of vanishing of Q_k at t = 0 equals (m^(k+1)-1)/(m-1)."""
    rep = SuiteReport("qkorder")
    for m, n, k in ((2, 1, 0), (2, 1, 1), (3, 1, 1), (2, 1, 2)):
        expected = (m ** (k + 1) - 1) / (m - 1)
        slope = q_k_zero_order(m, n, k)
        rep.add(f"Q{k}_{m}_{n}", abs(slope - expected) < tol,
                f"slope={slope:.4f} expected={expected:g}")
    return rep


SUITES = {
    "lemma1": lemma1,
    "symmetry": symmetry,
    "resultants": resultants,
    "critical": critical,
    "greens": greens,
    "easymptotic": easymptotic,
    "qkorder": qkorder,
}


def run_suite(name: str, **options) -> SuiteReport:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(**options)
