import cmath
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from twocrit.errors import ParameterError, UnderflowError
from twocrit.family import (FamilyParams, conjugate_param, critical_data, default_trap,
                            escape_radius, eval_derivative, eval_map)
from twocrit.orbits import (ParamKind, PointClass, PointKind, classify_parameter,
                            classify_parameters, classify_point, detect_cycle, iterate_orbit, q_k,
                            q_k_zero_order)
from twocrit.verify import polar_grid, unit_disc_params

T_CYCLE = (7 - 3 * math.sqrt(5)) / 2


# ---------------------------------------------------------------- exact oracle

def test_superattracting_beta_exact():
    """In Q(sqrt5): t = (7-3sqrt5)/2 makes beta a fixed point of f_t."""
    s5 = sp.sqrt(5)
    t = (7 - 3 * s5) / 2
    beta = -(1 + s5) / 2
    z = sp.Symbol("z")
    f = t * z ** 2 * (1 - z) / (1 + z)
    assert sp.simplify(f.subs(z, beta) - beta) == 0
    assert sp.simplify(sp.diff(f, z).subs(z, beta)) == 0


# ---------------------------------------------------------------- iterate_orbit

def test_iterate_orbit_examples():
    p = FamilyParams(2, 1, 1.0)
    cd = critical_data(2, 1)
    rec = iterate_orbit(p, 1.0)
    assert rec.outcome == PointClass(PointKind.BASIN_ZERO, time=1)
    assert rec.first_trap_entry == 1 and rec.first_escape is None
    rec = iterate_orbit(p, cd.beta)
    assert rec.outcome == PointClass(PointKind.BASIN_INFINITY, time=1)
    assert abs(rec.points[1]) >= escape_radius(p) == pytest.approx(6.0)
    assert iterate_orbit(p, cd.alpha).outcome.kind is PointKind.BASIN_ZERO


@given(st.floats(0.05, 3.0), st.floats(0, 2 * math.pi), st.floats(0.01, 4.0),
       st.floats(0, 2 * math.pi))
def test_orbit_record_invariants(rt, at, rz, az):
    p = FamilyParams(2, 1, cmath.rect(rt, at))
    rec = iterate_orbit(p, cmath.rect(rz, az), budget=300)
    pts = rec.points
    for a, b in zip(pts, pts[1:]):
        assert eval_map(p, a).is_close(b, 1e-12 * max(1.0, abs(b)))
    assert rec.first_trap_entry is None or rec.first_escape is None
    big = escape_radius(p)
    rho = default_trap(2, 1).radius(p.t)
    for i, (a, b) in enumerate(zip(pts, pts[1:])):
        if abs(a) >= big and not b.at_infinity:
            assert abs(b) >= 2 * abs(a) * (1 - 1e-12)
        if abs(p.t) <= 1 and abs(a) < rho:
            assert abs(b) < rho


def test_iterate_orbit_budget_validation():
    with pytest.raises(ParameterError):
        iterate_orbit(FamilyParams(2, 1, 1.0), 0.5, budget=0)


# ---------------------------------------------------------------- detect_cycle

def test_detect_cycle_superattracting_beta():
    p = FamilyParams(2, 1, T_CYCLE)
    cd = critical_data(2, 1)
    rec = iterate_orbit(p, p.t * cd.v_beta_1, budget=400)
    assert rec.outcome.kind is PointKind.CYCLE
    info = detect_cycle(p, rec.points[-128:])
    assert info.period == 1
    assert abs(info.multiplier) < 1e-8
    assert abs(info.representative - cd.beta) < 1e-8


def test_detect_cycle_converging_to_zero():
    p = FamilyParams(2, 1, 1.0)
    z, tail = 0.5, []
    for _ in range(12):
        tail.append(z)
        z = eval_map(p, z).value
    info = detect_cycle(p, tail)
    assert info.period == 1
    assert abs(info.multiplier) < 1e-12
    assert abs(info.representative) < 1e-9


def test_detect_cycle_constant_attracting_sequence():
    # real fixed point of f_t for t = 4: solve t z (1-z) = 1+z numerically
    t = 4.0
    roots = np.roots([-t, t - 1, -1])
    p = FamilyParams(2, 1, t)
    for w in roots:
        mult = eval_derivative(p, w)
        info = detect_cycle(p, [w] * 20)
        if abs(mult) < 1:
            assert info.period == 1 and abs(info.multiplier - mult) < 1e-12
        else:
            assert info is None


@pytest.mark.parametrize("t", [0.11, -0.17 + 0.2j])
def test_detect_cycle_period_two(t):
    # parameters from a scan where the beta orbit has an attracting 2-cycle
    p = FamilyParams(2, 1, t)
    z = p.t * critical_data(2, 1).v_beta_1
    tail = []
    for _ in range(3000):
        z = eval_map(p, z).value
        tail.append(z)
    info = detect_cycle(p, tail[-256:])
    assert info.period == 2
    w, prod = info.representative, 1.0
    for _ in range(info.period):
        prod *= eval_derivative(p, w)
        w = eval_map(p, w).value
    assert abs(w - info.representative) < 1e-8
    assert abs(eval_map(p, info.representative).value - info.representative) > 1e-3
    assert abs(prod - info.multiplier) < 1e-8
    assert abs(info.multiplier) < 1
    assert classify_parameter(2, 1, t).kind is ParamKind.BETA_CYCLE


def test_detect_cycle_none_for_short_or_chaotic_tails():
    p = FamilyParams(2, 1, 1.0)
    assert detect_cycle(p, [0.3, 0.4]) is None
    assert detect_cycle(p, [complex(k, 1) for k in range(40)]) is None
    with pytest.raises(ParameterError):
        detect_cycle(p, [0.0] * 10, tol=0)


# ---------------------------------------------------------------- classify_point

def test_classify_point_examples():
    p = FamilyParams(2, 1, 1.0)
    assert classify_point(p, -1.0) == PointClass(PointKind.BASIN_INFINITY, time=1)
    assert classify_point(p, 0.5).kind is PointKind.BASIN_ZERO
    assert classify_point(FamilyParams(2, 1, 1e-2), critical_data(2, 1).beta).kind \
        is PointKind.BASIN_ZERO


def test_classify_point_deterministic():
    p = FamilyParams(3, 2, 0.7 + 0.2j)
    zs = [complex(a, b) for a in np.linspace(-2, 2, 7) for b in np.linspace(-2, 2, 7)]
    assert [classify_point(p, z) for z in zs] == [classify_point(p, z) for z in zs]


# ---------------------------------------------------------------- classify_parameter

def test_classify_parameter_examples():
    assert classify_parameter(2, 1, 1.0).kind is ParamKind.BOTH_ESCAPE
    assert classify_parameter(2, 1, 0.01).kind is ParamKind.ALPHA_RESIDUAL
    assert classify_parameter(2, 1, 100.0).kind is ParamKind.BETA_RESIDUAL
    cls = classify_parameter(2, 1, T_CYCLE)
    assert cls.kind is ParamKind.BETA_CYCLE and cls.period == 1


def test_classify_parameter_rejects_zero():
    with pytest.raises(ParameterError):
        classify_parameter(2, 1, 0)


def test_unit_disc_never_alpha_cycle_or_alpha_escape_to_infinity():
    for t in unit_disc_params(100):
        cls = classify_parameter(2, 1, t)
        assert cls.alpha.kind is PointKind.BASIN_ZERO
        assert cls.kind is not ParamKind.ALPHA_CYCLE


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 1)])
def test_symmetry_grid(m, n):
    d = m + n
    decided = agree = 0
    for t in polar_grid(0.2, 0.9, 21, 21):
        a = classify_parameter(m, n, t)
        b = classify_parameter(m, n, conjugate_param(t, d))
        if PointKind.UNDECIDED in (a.alpha.kind, a.beta.kind, b.alpha.kind, b.beta.kind):
            continue
        decided += 1
        agree += (a.alpha.mirrored().kind is b.beta.kind and a.beta.mirrored().kind is b.alpha.kind)
    assert decided > 0 and agree / decided >= 0.95


def test_batch_matches_scalar():
    ts = [complex(a, b) for a in np.linspace(-3, 3, 9) for b in np.linspace(-3, 3, 9)
          if (a, b) != (0, 0)]
    batch = classify_parameters(2, 1, ts)
    for k, t in enumerate(ts):
        assert batch.cell(k) == classify_parameter(2, 1, t)


def test_level_or_period_views():
    cls = classify_parameter(2, 1, 1.0)
    assert cls.level_or_period() == (cls.alpha.time, cls.beta.time)
    assert classify_parameter(2, 1, 0.01).level_or_period() is None


# ---------------------------------------------------------------- Q_k

def test_q0_is_linear():
    assert q_k(2, 1, 0, 0.3) == pytest.approx(0.3 * critical_data(2, 1).v_alpha_1)


@pytest.mark.parametrize("m,n,k", [(2, 1, 0), (2, 1, 1), (3, 1, 1), (2, 2, 1), (3, 2, 2)])
def test_q_k_order(m, n, k):
    assert q_k_zero_order(m, n, k) == pytest.approx((m ** (k + 1) - 1) / (m - 1), abs=0.05)


def test_q_k_underflow():
    with pytest.raises(UnderflowError):
        q_k_zero_order(6, 1, 3)
