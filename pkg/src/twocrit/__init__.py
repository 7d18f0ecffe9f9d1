"""Dynamics of f_t(z) = t z^m ((1-z)/(1+z))^n."""

from .boettcher import (boettcher_coordinate, e_value, green_infinity, green_zero)
from .family import (CriticalData, FamilyParams, TrapDisc, c_of_t, conjugate_param,
                     critical_data, escape_radius, eval_derivative, eval_map, pc_eval, trap_disc)
from .orbits import (ParamClass, ParamKind, PointClass, PointKind, classify_parameter,
                     classify_point, detect_cycle, iterate_orbit, q_k_zero_order)
from .sphere import INFINITY, ExtComplex

__all__ = [
    "CriticalData", "ExtComplex", "FamilyParams", "INFINITY", "ParamClass", "ParamKind",
    "PointClass", "PointKind", "TrapDisc", "boettcher_coordinate", "c_of_t",
    "classify_parameter", "classify_point", "conjugate_param", "critical_data", "detect_cycle",
    "e_value", "escape_radius", "eval_derivative", "eval_map", "green_infinity", "green_zero",
    "iterate_orbit", "pc_eval", "q_k_zero_order", "trap_disc",
]
