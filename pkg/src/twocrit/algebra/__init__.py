"""Exact integer polynomial arithmetic and resultants."""

from .poly import IntPoly, monomial, var
from .resultant import (
    ResultantReport,
    bareiss_determinant,
    eliminate_multiplier,
    fixed_point_system,
    multiplier_curve,
    pc_fixed_point_system,
    pc_multiplier_curve,
    resultant,
    split_resultant,
    sylvester_matrix,
    sylvester_resultant,
)


def poly_arith(a: IntPoly, b: IntPoly, op: str) -> IntPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


__all__ = [
    "IntPoly", "ResultantReport", "bareiss_determinant", "eliminate_multiplier",
    "fixed_point_system", "monomial", "multiplier_curve", "pc_fixed_point_system",
    "pc_multiplier_curve", "poly_arith", "resultant", "split_resultant",
    "sylvester_matrix", "sylvester_resultant", "var",
]
