"""Sylvester resultants and the fixed-point multiplier curves built from them.

Sign convention: the Sylvester matrix lists the rows of the first argument
first, which gives Res(a, b) = lc(a)^deg(b) * prod b(roots of a).  In
particular Res_z(z - a, z - b) = a - b.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from operator import mul

from ..errors import DegenerateInputError, ParameterError, SizeLimitError
from .poly import IntPoly, monomial, var

MAX_DEGREE_SUM = 8


@dataclass(frozen=True)
class ResultantReport:
    """Raw resultant split as content * prod(removed_factors) * primitive.

    ``removed_factors`` are monomials free of the multiplier variable that
    divide every term; ``primitive`` is normalised to a positive leading
    coefficient in the multiplier variable.
    """

    raw: IntPoly
    content: int
    removed_factors: tuple
    primitive: IntPoly
    multiplier: str | None = None

    def reconstruct(self) -> IntPoly:
        return reduce(mul, self.removed_factors, IntPoly.const(self.content)) * self.primitive

    def is_consistent(self) -> bool:
        return self.reconstruct() == self.raw


def split_resultant(raw: IntPoly, multiplier: str | None = None) -> ResultantReport:
    if raw.is_zero():
        return ResultantReport(raw, 0, (), raw, multiplier)
    removed = tuple(monomial({v: k}) for v, k in raw.monomial_content().items()
                    if v != multiplier and multiplier is not None)
    content = raw.content()
    primitive = raw.divexact(reduce(mul, removed, IntPoly.const(content)))
    if multiplier is not None and multiplier in primitive.used_variables():
        lead = primitive.leading_coefficient(multiplier)
    else:
        lead = primitive
    if lead.leading_term()[1] < 0:
        content, primitive = -content, -primitive
    return ResultantReport(raw, content, removed, primitive, multiplier)


def sylvester_matrix(a: IntPoly, b: IntPoly, name: str):
    """(p+q) x (p+q) matrix of coefficients in ``name``; a's q rows first."""
    p, q = a.degree(name), b.degree(name)
    ca, cb = a.coefficients_in(name), b.coefficients_in(name)
    zero = IntPoly()
    size = p + q
    rows = []
    for i in range(q):
        row = [zero] * size
        for k in range(p + 1):
            row[i + p - k] = ca.get(k, zero)
        rows.append(row)
    for i in range(p):
        row = [zero] * size
        for k in range(q + 1):
            row[i + q - k] = cb.get(k, zero)
        rows.append(row)
    return rows


def bareiss_determinant(matrix) -> IntPoly:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Every division in the recurrence is exact over the integer polynomial ring.
    """
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        return IntPoly.const(1)
    sign = 1
    prev = IntPoly.const(1)
    for k in range(size - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, size):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return IntPoly()
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]).divexact(prev)
            m[i][k] = IntPoly()
        prev = pivot
    det = m[-1][-1]
    return -det if sign < 0 else det


def resultant(a: IntPoly, b: IntPoly, name: str) -> IntPoly:
    """Res_name(a, b) as a polynomial in the remaining variables."""
    for label, poly in (("first", a), ("second", b)):
        if poly.is_zero():
            raise DegenerateInputError(f"{label} polynomial is zero")
        if poly.degree(name) < 1:
            raise DegenerateInputError(f"{label} polynomial has no positive degree in {name}")
    return bareiss_determinant(sylvester_matrix(a, b, name))


def sylvester_resultant(a: IntPoly, b: IntPoly, name: str,
                        multiplier: str | None = None) -> ResultantReport:
    return split_resultant(resultant(a, b, name), multiplier)


def _guard(m, n):
    if m < 2 or n < 1:
        raise ParameterError(f"need m >= 2 and n >= 1, got ({m}, {n})")
    if m + n > MAX_DEGREE_SUM:
        raise SizeLimitError(f"m + n = {m + n} exceeds the exact-arithmetic guard {MAX_DEGREE_SUM}")


def fixed_point_system(m: int, n: int):
    """Polynomials for the nontrivial fixed points of f_t and their multiplier.

    p(z, t)  = t z^(m-1) (1-z)^n - (1+z)^n
    q2(z, t, lambda) = lambda (1+z)^(n+1) - t z^(m-1) (1-z)^(n-1) (m(1-z^2) - 2nz)
    """
    z, t, lam = var("z"), var("t"), var("lambda")
    p = t * z ** (m - 1) * (1 - z) ** n - (1 + z) ** n
    q2 = lam * (1 + z) ** (n + 1) - t * z ** (m - 1) * (1 - z) ** (n - 1) * (m * (1 - z * z) - 2 * n * z)
    return p, q2


def pc_fixed_point_system(m: int, n: int):
    """Nontrivial fixed points of P_c and the multiplier relation mu = P_c'(z)."""
    z, c, mu = var("z"), var("c"), var("mu")
    p = c * z ** (m - 1) * (z + 1) ** n - 1
    q2 = mu - c * z ** (m - 1) * (z + 1) ** (n - 1) * ((m + n) * z + m)
    return p, q2


def multiplier_curve(m: int, n: int) -> ResultantReport:
    """R_f(t, lambda): relation between t and the multipliers of the fixed points of f_t."""
    _guard(m, n)
    p, q2 = fixed_point_system(m, n)
    return sylvester_resultant(p, q2, "z", multiplier="lambda")


def pc_multiplier_curve(m: int, n: int) -> ResultantReport:
    """R_P(c, mu) for the fixed points of P_c."""
    _guard(m, n)
    p, q2 = pc_fixed_point_system(m, n)
    return sylvester_resultant(p, q2, "z", multiplier="mu")


def eliminate_multiplier(rf: IntPoly, rp: IntPoly, shared: str = "lambda",
                         other: str = "mu") -> ResultantReport:
    """Res over the multiplier of R_f(t, lambda) and R_P(c, lambda).

    ``rp`` may carry its multiplier as ``other``; it is renamed to ``shared``.
    """
    rp = rp.rename(other, shared)
    for label, poly in (("first", rf), ("second", rp)):
        if shared not in poly.used_variables():
            raise DegenerateInputError(f"{label} curve does not involve {shared}")
    return split_resultant(resultant(rf, rp, shared), None)
