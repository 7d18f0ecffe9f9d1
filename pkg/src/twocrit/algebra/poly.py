"""Sparse multivariate polynomials with Python integer coefficients."""

from __future__ import annotations

from functools import reduce
from math import gcd
from numbers import Integral

# Canonical variable order; unknown symbols sort after these, alphabetically.
VARIABLE_ORDER = ("z", "t", "lambda", "c", "mu")


def _var_key(name):
    try:
        return (VARIABLE_ORDER.index(name), "")
    except ValueError:
        return (len(VARIABLE_ORDER), name)


def _grlex_key(exps):
    return (sum(exps), exps)


class IntPoly:
    """Polynomial in named variables over the integers.

    ``terms`` maps exponent tuples (aligned with ``variables``) to nonzero
    integer coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, terms=None, variables=()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        order = sorted(range(len(variables)), key=lambda i: _var_key(variables[i]))
        self.variables = tuple(variables[i] for i in order)
        clean = {}
        for exps, coeff in (terms or {}).items():
            if not isinstance(coeff, Integral):
                raise TypeError(f"coefficients must be integers, got {coeff!r}")
            if len(exps) != len(variables):
                raise ValueError("exponent vector does not match variables")
            if coeff:
                key = tuple(exps[i] for i in order)
                clean[key] = clean.get(key, 0) + int(coeff)
        self.terms = {e: c for e, c in clean.items() if c}

    # -- construction -----------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "IntPoly":
        return cls({(1,): 1}, (name,))

    @classmethod
    def const(cls, value: int) -> "IntPoly":
        return cls({(): value}, ())

    @classmethod
    def promote(cls, value) -> "IntPoly":
        if isinstance(value, IntPoly):
            return value
        if isinstance(value, Integral):
            return cls.const(value)
        return NotImplemented

    def with_variables(self, variables) -> "IntPoly":
        """Re-express over a superset of the current variables."""
        variables = tuple(sorted(set(variables), key=_var_key))
        missing = set(self.variables) - set(variables)
        if missing:
            raise ValueError(f"cannot drop variables {sorted(missing)} that are in use")
        pos = [variables.index(v) for v in self.variables]
        terms = {}
        for exps, coeff in self.terms.items():
            new = [0] * len(variables)
            for p, e in zip(pos, exps):
                new[p] = e
            terms[tuple(new)] = coeff
        return IntPoly(terms, variables)

    def _aligned(self, other):
        if self.variables == other.variables:
            return self, other
        allvars = set(self.variables) | set(other.variables)
        return self.with_variables(allvars), other.with_variables(allvars)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), 0)

    def used_variables(self):
        return tuple(v for i, v in enumerate(self.variables)
                     if any(e[i] for e in self.terms))

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def leading_term(self):
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def coefficients_in(self, var: str) -> dict[int, "IntPoly"]:
        """Split as sum_k coeff_k * var^k; coefficients no longer mention var."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        parts: dict[int, dict] = {}
        for exps, coeff in self.terms.items():
            parts.setdefault(exps[i], {})[exps[:i] + exps[i + 1:]] = coeff
        return {k: IntPoly(t, rest) for k, t in parts.items()}

    def leading_coefficient(self, var: str) -> "IntPoly":
        return self.coefficients_in(var).get(self.degree(var), IntPoly())

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        return reduce(gcd, self.terms.values(), 0)

    def monomial_content(self) -> dict[str, int]:
        """Largest power of each variable dividing every term."""
        if not self.terms:
            return {}
        mins = [min(e[i] for e in self.terms) for i in range(len(self.variables))]
        return {v: k for v, k in zip(self.variables, mins) if k}

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return other
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return IntPoly(terms, a.variables)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return other
        a, b = self._aligned(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return IntPoly(terms, a.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, Integral) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = IntPoly.const(1).with_variables(self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = IntPoly.promote(other)
        if other is NotImplemented:
            return other
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        trimmed = self.trimmed()
        return hash((trimmed.variables, frozenset(trimmed.terms.items())))

    def trimmed(self) -> "IntPoly":
        """The same polynomial over only the variables it actually uses."""
        keep = [i for i, v in enumerate(self.variables) if any(e[i] for e in self.terms)]
        terms = {tuple(e[i] for i in keep): c for e, c in self.terms.items()}
        return IntPoly(terms, tuple(self.variables[i] for i in keep))

    def divexact(self, other) -> "IntPoly":
        """Quotient self / other, which must divide exactly over the integers."""
        other = IntPoly.promote(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a, b = self._aligned(other)
        lead_e, lead_c = b.leading_term()
        rem = dict(a.terms)
        quot = {}
        nv = len(a.variables)
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            shift = tuple(e[i] - lead_e[i] for i in range(nv))
            if min(shift, default=0) < 0 or c % lead_c:
                raise ArithmeticError("division is not exact")
            q = c // lead_c
            quot[shift] = q
            for be, bc in b.terms.items():
                key = tuple(be[i] + shift[i] for i in range(nv))
                val = rem.get(key, 0) - q * bc
                if val:
                    rem[key] = val
                else:
                    rem.pop(key, None)
        return IntPoly(quot, a.variables)

    # -- substitution -----------------------------------------------------
    def subs(self, var: str, value) -> "IntPoly":
        """Substitute an integer or IntPoly for ``var``."""
        value = IntPoly.promote(value)
        result = IntPoly()
        for k, coeff in self.coefficients_in(var).items():
            result = result + coeff * value ** k
        return result

    def rename(self, old: str, new: str) -> "IntPoly":
        if old not in self.variables:
            return self
        if new in self.variables:
            raise ValueError(f"variable {new!r} already present")
        names = tuple(new if v == old else v for v in self.variables)
        return IntPoly(dict(self.terms), names)

    def evaluate(self, values: dict):
        """Evaluate at a point; values may be any ring elements (int, Fraction, complex...)."""
        missing = [v for v in self.used_variables() if v not in values]
        if missing:
            raise KeyError(f"no value for {missing}")
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(self.variables, exps):
                if e:
                    term = term * values[v] ** e
            total = total + term
        return total

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[exps]
            factors = [v if e == 1 else f"{v}^{e}"
                       for v, e in zip(self.variables, exps) if e]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not out:
                out.append(body if coeff > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(out)

    def __repr__(self):
        return f"IntPoly({str(self)!r})"


def var(name: str) -> IntPoly:
    return IntPoly.var(name)


def monomial(powers: dict[str, int], coeff: int = 1) -> IntPoly:
    names = tuple(powers)
    return IntPoly({tuple(powers[v] for v in names): coeff}, names)
