"""Points on the Riemann sphere."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

# Distance to a pole below which a point is treated as an exact pole hit.
POLE_EPS = 1e-13


@dataclass(frozen=True)
class ExtComplex:
    """A finite complex number or the point at infinity.

    When ``at_infinity`` is set the real and imaginary parts carry no
    meaning and are stored as zero.
    """

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
        elif not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValueError("finite ExtComplex needs finite components")

    @classmethod
    def of(cls, value) -> "ExtComplex":
        """Coerce a number, ExtComplex or ``None`` (infinity) to ExtComplex.

        Non-finite complex values map to the infinity representative.
        """
        if isinstance(value, ExtComplex):
            return value
        if value is None:
            return INFINITY
        if not isinstance(value, Number):
            raise TypeError(f"cannot interpret {value!r} as a point of the sphere")
        z = complex(value)
        if not cmath.isfinite(z):
            return INFINITY
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        """The finite value; infinity is returned as ``complex(inf, 0)``."""
        if self.at_infinity:
            return complex(math.inf, 0.0)
        return complex(self.re, self.im)

    def __abs__(self):
        return math.inf if self.at_infinity else math.hypot(self.re, self.im)

    def is_close(self, other, tol=1e-12) -> bool:
        other = ExtComplex.of(other)
        if self.at_infinity or other.at_infinity:
            return self.at_infinity and other.at_infinity
        return abs(self.value - other.value) <= tol

    def __str__(self):
        if self.at_infinity:
            return "inf"
        return f"{self.re!r}{self.im:+}j"


INFINITY = ExtComplex(at_infinity=True)
