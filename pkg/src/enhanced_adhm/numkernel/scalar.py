"""Scalars for the two realizations used throughout the package.

``"exact"`` entries are :class:`GaussQ` values, complex numbers whose real and
imaginary parts are arbitrary-precision rationals (``gmpy2.mpq``).  ``"float"``
entries are plain Python ``complex`` values.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Integral, Rational

from gmpy2 import mpq

EXACT = "exact"
FLOAT = "float"
FIELDS = (EXACT, FLOAT)

_ZERO = mpq(0)
_ONE = mpq(1)


def _as_mpq(x) -> mpq:
    if isinstance(x, (Integral, Rational)) or type(x) is type(_ZERO):
        return mpq(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float) and x.is_integer():
        return mpq(int(x))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def parse_rational(text: str) -> mpq:
    """Parse ``"p"`` or ``"p/q"``; the denominator must be nonzero."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed fraction {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(p, q)


def format_rational(x: mpq) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class GaussQ:
    """An exact Gaussian rational ``re + im*i``.

    Instances are immutable and hashable.  Mixed arithmetic with Python ints,
    ``Fraction`` and ``mpq`` is supported; mixing with ``float``/``complex``
    is refused so that exact paths never silently lose precision.

    >>> GaussQ(1, 2) * GaussQ(1, -2)
    GaussQ(5)
    >>> GaussQ("1/2") + 1
    GaussQ(3/2)
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussQ):
            if im:
                raise TypeError("imaginary part given twice")
            re, im = re.re, re.im
        object.__setattr__(self, "re", _as_mpq(re))
        object.__setattr__(self, "im", _as_mpq(im))

    @classmethod
    def _new(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussQ is immutable")

    def __reduce__(self):
        return (GaussQ, (format_rational(self.re), format_rational(self.im)))

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (Integral, Rational)) or type(other) is type(_ZERO):
            return GaussQ._new(mpq(other), _ZERO)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ._new(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return GaussQ._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussQ._new(a * c, _ZERO)
        return GaussQ._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = o.re, o.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero GaussQ")
            return GaussQ._new(self.re / c, self.im / c)
        n = c * c + d * d
        a, b = self.re, self.im
        return GaussQ._new((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussQ._new(_ONE, _ZERO) / self) ** (-k)
        result = GaussQ._new(_ONE, _ZERO)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> GaussQ:
        return GaussQ._new(self.re, -self.im)

    def norm(self) -> mpq:
        """Field norm ``re**2 + im**2`` (exact)."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return False
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussQ({format_rational(self.re)})"
        return f"GaussQ({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        if not self.re:
            return f"{format_rational(self.im)}i"
        sign = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"

    def sort_key(self):
        return (self.re, self.im)

    def denominator_lcm(self) -> int:
        return math.lcm(int(self.re.denominator), int(self.im.denominator))


I_UNIT = GaussQ(0, 1)


def to_field(x, field: str):
    """Coerce a scalar into the given realization."""
    if field == EXACT:
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, complex):
            if not x.imag.is_integer() or not x.real.is_integer():
                raise TypeError(f"refusing inexact value {x!r} in exact realization")
            return GaussQ(int(x.real), int(x.imag))
        return GaussQ(x)
    if field == FLOAT:
        if isinstance(x, GaussQ):
            z = complex(x)
        elif isinstance(x, Fraction) or type(x) is type(_ZERO):
            z = complex(float(x))
        else:
            z = complex(x)
        if not cmath.isfinite(z):
            raise ValueError(f"non-finite float entry {x!r}")
        return z
    raise ValueError(f"unknown realization {field!r}")


def zero(field: str):
    return GaussQ._new(_ZERO, _ZERO) if field == EXACT else 0j


def one(field: str):
    return GaussQ._new(_ONE, _ZERO) if field == EXACT else 1 + 0j


def imag_unit(field: str):
    return I_UNIT if field == EXACT else 1j
