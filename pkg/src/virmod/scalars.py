"""Exact arithmetic in the Gaussian rationals Q(i).

Every coefficient used by the rest of the package is a :class:`GaussianRational`.
Real and imaginary parts are :class:`fractions.Fraction`, which already keeps the
canonical form (positive denominator, reduced, zero as 0/1).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = ["GaussianRational", "gr", "gr_parse", "gr_format", "gr_arith", "ZERO", "ONE", "I"]

_RAT = r"[+-]?\d+(?:/\d+)?"
_GAUSS_RE = re.compile(rf"^\s*(?:(?P<re>{_RAT})(?P<im>[+-]\d+(?:/\d+)?)i|(?P<pure_im>{_RAT})i|(?P<only_re>{_RAT}))\s*$")


_F0 = Fraction(0)


def _frac(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


class GaussianRational:
    """An element ``re + im*i`` with rational parts.

    Treated as immutable; arithmetic always returns new instances.
    """

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re=0, im=0):
        if not isinstance(re, Fraction):
            re = Fraction(re)
        if not isinstance(im, Fraction):
            im = Fraction(im)
        self.re = re
        self.im = im
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction, _RationalABC)):
            return cls(x)
        if isinstance(x, str):
            return gr_parse(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")

    # arithmetic

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            if not (self.im or other.im):
                return GaussianRational(self.re + other.re, _F0)
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            if not (self.im or other.im):
                return GaussianRational(self.re - other.re, _F0)
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            if not other.im:
                if not self.im:
                    return GaussianRational(self.re * other.re, _F0)
                return GaussianRational(self.re * other.re, self.im * other.re)
            if not self.im:
                return GaussianRational(self.re * other.re, self.re * other.im)
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other if self.im else _F0)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("division by zero in Q(i)")
        if not self.im:
            return GaussianRational(1 / self.re, _F0)
        norm = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other) * self.inverse()
        return NotImplemented

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # comparison / hashing

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.re) if not self.im else hash((self.re, self.im))
            self._hash = h
        return h

    def is_real(self) -> bool:
        return not self.im

    def is_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        return f"GaussianRational({gr_format(self)!r})"

    def __str__(self):
        return gr_format(self)


def gr(x) -> GaussianRational:
    """Coerce an int, Fraction, complex or text into a GaussianRational."""
    return GaussianRational.coerce(x)


def gr_parse(text: str) -> GaussianRational:
    """Parse ``rational ([+-] rational "i")?`` (also a bare ``rational "i"``)."""
    m = _GAUSS_RE.match(text)
    if m is None:
        raise ValueError(f"malformed Gaussian rational: {text!r}")
    if m["only_re"] is not None:
        return GaussianRational(_frac(m["only_re"]), 0)
    if m["pure_im"] is not None:
        return GaussianRational(0, _frac(m["pure_im"]))
    return GaussianRational(_frac(m["re"]), _frac(m["im"]))


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def gr_format(x: GaussianRational) -> str:
    if not x.im:
        return _fmt_frac(x.re)
    im = _fmt_frac(x.im) + "i"
    if not x.re:
        return im
    return _fmt_frac(x.re) + ("" if x.im < 0 else "+") + im


def gr_arith(op: str, x: GaussianRational, y: GaussianRational) -> GaussianRational:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
