"""Exact rational functions in the formal parameter t.

`ScalarQt` is the coefficient field Q(t) used throughout: Shapovalov entries
after the substitution lambda -> lambda/t, the element B, and star products.
Numerator and denominator are `flint.fmpq_poly`; the fraction is kept reduced
with a monic denominator, so equal values have identical representations.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import flint

__all__ = ["ScalarQt", "to_fraction", "to_fmpq", "format_fraction"]

_ONE_POLY = flint.fmpq_poly([1])


def to_fmpq(value) -> flint.fmpq:
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, int):
        return flint.fmpq(value)
    if isinstance(value, Rational):
        return flint.fmpq(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def to_fraction(value) -> Fraction:
    if isinstance(value, flint.fmpq):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def format_fraction(value) -> str:
    """Render an exact rational as ``p/q`` (integers without denominator)."""
    q = to_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_poly(poly: flint.fmpq_poly) -> str:
    coeffs = poly.coeffs()
    if not coeffs:
        return "0"
    parts = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = to_fraction(coeffs[power])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if power == 0:
            body = format_fraction(mag)
        else:
            mono = "t" if power == 1 else f"t^{power}"
            body = mono if mag == 1 else f"{format_fraction(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class ScalarQt:
    """An element of Q(t), stored as a reduced fraction of rational polynomials."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num=0, den=None, *, _reduced: bool = False):
        if not isinstance(num, flint.fmpq_poly):
            num = flint.fmpq_poly([to_fmpq(num)])
        if den is None:
            den = _ONE_POLY
        elif not isinstance(den, flint.fmpq_poly):
            den = flint.fmpq_poly([to_fmpq(den)])
        if not _reduced:
            if den == 0:
                raise ZeroDivisionError("ScalarQt with zero denominator")
            if num == 0:
                den = _ONE_POLY
            elif den.degree() > 0:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num // g
                    den = den // g
            lead = den.leading_coefficient()
            if lead != 1:
                num = num / lead
                den = den / lead
        self.num = num
        self.den = den
        self._key = None

    # construction helpers

    @classmethod
    def t(cls) -> "ScalarQt":
        return cls(flint.fmpq_poly([0, 1]), _reduced=True)

    @classmethod
    def from_coeffs(cls, coeffs, den_coeffs=None) -> "ScalarQt":
        num = flint.fmpq_poly([to_fmpq(c) for c in coeffs])
        den = None if den_coeffs is None else flint.fmpq_poly([to_fmpq(c) for c in den_coeffs])
        return cls(num, den)

    @classmethod
    def from_inverse_powers(cls, coeffs) -> "ScalarQt":
        """Build sum_k coeffs[k] * t^(-k), a polynomial in 1/t."""
        coeffs = [to_fmpq(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            return cls(0)
        d = len(coeffs) - 1
        num = flint.fmpq_poly(list(reversed(coeffs)))
        den = flint.fmpq_poly([0] * d + [1])
        return cls(num, den)

    @classmethod
    def coerce(cls, value) -> "ScalarQt":
        if isinstance(value, ScalarQt):
            return value
        return cls(value)

    # predicates

    def is_zero(self) -> bool:
        return self.num == 0

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_constant(self) -> bool:
        return self.den.degree() == 0 and self.num.degree() <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return to_fraction(self.num[0])

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, ScalarQt):
            try:
                other = ScalarQt(other)
            except TypeError:
                return NotImplemented
        if other.num == 0:
            return self
        if self.num == 0:
            return other
        if self.den == other.den:
            if self.den.degree() == 0:
                return ScalarQt(self.num + other.num, _ONE_POLY, _reduced=True)
            return ScalarQt(self.num + other.num, self.den)
        return ScalarQt(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarQt(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        if not isinstance(other, ScalarQt):
            try:
                other = ScalarQt(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ScalarQt.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ScalarQt):
            try:
                c = to_fmpq(other)
            except TypeError:
                return NotImplemented
            if c == 0:
                return ScalarQt(0)
            return ScalarQt(self.num * c, self.den, _reduced=True)
        if self.num == 0 or other.num == 0:
            return ScalarQt(0)
        if self.den.degree() == 0 and other.den.degree() == 0:
            return ScalarQt(self.num * other.num, _ONE_POLY, _reduced=True)
        return ScalarQt(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ScalarQt.coerce(other)
        if other.num == 0:
            raise ZeroDivisionError("division by zero in Q(t)")
        return ScalarQt(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return ScalarQt.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return ScalarQt(1) / (self ** (-n))
        return ScalarQt(self.num**n, self.den**n, _reduced=True)

    # comparison / hashing

    def key(self):
        if self._key is None:
            self._key = (
                tuple((int(c.p), int(c.q)) for c in self.num.coeffs()),
                tuple((int(c.p), int(c.q)) for c in self.den.coeffs()),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, ScalarQt):
            try:
                other = ScalarQt(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(self.key())

    # evaluation and expansion

    def substitute(self, value) -> Fraction:
        """Evaluate at a rational value of t."""
        v = to_fmpq(value)
        d = self.den(v)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at t = {value}")
        return to_fraction(self.num(v) / d)

    def at_zero(self) -> Fraction:
        return self.substitute(0)

    def valuation(self) -> int:
        """Order of vanishing at t = 0 (negative for a pole); +inf encoded as None."""
        if self.num == 0:
            return None
        return _low_degree(self.num) - _low_degree(self.den)

    def series(self, order: int) -> list[Fraction]:
        """Taylor coefficients at t = 0 for powers 0..order."""
        if self.den[0] == 0:
            raise ZeroDivisionError(f"{self} has a pole at t = 0")
        num = self.num.coeffs()
        den = self.den.coeffs()
        inv_d0 = 1 / den[0]
        out: list[flint.fmpq] = []
        for k in range(order + 1):
            acc = num[k] if k < len(num) else flint.fmpq(0)
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc * inv_d0)
        return [to_fraction(c) for c in out]

    def __str__(self):
        if self.den.degree() == 0:
            return _format_poly(self.num)
        num = _format_poly(self.num)
        if self.num.degree() > 0 and len([c for c in self.num.coeffs() if c != 0]) > 1:
            num = f"({num})"
        return f"{num}/({_format_poly(self.den)})"

    def __repr__(self):
        return f"ScalarQt({self})"


def _low_degree(poly: flint.fmpq_poly) -> int:
    for i, c in enumerate(poly.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial")
