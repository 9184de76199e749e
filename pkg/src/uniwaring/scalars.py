"""Exact scalars: rationals and Gaussian rationals, plus the four ring tags.

A Scalar is a pair of ``fractions.Fraction`` values (real and imaginary
part).  Plain rationals are Scalars with zero imaginary part, so one type
serves Q, Q(i), Z and Z[i]; the ring tag decides which subsets count as
integral.  All arithmetic is exact; Fraction keeps itself reduced with a
positive denominator, which gives the canonical-form invariant for free.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd

from .errors import ParseError

RING_TAGS = ("Q", "QI", "Z", "ZI")

# Fraction field of each tag, used when a spec over Z/ZI is solved over K.
FRACTION_FIELD = {"Q": "Q", "QI": "QI", "Z": "Q", "ZI": "QI"}

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Scalar:
    """Element of Q(i) (with Q, Z, Z[i] as subsets)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        raise TypeError(f"cannot coerce {value!r} to Scalar")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar.of(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.of(other) - self

    def __mul__(self, other):
        other = Scalar.of(other)
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.of(other)
        if not other.re and not other.im:
            raise ZeroDivisionError("division by zero Scalar")
        if not self.im and not other.im:
            return Scalar(self.re / other.re)
        nrm = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / nrm,
            (self.im * other.re - self.re * other.im) / nrm,
        )

    def __rtruediv__(self, other):
        return Scalar.of(other) / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return (Scalar(1) / self) ** (-n)
        out = Scalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm(self) -> Fraction:
        """Field norm re^2 + im^2 (the Euclidean size on Z[i])."""
        return self.re * self.re + self.im * self.im

    # -- predicates ----------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self

    def is_rational(self) -> bool:
        return not self.im

    def is_integral(self, ring: str) -> bool:
        """Membership in the ring of integers named by the tag."""
        if ring in ("Q", "QI"):
            return not self.im if ring == "Q" else True
        if ring == "Z":
            return not self.im and self.re.denominator == 1
        if ring == "ZI":
            return self.re.denominator == 1 and self.im.denominator == 1
        raise ValueError(f"unknown ring tag {ring!r}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    def denominator_lcm(self) -> int:
        """Smallest positive integer D with D*self in Z[i]."""
        a, b = self.re.denominator, self.im.denominator
        return a * b // gcd(a, b)


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


# -- integral (Euclidean) structure on Z and Z[i] -----------------------


def is_unit(x: Scalar, ring: str) -> bool:
    if ring == "Z":
        return x.is_integral("Z") and abs(x.re) == 1
    if ring == "ZI":
        return x.is_integral("ZI") and x.norm() == 1
    raise ValueError(f"ring tag {ring!r} has no unit group of interest")


def euclid_norm(x: Scalar, ring: str) -> int:
    """|x| on Z, N(x) on Z[i]; the size function for Euclidean division."""
    if ring == "Z":
        return abs(int(x.re))
    n = x.norm()
    assert n.denominator == 1
    return int(n)


def _round_half_up(q: Fraction) -> int:
    # Deterministic nearest-integer rounding; ties go toward +infinity.
    from math import floor

    return floor(q + Fraction(1, 2))


def euclid_divmod(a: Scalar, b: Scalar, ring: str) -> tuple[Scalar, Scalar]:
    """Quotient and remainder with euclid_norm(r) < euclid_norm(b).

    Over Z this is floor division (so 0 <= r < |b| when b > 0, which is the
    canonical residue the HNF normalization wants).  Over Z[i] the quotient
    rounds both coordinates to the nearest Gaussian integer with a fixed
    tie-break, giving N(r) <= N(b)/2.
    """
    if not b:
        raise ZeroDivisionError("euclid_divmod by zero")
    if ring == "Z":
        q = Scalar(a.re.numerator // int(a.re.denominator * b.re))
        return q, a - q * b
    t = a / b
    q = Scalar(_round_half_up(t.re), _round_half_up(t.im))
    return q, a - q * b


def euclid_gcd(a: Scalar, b: Scalar, ring: str) -> Scalar:
    while b:
        _, r = euclid_divmod(a, b, ring)
        a, b = b, r
    return a


def unit_normalize(x: Scalar, ring: str) -> tuple[Scalar, Scalar]:
    """Return (u, u*x) with u a unit and u*x the canonical associate.

    Canonical means positive over Z; over Z[i], real part > 0 and imaginary
    part >= 0 (the unique associate in that quarter-plane for x != 0).
    """
    if not x:
        return ONE, x
    if ring == "Z":
        return (ONE, x) if x.re > 0 else (Scalar(-1), -x)
    y = x
    u = ONE
    for _ in range(3):
        if y.re > 0 and y.im >= 0:
            break
        y = y * I_UNIT
        u = u * I_UNIT
    return u, y


def divides(a: Scalar, b: Scalar, ring: str) -> bool:
    """True when a | b in the ring of integers (a != 0)."""
    if not a:
        return not b
    return (b / a).is_integral(ring)


# -- parsing and canonical printing -------------------------------------

_RAT = r"-?\d+(?:/\d+)?"
_SCALAR_RE = _re.compile(
    rf"^\s*(?P<re>{_RAT})?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\*i)?\s*$"
)


def _parse_fraction(text: str, where=None) -> Fraction:
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}", where)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def parse_scalar(text: str, where=None) -> Scalar:
    """Parse "a/b" or "a/b+c/d*i" (denominators optional, reduced or not)."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ParseError(f"malformed scalar {text!r}", where)
    re_part = _parse_fraction(m.group("re"), where) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if m.group("im") is not None:
        im_part = _parse_fraction(m.group("im"), where)
        if m.group("sign") == "-":
            im_part = -im_part
    return Scalar(re_part, im_part)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical text form; parse(format(x)) == x and the form is unique."""
    if not x.im:
        return _format_fraction(x.re)
    sign = "+" if x.im > 0 else "-"
    return f"{_format_fraction(x.re)}{sign}{_format_fraction(abs(x.im))}*i"
