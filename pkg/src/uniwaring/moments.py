"""Signed moment-curve representations via finite-difference gadgets.

The moment curve is phi(x) = (x, x^2, ..., x^d).  The level-l gadget is the
difference of two (l-1)-th forward differences of phi; its value vanishes
in coordinates below l, equals the requested t in coordinate l exactly, and
pollutes higher coordinates with integer-coefficient junk in t/l!.  Forward
elimination over the levels therefore represents any target vector over a
field, and over Z or Z[i] whenever the per-level divisibility l! | residual
holds -- which is guaranteed on integral_guarantee(d) * O^d.
"""

from __future__ import annotations

from math import comb, factorial
from functools import lru_cache

from .errors import NotRepresented
from .scalars import Scalar, divides


def _sort_key(x: Scalar):
    return (x.re, x.im)


class MomentRepresentation:
    """Signed multiset of moment-curve points with exact value."""

    __slots__ = ("d", "plus", "minus")

    def __init__(self, d: int, plus=(), minus=()):
        self.d = d
        self.plus = tuple(Scalar.of(x) for x in plus)
        self.minus = tuple(Scalar.of(x) for x in minus)

    @property
    def size(self) -> int:
        return len(self.plus) + len(self.minus)

    def value(self):
        """sum phi(plus) - sum phi(minus), computed exactly."""
        out = [Scalar(0)] * self.d
        for sign, points in ((1, self.plus), (-1, self.minus)):
            for x in points:
                power = Scalar(1)
                for i in range(self.d):
                    power = power * x
                    out[i] = out[i] + power if sign > 0 else out[i] - power
        return tuple(out)

    def merged(self, other: "MomentRepresentation") -> "MomentRepresentation":
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        return MomentRepresentation(
            self.d, self.plus + other.plus, self.minus + other.minus
        )

    def simplified(self) -> "MomentRepresentation":
        """Cancel points shared by both signs, then sort for determinism."""
        plus = sorted(self.plus, key=_sort_key)
        minus = sorted(self.minus, key=_sort_key)
        out_plus, out_minus = [], []
        i = j = 0
        while i < len(plus) and j < len(minus):
            ki, kj = _sort_key(plus[i]), _sort_key(minus[j])
            if ki == kj:
                i += 1
                j += 1
            elif ki < kj:
                out_plus.append(plus[i])
                i += 1
            else:
                out_minus.append(minus[j])
                j += 1
        out_plus.extend(plus[i:])
        out_minus.extend(minus[j:])
        return MomentRepresentation(self.d, out_plus, out_minus)

    def points_integral(self, ring: str) -> bool:
        return all(x.is_integral(ring) for x in self.plus + self.minus)

    def __repr__(self):
        return (
            f"MomentRepresentation(d={self.d}, plus={[str(x) for x in self.plus]},"
            f" minus={[str(x) for x in self.minus]})"
        )


def finite_difference_gadget(level: int, t, x0, d: int) -> MomentRepresentation:
    """Signed points of D^{level-1} phi(x0 + t/level!) - D^{level-1} phi(x0).

    D is the forward difference D f(x) = f(x+1) - f(x).  The value has
    zeros in coordinates 1..level-1 and exactly t in coordinate level;
    2 * 2^(level-1) points, counted with binomial multiplicity.
    """
    if not 1 <= level <= d:
        raise ValueError(f"gadget level {level} outside 1..{d}")
    t = Scalar.of(t)
    x0 = Scalar.of(x0)
    u = t / factorial(level)
    m = level - 1
    plus, minus = [], []
    for base, outer_sign in ((x0 + u, 1), (x0, -1)):
        for s in range(m + 1):
            sign = outer_sign * (1 if (m - s) % 2 == 0 else -1)
            point = base + s
            bucket = plus if sign > 0 else minus
            bucket.extend([point] * comb(m, s))
    return MomentRepresentation(d, plus, minus)


def solve_moments_field(y, d: int | None = None) -> MomentRepresentation:
    """Represent y in K^d exactly; at most 2(2^d - 1) points.

    Forward elimination: level l clears coordinate l of the residual with a
    single gadget, leaving lower coordinates untouched.
    """
    y = [Scalar.of(c) for c in y]
    d = len(y) if d is None else d
    rep = MomentRepresentation(d)
    residual = list(y)
    for level in range(1, d + 1):
        t = residual[level - 1]
        if not t:
            continue
        g = finite_difference_gadget(level, t, 0, d)
        rep = rep.merged(g)
        val = g.value()
        residual = [r - v for r, v in zip(residual, val)]
    assert not any(residual)
    rep = rep.simplified()
    assert rep.value() == tuple(y)
    return rep


def solve_moments_integral(y, ring: str) -> MomentRepresentation:
    """Like solve_moments_field but all points must land in Z or Z[i].

    Succeeds whenever y is in integral_guarantee(d) * O^d; on other inputs
    it may still succeed, and otherwise reports the first level whose
    divisibility l! | residual_l fails.
    """
    if ring not in ("Z", "ZI"):
        raise ValueError(f"integral solve needs ring Z or ZI, got {ring!r}")
    y = [Scalar.of(c) for c in y]
    d = len(y)
    rep = MomentRepresentation(d)
    residual = list(y)
    for level in range(1, d + 1):
        t = residual[level - 1]
        if not t:
            continue
        fac = Scalar(factorial(level))
        if not t.is_integral(ring) or not divides(fac, t, ring):
            raise NotRepresented(level, t, factorial(level))
        g = finite_difference_gadget(level, t, 0, d)
        rep = rep.merged(g)
        val = g.value()
        residual = [r - v for r, v in zip(residual, val)]
    assert not any(residual)
    rep = rep.simplified()
    assert rep.value() == tuple(y)
    assert rep.points_integral(ring)
    return rep


@lru_cache(maxsize=None)
def integral_guarantee(d: int) -> int:
    """The published lambda: y in lambda * O^d always solves integrally.

    Demands propagate top-down: level l needs t in l! * m_l * O where m_l
    clears the junk divisibility of every higher level, m_d = 1.
    """
    if d < 1:
        return 1
    from math import lcm

    m = {d: 1}
    for level in range(d - 1, 0, -1):
        m[level] = lcm(*[factorial(i) * m[i] for i in range(level + 1, d + 1)])
    return lcm(*[factorial(level) * m[level] for level in range(1, d + 1)])


def signed_power_identity(i: int, alpha):
    """Arguments and signs certifying i! * alpha = sum sign * arg^i + constant.

    Returns (terms, constant) with terms a list of (argument, sign) pairs,
    already expanded with binomial multiplicity.  The identity is the
    (i-1)-th forward difference of x^i evaluated at alpha minus its value
    at 0, whence constant = -(i-1) * i! / 2.  Re-evaluated before returning.
    """
    if i < 1:
        raise ValueError("power must be positive")
    alpha = Scalar.of(alpha)
    terms = []
    for m in range(i):
        sign = 1 if (i - 1 - m) % 2 == 0 else -1
        terms.extend([(alpha + m, sign)] * comb(i - 1, m))
    constant = Scalar(-(i - 1) * factorial(i)) / 2
    total = Scalar(0)
    for arg, sign in terms:
        total = total + arg**i if sign > 0 else total - arg**i
    assert total + constant == alpha * factorial(i)
    return terms, constant
