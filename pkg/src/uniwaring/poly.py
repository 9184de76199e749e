"""Dense univariate polynomials over Scalar.

Coefficients are stored constant-term first; the zero polynomial is the
empty tuple, so the trailing coefficient is always nonzero.  Polynomials
interoperate with Scalar/int in ring operations, which lets the matrix
exponential and logarithm run unchanged on polynomial-entried matrices.
"""

from __future__ import annotations

from .scalars import Scalar, format_scalar


def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([Scalar.of(c) for c in coeffs])

    @staticmethod
    def of(value) -> "Poly":
        if isinstance(value, Poly):
            return value
        return Poly([Scalar.of(value)])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Scalar:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Scalar(0)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Scalar)):
            other = Poly.of(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = Poly.of(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-Poly.of(other))

    def __rsub__(self, other):
        return Poly.of(other) - self

    def __mul__(self, other):
        other = Poly.of(other)
        if not self or not other:
            return Poly()
        out = [Scalar(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = Scalar.of(scalar)
        return Poly([c / s for c in self.coeffs])

    def __call__(self, x) -> Scalar:
        """Evaluate by Horner's rule."""
        x = Scalar.of(x)
        acc = Scalar(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)), exact."""
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.of(c)
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "Poly()"
        terms = ", ".join(format_scalar(c) for c in self.coeffs)
        return f"Poly([{terms}])"


ZERO_POLY = Poly()
ONE_POLY = Poly([1])
