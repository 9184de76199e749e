"""Unitriangular and strictly-upper-triangular matrices with exact entries.

UniMatrix (unit diagonal) and NilMatrix (zero diagonal and below) wrap
Scalar grids.  The series helpers at the bottom are generic over the entry
ring: they only use +, -, * and division by an integer, so the same code
computes exp/log for Scalar matrices and for polynomial-entried matrices
(where x is kept symbolic).  All series are finite because the k-th power
of a strictly upper matrix vanishes.
"""

from __future__ import annotations

from math import factorial

from .errors import NotUnitriangular
from .scalars import Scalar, format_scalar


def _freeze(rows):
    return tuple(tuple(r) for r in rows)


def grid_mul(a, b, zero):
    k = len(a)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = zero
            for m in range(k):
                x = a[i][m]
                if x:
                    acc = acc + x * b[m][j]
            row.append(acc)
        out.append(row)
    return _freeze(out)


def grid_add(a, b):
    return _freeze([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def grid_sub(a, b):
    return _freeze([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def grid_scale(a, c):
    return _freeze([[c * x for x in row] for row in a])


def grid_identity(k, zero, one):
    return _freeze([[one if i == j else zero for j in range(k)] for i in range(k)])


def nil_exp_grid(n_rows, k, zero, one):
    """exp of a strictly upper grid: sum_{m<k} N^m / m!."""
    out = grid_identity(k, zero, one)
    power = grid_identity(k, zero, one)
    for m in range(1, k):
        power = grid_mul(power, n_rows, zero)
        out = grid_add(out, _freeze([[x / factorial(m) for x in row] for row in power]))
    return out

def uni_log_grid(u_rows, k, zero, one):
    """log of a unitriangular grid: alternating Mercator series in (U - I)."""
    shifted = grid_sub(u_rows, grid_identity(k, zero, one))
    out = _freeze([[zero for _ in range(k)] for _ in range(k)])
    power = grid_identity(k, zero, one)
    for m in range(1, k):
        power = grid_mul(power, shifted, zero)
        sign = 1 if m % 2 == 1 else -1
        out = grid_add(out, _freeze([[x * sign / m for x in row] for row in power]))
    return out


def uni_inverse_grid(u_rows, k, zero, one):
    """Inverse of a unitriangular grid via the finite geometric series."""
    shifted = grid_sub(u_rows, grid_identity(k, zero, one))
    out = grid_identity(k, zero, one)
    power = grid_identity(k, zero, one)
    for m in range(1, k):
        power = grid_mul(power, shifted, zero)
        sign = 1 if m % 2 == 0 else -1
        out = grid_add(out, grid_scale(power, sign))
    return out


class NilMatrix:
    """Strictly upper triangular k x k matrix over Scalar."""

    __slots__ = ("k", "rows")

    def __init__(self, rows):
        rows = _freeze([[Scalar.of(x) for x in row] for row in rows])
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ValueError("NilMatrix needs a square grid")
        for i in range(k):
            for j in range(0, i + 1):
                if rows[i][j]:
                    raise NotUnitriangular(
                        f"entry ({i},{j}) = {format_scalar(rows[i][j])} on or below diagonal"
                    )
        self.k = k
        self.rows = rows

    @staticmethod
    def zero(k) -> "NilMatrix":
        return NilMatrix([[0] * k for _ in range(k)])

    @staticmethod
    def elementary(k, i, j, c=1) -> "NilMatrix":
        """c * E_{ij} with 0-based indices, i < j."""
        rows = [[Scalar(0)] * k for _ in range(k)]
        rows[i][j] = Scalar.of(c)
        return NilMatrix(rows)

    def __add__(self, other):
        return NilMatrix(grid_add(self.rows, other.rows))

    def __sub__(self, other):
        return NilMatrix(grid_sub(self.rows, other.rows))

    def __neg__(self):
        return self.scale(Scalar(-1))

    def scale(self, c) -> "NilMatrix":
        return NilMatrix(grid_scale(self.rows, Scalar.of(c)))

    def bracket(self, other: "NilMatrix") -> "NilMatrix":
        """Matrix commutator self*other - other*self."""
        z = Scalar(0)
        return NilMatrix(
            grid_sub(grid_mul(self.rows, other.rows, z), grid_mul(other.rows, self.rows, z))
        )

    def strict_upper(self) -> tuple:
        """Row-major vector of the above-diagonal entries (the fixed coordinate order)."""
        return tuple(
            self.rows[i][j] for i in range(self.k) for j in range(i + 1, self.k)
        )

    @staticmethod
    def from_strict_upper(k, vec) -> "NilMatrix":
        rows = [[Scalar(0)] * k for _ in range(k)]
        pos = 0
        for i in range(k):
            for j in range(i + 1, k):
                rows[i][j] = Scalar.of(vec[pos])
                pos += 1
        return NilMatrix(rows)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, NilMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(
            " ".join(format_scalar(x) for x in row) for row in self.rows
        )
        return f"NilMatrix[{body}]"


class UniMatrix:
    """Unitriangular k x k matrix over Scalar (unit diagonal, zero below)."""

    __slots__ = ("k", "rows")

    def __init__(self, rows):
        rows = _freeze([[Scalar.of(x) for x in row] for row in rows])
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ValueError("UniMatrix needs a square grid")
        for i in range(k):
            if rows[i][i] != Scalar(1):
                raise NotUnitriangular(f"diagonal entry ({i},{i}) != 1")
            for j in range(i):
                if rows[i][j]:
                    raise NotUnitriangular(f"entry ({i},{j}) below diagonal nonzero")
        self.k = k
        self.rows = rows

    @staticmethod
    def identity(k) -> "UniMatrix":
        return UniMatrix(grid_identity(k, Scalar(0), Scalar(1)))

    def __mul__(self, other: "UniMatrix") -> "UniMatrix":
        return UniMatrix(grid_mul(self.rows, other.rows, Scalar(0)))

    def inverse(self) -> "UniMatrix":
        return UniMatrix(uni_inverse_grid(self.rows, self.k, Scalar(0), Scalar(1)))

    def is_identity(self) -> bool:
        one, zero = Scalar(1), Scalar(0)
        return all(
            self.rows[i][j] == (one if i == j else zero)
            for i in range(self.k)
            for j in range(self.k)
        )

    def entries_integral(self, ring: str) -> bool:
        return all(x.is_integral(ring) for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, UniMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(
            " ".join(format_scalar(x) for x in row) for row in self.rows
        )
        return f"UniMatrix[{body}]"


def exp(n: NilMatrix) -> UniMatrix:
    """Exact exponential; finite because n^k = 0."""
    return UniMatrix(nil_exp_grid(n.rows, n.k, Scalar(0), Scalar(1)))


def log(u: UniMatrix) -> NilMatrix:
    """Exact logarithm, the inverse of exp on unitriangular matrices."""
    return NilMatrix(uni_log_grid(u.rows, u.k, Scalar(0), Scalar(1)))


def group_commutator(a: UniMatrix, b: UniMatrix) -> UniMatrix:
    """a b a^-1 b^-1, computed exactly."""
    if a.k != b.k:
        raise ValueError("size mismatch in group_commutator")
    return a * b * a.inverse() * b.inverse()
