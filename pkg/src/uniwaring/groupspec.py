"""Group specifications: a unitriangular group given by a Lie algebra basis.

A GroupSpec holds a bracket-closed subalgebra of strictly upper k x k
matrices over the fraction field of its ring tag.  The derived series and
the quotient coordinate maps are computed once with exact linear algebra
and cached; everything downstream (generating test, decomposition,
certificates) reads coordinates through the QuotientMap objects built here.

Coordinates on nilpotent matrices are always the row-major vector of
above-diagonal entries, so echelon forms and quotient bases are
reproducible.
"""

from __future__ import annotations

from .errors import BadLevel, NotClosed, NotInGroup
from .linalg import in_span, rref
from .matrices import NilMatrix
from .scalars import RING_TAGS, Scalar


class QuotientMap:
    """Linear projection from level-l members onto g^(l) / g^(l+1) coordinates.

    project() reads coordinates of a NilMatrix (or of anything with the
    same strict-upper layout, e.g. polynomial entries); lift() is the fixed
    linear section sending quotient coordinates back into g^(l).
    """

    def __init__(self, spec, level, basis_rref, pivots, sub_in_coords, sub_pivots, free_cols):
        self.spec = spec
        self.level = level
        self._basis = basis_rref           # RREF rows spanning g^(level)
        self._pivots = pivots              # their pivot positions in entry coords
        self._sub = sub_in_coords          # RREF rows of g^(level+1) in basis coords
        self._sub_pivots = sub_pivots
        self._free = free_cols             # complement coordinates = quotient coords
        self.dim = len(free_cols)

    def _coords_in_basis(self, upper_vec):
        # g^(level) basis is in RREF, so coordinates are the pivot entries;
        # membership is checked by reducing to zero.
        residual = list(upper_vec)
        coords = []
        for row, p in zip(self._basis, self._pivots):
            c = residual[p]
            coords.append(c)
            if c:
                residual = [x - c * y for x, y in zip(residual, row)]
        if any(residual):
            return None
        # Quotient out the next derived subalgebra.
        for row, p in zip(self._sub, self._sub_pivots):
            c = coords[p]
            if c:
                coords = [x - c * y for x, y in zip(coords, row)]
        return coords

    def project_vec(self, upper_vec):
        """Quotient coordinates of a strict-upper entry vector; generic in the entry ring."""
        coords = self._coords_in_basis(upper_vec)
        if coords is None:
            raise NotInGroup(
                f"element does not lie in derived level {self.level}",
                offending=upper_vec,
            )
        return tuple(coords[c] for c in self._free)

    def project(self, n: NilMatrix):
        return self.project_vec(n.strict_upper())

    def lift(self, quotient_coords) -> NilMatrix:
        """The fixed section: project(lift(q)) == q exactly."""
        if len(quotient_coords) != self.dim:
            raise ValueError("quotient coordinate length mismatch")
        k = self.spec.k
        vec = [Scalar(0)] * (k * (k - 1) // 2)
        for q, c in zip(quotient_coords, self._free):
            if q:
                row = self._basis[c]
                vec = [x + Scalar.of(q) * y for x, y in zip(vec, row)]
        return NilMatrix.from_strict_upper(k, vec)

    def basis_matrices(self):
        """Ordered quotient coordinate basis, as representatives in g^(level)."""
        k = self.spec.k
        return [NilMatrix.from_strict_upper(k, self._basis[c]) for c in self._free]


class GroupSpec:
    """Unitriangular group scheme given by a bracket-closed Lie basis."""

    def __init__(self, k: int, ring: str, lie_basis):
        if ring not in RING_TAGS:
            raise ValueError(f"unknown ring tag {ring!r}")
        self.k = k
        self.ring = ring
        if ring in ("Q", "Z"):
            for m in lie_basis:
                if any(not x.is_rational() for row in m.rows for x in row):
                    raise ValueError(f"Gaussian basis entry under ring tag {ring}")
        basis_vecs = [m.strict_upper() for m in lie_basis]
        reduced, pivots = rref(basis_vecs)
        if len(reduced) != len(lie_basis):
            raise ValueError("lie_basis is linearly dependent")
        self.lie_basis = [NilMatrix.from_strict_upper(k, row) for row in reduced]
        self._basis_rref = reduced
        self._basis_pivots = pivots
        self._check_bracket_closure()
        self.derived_bases = self._derived_series_bases()
        self._quotients = None

    @property
    def dim(self) -> int:
        return len(self.lie_basis)

    @property
    def fraction_field(self) -> str:
        return "QI" if self.ring in ("QI", "ZI") else "Q"

    @property
    def degree_over_q(self) -> int:
        return 2 if self.ring in ("QI", "ZI") else 1

    def _check_bracket_closure(self):
        for i, u in enumerate(self.lie_basis):
            for v in self.lie_basis[i + 1:]:
                w = u.bracket(v)
                if w.is_zero():
                    continue
                if in_span(self._basis_rref, self._basis_pivots, w.strict_upper()) is None:
                    raise NotClosed(
                        f"bracket of basis elements leaves the span: {u!r}, {v!r}"
                    )

    def _derived_series_bases(self):
        """RREF bases of g = g^(0) > g^(1) > ... > 0, each level the span of
        brackets of the previous level with itself."""
        series = [self._basis_rref]
        current = self.lie_basis
        while current:
            brackets = []
            for i, u in enumerate(current):
                for v in current[i + 1:]:
                    w = u.bracket(v)
                    if not w.is_zero():
                        brackets.append(w.strict_upper())
            reduced, _ = rref(brackets)
            if len(reduced) >= len(series[-1]):
                raise NotClosed("derived series failed to strictly decrease")
            series.append(reduced)
            current = [NilMatrix.from_strict_upper(self.k, row) for row in reduced]
        if series[-1]:
            series.append([])
        return series

    def derived_series(self):
        """Derived series as lists of NilMatrix bases, ending with []."""
        return [
            [NilMatrix.from_strict_upper(self.k, row) for row in level]
            for level in self.derived_bases
        ]

    @property
    def derived_length(self) -> int:
        """Number of nonzero members of the derived series."""
        return len(self.derived_bases) - 1

    def quotient_map(self, level: int) -> QuotientMap:
        """Projection g^(level) -> g^(level)/g^(level+1) with its fixed basis."""
        if not 0 <= level < self.derived_length:
            raise BadLevel(f"level {level} outside derived series of length {self.derived_length}")
        if self._quotients is None:
            self._quotients = {}
        if level not in self._quotients:
            basis = self.derived_bases[level]
            _, pivots = rref(basis)
            sub_vecs = self.derived_bases[level + 1]
            # Rewrite the next level in coordinates of this level's basis.
            sub_coords = []
            for vec in sub_vecs:
                coords = in_span(basis, pivots, vec)
                assert coords is not None
                sub_coords.append(coords)
            sub_rref, sub_pivots = rref(sub_coords)
            free = [c for c in range(len(basis)) if c not in sub_pivots]
            self._quotients[level] = QuotientMap(
                self, level, basis, pivots, sub_rref, sub_pivots, free
            )
        return self._quotients[level]

    def member_coords(self, n: NilMatrix, level: int = 0):
        """Coordinates of n in the level basis, or None if outside."""
        basis = self.derived_bases[level]
        _, pivots = rref(basis)
        return in_span(basis, pivots, n.strict_upper())

    def contains_nil(self, n: NilMatrix, level: int = 0) -> bool:
        return self.member_coords(n, level) is not None


def full_unitriangular_spec(k: int, ring: str = "Q") -> GroupSpec:
    """The full group U_k: basis all elementary matrices E_ij, i < j."""
    basis = [
        NilMatrix.elementary(k, i, j)
        for i in range(k)
        for j in range(i + 1, k)
    ]
    return GroupSpec(k, ring, basis)


def heisenberg_spec(ring: str = "Q") -> GroupSpec:
    return full_unitriangular_spec(3, ring)
