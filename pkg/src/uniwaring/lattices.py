"""Exact lattices over Z and Z[i]: HNF, indices, sumsets, and certificates.

Lattices are stored by a canonical triangular (Hermite) basis so that equal
lattices compare equal.  Canonicalization over Z[i] uses Euclidean division
by norm with a fixed rounding and the unit normalization that puts pivots
in the quarter-plane re > 0, im >= 0.

subgroup_certificate glues the per-level divisors of a decomposition plan
into a finite-index certificate: full-rank certified sublattices at every
derived level force the full Hirsch number, and the per-level indices
multiply to the reported total.
"""

from __future__ import annotations

from math import inf

from .decompose import DecompositionPlan, build_plan
from .errors import DescentStalled, NotGenerating, NotSublattice, RankDeficient
from .scalars import (
    Scalar,
    euclid_divmod,
    euclid_norm,
    format_scalar,
    unit_normalize,
)


def _leading(row):
    for idx, x in enumerate(row):
        if x:
            return idx
    return None


class Lattice:
    """Finitely generated O-submodule of O^rank with a canonical HNF basis."""

    __slots__ = ("rank", "ring", "basis")

    def __init__(self, rank: int, ring: str, basis_rows):
        if ring not in ("Z", "ZI"):
            raise ValueError("lattices live over Z or ZI")
        self.rank = rank
        self.ring = ring
        self.basis = tuple(tuple(Scalar.of(x) for x in row) for row in basis_rows)

    @staticmethod
    def from_generators(generators, rank: int, ring: str) -> "Lattice":
        lat = _hnf_reduce(generators, rank, ring)
        out = Lattice(rank, ring, lat)
        for gen in generators:
            assert out.membership(gen) is not None, "HNF lost a generator"
        return out

    @staticmethod
    def standard(rank: int, ring: str, scale=1) -> "Lattice":
        rows = []
        for i in range(rank):
            row = [Scalar(0)] * rank
            row[i] = Scalar.of(scale)
            rows.append(row)
        return Lattice.from_generators(rows, rank, ring)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def membership(self, vec):
        """Coordinates of vec over the basis, or None when outside."""
        residual = [Scalar.of(x) for x in vec]
        coords = []
        for row in self.basis:
            p = _leading(row)
            if residual[p]:
                q, r = euclid_divmod(residual[p], row[p], self.ring)
                if r:
                    return None
                residual = [a - q * b for a, b in zip(residual, row)]
                coords.append(q)
            else:
                coords.append(Scalar(0))
        if any(residual):
            return None
        return coords

    def determinant_norm(self):
        """Norm of the basis determinant; inf when not full rank."""
        if self.dim < self.rank:
            return inf
        det = Scalar(1)
        for row in self.basis:
            det = det * row[_leading(row)]
        return euclid_norm(det, self.ring)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.ring == other.ring
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.rank, self.ring, self.basis))

    def __repr__(self):
        rows = "; ".join(
            "(" + ", ".join(format_scalar(x) for x in row) + ")" for row in self.basis
        )
        return f"Lattice[{self.ring}^{self.rank}: {rows}]"


def _xgcd_rows(a_row, b_row, col, ring):
    """Row operations making b_row[col] = 0 via the extended Euclid step."""
    a, b = a_row[col], b_row[col]
    while b:
        q, r = euclid_divmod(a, b, ring)
        a_row, b_row = b_row, [x - q * y for x, y in zip(a_row, b_row)]
        a, b = a_row[col], r
    return a_row, b_row


def _hnf_reduce(generators, rank: int, ring: str):
    """Canonical row HNF of the module generated by the given vectors."""
    rows = []  # kept sorted by leading column
    for gen in generators:
        vec = [Scalar.of(x) for x in gen]
        if len(vec) != rank:
            raise ValueError("generator has wrong length")
        while True:
            lead = _leading(vec)
            if lead is None:
                break
            placed = False
            for idx, row in enumerate(rows):
                p = _leading(row)
                if p == lead:
                    new_row, vec = _xgcd_rows(list(row), vec, lead, ring)
                    rows[idx] = new_row
                    placed = True
                    break
                if p > lead:
                    rows.insert(idx, vec)
                    placed = True
                    vec = None
                    break
            if vec is not None and not placed:
                rows.append(vec)
                vec = None
            if vec is None:
                break
    # Normalize: canonical pivot associates, then reduce entries above pivots.
    rows = [row for row in rows if _leading(row) is not None]
    for i, row in enumerate(rows):
        u, _ = unit_normalize(row[_leading(row)], ring)
        if u != Scalar(1):
            rows[i] = [u * x for x in row]
    # Left-to-right so later sweeps never touch columns already reduced.
    for i in range(len(rows)):
        p = _leading(rows[i])
        for i2 in range(i):
            if rows[i2][p]:
                q, _ = euclid_divmod(rows[i2][p], rows[i][p], ring)
                if q:
                    rows[i2] = [a - q * b for a, b in zip(rows[i2], rows[i])]
    return tuple(tuple(row) for row in rows)


def hermite_normal_form(generators, rank: int | None = None,
                        ring: str = "Z") -> Lattice:
    """Canonical lattice basis; membership of every generator is verified."""
    if rank is None:
        if not generators:
            raise ValueError("rank needed for an empty generator list")
        rank = len(generators[0])
    return Lattice.from_generators(list(generators), rank, ring)


def lattice_index(sub: Lattice, ambient: Lattice):
    """[ambient : sub] as a norm; inf when sub is not finite index.

    Raises NotSublattice when a basis vector of sub falls outside ambient.
    """
    if sub.rank != ambient.rank or sub.ring != ambient.ring:
        raise ValueError("lattices live in different ambient modules")
    for row in sub.basis:
        if ambient.membership(row) is None:
            raise NotSublattice(f"vector {row} outside the ambient lattice")
    if sub.dim < ambient.dim:
        return inf
    num = sub.determinant_norm()
    den = ambient.determinant_norm()
    if num == inf or den == inf:
        return inf
    assert num % den == 0
    return num // den


def stabilize_sumset(points, rank: int | None = None, ring: str = "Z",
                     base=None) -> Lattice:
    """Limit lattice of the iterated sumset chain: differences from the base.

    With the easier-Waring sign conventions the chain of iterated sumsets
    stabilizes, up to translation, to the lattice generated by differences
    of the points against the marked base set (default: the first point).
    """
    pts = [[Scalar.of(x) for x in p] for p in points]
    if not pts:
        raise ValueError("need at least one point")
    if rank is None:
        rank = len(pts[0])
    marks = [[Scalar.of(x) for x in b] for b in base] if base else [pts[0]]
    diffs = []
    for p in pts:
        for b in marks:
            diffs.append([x - y for x, y in zip(p, b)])
    nonzero = [d for d in diffs if any(d)]
    if not nonzero:
        return Lattice(rank, ring, ())
    return Lattice.from_generators(nonzero, rank, ring)


class IndexCertificate:
    """Per-level certified sublattices with Hirsch and index bookkeeping."""

    __slots__ = ("ring", "degree", "levels", "plan")

    def __init__(self, ring, degree, levels, plan):
        self.ring = ring
        self.degree = degree          # [K:Q]
        self.levels = tuple(levels)   # (level, dim, Lattice, index) tuples
        self.plan = plan

    @property
    def total_hirsch(self) -> int:
        return sum(self.degree * dim for _, dim, _, _ in self.levels)

    @property
    def total_index(self) -> int:
        out = 1
        for _, _, _, index in self.levels:
            out *= index
        return out

    def __repr__(self):
        rows = "; ".join(
            f"level {lvl}: dim {dim}, index {idx}" for lvl, dim, _, idx in self.levels
        )
        return (
            f"IndexCertificate[{rows}; HirschNumber {self.total_hirsch},"
            f" total index {self.total_index}]"
        )


def subgroup_certificate(fam, gamma_cap: int = 8,
                         plan: DecompositionPlan | None = None) -> IndexCertificate:
    """Finite-index certificate for the decomposable subgroup of G(O).

    Per derived level the certified sublattice is divisor * O^m in quotient
    coordinates; full rank at every level gives total Hirsch number
    [K:Q] * dim g, and the per-level indices multiply to the total.
    """
    spec = fam.spec
    ring = spec.ring
    if ring not in ("Z", "ZI"):
        raise ValueError("certificates need a Z or ZI spec")
    if plan is None:
        try:
            plan = build_plan(fam, integral=True, gamma_cap=gamma_cap)
        except NotGenerating as exc:
            raise RankDeficient(0, f"level 0 not generating: {exc}") from exc
        except DescentStalled as exc:
            raise RankDeficient(exc.level, str(exc)) from exc
    levels = []
    for stage in plan.stages:
        m = stage.ab.m
        lat = Lattice.standard(m, ring, scale=stage.divisor)
        if lat.dim < m:
            raise RankDeficient(stage.level)
        index = lattice_index(lat, Lattice.standard(m, ring))
        assert index != inf
        levels.append((stage.level, m, lat, index))
    cert = IndexCertificate(ring, spec.degree_over_q, levels, plan)
    assert cert.total_hirsch == spec.degree_over_q * spec.dim
    return cert
