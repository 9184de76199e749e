"""Polynomial one-parameter families into a unitriangular group.

A PolyMorphism is a k x k grid of polynomials that is unitriangular
identically in x and whose symbolic logarithm stays inside the spec's Lie
algebra (checked coefficient-by-coefficient at validation time).  The
abelianization extracts, for each morphism, the quotient coordinates of
that logarithm as polynomials; their coefficient vectors drive the
generating test and every linear solve downstream.
"""

from __future__ import annotations

from .errors import NotInGroup, NotIntegral, NotUnitriangular
from .linalg import kernel_witness, rank
from .matrices import NilMatrix, UniMatrix, nil_exp_grid, uni_log_grid
from .poly import ONE_POLY, ZERO_POLY, Poly
from .scalars import Scalar


class PolyMorphism:
    """Validated polynomial map A^1 -> G^(level), stored as a matrix of Poly."""

    __slots__ = ("spec", "level", "entries", "log_upper")

    def __init__(self, spec, level, entries, log_upper):
        self.spec = spec
        self.level = level
        self.entries = entries        # tuple of tuples of Poly
        self.log_upper = log_upper    # strict-upper vector of Poly (the symbolic log)

    @property
    def degree(self) -> int:
        return max((p.degree for row in self.entries for p in row), default=0)

    def evaluate(self, x) -> UniMatrix:
        x = Scalar.of(x)
        return UniMatrix([[p(x) for p in row] for row in self.entries])

    def substitute(self, a, b) -> "PolyMorphism":
        """The reparametrized morphism x -> f(a*x + b)."""
        inner = Poly([Scalar.of(b), Scalar.of(a)])
        grid = [[p.compose(inner) for p in row] for row in self.entries]
        return validate_morphism(grid, self.spec, level=self.level)

    def translate(self, g: UniMatrix, side: str = "left") -> "PolyMorphism":
        """g * f(x) or f(x) * g; stays in the group when g does."""
        grid = [[Poly.of(x) for x in row] for row in g.rows]
        if side == "left":
            prod = _poly_grid_mul(grid, self.entries)
        else:
            prod = _poly_grid_mul(self.entries, grid)
        return validate_morphism(prod, self.spec, level=self.level)

    def projected_log(self, qmap):
        """Quotient coordinates of log f(x), as a tuple of Poly."""
        return qmap.project_vec(self.log_upper)


def _poly_grid_mul(a, b):
    from .matrices import grid_mul

    return grid_mul(a, b, ZERO_POLY)


def _strict_upper_polys(entries, k):
    return tuple(entries[i][j] for i in range(k) for j in range(i + 1, k))


def validate_morphism(entries, spec, level: int = 0) -> PolyMorphism:
    """Check unitriangularity and Lie membership identically in x.

    Raises NotUnitriangular / NotInGroup (with the offending coefficient
    matrix) / NotIntegral for Z and Z[i] specs whose entries leave the ring.
    """
    k = spec.k
    grid = tuple(tuple(Poly.of(p) for p in row) for row in entries)
    if len(grid) != k or any(len(row) != k for row in grid):
        raise ValueError(f"morphism grid must be {k}x{k}")
    for i in range(k):
        if grid[i][i] != ONE_POLY:
            raise NotUnitriangular(f"diagonal entry ({i},{i}) is not constant 1")
        for j in range(i):
            if grid[i][j]:
                raise NotUnitriangular(f"entry ({i},{j}) below diagonal is nonzero")
    if spec.ring in ("Z", "ZI"):
        for i in range(k):
            for j in range(k):
                for c in grid[i][j].coeffs:
                    if not c.is_integral(spec.ring):
                        raise NotIntegral(
                            f"entry ({i},{j}) has coefficient {c} outside {spec.ring}"
                        )
    elif spec.ring == "Q":
        for i in range(k):
            for j in range(k):
                for c in grid[i][j].coeffs:
                    if not c.is_rational():
                        raise NotIntegral(
                            f"entry ({i},{j}) has a Gaussian coefficient under ring tag Q"
                        )
    log_grid = uni_log_grid(grid, k, ZERO_POLY, ONE_POLY)
    log_upper = _strict_upper_polys(log_grid, k)
    max_deg = max((p.degree for p in log_upper), default=0)
    basis = spec.derived_bases[level] if level < len(spec.derived_bases) else []
    from .linalg import in_span, rref

    basis_rref, pivots = rref(basis)
    for t in range(max_deg + 1):
        coeff_vec = [p.coeff(t) for p in log_upper]
        if not any(coeff_vec):
            continue
        if in_span(basis_rref, pivots, coeff_vec) is None:
            offending = NilMatrix.from_strict_upper(k, coeff_vec)
            raise NotInGroup(
                f"log coefficient of x^{t} leaves the Lie span at level {level}",
                offending=offending,
            )
    return PolyMorphism(spec, level, grid, log_upper)


def morphism_from_log_coords(spec, coord_polys, level: int = 0) -> PolyMorphism:
    """exp of sum_i p_i(x) * basis_i; the standard way to write a family member."""
    basis = spec.derived_bases[level]
    if len(coord_polys) != len(basis):
        raise ValueError("need one polynomial per basis element of the level")
    k = spec.k
    width = k * (k - 1) // 2
    upper = [ZERO_POLY] * width
    for p, row in zip(coord_polys, basis):
        p = Poly.of(p)
        if not p:
            continue
        upper = [u + p * c for u, c in zip(upper, row)]
    nil_grid = [[ZERO_POLY] * k for _ in range(k)]
    pos = 0
    for i in range(k):
        for j in range(i + 1, k):
            nil_grid[i][j] = upper[pos]
            pos += 1
    exp_grid = nil_exp_grid(nil_grid, k, ZERO_POLY, ONE_POLY)
    return validate_morphism(exp_grid, spec, level=level)


class MorphismFamily:
    """Nonempty ordered list of PolyMorphisms over one GroupSpec and level."""

    __slots__ = ("spec", "level", "morphisms")

    def __init__(self, morphisms):
        if not morphisms:
            raise ValueError("family must be nonempty")
        spec = morphisms[0].spec
        level = morphisms[0].level
        for f in morphisms:
            if f.spec is not spec or f.level != level:
                raise ValueError("family members must share one spec and level")
        self.spec = spec
        self.level = level
        self.morphisms = tuple(morphisms)

    @property
    def n(self) -> int:
        return len(self.morphisms)

    def evaluate(self, j: int, x) -> UniMatrix:
        """Evaluate the 1-based j-th morphism."""
        return self.morphisms[j - 1].evaluate(x)


class AbelianizedFamily:
    """Coefficients a[i][j][k] of the quotient coordinates of each log f_j."""

    __slots__ = ("spec", "level", "m", "n", "d", "a")

    def __init__(self, spec, level, m, n, d, a):
        self.spec = spec
        self.level = level
        self.m = m
        self.n = n
        self.d = d
        self.a = a  # a[i][j][k], 0-based i < m, j < n, 0 <= k <= d

    def vector(self, j: int, k: int):
        """The coefficient vector (a_{1jk}, ..., a_{mjk}) for 0-based j."""
        return tuple(self.a[i][j][k] for i in range(self.m))

    def degree_one_vectors(self):
        """All vectors with k >= 1, ordered by (j, k); the generating data."""
        return [
            self.vector(j, k) for j in range(self.n) for k in range(1, self.d + 1)
        ]

    def system_rows(self):
        """Rows of the linear system sum_{j,k>=1} a_{ijk} y_{jk} = c_i.

        Columns are ordered k outer (k = 1..d), j inner, so that the
        deterministic pivot rule prefers low-degree power sums: those cost
        the fewest moment points and the weakest integrality demands.
        """
        return [
            [self.a[i][j][k] for k in range(1, self.d + 1) for j in range(self.n)]
            for i in range(self.m)
        ]

    def column_of(self, j: int, k: int) -> int:
        """Column index of y_{jk} in system_rows (0-based j, k from 1)."""
        return (k - 1) * self.n + j


def abelianize(fam: MorphismFamily, level: int | None = None) -> AbelianizedFamily:
    """Exact a_{ijk}; level defaults to the family's own derived level."""
    level = fam.level if level is None else level
    qmap = fam.spec.quotient_map(level)
    coords = [f.projected_log(qmap) for f in fam.morphisms]
    d = max((p.degree for cs in coords for p in cs), default=0)
    d = max(d, 0)
    m = qmap.dim
    a = tuple(
        tuple(
            tuple(coords[j][i].coeff(k) for k in range(d + 1))
            for j in range(fam.n)
        )
        for i in range(m)
    )
    return AbelianizedFamily(fam.spec, level, m, fam.n, d, a)


def is_generating(ab: AbelianizedFamily):
    """Decide the generating property at the top quotient.

    Returns (True, None) or (False, witness) where the witness is a nonzero
    covector b with sum_i b_i a_{ijk} = 0 for every j and every k >= 1.
    """
    if ab.m == 0:
        return True, None
    vectors = ab.degree_one_vectors()
    nonzero = [v for v in vectors if any(v)]
    if nonzero and rank(nonzero) == ab.m:
        return True, None
    if not nonzero:
        witness = tuple([Scalar(1)] + [Scalar(0)] * (ab.m - 1))
        return False, witness
    w = kernel_witness(nonzero)
    assert w is not None
    return False, tuple(w)
