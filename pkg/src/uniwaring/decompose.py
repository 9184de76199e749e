"""End-to-end decomposition of group elements into signed morphism words.

The pipeline mirrors the two-stage structure of the underlying result: a
linear solve at the top quotient realized by moment-curve gadgets, then a
commutator descent that manufactures one-parameter families inside each
derived subgroup and recurses.  Every produced word is re-evaluated before
it is returned, so results are self-certifying.

A DecompositionPlan caches, per derived level, the stage family, its
abelianized coefficients, the particular-solution matrix of the linear
system, and (over Z or Z[i]) the divisor D for which D * O^m is certified
decomposable.  Plans are deterministic functions of the input family, so
two plans for the same family always produce identical words.
"""

from __future__ import annotations

import logging
from math import factorial, lcm

from .errors import (
    DescentStalled,
    DivisibilityError,
    NotGenerating,
    NotInCertifiedSubgroup,
    NotInGroup,
    NotIntegral,
    NotRepresented,
)
from .families import (
    AbelianizedFamily,
    MorphismFamily,
    PolyMorphism,
    abelianize,
    is_generating,
    validate_morphism,
)
from .linalg import rank, kernel_witness, solve_particular
from .matrices import UniMatrix, grid_mul, log, uni_inverse_grid
from .moments import solve_moments_field, solve_moments_integral
from .poly import ONE_POLY, ZERO_POLY, Poly
from .scalars import Scalar
from .words import Word, eval_word, simplify_word

log_ = logging.getLogger("uniwaring.decompose")


def abelian_length_bound(n: int, d: int) -> int:
    """Max factors an abelian-stage solve can emit: n morphisms, 2(2^d - 1) each."""
    return 2 * n * (2**d - 1) if d >= 1 else 0


class DerivedFamilyStage:
    """One level of the descent: a generating family inside g^(level).

    templates[i] expands stage morphism i into base-family factors: items
    are (j, x, e) with x = None marking the free argument slot.  The base
    stage has templates None.
    """

    __slots__ = ("level", "family", "templates", "flat_lengths", "ab",
                 "columns", "divisor")

    def __init__(self, level, family, templates, flat_lengths, ab, columns, divisor):
        self.level = level
        self.family = family
        self.templates = templates
        self.flat_lengths = flat_lengths
        self.ab = ab
        self.columns = columns
        self.divisor = divisor

    @property
    def is_empty(self) -> bool:
        return self.family is None

    @staticmethod
    def empty(level) -> "DerivedFamilyStage":
        return DerivedFamilyStage(level, None, None, (), None, None, 1)


def _solution_columns(ab: AbelianizedFamily):
    """Columns R_i with A @ R_i = e_i; None when the system is not onto."""
    rows = ab.system_rows()
    columns = []
    for i in range(ab.m):
        target = [Scalar(1) if t == i else Scalar(0) for t in range(ab.m)]
        col = solve_particular(rows, target)
        if col is None:
            return None
        columns.append(col)
    return columns


def _stage_divisor(ab: AbelianizedFamily, columns) -> int:
    """Divisor D with D * O^m certified solvable with integral moment points.

    Per morphism j, the moment solve runs levels k = l0..d where l0 is the
    lowest k its solution row touches; level k demands k! * m_k | t where
    m_k clears the junk every lower level pushes upward.  Solution-map
    denominators are cleared alongside.
    """
    D = 1
    d = ab.d
    for j in range(ab.n):
        rows = {
            k: [columns[i][ab.column_of(j, k)] for i in range(ab.m)]
            for k in range(1, d + 1)
        }
        nonzero = [k for k in range(1, d + 1) if any(rows[k])]
        if not nonzero:
            continue
        low = min(nonzero)
        clear = {d: 1}
        for k in range(d - 1, low - 1, -1):
            clear[k] = lcm(*[factorial(i) * clear[i] for i in range(k + 1, d + 1)])
        for k in nonzero:
            denom = lcm(*[e.denominator_lcm() for e in rows[k]])
            D = lcm(D, denom * factorial(k) * clear[k])
    return D


def _stage_from_family(family: MorphismFamily, templates, flat_lengths,
                       integral: bool) -> DerivedFamilyStage:
    ab = abelianize(family)
    ok, witness = is_generating(ab)
    if not ok:
        raise NotGenerating(
            f"family at level {family.level} is not generating", witness=witness
        )
    columns = _solution_columns(ab)
    assert columns is not None
    divisor = _stage_divisor(ab, columns) if integral else 1
    return DerivedFamilyStage(
        family.level, family, templates, flat_lengths, ab, columns, divisor
    )


def _abelian_word(stage: DerivedFamilyStage, coords, ring: str | None):
    """Solve the stage's linear system at coords and realize it by moments.

    Returns (y, word) with y the per-(j, k) values (1-based keys) and word
    a stage-level Word.  Raises DivisibilityError in ring mode.
    """
    ab = stage.ab
    if len(coords) != ab.m:
        raise ValueError("coordinate length mismatch")
    nd = ab.n * ab.d
    y = [Scalar(0)] * nd
    for i, c in enumerate(coords):
        c = Scalar.of(c)
        if not c:
            continue
        col = stage.columns[i]
        y = [acc + c * v for acc, v in zip(y, col)]
    factors = []
    yvals = {}
    for j in range(ab.n):
        target = [y[ab.column_of(j, k)] for k in range(1, ab.d + 1)]
        for k, val in enumerate(target, start=1):
            yvals[(j + 1, k)] = val
        if not any(target):
            continue
        if ring is None:
            rep = solve_moments_field(target)
        else:
            try:
                rep = solve_moments_integral(target, ring)
            except NotRepresented as exc:
                raise DivisibilityError(
                    f"morphism {j + 1}: {exc}; targets in {stage.divisor}*O^m always solve",
                    guaranteed_divisor=stage.divisor,
                ) from exc
        for x in rep.plus:
            factors.append((j + 1, x, 1))
        for x in rep.minus:
            factors.append((j + 1, x, -1))
    return yvals, Word(factors)


def decompose_abelian(coords, ab: AbelianizedFamily, ring: str | None = None):
    """Public single-level solve against an AbelianizedFamily.

    Returns (y, word): y maps (j, k) (1-based) to the realized power sums,
    word is over the abelianized family's own indices.
    """
    ok, witness = is_generating(ab)
    if not ok:
        raise NotGenerating("abelianized family is not generating", witness=witness)
    columns = _solution_columns(ab)
    assert columns is not None
    divisor = _stage_divisor(ab, columns) if ring in ("Z", "ZI") else 1
    stage = DerivedFamilyStage(ab.level, None, None, (), ab, columns, divisor)
    if ring in ("Z", "ZI"):
        for c in coords:
            if not Scalar.of(c).is_integral(ring):
                raise DivisibilityError(
                    f"target coordinate {c} is not in the ring",
                    guaranteed_divisor=divisor,
                )
    return _abelian_word(stage, coords, ring)


def _expand_factor(template, arg, e):
    if e == 1:
        return [(j, arg if x is None else x, ei) for j, x, ei in template]
    return [(j, arg if x is None else x, -ei) for j, x, ei in reversed(template)]


def _h_vectors(h: PolyMorphism, qmap):
    """Degree >= 1 coefficient vectors of h's next-level quotient coordinates."""
    coords = h.projected_log(qmap)
    deg = max((p.degree for p in coords), default=0)
    return [tuple(p.coeff(k) for p in coords) for k in range(1, deg + 1)]


def _direction_pool(m: int, cap: int):
    """Deterministic candidate directions: multiples of basis vectors, then
    of pairwise and triple sums (mixing is needed to escape commutator-
    degenerate subspaces)."""
    singles = [(i,) for i in range(m)]
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    triples = [
        (i, j, t)
        for i in range(m)
        for j in range(i + 1, m)
        for t in range(j + 1, m)
    ]
    for s in range(1, cap + 1):
        for subset in singles + pairs + triples:
            yield s, subset


def _gamma_candidates(plan, stage):
    """Candidate conjugator words (stage-level), cheapest first.

    Short raw products of stage values come first (they are generic enough
    for the dense-open condition and keep templates small); realized
    quotient-basis directions and their mixed multiples follow as the
    exhaustive fallback.  Over Z and Z[i] the raw arguments are integers,
    so every candidate stays in the ring.
    """
    n = stage.family.n
    cap = plan.gamma_cap
    for s in range(1, cap + 1):
        for j in range(1, n + 1):
            yield Word([(j, Scalar(s), 1)])
        for j1 in range(1, n + 1):
            for j2 in range(j1, n + 1):
                yield Word([(j1, Scalar(s), 1), (j2, Scalar(s), 1)])
    scale = stage.divisor if plan.integral else 1
    for s, subset in _direction_pool(stage.ab.m, cap):
        coords = [Scalar(0)] * stage.ab.m
        for i in subset:
            coords[i] = Scalar(s * scale)
        _, stage_word = _abelian_word(stage, coords, plan.ring)
        yield stage_word


class DecompositionPlan:
    """All stages of the descent for one family, plus shared caches."""

    def __init__(self, fam: MorphismFamily, integral: bool = False, gamma_cap: int = 8):
        if fam.level != 0:
            raise ValueError("plans start from a level-0 family")
        ring = fam.spec.ring
        if integral and ring not in ("Z", "ZI"):
            raise ValueError("integral plan needs a Z or ZI spec")
        self.base = fam
        self.spec = fam.spec
        self.integral = integral
        self.ring = ring if integral else None
        self.gamma_cap = gamma_cap
        self.cache: dict = {}
        base_stage = _stage_from_family(
            fam, None, (1,) * fam.n, integral
        )
        self.stages = [base_stage]
        while self.stages[-1].level + 1 < self.spec.derived_length:
            self.stages.append(self._next_stage(self.stages[-1]))

    # -- stage construction -------------------------------------------

    def _next_stage(self, stage: DerivedFamilyStage) -> DerivedFamilyStage:
        spec = self.spec
        next_level = stage.level + 1
        qnext = spec.quotient_map(next_level)
        m_next = qnext.dim
        accepted = []
        acc_templates = []
        acc_vectors = []
        for candidate in _gamma_candidates(self, stage):
            if len(acc_vectors) and rank(acc_vectors) == m_next:
                break
            w_gamma = self.flatten(stage.level, candidate)
            if not w_gamma:
                continue
            gamma = eval_word(w_gamma, self.base, self.cache)
            gamma_grid = tuple(tuple(Poly.of(x) for x in row) for row in gamma.rows)
            gamma_inv = tuple(
                tuple(Poly.of(x) for x in row) for row in gamma.inverse().rows
            )
            const_fwd = [(j, x, e) for j, x, e in w_gamma]
            const_rev = [(j, x, -e) for j, x, e in reversed(w_gamma.factors)]
            for j, f in enumerate(stage.family.morphisms, start=1):
                f_grid = f.entries
                f_inv = uni_inverse_grid(f_grid, spec.k, ZERO_POLY, ONE_POLY)
                f_tmpl_fwd = self._morphism_template(stage, j, 1)
                f_tmpl_rev = self._morphism_template(stage, j, -1)
                candidates = (
                    # try1: [gamma, f_j(x)]
                    (
                        _grid_product([gamma_grid, f_grid, gamma_inv, f_inv], spec.k),
                        const_fwd + f_tmpl_fwd + const_rev + f_tmpl_rev,
                    ),
                    # try2: [f_j(x), gamma]
                    (
                        _grid_product([f_grid, gamma_grid, f_inv, gamma_inv], spec.k),
                        f_tmpl_fwd + const_fwd + f_tmpl_rev + const_rev,
                    ),
                )
                for grid, template in candidates:
                    h = validate_morphism(grid, spec, level=next_level)
                    vectors = [v for v in _h_vectors(h, qnext) if any(v)]
                    if not vectors:
                        continue
                    if rank(acc_vectors + vectors) > rank(acc_vectors):
                        accepted.append(h)
                        acc_templates.append(tuple(template))
                        acc_vectors.extend(vectors)
                        break
            if len(acc_vectors) and rank(acc_vectors) == m_next:
                break
        if not (acc_vectors and rank(acc_vectors) == m_next):
            witness = kernel_witness(acc_vectors) if acc_vectors else None
            raise DescentStalled(next_level, witness)
        family = MorphismFamily(accepted)
        log_.debug(
            "level %d stage: %d morphisms, template lengths %s",
            next_level, family.n, [len(t) for t in acc_templates],
        )
        return _stage_from_family(
            family,
            tuple(acc_templates),
            tuple(len(t) for t in acc_templates),
            self.integral,
        )

    def _morphism_template(self, stage: DerivedFamilyStage, j: int, e: int):
        """Base-level template of stage morphism j with a free slot."""
        if stage.templates is None:
            return [(j, None, e)]
        return _expand_factor(stage.templates[j - 1], None, e)

    # -- word production ------------------------------------------------

    def flatten(self, level: int, stage_word: Word) -> Word:
        """Expand a stage-level word into simplified base-family factors."""
        stage = self.stages[level]
        if stage.templates is None:
            flat = stage_word
        else:
            out = []
            for j, x, e in stage_word:
                out.extend(_expand_factor(stage.templates[j - 1], x, e))
            flat = Word(out)
        return simplify_word(flat, self.base, self.cache)

    def canonical_word(self, level: int, coords) -> Word:
        """The deterministic base word whose level quotient image is coords."""
        _, stage_word = _abelian_word(self.stages[level], coords, self.ring)
        flat = self.flatten(level, stage_word)
        log_.debug("level %d word: %d stage factors, %d flattened",
                   level, stage_word.length, flat.length)
        return flat

    def eval(self, word: Word) -> UniMatrix:
        return eval_word(word, self.base, self.cache)

    # -- published data ---------------------------------------------------

    @property
    def divisors(self):
        return tuple(stage.divisor for stage in self.stages)

    def length_bound(self) -> int:
        """Published bound B: never exceeded by any word this plan emits."""
        total = 0
        for stage in self.stages:
            t_max = max(stage.flat_lengths, default=1)
            total += abelian_length_bound(stage.ab.n, stage.ab.d) * t_max
        return total


def _grid_product(grids, k):
    out = grids[0]
    for g in grids[1:]:
        out = grid_mul(out, g, ZERO_POLY)
    return out


def build_plan(fam: MorphismFamily, integral: bool = False,
               gamma_cap: int = 8) -> DecompositionPlan:
    return DecompositionPlan(fam, integral=integral, gamma_cap=gamma_cap)


def build_commutator_family(fam: MorphismFamily, gamma_cap: int = 8,
                            integral: bool = False) -> DerivedFamilyStage:
    """Stage of commutator morphisms generating the next derived subgroup.

    Returns the empty stage when the derived series has already terminated
    below the family's level.
    """
    spec = fam.spec
    if fam.level + 1 >= spec.derived_length:
        return DerivedFamilyStage.empty(fam.level + 1)
    if fam.level != 0:
        raise ValueError("descend from a level-0 family via build_plan")
    plan = DecompositionPlan(fam, integral=integral, gamma_cap=gamma_cap)
    return plan.stages[1]


def _eval_residual_coords(spec, level, residual):
    qmap = spec.quotient_map(level)
    return qmap.project(log(residual))


def decompose_field(g: UniMatrix, fam: MorphismFamily, gamma_cap: int = 8,
                    plan: DecompositionPlan | None = None) -> Word:
    """Express g exactly as a signed word in the family, over Q or Q(i)."""
    spec = fam.spec
    if spec.fraction_field == "Q" and any(
        not x.is_rational() for row in g.rows for x in row
    ):
        raise NotInGroup("target has Gaussian entries but the field is Q")
    if plan is None:
        plan = build_plan(fam, integral=False, gamma_cap=gamma_cap)
    if spec.derived_length == 0:
        if not g.is_identity():
            raise NotGenerating("trivial group cannot express a nontrivial element")
        return Word()
    word = Word()
    check = UniMatrix.identity(spec.k)
    residual = g
    for level in range(spec.derived_length):
        coords = _eval_residual_coords(spec, level, residual)
        if any(coords):
            w = plan.canonical_word(level, coords)
            word = word + w
            value = plan.eval(w)
            check = check * value
            residual = value.inverse() * residual
    assert residual.is_identity()
    assert check == g
    return word


def _ring_residue(coords, divisor: int):
    out = []
    for c in coords:
        c = Scalar.of(c)
        if not c.is_integral("ZI"):
            out.append(c)
        else:
            out.append(Scalar(c.re % divisor, c.im % divisor))
    return tuple(out)


def decompose_integral(g: UniMatrix, fam: MorphismFamily, gamma_cap: int = 8,
                       plan: DecompositionPlan | None = None) -> Word:
    """Decompose over Z or Z[i]; succeeds on the certified subgroup.

    Raises NotInCertifiedSubgroup with the obstructing level and residue
    when the greedy peel hits a divisibility wall.
    """
    spec = fam.spec
    ring = spec.ring
    if ring not in ("Z", "ZI"):
        raise ValueError("decompose_integral needs a Z or ZI spec")
    if not g.entries_integral(ring):
        raise NotIntegral("target has entries outside the ring")
    if plan is None:
        plan = build_plan(fam, integral=True, gamma_cap=gamma_cap)
    if spec.derived_length == 0:
        if not g.is_identity():
            raise NotGenerating("trivial group cannot express a nontrivial element")
        return Word()
    word = Word()
    check = UniMatrix.identity(spec.k)
    residual = g
    for level in range(spec.derived_length):
        coords = _eval_residual_coords(spec, level, residual)
        if not any(coords):
            continue
        divisor = plan.stages[level].divisor
        try:
            w = plan.canonical_word(level, coords)
        except DivisibilityError as exc:
            raise NotInCertifiedSubgroup(
                level, _ring_residue(coords, divisor), divisor
            ) from exc
        word = word + w
        value = plan.eval(w)
        check = check * value
        residual = value.inverse() * residual
    assert residual.is_identity()
    assert word.arguments_integral(ring)
    assert check == g
    return word
