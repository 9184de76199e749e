import random
from math import inf

import pytest

from famtools import cube_family, heis_family
from uniwaring.decompose import decompose_integral
from uniwaring.errors import NotSublattice, RankDeficient
from uniwaring.families import MorphismFamily, morphism_from_log_coords
from uniwaring.groupspec import GroupSpec, heisenberg_spec
from uniwaring.lattices import (
    Lattice,
    hermite_normal_form,
    lattice_index,
    stabilize_sumset,
    subgroup_certificate,
)
from uniwaring.matrices import NilMatrix
from uniwaring.poly import Poly
from uniwaring.scalars import Scalar
from uniwaring.words import eval_word

E = NilMatrix.elementary


def S(*vals):
    return [Scalar.of(v) for v in vals]


def test_hnf_already_triangular():
    lat = hermite_normal_form([S(2, 0), S(0, 3)])
    assert lat.basis == ((Scalar(2), Scalar(0)), (Scalar(0), Scalar(3)))


def test_hnf_reduction_example():
    lat = hermite_normal_form([S(2, 2), S(0, 4), S(2, 6)])
    assert lat.determinant_norm() == 8
    for gen in (S(2, 2), S(0, 4), S(2, 6)):
        assert lat.membership(gen) is not None


def test_hnf_gaussian_norm():
    lat = hermite_normal_form([S(Scalar(1, 1))], rank=1, ring="ZI")
    assert lat.determinant_norm() == 2
    assert lattice_index(lat, Lattice.standard(1, "ZI")) == 2


def test_hnf_canonicity_under_remixing():
    rng = random.Random(131)
    for trial in range(60):
        ring = "ZI" if trial % 3 == 0 else "Z"
        rank = rng.randint(1, 6)
        rows = []
        for _ in range(rng.randint(1, rank + 2)):
            if ring == "Z":
                rows.append([Scalar(rng.randint(-9, 9)) for _ in range(rank)])
            else:
                rows.append(
                    [Scalar(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(rank)]
                )
        lat = Lattice.from_generators(rows, rank, ring)
        # remix: add random multiples of one generator to another, permute
        mixed = [list(r) for r in rows]
        for _ in range(6):
            i, j = rng.randrange(len(mixed)), rng.randrange(len(mixed))
            if i == j:
                continue
            c = Scalar(rng.randint(-3, 3))
            mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
        rng.shuffle(mixed)
        lat2 = Lattice.from_generators(mixed, rank, ring)
        assert lat == lat2


def test_membership_boundaries():
    lat = hermite_normal_form([S(2, 0), S(0, 3)])
    assert lat.membership(S(4, 3)) is not None
    assert lat.membership(S(1, 0)) is None
    assert lat.membership(S(2, 1)) is None


def test_lattice_index_examples():
    z = Lattice.standard(1, "Z")
    six = hermite_normal_form([S(6)])
    assert lattice_index(six, z) == 6
    grid = hermite_normal_form([S(2, 0), S(0, 3)])
    assert lattice_index(grid, Lattice.standard(2, "Z")) == 6
    line = hermite_normal_form([S(1, 0)])
    assert lattice_index(line, Lattice.standard(2, "Z")) == inf


def test_lattice_index_not_sublattice():
    half = hermite_normal_form([S(1)])
    six = hermite_normal_form([S(6)])
    with pytest.raises(NotSublattice):
        lattice_index(half, six)


def test_index_multiplicativity():
    rng = random.Random(137)
    for _ in range(100):
        rank = rng.randint(1, 4)
        def random_full(scale):
            rows = []
            for i in range(rank):
                row = [Scalar(rng.randint(-4, 4)) for _ in range(rank)]
                row[i] = Scalar(rng.randint(1, 4) * scale)
                rows.append(row)
            return rows
        c_rows = random_full(1)
        c = Lattice.from_generators(c_rows, rank, "Z")
        if c.determinant_norm() == inf:
            continue
        mult_b = rng.randint(1, 3)
        b_rows = [[x * mult_b for x in row] for row in c_rows]
        b = Lattice.from_generators(b_rows, rank, "Z")
        mult_a = rng.randint(1, 3)
        a_rows = [[x * mult_a for x in row] for row in b_rows]
        a = Lattice.from_generators(a_rows, rank, "Z")
        assert lattice_index(a, c) == lattice_index(a, b) * lattice_index(b, c)


def test_stabilize_sumset_examples():
    lat = stabilize_sumset([S(0), S(6)])
    assert lat.basis == ((Scalar(6),),)
    lat = stabilize_sumset([S(1, 0), S(0, 1), S(1, 1)])
    assert lat.determinant_norm() == 1
    # signed cube differences reach all of Z because 1 = 1^3 - 0^3
    cubes = [S(a**3 - b**3) for a in range(4) for b in range(4)]
    assert stabilize_sumset(cubes).basis == ((Scalar(1),),)
    # gadget-guaranteed values only: multiples of 6
    gadget_values = [S(6 * n) for n in range(-5, 6)]
    assert stabilize_sumset(gadget_values).basis == ((Scalar(6),),)


def test_stabilize_matches_iterated_sumset_differences():
    # X_{i+1} = X_1 + X_i; differences of X_i stabilize to the lattice
    base = [(0, 6), (2, 0)]
    lat = stabilize_sumset([S(*p) for p in base])
    current = [(0, 0)]
    seen = set()
    for _ in range(4):
        current = sorted({(a + x, b + y) for a, b in current for x, y in base})
        diffs = {
            (a1 - a2, b1 - b2) for a1, b1 in current for a2, b2 in current
        }
        seen = diffs
    for d in seen:
        assert lat.membership(S(*d)) is not None


def test_subgroup_certificate_heisenberg():
    cert = subgroup_certificate(heis_family("Z"))
    assert cert.total_hirsch == 3
    assert cert.total_index == 1
    assert [dim for _, dim, _, _ in cert.levels] == [2, 1]
    cert_zi = subgroup_certificate(heis_family("ZI"))
    assert cert_zi.total_hirsch == 6


def test_subgroup_certificate_cube_map():
    cert = subgroup_certificate(cube_family())
    assert len(cert.levels) == 1
    level, dim, lattice, index = cert.levels[0]
    assert (level, dim, index) == (0, 1, 6)
    assert lattice.basis == ((Scalar(6),),)


def test_subgroup_certificate_degree_one_gaussian():
    spec = GroupSpec(2, "ZI", [E(2, 0, 1)])
    f = morphism_from_log_coords(spec, [Poly.x()])
    cert = subgroup_certificate(MorphismFamily([f]))
    assert cert.total_index == 1
    assert cert.total_hirsch == 2


def test_subgroup_certificate_rank_deficient():
    spec = heisenberg_spec("Z")
    f = morphism_from_log_coords(spec, [Poly.x(), Poly(), Poly()])
    with pytest.raises(RankDeficient) as exc:
        subgroup_certificate(MorphismFamily([f]))
    assert exc.value.level == 0


def test_certificate_soundness_sampling():
    rng = random.Random(139)
    fam = heis_family("Z")
    cert = subgroup_certificate(fam)
    plan = cert.plan
    for _ in range(10):
        word = None
        for level, dim, lattice, _ in cert.levels:
            coords = [Scalar(0)] * dim
            for row in lattice.basis:
                c = rng.randint(-5, 5)
                coords = [a + Scalar(c) * b for a, b in zip(coords, row)]
            w = plan.canonical_word(level, coords)
            word = w if word is None else word + w
        g = eval_word(word, fam)
        out = decompose_integral(g, fam)
        assert eval_word(out, fam) == g
        assert out.arguments_integral("Z")


def test_certificate_mixed_degree_family():
    # f1 = exp(x^2 E12), f2 = exp(x^3 E23): pivots land on k = 2 and k = 3,
    # so level 0 demands lcm(2! * 6, 3!) = 12 and the descent stage (degree
    # 3 in its free slot) demands 6; indices 12^2 and 6.
    spec = heisenberg_spec("Z")
    f1 = morphism_from_log_coords(spec, [Poly([0, 0, 1]), Poly(), Poly()])
    f2 = morphism_from_log_coords(spec, [Poly(), Poly(), Poly([0, 0, 0, 1])])
    fam = MorphismFamily([f1, f2])
    cert = subgroup_certificate(fam)
    assert cert.plan.divisors == (12, 6)
    assert [idx for _, _, _, idx in cert.levels] == [144, 6]
    assert cert.total_index == 864
    assert cert.total_hirsch == 3
    plan = cert.plan
    rng = random.Random(3)
    for _ in range(8):
        word = None
        for level, dim, lattice, _ in cert.levels:
            coords = [Scalar(0)] * dim
            for row in lattice.basis:
                c = Scalar(rng.randint(-4, 4))
                coords = [a + c * b for a, b in zip(coords, row)]
            w = plan.canonical_word(level, coords)
            word = w if word is None else word + w
        g = eval_word(word, fam)
        out = decompose_integral(g, fam, plan=plan)
        assert eval_word(out, fam) == g
        assert out.arguments_integral("Z")
