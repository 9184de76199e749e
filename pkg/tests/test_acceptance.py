"""Acceptance suite: one test per criterion, printing a PASS line each.

Everything here is exact arithmetic; "tolerance" is equality.  Random data
is seeded so the suite is reproducible run to run.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

from famtools import (
    cube_family,
    heis_family,
    random_generating_family,
    random_word_factors,
)
from uniwaring.decompose import build_plan, decompose_field, decompose_integral
from uniwaring.errors import BadPrime, CapExceeded
from uniwaring.families import MorphismFamily, abelianize, is_generating
from uniwaring.groupspec import full_unitriangular_spec, heisenberg_spec
from uniwaring.lattices import Lattice, lattice_index, subgroup_certificate
from uniwaring.matrices import NilMatrix, exp, log
from uniwaring.moments import integral_guarantee, solve_moments_field, \
    solve_moments_integral
from uniwaring.oracle import coverage_bfs, reduce_mod_p
from uniwaring.poly import Poly
from uniwaring.scalars import Scalar
from uniwaring.words import Word, eval_word

DATA = Path(__file__).parent / "data"


def report(name, detail=""):
    print(f"ACCEPT PASS {name}" + (f" ({detail})" if detail else ""))


def _roundtrip_cases(spec, n, seed, cases, families, gaussian):
    rng = random.Random(seed)
    worst = 0.0
    per_family = cases // families
    for _ in range(families):
        fam = random_generating_family(spec, n, rng, height=100, degree=2)
        plan = build_plan(fam)
        bound = plan.length_bound()
        for _ in range(per_family):
            target = eval_word(
                Word(random_word_factors(rng, fam.n, 10, 100, gaussian)), fam
            )
            t0 = time.time()
            word = decompose_field(target, fam, plan=plan)
            elapsed = time.time() - t0
            worst = max(worst, elapsed)
            assert elapsed < 10.0, f"case took {elapsed:.1f}s"
            assert eval_word(word, fam) == target
            assert word.length <= bound
    return worst


def test_criterion_1_field_roundtrips():
    worst = 0.0
    worst = max(worst, _roundtrip_cases(heisenberg_spec("Q"), 2, 101, 100, 10, False))
    worst = max(worst, _roundtrip_cases(full_unitriangular_spec(4, "Q"), 3, 102, 100, 10, False))
    worst = max(worst, _roundtrip_cases(heisenberg_spec("QI"), 2, 103, 100, 10, True))
    report("criterion-1 field round-trips", f"300 cases, worst {worst:.2f}s < 10s")


def test_criterion_2_moment_solver():
    rng = random.Random(202)
    for _ in range(200):
        d = rng.randint(1, 5)
        y = [
            Scalar(Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 10**4)))
            for _ in range(d)
        ]
        rep = solve_moments_field(y)
        assert rep.value() == tuple(y)
        assert rep.size <= 2 * (2**d - 1)
    for _ in range(100):
        d = rng.randint(1, 4)
        lam = integral_guarantee(d)
        y = [Scalar(lam * rng.randint(-50, 50)) for _ in range(d)]
        rep = solve_moments_integral(y, "Z")
        assert rep.value() == tuple(y)
        assert rep.points_integral("Z")
    report("criterion-2 moment solver", "200 field + 100 integral, exact")


def test_criterion_3_cube_sanity():
    # oracle identity: (x+1)^3 - 2x^3 + (x-1)^3 = 6x, by expansion
    for x in range(-10, 11):
        assert (x + 1) ** 3 - 2 * x**3 + (x - 1) ** 3 == 6 * x
    fam = cube_family()
    plan = build_plan(fam, integral=True)
    for n in range(-50, 51):
        g = exp(NilMatrix.elementary(2, 0, 1, 6 * n))
        word = decompose_integral(g, fam, plan=plan)
        assert word.length <= 8
        assert eval_word(word, fam) == g
        assert word.arguments_integral("Z")
        cubes = sum((Scalar.of(e) * x**3 for _, x, e in word), Scalar(0))
        assert cubes == Scalar(6 * n)
    cert = subgroup_certificate(fam)
    assert cert.levels[0][2].basis == ((Scalar(6),),)
    assert cert.levels[0][3] == 6
    report("criterion-3 cube sanity", "101 targets, <= 8 cubes, lattice 6Z index 6")


def _mod_p_rank(ab, p):
    """Rank over F_p of the degree >= 1 coefficient vectors."""
    rows = []
    for j in range(ab.n):
        for k in range(1, ab.d + 1):
            row = []
            for i in range(ab.m):
                fr = ab.a[i][j][k].re
                row.append(fr.numerator * pow(fr.denominator, p - 2, p) % p)
            if any(row):
                rows.append(row)
    rank = 0
    cols = ab.m
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        rank += 1
        r += 1
    return rank


def test_criterion_4_generating_vs_bruteforce():
    t_start = time.time()
    rng = random.Random(404)
    specs = [(heisenberg_spec("Q"), 2), (full_unitriangular_spec(4, "Q"), 3)]
    checked = 0
    for spec, n in specs:
        for trial in range(15):
            # Single-morphism samples exercise the negative direction.
            count = 1 if trial % 5 == 4 else n
            fam = _random_integer_family(spec, count, rng)
            checked += 1
            generating = is_generating(abelianize(fam))[0]
            ab = abelianize(fam)
            full_count = 0
            for p in (3, 5, 7, 11):
                try:
                    qfam = reduce_mod_p(fam, p)
                    profile = coverage_bfs(qfam, 12)
                except (BadPrime, CapExceeded):
                    continue
                if generating:
                    if _mod_p_rank(ab, p) == ab.m:
                        assert profile.full, f"full rank mod {p} but proper closure"
                        full_count += 1
                else:
                    assert not profile.full, f"non-generating family covered mod {p}"
            if generating:
                assert full_count >= 3, f"only {full_count} full primes"
    elapsed = time.time() - t_start
    assert elapsed < 300, f"criterion 4 took {elapsed:.0f}s"
    report(
        "criterion-4 generating vs brute force",
        f"{checked} families, {elapsed:.0f}s < 300s",
    )


def _random_integer_family(spec, n, rng):
    """Products of elementary one-parameter subgroups through the identity.

    Small integer coefficients, zero constant terms (f(0) = I, reachable
    anyway by translating, which the generating test ignores), degree <= 2.
    Integral entries keep every odd prime reducible, and f(0) = I makes
    both oracle directions exact: a witness covector kills the mod-p
    abelianized image, and full rank covers it.  Not resampled, so both
    generating and non-generating samples occur.
    """
    from uniwaring.families import validate_morphism
    from uniwaring.matrices import grid_mul
    from uniwaring.poly import ONE_POLY, ZERO_POLY

    k = spec.k
    positions = [(i, j) for i in range(k) for j in range(i + 1, k)]
    fs = []
    for _ in range(n):
        grid = [[ONE_POLY if a == b else ZERO_POLY for b in range(k)] for a in range(k)]
        for _ in range(rng.randint(1, 3)):
            i, j = rng.choice(positions)
            p = Poly([Scalar(0)] + [Scalar(rng.randint(-2, 2)) for _ in range(2)])
            factor = [
                [ONE_POLY if a == b else (p if (a, b) == (i, j) else ZERO_POLY)
                 for b in range(k)]
                for a in range(k)
            ]
            grid = grid_mul(grid, factor, ZERO_POLY)
        fs.append(validate_morphism(grid, spec))
    return MorphismFamily(fs)


def test_criterion_5_finite_index_certificates():
    rng = random.Random(505)
    for ring, degree in (("Z", 1), ("ZI", 2)):
        fam = heis_family(ring)
        cert = subgroup_certificate(fam)
        assert cert.total_hirsch == 3 * degree
        for _, dim, lattice, _ in cert.levels:
            assert lattice.dim == dim
        plan = cert.plan
        for _ in range(25):
            word = Word()
            for level, dim, lattice, _ in cert.levels:
                coords = [Scalar(0)] * dim
                for row in lattice.basis:
                    c = Scalar(
                        rng.randint(-9, 9),
                        rng.randint(-9, 9) if ring == "ZI" else 0,
                    )
                    coords = [a + c * b for a, b in zip(coords, row)]
                word = word + plan.canonical_word(level, coords)
            g = eval_word(word, fam)
            assert g.entries_integral(ring)
            out = decompose_integral(g, fam, plan=plan)
            assert eval_word(out, fam) == g
            assert out.arguments_integral(ring)
    report("criterion-5 finite-index certificates", "Hirsch 3 and 6; 50 samples decomposed")


def test_criterion_6_exact_kernel_invariants():
    rng = random.Random(606)
    # exp/log round-trips, 500 cases
    for _ in range(500):
        k = rng.randint(2, 6)
        rows = [[Scalar(0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                rows[i][j] = Scalar(
                    Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
                )
        n = NilMatrix(rows)
        assert log(exp(n)) == n
    # HNF canonicity, 200 cases
    for trial in range(200):
        ring = "ZI" if trial % 2 else "Z"
        rank_dim = rng.randint(1, 6)
        rows = [
            [
                Scalar(rng.randint(-9, 9), rng.randint(-9, 9) if ring == "ZI" else 0)
                for _ in range(rank_dim)
            ]
            for _ in range(rng.randint(1, rank_dim + 2))
        ]
        lat = Lattice.from_generators(rows, rank_dim, ring)
        mixed = [list(r) for r in rows]
        for _ in range(8):
            i, j = rng.randrange(len(mixed)), rng.randrange(len(mixed))
            if i != j:
                c = Scalar(rng.randint(-3, 3))
                mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
        rng.shuffle(mixed)
        assert Lattice.from_generators(mixed, rank_dim, ring) == lat
    # index multiplicativity, 100 nested triples
    done = 0
    while done < 100:
        rank_dim = rng.randint(1, 4)
        rows = []
        for i in range(rank_dim):
            row = [Scalar(rng.randint(-4, 4)) for _ in range(rank_dim)]
            row[i] = Scalar(rng.randint(1, 4))
            rows.append(row)
        c = Lattice.from_generators(rows, rank_dim, "Z")
        if c.dim < rank_dim:
            continue
        mb, ma = rng.randint(1, 3), rng.randint(1, 3)
        b_rows = [[x * mb for x in row] for row in rows]
        a_rows = [[x * ma for x in row] for row in b_rows]
        b = Lattice.from_generators(b_rows, rank_dim, "Z")
        a = Lattice.from_generators(a_rows, rank_dim, "Z")
        assert lattice_index(a, c) == lattice_index(a, b) * lattice_index(b, c)
        done += 1
    report("criterion-6 exact kernel invariants", "500 + 200 + 100 cases, exact")


CLI_CORPUS = [
    ("check-generating", "heis_q.json"),
    ("check-generating", "single_q.json"),
    ("check-generating", "u4_q.json"),
    ("check-generating", "heis_zi.json"),
    ("check-generating", "cube_z.json"),
    ("decompose", "heis_q.json", "heis_target.json"),
    ("decompose", "heis_z.json", "heis_target.json"),
    ("decompose", "heis_zi.json", "heis_zi_target.json"),
    ("decompose", "u4_q.json", "u4_target.json"),
    ("decompose", "cube_z.json", "cube_target_42.json"),
    ("decompose", "cube_z.json", "cube_target_7.json"),
    ("certify", "heis_z.json"),
    ("certify", "heis_zi.json"),
    ("certify", "cube_z.json"),
    ("oracle", "heis_q.json", "--prime", "5"),
    ("oracle", "u4_q.json", "--prime", "3"),
    ("oracle", "single_q.json", "--prime", "3"),
    ("oracle", "cube_z.json", "--prime", "5"),
    ("oracle", "heis_zi.json", "--prime", "5"),
]


def test_criterion_7_cli_determinism():
    for spec in CLI_CORPUS:
        cmd = [sys.executable, "-m", "uniwaring.cli"]
        for part in spec:
            cmd.append(str(DATA / part) if part.endswith(".json") else part)
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == second.returncode
        assert first.stdout == second.stdout, f"stdout differs for {spec}"
        assert first.stderr == second.stderr, f"stderr differs for {spec}"
    report("criterion-7 determinism", f"{len(CLI_CORPUS)} commands byte-identical twice")
