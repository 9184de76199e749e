"""Command-line surface and the text file formats it speaks.

Problem files are canonical JSON (sorted keys, reduced scalars); word files
are the line format below, bit-exact with single-space separators and LF
line endings:

    ring Q
    k 3
    family <sha256 of the canonical problem file>
    begin-word
    <j> <x> <e>
    end-word
    target <k*k row-major scalars>
    length <n>

Exit codes: 0 success, 1 negative decision, 2 input error, 3 obstruction.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys

from .decompose import build_plan, decompose_field, decompose_integral
from .errors import (
    CapExceeded,
    BadPrime,
    DescentStalled,
    NotGenerating,
    NotInCertifiedSubgroup,
    ParseError,
    RankDeficient,
    UniwaringError,
)
from .families import MorphismFamily, abelianize, is_generating, validate_morphism
from .groupspec import GroupSpec, full_unitriangular_spec
from .lattices import subgroup_certificate
from .matrices import NilMatrix, UniMatrix
from .oracle import DEFAULT_CAP, coverage_bfs, reduce_mod_p
from .poly import Poly
from .scalars import RING_TAGS, format_scalar, parse_scalar
from .words import Word, eval_word

log = logging.getLogger("uniwaring")


# -- problem files -------------------------------------------------------


def _parse_scalar_grid(raw, k, where):
    if not isinstance(raw, list) or len(raw) != k:
        raise ParseError(f"expected {k} rows", where)
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != k:
            raise ParseError(f"expected {k} entries", f"{where} row {i}")
        rows.append(
            [parse_scalar(x, f"{where} entry ({i},{j})") for j, x in enumerate(row)]
        )
    return rows


def _parse_poly_grid(raw, k, where):
    if not isinstance(raw, list) or len(raw) != k:
        raise ParseError(f"expected {k} rows", where)
    grid = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != k:
            raise ParseError(f"expected {k} entries", f"{where} row {i}")
        out_row = []
        for j, coeffs in enumerate(row):
            if not isinstance(coeffs, list):
                raise ParseError(
                    "polynomial must be a list of scalars, constant first",
                    f"{where} entry ({i},{j})",
                )
            out_row.append(
                Poly(
                    [
                        parse_scalar(c, f"{where} entry ({i},{j}) coefficient {t}")
                        for t, c in enumerate(coeffs)
                    ]
                )
            )
        grid.append(out_row)
    return grid


class Problem:
    """Parsed problem file: spec, family, and the canonical bytes that hash it."""

    def __init__(self, ring, k, spec, family, canonical_text):
        self.ring = ring
        self.k = k
        self.spec = spec
        self.family = family
        self.canonical_text = canonical_text
        self.family_hash = hashlib.sha256(canonical_text.encode()).hexdigest()


def parse_problem_text(text: str, ring_override: str | None = None) -> Problem:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("problem file must be a JSON object")
    for key in ("ring", "k", "morphisms"):
        if key not in raw:
            raise ParseError(f"missing key {key!r}")
    ring = ring_override or raw["ring"]
    if ring not in RING_TAGS:
        raise ParseError(f"unknown ring tag {ring!r}")
    k = raw["k"]
    if not isinstance(k, int) or k < 1:
        raise ParseError("k must be a positive integer")
    if "lie_basis" in raw and raw["lie_basis"] is not None:
        basis = []
        for idx, grid in enumerate(raw["lie_basis"]):
            rows = _parse_scalar_grid(grid, k, f"lie_basis[{idx}]")
            basis.append(NilMatrix(rows))
        spec = GroupSpec(k, ring, basis)
    else:
        spec = full_unitriangular_spec(k, ring)
    morphisms = []
    for idx, grid in enumerate(raw["morphisms"]):
        polys = _parse_poly_grid(grid, k, f"morphisms[{idx}]")
        morphisms.append(validate_morphism(polys, spec))
    family = MorphismFamily(morphisms)
    canonical = print_problem(ring, k, raw.get("lie_basis"), family)
    return Problem(ring, k, spec, family, canonical)


def load_problem(path: str, ring_override: str | None = None) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem_text(fh.read(), ring_override)


def print_problem(ring, k, lie_basis_raw, family: MorphismFamily) -> str:
    obj = {
        "k": k,
        "morphisms": [
            [
                [[format_scalar(c) for c in poly.coeffs] or ["0"] for poly in row]
                for row in f.entries
            ]
            for f in family.morphisms
        ],
        "ring": ring,
    }
    if lie_basis_raw is not None:
        obj["lie_basis"] = [
            [[format_scalar(parse_scalar(x)) for x in row] for row in grid]
            for grid in lie_basis_raw
        ]
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_target(path: str, k: int) -> UniMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in target: {exc}") from exc
    rows = _parse_scalar_grid(raw, k, "target")
    return UniMatrix(rows)


# -- word files ----------------------------------------------------------


def render_wordfile(problem: Problem, word: Word, target: UniMatrix) -> str:
    lines = [
        f"ring {problem.ring}",
        f"k {problem.k}",
        f"family {problem.family_hash}",
        "begin-word",
    ]
    for j, x, e in word:
        lines.append(f"{j} {format_scalar(x)} {'+1' if e > 0 else '-1'}")
    lines.append("end-word")
    flat = " ".join(format_scalar(x) for row in target.rows for x in row)
    lines.append(f"target {flat}")
    lines.append(f"length {word.length}")
    return "\n".join(lines) + "\n"


def parse_wordfile(text: str) -> dict:
    lines = text.splitlines()
    fields = {}
    factors = []
    in_word = False
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line == "begin-word":
            in_word = True
            continue
        if line == "end-word":
            in_word = False
            continue
        if in_word:
            parts = line.split(" ")
            if len(parts) != 3:
                raise ParseError("expected 'j x e'", f"line {line_no}")
            j = int(parts[0])
            x = parse_scalar(parts[1], f"line {line_no}")
            if parts[2] not in ("+1", "-1"):
                raise ParseError(f"bad exponent {parts[2]!r}", f"line {line_no}")
            factors.append((j, x, 1 if parts[2] == "+1" else -1))
            continue
        key, _, value = line.partition(" ")
        fields[key] = value
    for key in ("ring", "k", "family", "target", "length"):
        if key not in fields:
            raise ParseError(f"word file missing {key!r}")
    k = int(fields["k"])
    flat = [parse_scalar(x, "target") for x in fields["target"].split(" ")]
    if len(flat) != k * k:
        raise ParseError(f"target needs {k * k} entries, got {len(flat)}")
    rows = [flat[i * k: (i + 1) * k] for i in range(k)]
    return {
        "ring": fields["ring"],
        "k": k,
        "family": fields["family"],
        "word": Word(factors),
        "target": UniMatrix(rows),
        "length": int(fields["length"]),
    }


# -- commands ------------------------------------------------------------


def _witness_text(witness) -> str:
    return "(" + ", ".join(format_scalar(b) for b in witness) + ")"


def cmd_check_generating(args) -> int:
    problem = load_problem(args.problem, args.ring)
    ab = abelianize(problem.family)
    ok, witness = is_generating(ab)
    if args.json:
        payload = {
            "generating": ok,
            "witness": None if ok else [format_scalar(b) for b in witness],
        }
        print(json.dumps(payload, sort_keys=True))
    elif ok:
        print("GENERATING")
    else:
        print(f"NOT-GENERATING witness {_witness_text(witness)}")
    return 0 if ok else 1


def cmd_decompose(args) -> int:
    problem = load_problem(args.problem, args.ring)
    target = load_target(args.target, problem.k)
    integral = problem.ring in ("Z", "ZI")
    try:
        plan = build_plan(problem.family, integral=integral, gamma_cap=args.gamma_cap)
        if integral:
            word = decompose_integral(target, problem.family, plan=plan)
        else:
            word = decompose_field(target, problem.family, plan=plan)
    except NotGenerating as exc:
        print(f"NOT-GENERATING: {exc}", file=sys.stderr)
        return 1
    except DescentStalled as exc:
        print(f"DESCENT-STALLED: {exc}", file=sys.stderr)
        return 3
    except NotInCertifiedSubgroup as exc:
        residue = _witness_text(exc.residue)
        print(
            f"NOT-IN-CERTIFIED-SUBGROUP level {exc.level}"
            f" residue {residue} mod {exc.modulus}",
            file=sys.stderr,
        )
        return 3
    if args.json:
        payload = {
            "bound": plan.length_bound(),
            "family": problem.family_hash,
            "length": word.length,
            "word": [
                [j, format_scalar(x), e] for j, x, e in word
            ],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        sys.stdout.write(render_wordfile(problem, word, target))
    if args.verify:
        check = eval_word(word, problem.family)
        assert check == target
        print("CHECKED", file=sys.stderr)
    return 0


def cmd_certify(args) -> int:
    problem = load_problem(args.problem, args.ring)
    if problem.ring not in ("Z", "ZI"):
        print("certify needs ring Z or ZI", file=sys.stderr)
        return 2
    try:
        cert = subgroup_certificate(problem.family, gamma_cap=args.gamma_cap)
    except RankDeficient as exc:
        print(f"RANK-DEFICIENT level {exc.level}", file=sys.stderr)
        return 3
    lines = []
    for level, dim, lattice, index in cert.levels:
        basis = "; ".join(
            "(" + ", ".join(format_scalar(x) for x in row) + ")"
            for row in lattice.basis
        )
        lines.append(f"level {level} dim {dim} basis {basis} index {index}")
    lines.append(f"hirsch {cert.total_hirsch}")
    lines.append(f"total-index {cert.total_index}")
    payload = {
        "hirsch": cert.total_hirsch,
        "levels": [
            {
                "basis": [[format_scalar(x) for x in row] for row in lattice.basis],
                "dim": dim,
                "index": index,
                "level": level,
            }
            for level, dim, lattice, index in cert.levels
        ],
        "total_index": cert.total_index,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(lines))
        print("CERTIFICATE " + json.dumps(payload, sort_keys=True))
    return 0


def cmd_oracle(args) -> int:
    problem = load_problem(args.problem, args.ring)
    try:
        qfam = reduce_mod_p(problem.family, args.prime)
        profile = coverage_bfs(qfam, args.max_len, cap=args.cap)
    except (BadPrime, CapExceeded) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        payload = {
            "closure": profile.closure_order,
            "counts": list(profile.counts),
            "full": profile.full,
            "group_order": profile.group_order,
            "prime": profile.p,
            "root": profile.root,
        }
        print(json.dumps(payload, sort_keys=True))
        return 0
    if profile.root is not None:
        print(f"root {profile.root}")
    for length, count in enumerate(profile.counts):
        print(f"l {length} count {count}")
    print(f"CLOSURE={'FULL' if profile.full else 'PROPER'}")
    return 0


def cmd_verify_word(args) -> int:
    problem = load_problem(args.problem, args.ring)
    with open(args.wordfile, "r", encoding="utf-8") as fh:
        data = parse_wordfile(fh.read())
    if data["family"] != problem.family_hash:
        print("family hash mismatch", file=sys.stderr)
        return 2
    if data["k"] != problem.k or data["ring"] != problem.ring:
        print("word file header disagrees with problem", file=sys.stderr)
        return 2
    if data["length"] != data["word"].length:
        print("length field disagrees with word body", file=sys.stderr)
        return 2
    value = eval_word(data["word"], problem.family)
    checked = value == data["target"]
    if args.json:
        print(json.dumps({"checked": checked}, sort_keys=True))
        return 0 if checked else 1
    if checked:
        print("CHECKED")
        return 0
    print("MISMATCH", file=sys.stderr)
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uniwaring",
        description="generating tests, signed-word decomposition, finite-index "
        "certificates, and mod-p coverage for unitriangular polynomial families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problem", help="problem file (canonical JSON)")
        p.add_argument("--ring", choices=RING_TAGS, help="override the file's ring tag")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check-generating", help="decide the generating property")
    common(p)
    p.set_defaults(func=cmd_check_generating)

    p = sub.add_parser("decompose", help="write a target element as a signed word")
    common(p)
    p.add_argument("target", help="target matrix file (JSON grid of scalars)")
    p.add_argument("--verify", action="store_true", help="re-evaluate the emitted word")
    p.add_argument("--gamma-cap", type=int, default=8, dest="gamma_cap",
                   help="descent candidate multiplier cap")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("certify", help="finite-index certificate over Z or Z[i]")
    common(p)
    p.add_argument("--gamma-cap", type=int, default=8, dest="gamma_cap")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("oracle", help="mod-p BFS coverage table")
    common(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-len", type=int, default=8, dest="max_len")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-word", help="re-evaluate an emitted word file")
    common(p)
    p.add_argument("wordfile")
    p.set_defaults(func=cmd_verify_word)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("WARING_LOG")
    if level:
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if level.lower() == "debug" else logging.INFO,
        )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except (UniwaringError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
