"""Signed words in a morphism family and their exact evaluation."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import IndexOutOfRange
from .matrices import UniMatrix
from .scalars import Scalar, format_scalar


class Word:
    """Ordered product of factors (j, x, e): the j-th morphism at x to the e."""

    __slots__ = ("factors",)

    def __init__(self, factors=()):
        out = []
        for j, x, e in factors:
            if e not in (1, -1):
                raise ValueError(f"exponent must be +1 or -1, got {e}")
            out.append((int(j), Scalar.of(x), int(e)))
        self.factors = tuple(out)

    @property
    def length(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __bool__(self):
        return bool(self.factors)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)

    def inverse(self) -> "Word":
        return Word([(j, x, -e) for j, x, e in reversed(self.factors)])

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.factors == other.factors

    def __repr__(self):
        body = ", ".join(
            f"({j}, {format_scalar(x)}, {'+1' if e > 0 else '-1'})"
            for j, x, e in self.factors
        )
        return f"Word([{body}])"

    def arguments_integral(self, ring: str) -> bool:
        return all(x.is_integral(ring) for _, x, _ in self.factors)


def _int_form(m: UniMatrix):
    """(re grid, im grid or None, denominator): m cleared to integers.

    Long products accumulate in plain int arithmetic and normalize once at
    the end; this sidesteps the per-operation gcd cost of Fraction.
    """
    den = 1
    for row in m.rows:
        for x in row:
            den = lcm(den, x.denominator_lcm())
    re = [[int(x.re * den) for x in row] for row in m.rows]
    im = [[int(x.im * den) for x in row] for row in m.rows]
    if not any(any(row) for row in im):
        im = None
    return re, im, den


def _factor_matrix(word_key, fam, cache):
    j, x, e = word_key
    key = (j, x.re, x.im, e)
    if cache is not None and key in cache:
        return cache[key]
    m = fam.evaluate(j, x)
    if e < 0:
        m = m.inverse()
    value = (m, _int_form(m))
    if cache is not None:
        cache[key] = value
    return value


# Factors per integer-accumulation chunk before normalizing back to reduced
# Fractions; keeps cleared denominators short while amortizing gcd work.
_CHUNK = 32


def eval_word(word: Word, fam, cache: dict | None = None) -> UniMatrix:
    """Exact ordered product; the empty word is the identity.

    Runs in chunks: inside a chunk the product accumulates over cleared
    integer grids (no per-operation gcd); chunk results are normalized and
    folded into the running product, where cancellation keeps entries small.
    """
    k = fam.spec.k
    out = UniMatrix.identity(k)
    if not word.factors:
        return out
    rng = range(k)

    def fold(acc_re, acc_im, acc_den):
        im_rows = acc_im or [[0] * k for _ in rng]
        chunk = UniMatrix(
            [
                [
                    Scalar(
                        Fraction(acc_re[i][c], acc_den),
                        Fraction(im_rows[i][c], acc_den),
                    )
                    for c in rng
                ]
                for i in rng
            ]
        )
        return out * chunk

    acc_re = [[1 if i == c else 0 for c in rng] for i in rng]
    acc_im = None
    acc_den = 1
    pending = 0
    for j, x, e in word:
        if not 1 <= j <= fam.n:
            raise IndexOutOfRange(f"morphism index {j} outside 1..{fam.n}")
        _, (f_re, f_im, f_den) = _factor_matrix((j, x, e), fam, cache)
        if acc_im is None and f_im is None:
            acc_re = [
                [sum(acc_re[i][t] * f_re[t][c] for t in rng) for c in rng]
                for i in rng
            ]
        else:
            a_im = acc_im or [[0] * k for _ in rng]
            b_im = f_im or [[0] * k for _ in rng]
            new_re = [
                [
                    sum(
                        acc_re[i][t] * f_re[t][c] - a_im[i][t] * b_im[t][c]
                        for t in rng
                    )
                    for c in rng
                ]
                for i in rng
            ]
            acc_im = [
                [
                    sum(
                        acc_re[i][t] * b_im[t][c] + a_im[i][t] * f_re[t][c]
                        for t in rng
                    )
                    for c in rng
                ]
                for i in rng
            ]
            acc_re = new_re
        acc_den *= f_den
        pending += 1
        if pending == _CHUNK:
            out = fold(acc_re, acc_im, acc_den)
            acc_re = [[1 if i == c else 0 for c in rng] for i in rng]
            acc_im = None
            acc_den = 1
            pending = 0
    if pending:
        out = fold(acc_re, acc_im, acc_den)
    return out


def simplify_word(word: Word, fam, cache: dict | None = None) -> Word:
    """Drop factors that evaluate to the identity, cancel adjacent inverses.

    Evaluation-preserving by construction; used before emitting results so
    reported lengths are honest without being padded by trivial factors.
    """
    if cache is None:
        cache = {}
    kept = []
    for j, x, e in word:
        key = ("id", j, x.re, x.im)
        if key in cache:
            is_id = cache[key]
        else:
            is_id = _factor_matrix((j, x, 1), fam, cache)[0].is_identity()
            cache[key] = is_id
        if is_id:
            continue
        if kept and kept[-1][0] == j and kept[-1][1] == x and kept[-1][2] == -e:
            kept.pop()
            continue
        kept.append((j, x, e))
    return Word(kept)
