"""Brute-force finite quotients: reduce a family mod p and enumerate words.

This is the independent check on the generating decision: reduce every
morphism coefficient into F_p (or F_{p^2} for inert Gaussian primes, via
the 2x2 real embedding), list all one-factor values f_j(t)^{+-1} with t
ranging over the finite field, and breadth-first-search the word metric.
Closure runs to saturation; per-length coverage counts come out of the
same sweep.  Matrix batches are numpy int64 so desk-scale groups (order
up to 10^6) enumerate in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadPrime, CapExceeded

DEFAULT_CAP = 10**6


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def _mod_inverse(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


def _reduce_fraction(fr, p: int, where: str) -> int:
    if fr.denominator % p == 0:
        raise BadPrime(f"{where}: denominator {fr.denominator} collides with p = {p}")
    return (fr.numerator % p) * _mod_inverse(fr.denominator, p) % p


@dataclass
class FiniteQuotientFamily:
    """Family reduced mod p: coefficients as field elements, ready to evaluate.

    field is "p" (arguments in F_p) or "p2" (inert Gaussian prime; elements
    are pairs (a, b) = a + b*i with i^2 = -1, embedded as 2x2 blocks for
    matrix work).  root records the chosen square root of -1 in the split
    case, for reproducibility.
    """

    p: int
    k: int
    field: str
    root: int | None
    entries: tuple          # per morphism: k x k grid of coefficient tuples
    group_dim: int          # dim of the spec's Lie algebra
    full_dim: int           # k(k-1)/2

    @property
    def field_size(self) -> int:
        return self.p if self.field == "p" else self.p * self.p

    @property
    def group_order(self) -> int:
        return self.field_size**self.group_dim

    def field_elements(self):
        if self.field == "p":
            return list(range(self.p))
        return [(a, b) for a in range(self.p) for b in range(self.p)]

    def _eval_entry(self, coeffs, t):
        p = self.p
        if self.field == "p":
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * t + c) % p
            return acc
        acc = (0, 0)
        for c in reversed(coeffs):
            acc = (
                (acc[0] * t[0] - acc[1] * t[1] + c[0]) % p,
                (acc[0] * t[1] + acc[1] * t[0] + c[1]) % p,
            )
        return acc

    def evaluate(self, j: int, t) -> np.ndarray:
        """Value of the 1-based j-th morphism at t, as an int64 matrix mod p.

        For field "p2" the matrix is the 2k x 2k real embedding.
        """
        grid = self.entries[j - 1]
        k = self.k
        if self.field == "p":
            out = np.zeros((k, k), dtype=np.int64)
            for i in range(k):
                for c in range(k):
                    out[i, c] = self._eval_entry(grid[i][c], t)
            return out
        out = np.zeros((2 * k, 2 * k), dtype=np.int64)
        for i in range(k):
            for c in range(k):
                a, b = self._eval_entry(grid[i][c], t)
                out[2 * i, 2 * c] = a
                out[2 * i + 1, 2 * c + 1] = a
                out[2 * i, 2 * c + 1] = (-b) % self.p
                out[2 * i + 1, 2 * c] = b
        return out


def reduce_mod_p(fam, p: int) -> FiniteQuotientFamily:
    """Componentwise reduction; BadPrime on denominator collision.

    The prime must exceed both the family degree (so images depend on all
    of F_p faithfully) and, for proper subalgebra specs, the matrix size
    (so exp of the reduced algebra still has order p^dim).
    """
    spec = fam.spec
    if not _is_prime(p):
        raise BadPrime(f"{p} is not prime")
    from .families import abelianize

    ab_degree = abelianize(fam).d if fam.morphisms else 0
    if p <= ab_degree:
        raise BadPrime(f"p = {p} must exceed the abelianized degree {ab_degree}")
    full_dim = spec.k * (spec.k - 1) // 2
    if spec.dim < full_dim and p < spec.k:
        raise BadPrime(f"p = {p} too small for a proper subalgebra spec (need p >= k)")
    gaussian = spec.ring in ("QI", "ZI") or any(
        not c.is_rational()
        for f in fam.morphisms
        for row in f.entries
        for poly in row
        for c in poly.coeffs
    )
    field = "p"
    root = None
    if gaussian:
        if p == 2:
            raise BadPrime("p = 2 ramifies in Z[i]")
        if p % 4 == 1:
            root = min(r for r in range(2, p) if (r * r + 1) % p == 0)
        else:
            field = "p2"
    entries = []
    for idx, f in enumerate(fam.morphisms):
        grid = []
        for i in range(spec.k):
            row = []
            for c in range(spec.k):
                poly = f.entries[i][c]
                coeffs = []
                for t, sc in enumerate(poly.coeffs):
                    where = f"morphism {idx + 1} entry ({i},{c}) coefficient {t}"
                    re_p = _reduce_fraction(sc.re, p, where)
                    im_p = _reduce_fraction(sc.im, p, where)
                    if field == "p":
                        if root is not None:
                            coeffs.append((re_p + im_p * root) % p)
                        else:
                            if im_p:
                                raise BadPrime(
                                    f"{where}: Gaussian coefficient at an unsplit prime"
                                )
                            coeffs.append(re_p)
                    else:
                        coeffs.append((re_p, im_p))
                row.append(tuple(coeffs))
            grid.append(tuple(row))
        entries.append(tuple(grid))
    return FiniteQuotientFamily(
        p=p,
        k=spec.k,
        field=field,
        root=root,
        entries=tuple(entries),
        group_dim=spec.dim,
        full_dim=full_dim,
    )


@dataclass
class CoverageProfile:
    """Per-length coverage counts plus the closure of the generated subgroup."""

    p: int
    field: str
    root: int | None
    group_order: int
    counts: tuple           # counts[l] = distinct elements of word length <= l
    closure_order: int
    full: bool

    def count_at(self, length: int) -> int:
        if length >= len(self.counts):
            return self.counts[-1]
        return self.counts[length]


def _upper_key_indices(k: int, field: str):
    """Positions whose values identify a group element uniquely."""
    pos = []
    for i in range(k):
        for j in range(i + 1, k):
            if field == "p":
                pos.append((i, j))
            else:
                pos.append((2 * i, 2 * j))       # real part
                pos.append((2 * i + 1, 2 * j))   # imaginary part
    rows = np.array([r for r, _ in pos], dtype=np.int64)
    cols = np.array([c for _, c in pos], dtype=np.int64)
    return rows, cols


def coverage_bfs(qfam: FiniteQuotientFamily, max_len: int,
                 cap: int = DEFAULT_CAP) -> CoverageProfile:
    """BFS over the word metric; returns coverage counts and the closure."""
    order = qfam.group_order
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds cap {cap}")
    p = qfam.p
    krows, kcols = _upper_key_indices(qfam.k, qfam.field)
    # Scalar base-p keys when they fit in int64; exact byte keys otherwise.
    fast_keys = p ** len(krows) < 2**62
    if fast_keys:
        weights = np.array([p**i for i in range(len(krows))], dtype=np.int64)

        def keys_of(batch: np.ndarray) -> np.ndarray:
            return (batch[:, krows, kcols] * weights).sum(axis=1)

    else:

        def keys_of(batch: np.ndarray) -> list:
            vals = batch[:, krows, kcols].astype(np.uint32)
            return [v.tobytes() for v in vals]

    gens = []
    seen_gen_keys = set()
    n = len(qfam.entries)
    for j in range(1, n + 1):
        for t in qfam.field_elements():
            g = qfam.evaluate(j, t)
            ginv = _uni_inverse_mod(g, p)
            for m in (g, ginv):
                key = keys_of(m[None, :, :])[0]
                key = int(key) if fast_keys else key
                if key not in seen_gen_keys:
                    seen_gen_keys.add(key)
                    gens.append(m)
    size = qfam.k if qfam.field == "p" else 2 * qfam.k
    identity = np.eye(size, dtype=np.int64)
    frontier = identity[None, :, :]
    counts = [1]
    if fast_keys:
        seen_keys = np.array(
            [int(keys_of(identity[None, :, :])[0])], dtype=np.int64
        )
    else:
        seen_set = {keys_of(identity[None, :, :])[0]}
    while len(frontier):
        if not gens:
            break
        batches = [(frontier @ g) % p for g in gens]
        cand = np.concatenate(batches, axis=0)
        if fast_keys:
            cand_keys = keys_of(cand)
            cand_keys, first_idx = np.unique(cand_keys, return_index=True)
            cand = cand[first_idx]
            fresh = ~np.isin(cand_keys, seen_keys, assume_unique=False)
            new = cand[fresh]
            new_keys = cand_keys[fresh]
            if not len(new):
                break
            seen_keys = np.sort(np.concatenate([seen_keys, new_keys]))
            frontier = new
            total = len(seen_keys)
        else:
            picked = []
            for idx, key in enumerate(keys_of(cand)):
                if key not in seen_set:
                    seen_set.add(key)
                    picked.append(idx)
            if not picked:
                break
            frontier = cand[np.array(picked, dtype=np.int64)]
            total = len(seen_set)
        counts.append(int(total))
        if total > cap:
            raise CapExceeded(f"enumerated {total} elements, cap {cap}")
    closure = int(len(seen_keys) if fast_keys else len(seen_set))
    profile_counts = counts[: max_len + 1]
    if len(profile_counts) < max_len + 1:
        profile_counts += [closure] * (max_len + 1 - len(profile_counts))
    return CoverageProfile(
        p=p,
        field=qfam.field,
        root=qfam.root,
        group_order=order,
        counts=tuple(profile_counts),
        closure_order=closure,
        full=closure == order,
    )


def _uni_inverse_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a unitriangular matrix mod p by the finite Neumann series."""
    size = mat.shape[0]
    eye = np.eye(size, dtype=np.int64)
    shifted = (mat - eye) % p
    out = eye.copy()
    power = eye.copy()
    for m in range(1, size):
        power = (power @ shifted) % p
        if m % 2 == 1:
            out = (out - power) % p
        else:
            out = (out + power) % p
    return out % p
