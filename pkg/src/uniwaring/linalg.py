"""Exact Gaussian elimination over the Scalar field.

Rows are lists of Scalars.  Pivoting always takes the first row with a
nonzero entry in the lowest unused column, so echelon forms, ranks, and
kernel witnesses are deterministic functions of the input order.
"""

from __future__ import annotations

from .scalars import Scalar


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = Scalar(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [row for row in mat if any(row)], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def in_span(basis_rref, pivots, vec):
    """Coordinates of vec in an RREF basis, or None if outside the span."""
    residual = list(vec)
    coords = []
    for row, p in zip(basis_rref, pivots):
        c = residual[p]
        coords.append(c)
        if c:
            residual = [x - c * y for x, y in zip(residual, row)]
    if any(residual):
        return None
    return coords


def solve_particular(a_rows, b):
    """One exact solution of A x = b with free variables pinned to zero.

    Returns None when the system is inconsistent.
    """
    if not a_rows:
        return [] if not any(b) else None
    aug = [list(r) + [bi] for r, bi in zip(a_rows, b)]
    red, pivots = rref(aug)
    ncols = len(a_rows[0])
    x = [Scalar(0)] * ncols
    for row, p in zip(red, pivots):
        if p == ncols:
            return None
        x[p] = row[ncols]
    return x


def kernel_witness(rows):
    """A nonzero kernel vector of the matrix with the given rows, or None.

    The witness sets the lowest-index free column to 1, all other free
    columns to 0, and back-substitutes, so it is deterministic.
    """
    if not rows:
        return None
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    w = [Scalar(0)] * ncols
    w[f] = Scalar(1)
    for row, p in zip(red, pivots):
        w[p] = -row[f]
    return w
