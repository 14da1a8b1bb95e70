"""Gauss-Jordan elimination shared by both realizations.

Exact matrices pivot on the first nonzero entry of each column, which makes
the output fully deterministic.  Float matrices use partial pivoting and treat
a candidate pivot as zero when its magnitude falls below
``FLOAT_RANK_RTOL * max|M|`` (the largest entry of the *input* matrix).
"""

from __future__ import annotations

from typing import Sequence

from .matrix import Matrix
from .scalar import EXACT, FLOAT, one, to_field, zero

FLOAT_RANK_RTOL = 1e-9


class InconsistentSystemError(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column space."""


def _eliminate(rows: list[list], ncols: int, field: str, tol: float):
    """In-place Gauss-Jordan on ``rows``; returns pivot column indices."""
    nrows = len(rows)
    pivots = []
    r = 0
    o, z = one(field), zero(field)
    for c in range(ncols):
        if r == nrows:
            break
        if field == EXACT:
            p = next((i for i in range(r, nrows) if rows[i][c]), None)
        else:
            best, p = 0.0, None
            for i in range(r, nrows):
                mag = abs(rows[i][c])
                if mag > best:
                    best, p = mag, i
            if p is not None and best < tol:
                p = None
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = o / prow[c]
        nz = []
        for j in range(c, ncols):
            if prow[j]:
                prow[j] = prow[j] * inv
                nz.append(j)
        prow[c] = o
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            fac = row[c]
            if not fac:
                continue
            for j in nz:
                row[j] = row[j] - fac * prow[j]
            row[c] = z
        pivots.append(c)
        r += 1
    if field == FLOAT:
        for i in range(r, nrows):
            rows[i] = [z] * ncols
    return pivots


def _float_tol(m: Matrix) -> float:
    return FLOAT_RANK_RTOL * m.max_abs()


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form.

    Returns ``(R, pivots, rank)``.  The float realization may report a lower
    rank than the exact one for nearly dependent rows (see module docstring).
    """
    rows = m.to_rows()
    tol = _float_tol(m) if m.field == FLOAT else 0.0
    pivots = _eliminate(rows, m.cols, m.field, tol)
    flat = [x for row in rows for x in row]
    return Matrix._raw(m.rows, m.cols, flat, m.field), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def nullspace(m: Matrix) -> list[tuple]:
    """Basis of ``{v : m v = 0}`` as tuples, one per free column of the RREF."""
    r, pivots, _ = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    z, o = zero(m.field), one(m.field)
    basis = []
    for f in free:
        v = [z] * m.cols
        v[f] = o
        for k, p in enumerate(pivots):
            v[p] = -r[k, f]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence) -> tuple:
    """One solution of ``m x = b`` (free variables set to zero).

    Raises :class:`InconsistentSystemError` if no solution exists.
    """
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    field = m.field
    bb = [to_field(x, field) for x in b]
    rows = [list(m.row(i)) + [bb[i]] for i in range(m.rows)]
    tol = 0.0
    if field == FLOAT:
        tol = FLOAT_RANK_RTOL * max(m.max_abs(), max((abs(x) for x in bb), default=0.0))
    pivots = _eliminate(rows, m.cols + 1, field, tol)
    if pivots and pivots[-1] == m.cols:
        raise InconsistentSystemError("right-hand side is not in the column space")
    x = [zero(field)] * m.cols
    for k, p in enumerate(pivots):
        x[p] = rows[k][m.cols]
    return tuple(x)


def in_column_space(m: Matrix, b: Sequence) -> bool:
    try:
        solve(m, b)
    except InconsistentSystemError:
        return False
    return True


def mat_vec(m: Matrix, v: Sequence) -> tuple:
    if len(v) != m.cols:
        raise ValueError(f"vector of length {len(v)} for {m.shape} matrix")
    z = zero(m.field)
    out = []
    e, n = m.entries, m.cols
    for i in range(m.rows):
        s = z
        for x, y in zip(e[i * n:(i + 1) * n], v):
            if x and y:
                s = s + x * y
        out.append(s)
    return tuple(out)


def independent_columns(m: Matrix) -> list[int]:
    """Indices of a maximal independent set of columns (the RREF pivots)."""
    return rref(m)[1]


class SingularMatrixError(ValueError):
    pass


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    r, pivots, _ = rref(Matrix.hstack(m, Matrix.identity(n, m.field)))
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Matrix._raw(n, n, [r[i, n + j] for i in range(n) for j in range(n)], m.field)
