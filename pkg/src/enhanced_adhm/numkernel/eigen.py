"""Eigenvalues and Jordan block sizes of small matrices.

Exact path (dimension <= 3): the characteristic polynomial is computed over
Q(i), reduced to its squarefree part, and every root is located as a Gaussian
rational and verified by exact evaluation.  If ``s`` is monic with coefficient
denominators dividing ``D``, then ``D**n * s(y / D)`` is monic over Z[i], so
any root of ``s`` in Q(i) is ``y / D`` for a Gaussian integer ``y``.  Candidate
``y`` values come from rounding ``D`` times a double-precision root; the exact
check makes the numerics a search heuristic only.

Block sizes are read off the rank sequence ``rank((M - lam)**k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import rank
from .matrix import Matrix
from .scalar import EXACT, GaussQ, one, zero

EXACT_MAX_DIM = 3
FLOAT_CLUSTER_RTOL = 1e-6


class IrrationalSpectrumError(ValueError):
    """The characteristic polynomial does not split over the Gaussian rationals."""


@dataclass(frozen=True)
class EigenStructure:
    """Eigenvalues with their Jordan block sizes (descending)."""

    blocks: tuple
    field: str = EXACT

    @property
    def dimension(self) -> int:
        return sum(sum(sizes) for _, sizes in self.blocks)

    @property
    def eigenvalues(self) -> list:
        return [lam for lam, _ in self.blocks]

    @property
    def is_diagonalizable(self) -> bool:
        return all(max(sizes) == 1 for _, sizes in self.blocks)

    def sizes_of(self, lam) -> tuple:
        for mu, sizes in self.blocks:
            if mu == lam:
                return sizes
        raise KeyError(lam)

    def partition(self) -> tuple:
        """All block sizes, descending, ignoring eigenvalues."""
        return tuple(sorted((s for _, sizes in self.blocks for s in sizes), reverse=True))

    def as_list(self) -> list:
        return [(lam, list(sizes)) for lam, sizes in self.blocks]

    def describe(self) -> str:
        return ", ".join(f"{lam}:{list(sizes)}" for lam, sizes in self.blocks)


# -- polynomials over Q(i), coefficient lists low -> high -----------------

def _trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def _monic(p):
    lead = p[-1]
    return [c / lead for c in p]


def _divmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    z = zero(EXACT)
    q = [z] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        coef = r[-1] / b[-1]
        q[shift] = coef
        for k, bk in enumerate(b):
            r[shift + k] = r[shift + k] - coef * bk
        r = _trim(r)
    return _trim(q), r


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, rem = _divmod(a, b)
        a, b = b, rem
    return _monic(a)


def _deriv(p):
    return [k * c for k, c in enumerate(p)][1:]


def _eval(p, x):
    acc = zero(EXACT)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def charpoly(m: Matrix) -> list:
    """Monic characteristic polynomial ``det(x - M)``, coefficients low -> high.

    Faddeev-LeVerrier recursion; exact for the exact realization.
    """
    if m.rows != m.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    field = m.field
    coeffs = [zero(field)] * (n + 1)
    coeffs[n] = one(field)
    ident = Matrix.identity(n, field)
    mk = Matrix.zeros(n, n, field)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return coeffs


def _snap_root(s, approx: complex):
    denom = 1
    for c in s:
        denom = math.lcm(denom, c.denominator_lcm())
    y = approx * denom
    yr, yi = round(y.real), round(y.imag)
    for dr in (0, -1, 1):
        for di in (0, -1, 1):
            cand = GaussQ(yr + dr, yi + di) / denom
            if not _eval(s, cand):
                return cand
    return None


def _exact_roots(p) -> list:
    g = _gcd(p, _deriv(p))
    s, _ = _divmod(p, g)
    s = _monic(s)
    deg = len(s) - 1
    if deg == 1:
        return [-s[0]]
    approx = np.roots([complex(c) for c in reversed(s)])
    roots = []
    for a in approx:
        lam = _snap_root(s, complex(a))
        if lam is None:
            raise IrrationalSpectrumError(
                "characteristic polynomial has a root outside Q(i) "
                f"(near {complex(a):.6g})")
        if lam not in roots:
            roots.append(lam)
    if len(roots) != deg:
        raise IrrationalSpectrumError("could not isolate all roots of the squarefree part")
    return roots


def _multiplicity(p, lam) -> int:
    lin = [-lam, one(EXACT)]
    k = 0
    while True:
        q, r = _divmod(p, lin)
        if r:
            return k
        p, k = q, k + 1


def _block_sizes(m: Matrix, lam, mult: int) -> tuple:
    n = m.rows
    shifted = m - Matrix.identity(n, m.field).scale(lam)
    ranks = [n]
    power = Matrix.identity(n, m.field)
    for _ in range(mult):
        power = power @ shifted
        ranks.append(rank(power))
    # at_least[k] = number of blocks of size >= k
    at_least = [0] + [ranks[k - 1] - ranks[k] for k in range(1, mult + 1)] + [0]
    sizes = []
    for k in range(mult, 0, -1):
        sizes.extend([k] * (at_least[k] - at_least[k + 1]))
    return tuple(sizes)


def _cluster(values, scale):
    tol = FLOAT_CLUSTER_RTOL * scale
    clusters: list[list[complex]] = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            if abs(v - cl[0]) < tol:
                cl.append(v)
                break
        else:
            clusters.append([v])
    return [(complex(np.mean(cl)), len(cl)) for cl in clusters]


def eigen_structure(m: Matrix) -> EigenStructure:
    """Eigenvalues and Jordan block sizes of a square matrix.

    >>> eigen_structure(Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 1]])).as_list()
    [(GaussQ(0), [2]), (GaussQ(1), [1])]
    """
    if m.rows != m.cols:
        raise ValueError("eigen structure of a non-square matrix")
    n = m.rows
    if n == 0:
        return EigenStructure((), m.field)
    if m.field == EXACT:
        if n > EXACT_MAX_DIM:
            raise ValueError(f"exact eigen structure supports dimension <= {EXACT_MAX_DIM}")
        p = charpoly(m)
        roots = sorted(_exact_roots(p), key=GaussQ.sort_key)
        mults = [(lam, _multiplicity(p, lam)) for lam in roots]
    else:
        vals = np.linalg.eigvals(np.array(m.to_rows(), dtype=complex))
        scale = float(np.max(np.abs(vals))) or 1.0
        mults = _cluster([complex(v) for v in vals], scale)
    blocks = tuple((lam, _block_sizes(m, lam, k)) for lam, k in mults)
    es = EigenStructure(blocks, m.field)
    if es.dimension != n:
        raise ArithmeticError(f"block sizes {es.describe()} do not add up to {n}")
    return es
