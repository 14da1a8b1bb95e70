"""Normal forms of stable (1, 3, 1) representations and their classification.

After a change of basis of ``V`` every stable point has ``F = e1``,
``J = 0`` and ``(A, B)`` in one of four shapes:

* ``I``   -- ``A``, ``B`` both diagonal;
* ``II1`` -- ``B`` has Jordan blocks (2, 1) and the F-line sits in the 2-block;
* ``II2`` -- ``B`` is a single 3x3 Jordan block;
* ``II3`` -- ``B`` has Jordan blocks (2, 1) and the F-line is the 1-block.

``A`` is built as the general matrix commuting with ``B`` in each shape: a
polynomial in the nilpotent part of ``B`` on every Jordan block (plus the
extra off-block entry allowed when the two eigenvalues of ``B`` in case II1
coincide).  The form Omega is non-degenerate exactly on cases ``I`` and
``II3``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .numkernel import EXACT, Matrix, eigen_structure, in_column_space
from .rep import (
    CLASSIFICATION_DIMS,
    SAMPLER_RANGE,
    EnhancedRep,
    UnstableError,
    is_stable,
    require_stable_point,
    residuals,
)


class ParameterError(ValueError):
    """Normal-form parameters violate the case invariants."""


class Case(str, Enum):
    I = "i"
    II1 = "ii1"
    II2 = "ii2"
    II3 = "ii3"

    @property
    def title(self) -> str:
        return self.value.upper()


ALL_CASES = (Case.I, Case.II1, Case.II2, Case.II3)
NONDEGENERATE_CASES = frozenset({Case.I, Case.II3})


@dataclass(frozen=True)
class CaseLabel:
    case: Case
    mirror: bool = False        # only A is non-diagonalizable; roles swapped
    coincident: bool = False    # blocks (2, 1) share one eigenvalue
    companion: str | None = None  # Jordan data of A when A and B both fail to diagonalize

    def __str__(self):
        s = self.case.title
        if self.mirror:
            s += "*"
        return s


@dataclass(frozen=True)
class CaseIParams:
    """Diagonal case: eigenvalue lists for A and B (first entry is A', B')
    and the leading entries of ``I`` (its last entry is 1)."""

    a: tuple
    b: tuple
    coeffs: tuple

    @classmethod
    def c3(cls, a_p, a2, a3, b_p, b2, b3, mu, lam):
        return cls((a_p, a2, a3), (b_p, b2, b3), (mu, lam))


@dataclass(frozen=True)
class CaseII1Params:
    a_p: int
    a12: int
    a13: int
    a3: int
    b_p: int
    b3: int
    i: tuple | None = None


@dataclass(frozen=True)
class CaseII2Params:
    a_p: int
    a12: int
    a13: int
    b_p: int
    i: tuple | None = None


@dataclass(frozen=True)
class CaseII3Params:
    a_p: int
    a2: int
    a23: int
    b_p: int
    b2: int
    i: tuple | None = None


_PARAM_TYPES = {
    Case.I: CaseIParams,
    Case.II1: CaseII1Params,
    Case.II2: CaseII2Params,
    Case.II3: CaseII3Params,
}

# cyclic vectors used when a parameter set leaves I unspecified
CANONICAL_I = {
    Case.II1: (0, 1, 1),
    Case.II2: (0, 0, 1),
    Case.II3: (1, 0, 1),
}


def _assemble(A, B, I, a_p, b_p, field) -> EnhancedRep:
    c = len(A)
    e1 = [1] + [0] * (c - 1)
    return EnhancedRep(
        A=Matrix.from_rows(A, field),
        B=Matrix.from_rows(B, field),
        I=Matrix.column(list(I), field),
        J=Matrix.zeros(1, c, field),
        Ap=Matrix.from_rows([[a_p]], field),
        Bp=Matrix.from_rows([[b_p]], field),
        F=Matrix.column(e1, field),
    )


def _templates(case: Case, p):
    if case is Case.I:
        a, b, coeffs = tuple(p.a), tuple(p.b), tuple(p.coeffs)
        c = len(a)
        if len(b) != c or len(coeffs) != c - 1:
            raise ParameterError("case I needs c eigenvalues per matrix and c-1 coefficients")
        pairs = list(zip(a, b))
        if len(set(pairs)) != c:
            raise ParameterError(f"joint eigenvalue pairs are not distinct: {pairs}")
        if any(x == 0 for x in coeffs):
            raise ParameterError("case I needs nonzero entries of I")
        A = [[a[k] if k == l else 0 for l in range(c)] for k in range(c)]
        B = [[b[k] if k == l else 0 for l in range(c)] for k in range(c)]
        return A, B, coeffs + (1,), a[0], b[0]
    if case is Case.II1:
        if (p.a_p, p.b_p) == (p.a3, p.b3):
            raise ParameterError("II1 needs (A', B') != (A3, B3)")
        if p.a13 and p.b3 != p.b_p:
            raise ParameterError("II1 entry A13 only commutes with B when B3 = B'")
        A = [[p.a_p, p.a12, p.a13], [0, p.a_p, 0], [0, 0, p.a3]]
        B = [[p.b_p, 1, 0], [0, p.b_p, 0], [0, 0, p.b3]]
        return A, B, p.i or CANONICAL_I[case], p.a_p, p.b_p
    if case is Case.II2:
        A = [[p.a_p, p.a12, p.a13], [0, p.a_p, p.a12], [0, 0, p.a_p]]
        B = [[p.b_p, 1, 0], [0, p.b_p, 1], [0, 0, p.b_p]]
        return A, B, p.i or CANONICAL_I[case], p.a_p, p.b_p
    if case is Case.II3:
        if (p.a_p, p.b_p) == (p.a2, p.b2):
            raise ParameterError("II3 needs (A', B') != (A2, B2)")
        A = [[p.a_p, 0, 0], [0, p.a2, p.a23], [0, 0, p.a2]]
        B = [[p.b_p, 0, 0], [0, p.b2, 1], [0, 0, p.b2]]
        return A, B, p.i or CANONICAL_I[case], p.a_p, p.b_p
    raise ValueError(case)


def build_case(case, params, field: str = EXACT) -> EnhancedRep:
    """Representation in normal form ``case`` with ``F = e1`` and ``J = 0``.

    Raises :class:`ParameterError` for invalid parameters and
    :class:`~enhanced_adhm.rep.UnstableError` when the chosen ``I`` is not
    cyclic.
    """
    case = Case(case)
    if not isinstance(params, _PARAM_TYPES[case]):
        raise ParameterError(f"case {case.title} expects {_PARAM_TYPES[case].__name__}")
    if case is not Case.I and (params.i is not None and len(params.i) != 3):
        raise ParameterError("I must have 3 entries")
    A, B, I, a_p, b_p = _templates(case, params)
    x = _assemble(A, B, I, a_p, b_p, field)
    bad = residuals(x).nonzero()
    if bad:
        raise AssertionError(f"template for {case.title} breaks relations {bad}")
    if not is_stable(x):
        raise UnstableError(f"I = {tuple(I)} is not cyclic for case {case.title}")
    return x


def _nonzero(rng: random.Random) -> int:
    v = 0
    while v == 0:
        v = rng.randint(-SAMPLER_RANGE, SAMPLER_RANGE)
    return v


def draw_params(case: Case, rng: random.Random, c: int = 3):
    """Random integer parameters for ``case``; stability is left to the caller."""
    r = lambda: rng.randint(-SAMPLER_RANGE, SAMPLER_RANGE)  # noqa: E731
    case = Case(case)
    if case is Case.I:
        while True:
            a = tuple(r() for _ in range(c))
            b = tuple(r() for _ in range(c))
            if len(set(zip(a, b))) == c:
                break
        return CaseIParams(a, b, tuple(_nonzero(rng) for _ in range(c - 1)))
    if case is Case.II1:
        a_p, a12, a3, b_p, b3 = r(), r(), r(), r(), r()
        a13 = r() if b3 == b_p else 0
        return CaseII1Params(a_p, a12, a13, a3, b_p, b3, (r(), r(), r()))
    if case is Case.II2:
        return CaseII2Params(r(), r(), r(), r(), (r(), r(), r()))
    return CaseII3Params(r(), r(), r(), r(), r(), (r(), r(), r()))


def classify_case(x: EnhancedRep) -> CaseLabel:
    """Recover the normal-form case of a stable (1, 3, 1) point in any basis.

    Classification goes by ``B`` unless ``B`` is diagonalizable and ``A`` is
    not, in which case the roles are swapped and ``mirror`` is set.
    """
    if x.dims != CLASSIFICATION_DIMS:
        raise ValueError(f"classification is defined for {tuple(CLASSIFICATION_DIMS)}, got {tuple(x.dims)}")
    if x.field != EXACT:
        raise ValueError("classification needs the exact realization")
    require_stable_point(x)
    es_a, es_b = eigen_structure(x.A), eigen_structure(x.B)
    if es_a.is_diagonalizable and es_b.is_diagonalizable:
        return CaseLabel(Case.I)
    if not es_b.is_diagonalizable:
        m, mp, es, mirror = x.B, x.Bp, es_b, False
        companion = None if es_a.is_diagonalizable else es_a.describe()
    else:
        m, mp, es, mirror = x.A, x.Ap, es_a, True
        companion = None
    if es.partition() == (3,):
        return CaseLabel(Case.II2, mirror, companion=companion)
    beta = mp[0, 0]  # M F = F beta
    if len(es.blocks) == 1:
        # blocks (2, 1) on one eigenvalue: F spans range(M - beta) iff it lies
        # on the Jordan chain of the 2-block
        shifted = m - Matrix.identity(3, m.field).scale(beta)
        case = Case.II1 if in_column_space(shifted, x.F.col(0)) else Case.II3
        return CaseLabel(case, mirror, coincident=True, companion=companion)
    lam_two = next(lam for lam, sizes in es.blocks if sizes == (2,))
    lam_one = next(lam for lam, sizes in es.blocks if sizes == (1,))
    if beta == lam_two:
        return CaseLabel(Case.II1, mirror, companion=companion)
    if beta == lam_one:
        return CaseLabel(Case.II3, mirror, companion=companion)
    raise ArithmeticError(f"F is not an eigenvector of M for eigenvalue {beta}")


def predict_nondegenerate(x_or_label) -> bool:
    """Predicted non-degeneracy of Omega: true exactly for cases I and II3."""
    label = x_or_label if isinstance(x_or_label, CaseLabel) else classify_case(x_or_label)
    return label.case in NONDEGENERATE_CASES
