"""The holomorphic 2-form Omega on tangent vectors and its Gram matrix.

For ``u = (a1, b1, i1, j1, a1', b1', f1)`` and ``v = (a2, ...)``::

    Omega(u, v) = tr(-a2 b1 + b2 a1 - i2 j1 + i1 j2 - a2' b1' + b2' a1')

The ``f`` component never enters, so the f-only directions are always in the
radical of Omega on the ambient space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from .deformation import (
    DeformationComplex,
    TangentVector,
    d0,
    tangent_basis,
)
from .normalform import CaseIParams, CaseLabel, classify_case, predict_nondegenerate
from .numkernel import EXACT, Matrix, in_column_space, nullspace, rank
from .numkernel.scalar import imag_unit, zero
from .rep import CLASSIFICATION_DIMS, EnhancedRep

# sign of the 2 a2' b1' term in the reduced case-(i) expansion that agrees with
# the trace formula (determined by tests/test_symplectic.py)
CLOSED_FORM_AP_SIGN = -1

TRIAL_RANGE = 5


def trace_product(x: Matrix, y: Matrix):
    """``tr(x @ y)`` without forming the product."""
    n, k = x.rows, x.cols
    s = zero(x.field)
    xe, ye = x.entries, y.entries
    for p in range(n):
        for q in range(k):
            u = xe[p * k + q]
            if u:
                w = ye[q * n + p]
                if w:
                    s = s + u * w
    return s


def omega(u: TangentVector, v: TangentVector):
    """Omega(u, v); complex-bilinear and antisymmetric."""
    if u.dims != v.dims or u.field != v.field:
        raise ValueError("tangent vectors of different shape or realization")
    return (-trace_product(v.a, u.b) + trace_product(v.b, u.a)
            - trace_product(v.i, u.j) + trace_product(u.i, v.j)
            - trace_product(v.ap, u.bp) + trace_product(v.bp, u.ap))


def gamma1(u: TangentVector) -> TangentVector:
    """The complex structure: multiply every component by sqrt(-1)."""
    return u.scale(imag_unit(u.field))


def _magnitude(z, exact: bool):
    # exact: sup-norm of (re, im) as a rational, zero iff z == 0
    if exact:
        return max(abs(z.re), abs(z.im))
    return abs(z)


def _real_part(z, exact):
    return z.re if exact else z.real


def _imag_part(z, exact):
    return z.im if exact else z.imag


def _random_combination(cx: DeformationComplex, rng: random.Random) -> TangentVector:
    if cx.base.field == EXACT:
        coeffs = [rng.randint(-TRIAL_RANGE, TRIAL_RANGE) for _ in cx.quotient]
    else:
        coeffs = [rng.uniform(-1.0, 1.0) for _ in cx.quotient]
    return TangentVector.from_coords(cx.base.dims, cx.combine(coeffs), cx.base.field)


def prehk_residuals(x: EnhancedRep, trials: int = 100, seed: int = 0,
                    complex_: DeformationComplex | None = None):
    """Largest violation of ``w2(u, v) = w3(u, G v)`` and ``w3(u, v) = -w2(u, G v)``.

    ``w2 = Re Omega`` and ``w3 = Im Omega`` on random real combinations of the
    tangent basis.  The exact realization returns an ``mpq``, floats a ``float``.
    """
    cx = complex_ or tangent_basis(x)
    exact = x.field == EXACT
    rng = random.Random(seed)
    worst = mpq(0) if exact else 0.0
    for _ in range(trials):
        u, v = _random_combination(cx, rng), _random_combination(cx, rng)
        w = omega(u, v)
        wg = omega(u, gamma1(v))
        r1 = _real_part(w, exact) - _imag_part(wg, exact)
        r2 = _imag_part(w, exact) + _real_part(wg, exact)
        worst = max(worst, abs(r1), abs(r2))
    return worst


def descend_residual(x: EnhancedRep, trials: int = 100, seed: int = 0,
                     complex_: DeformationComplex | None = None):
    """max |Omega(d0(h, h'), v)| over random gauge directions and v in ker d1."""
    cx = complex_ or tangent_basis(x)
    _, c, cp = x.dims
    exact = x.field == EXACT
    rng = random.Random(seed)
    kernel = [TangentVector.from_coords(x.dims, v, x.field) for v in cx.ker_d1]
    worst = mpq(0) if exact else 0.0
    for _ in range(trials):
        h = Matrix(c, c, [rng.randint(-TRIAL_RANGE, TRIAL_RANGE) for _ in range(c * c)], x.field)
        hp = Matrix(cp, cp, [rng.randint(-TRIAL_RANGE, TRIAL_RANGE) for _ in range(cp * cp)], x.field)
        g = d0(x, h, hp)
        for v in kernel:
            worst = max(worst, _magnitude(omega(g, v), exact))
    return worst


@dataclass
class GramReport:
    digest: str
    tangent_dim: int
    gram: Matrix
    rank: int
    kernel_basis: list
    kernel_gauge_trivial: list
    case_label: CaseLabel | None
    predicted_nondegenerate: bool | None
    computed_nondegenerate: bool
    complex_: DeformationComplex = field(repr=False)

    @property
    def agreement(self) -> bool | None:
        if self.predicted_nondegenerate is None:
            return None
        return self.predicted_nondegenerate == self.computed_nondegenerate

    def is_antisymmetric(self) -> bool:
        g = self.gram
        if g.field == EXACT:
            return (g + g.T).is_zero()
        return (g + g.T).max_abs() <= 1e-9 * max(g.max_abs(), 1.0)


Form = Callable[[TangentVector, TangentVector], object]


def gram_matrix(cx: DeformationComplex, form: Form = omega) -> Matrix:
    basis = cx.quotient_vectors()
    n = len(basis)
    entries = [form(basis[p], basis[q]) for p in range(n) for q in range(n)]
    return Matrix(n, n, entries, cx.base.field)


def gram(x: EnhancedRep, form: Form = omega, *, classify: bool = True) -> GramReport:
    """Gram matrix of ``form`` on the tangent basis, its rank and kernel.

    Kernel vectors are returned in ambient coordinates, each with a flag
    telling whether it is an infinitesimal gauge transformation (it never
    should be: quotient representatives are independent modulo im d0).
    """
    cx = tangent_basis(x)
    g = gram_matrix(cx, form)
    rk = rank(g)
    kernel = [cx.combine(c) for c in nullspace(g)]
    trivial = [in_column_space(cx.D0, v) for v in kernel]
    label = predicted = None
    if classify and x.dims == CLASSIFICATION_DIMS and x.field == EXACT:
        label = classify_case(x)
        predicted = predict_nondegenerate(label)
    return GramReport(
        digest=x.digest(),
        tangent_dim=cx.tangent_dim,
        gram=g,
        rank=rk,
        kernel_basis=kernel,
        kernel_gauge_trivial=trivial,
        case_label=label,
        predicted_nondegenerate=predicted,
        computed_nondegenerate=(rk == cx.tangent_dim),
        complex_=cx,
    )


def omega_case_i_closed_form(u1: TangentVector, u2: TangentVector, params: CaseIParams,
                             ap_sign: int = CLOSED_FORM_AP_SIGN):
    """Reduced expansion of Omega(u1, u2) at a diagonal normal-form point.

    Valid for ``u1, u2`` in ker d1 at ``build_case(Case.I, params)``: there
    ``j = 0``, ``a[0,0] = a'``, ``b[0,0] = b'``, and the linearized
    commutator relation kills every term involving the first row or column.
    ``ap_sign`` is the sign of the ``2 a2' b1'`` term.
    """
    if not isinstance(params, CaseIParams) or len(params.a) != 3:
        raise ValueError("closed form needs case-(i) parameters for c = 3")
    if len(set(zip(params.a, params.b))) != 3:
        raise ValueError("base point is not in case (i): joint eigenvalues repeat")
    if u1.dims != CLASSIFICATION_DIMS or u2.dims != CLASSIFICATION_DIMS:
        raise ValueError("closed form is for dimension vector (1, 3, 1)")
    a1, b1, a2, b2 = u1.a, u1.b, u2.a, u2.b
    a1p, b1p, a2p, b2p = u1.ap[0, 0], u1.bp[0, 0], u2.ap[0, 0], u2.bp[0, 0]
    # matrix indices below are 0-based: a2[1, 2] is the entry "a2_23"
    return (ap_sign * 2 * a2p * b1p + 2 * a1p * b2p
            - a2[1, 1] * b1[1, 1] - a2[2, 1] * b1[1, 2] - a2[1, 2] * b1[2, 1] - a2[2, 2] * b1[2, 2]
            + a1[1, 1] * b2[1, 1] + a1[2, 1] * b2[1, 2] + a1[1, 2] * b2[2, 1] + a1[2, 2] * b2[2, 2])


def f_direction(dims, fvec, field: str = EXACT) -> TangentVector:
    """Ambient vector with only the f component set."""
    u = TangentVector.zero(dims, field)
    return u.replace(f=Matrix(u.f.rows, u.f.cols, fvec, field))

