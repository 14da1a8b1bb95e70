import random

import pytest

from enhanced_adhm.deformation import TangentVector, tangent_basis
from enhanced_adhm.normalform import Case, CaseIParams, build_case, draw_params
from enhanced_adhm.numkernel import FLOAT, GaussQ, Matrix, mat_vec, rank
from enhanced_adhm.rep import act, random_invertible
from enhanced_adhm.symplectic import (
    CLOSED_FORM_AP_SIGN,
    descend_residual,
    f_direction,
    gamma1,
    gram,
    omega,
    omega_case_i_closed_form,
    prehk_residuals,
)

from conftest import X0_PARAMS, canonical

I = GaussQ(0, 1)


def _random_tangent(cx, rng):
    coeffs = [rng.randint(-5, 5) + rng.randint(-5, 5) * I for _ in cx.quotient]
    return TangentVector.from_coords(cx.base.dims, cx.combine(coeffs), cx.base.field)


def _random_kernel(cx, rng):
    acc = [GaussQ(0)] * 29
    for v in cx.ker_d1:
        c = rng.randint(-4, 4)
        acc = [s + c * t for s, t in zip(acc, v)]
    return TangentVector.from_coords(cx.base.dims, acc, cx.base.field)


def test_omega_unit_pair(x0):
    z = TangentVector.zero(x0.dims, x0.field)
    u = z.replace(a=Matrix.unit(3, 3, 0, 0))
    v = z.replace(b=Matrix.unit(3, 3, 0, 0))
    assert omega(u, v) == 1
    assert omega(v, u) == -1


def test_omega_alternating_and_bilinear(x0):
    rng = random.Random(0)
    cx = tangent_basis(x0)
    for _ in range(20):
        u, v, w = (_random_tangent(cx, rng) for _ in range(3))
        assert omega(u, u) == 0
        assert omega(u, v) == -omega(v, u)
        assert omega(u + w, v.scale(3 - I)) == (omega(u, v) + omega(w, v)) * (3 - I)


def test_f_direction_is_degenerate(x0):
    rng = random.Random(1)
    cx = tangent_basis(x0)
    f = f_direction(x0.dims, [1, 2, 3])
    for _ in range(10):
        v = _random_tangent(cx, rng)
        assert omega(f, v) == 0 and omega(v, f) == 0


def test_gamma1(x0):
    rng = random.Random(2)
    cx = tangent_basis(x0)
    zero = TangentVector.zero(x0.dims, x0.field)
    assert gamma1(zero) == zero
    for _ in range(10):
        u, v = _random_tangent(cx, rng), _random_tangent(cx, rng)
        assert gamma1(gamma1(u)) == -u
        assert omega(u, gamma1(v)) == I * omega(u, v)


def test_prehk_exact_and_float(x0):
    assert prehk_residuals(x0, trials=100) == 0
    assert prehk_residuals(x0.to_field(FLOAT), trials=100) < 1e-10


def test_descent_zero_at_canonical_points(x0):
    assert descend_residual(x0, trials=20) == 0
    assert descend_residual(canonical(Case.II2), trials=20) == 0


@pytest.mark.parametrize("case,expected", [(Case.I, 6), (Case.II1, 4), (Case.II2, 4), (Case.II3, 6)])
def test_gram_canonical(case, expected):
    rep = gram(canonical(case))
    assert rep.rank == expected and rep.rank % 2 == 0
    assert rep.is_antisymmetric()
    assert rep.computed_nondegenerate == (expected == 6)
    assert rep.agreement is True
    assert len(rep.kernel_basis) == 6 - expected
    assert not any(rep.kernel_gauge_trivial)


@pytest.mark.parametrize("case", [Case.II1, Case.II2])
def test_kernel_witness(case):
    rep = gram(canonical(case))
    cx = rep.complex_
    basis = cx.quotient_vectors()
    for v in rep.kernel_basis:
        assert not any(mat_vec(cx.D1, v))
        tv = TangentVector.from_coords(cx.base.dims, v, cx.base.field)
        assert all(omega(tv, q) == 0 for q in basis)


@pytest.mark.parametrize("case", list(Case))
def test_exact_and_float_rank_agree(case):
    x = canonical(case)
    assert gram(x).rank == rank(gram(x.to_field(FLOAT), classify=False).gram)


@pytest.mark.parametrize("case", list(Case))
def test_gram_rank_gauge_invariant(case):
    rng = random.Random(3)
    x = canonical(case)
    r0 = gram(x).rank
    for _ in range(3):
        y = act(random_invertible(3, rng), random_invertible(1, rng), x)
        assert gram(y).rank == r0


def test_closed_form_zero_on_diagonal(x0):
    cx = tangent_basis(x0)
    u = _random_kernel(cx, random.Random(4))
    assert omega_case_i_closed_form(u, u, X0_PARAMS) == 0


def test_closed_form_ap_term(x0):
    z = TangentVector.zero(x0.dims, x0.field)
    u1 = z.replace(ap=Matrix.from_rows([[1]]))
    u2 = z.replace(bp=Matrix.from_rows([[1]]))
    assert omega_case_i_closed_form(u1, u2, X0_PARAMS) == 2


def _case_i_points(n, seed):
    rng = random.Random(seed)
    out = [(X0_PARAMS, build_case(Case.I, X0_PARAMS))]
    while len(out) < n:
        p = draw_params(Case.I, rng)
        try:
            out.append((p, build_case(Case.I, p)))
        except ValueError:
            continue
    return out


def test_closed_form_sign_is_minus():
    rng = random.Random(5)
    assert CLOSED_FORM_AP_SIGN == -1
    plus_mismatches = 0
    for params, x in _case_i_points(4, 9):
        cx = tangent_basis(x)
        for _ in range(25):
            u1, u2 = _random_kernel(cx, rng), _random_kernel(cx, rng)
            assert omega_case_i_closed_form(u1, u2, params, ap_sign=-1) == omega(u1, u2)
            if omega_case_i_closed_form(u1, u2, params, ap_sign=+1) != omega(u1, u2):
                plus_mismatches += 1
    assert plus_mismatches > 0


def test_closed_form_rejects_other_cases():
    with pytest.raises(ValueError):
        omega_case_i_closed_form(None, None, CaseIParams.c3(0, 0, 2, 0, 0, 2, 1, 1))
