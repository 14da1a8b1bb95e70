import pytest

from enhanced_adhm.normalform import (
    Case,
    CaseIParams,
    CaseII1Params,
    CaseII2Params,
    CaseII3Params,
    build_case,
)

X0_PARAMS = CaseIParams.c3(0, 1, 2, 0, 1, 2, 1, 1)

CANONICAL_PARAMS = {
    Case.I: X0_PARAMS,
    Case.II1: CaseII1Params(a_p=0, a12=0, a13=0, a3=2, b_p=0, b3=1),
    Case.II2: CaseII2Params(a_p=0, a12=0, a13=0, b_p=0),
    Case.II3: CaseII3Params(a_p=0, a2=1, a23=0, b_p=0, b2=1),
}


def canonical(case, field="exact"):
    return build_case(case, CANONICAL_PARAMS[Case(case)], field)


@pytest.fixture
def x0():
    return build_case(Case.I, X0_PARAMS)
