"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
import time
from collections import defaultdict

import pytest

from enhanced_adhm.cli import main
from enhanced_adhm.deformation import TangentVector, tangent_basis
from enhanced_adhm.normalform import Case, build_case, classify_case, draw_params
from enhanced_adhm.numkernel import FLOAT, GaussQ, Matrix, nullspace, solve
from enhanced_adhm.numkernel.linalg import InconsistentSystemError
from enhanced_adhm.rep import (
    EnhancedRep,
    act,
    is_stable,
    random_invertible,
    residuals,
    sample_stable,
    stability_report,
)
from enhanced_adhm.scan import WORKERS_ENV
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

from conftest import canonical

CASES = [c.value for c in Case]
IM = GaussQ(0, 1)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
        return ok
    return emit


def _points(per_case, seed0, random_basis=True):
    for case in CASES:
        for k in range(per_case):
            yield case, sample_stable((1, 3, 1), case, seed0 + k, random_basis=random_basis)


def _random_tangent(cx, rng):
    if cx.base.field == FLOAT:
        coeffs = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in cx.quotient]
    else:
        coeffs = [rng.randint(-5, 5) + rng.randint(-5, 5) * IM for _ in cx.quotient]
    return TangentVector.from_coords(cx.base.dims, cx.combine(coeffs), cx.base.field)


def test_criterion_01_tangent_dimension(report):
    t0 = time.perf_counter()
    bad = []
    for case, x in _points(100, 1000):
        d = tangent_basis(x).tangent_dim
        if d != 6:
            bad.append((case, d))
    for seed in range(50):
        d = tangent_basis(sample_stable((1, 2, 1), "i", 2000 + seed, random_basis=True)).tangent_dim
        if d != 4:
            bad.append(("i@c=2", d))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    report(1, ok, f"400 samples at (1,3,1) -> 6, 50 at (1,2,1) -> 4; "
                  f"mismatches {len(bad)}; {elapsed:.1f} s (limit 30 s)")
    assert not bad
    assert elapsed < 30


def test_criterion_02_degeneracy_agreement(report):
    t0 = time.perf_counter()
    ranks = defaultdict(set)
    disagreements = 0
    for case, x in _points(50, 3000):
        rep = gram(x)
        ranks[case].add(rep.rank)
        disagreements += rep.agreement is not True
    elapsed = time.perf_counter() - t0
    recorded = {c: sorted(r) for c, r in ranks.items()}
    shape_ok = (recorded["i"] == [6] and recorded["ii3"] == [6]
                and all(len(recorded[c]) == 1 and recorded[c][0] < 6 and recorded[c][0] % 2 == 0
                        for c in ("ii1", "ii2")))
    ok = disagreements == 0 and shape_ok and elapsed < 60
    report(2, ok, f"200 basis-changed samples, disagreements {disagreements}; "
                  f"Gram ranks {recorded}; {elapsed:.1f} s (limit 60 s)")
    assert disagreements == 0
    assert shape_ok
    assert elapsed < 60


def test_criterion_03_complex_property(report):
    bad = 0
    n = 0
    for _, x in _points(50, 4000):
        cx = tangent_basis(x)
        n += 1
        bad += not (cx.D1 @ cx.D0).is_zero()
    report(3, bad == 0, f"D1.D0 = 0 exactly at {n - bad}/{n} points")
    assert n >= 200 and bad == 0


def test_criterion_04_descent(report):
    worst = 0
    n = 0
    for _, x in _points(10, 5000):
        worst = max(worst, descend_residual(x, trials=100, seed=n))
        n += 1
    report(4, worst == 0, f"max |Omega(d0(h,h'), v)| over 100 gauge draws x ker d1 at {n} points = {worst}")
    assert worst == 0


def test_criterion_05_form_identities(report):
    rng = random.Random(6)
    failures = 0
    npts = 0
    for _, x in _points(5, 6000):
        npts += 1
        rep = gram(x, classify=False)
        failures += not (rep.gram + rep.gram.T).is_zero()
        cx = rep.complex_
        for _ in range(100):
            u, v = _random_tangent(cx, rng), _random_tangent(cx, rng)
            failures += omega(u, u) != 0
            failures += omega(u, gamma1(v)) != IM * omega(u, v)
        failures += prehk_residuals(x, trials=20, seed=npts, complex_=cx) != 0
    float_worst = 0.0
    for case in Case:
        xf = canonical(case, FLOAT)
        rep = gram(xf, classify=False)
        cx = rep.complex_
        float_worst = max(float_worst, (rep.gram + rep.gram.T).max_abs())
        for _ in range(100):
            u, v = _random_tangent(cx, rng), _random_tangent(cx, rng)
            float_worst = max(float_worst, abs(omega(u, u)),
                              abs(omega(u, gamma1(v)) - 1j * omega(u, v)))
        float_worst = max(float_worst, prehk_residuals(xf, trials=100, complex_=cx))
    ok = failures == 0 and float_worst < 1e-10
    report(5, ok, f"exact identity failures {failures} over {npts} points x 100 pairs; "
                  f"float worst residual {float_worst:.2e} (limit 1e-10)")
    assert failures == 0
    assert float_worst < 1e-10


def test_criterion_06_f_direction_witness(report):
    rng = random.Random(7)
    failures = 0
    npts = 0
    for _, x in _points(5, 7000):
        npts += 1
        cx = tangent_basis(x)
        fs = [f_direction(x.dims, [1 if k == m else 0 for m in range(3)]) for k in range(3)]
        fs.append(f_direction(x.dims, [rng.randint(-9, 9) + rng.randint(-9, 9) * IM for _ in range(3)]))
        vs = cx.quotient_vectors() + [TangentVector.from_coords(x.dims, v, x.field) for v in cx.ker_d1]
        vs += [_random_tangent(cx, rng) for _ in range(10)]
        for f in fs:
            for v in vs:
                failures += omega(f, v) != 0 or omega(v, f) != 0
    report(6, failures == 0, f"f-only directions pair to zero at {npts} points; failures {failures}")
    assert failures == 0


def test_criterion_07_closed_form_oracle(report):
    rng = random.Random(8)
    points = []
    while len(points) < 10:
        p = draw_params(Case.I, rng)
        try:
            points.append((p, build_case(Case.I, p)))
        except ValueError:
            continue
    mismatch = {-1: 0, +1: 0}
    pairs = 0
    for params, x in points:
        cx = tangent_basis(x)
        for _ in range(100):
            u1 = TangentVector.from_coords(x.dims, cx.combine(
                [rng.randint(-5, 5) for _ in cx.quotient]), x.field)
            kernel = [rng.randint(-3, 3) for _ in cx.ker_d1]
            acc = [GaussQ(0)] * 29
            for c, v in zip(kernel, cx.ker_d1):
                acc = [s + c * t for s, t in zip(acc, v)]
            u2 = TangentVector.from_coords(x.dims, acc, x.field)
            ref = omega(u1, u2)
            pairs += 1
            for sign in mismatch:
                mismatch[sign] += omega_case_i_closed_form(u1, u2, params, ap_sign=sign) != ref
    ok = mismatch[CLOSED_FORM_AP_SIGN] == 0 and mismatch[-CLOSED_FORM_AP_SIGN] > 0
    report(7, ok, f"{pairs} kernel pairs at 10 case-(i) points; sign of 2a2'b1' recorded as "
                  f"{CLOSED_FORM_AP_SIGN:+d}; mismatches with -: {mismatch[-1]}, with +: {mismatch[+1]}")
    assert mismatch[CLOSED_FORM_AP_SIGN] == 0
    assert mismatch[-CLOSED_FORM_AP_SIGN] > 0


def _ad_matrix(a):
    cols = []
    for k in range(9):
        cols.append(a.commutator(Matrix.unit(3, 3, k // 3, k % 3)).entries)
    return Matrix.from_columns(cols, 9)


def _nonzero_j_solutions(count, rng):
    # solutions of [A,B] + IJ = 0 with J != 0: A upper triangular, I = e1,
    # J kills e1, B = particular solution + random centralizer element
    out = []
    while len(out) < count:
        a = Matrix.from_rows([[rng.randint(-3, 3) if j >= i else 0 for j in range(3)] for i in range(3)])
        i_vec = Matrix.column([1, 0, 0])
        j_vec = Matrix.from_rows([[0, rng.randint(-3, 3), rng.randint(-3, 3)]])
        if j_vec.is_zero():
            continue
        ad = _ad_matrix(a)
        try:
            b0 = solve(ad, (-(i_vec @ j_vec)).entries)
        except InconsistentSystemError:
            continue
        b = list(b0)
        for z in nullspace(ad):
            c = rng.randint(-3, 3)
            b = [s + c * t for s, t in zip(b, z)]
        x = EnhancedRep(a, Matrix(3, 3, b), i_vec, j_vec, Matrix.zeros(0, 0), Matrix.zeros(0, 0),
                        Matrix.zeros(3, 0))
        g = random_invertible(3, rng)
        out.append(act(g, Matrix.identity(0), x))
    return out


def test_criterion_08_j_vanishes(report):
    rng = random.Random(9)
    sampled = 0
    j_nonzero_stable = 0
    for _, x in _points(25, 8000):
        sampled += 1
        rep = stability_report(x)
        j_nonzero_stable += rep.stable and rep.j_vanishes is not True
    # the converse direction: solutions with J != 0 are never stable
    solutions = _nonzero_j_solutions(100, rng)
    on_variety = all(residuals(x).vanishes() for x in solutions)
    stable_with_j = sum(is_stable(x) for x in solutions)
    ok = j_nonzero_stable == 0 and on_variety and stable_with_j == 0
    report(8, ok, f"J = 0 at {sampled - j_nonzero_stable}/{sampled} sampled stable points; "
                  f"{stable_with_j}/{len(solutions)} random solutions with J != 0 are stable")
    assert j_nonzero_stable == 0
    assert on_variety
    assert stable_with_j == 0


def test_criterion_09_gauge_invariance(report):
    rng = random.Random(10)
    changed = []
    for case in Case:
        x = canonical(case)
        ref = gram(x)
        ref_key = (ref.tangent_dim, classify_case(x), ref.rank)
        for _ in range(20):
            y = act(random_invertible(3, rng), random_invertible(1, rng), x)
            rep = gram(y)
            key = (rep.tangent_dim, rep.case_label, rep.rank)
            if key != ref_key:
                changed.append((case.value, key))
    report(9, not changed, f"80 basis changes of the 4 canonical points; invariants changed {len(changed)}")
    assert not changed


def test_criterion_10_scan_determinism(report, tmp_path, monkeypatch):
    args = ["scan", "--case", "all", "--samples", "10", "--seed", "3", "--random-basis"]
    monkeypatch.setenv(WORKERS_ENV, "1")
    assert main(args + ["--csv", str(tmp_path / "a.csv")]) == 0
    assert main(args + ["--csv", str(tmp_path / "b.csv")]) == 0
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert main(args + ["--csv", str(tmp_path / "c.csv")]) == 0
    a, b, c = ((tmp_path / n).read_bytes() for n in ("a.csv", "b.csv", "c.csv"))
    ok = a == b == c
    report(10, ok, f"two serial runs and one 3-worker run byte-identical ({len(a)} bytes)")
    assert ok
