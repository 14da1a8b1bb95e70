"""Batch scans over sampled stable points.

Every sample gets the derived seed ``seed + sample_index`` and rows are
always emitted in sample order, whatever the worker count.
"""

from __future__ import annotations

import csv
import io
import os
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import document
from .deformation import TangentVector
from .normalform import ALL_CASES, Case
from .numkernel import mat_vec
from .rep import sample_stable
from .symplectic import trace_product, descend_residual, gram, omega

WORKERS_ENV = "ENHANCED_ADHM_WORKERS"
CSV_HEADER = ("sample_index", "seed", "case", "mirror", "tangent_dim", "gram_rank",
              "predicted", "computed", "agreement", "wall_time_ms")
VERIFY_DESCENT_TRIALS = 10


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def _ordered_map(fn, tasks):
    workers = worker_count()
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


@dataclass(frozen=True)
class Task:
    index: int
    seed: int
    case: str
    c: int
    random_basis: bool
    mirror: bool
    timing: bool = False
    fault: str | None = None


def make_tasks(c: int, cases, samples: int, seed: int, *, random_basis: bool,
               mirror: bool | str = False, timing: bool = False, fault=None) -> list[Task]:
    """``mirror="alternate"`` mirrors every odd sample within each case."""
    tasks = []
    for case in cases:
        for s in range(samples):
            m = (s % 2 == 1) if mirror == "alternate" else bool(mirror)
            idx = len(tasks)
            tasks.append(Task(idx, seed + idx, Case(case).value, c, random_basis, m, timing, fault))
    return tasks


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _flip_ap_term(u: TangentVector, v: TangentVector):
    # deliberately wrong form: the V' term enters with the opposite sign
    base = omega(u, v)
    vp = -trace_product(v.ap, u.bp) + trace_product(v.bp, u.ap)
    return base - vp - vp


FAULTS = {"omega-sign": _flip_ap_term}


def _row(task: Task, x, rep, elapsed_ms) -> dict:
    label = rep.case_label
    return {
        "sample_index": task.index,
        "seed": task.seed,
        "case": label.case.title if label else Case(task.case).title,
        "mirror": task.mirror,
        "tangent_dim": rep.tangent_dim,
        "gram_rank": rep.rank,
        "predicted": rep.predicted_nondegenerate,
        "computed": rep.computed_nondegenerate,
        "agreement": rep.agreement,
        "wall_time_ms": f"{elapsed_ms:.1f}" if task.timing else None,
    }


def scan_one(task: Task) -> dict:
    t0 = time.perf_counter()
    x = sample_stable((1, task.c, 1), task.case, task.seed,
                      random_basis=task.random_basis, mirror=task.mirror)
    rep = gram(x, FAULTS.get(task.fault, omega))
    return _row(task, x, rep, (time.perf_counter() - t0) * 1000)


def run_scan(tasks: list[Task]) -> list[dict]:
    return _ordered_map(scan_one, tasks)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(row[k]) for k in CSV_HEADER])
    return buf.getvalue()


def agreement_summary(rows: list[dict]) -> str:
    judged = [r for r in rows if r["agreement"] is not None]
    if not judged:
        return f"{len(rows)} samples, no classification (agreement n/a)"
    ok = sum(1 for r in judged if r["agreement"])
    pct = 100.0 * ok / len(judged)
    return f"{len(rows)} samples, agreement {ok}/{len(judged)} = {pct:.1f}%"


# -- full verification -----------------------------------------------------

def verify_one(task: Task) -> dict:
    x = sample_stable((1, task.c, 1), task.case, task.seed,
                      random_basis=task.random_basis, mirror=task.mirror)
    form = FAULTS.get(task.fault, omega)
    rep = gram(x, form)
    cx = rep.complex_
    basis = cx.quotient_vectors()
    witness_ok = True
    for v, trivial in zip(rep.kernel_basis, rep.kernel_gauge_trivial):
        tv = TangentVector.from_coords(x.dims, v, x.field)
        if trivial or any(mat_vec(cx.D1, v)) or any(form(tv, q) for q in basis):
            witness_ok = False
    checks = {
        "antisymmetry": rep.is_antisymmetric(),
        "rank parity": rep.rank % 2 == 0,
        "d1.d0 = 0": (cx.D1 @ cx.D0).is_zero(),
        "descent": descend_residual(x, VERIFY_DESCENT_TRIALS, task.seed, complex_=cx) == 0,
        "kernel witness": witness_ok,
        "J = 0": x.J.is_zero(),
        "tangent dim = 2c": rep.tangent_dim == 2 * task.c,
        "case recovered": rep.case_label is not None and rep.case_label.case.value == task.case,
    }
    out = _row(task, x, rep, 0.0)
    out["coincident"] = rep.case_label.coincident if rep.case_label else False
    out["checks"] = checks
    out["document"] = None if (rep.agreement and all(checks.values())) else document.dumps(x)
    return out


def run_verification(samples: int, seed: int, fault: str | None = None) -> list[dict]:
    tasks = make_tasks(3, [c.value for c in ALL_CASES], samples, seed,
                       random_basis=True, mirror="alternate", fault=fault)
    return _ordered_map(verify_one, tasks)


def verification_summary(results: list[dict]) -> tuple[bool, str]:
    by_case = defaultdict(list)
    for r in results:
        by_case[r["case"]].append(r)
    lines = [f"{'case':<5} {'n':>4} {'mirror':>6} {'coinc':>5} {'ranks':<10} "
             f"{'predicted':<11} {'agree':>7}"]
    for case in ALL_CASES:
        rs = by_case.get(case.title, [])
        if not rs:
            lines.append(f"{case.title:<5} {0:>4}")
            continue
        ranks = ",".join(str(k) for k in sorted(Counter(r["gram_rank"] for r in rs)))
        preds = {r["predicted"] for r in rs}
        pred = ("non-degen" if preds == {True} else "degenerate" if preds == {False} else "mixed")
        agree = sum(1 for r in rs if r["agreement"])
        lines.append(f"{case.title:<5} {len(rs):>4} {sum(r['mirror'] for r in rs):>6} "
                     f"{sum(r['coincident'] for r in rs):>5} {ranks:<10} {pred:<11} "
                     f"{agree:>3}/{len(rs):<3}")
    lines.append("")
    failed_checks = Counter()
    for r in results:
        for name, ok in r["checks"].items():
            if not ok:
                failed_checks[name] += 1
    names = list(results[0]["checks"]) if results else []
    for name in names:
        bad = failed_checks[name]
        lines.append(f"  {name:<18} {'ok' if not bad else f'FAILED on {bad} sample(s)'}")
    disagreements = sum(1 for r in results if not r["agreement"])
    passed = bool(results) and disagreements == 0 and not failed_checks
    total = len(results)
    pct = 100.0 * (total - disagreements) / total if total else 0.0
    lines.append(f"agreement {total - disagreements}/{total} = {pct:.1f}%")
    lines.append("PASS" if passed else "FAIL")
    return passed, "\n".join(lines)
