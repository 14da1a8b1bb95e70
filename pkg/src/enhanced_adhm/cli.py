"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import document
from .deformation import tangent_basis
from .normalform import ALL_CASES, classify_case, predict_nondegenerate
from .numkernel import EXACT, FLOAT_RANK_RTOL
from .rep import (
    OffVarietyError,
    UnstableError,
    data_scale,
    require_stable_point,
    residuals,
    sample_stable,
    stability_report,
)
from .scan import (
    FAULTS,
    agreement_summary,
    make_tasks,
    rows_to_csv,
    run_scan,
    run_verification,
    verification_summary,
)
from .symplectic import gram

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

RELATION_NAMES = {
    "R1": "[A,B] + IJ",
    "R2": "JF",
    "R3": "[A',B']",
    "R4": "AF - FA'",
    "R5": "BF - FB'",
}


class InputError(Exception):
    pass


def _load(path):
    try:
        return document.load(path)
    except (document.DocumentError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _stable_point(path):
    x = _load(path)
    try:
        require_stable_point(x)
    except (OffVarietyError, UnstableError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return x


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_check(args) -> int:
    x = _load(args.path)
    res = residuals(x)
    report = stability_report(x)
    exact = x.field == EXACT
    tol = 0.0 if exact else FLOAT_RANK_RTOL * data_scale(x) ** 2
    bad = res.nonzero(tol)
    rel = {}
    lines = []
    for name, m in res.items():
        if exact:
            rel[name] = "zero" if m.is_zero() else "nonzero"
        else:
            rel[name] = m.max_abs()
        shown = rel[name] if exact else f"max |.| = {rel[name]:.3e}"
        lines.append(f"{name} {RELATION_NAMES[name]:<11} {shown}")
    lines.append(f"S.1 (F injective)      {'ok' if report.s1 else 'S.1 violated'}")
    lines.append(f"S.2 (im I cyclic)      {'ok' if report.s2 else 'S.2 violated'}")
    if report.j_vanishes is not None:
        lines.append(f"r = 1: J = 0           {'yes' if report.j_vanishes else 'no'}")
    ok = not bad and report.stable
    lines.append("stable solution" if ok else "NOT a stable solution")
    _emit(args, {
        "residuals": rel,
        "on_variety": not bad,
        "S1": report.s1,
        "S2": report.s2,
        "stable": report.stable,
        "J_zero": report.j_vanishes,
    }, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tangent(args) -> int:
    x = _stable_point(args.path)
    cx = tangent_basis(x)
    _emit(args, {"tangent_dim": cx.tangent_dim, "ker_d1": cx.dim_ker_d1, "im_d0": cx.dim_im_d0},
          f"dim ker d1 = {cx.dim_ker_d1}\ndim im d0  = {cx.dim_im_d0}\n"
          f"tangent dim = {cx.tangent_dim}")
    return EXIT_OK


def cmd_omega(args) -> int:
    x = _stable_point(args.path)
    rep = gram(x, classify=False)
    g = rep.gram
    rows = [[str(e) for e in g.row(i)] for i in range(g.rows)]
    kernel = [[str(e) for e in v] for v in rep.kernel_basis]
    width = max((len(s) for r in rows for s in r), default=1)
    lines = ["Gram matrix of Omega on the tangent basis:"]
    lines += ["  " + " ".join(s.rjust(width) for s in r) for r in rows]
    lines.append(f"rank = {rep.rank} of {rep.tangent_dim}")
    for k, (v, triv) in enumerate(zip(kernel, rep.kernel_gauge_trivial)):
        lines.append(f"kernel[{k}] = ({', '.join(v)})  gauge-trivial: {'yes' if triv else 'no'}")
    _emit(args, {
        "tangent_dim": rep.tangent_dim,
        "gram": rows,
        "rank": rep.rank,
        "kernel": kernel,
        "kernel_gauge_trivial": rep.kernel_gauge_trivial,
    }, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    x = _stable_point(args.path)
    if x.field != EXACT or tuple(x.dims) != (1, 3, 1):
        raise InputError("classify needs an exact (1, 3, 1) representation")
    label = classify_case(x)
    predicted = predict_nondegenerate(label)
    rep = gram(x)
    verdict = lambda b: "non-degenerate" if b else "degenerate"  # noqa: E731
    _emit(args, {
        "case": label.case.title,
        "mirror": label.mirror,
        "coincident": label.coincident,
        "predicted_nondegenerate": predicted,
        "computed_nondegenerate": rep.computed_nondegenerate,
        "gram_rank": rep.rank,
        "agreement": rep.agreement,
    }, "\n".join([
        f"case        {label}{' (coincident eigenvalues)' if label.coincident else ''}",
        f"predicted   {verdict(predicted)}",
        f"computed    {verdict(rep.computed_nondegenerate)} (rank {rep.rank}/{rep.tangent_dim})",
        f"agreement   {'true' if rep.agreement else 'false'}",
    ]))
    return EXIT_OK if rep.agreement else EXIT_FAIL


def cmd_scan(args) -> int:
    if args.samples < 0:
        raise InputError("--samples must be non-negative")
    cases = [c.value for c in ALL_CASES] if args.case == "all" else [args.case]
    if args.c != 3 and cases != ["i"]:
        raise InputError("only case i is available for c != 3")
    t0 = time.perf_counter()
    tasks = make_tasks(args.c, cases, args.samples, args.seed, random_basis=args.random_basis,
                       mirror=args.mirror, timing=args.timing)
    rows = run_scan(tasks)
    text = rows_to_csv(rows)
    summary = f"{agreement_summary(rows)} ({time.perf_counter() - t0:.1f} s)"
    if args.csv:
        try:
            Path(args.csv).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {args.csv}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
        print(summary)
    else:
        sys.stdout.write(text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise InputError("--samples must be positive")
    results = run_verification(args.samples, args.seed, args.inject_fault)
    passed, summary = verification_summary(results)
    print(summary)
    failures = [r for r in results if r["document"] is not None]
    for r in failures[:args.max_dumps]:
        print(f"\ncounterexample: sample {r['sample_index']} (seed {r['seed']}, case {r['case']})")
        if args.dump_dir:
            out = Path(args.dump_dir)
            out.mkdir(parents=True, exist_ok=True)
            target = out / f"counterexample_{r['sample_index']:05d}.json"
            target.write_text(r["document"])
            print(f"written to {target}")
        else:
            sys.stdout.write(r["document"])
    return EXIT_OK if passed else EXIT_FAIL


def cmd_sample(args) -> int:
    try:
        x = sample_stable((1, args.c, 1), args.case, args.seed,
                          random_basis=args.random_basis, mirror=args.mirror)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = document.dumps(x)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="enhanced-adhm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in [
        ("check", cmd_check, "relation residuals and stability of a representation"),
        ("tangent", cmd_tangent, "dimensions of ker d1, im d0 and the tangent space"),
        ("omega", cmd_omega, "Gram matrix of Omega on the tangent basis"),
        ("classify", cmd_classify, "normal-form case, predicted and computed degeneracy"),
    ]:
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("path")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("scan", help="sample stable points and write one CSV row each")
    sp.add_argument("--c", type=int, default=3)
    sp.add_argument("--case", choices=[c.value for c in ALL_CASES] + ["all"], default="all")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--random-basis", action="store_true")
    sp.add_argument("--mirror", action="store_true", help="swap the roles of A and B")
    sp.add_argument("--timing", action="store_true",
                    help="fill wall_time_ms (output is then no longer reproducible)")
    sp.add_argument("--csv", metavar="PATH", help="write CSV here instead of stdout")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("verify-proposition",
                        help="four-case scan with basis changes and all invariant checks")
    sp.add_argument("--samples", type=int, default=50, help="samples per case")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--dump-dir", metavar="DIR",
                    help="write counterexample documents here instead of stdout")
    sp.add_argument("--max-dumps", type=int, default=3)
    sp.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", help="emit a sampled stable representation as JSON")
    sp.add_argument("--c", type=int, default=3)
    sp.add_argument("--case", choices=[c.value for c in ALL_CASES], default="i")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--random-basis", action="store_true")
    sp.add_argument("--mirror", action="store_true")
    sp.add_argument("-o", "--output", metavar="PATH")
    sp.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
