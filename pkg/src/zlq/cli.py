"""Command-line interface.

Data goes to stdout as JSON (or, for failed verification, as the
violation-report text format); human-readable progress goes to stderr and
is silenced by ``--quiet``.  Exit codes: 0 success / verified / optimal,
1 failed verification or unproven optimality, 2 usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .board import NONDEGENERATE, classify, counting_summary
from .families import Family, FamilyFormatError, parse_family, serialize_family
from .admissibility import verify
from .ilp import (
    SolutionFormatError,
    build_model,
    export_lp,
    import_solution,
    parse_solution_file,
)
from .exact import solve_exact
from .search import SearchConfig, run_search
from .lifting import embed, lift_extend
from .recognition import (
    GraphFormatError,
    Isomorphism,
    parse_graph,
    recognize_incidence,
)
from .fixtures import REFERENCE_QS, gap_ratio, k4t_bound, reference_family, reference_table


def _emit(payload) -> None:
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _stderr_json(kind: str, message: str, **extra) -> None:
    payload = {"error": kind, "message": message}
    payload.update(extra)
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def _progress(quiet: bool):
    if quiet:
        return None
    return lambda line: print(line, file=sys.stderr)


def _say(quiet: bool, line: str) -> None:
    if not quiet:
        print(line, file=sys.stderr)


def _load_family(path: str) -> Family:
    try:
        return parse_family(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise _CliError(2, "io", f"cannot read {path}: {exc}") from None
    except FamilyFormatError as exc:
        raise _CliError(2, "parse", f"{path}: {exc}") from None


class _CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _default_threads() -> int:
    raw = os.environ.get("ZLQ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _cmd_verify(args) -> int:
    family = _load_family(args.file)
    result = verify(family)
    if result.ok:
        _say(args.quiet, f"PASS: {len(family)} 2-edges on the q={family.q} board")
        _emit({"ok": True, "q": family.q, "size": len(family)})
        return 0
    _say(args.quiet, f"FAIL: {len(result.violations)} violations")
    print(result.report())
    return 1


def _cmd_solve_exact(args) -> int:
    result = solve_exact(
        args.q,
        mode=args.mode,
        symmetry=args.symmetry,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        order=args.order,
        canonical_certificate=args.canonical_certificate,
    )
    m = result.q * (result.q + 1) // 2
    n = result.q + 1
    _say(
        args.quiet,
        f"{result.status} |E2|={result.size}, z_L({m},{n})={result.z_value}"
        f" [{result.nodes} nodes, {result.elapsed:.2f}s]",
    )
    _emit(
        {
            "status": result.status,
            "q": result.q,
            "mode": result.mode,
            "size": result.size,
            "z_value": result.z_value,
            "nodes": result.nodes,
            "pruned_static": result.pruned_static,
            "symmetry": result.symmetry,
            "orbit_count": result.orbit_count,
        }
    )
    if args.out:
        Path(args.out).write_text(serialize_family(result.certificate), encoding="utf-8")
    if args.log:
        with open(args.log, "w", encoding="utf-8") as handle:
            for event in result.events:
                handle.write(json.dumps(event, sort_keys=True) + "\n")
    return 0 if result.optimal else 1


def _cmd_search(args) -> int:
    warm = _load_family(args.warm_start) if args.warm_start else None
    config = SearchConfig(
        q=args.q,
        mode=args.mode,
        seed=args.seed,
        restarts=args.restarts,
        time_limit=args.time_limit,
        improve_passes=args.improve_passes,
        delete_width=args.delete_width,
        width2_samples=args.width2_samples,
        warm_start=warm,
    )
    try:
        result = run_search(config, threads=args.threads, progress=_progress(args.quiet))
    except ValueError as exc:
        raise _CliError(2, "config", str(exc)) from None
    print(result.summary_json())
    if args.out:
        Path(args.out).write_text(serialize_family(result.best), encoding="utf-8")
    return 0


def _cmd_lift(args) -> int:
    family = _load_family(args.input)
    report = lift_extend(
        family,
        seed=args.seed,
        restarts=args.restarts,
        improve_passes=args.improve_passes,
        delete_width=args.delete_width,
        oracle_on_shortfall=not args.no_oracle,
        oracle_node_limit=args.node_limit,
        threads=args.threads,
        progress=_progress(args.quiet),
    )
    print(report.summary_json())
    if args.out:
        Path(args.out).write_text(serialize_family(report.family), encoding="utf-8")
    return 0


def _cmd_export_ilp(args) -> int:
    model = build_model(args.q, mode=args.mode, prune_static=args.prune)
    Path(args.out).write_text(export_lp(model), encoding="utf-8")
    counts = model.counts()
    _emit(
        {
            "q": model.q,
            "mode": model.mode,
            "prune": model.prune_static,
            "variables": counts["variables"],
            "rows": {"S": counts["S"], "C2": counts["C2"], "C3": counts["C3"]},
            "fixed_zero": counts["fixed_zero"],
            "path": args.out,
        }
    )
    return 0


def _cmd_import_solution(args) -> int:
    model = build_model(args.model_q, mode=args.mode, prune_static=args.prune)
    try:
        text = Path(args.solution).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(2, "io", f"cannot read {args.solution}: {exc}") from None
    try:
        values = parse_solution_file(text, model)
    except SolutionFormatError as exc:
        raise _CliError(2, "parse", str(exc)) from None
    imported = import_solution(model, values)
    _emit(
        {
            "q": model.q,
            "size": len(imported.family),
            "objective": imported.objective,
            "ilp_feasible": imported.ilp_feasible,
            "violated_rows": list(imported.violated_rows[:20]),
            "verifier_ok": imported.verifier.ok,
            "consistent": imported.consistent,
        }
    )
    if args.out:
        Path(args.out).write_text(serialize_family(imported.family), encoding="utf-8")
    return 0 if imported.ilp_feasible and imported.verifier.ok else 1


def _cmd_stats(args) -> int:
    _emit(counting_summary(args.q).as_dict())
    return 0


def _cmd_families(args) -> int:
    qs = [args.q] if args.q else list(REFERENCE_QS)
    for q in qs:
        if q not in REFERENCE_QS:
            raise _CliError(2, "usage", f"no bundled family for q={q}")
    if args.emit:
        if not args.q:
            raise _CliError(2, "usage", "--emit requires --q")
        print(serialize_family(reference_family(args.q)), end="")
        return 0
    rows = []
    for q in qs:
        family = reference_family(q)
        result = verify(family)
        rows.append(
            {
                "q": q,
                "size": len(family),
                "verified": result.ok,
                "nondegenerate": all(classify(e) == NONDEGENERATE for e in family.edges),
            }
        )
    _emit(rows)
    return 0


def _cmd_ratios(args) -> int:
    gap_rows = []
    for row in reference_table():
        if row.q < 4:
            continue
        gap_rows.append(
            {
                "q": row.q,
                "z": row.z,
                "z_limited": row.z_limited,
                "exact": row.exact,
                "gap_percent": round(gap_ratio(row.q), 1),
            }
        )
    _emit(
        {
            "gap_ratios": gap_rows,
            "block_construction": [{"t": t, "bound": k4t_bound(t)} for t in (1, 2)],
        }
    )
    return 0


def _cmd_recognize(args) -> int:
    try:
        graph = parse_graph(Path(args.graph).read_text(encoding="utf-8"))
    except OSError as exc:
        raise _CliError(2, "io", f"cannot read {args.graph}: {exc}") from None
    except GraphFormatError as exc:
        raise _CliError(2, "parse", str(exc)) from None
    outcome = recognize_incidence(graph)
    if isinstance(outcome, Isomorphism):
        _emit(
            {
                "isomorphic": True,
                "n": graph.right,
                "left_map": [list(pair) for pair in outcome.left_map],
                "right_map": list(outcome.right_map),
            }
        )
        return 0
    _emit({"isomorphic": False, "reason": outcome.reason, "detail": outcome.detail})
    return 1


def _cmd_repro(args) -> int:
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str) -> None:
        checks.append((name, ok, detail))
        print(json.dumps({"check": name, "ok": ok, "detail": detail}, sort_keys=True))

    expected_sizes = {3: 2, 4: 6, 5: 13, 6: 22, 7: 32}
    for q in REFERENCE_QS:
        family = reference_family(q)
        result = verify(family)
        nondeg = all(classify(e) == NONDEGENERATE for e in family.edges)
        ok = result.ok and len(family) == expected_sizes[q] and nondeg
        check(
            f"family-q{q}",
            ok,
            f"size={len(family)} verified={result.ok} nondegenerate={nondeg}",
        )

    counting = {
        "counting-q3": (counting_summary(3).full, 66),
        "counting-q4": (counting_summary(4).full, 435),
        "counting-q5-available": (counting_summary(5).available, 60),
        "counting-q5-full": (counting_summary(5).full, 1770),
        "counting-q5-nondeg": (counting_summary(5).nondeg, 1410),
    }
    for name, (got, want) in counting.items():
        check(name, got == want, f"got={got} expected={want}")

    exact3 = solve_exact(3)
    check(
        "exact-q3",
        exact3.optimal and exact3.size == 2 and exact3.z_value == 14,
        f"status={exact3.status} size={exact3.size} z={exact3.z_value}",
    )
    if not args.skip_q4:
        exact4 = solve_exact(4, symmetry=True)
        check(
            "exact-q4",
            exact4.optimal and exact4.size == 6 and exact4.z_value == 26,
            f"status={exact4.status} size={exact4.size} z={exact4.z_value}",
        )

    for row in reference_table():
        if row.exact:
            continue
        expected = row.q * (row.q + 1) + expected_sizes[row.q]
        check(
            f"table-bound-q{row.q}",
            row.z_limited == expected,
            f"z_limited={row.z_limited} q(q+1)+size={expected}",
        )

    expected_gaps = {4: 30.0, 5: 43.3, 6: 52.4, 7: 57.1}
    for q, want in expected_gaps.items():
        got = round(gap_ratio(q), 1)
        check(f"ratio-q{q}", got == want, f"got={got} expected={want}")
    check("block-t1", k4t_bound(1) == 14, f"got={k4t_bound(1)} expected=14")
    check("block-t2", k4t_bound(2) == 68, f"got={k4t_bound(2)} expected=68")

    for q in REFERENCE_QS:
        lifted = embed(reference_family(q))
        check(f"embed-q{q}", verify(lifted).ok, f"to_q={lifted.q} size={len(lifted)}")

    for q, want_target, want_bound in ((4, 8, 38), (5, 15, 57)):
        report = lift_extend(
            reference_family(q), seed=0, restarts=2, delete_width=1, threads=args.threads
        )
        ok = report.target == want_target and (
            not report.met_target or report.bound >= want_bound
        )
        check(
            f"lift-q{q}",
            ok and report.met_target,
            f"target={report.target} achieved={report.achieved} bound={report.bound}"
            f" met={report.met_target}",
        )

    failed = sum(1 for _, ok, _ in checks if not ok)
    print(
        json.dumps(
            {"event": "summary", "passed": len(checks) - failed, "failed": failed},
            sort_keys=True,
        )
    )
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zlq",
        description="Exact and heuristic computations of limited augmented "
        "Zarankiewicz numbers on incidence boards of complete graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quiet(p):
        p.add_argument("--quiet", action="store_true", help="silence stderr progress")

    p = sub.add_parser("verify", help="verify a family file; exit 0 iff admissible")
    p.add_argument("file")
    add_quiet(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("solve-exact", help="exact maximum family via branch and bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["full", "nondeg"], default="full")
    p.add_argument("--symmetry", action="store_true",
                   help="restrict first-level branching to orbit representatives")
    p.add_argument("--node-limit", type=int, default=None)
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("--order", choices=["conflicts", "canonical"], default="conflicts")
    p.add_argument("--canonical-certificate", action="store_true",
                   help="report the lexicographically smallest optimal family")
    p.add_argument("--out", help="write the certificate family file here")
    p.add_argument("--log", help="write node/bound/incumbent events as JSON lines")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="accepted for interface compatibility; the solver is sequential")
    add_quiet(p)
    p.set_defaults(func=_cmd_solve_exact)

    p = sub.add_parser("search", help="randomized greedy search with restarts")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--mode", choices=["full", "nondeg"], default="full")
    p.add_argument("--time-limit", type=float, default=None, help="seconds")
    p.add_argument("--improve-passes", type=int, default=2)
    p.add_argument("--delete-width", type=int, choices=[1, 2], default=1)
    p.add_argument("--width2-samples", type=int, default=64)
    p.add_argument("--warm-start", help="family file to start every restart from")
    p.add_argument("--out", help="write the best family file here")
    p.add_argument("--threads", type=int, default=_default_threads())
    add_quiet(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("lift", help="embed a family one board up and extend it")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--improve-passes", type=int, default=2)
    p.add_argument("--delete-width", type=int, choices=[1, 2], default=2)
    p.add_argument("--no-oracle", action="store_true",
                   help="skip the exact sub-solve when the target is missed")
    p.add_argument("--node-limit", type=int, default=20_000_000,
                   help="node budget for the exact sub-solve")
    p.add_argument("--threads", type=int, default=_default_threads())
    add_quiet(p)
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("export-ilp", help="write the 0-1 model in LP format")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["full", "nondeg"], default="full")
    p.add_argument("--prune", action="store_true",
                   help="fix statically infeasible candidates to zero")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_export_ilp)

    p = sub.add_parser("import-solution", help="extract and verify a solver assignment")
    p.add_argument("--model-q", type=int, required=True)
    p.add_argument("--mode", choices=["full", "nondeg"], default="full")
    p.add_argument("--prune", action="store_true")
    p.add_argument("--solution", required=True)
    p.add_argument("--out", help="write the extracted family file here")
    p.set_defaults(func=_cmd_import_solution)

    p = sub.add_parser("stats", help="board and candidate counts as JSON")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("families", help="list or emit the bundled families")
    p.add_argument("--q", type=int)
    p.add_argument("--emit", action="store_true", help="print the family file text")
    p.set_defaults(func=_cmd_families)

    p = sub.add_parser("ratios", help="gap ratios and block-construction bounds")
    p.set_defaults(func=_cmd_ratios)

    p = sub.add_parser("recognize", help="recognize an incidence graph")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("repro", help="re-run the bundled value and bound checks")
    p.add_argument("--skip-q4", action="store_true",
                   help="skip the exact q=4 computation")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=_cmd_repro)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        _stderr_json(exc.kind, str(exc))
        return exc.code
    except ValueError as exc:
        _stderr_json("usage", str(exc))
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
