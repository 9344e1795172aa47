"""Command-line entry point.

Exit codes: 0 pass, 1 theorem/property mismatch, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from .classifier import (
    SearchOptions,
    classify,
    maps_jsonl,
    verify_lemma_consequences,
    verify_theorem,
)
from .errors import BudgetExceeded, PreserverError, ParseError
from .extremal import check_turan_bound
from .graph import from_g6lite, graph_from_obj, independence_number, maximum_independent_sets
from .lemmas import run_suites, summarize
from .maps import map_to_obj
from .matrix import graph_of, sym_from_obj, verify_matrix_theorem

EXIT_PASS, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
TURAN_SCHEMA = "preservers.turan/1"


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n")


def _read_input(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        if isinstance(obj, dict) and "ut" in obj:
            return graph_of(sym_from_obj(obj)), "matrix"
        return graph_from_obj(obj), "graph"
    return from_g6lite(stripped), "graph"


def cmd_alpha(args) -> int:
    g, _ = _read_input(args.input)
    alpha = independence_number(g)
    witness = maximum_independent_sets(g)[0]
    print(f"alpha={alpha}")
    print(f"witness={witness}")
    if args.all:
        for s in maximum_independent_sets(g):
            print(s)
    return EXIT_PASS


def _maps_payload(report, fmt: str) -> tuple[str, str]:
    if fmt == "jsonl":
        return "maps.jsonl", maps_jsonl(report)
    if fmt == "json":
        return "maps.json", json.dumps([map_to_obj(p) for p in report.satisfying_maps], indent=2) + "\n"
    from .classifier import map_type

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "type", "images"])
    for idx, p in enumerate(report.satisfying_maps):
        w.writerow([idx, map_type(p), json.dumps(map_to_obj(p)["images"], separators=(",", ":"))])
    return "maps.csv", buf.getvalue()


def cmd_classify(args) -> int:
    options = SearchOptions(
        pruning=not args.no_pruning,
        symmetry=args.symmetry,
        max_nodes=args.budget_nodes,
        threads=args.threads,
    )
    try:
        report = classify(args.n, args.t, args.mode, options)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if args.n >= 5 and not args.symmetry:
            print("hint: n = 5 needs --symmetry", file=sys.stderr)
        return EXIT_BUDGET

    summary = report.summary(include_timing=args.timing)
    code = EXIT_PASS
    if args.mode == "independence":
        theorem = verify_theorem(report)
        structure = verify_lemma_consequences(report)
        summary["theorem"] = theorem.to_dict()
        summary["structure"] = structure.to_dict()
        ok = theorem.passed and structure.passed
        code = EXIT_PASS if ok else EXIT_MISMATCH
        line = f"{theorem.message}, {'PASS' if ok else 'FAIL'}"
    else:
        line = f"{len(report.satisfying_maps)} maps (clique mode) " + ", ".join(
            f"{k}={v}" for k, v in report.counts.items()
        )
    summary["pass"] = code == EXIT_PASS
    print(line)
    print(f"nodes_expanded={report.nodes_expanded} pruned={report.nodes_pruned_by_rule}")
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        name, payload = _maps_payload(report, args.format)
        (out / name).write_text(payload)
        _write_json(out / "summary.json", summary)
    return code


def cmd_verify_lemmas(args) -> int:
    try:
        results = run_suites(args.n_max, args.samples, args.seed)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    summary = summarize(results, args.n_max, args.samples, args.seed)
    for r in results:
        tier = "" if r.exhaustive else " (random)"
        print(
            f"{r.name:12s} n={r.n}{tier}: {'PASS' if r.passed else 'FAIL'} "
            f"graphs={r.graphs} checked={r.checked} violations={r.violations}"
        )
    for name, entry in summary["suites"].items():
        print(f"{name}: {'PASS' if entry['pass'] else 'FAIL'}")
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "summary.json", summary)
    return EXIT_PASS if summary["pass"] else EXIT_MISMATCH


def cmd_verify_matrix(args, parser) -> int:
    if not 2 <= args.t <= args.n - 1:
        parser.error(f"t must satisfy 2 <= t <= n-1 (got n={args.n}, t={args.t})")
    try:
        result = verify_matrix_theorem(args.n, args.t, args.samples, args.seed)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    verdict = "PASS" if result["pass"] else "FAIL"
    print(f"{verdict}, {result['permutation_similarities']} similarities")
    print(f"controls: {result['control_outcomes']} anomalies={len(result['anomalies'])}")
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "summary.json", result)
    return EXIT_PASS if result["pass"] else EXIT_MISMATCH


def cmd_turan(args) -> int:
    rs = [args.r] if args.r else range(1, args.n + 1)
    try:
        reports = [check_turan_bound(args.n, r, args.samples, args.seed) for r in rs]
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    passed = all(rep.passed for rep in reports)
    for rep in reports:
        print(rep.to_json())
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(
            out / "summary.json",
            {"schema": TURAN_SCHEMA, "n": args.n, "pass": passed, "reports": [rep.to_dict() for rep in reports]},
        )
    return EXIT_PASS if passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="preservers", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="independence number of a graph or matrix file")
    p.add_argument("input", help="g6-lite text, edge-list JSON, or matrix JSON ('-' for stdin)")
    p.add_argument("--all", action="store_true", help="list every maximum independent set")

    p = sub.add_parser("classify", help="enumerate the complete linear maps satisfying the condition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--mode", choices=("independence", "clique"), default="independence")
    p.add_argument("--symmetry", action="store_true", help="search canonical first images only")
    p.add_argument("--no-pruning", action="store_true", help="check the condition at leaves only")
    p.add_argument("--budget-nodes", type=int, default=10**9)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; the search is deterministic")
    p.add_argument("--output-dir")
    p.add_argument("--format", choices=("jsonl", "json", "csv"), default="jsonl")
    p.add_argument("--timing", action="store_true", help="include wall time in summary.json")

    p = sub.add_parser("verify-lemmas", help="exhaustive independence-number property suites")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--samples", type=int, default=100_000, help="random graph pairs at n=8")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir")

    p = sub.add_parser("verify-matrix", help="permutation-similarity characterisation on S_n^+")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir")

    p = sub.add_parser("turan", help="edge bound for graphs with a given independence number")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--samples", type=int, default=0, help="random graphs when n > 7")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "alpha":
            return cmd_alpha(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "verify-lemmas":
            return cmd_verify_lemmas(args)
        if args.command == "verify-matrix":
            return cmd_verify_matrix(args, parser)
        return cmd_turan(args)
    except (OSError, PreserverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
