"""Command-line front end.

Exit codes: 0 success, 1 a check failed (details on stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import continuum as ct
from . import newman_moore as nm
from .codes import FAMILIES, BoundaryError, InvalidCode, build_change_of_boundary, build_code, load_code
from .gauge import F2GaugeStructure, analyze, is_syndrome
from .pauli import format_pauli

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
BETA_FAMILIES = ("toric2", "toric3", "xcube")


class UsageError(Exception):
    pass


def _code_from_args(args):
    if args.file:
        return load_code(args.file)
    if args.code is None or args.L is None:
        raise UsageError("give --code and --L, or --file")
    return build_code(args.code, args.L, args.boundary)


def _print_report(report: dict) -> None:
    for key in ("family", "L", "boundary", "N", "n_stabilizers", "dim_ker_phi", "dim_trivial", "dim_topological", "k"):
        if report.get(key) is not None:
            print("%-16s %s" % (key, report[key]))
    if "distance" in report:
        print("%-16s %s" % ("distance", json.dumps(report["distance"])))
    for name, res in report["checks"].items():
        line = "check %-24s %s" % (name, "ok" if res["ok"] else "FAILED")
        if not res["ok"]:
            line += "  witness: %s" % json.dumps(res.get("witness"))
        print(line)


def cmd_analyze(args) -> int:
    code = _code_from_args(args)
    beta = None
    if not args.file and code.boundary == "periodic" and code.family in BETA_FAMILIES:
        beta = build_change_of_boundary(code.family, code.L)
    report = analyze(code, beta, args.distance_max_weight, seed=args.seed, trials=args.trials)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_report(report)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def _parse_subset(text: str, n: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        idx = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError("--J must be a comma separated list of stabilizer indices")
    for i in idx:
        if not 0 <= i < n:
            raise UsageError("stabilizer index %d out of range (|S|=%d)" % (i, n))
    return idx


def _describe(code, i: int) -> str:
    s = code[i]
    return "%d:%s@(%s)" % (i, s.kind, ",".join(map(str, s.anchor)))


def cmd_syndrome(args) -> int:
    code = _code_from_args(args)
    J = _parse_subset(args.J, len(code))
    verdict = is_syndrome(F2GaugeStructure.from_code(code), J)
    if verdict:
        out = {"realizable": True, "witness": format_pauli(verdict.witness)}
    else:
        members = verdict.constraint.indices()
        out = {
            "realizable": False,
            "violated_constraint": members,
            "violated_constraint_labels": [_describe(code, i) for i in members],
        }
    if args.json:
        print(json.dumps(out, indent=2))
    elif verdict:
        print("realizable; witness: %s" % out["witness"])
    else:
        print("not a syndrome; it meets this constraint an odd number of times:")
        print("  " + " ".join(out["violated_constraint_labels"]))
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_continuum(args) -> int:
    gs = ct.builtin_continuum(args.family)
    if args.perturb == "bulmash":
        gs = ct.bulmash_perturbation(gs)
    if args.what == "phi":
        if args.json:
            print(json.dumps(ct.matrix_to_json(gs.phi), indent=2))
        else:
            print(ct.format_matrix(gs.phi, gs.var_labels))
        return EXIT_OK
    if args.what == "maxwell":
        print(ct.maxwell_json(gs) if args.json else ct.format_maxwell(gs))
        return EXIT_OK
    results = []
    if gs.sectors is not None:
        sc = ct.is_symplectic(gs)
        results.append({"name": "symplectic", "ok": sc.ok, "residual": "" if sc.ok else repr(sc.residual)})
    for r in ct.conservation_identities(gs):
        results.append({"name": r.name, "ok": r.ok, "residual": r.residual})
    ok = all(r["ok"] for r in results)
    if args.json:
        print(json.dumps({"family": gs.name, "ok": ok, "checks": results}, indent=2))
    else:
        for r in results:
            print("%-6s %s%s" % ("ok" if r["ok"] else "FAILED", r["name"], "" if r["ok"] else "  residual: " + r["residual"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_nm(args) -> int:
    if args.L < 2:
        raise UsageError("--L must be at least 2")
    if args.what == "count":
        n = nm.count_solutions(args.L)
        print(json.dumps({"L": args.L, "solutions": n}) if args.json else n)
        return EXIT_OK
    if args.what == "enumerate":
        patterns = nm.enumerate_solutions(args.L)
        if args.json:
            print(nm.patterns_json(patterns))
        else:
            for n, p in enumerate(patterns):
                print("pattern %d" % n)
                print(nm.render_pattern(p))
                print()
            print("translation closed: %s" % nm.translation_closed(patterns))
        return EXIT_OK
    summary = nm.lift_all(args.L)
    if args.json:
        print(json.dumps(summary.to_json(), indent=2))
    else:
        print("lifted %d of %d sector patterns to verified constraints of Haah L=%d"
              % (summary.n_verified, summary.n_patterns, summary.L_prime))
        print("lifted span %d, dim ker phi %d, not captured by the ansatz %d"
              % (summary.lifted_dim, summary.dim_ker_phi, summary.gap))
    return EXIT_OK if summary.n_verified == summary.n_patterns else EXIT_FAIL


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code", choices=FAMILIES)
    p.add_argument("--L", type=int)
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--file", help="code description JSON (gaugecodes/code@1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaugecodes", description="Linear gauge structures of stabilizer codes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="constraint, logical and boundary analysis of a code")
    _add_code_args(p)
    p.add_argument("--distance-max-weight", type=int, default=None)
    p.add_argument("--trials", type=int, default=20, help="random Brule round trips (0 disables)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("syndrome", help="realize a set of excited stabilizers or name a violated constraint")
    _add_code_args(p)
    p.add_argument("--J", default="", help="comma separated stabilizer indices")
    p.set_defaults(func=cmd_syndrome)

    p = sub.add_parser("continuum", help="continuum operator matrices")
    p.add_argument("family", choices=ct.CONTINUUM_FAMILIES)
    p.add_argument("what", choices=("phi", "maxwell", "check"))
    p.add_argument("--perturb", choices=("bulmash",), default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_continuum)

    p = sub.add_parser("nm", help="coupled Newman-Moore layers of Haah's code")
    p.add_argument("what", choices=("count", "enumerate", "lift"))
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_nm)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, InvalidCode, BoundaryError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
