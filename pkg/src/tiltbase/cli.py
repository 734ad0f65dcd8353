"""Command-line front end.

Commands: check (validate a document), tilting (decide classical
n-tilting for a named module), basechange (main-theorem consistency plus
every applicable comparison lemma), corpus (list or replay the built-in
examples).  Exit codes: 0 pass, 1 substantive failure, 2
precondition/validation failure, 3 input error, 4 inconclusive.

Reports embed a digest of the input text and contain no timestamps, so
identical inputs produce byte-identical machine reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from . import __version__
from .algebra import AlgModule
from .basechange import (
    check_ext_localization_iso,
    check_ext_quotient_iso,
    check_pd_max_formula,
    check_self_orthogonality_descent,
)
from .corpus import corpus_entries, run_entry
from .docio import (
    AlgebraDocument,
    DocParseError,
    DocValidationError,
    parse_document,
    validate_document,
)
from .fgmod import FgModule
from .tilting import check_main_theorem, is_classical_tilting, verify_coresolution

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INPUT = 3
EXIT_UNKNOWN = 4


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _report(command: str, digest: str, checks: list, overall: str) -> dict:
    return {
        "tool": "tiltbase",
        "version": __version__,
        "command": command,
        "input_digest": digest,
        "checks": checks,
        "overall": overall,
    }


def _render_human(report: dict) -> str:
    lines = [
        f"tiltbase {report['version']} - {report['command']}",
        f"input digest: {report['input_digest']}",
    ]
    for check in report["checks"]:
        lines.extend(_render_check(check))
    lines.append(f"overall: {report['overall']}")
    return "\n".join(lines) + "\n"


def _render_check(check: dict, indent: str = "  ") -> list[str]:
    lines = []
    name = check.get("name") or check.get("lemma") or check.get("label") or "check"
    if "consistent" in check:
        if not check.get("applicable", True):
            lines.append(f"{indent}{name}: inapplicable  {check.get('reason', '')}".rstrip())
            return lines
        status = "consistent" if check["consistent"] else "INCONSISTENT"
        if check.get("unknown"):
            status += " (some leg undecided)"
        lines.append(f"{indent}{name}: {status}")
        for label in ("upstairs", "quotient", "localized"):
            leg = check.get(label)
            if leg:
                lines.append(f"{indent}  {label}: {leg['overall']} (n = {leg.get('n_used')})")
        for label in ("end_quotient_iso", "end_localized_iso"):
            iso = check.get(label)
            if iso:
                lines.append(f"{indent}  {label.replace('_', '-')}: {iso['verdict']}")
        for label in ("direction_i", "direction_ii"):
            d = check.get(label)
            if d:
                lines.append(f"{indent}  {d['name']}: {d['status']}  {d['detail']}")
    elif "verdict" in check:
        lines.append(f"{indent}{name}: {check['verdict']}  {check.get('detail', '')}".rstrip())
        if check.get("lhs") or check.get("rhs"):
            lines.append(f"{indent}  lhs: {', '.join(check.get('lhs', []))}")
            lines.append(f"{indent}  rhs: {', '.join(check.get('rhs', []))}")
    elif "overall" in check:
        lines.append(f"{indent}{name}: {check['overall']}")
        for cond in check.get("conditions", []):
            lines.append(f"{indent}  {cond['name']}: {cond['status']}  {cond['detail']}".rstrip())
        if check.get("coresolution"):
            lines.append(f"{indent}  coresolution: {check['coresolution']}")
    elif "ok" in check:
        status = "ok" if check["ok"] else "FAIL"
        lines.append(
            f"{indent}{name}: {status}  expected {check.get('expected')} got {check.get('actual')}"
        )
    else:
        lines.append(f"{indent}{name}: {json.dumps(check, sort_keys=True)}")
    return lines


def _emit(report: dict, machine: bool, out: Optional[str]) -> None:
    if machine:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_human(report)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        return None, None, EXIT_INPUT
    try:
        doc = parse_document(text)
    except DocParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return None, text, EXIT_INPUT
    except DocValidationError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return None, text, EXIT_INVALID
    return doc, text, EXIT_PASS


def cmd_check(args) -> int:
    doc, text, code = _load_document(args.path)
    if doc is None:
        return code
    problems = validate_document(doc)
    checks = [{"name": "structure", "verdict": "ok" if not problems else "invalid",
               "detail": "; ".join(problems)}]
    cert_problems: list[str] = []
    for name, (target, cert) in doc.coresolutions.items():
        ok, why = verify_coresolution(doc.algebra, doc.modules[target], cert)
        checks.append(
            {"name": f"coresolution {name}", "verdict": "ok" if ok else "invalid",
             "detail": "; ".join(why)}
        )
        if not ok:
            cert_problems.extend(why)
    overall = "pass" if not problems and not cert_problems else "invalid"
    _emit(_report("check", _digest(text), checks, overall), args.machine, args.out)
    if problems or cert_problems:
        for p in problems + cert_problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_PASS


def cmd_tilting(args) -> int:
    doc, text, code = _load_document(args.path)
    if doc is None:
        return code
    if args.module not in doc.modules:
        print(f"error: module {args.module!r} not found", file=sys.stderr)
        return EXIT_INPUT
    rep = is_classical_tilting(
        doc.algebra,
        doc.modules[args.module],
        n=args.n,
        n_max=args.n_max,
        max_len=args.max_len,
        max_width=args.max_width,
    )
    d = rep.to_dict()
    d["name"] = f"tilting {args.module}"
    overall = {"yes": "pass", "no": "fail", "unknown": "inconclusive"}[rep.overall]
    _emit(_report("tilting", _digest(text), [d], overall), args.machine, args.out)
    return {"yes": EXIT_PASS, "no": EXIT_FAIL, "unknown": EXIT_UNKNOWN}[rep.overall]


def _xkilled_quotient(m: AlgModule, x) -> AlgModule:
    """M/xM with its original algebra structure (for the x-killed N slot)."""
    xact = m.action_of(x.coords)
    rel = m.underlying.relations.hstack(xact)
    return AlgModule(m.algebra, FgModule(m.base, m.gens, rel), m.actions)


def cmd_basechange(args) -> int:
    doc, text, code = _load_document(args.path)
    if doc is None:
        return code
    if args.module not in doc.modules:
        print(f"error: module {args.module!r} not found", file=sys.stderr)
        return EXIT_INPUT
    if args.central not in doc.centrals:
        print(f"error: central element {args.central!r} not found", file=sys.stderr)
        return EXIT_INPUT
    alg = doc.algebra
    t = doc.modules[args.module]
    x = doc.centrals[args.central]
    main = check_main_theorem(alg, t, x, n=args.n, n_max=args.n_max)
    checks: list[dict] = []
    main_d = main.to_dict()
    main_d["name"] = f"main-theorem {args.module} at {args.central}"
    checks.append(main_d)
    if not main.applicable:
        checks[-1]["verdict"] = "inapplicable"
        _emit(_report("basechange", _digest(text), checks, "inapplicable"), args.machine, args.out)
        return EXIT_INVALID
    lemma_reports = [
        check_ext_quotient_iso(alg, x, t, _xkilled_quotient(t, x), args.i_max),
        check_ext_localization_iso(alg, x, t, t, args.i_max),
        check_self_orthogonality_descent(alg, x, t, t, max(args.n or 1, 1)),
        check_pd_max_formula(alg, x, t, args.n_max),
        main.end_quotient_iso,
        main.end_localized_iso,
    ]
    checks.extend(r.to_dict() for r in lemma_reports)
    any_fail = (not main.consistent) or any(r.verdict == "fails" for r in lemma_reports)
    any_unknown = main.unknown
    overall = "fail" if any_fail else ("inconclusive" if any_unknown else "pass")
    _emit(_report("basechange", _digest(text), checks, overall), args.machine, args.out)
    if any_fail:
        return EXIT_FAIL
    if any_unknown:
        return EXIT_UNKNOWN
    return EXIT_PASS


def cmd_corpus(args) -> int:
    entries = corpus_entries()
    if args.list:
        for name in entries:
            print(name)
        return EXIT_PASS
    target = args.run or "all"
    if target != "all" and target not in entries:
        print(f"error: unknown corpus entry {target!r}", file=sys.stderr)
        return EXIT_INPUT
    selected = list(entries.values()) if target == "all" else [entries[target]]
    selected.sort(key=lambda e: e.name)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_entry, selected))
    else:
        results = [run_entry(e) for e in selected]
    checks = []
    all_ok = True
    for entry, res in zip(selected, results):
        for r in res:
            d = r.to_dict()
            d["name"] = f"{entry.name}: {r.label}"
            checks.append(d)
            all_ok = all_ok and r.ok
    digest = _digest("".join(e.text for e in selected))
    overall = "pass" if all_ok else "fail"
    _emit(_report("corpus", digest, checks, overall), args.machine, args.out)
    return EXIT_PASS if all_ok else EXIT_FAIL


def _add_common(p):
    p.add_argument("--machine", action="store_true", help="emit the machine-readable JSON report")
    p.add_argument("--out", metavar="PATH", default=None, help="write the report to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltbase",
        description="verify tilting-module base change over finite-rank integer algebras",
    )
    parser.add_argument("--version", action="version", version=f"tiltbase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate an algebra document")
    p.add_argument("path")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tilting", help="decide classical n-tilting for a named module")
    p.add_argument("path")
    p.add_argument("module")
    p.add_argument("--n", type=int, default=None, help="tilting degree (searched when omitted)")
    p.add_argument("--n-max", type=int, default=6, help="bound for the degree search")
    p.add_argument("--max-len", type=int, default=None, help="coresolution search length bound")
    p.add_argument("--max-width", type=int, default=None, help="add(T) certificate width bound")
    _add_common(p)
    p.set_defaults(func=cmd_tilting)

    p = sub.add_parser("basechange", help="main-theorem consistency at a central element")
    p.add_argument("path")
    p.add_argument("module")
    p.add_argument("central")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--i-max", type=int, default=4, help="Ext comparison degree bound")
    _add_common(p)
    p.set_defaults(func=cmd_basechange)

    p = sub.add_parser("corpus", help="list or replay the built-in example corpus")
    p.add_argument("--list", action="store_true", help="print corpus entry names")
    p.add_argument("--run", metavar="NAME", default=None, help="entry name or 'all'")
    p.add_argument("--jobs", type=int, default=1, help="run corpus entries concurrently")
    _add_common(p)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
