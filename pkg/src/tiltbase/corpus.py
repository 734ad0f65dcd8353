"""Built-in example corpus.

Four algebras exercise the whole pipeline: the integers (rank 1), the
group ring of the order-2 group, the dual numbers (a negative tilting
instance with periodic syzygies), and the lower-triangular 2x2 integer
matrix algebra (a genuine 1-tilting instance).  Each entry is an ordinary
algebra document plus a list of expected check outcomes; the corpus
runner replays the checks and compares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .basechange import (
    check_end_localized_iso,
    check_end_mod_x_iso,
    check_ext_localization_iso,
    check_ext_quotient_iso,
    check_pd_max_formula,
    check_self_orthogonality_descent,
    check_zerox,
)
from .docio import AlgebraDocument, parse_document
from .fgmod import FgModule
from .rings import ZZ
from .tilting import check_main_theorem, is_classical_tilting, verify_coresolution

INTEGERS_DOC = """\
# the integers as a rank-1 algebra
base Z
algebra rank 1
unit 1
mult 1 1 : 1
central two 2
central three 3
module Z gens 1
action 1
1
end
module Z2free gens 2
action 1
1 0
0 1
end
module ZplusZ2 gens 2
relations 1
0
2
end
action 1
1 0
0 1
end
module Zmod2 gens 1
relations 1
2
end
action 1
1
end
module Zmod3 gens 1
relations 1
3
end
action 1
1
end
module Zmod4 gens 1
relations 1
4
end
action 1
1
end
"""

GROUP_RING_C2_DOC = """\
# group ring of the cyclic group of order 2: generators 1, g with g*g = 1
base Z
algebra rank 2
unit 1 0
mult 1 1 : 1 0
mult 1 2 : 0 1
mult 2 1 : 0 1
mult 2 2 : 1 0
central two 2 0
central three 3 0
module reg gens 2
action 1
1 0
0 1
end
action 2
0 1
1 0
end
module Ztriv gens 1
action 1
1
end
action 2
1
end
module Zsign gens 1
action 1
1
end
action 2
-1
end
module F2triv gens 1
relations 1
2
end
action 1
1
end
action 2
1
end
"""

DUAL_NUMBERS_DOC = """\
# dual numbers: generators 1, e with e*e = 0
base Z
algebra rank 2
unit 1 0
mult 1 1 : 1 0
mult 1 2 : 0 1
mult 2 1 : 0 1
mult 2 2 : 0 0
central two 2 0
central three 3 0
module reg gens 2
action 1
1 0
0 1
end
action 2
0 0
1 0
end
module Zres gens 1
action 1
1
end
action 2
0
end
# reg + Zres: the negative tilting candidate
module Tneg gens 3
action 1
1 0 0
0 1 0
0 0 1
end
action 2
0 0 0
1 0 0
0 0 0
end
module F2eps gens 2
relations 2
2 0
0 2
end
action 1
1 0
0 1
end
action 2
0 0
1 0
end
"""

TRIANGULAR_DOC = """\
# lower-triangular 2x2 integer matrices: generators e11, e21, e22
base Z
algebra rank 3
unit 1 0 1
mult 1 1 : 1 0 0
mult 1 2 : 0 0 0
mult 1 3 : 0 0 0
mult 2 1 : 0 1 0
mult 2 2 : 0 0 0
mult 2 3 : 0 0 0
mult 3 1 : 0 0 0
mult 3 2 : 0 1 0
mult 3 3 : 0 0 1
central two 2 0 2
central three 3 0 3
module reg gens 3
action 1
1 0 0
0 0 0
0 0 0
end
action 2
0 0 0
1 0 0
0 0 0
end
action 3
0 0 0
0 1 0
0 0 1
end
# the big projective: columns (u, v) with e11 (u,0), e21 (0,u), e22 (0,v)
module Pa gens 2
action 1
1 0
0 0
end
action 2
0 0
1 0
end
action 3
0 0
0 1
end
module Pb gens 1
action 1
0
end
action 2
0
end
action 3
1
end
module Sa gens 1
action 1
1
end
action 2
0
end
action 3
0
end
# T = Pa + Sa, the 1-tilting module
module T gens 3
action 1
1 0 0
0 0 0
0 0 1
end
action 2
0 0 0
1 0 0
0 0 0
end
action 3
0 0 0
0 1 0
0 0 0
end
module Pa2 gens 4
action 1
1 0 0 0
0 0 0 0
0 0 1 0
0 0 0 0
end
action 2
0 0 0 0
1 0 0 0
0 0 0 0
0 0 1 0
end
action 3
0 0 0 0
0 1 0 0
0 0 0 0
0 0 0 1
end
# T/2T viewed as a module over the algebra itself
module Tbar gens 3
relations 3
2 0 0
0 2 0
0 0 2
end
action 1
1 0 0
0 0 0
0 0 1
end
action 2
0 0 0
1 0 0
0 0 0
end
action 3
0 0 0
0 1 0
0 0 0
end
# hand-built add(T)-coresolution 0 -> reg -> Pa2 -> Sa -> 0
coresolution C for T
term Pa2
map
1 0 0
0 1 0
0 0 0
0 0 1
end
embed 2
1 0 0 0
0 1 0 0
0 0 0 0
0 0 1 0
0 0 0 1
0 0 0 0
end
retract
1 0 0 0 0 0
0 1 0 0 0 0
0 0 0 1 0 0
0 0 0 0 1 0
end
term Sa
map
0 0 1 0
end
embed 1
0
0
1
end
retract
0 0 1
end
end coresolution
"""


@dataclass
class Check:
    kind: str
    args: tuple
    expected: dict

    def label(self) -> str:
        inner = ", ".join(str(a) for a in self.args)
        return f"{self.kind}({inner})"


@dataclass
class CorpusEntry:
    name: str
    text: str
    checks: list[Check]
    pair_modules: list[str]

    def document(self) -> AlgebraDocument:
        return parse_document(self.text)


def _entry_integers() -> CorpusEntry:
    checks = [
        Check("tilting", ("Z", 0), {"overall": "yes"}),
        Check("tilting", ("Z2free", 0), {"overall": "yes"}),
        Check("tilting", ("ZplusZ2", 1), {"overall": "no"}),
        Check(
            "main",
            ("Z", "two", 0),
            {
                "consistent": True,
                "upstairs": "yes",
                "quotient": "yes",
                "localized": "yes",
                "end_quotient_iso": "holds",
                "end_localized_iso": "holds",
            },
        ),
        Check(
            "main",
            ("Z2free", "two", 0),
            {"consistent": True, "upstairs": "yes", "quotient": "yes", "localized": "yes"},
        ),
        Check("ext_quotient", ("Z", "Zmod2", "two", 2), {"verdict": "holds"}),
        Check("ext_quotient", ("Z2free", "Zmod2", "two", 2), {"verdict": "holds"}),
        Check("ext_localization", ("Zmod3", "Zmod3", "two", 2), {"verdict": "holds"}),
        Check("ext_localization", ("Zmod3", "Zmod3", "three", 2), {"verdict": "holds"}),
        Check("end_mod_x", ("Z", "two"), {"verdict": "holds"}),
        Check("end_mod_x", ("Z2free", "two"), {"verdict": "holds"}),
        Check("end_mod_x", ("ZplusZ2", "two"), {"verdict": "inapplicable"}),
        Check("end_localized", ("Z2free", "two"), {"verdict": "holds"}),
        Check("selforth", ("Z", "Z", "two", 1), {"verdict": "holds", "vacuous": False}),
        Check("pdmax", ("Z", "two", 6), {"verdict": "holds"}),
        Check("pdmax", ("Zmod3", "two", 6), {"verdict": "holds"}),
        Check("zerox", ((), 2), {"verdict": "holds"}),
        Check("zerox", ((4,), 2), {"verdict": "holds"}),
        Check("zerox", ((3,), 2), {"verdict": "holds"}),
    ]
    return CorpusEntry(
        "integers", INTEGERS_DOC, checks, ["Z", "ZplusZ2", "Zmod2", "Zmod3", "Zmod4"]
    )


def _entry_group_ring_c2() -> CorpusEntry:
    checks = [
        Check("tilting", ("reg", 0), {"overall": "yes"}),
        Check("tilting", ("Ztriv", 1), {"overall": "no"}),
        Check(
            "main",
            ("reg", "two", 0),
            {
                "consistent": True,
                "upstairs": "yes",
                "quotient": "yes",
                "localized": "yes",
                "end_quotient_iso": "holds",
                "end_localized_iso": "holds",
            },
        ),
        Check("ext_quotient", ("Ztriv", "F2triv", "two", 3), {"verdict": "holds"}),
        Check("ext_localization", ("Ztriv", "Ztriv", "two", 3), {"verdict": "holds"}),
        Check("end_mod_x", ("reg", "two"), {"verdict": "holds"}),
        Check("selforth", ("Ztriv", "Ztriv", "two", 2), {"verdict": "holds", "vacuous": True}),
        Check("selforth", ("reg", "reg", "two", 1), {"verdict": "holds", "vacuous": False}),
        Check("pdmax", ("reg", "two", 6), {"verdict": "holds"}),
        Check("pdmax", ("Ztriv", "two", 4), {"verdict": "holds"}),
    ]
    return CorpusEntry(
        "group-ring-c2", GROUP_RING_C2_DOC, checks, ["reg", "Ztriv", "Zsign", "F2triv"]
    )


def _entry_dual_numbers() -> CorpusEntry:
    checks = [
        Check("tilting", ("reg", 0), {"overall": "yes"}),
        Check("tilting", ("Tneg", 2), {"overall": "no"}),
        Check(
            "main",
            ("Tneg", "two", 2),
            {
                "consistent": True,
                "upstairs": "no",
                "quotient": "no",
                "localized": "no",
                "end_quotient_iso": "inapplicable",
            },
        ),
        Check("ext_quotient", ("reg", "F2eps", "two", 2), {"verdict": "holds"}),
        Check("ext_localization", ("Zres", "Zres", "two", 4), {"verdict": "holds"}),
        Check("pdmax", ("reg", "two", 6), {"verdict": "holds"}),
        Check("selforth", ("Zres", "Zres", "two", 1), {"verdict": "holds", "vacuous": True}),
    ]
    return CorpusEntry(
        "dual-numbers", DUAL_NUMBERS_DOC, checks, ["reg", "Zres", "Tneg", "F2eps"]
    )


def _entry_triangular() -> CorpusEntry:
    checks = [
        Check("tilting", ("T", 1), {"overall": "yes"}),
        Check("tilting", ("reg", 0), {"overall": "yes"}),
        Check(
            "main",
            ("T", "two", 1),
            {
                "consistent": True,
                "upstairs": "yes",
                "quotient": "yes",
                "localized": "yes",
                "end_quotient_iso": "holds",
                "end_localized_iso": "holds",
            },
        ),
        Check("coresolution", ("C",), {"ok": True}),
        Check("ext_quotient", ("T", "Tbar", "two", 3), {"verdict": "holds"}),
        Check("ext_localization", ("T", "T", "two", 3), {"verdict": "holds"}),
        Check("ext_localization", ("Sa", "Sa", "three", 3), {"verdict": "holds"}),
        Check("end_mod_x", ("T", "two"), {"verdict": "holds"}),
        Check("end_localized", ("T", "two"), {"verdict": "holds"}),
        Check("selforth", ("Sa", "T", "two", 1), {"verdict": "holds", "vacuous": False}),
        Check("pdmax", ("Sa", "two", 6), {"verdict": "holds"}),
        Check("pdmax", ("T", "two", 6), {"verdict": "holds"}),
    ]
    return CorpusEntry(
        "triangular", TRIANGULAR_DOC, checks, ["reg", "Sa", "T"]
    )


def corpus_entries() -> dict[str, CorpusEntry]:
    entries = [
        _entry_dual_numbers(),
        _entry_group_ring_c2(),
        _entry_integers(),
        _entry_triangular(),
    ]
    return {e.name: e for e in sorted(entries, key=lambda e: e.name)}


@dataclass
class CheckResult:
    label: str
    expected: dict
    actual: dict
    ok: bool
    detail: str = ""

    def to_dict(self):
        return {
            "label": self.label,
            "expected": self.expected,
            "actual": self.actual,
            "ok": self.ok,
            "detail": self.detail,
        }


def run_check(doc: AlgebraDocument, check: Check) -> CheckResult:
    alg = doc.algebra
    kind, args = check.kind, check.args
    if kind == "tilting":
        mod, n = args
        rep = is_classical_tilting(alg, doc.modules[mod], n=n)
        actual = {"overall": rep.overall}
        detail = "; ".join(f"{c.name}={c.status}" for c in rep.conditions)
    elif kind == "main":
        mod, central, n = args
        rep = check_main_theorem(alg, doc.modules[mod], doc.centrals[central], n=n)
        actual = {
            "consistent": rep.consistent,
            "upstairs": rep.upstairs.overall if rep.upstairs else None,
            "quotient": rep.quotient.overall if rep.quotient else None,
            "localized": rep.localized.overall if rep.localized else None,
            "end_quotient_iso": rep.end_quotient_iso.verdict if rep.end_quotient_iso else None,
            "end_localized_iso": rep.end_localized_iso.verdict if rep.end_localized_iso else None,
        }
        detail = f"direction i: {rep.direction_i.status}; direction ii: {rep.direction_ii.status}"
    elif kind == "ext_quotient":
        m, nmod, central, i_max = args
        rep = check_ext_quotient_iso(alg, doc.centrals[central], doc.modules[m], doc.modules[nmod], i_max)
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "ext_localization":
        m, nmod, central, i_max = args
        rep = check_ext_localization_iso(alg, doc.centrals[central], doc.modules[m], doc.modules[nmod], i_max)
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "end_mod_x":
        m, central = args
        rep = check_end_mod_x_iso(alg, doc.centrals[central], doc.modules[m])
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "end_localized":
        m, central = args
        rep = check_end_localized_iso(alg, doc.centrals[central], doc.modules[m])
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "selforth":
        m, t, central, n = args
        rep = check_self_orthogonality_descent(
            alg, doc.centrals[central], doc.modules[m], doc.modules[t], n
        )
        actual = {"verdict": rep.verdict, "vacuous": rep.vacuous}
        detail = rep.detail
    elif kind == "pdmax":
        m, central, n_max = args
        rep = check_pd_max_formula(alg, doc.centrals[central], doc.modules[m], n_max)
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "zerox":
        invariants, x = args
        rep = check_zerox(FgModule.from_invariants(ZZ, list(invariants)), x)
        actual = {"verdict": rep.verdict}
        detail = rep.detail
    elif kind == "coresolution":
        (name,) = args
        target, cert = doc.coresolutions[name]
        ok, problems = verify_coresolution(alg, doc.modules[target], cert)
        actual = {"ok": ok}
        detail = "; ".join(problems)
    else:
        raise ValueError(f"unknown corpus check kind {kind!r}")
    ok = all(actual.get(k) == v for k, v in check.expected.items())
    return CheckResult(check.label(), check.expected, actual, ok, detail)


def run_entry(entry: CorpusEntry) -> list[CheckResult]:
    doc = entry.document()
    return [run_check(doc, c) for c in entry.checks]
