"""Classical n-tilting decisions and the main base-change consistency check.

The decision route is the endomorphism-side characterization: bounded
projective dimension on both sides of the (Lambda, T, End^op) bimodule,
vanishing self-extensions on both sides, and bijectivity of the natural
map from Lambda into the double endomorphism ring.  A finite coresolution
of Lambda by add(T)-certified terms is searched for as a secondary
witness; its absence downgrades nothing (the characterization decides),
and exhaustion of the bounded search is reported as unknown rather than a
refutation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    Algebra,
    AlgModule,
    CentralElement,
    direct_sum,
    is_regular_on,
    localize_algebra,
    localize_module,
    matrix_in_span,
    quotient_algebra,
    quotient_module,
    regular_module,
)
from .basechange import LemmaReport, check_end_localized_iso, check_end_mod_x_iso
from .fgmod import FgModule, _identity_kron, render_invariants, vec
from .homology import (
    ModuleMap,
    end_algebra,
    express_in_hom_basis,
    ext,
    ext_range,
    hom_over_algebra,
    identity_map,
    is_split_surjection,
    pd_at_most,
)
from .matrix import Matrix
from . import smith


# -- add(T) certificates and coresolutions ------------------------------


@dataclass(frozen=True)
class AddCertificate:
    width: int
    embedding: ModuleMap   # C -> T^width
    retraction: ModuleMap  # T^width -> C


@dataclass(frozen=True)
class CoresolutionCertificate:
    algebra: Algebra
    tilt: AlgModule
    terms: tuple[AlgModule, ...]
    maps: tuple[ModuleMap, ...]  # maps[0]: Lambda -> T_0, maps[i]: T_{i-1} -> T_i
    addcerts: tuple[AddCertificate, ...]

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def _zero_module(alg: Algebra) -> AlgModule:
    base = alg.base
    under = FgModule(base, 0, Matrix.zeros(base, 0, 0))
    return AlgModule(alg, under, tuple(Matrix.zeros(base, 0, 0) for _ in range(alg.rank)))


def _power(t: AlgModule, k: int) -> AlgModule:
    if k == 0:
        return _zero_module(t.algebra)
    return direct_sum([t] * k)


def certify_add_membership(
    t: AlgModule, c: AlgModule, max_width: int, hom_ct=None
) -> Optional[AddCertificate]:
    """A section/retraction pair exhibiting C as a summand of T^k, or None.

    The retraction candidate is the tuple of all Hom(T, C) generators; any
    retraction factors through that tuple over the base, so it suffices to
    search for a section.  The section is likewise a combination of
    Hom(C, T) generators, which turns the bilinear splitting condition
    into one linear solve for the combination coefficients.
    """
    if c.is_zero():
        zero = _zero_module(t.algebra)
        emb = ModuleMap(c, zero, Matrix.zeros(c.base, 0, c.gens))
        ret = ModuleMap(zero, c, Matrix.zeros(c.base, c.gens, 0))
        return AddCertificate(0, emb, ret)
    base = c.base
    hom_tc = hom_over_algebra(t, c)
    p = len(hom_tc.maps)
    if p == 0 or p > max_width:
        return None
    if hom_ct is None:
        hom_ct = hom_over_algebra(c, t)
    q = len(hom_ct.maps)
    if q == 0:
        return None
    # sum_{i,j} z_ij (g_j . h_i) = id_C modulo the relation span of C
    products = []
    for j in range(p):
        for i in range(q):
            products.append(vec(hom_tc.maps[j] @ hom_ct.maps[i]).column_vector())
    eqs = Matrix.from_columns(base, products, c.gens * c.gens)
    rel_c = c.underlying.relations
    slack = _identity_kron(rel_c, c.gens)
    system = eqs.hstack(slack) if slack.cols else eqs
    target = vec(Matrix.identity(base, c.gens))
    sol = smith.solve(system, target)
    if sol is None:
        return None
    tp = _power(t, p)
    ret_mat = hom_tc.maps[0]
    for j in range(1, p):
        ret_mat = ret_mat.hstack(hom_tc.maps[j])
    ret = ModuleMap(tp, c, ret_mat)
    sec_blocks = []
    for j in range(p):
        block = Matrix.zeros(base, t.gens, c.gens)
        for i in range(q):
            z = sol.data[j * q + i][0]
            if not base.is_zero(z):
                block = block + hom_ct.maps[i].scale(z)
        sec_blocks.append(block)
    sec_mat = sec_blocks[0]
    for block in sec_blocks[1:]:
        sec_mat = sec_mat.vstack(block)
    emb = ModuleMap(c, tp, sec_mat)
    return AddCertificate(p, emb, ret)


def find_coresolution(
    alg: Algebra, t: AlgModule, max_len: int, max_width: int
) -> Optional[CoresolutionCertificate]:
    """Bounded search for an exact chain Lambda -> T_0 -> ... -> T_m in add(T).

    Each step embeds the running cokernel C into T^r by evaluating a
    generating set of Hom(C, T); failed injectivity or exhausted bounds
    return None (the caller reports unknown, not a refutation).
    """
    reg = regular_module(alg)
    terms: list[AlgModule] = []
    maps: list[ModuleMap] = []
    certs: list[AddCertificate] = []
    current = reg
    proj: Optional[ModuleMap] = None
    for _ in range(max_len + 1):
        hom = hom_over_algebra(current, t)
        cert = certify_add_membership(t, current, max_width, hom_ct=hom)
        if cert is not None:
            terms.append(current)
            certs.append(cert)
            maps.append(proj if proj is not None else identity_map(reg))
            return CoresolutionCertificate(alg, t, tuple(terms), tuple(maps), tuple(certs))
        r = len(hom.maps)
        if r == 0 or r > max_width:
            return None
        tr = _power(t, r)
        ev_mat = hom.maps[0]
        for j in range(1, r):
            ev_mat = ev_mat.vstack(hom.maps[j])
        ev = ModuleMap(current, tr, ev_mat)
        if not ev.is_injective():
            return None
        terms.append(tr)
        certs.append(AddCertificate(r, identity_map(tr), identity_map(tr)))
        maps.append(ev if proj is None else ModuleMap(proj.source, tr, ev_mat @ proj.matrix))
        coker_under = FgModule(tr.base, tr.gens, tr.underlying.relations.hstack(ev_mat))
        cnew = AlgModule(alg, coker_under, tr.actions)
        proj = ModuleMap(tr, cnew, Matrix.identity(tr.base, tr.gens))
        current = cnew
    return None


def verify_coresolution(
    alg: Algebra, t: AlgModule, cert: CoresolutionCertificate
) -> tuple[bool, list[str]]:
    """Check exactness at every spot and validity of every add-certificate."""
    problems: list[str] = []
    if not cert.terms:
        return False, ["certificate has no terms"]
    if len(cert.maps) != len(cert.terms) or len(cert.addcerts) != len(cert.terms):
        return False, ["certificate arity mismatch (terms/maps/addcerts)"]
    reg = regular_module(alg)
    if cert.maps[0].source != reg:
        problems.append("first map does not start at the regular module")
    for i, mp in enumerate(cert.maps):
        if not mp.is_valid():
            problems.append(f"map {i} is not a module homomorphism")
    for i, ac in enumerate(cert.addcerts):
        expected = _power(t, ac.width)
        if ac.embedding.target != expected or ac.retraction.source != expected:
            problems.append(f"add-certificate {i} does not pass through T^{ac.width}")
            continue
        if ac.embedding.source != cert.terms[i] or ac.retraction.target != cert.terms[i]:
            problems.append(f"add-certificate {i} is attached to the wrong term")
            continue
        if not ac.embedding.is_valid() or not ac.retraction.is_valid():
            problems.append(f"add-certificate {i} maps are not module homomorphisms")
            continue
        composite = ac.retraction.compose(ac.embedding)
        if not composite.equals(identity_map(cert.terms[i])):
            problems.append(f"add-certificate {i}: retraction . embedding is not the identity")
    # exactness of 0 -> Lambda -> T_0 -> ... -> T_m -> 0
    if not cert.maps[0].is_injective():
        problems.append("chain is not exact at the regular module (leftmost map not injective)")
    for i in range(len(cert.maps) - 1):
        nxt, cur = cert.maps[i + 1], cert.maps[i]
        rel = nxt.target.underlying.relations
        if not matrix_in_span(rel, nxt.matrix @ cur.matrix):
            problems.append(f"maps {i} and {i + 1} do not compose to zero")
            continue
        ker = smith.kernel_through(nxt.matrix, nxt.source.underlying.relations)
        image_span = cur.matrix.hstack(nxt.source.underlying.relations)
        if not matrix_in_span(image_span, ker):
            problems.append(f"chain is not exact at term {i}")
    if not cert.maps[-1].is_surjective():
        problems.append(f"last map is not surjective onto term {len(cert.terms) - 1}")
    return not problems, problems


# -- the characterization ------------------------------------------------


@dataclass
class ConditionVerdict:
    name: str
    status: str  # "yes" | "no" | "unknown" | "skipped"
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class TiltingReport:
    n_requested: Optional[int]
    n_used: Optional[int]
    overall: str  # "yes" | "no" | "unknown"
    conditions: list[ConditionVerdict] = field(default_factory=list)
    coresolution: str = "skipped"
    coresolution_certificate: Optional[CoresolutionCertificate] = None

    @property
    def is_yes(self) -> bool:
        return self.overall == "yes"

    def condition(self, name: str) -> Optional[ConditionVerdict]:
        for c in self.conditions:
            if c.name == name:
                return c
        return None

    def to_dict(self):
        return {
            "n_requested": self.n_requested,
            "n_used": self.n_used,
            "overall": self.overall,
            "conditions": [c.to_dict() for c in self.conditions],
            "coresolution": self.coresolution,
        }


def is_classical_tilting(
    alg: Algebra,
    t: AlgModule,
    n: Optional[int] = None,
    n_max: int = 6,
    max_len: Optional[int] = None,
    max_width: Optional[int] = None,
) -> TiltingReport:
    """Decide classical n-tilting through the three-condition characterization.

    With an explicit n the outcome is a definite yes/no; with n = None the
    projective dimensions are searched within n_max and exhaustion yields
    an unknown verdict (T may be tilting for some larger n).
    """
    bound = n if n is not None else n_max
    conditions: list[ConditionVerdict] = []

    def skipped(reason: str, names: list[str]):
        for name in names:
            conditions.append(ConditionVerdict(name, "skipped", reason))

    report = TiltingReport(n, None, "unknown", conditions)

    pd_lam = pd_at_most(t, bound)
    if pd_lam.decided:
        conditions.append(ConditionVerdict("pd-over-algebra", "yes", str(pd_lam)))
    else:
        status = "no" if n is not None else "unknown"
        detail = f"pd > {bound} within the bound"
        conditions.append(ConditionVerdict("pd-over-algebra", status, detail))
        skipped(
            "decided by the projective-dimension verdict over the algebra",
            ["self-orthogonality-algebra", "pd-over-tilted-ring",
             "self-orthogonality-tilted-ring", "bicommutant"],
        )
        report.overall = "no" if n is not None else "unknown"
        return report

    n_eff = n if n is not None else pd_lam.value
    degrees = list(range(1, max(n_eff, pd_lam.value) + 2))
    exts = ext_range(t, t, degrees)
    bad = next((i for i in degrees if not exts[i].is_zero()), None)
    if bad is not None:
        conditions.append(
            ConditionVerdict(
                "self-orthogonality-algebra",
                "no",
                f"Ext^{bad}(T, T) = {exts[bad].group.render()} over the algebra",
            )
        )
        skipped(
            "decided by the self-extension witness",
            ["pd-over-tilted-ring", "self-orthogonality-tilted-ring", "bicommutant"],
        )
        report.overall = "no"
        return report
    conditions.append(
        ConditionVerdict(
            "self-orthogonality-algebra",
            "yes",
            f"Ext^i(T, T) = 0 for 1 <= i <= {degrees[-1]}",
        )
    )

    end = end_algebra(t)
    pd_gop = pd_at_most(end.module, bound)
    if pd_gop.decided:
        conditions.append(ConditionVerdict("pd-over-tilted-ring", "yes", str(pd_gop)))
    else:
        status = "no" if n is not None else "unknown"
        conditions.append(
            ConditionVerdict("pd-over-tilted-ring", status, f"pd > {bound} within the bound over the tilted ring")
        )
        skipped(
            "decided by the tilted-ring projective dimension",
            ["self-orthogonality-tilted-ring", "bicommutant"],
        )
        report.overall = "no" if n is not None else "unknown"
        return report

    gop_degrees = list(range(1, max(n_eff, pd_gop.value) + 2))
    gop_exts = ext_range(end.module, end.module, gop_degrees)
    bad = next((i for i in gop_degrees if not gop_exts[i].is_zero()), None)
    if bad is not None:
        conditions.append(
            ConditionVerdict(
                "self-orthogonality-tilted-ring",
                "no",
                f"Ext^{bad}(T, T) = {gop_exts[bad].group.render()} over the tilted ring",
            )
        )
        skipped("decided by the tilted-ring self-extension witness", ["bicommutant"])
        report.overall = "no"
        return report
    conditions.append(
        ConditionVerdict(
            "self-orthogonality-tilted-ring",
            "yes",
            f"Ext^i(T, T) = 0 for 1 <= i <= {gop_degrees[-1]}",
        )
    )

    rho_ok, rho_detail = _bicommutant_check(alg, t, end)
    conditions.append(ConditionVerdict("bicommutant", "yes" if rho_ok else "no", rho_detail))
    if not rho_ok:
        report.overall = "no"
        return report

    n_used = max(pd_lam.value, pd_gop.value)
    report.n_used = n_used
    report.overall = "yes"

    if max_len is None:
        max_len = n_used + 2
    if max_width is None:
        max_width = max(4 * t.gens, 1)
    cert = find_coresolution(alg, t, max_len, max_width)
    if cert is None:
        report.coresolution = "exhausted"
    else:
        ok, problems = verify_coresolution(alg, t, cert)
        report.coresolution = f"found(length={cert.length})" if ok else f"invalid: {problems}"
        report.coresolution_certificate = cert
    return report


def _bicommutant_check(alg: Algebra, t: AlgModule, end) -> tuple[bool, str]:
    """Is the natural map Lambda -> End over the tilted ring bijective?"""
    h = hom_over_algebra(end.module, end.module)
    rel_t = t.underlying.relations
    cols = []
    for k in range(alg.rank):
        coords = express_in_hom_basis(h, rel_t, t.actions[k])
        if coords is None:
            return False, f"multiplication by generator {k} escapes the bicommutant basis"
        cols.append(coords.column_vector())
    base = alg.base
    phi = Matrix.from_columns(base, cols, len(h.maps))
    tgt_rel = h.presentation.relations
    ker = smith.kernel_through(phi, tgt_rel)
    if not matrix_in_span(alg.relations, ker):
        return False, "the natural map has a nonzero kernel"
    image = phi.hstack(tgt_rel)
    if not FgModule(base, len(h.maps), image).is_zero():
        coker = FgModule(base, len(h.maps), image)
        return False, f"the natural map is not surjective (cokernel {coker.render()})"
    return True, "the natural map to the double endomorphism ring is bijective"


# -- the main theorem -----------------------------------------------------


@dataclass
class MainTheoremReport:
    applicable: bool
    reason: str = ""
    n_requested: Optional[int] = None
    upstairs: Optional[TiltingReport] = None
    quotient: Optional[TiltingReport] = None
    localized: Optional[TiltingReport] = None
    end_quotient_iso: Optional[LemmaReport] = None
    end_localized_iso: Optional[LemmaReport] = None
    regular_on_algebra: Optional[bool] = None
    direction_i: Optional[ConditionVerdict] = None
    direction_ii: Optional[ConditionVerdict] = None
    consistent: bool = False
    unknown: bool = False

    def to_dict(self):
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "n_requested": self.n_requested,
            "upstairs": self.upstairs.to_dict() if self.upstairs else None,
            "quotient": self.quotient.to_dict() if self.quotient else None,
            "localized": self.localized.to_dict() if self.localized else None,
            "end_quotient_iso": self.end_quotient_iso.to_dict() if self.end_quotient_iso else None,
            "end_localized_iso": self.end_localized_iso.to_dict() if self.end_localized_iso else None,
            "regular_on_algebra": self.regular_on_algebra,
            "direction_i": self.direction_i.to_dict() if self.direction_i else None,
            "direction_ii": self.direction_ii.to_dict() if self.direction_ii else None,
            "consistent": self.consistent,
            "unknown": self.unknown,
        }


def check_main_theorem(
    alg: Algebra, t: AlgModule, x: CentralElement, n: Optional[int] = None, n_max: int = 6
) -> MainTheoremReport:
    """Run the tilting decision on (Lambda, T), (Lambda_x, T_x), (Lambda/x, T/xT)
    and assert both directions of the base-change theorem plus the
    tilted-ring identifications."""
    report = MainTheoremReport(True, n_requested=n)
    reg_t = is_regular_on(x, t)
    if not reg_t.is_regular:
        return MainTheoremReport(False, f"x is not regular on T ({reg_t.kind})", n_requested=n)
    reg_lam = is_regular_on(x, regular_module(alg))
    report.regular_on_algebra = reg_lam.is_regular

    report.upstairs = is_classical_tilting(alg, t, n=n, n_max=n_max)
    qalg = quotient_algebra(alg, x)
    report.quotient = is_classical_tilting(qalg, quotient_module(t, x, qalg), n=n, n_max=n_max)
    try:
        lalg = localize_algebra(alg, x)
    except ValueError as e:
        return MainTheoremReport(False, f"localization unavailable: {e}", n_requested=n)
    report.localized = is_classical_tilting(lalg, localize_module(t, x, lalg), n=n, n_max=n_max)

    report.end_quotient_iso = check_end_mod_x_iso(alg, x, t)
    report.end_localized_iso = check_end_localized_iso(alg, x, t)

    up, q, l = report.upstairs, report.quotient, report.localized
    violations: list[str] = []
    unknown = any(r.overall == "unknown" for r in (up, q, l))

    if up.is_yes:
        n0 = n if n is not None else up.n_used
        for label, leg in (("quotient", q), ("localized", l)):
            if leg.overall == "no" or (leg.is_yes and n is None and leg.n_used > n0):
                violations.append(f"direction (i): upstairs yes but the {label} leg is not {n0}-tilting")
            elif leg.overall == "unknown":
                violations.append(f"direction (i): the {label} leg is undecided")
        for label, iso in (("quotient", report.end_quotient_iso), ("localized", report.end_localized_iso)):
            if iso.verdict == "fails":
                violations.append(f"direction (i): tilted-ring identification fails on the {label} side")
        if not reg_lam.is_regular:
            violations.append("tilting forces x regular on the algebra, but it is not")
        status = "no" if violations else "yes"
        report.direction_i = ConditionVerdict(
            "direction-i", status, "; ".join(violations) or "base changes and identifications confirmed"
        )
    else:
        report.direction_i = ConditionVerdict(
            "direction-i", "yes", "vacuous: T is not tilting upstairs" if up.overall == "no" else "upstairs undecided"
        )

    if q.is_yes and l.is_yes:
        if not reg_lam.is_regular:
            report.direction_ii = ConditionVerdict(
                "direction-ii", "skipped", "hypothesis of direction (ii) fails: x not regular on the algebra"
            )
        elif up.overall == "no":
            violations.append("direction (ii): both base changes are tilting but T is not")
            report.direction_ii = ConditionVerdict("direction-ii", "no", "converse violated")
        elif up.overall == "unknown":
            report.direction_ii = ConditionVerdict("direction-ii", "unknown", "upstairs undecided")
        else:
            report.direction_ii = ConditionVerdict(
                "direction-ii", "yes", "upstairs verdict reproduced from the two base changes"
            )
    else:
        report.direction_ii = ConditionVerdict(
            "direction-ii", "yes", "vacuous: a base-changed leg is not tilting"
        )

    report.consistent = not violations
    report.unknown = unknown
    return report
