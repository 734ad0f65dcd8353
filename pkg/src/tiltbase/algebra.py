"""Finite-rank associative unital algebras and their modules.

An Algebra is an FgModule of generators e_1..e_g together with a
structure-constant table (the coordinates of each product e_i*e_j) and a
unit vector.  Everything downstream treats equality of algebra or module
elements modulo the relation span of the underlying presentation, so
algebras with non-free underlying modules (quotients like Z[C_2]/2 before
rebasing) work uniformly.

Left modules carry one base-linear action matrix per algebra generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .fgmod import FgModule, quotient_fg
from .matrix import Matrix, det
from .rings import BaseRing, Integers, IntegersLoc, IntegersMod, ZZ, radical
from . import smith


@dataclass(frozen=True)
class Algebra:
    base: BaseRing
    underlying: FgModule
    mult: tuple[tuple[tuple, ...], ...]
    one: tuple

    def __post_init__(self):
        g = self.underlying.gens
        if len(self.mult) != g or any(len(row) != g for row in self.mult):
            raise ValueError("structure-constant table has wrong shape")
        norm = self.base.normalize
        object.__setattr__(
            self,
            "mult",
            tuple(tuple(tuple(norm(c) for c in cell) for cell in row) for row in self.mult),
        )
        object.__setattr__(self, "one", tuple(norm(c) for c in self.one))
        if len(self.one) != g:
            raise ValueError("unit vector has wrong length")

    @property
    def rank(self) -> int:
        return self.underlying.gens

    @property
    def relations(self) -> Matrix:
        return self.underlying.relations

    def is_free(self) -> bool:
        return self.relations.cols == 0

    # -- element arithmetic -------------------------------------------
    def multiply(self, u: Sequence, v: Sequence) -> tuple:
        g = self.rank
        base = self.base
        out = [base.zero] * g
        for i in range(g):
            ui = u[i]
            if base.is_zero(ui):
                continue
            for j in range(g):
                c = base.mul(ui, v[j])
                if base.is_zero(c):
                    continue
                cell = self.mult[i][j]
                for k in range(g):
                    out[k] = base.add(out[k], base.mul(c, cell[k]))
        return tuple(out)

    def left_mult_matrix(self, coords: Sequence) -> Matrix:
        g = self.rank
        basis = Matrix.identity(self.base, g)
        cols = [self.multiply(coords, basis.col(j)) for j in range(g)]
        return Matrix.from_columns(self.base, cols, g)

    def right_mult_matrix(self, coords: Sequence) -> Matrix:
        g = self.rank
        basis = Matrix.identity(self.base, g)
        cols = [self.multiply(basis.col(j), coords) for j in range(g)]
        return Matrix.from_columns(self.base, cols, g)

    def scalar(self, n: int) -> tuple:
        base = self.base
        return tuple(base.mul(base.from_int(n), c) for c in self.one)

    def elements_equal(self, u: Sequence, v: Sequence) -> bool:
        diff = Matrix.column(self.base, [self.base.sub(a, b) for a, b in zip(u, v)])
        return self.underlying.contains(diff)


@dataclass(frozen=True)
class CentralElement:
    parent: Algebra
    coords: tuple

    def __post_init__(self):
        norm = self.parent.base.normalize
        object.__setattr__(self, "coords", tuple(norm(c) for c in self.coords))
        if len(self.coords) != self.parent.rank:
            raise ValueError("central element has wrong coordinate length")
        if not is_central(self.coords, self.parent):
            raise ValueError("element is not central")


def central_scalar(alg: Algebra, n: int) -> CentralElement:
    """The central element n*1."""
    return CentralElement(alg, alg.scalar(n))


@dataclass(frozen=True)
class AlgModule:
    algebra: Algebra
    underlying: FgModule
    actions: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.actions) != self.algebra.rank:
            raise ValueError("one action matrix per algebra generator is required")
        g = self.underlying.gens
        for a in self.actions:
            if a.shape != (g, g) or a.base != self.underlying.base:
                raise ValueError("action matrix of wrong shape or base")

    @property
    def base(self) -> BaseRing:
        return self.underlying.base

    @property
    def gens(self) -> int:
        return self.underlying.gens

    def action_of(self, coords: Sequence) -> Matrix:
        """Base-linear matrix of the algebra element with the given coordinates."""
        base = self.base
        out = Matrix.zeros(base, self.gens, self.gens)
        for t, c in enumerate(coords):
            if not base.is_zero(c):
                out = out + self.actions[t].scale(c)
        return out

    def is_zero(self) -> bool:
        return self.underlying.is_zero()


# -- validation ------------------------------------------------------


def matrix_in_span(rel: Matrix, mat: Matrix) -> bool:
    """Does every column of `mat` lie in the column span of `rel`?"""
    if mat.cols == 0:
        return True
    if rel.cols == 0:
        return mat.is_zero()
    return smith.solve_matrix(rel, mat) is not None


def maps_equal_mod(m1: Matrix, m2: Matrix, rel: Matrix) -> bool:
    return matrix_in_span(rel, m1 - m2)


def validate_algebra(alg: Algebra) -> list[str]:
    """Empty list when the algebra axioms hold; otherwise named violations."""
    problems = []
    g = alg.rank
    rel = alg.relations
    basis = Matrix.identity(alg.base, g)
    # relation compatibility: relation * generator stays in the relation span
    for c in range(rel.cols):
        r = rel.col(c)
        for t in range(g):
            e = basis.col(t)
            for label, prod in (("r*e", alg.multiply(r, e)), ("e*r", alg.multiply(e, r))):
                if not matrix_in_span(rel, Matrix.column(alg.base, prod)):
                    problems.append(f"relation {c} times generator {t} ({label}) escapes the relation span")
    # associativity on generator triples
    for i in range(g):
        for j in range(g):
            for k in range(g):
                lhs = alg.multiply(alg.mult[i][j], basis.col(k))
                rhs = alg.multiply(basis.col(i), alg.mult[j][k])
                if not alg.elements_equal(lhs, rhs):
                    problems.append(f"associativity fails on triple ({i}, {j}, {k})")
    # two-sided unit
    for t in range(g):
        e = basis.col(t)
        if not alg.elements_equal(alg.multiply(alg.one, e), e):
            problems.append(f"unit law fails on the left of generator {t}")
        if not alg.elements_equal(alg.multiply(e, alg.one), e):
            problems.append(f"unit law fails on the right of generator {t}")
    return problems


def is_central(coords: Sequence, alg: Algebra) -> bool:
    """True iff the element commutes with every generator modulo relations."""
    if len(coords) != alg.rank:
        raise ValueError("coordinate vector has wrong length")
    basis = Matrix.identity(alg.base, alg.rank)
    for t in range(alg.rank):
        e = basis.col(t)
        if not alg.elements_equal(alg.multiply(coords, e), alg.multiply(e, coords)):
            return False
    return True


def validate_module(m: AlgModule) -> list[str]:
    """Empty list when the module axioms hold; otherwise named violations."""
    problems = []
    alg = m.algebra
    rel = m.underlying.relations
    g = alg.rank
    for t, a in enumerate(m.actions):
        if rel.cols and not matrix_in_span(rel, a @ rel):
            problems.append(f"action of generator {t} does not preserve the relation span")
    for i in range(g):
        for j in range(g):
            composite = m.actions[i] @ m.actions[j]
            table = m.action_of(alg.mult[i][j])
            if not maps_equal_mod(composite, table, rel):
                problems.append(f"action incompatible with the product of generators ({i}, {j})")
    if not maps_equal_mod(m.action_of(alg.one), Matrix.identity(m.base, m.gens), rel):
        problems.append("unit does not act as the identity")
    arel = alg.relations
    for c in range(arel.cols):
        if not matrix_in_span(rel, m.action_of(arel.col(c))):
            problems.append(f"algebra relation {c} does not act as zero")
    return problems


# -- regularity ------------------------------------------------------


@dataclass(frozen=True)
class Regularity:
    kind: str  # "regular" | "zero_divisor" | "unit_like"
    witness: Optional[Matrix] = None

    @property
    def is_regular(self) -> bool:
        return self.kind == "regular"


def is_regular_on(x: CentralElement, m: AlgModule) -> Regularity:
    """Regular means the action of x is injective and not surjective on M."""
    xm = m.action_of(x.coords)
    rel = m.underlying.relations
    ker = smith.kernel_through(xm, rel)
    for j in range(ker.cols):
        col = ker.take_cols([j])
        if not matrix_in_span(rel, col):
            return Regularity("zero_divisor", witness=col)
    image = xm.hstack(rel)
    if FgModule(m.base, m.gens, image).is_zero():
        return Regularity("unit_like")
    return Regularity("regular")


# -- constructions ---------------------------------------------------


def regular_module(alg: Algebra) -> AlgModule:
    """The algebra as a left module over itself."""
    basis = Matrix.identity(alg.base, alg.rank)
    actions = tuple(alg.left_mult_matrix(basis.col(t)) for t in range(alg.rank))
    return AlgModule(alg, alg.underlying, actions)


def free_module(alg: Algebra, copies: int) -> AlgModule:
    """Lambda^k with coordinates grouped copy-major."""
    reg = regular_module(alg)
    return direct_sum([reg] * copies) if copies != 1 else reg


def direct_sum(summands: Sequence[AlgModule]) -> AlgModule:
    if not summands:
        raise ValueError("direct sum needs at least one summand")
    alg = summands[0].algebra
    base = alg.base
    for s in summands:
        if s.algebra != alg:
            raise ValueError("direct sum over mixed algebras")
    gens = sum(s.gens for s in summands)
    rel = Matrix.block_diag(base, [s.underlying.relations for s in summands])
    actions = tuple(
        Matrix.block_diag(base, [s.actions[t] for s in summands]) for t in range(alg.rank)
    )
    return AlgModule(alg, FgModule(base, gens, rel), actions)


def opposite_algebra(alg: Algebra) -> Algebra:
    g = alg.rank
    mult = tuple(tuple(alg.mult[j][i] for j in range(g)) for i in range(g))
    return Algebra(alg.base, alg.underlying, mult, alg.one)


def _integer_multiple_of_one(alg: Algebra, coords: Sequence) -> Optional[int]:
    """m with coords = m * one, if such an integer exists (Z-based algebras)."""
    if not isinstance(alg.base, Integers):
        return None
    one = alg.one
    pivot = next((i for i, c in enumerate(one) if c != 0), None)
    if pivot is None:
        return None
    q, r = divmod(coords[pivot], one[pivot])
    if r != 0:
        return None
    if all(c == q * o for c, o in zip(coords, one)):
        return q
    return None


def quotient_algebra(alg: Algebra, x: CentralElement) -> Algebra:
    """Lambda/x*Lambda; rebased to Z/m when x = m*1 on a free Z-algebra."""
    if x.parent != alg:
        raise ValueError("central element belongs to a different algebra")
    m = _integer_multiple_of_one(alg, x.coords)
    if m is not None and abs(m) >= 2 and alg.is_free():
        zm = IntegersMod(abs(m))
        conv = zm.from_int
        mult = tuple(
            tuple(tuple(conv(c) for c in cell) for cell in row) for row in alg.mult
        )
        one = tuple(conv(c) for c in alg.one)
        return Algebra(zm, FgModule.free(zm, alg.rank), mult, one)
    xmat = alg.left_mult_matrix(x.coords)
    rel = alg.relations.hstack(xmat)
    return Algebra(alg.base, FgModule(alg.base, alg.rank, rel), alg.mult, alg.one)


def quotient_module(m: AlgModule, x: CentralElement, qalg: Optional[Algebra] = None) -> AlgModule:
    """M/xM as a module over quotient_algebra(Lambda, x)."""
    alg = m.algebra
    if qalg is None:
        qalg = quotient_algebra(alg, x)
    if isinstance(qalg.base, IntegersMod) and isinstance(alg.base, Integers):
        n = qalg.base.n
        under = quotient_fg(m.underlying, n)
        conv = qalg.base.from_int
        actions = tuple(a.map_base(qalg.base, conv) for a in m.actions)
        return AlgModule(qalg, under, actions)
    xact = m.action_of(x.coords)
    rel = m.underlying.relations.hstack(xact)
    return AlgModule(qalg, FgModule(m.base, m.gens, rel), m.actions)


def localization_constant(alg: Algebra, x: CentralElement) -> int:
    """|det| of multiplication by x; inverting it inverts x."""
    if not isinstance(alg.base, Integers):
        raise ValueError("localization starts from an algebra over Z")
    if not alg.is_free():
        raise ValueError("unsupported: localization needs a free underlying module")
    d = det(alg.left_mult_matrix(x.coords))
    if d == 0:
        raise ValueError("x is not regular on the algebra (det of its action is 0)")
    return abs(d)


def localize_algebra(alg: Algebra, x: CentralElement) -> Algebra:
    """Lambda_x realized as Lambda tensor Z[1/c] with c = |det(mult-by-x)|."""
    c = localization_constant(alg, x)
    loc = IntegersLoc(radical(c))
    conv = loc.from_int
    mult = tuple(tuple(tuple(conv(c0) for c0 in cell) for cell in row) for row in alg.mult)
    one = tuple(conv(c0) for c0 in alg.one)
    return Algebra(loc, FgModule.free(loc, alg.rank), mult, one)


def x_power_torsion(m: AlgModule, x: CentralElement) -> Matrix:
    """Generators of the stabilized kernel of x, x^2, ... acting on M."""
    rel = m.underlying.relations
    xact = m.action_of(x.coords)
    power = xact
    ker = smith.kernel_through(power, rel)
    while True:
        power = xact @ power
        nxt = smith.kernel_through(power, rel)
        if matrix_in_span(ker.hstack(rel), nxt):
            return ker
        ker = nxt


def localize_module(m: AlgModule, x: CentralElement, lalg: Optional[Algebra] = None) -> AlgModule:
    """M_x: drop x-power torsion, then extend the base to Z[1/c]."""
    alg = m.algebra
    if lalg is None:
        lalg = localize_algebra(alg, x)
    loc = lalg.base
    torsion = x_power_torsion(m, x)
    rel = m.underlying.relations.hstack(torsion)
    conv = loc.from_int
    under = FgModule(loc, m.gens, rel.map_base(loc, conv))
    actions = tuple(a.map_base(loc, conv) for a in m.actions)
    return AlgModule(lalg, under, actions)
