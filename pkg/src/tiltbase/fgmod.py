"""Finitely presented modules over a coefficient ring.

An FgModule with g generators and relations matrix R (g rows, one column
per relation) is the cokernel of R acting on column space.  The normal
form is the divisibility-ordered invariant-factor list with units dropped
and 0 marking a free summand; two modules over the same ring are
isomorphic exactly when their normal forms agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .matrix import Matrix
from .rings import BaseRing, Integers, IntegersLoc, IntegersMod, ZZ, radical
from . import smith


@dataclass(frozen=True)
class FgModule:
    base: BaseRing
    gens: int
    relations: Matrix

    def __post_init__(self):
        if self.relations.rows != self.gens:
            raise ValueError(
                f"relations matrix has {self.relations.rows} rows for {self.gens} generators"
            )
        if self.relations.base != self.base:
            raise ValueError("relations live over the wrong ring")

    @classmethod
    def free(cls, base: BaseRing, rank: int) -> "FgModule":
        return cls(base, rank, Matrix.zeros(base, rank, 0))

    @classmethod
    def from_invariants(cls, base: BaseRing, invariants: Sequence[int]) -> "FgModule":
        rel_cols = []
        for d in invariants:
            col = [base.zero] * len(invariants)
            col[len(rel_cols)] = base.from_int(d)
            rel_cols.append(col)
        mat = Matrix.from_columns(base, rel_cols, len(invariants))
        nz = [j for j in range(mat.cols) if any(x != base.zero for x in mat.col(j))]
        return cls(base, len(invariants), mat.take_cols(nz))

    def normal_form(self) -> list:
        """Invariant factors: nonunits in divisibility order, 0 = free summand."""
        diag = smith.invariant_factors(self.relations)
        torsion = [d for d in diag if not self.base.is_zero(d) and not self.base.is_unit(d)]
        free_rank = self.gens - sum(
            1 for d in diag if not self.base.is_zero(d)
        )
        return torsion + [self.base.zero] * free_rank

    def is_zero(self) -> bool:
        return not self.normal_form()

    def isomorphic(self, other: "FgModule") -> bool:
        return self.base == other.base and self.normal_form() == other.normal_form()

    def abelian_invariants(self) -> list[int]:
        """Normal form of the underlying abelian group (Z and Z/N bases only)."""
        if isinstance(self.base, Integers):
            return [int(d) for d in self.normal_form()]
        if isinstance(self.base, IntegersMod):
            # a free Z/N summand is Z/N as an abelian group
            return [self.base.n if d == 0 else int(d) for d in self.normal_form()]
        raise TypeError(f"no abelian-group view over {self.base}")

    def contains(self, vector: Matrix) -> bool:
        """Does the column lie in the relation span (i.e. vanish in the module)?"""
        if vector.rows != self.gens:
            raise ValueError("vector/generator mismatch")
        if self.relations.cols == 0:
            return vector.is_zero()
        return smith.in_column_span(self.relations, vector)

    def render(self) -> str:
        return render_invariants(self.base, self.normal_form())


def render_invariants(base: BaseRing, invariants: Sequence) -> str:
    """Human form, e.g. [2, 6, 0] over Z -> 'Z/2 + Z/6 + Z'."""
    if not invariants:
        return "0"
    parts = []
    for d in invariants:
        if base.is_zero(d):
            parts.append(str(base))
        else:
            parts.append(f"Z/{base.format_element(d)}")
    return " + ".join(parts)


def cokernel_invariants(a: Matrix) -> FgModule:
    """coker(A) in invariant-factor normal form, as a fresh FgModule."""
    mod = FgModule(a.base, a.rows, a)
    return FgModule.from_invariants(a.base, mod.normal_form())


def present_quotient(gens: Matrix, sub: Matrix) -> FgModule:
    """Presentation of span(gens)/span(sub), both inside the same free module.

    The relation lattice on the given generators is {z : gens*z in span(sub)},
    computed through one augmented kernel.
    """
    if gens.rows != sub.rows:
        raise ValueError("ambient rank mismatch")
    rel = smith.kernel_through(gens, sub)
    return FgModule(gens.base, gens.cols, rel)


def quotient_presentation(gens: Matrix, sub: Matrix) -> Matrix:
    """Relations matrix of span(gens)/span(sub) on the given generators."""
    return smith.kernel_through(gens, sub)


@dataclass(frozen=True)
class HomGroup:
    """Hom(M, N) as an FgModule plus matrices realizing the generators."""

    group: FgModule
    maps: tuple[Matrix, ...]
    presentation: FgModule

    def __iter__(self):
        return iter(self.maps)


def hom_fg(m: FgModule, n: FgModule) -> HomGroup:
    """The group of base-linear maps M -> N with an explicit generating set."""
    if m.base != n.base:
        raise ValueError(f"base mismatch: {m.base} vs {n.base}")
    base = m.base
    if m.gens == 0 or n.gens == 0:
        zero = FgModule(base, 0, Matrix.zeros(base, 0, 0))
        return HomGroup(zero, (), zero)
    # phi (n.gens x m.gens) is well defined iff phi * R_M lands in span(R_N);
    # vectorize phi columnwise and demand vec(phi R_M) in span(I (x) R_N)
    cond = _postcompose_matrix(m.relations, n.gens)  # maps vec(phi) to vec(phi R_M)
    modulus = _identity_kron(n.relations, m.relations.cols)
    sol = smith.kernel_through(cond, modulus)
    # maps that vanish: every column of phi in span(R_N); solutions inside
    # that span are the zero map, so prune them from the generating set
    denom = _identity_kron(n.relations, m.gens)
    sol = _prune_span(sol, denom)
    pres = present_quotient(sol, denom)
    maps = tuple(_unvec(sol.take_cols([j]), n.gens, m.gens) for j in range(sol.cols))
    return HomGroup(FgModule.from_invariants(base, pres.normal_form()), maps, pres)


def _unvec(col: Matrix, rows: int, cols: int) -> Matrix:
    """Inverse of columnwise vectorization."""
    data = [[col.data[j * rows + i][0] for j in range(cols)] for i in range(rows)]
    return Matrix(col.base, data, cols=cols)


def _prune_span(gens: Matrix, ambient: Matrix) -> Matrix:
    """Drop generator columns lying in the span of earlier ones plus ambient."""
    base = gens.base
    kept: list[tuple] = []
    for j in range(gens.cols):
        col = gens.take_cols([j])
        in_ambient = col.is_zero() or (
            ambient.cols > 0 and smith.in_column_span(ambient, col)
        )
        if in_ambient:
            continue
        if kept:
            span = Matrix.from_columns(base, kept, gens.rows).hstack(ambient)
            if smith.in_column_span(span, col):
                continue
        kept.append(col.column_vector())
    return Matrix.from_columns(base, kept, gens.rows)


def vec(mat: Matrix) -> Matrix:
    """Columnwise vectorization into a single column."""
    entries = [mat.data[i][j] for j in range(mat.cols) for i in range(mat.rows)]
    return Matrix.column(mat.base, entries) if entries else Matrix.zeros(mat.base, 0, 1)


def _postcompose_matrix(r: Matrix, target_gens: int) -> Matrix:
    """Matrix of phi -> phi*R on columnwise-vectorized phi (target_gens x r.rows)."""
    base = r.base
    rows = target_gens * r.cols
    cols = target_gens * r.rows
    out = [[base.zero] * cols for _ in range(rows)]
    for c in range(r.cols):
        for k in range(r.rows):
            coeff = r.data[k][c]
            if base.is_zero(coeff):
                continue
            for i in range(target_gens):
                out[c * target_gens + i][k * target_gens + i] = coeff
    return Matrix(base, out, cols=cols)


def _identity_kron(r: Matrix, copies: int) -> Matrix:
    """Block-diagonal stack of `copies` copies of r (I (x) r)."""
    return Matrix.block_diag(r.base, [r] * copies)


def localize_fg(m: FgModule, c: int) -> FgModule:
    """M over Z reinterpreted over Z[1/c]; prime factors of c disappear."""
    if not isinstance(m.base, Integers):
        raise ValueError("localize_fg starts from a module over Z")
    if abs(c) < 2:
        raise ValueError(f"|c| must be >= 2, got {c}")
    loc = IntegersLoc(radical(c))
    rel = m.relations.map_base(loc, loc.from_int)
    return FgModule(loc, m.gens, rel)


def quotient_fg(m: FgModule, modulus: int) -> FgModule:
    """M/mM as a module over Z/m."""
    if not isinstance(m.base, Integers):
        raise ValueError("quotient_fg starts from a module over Z")
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    zm = IntegersMod(modulus)
    rel = m.relations.map_base(zm, zm.from_int)
    return FgModule(zm, m.gens, rel)
