"""Homological engine: Hom and Ext over an algebra, resolutions, syzygies,
endomorphism algebras, split tests and bounded projective-dimension
decisions.

Free covers follow the presentation: the cover of M is Lambda^g with one
standard generator per underlying generator of M, and the syzygy is the
full kernel with its induced action.  Ext^i is the homology of the Hom
complex of a depth-(i+1) cover chain against N, reported in
invariant-factor normal form together with cocycle witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    Algebra,
    AlgModule,
    CentralElement,
    direct_sum,
    free_module,
    matrix_in_span,
    maps_equal_mod,
    opposite_algebra,
    regular_module,
)
from .fgmod import (
    FgModule,
    HomGroup,
    present_quotient,
    vec,
    _identity_kron,
    _prune_span,
    _unvec,
)
from .matrix import Matrix
from . import smith


@dataclass(frozen=True)
class ModuleMap:
    source: AlgModule
    target: AlgModule
    matrix: Matrix  # target.gens x source.gens, over the common base

    def __post_init__(self):
        if self.matrix.shape != (self.target.gens, self.source.gens):
            raise ValueError(
                f"map matrix {self.matrix.shape} does not fit "
                f"{self.source.gens} -> {self.target.gens}"
            )

    def is_valid(self) -> bool:
        """Well defined on the presentation and equivariant for every generator."""
        rel_t = self.target.underlying.relations
        if not matrix_in_span(rel_t, self.matrix @ self.source.underlying.relations):
            return False
        for a_s, a_t in zip(self.source.actions, self.target.actions):
            if not maps_equal_mod(a_t @ self.matrix, self.matrix @ a_s, rel_t):
                return False
        return True

    def compose(self, earlier: "ModuleMap") -> "ModuleMap":
        if earlier.target is not self.source and earlier.target != self.source:
            raise ValueError("maps do not compose")
        return ModuleMap(earlier.source, self.target, self.matrix @ earlier.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        return maps_equal_mod(self.matrix, other.matrix, self.target.underlying.relations)

    def is_injective(self) -> bool:
        rel_s = self.source.underlying.relations
        ker = smith.kernel_through(self.matrix, self.target.underlying.relations)
        return matrix_in_span_all(rel_s, ker)

    def is_surjective(self) -> bool:
        image = self.matrix.hstack(self.target.underlying.relations)
        return FgModule(self.target.base, self.target.gens, image).is_zero()


def identity_map(m: AlgModule) -> ModuleMap:
    return ModuleMap(m, m, Matrix.identity(m.base, m.gens))


def matrix_in_span_all(rel: Matrix, cols: Matrix) -> bool:
    return matrix_in_span(rel, cols)


# -- Hom over the algebra ---------------------------------------------


def hom_over_algebra(m: AlgModule, n: AlgModule) -> HomGroup:
    """Base-linear maps M -> N commuting with all generator actions.

    Returns the group in normal form plus matrices realizing a generating
    set; the ordering of the generators is the deterministic kernel order,
    which downstream code (End bases, structure constants) relies on.
    """
    if m.algebra != n.algebra:
        raise ValueError("modules over different algebras")
    base = m.base
    gm, gn = m.gens, n.gens
    if gm == 0 or gn == 0:
        zero = FgModule(base, 0, Matrix.zeros(base, 0, 0))
        return HomGroup(zero, (), zero)
    p = gn * gm
    rel_m, rel_n = m.underlying.relations, n.underlying.relations
    # rows: well-definedness (phi * R_M in span R_N) then one equivariance
    # block per algebra generator, all modulo columns of span R_N
    blocks = []
    moduli = []
    wd = _vec_postcompose(rel_m, gn)
    blocks.append(wd)
    moduli.append(_identity_kron(rel_n, rel_m.cols))
    for a_m, a_n in zip(m.actions, n.actions):
        # vec(A_N phi - phi A_M)
        left = _vec_precompose(a_n, gm)
        right = _vec_postcompose(a_m, gn)
        blocks.append(left - right)
        moduli.append(_identity_kron(rel_n, gm))
    eqs = blocks[0]
    for b in blocks[1:]:
        eqs = eqs.vstack(b)
    modulus = Matrix.block_diag(base, moduli)
    sol = smith.kernel_through(eqs, modulus)
    denom = _identity_kron(rel_n, gm)
    # a solution inside the denominator span is the zero homomorphism;
    # prune so the generating set matches the hom group, not the lattice
    sol = _prune_span(sol, denom)
    pres = present_quotient(sol, denom)
    maps = tuple(_unvec(sol.take_cols([j]), gn, gm) for j in range(sol.cols))
    return HomGroup(FgModule.from_invariants(base, pres.normal_form()), maps, pres)


def _vec_postcompose(r: Matrix, target_gens: int) -> Matrix:
    """vec(phi) -> vec(phi @ r) for phi with target_gens rows, r.rows columns."""
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


def _vec_precompose(a: Matrix, source_gens: int) -> Matrix:
    """vec(phi) -> vec(a @ phi) for phi with a.cols rows and source_gens columns."""
    base = a.base
    rows = a.rows * source_gens
    cols = a.cols * source_gens
    out = [[base.zero] * cols for _ in range(rows)]
    for j in range(source_gens):
        for i in range(a.rows):
            for k in range(a.cols):
                coeff = a.data[i][k]
                if not base.is_zero(coeff):
                    out[j * a.rows + i][j * a.cols + k] = coeff
    return Matrix(base, out, cols=cols)


def express_in_hom_basis(hom: HomGroup, target_rel: Matrix, mat: Matrix) -> Optional[Matrix]:
    """Coordinates of a homomorphism matrix in the generating set, or None."""
    if not hom.maps:
        return Matrix.zeros(mat.base, 0, 1) if matrix_in_span(target_rel, mat) else None
    basis = Matrix.from_columns(
        mat.base, [vec(f).column_vector() for f in hom.maps], hom.maps[0].rows * hom.maps[0].cols
    )
    gm = hom.maps[0].cols
    denom = _identity_kron(target_rel, gm)
    target = vec(mat)
    sol = smith.solve(basis.hstack(denom), target) if denom.cols else smith.solve(basis, target)
    if sol is None:
        return None
    return sol.take_rows(0, basis.cols)


# -- free covers and resolutions ---------------------------------------


@dataclass(frozen=True)
class CoverSegment:
    cover: AlgModule          # Lambda^g
    pi: ModuleMap             # cover -> module being covered
    syzygy: AlgModule
    inclusion: Matrix         # syzygy generators as columns in the cover


@dataclass(frozen=True)
class Resolution:
    module: AlgModule
    segments: tuple[CoverSegment, ...]

    @property
    def length(self) -> int:
        return len(self.segments)

    def syzygy(self, i: int) -> AlgModule:
        """Omega_i, with Omega_0 = the module itself."""
        if i == 0:
            return self.module
        return self.segments[i - 1].syzygy


def free_cover(m: AlgModule) -> CoverSegment:
    """Lambda^g -> M sending the i-th standard generator to the i-th generator."""
    alg = m.algebra
    base = m.base
    g = m.gens
    cover = free_module(alg, g) if g else _zero_free_module(alg)
    a = alg.rank
    # pi(copy j, algebra generator t) = e_t . (j-th generator of M)
    cols = []
    for j in range(g):
        for t in range(a):
            cols.append(m.actions[t].col(j))
    pi_mat = Matrix.from_columns(base, cols, g)
    pi = ModuleMap(cover, m, pi_mat)
    ker = smith.kernel_through(pi_mat, m.underlying.relations)
    if ker.cols <= 24:
        # full redundancy pruning is quadratic in solves; only worth it
        # while the syzygy is small enough to keep later covers lean
        ker = _prune_span(ker, cover.underlying.relations)
    syz_rel = smith.kernel_through(ker, cover.underlying.relations)
    syz_under = FgModule(base, ker.cols, syz_rel)
    actions = _induced_actions(cover, ker, syz_rel)
    syz = AlgModule(alg, syz_under, actions)
    return CoverSegment(cover, pi, syz, ker)


def _zero_free_module(alg: Algebra) -> AlgModule:
    base = alg.base
    under = FgModule(base, 0, Matrix.zeros(base, 0, 0))
    actions = tuple(Matrix.zeros(base, 0, 0) for _ in range(alg.rank))
    return AlgModule(alg, under, actions)




def _induced_actions(ambient: AlgModule, gens: Matrix, gen_rel: Matrix) -> tuple[Matrix, ...]:
    """Action matrices on a submodule given by generator columns."""
    base = ambient.base
    span = gens.hstack(ambient.underlying.relations)
    actions = []
    for a in ambient.actions:
        if gens.cols == 0:
            actions.append(Matrix.zeros(base, 0, 0))
            continue
        moved = a @ gens
        sol = smith.solve_matrix(span, moved)
        if sol is None:
            raise ArithmeticError("submodule is not action-stable; presentation bug")
        actions.append(sol.take_rows(0, gens.cols))
    return tuple(actions)


def resolution(m: AlgModule, length: int) -> Resolution:
    """Iterated free covers to the requested depth."""
    if length < 0:
        raise ValueError("resolution length must be >= 0")
    segments = []
    current = m
    for _ in range(length):
        seg = free_cover(current)
        segments.append(seg)
        current = seg.syzygy
    return Resolution(m, tuple(segments))


# -- Ext ---------------------------------------------------------------


@dataclass(frozen=True)
class ExtResult:
    group: FgModule
    degree: int
    cocycles: Matrix
    presentation: FgModule

    def normal_form(self) -> list:
        return self.group.normal_form()

    def is_zero(self) -> bool:
        return self.group.is_zero()


def ext(m: AlgModule, n: AlgModule, degree: int, res: Optional[Resolution] = None) -> ExtResult:
    """Ext^degree(M, N) as homology of the Hom complex of a free cover chain."""
    if m.algebra != n.algebra:
        raise ValueError("modules over different algebras")
    if degree < 0:
        raise ValueError("Ext degree must be >= 0")
    base = m.base
    if res is None or res.length < degree + 1:
        res = resolution(m, degree + 1)
    ranks = [m.gens] + [res.segments[i].syzygy.gens for i in range(degree + 1)]
    cover_rank = lambda i: ranks[i]  # rank of P_i (generators of Omega_i cover it)

    gn = n.gens
    rel_n = n.underlying.relations

    def hom_relations(i: int) -> Matrix:
        return _identity_kron(rel_n, cover_rank(i))

    def delta(i: int) -> Matrix:
        """Induced map N^{g_{i-1}} -> N^{g_i} from d_i: P_i -> P_{i-1}."""
        inc = res.segments[i - 1].inclusion if i >= 1 else None
        a = m.algebra.rank
        rows = gn * cover_rank(i)
        cols = gn * cover_rank(i - 1)
        out = [[base.zero] * cols for _ in range(rows)]
        for p in range(cover_rank(i)):
            for j in range(cover_rank(i - 1)):
                coeff = [inc.data[j * a + t][p] for t in range(a)]
                block = n.action_of(coeff)
                for r in range(gn):
                    for c in range(gn):
                        v = block.data[r][c]
                        if not base.is_zero(v):
                            out[p * gn + r][j * gn + c] = v
        return Matrix(base, out, cols=cols)

    # homology at spot `degree` of 0 -> Hom(P_0,N) -> Hom(P_1,N) -> ...
    # (cocycle generators may be redundant; the presentation absorbs that)
    out_map = delta(degree + 1)
    cocycles = smith.kernel_through(out_map, hom_relations(degree + 1))
    boundaries = hom_relations(degree)
    if degree >= 1:
        boundaries = delta(degree).hstack(boundaries)
    pres = present_quotient(cocycles, boundaries)
    group = FgModule.from_invariants(base, pres.normal_form())
    return ExtResult(group, degree, cocycles, pres)


def ext_range(m: AlgModule, n: AlgModule, degrees: Sequence[int]) -> dict[int, ExtResult]:
    """Ext in several degrees, sharing one resolution."""
    top = max(degrees) if degrees else 0
    res = resolution(m, top + 1)
    return {i: ext(m, n, i, res=res) for i in degrees}


# -- splitting and projective dimension --------------------------------


def is_split_surjection(pi: ModuleMap) -> Optional[Matrix]:
    """A section s with pi . s = id over the base, or None.

    The section is found by one exact linear solve: unknowns are the
    entries of s plus slack coefficients expressing membership in the
    relation spans (well-definedness, equivariance, and pi.s - id).
    """
    m, n = pi.source, pi.target  # pi: M -> N, section s: N -> M
    base = m.base
    gm, gn = m.gens, n.gens
    if gn == 0:
        return Matrix.zeros(base, gm, 0)
    rel_m, rel_n = m.underlying.relations, n.underlying.relations
    blocks = []
    moduli = []
    rhs_parts = []
    # s R_N in span(R_M)
    blocks.append(_vec_postcompose(rel_n, gm))
    moduli.append(_identity_kron(rel_m, rel_n.cols))
    rhs_parts.append(Matrix.zeros(base, gm * rel_n.cols, 1))
    # A^M_t s - s A^N_t in span(R_M)
    for a_m, a_n in zip(m.actions, n.actions):
        blocks.append(_vec_precompose(a_m, gn) - _vec_postcompose(a_n, gm))
        moduli.append(_identity_kron(rel_m, gn))
        rhs_parts.append(Matrix.zeros(base, gm * gn, 1))
    # pi s - id in span(R_N)
    blocks.append(_vec_precompose(pi.matrix, gn))
    moduli.append(_identity_kron(rel_n, gn))
    rhs_parts.append(vec(Matrix.identity(base, gn)))
    eqs = blocks[0]
    for b in blocks[1:]:
        eqs = eqs.vstack(b)
    modulus = Matrix.block_diag(base, moduli)
    rhs = rhs_parts[0]
    for r in rhs_parts[1:]:
        rhs = rhs.vstack(r)
    full = eqs.hstack(modulus) if modulus.cols else eqs
    sol = smith.solve(full, rhs)
    if sol is None:
        return None
    return _unvec(sol.take_rows(0, gm * gn), gm, gn)


@dataclass(frozen=True)
class PdVerdict:
    decided: bool
    value: int  # pd when decided; the exhausted bound otherwise

    @property
    def is_yes(self) -> bool:
        return self.decided

    def __str__(self):
        return f"pd = {self.value}" if self.decided else f"pd > {self.value} (bounded search)"


def pd_at_most(m: AlgModule, bound: int) -> PdVerdict:
    """Decide pd(M) <= bound; Yes carries the exact projective dimension.

    The k-th syzygy is projective iff its free cover splits, and the least
    k with a projective syzygy is pd(M); past the bound the verdict is
    No_up_to(bound), never an infinity claim.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    current = m
    for k in range(bound + 1):
        seg = free_cover(current)
        if is_split_surjection(seg.pi) is not None:
            return PdVerdict(True, k)
        current = seg.syzygy
    return PdVerdict(False, bound)


# -- endomorphism algebras ---------------------------------------------


@dataclass(frozen=True)
class EndAlgebra:
    """End(T) with its opposite, and T as a module over End(T).

    `gamma` is the tilted ring End(T)^op (products are opposite
    composition); `gamma_op` is End(T) itself with composition products,
    which is the ring acting on `module` (= T with endomorphisms acting).
    """

    gamma: Algebra
    gamma_op: Algebra
    module: AlgModule
    hom: HomGroup


def end_algebra(t: AlgModule) -> EndAlgebra:
    base = t.base
    hom = hom_over_algebra(t, t)
    gens = hom.maps
    s = len(gens)
    rel_t = t.underlying.relations
    under = FgModule(base, s, hom.presentation.relations)
    table_comp = []
    for i in range(s):
        row = []
        for j in range(s):
            coords = express_in_hom_basis(hom, rel_t, gens[i] @ gens[j])
            if coords is None:
                raise ArithmeticError("endomorphism composition escapes the basis")
            row.append(tuple(coords.column_vector()))
        table_comp.append(tuple(row))
    one_coords = express_in_hom_basis(hom, rel_t, Matrix.identity(base, t.gens))
    if one_coords is None:
        raise ArithmeticError("identity endomorphism escapes the basis")
    one = tuple(one_coords.column_vector())
    gamma_op = Algebra(base, under, tuple(table_comp), one)  # composition products
    gamma = opposite_algebra(gamma_op)
    module = AlgModule(gamma_op, t.underlying, tuple(gens))
    return EndAlgebra(gamma, gamma_op, module, hom)


def central_action_of(x: CentralElement, t: AlgModule, end: Optional[EndAlgebra] = None) -> CentralElement:
    """Multiplication by x as a central element of the tilted ring."""
    if end is None:
        end = end_algebra(t)
    xmat = t.action_of(x.coords)
    coords = express_in_hom_basis(end.hom, t.underlying.relations, xmat)
    if coords is None:
        raise ArithmeticError("multiplication by x is not in the endomorphism basis")
    return CentralElement(end.gamma_op, tuple(coords.column_vector()))
