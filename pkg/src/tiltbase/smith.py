"""Smith normal form, kernels and linear solving over Z, Z/N and Z[1/c].

The integer algorithm is the classical one: repeatedly move the
smallest-magnitude nonzero entry of the working submatrix to the pivot,
clear its row and column with Euclidean steps, and enforce the
divisibility chain by folding offending rows into the pivot row.  Pivot
selection is smallest magnitude first, then lowest (row, column) index,
so equal inputs always produce identical decompositions.

Z/N and Z[1/c] reduce to the integer case: matrices over Z/N are lifted
entrywise, matrices over Z[1/c] are scaled by a unit power of c, and the
resulting diagonal is rescaled to canonical associates afterwards.
Kernels and invariant factors go through a light path that skips the
transform bookkeeping they do not use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .matrix import Matrix, int_matrix
from .rings import Integers, IntegersLoc, IntegersMod, ZZ, coprime_part


@dataclass(frozen=True)
class SmithDecomposition:
    s: Matrix
    u: Matrix
    v: Matrix

    def diagonal(self) -> list:
        n = min(self.s.rows, self.s.cols)
        return [self.s.data[i][i] for i in range(n)]


def _smith_int(a, m, n, need_u=True, need_v=True):
    """Integer Smith form core; returns (u, s, v) as row-lists, u*a*v = s.

    u and v are None when not requested (their updates dominate the cost
    on wide matrices).
    """
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if need_u else None
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if need_v else None
    s = [row[:] for row in a]
    t = 0
    while t < m and t < n:
        # smallest-magnitude nonzero entry of the trailing submatrix
        best = None
        best_abs = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    ax = -x if x < 0 else x
                    if best is None or ax < best_abs:
                        best = (i, j)
                        best_abs = ax
                        if ax == 1:
                            break
            if best_abs == 1:
                break
        if best is None:
            break
        bi, bj = best
        if bi != t:
            s[t], s[bi] = s[bi], s[t]
            if need_u:
                u[t], u[bi] = u[bi], u[t]
        if bj != t:
            for row in s:
                row[t], row[bj] = row[bj], row[t]
            if need_v:
                for row in v:
                    row[t], row[bj] = row[bj], row[t]
        while True:
            p = s[t][t]
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // p
                    if q:
                        si, st = s[i], s[t]
                        for j in range(t, n):
                            si[j] -= q * st[j]
                        if need_u:
                            ui, ut = u[i], u[t]
                            for j in range(m):
                                ui[j] -= q * ut[j]
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // p
                    if q:
                        for i in range(t, m):
                            s[i][j] -= q * s[i][t]
                        if need_v:
                            for i in range(n):
                                v[i][j] -= q * v[i][t]
            if any(s[i][t] for i in range(t + 1, m)) or any(
                s[t][j] for j in range(t + 1, n)
            ):
                # leftover remainders are smaller than the pivot; repick
                best = (t, t)
                best_abs = abs(s[t][t])
                for i in range(t, m):
                    row = s[i]
                    for j in range(t, n):
                        x = row[j]
                        if x:
                            ax = -x if x < 0 else x
                            if ax < best_abs:
                                best = (i, j)
                                best_abs = ax
                                if ax == 1:
                                    break
                    if best_abs == 1:
                        break
                bi, bj = best
                if bi != t:
                    s[t], s[bi] = s[bi], s[t]
                    if need_u:
                        u[t], u[bi] = u[bi], u[t]
                if bj != t:
                    for row in s:
                        row[t], row[bj] = row[bj], row[t]
                    if need_v:
                        for row in v:
                            row[t], row[bj] = row[bj], row[t]
                continue
            # pivot row/column clean: enforce pivot | trailing submatrix
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] % p != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            si, st = s[bad], s[t]
            for j in range(t, n):
                st[j] += si[j]
            if need_u:
                ub, ut = u[bad], u[t]
                for j in range(m):
                    ut[j] += ub[j]
        if s[t][t] < 0:
            for j in range(t, n):
                s[t][j] = -s[t][j]
            if need_u:
                for j in range(m):
                    u[t][j] = -u[t][j]
        t += 1
    return u, s, v


def _lift(a: Matrix):
    """Integer row-lists plus the denominator cleared for Z[1/c] inputs."""
    if isinstance(a.base, IntegersLoc):
        denom = 1
        for row in a.data:
            for x in row:
                denom = denom * x.denominator // math.gcd(denom, x.denominator)
        return [[x.numerator * (denom // x.denominator) for x in row] for row in a.data], denom
    return [list(r) for r in a.data], 1


@lru_cache(maxsize=4096)
def _core_no_transform(a: Matrix) -> tuple:
    lifted, _ = _lift(a)
    _, s, _ = _smith_int(lifted, a.rows, a.cols, need_u=False, need_v=False)
    return tuple(s[i][i] for i in range(min(a.rows, a.cols)))


@lru_cache(maxsize=4096)
def _core_with_v(a: Matrix) -> tuple:
    lifted, _ = _lift(a)
    _, s, v = _smith_int(lifted, a.rows, a.cols, need_u=False, need_v=True)
    diag = tuple(s[i][i] for i in range(min(a.rows, a.cols)))
    return diag, tuple(tuple(row) for row in v)


@lru_cache(maxsize=4096)
def smith_normal_form(a: Matrix) -> SmithDecomposition:
    """U*A*V = S diagonal with the divisibility chain, over A's own ring.

    Matrices are immutable, so decompositions are memoized; repeated
    solves against the same presentation are the common access pattern.
    """
    base = a.base
    if isinstance(base, Integers):
        u, s, v = _smith_int([list(r) for r in a.data], a.rows, a.cols)
        return SmithDecomposition(
            int_matrix(s, cols=a.cols), int_matrix(u, cols=a.rows), int_matrix(v, cols=a.cols)
        )
    if isinstance(base, IntegersMod):
        n = base.n
        u, s, v = _smith_int([list(r) for r in a.data], a.rows, a.cols)
        # rescale each pivot row so the diagonal entry becomes gcd(d, N)
        for i in range(min(a.rows, a.cols)):
            d = s[i][i]
            g, unit = base.canonical_associate(d % n)
            inv = base.unit_inverse(unit)
            s[i] = [(inv * x) % n for x in s[i]]
            u[i] = [(inv * x) % n for x in u[i]]
            s[i][i] = g
        um = Matrix(base, [[x % n for x in row] for row in u], cols=a.rows)
        vm = Matrix(base, [[x % n for x in row] for row in v], cols=a.cols)
        sm = Matrix(base, [[x % n for x in row] for row in s], cols=a.cols)
        return SmithDecomposition(sm, um, vm)
    if isinstance(base, IntegersLoc):
        c = base.c
        lifted, denom = _lift(a)
        u, s, v = _smith_int(lifted, a.rows, a.cols)
        # U * (denom*A) * V = S  =>  U*A*V = S/denom; rescale rows to make
        # each diagonal entry its canonical (c-coprime) associate
        urows = [[Fraction(x) for x in row] for row in u]
        srows = [[Fraction(x, denom) for x in row] for row in s]
        for i in range(min(a.rows, a.cols)):
            d = srows[i][i]
            if d != 0:
                g = Fraction(coprime_part(d.numerator, c))
                unit = d / g
                srows[i] = [x / unit for x in srows[i]]
                urows[i] = [x / unit for x in urows[i]]
        um = Matrix(base, urows, cols=a.rows)
        vm = Matrix(base, [[Fraction(x) for x in row] for row in v], cols=a.cols)
        sm = Matrix(base, srows, cols=a.cols)
        return SmithDecomposition(sm, um, vm)
    raise TypeError(f"unsupported base ring {base}")


def invariant_factors(a: Matrix) -> list:
    """Diagonal of the Smith form (length min(rows, cols)), canonical."""
    base = a.base
    diag = _core_no_transform(a)
    if isinstance(base, Integers):
        return [abs(d) for d in diag]
    if isinstance(base, IntegersMod):
        return [math.gcd(d, base.n) % base.n for d in diag]
    if isinstance(base, IntegersLoc):
        return [Fraction(coprime_part(d, base.c)) for d in diag]
    raise TypeError(f"unsupported base ring {base}")


def kernel(a: Matrix) -> Matrix:
    """Columns generating {v : A v = 0} over A's ring.

    Over Z the result is a basis of the (saturated) kernel lattice; over
    Z/N and Z[1/c] the columns generate the full solution module.
    """
    base = a.base
    diag, v = _core_with_v(a)
    rank_bound = min(a.rows, a.cols)
    if isinstance(base, IntegersMod):
        # ker(diag(d_i)) = sum of annihilators (N/d_i), transported through V
        n = base.n
        cols = []
        for j in range(a.cols):
            d = math.gcd(diag[j], n) if j < rank_bound else 0
            if d % n == 0:
                cols.append(tuple(v[i][j] % n for i in range(a.cols)))
            elif d != 1:
                ann = n // d
                cols.append(tuple((ann * v[i][j]) % n for i in range(a.cols)))
        return Matrix.from_columns(base, cols, a.cols)
    free = [j for j in range(a.cols) if j >= rank_bound or diag[j] == 0]
    conv = base.from_int
    cols = [tuple(conv(v[i][j]) for i in range(a.cols)) for j in free]
    return Matrix.from_columns(base, cols, a.cols)


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some v with A v = b (column), or None when no solution exists."""
    if b.rows != a.rows or b.cols != 1:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return solve_matrix(a, b)


def solve_matrix(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some X with A X = B, or None; solved columnwise through one SNF."""
    if b.rows != a.rows or a.base != b.base:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    base = a.base
    snf = smith_normal_form(a)
    c = snf.u @ b
    rank_bound = min(a.rows, a.cols)
    out_cols = []
    for j in range(b.cols):
        y = [base.zero] * a.cols
        ok = True
        for i in range(a.rows):
            rhs = c.data[i][j]
            d = snf.s.data[i][i] if i < rank_bound else base.zero
            if i < a.cols:
                q = base.try_divide(rhs, d)
                if q is None:
                    ok = False
                    break
                y[i] = q
            elif not base.is_zero(rhs):
                ok = False
                break
        if not ok:
            return None
        out_cols.append(y)
    x = Matrix.from_columns(base, out_cols, a.cols)
    return snf.v @ x


def in_column_span(a: Matrix, v: Matrix) -> bool:
    return solve(a, v) is not None


def kernel_through(f: Matrix, modulus: Matrix) -> Matrix:
    """Generators of {v : F v lies in the column span of `modulus`}.

    This is the kernel of the induced map into coker(modulus); computed by
    augmenting F with the modulus columns and projecting kernel generators
    onto the F-variables.
    """
    if modulus.cols == 0:
        return kernel(f)
    if f.rows != modulus.rows:
        raise ValueError("row mismatch between map and modulus")
    k = kernel(f.hstack(modulus))
    base = f.base
    cols = []
    seen = set()
    for j in range(k.cols):
        col = tuple(k.data[i][j] for i in range(f.cols))
        if any(x != base.zero for x in col) and col not in seen:
            seen.add(col)
            cols.append(col)
    return Matrix.from_columns(base, cols, f.cols)
