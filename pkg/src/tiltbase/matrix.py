"""Dense exact matrices over a coefficient ring.

Matrices are immutable; entries are kept as canonical representatives of
the owning ring.  Row/column counts of zero are allowed everywhere (empty
presentations and zero modules show up constantly in resolutions).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .rings import BaseRing, Integers, IntegersLoc, IntegersMod, ZZ


class Matrix:
    __slots__ = ("base", "rows", "cols", "data")

    def __init__(self, base: BaseRing, data: Sequence[Sequence], cols: int | None = None):
        rows = len(data)
        if rows:
            ncols = len(data[0])
        else:
            if cols is None:
                cols = 0
            ncols = cols
        if cols is not None and rows and cols != ncols:
            raise ValueError("explicit column count disagrees with row data")
        norm = base.normalize
        self.base = base
        self.rows = rows
        self.cols = ncols
        self.data = tuple(tuple(norm(x) for x in row) for row in data)
        for row in self.data:
            if len(row) != ncols:
                raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, base: BaseRing, rows: int, cols: int) -> "Matrix":
        z = base.zero
        return cls(base, [[z] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, base: BaseRing, n: int) -> "Matrix":
        z, o = base.zero, base.one
        return cls(base, [[o if i == j else z for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, base: BaseRing, columns: Iterable[Sequence], rows: int) -> "Matrix":
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("column of wrong height")
        return cls(base, [[c[i] for c in cols] for i in range(rows)], cols=len(cols))

    @classmethod
    def column(cls, base: BaseRing, entries: Sequence) -> "Matrix":
        return cls(base, [[x] for x in entries], cols=1)

    # -- basic access --------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def col(self, j: int) -> tuple:
        return tuple(self.data[i][j] for i in range(self.rows))

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def column_vector(self) -> tuple:
        if self.cols != 1:
            raise ValueError("not a column vector")
        return self.col(0)

    def is_zero(self) -> bool:
        z = self.base.zero
        return all(x == z for row in self.data for x in row)

    # -- arithmetic ----------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.base == other.base
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.base, self.rows, self.cols, self.data))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.base.add
        return Matrix(
            self.base,
            [
                [add(self.data[i][j], other.data[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ],
            cols=self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.base.sub
        return Matrix(
            self.base,
            [
                [sub(self.data[i][j], other.data[i][j]) for j in range(self.cols)]
                for i in range(self.rows)
            ],
            cols=self.cols,
        )

    def __neg__(self) -> "Matrix":
        neg = self.base.neg
        return Matrix(self.base, [[neg(x) for x in row] for row in self.data], cols=self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.base != other.base:
            raise ValueError("base ring mismatch in product")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        if isinstance(self.base, IntegersLoc):
            return self._matmul_loc(other)
        if isinstance(self.base, (Integers, IntegersMod)):
            # integer entries; skip zero coefficients (rows are usually sparse)
            bt = list(zip(*other.data)) if other.data else []
            out = []
            for arow in self.data:
                nz = [(k, x) for k, x in enumerate(arow) if x]
                out.append([sum(x * bcol[k] for k, x in nz) for bcol in bt])
            if isinstance(self.base, IntegersMod):
                n = self.base.n
                out = [[x % n for x in row] for row in out]
            return Matrix(self.base, out, cols=other.cols)
        add, mul, z = self.base.add, self.base.mul, self.base.zero
        out = []
        for i in range(self.rows):
            row = []
            a = self.data[i]
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    acc = add(acc, mul(a[k], other.data[k][j]))
                row.append(acc)
            out.append(row)
        return Matrix(self.base, out, cols=other.cols)

    def _matmul_loc(self, other: "Matrix") -> "Matrix":
        # clear denominators, multiply over Z, divide once per output entry
        d1 = 1
        for row in self.data:
            for x in row:
                d1 = d1 * x.denominator // math.gcd(d1, x.denominator)
        d2 = 1
        for row in other.data:
            for x in row:
                d2 = d2 * x.denominator // math.gcd(d2, x.denominator)
        a = [[x.numerator * (d1 // x.denominator) for x in row] for row in self.data]
        b = [[x.numerator * (d2 // x.denominator) for x in row] for row in other.data]
        den = d1 * d2
        cols_b = list(zip(*b)) if b else []
        out = []
        if den == 1:
            for arow in a:
                out.append([Fraction(sum(x * y for x, y in zip(arow, bcol))) for bcol in cols_b])
        else:
            for arow in a:
                out.append(
                    [Fraction(sum(x * y for x, y in zip(arow, bcol)), den) for bcol in cols_b]
                )
        return Matrix(self.base, out, cols=other.cols)

    def scale(self, scalar) -> "Matrix":
        mul = self.base.mul
        s = self.base.normalize(scalar)
        return Matrix(self.base, [[mul(s, x) for x in row] for row in self.data], cols=self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.base,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    # -- structural helpers ---------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.base != other.base:
            raise ValueError("hstack mismatch")
        return Matrix(
            self.base,
            [list(self.data[i]) + list(other.data[i]) for i in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols or self.base != other.base:
            raise ValueError("vstack mismatch")
        return Matrix(self.base, list(self.data) + list(other.data), cols=self.cols)

    def take_rows(self, lo: int, hi: int) -> "Matrix":
        return Matrix(self.base, self.data[lo:hi], cols=self.cols)

    def take_cols(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(
            self.base,
            [[self.data[i][j] for j in indices] for i in range(self.rows)],
            cols=len(indices),
        )

    @staticmethod
    def block_diag(base: BaseRing, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = Matrix.zeros(base, rows, cols)
        data = [list(r) for r in out.data]
        i0 = j0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    data[i0 + i][j0 + j] = b.data[i][j]
            i0 += b.rows
            j0 += b.cols
        return Matrix(base, data, cols=cols)

    def map_base(self, new_base: BaseRing, convert) -> "Matrix":
        return Matrix(new_base, [[convert(x) for x in row] for row in self.data], cols=self.cols)

    def _check_same_shape(self, other: "Matrix"):
        if self.base != other.base or self.shape != other.shape:
            raise ValueError("matrix shape/base mismatch")

    def __repr__(self):
        fmt = self.base.format_element
        body = "; ".join(" ".join(fmt(x) for x in row) for row in self.data)
        return f"Matrix({self.base}, {self.rows}x{self.cols}: [{body}])"


def det(a: Matrix):
    """Determinant of a square matrix, exact over any of the three rings."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    base = a.base
    if isinstance(base, Integers):
        return _det_bareiss([list(r) for r in a.data])
    if isinstance(base, IntegersMod):
        return _det_bareiss([list(r) for r in a.data]) % base.n
    if isinstance(base, IntegersLoc):
        # scale to an integer matrix by a unit power of c per row
        rows = []
        scale = Fraction(1)
        for r in a.data:
            d = 1
            for x in r:
                d = d * x.denominator // math.gcd(d, x.denominator)
            rows.append([int(x * d) for x in r])
            scale *= d
        return Fraction(_det_bareiss(rows)) / scale
    raise TypeError(f"unsupported base {base}")


def _det_bareiss(m: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over the integers."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def lift_to_int(a: Matrix) -> list[list[int]]:
    """Integer lift of a matrix over Z or Z/N (canonical representatives)."""
    if isinstance(a.base, (Integers, IntegersMod)):
        return [list(r) for r in a.data]
    raise TypeError(f"no integer lift for base {a.base}")


def int_matrix(data: Sequence[Sequence[int]], cols: int | None = None) -> Matrix:
    return Matrix(ZZ, data, cols=cols)
