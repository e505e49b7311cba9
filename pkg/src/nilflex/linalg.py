"""Exact matrices over Q or Q[A, B, ...].

Everything here is exact: entries are :class:`~fractions.Fraction` or
:class:`~nilflex.poly.MultiPoly`.  Matrices are immutable; row reduction
works on private copies.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .poly import MultiPoly, poly_eval

Vector = tuple


class LinalgError(ValueError):
    pass


class NotACocycle(LinalgError):
    pass


class Matrix:
    """Rectangular matrix with homogeneous entry kind."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in r) for r in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise LinalgError("ragged matrix")
            self.ncols = widths.pop()
        else:
            self.ncols = ncols or 0

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[Fraction(0)] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Matrix":
        if not cols:
            return cls([[] for _ in range(nrows)], 0)
        return cls(zip(*cols), len(cols)) if nrows else cls([], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.columns(), self.nrows)

    T = property(transpose)

    def is_symbolic(self) -> bool:
        return any(isinstance(x, MultiPoly) for r in self.rows for x in r)

    def map_entries(self, fn: Callable) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows], self.ncols)

    def evaluate(self, point: Mapping) -> "Matrix":
        return self.map_entries(lambda x: poly_eval(x, point) if isinstance(x, MultiPoly) else x)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return self.map_entries(lambda x: -x)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        return self.map_entries(lambda x: x * other)

    def __rmul__(self, c):
        return self.map_entries(lambda x: c * x)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.matmul(other)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
        # row-by-row over the nonzero entries; the operator matrices are sparse
        sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        zero = Fraction(0)
        out = []
        for r in self.rows:
            row = [zero] * other.ncols
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse[k]:
                        row[j] = a * b + row[j]
            out.append(row)
        return Matrix(out, other.ncols)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise LinalgError(f"vector of length {len(v)} for {self.shape} matrix")
        out = []
        for r in self.rows:
            acc = Fraction(0)
            for a, b in zip(r, v):
                if a and b:
                    acc = a * b + acc
            out.append(acc)
        return tuple(out)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)


def _as_rows(m) -> list[list[Fraction]]:
    rows = m.rows if isinstance(m, Matrix) else m
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, MultiPoly):
                raise LinalgError("row reduction needs rational entries; evaluate first")
            row.append(x if type(x) is Fraction else Fraction(x))
        out.append(row)
    return out


def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Reduced row-echelon form, rank and pivot columns of a rational matrix."""
    a = _as_rows(m)
    nrows = len(a)
    ncols = m.ncols if isinstance(m, Matrix) else (len(a[0]) if a else 0)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x else x for x in a[r]]
        pr = a[r]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], pr)]
        pivots.append(c)
        r += 1
    return Matrix(a, ncols), r, tuple(pivots)


def rank(m: Matrix) -> int:
    """Rank of a rational matrix (fraction-based elimination, no back substitution)."""
    a = _as_rows(m)
    nrows = len(a)
    ncols = m.ncols if isinstance(m, Matrix) else (len(a[0]) if a else 0)
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pr = a[r]
        piv = pr[c]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] / piv
                a[i] = [x - f * y if y else x for x, y in zip(a[i], pr)]
        r += 1
        if r == nrows:
            break
    return r


def nullspace_basis(m: Matrix) -> list[Vector]:
    """Basis of ``{x : m x = 0}``, one vector per free column (deterministic)."""
    red, rk, pivots = rref(m)
    n = m.ncols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red.rows[i][f]
        basis.append(tuple(v))
    return basis


def column_space_basis(m: Matrix) -> list[Vector]:
    _, _, pivots = rref(m)
    return [m.column(j) for j in pivots]


def independent_subset(vectors: Sequence[Vector], dim: int) -> list[int]:
    """Indices of a maximal independent subset, chosen greedily in order."""
    if not vectors:
        return []
    _, _, pivots = rref(Matrix.from_columns(vectors, dim))
    return list(pivots)


def span_rank(vectors: Sequence[Vector], dim: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix(vectors, dim))


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise LinalgError("inverse of a non-square matrix")
    aug = Matrix([list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)])
    red, rk, pivots = rref(aug)
    if tuple(pivots[:n]) != tuple(range(n)):
        raise LinalgError("matrix is singular")
    return Matrix([r[n:] for r in red.rows[:n]], n)


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One solution of ``m x = b`` or ``None`` when the system is inconsistent."""
    aug = Matrix([list(r) + [b[i]] for i, r in enumerate(m.rows)], m.ncols + 1)
    red, rk, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [Fraction(0)] * m.ncols
    for i, p in enumerate(pivots):
        x[p] = red.rows[i][m.ncols]
    return tuple(x)


class QuotientMap:
    """Coordinates on ``span(Z) / span(B)`` with respect to a chosen complement.

    ``complement`` lists representatives whose classes form the quotient basis;
    when omitted it is taken greedily from ``Z`` in order.  The coordinate map
    is linear and precomputed, so it also applies to vectors with polynomial
    entries.
    """

    def __init__(self, Z: Sequence[Vector], B: Sequence[Vector], dim: int,
                 complement: Sequence[Vector] | None = None):
        self.dim = dim
        B = [tuple(Fraction(x) for x in v) for v in B]
        B = [B[i] for i in independent_subset(B, dim)]
        if complement is None:
            cols = B + [tuple(Fraction(x) for x in z) for z in Z]
            keep = independent_subset(cols, dim)
            complement = [cols[i] for i in keep if i >= len(B)]
        else:
            complement = [tuple(Fraction(x) for x in v) for v in complement]
        self.boundaries = B
        self.basis = list(complement)
        cols = B + self.basis
        if span_rank(cols, dim) != len(cols):
            raise LinalgError("quotient basis is not independent modulo the boundaries")
        if Z is not None and span_rank([*cols, *Z], dim) != len(cols):
            raise LinalgError("quotient basis does not span the cocycles modulo the boundaries")
        self._frame = Matrix.from_columns(cols, dim) if cols else Matrix.zeros(dim, 0)
        # left inverse via an invertible square block of independent rows
        if cols:
            rows = independent_subset(list(self._frame.rows), len(cols))
            block = self._frame.submatrix(rows, range(len(cols)))
            inv = inverse(block)
            left = [[Fraction(0)] * dim for _ in cols]
            for a in range(len(cols)):
                for b, r in enumerate(rows):
                    left[a][r] = inv.rows[a][b]
            self._left = Matrix(left, dim)
        else:
            self._left = Matrix.zeros(0, dim)
        self._nb = len(B)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def projector(self) -> Matrix:
        """Matrix sending a cocycle to its quotient coordinates."""
        return Matrix(self._left.rows[self._nb:], self.dim)

    def coordinates(self, z: Sequence, check: bool = True) -> Vector:
        if len(z) != self.dim:
            raise LinalgError(f"vector of length {len(z)} in a {self.dim}-dimensional space")
        full = self._left.apply(z)
        if check and any(a != b for a, b in zip(self._frame.apply(full), z)):
            raise NotACocycle("vector does not lie in the span of the cocycles")
        return full[self._nb:]


def quotient_coordinates(z: Sequence, Z_basis: Sequence[Vector], B_basis: Sequence[Vector],
                         complement: Sequence[Vector] | None = None) -> Vector:
    dim = len(z)
    return QuotientMap(Z_basis, B_basis, dim, complement).coordinates(z)


# -- polynomial matrices ------------------------------------------------------

def symbolic_det(m: Matrix):
    """Determinant by cofactor expansion memoised over column subsets.

    Avoids division, so it works for polynomial entries; cost is about
    ``n * 2**n`` products of an entry with a minor.
    """
    n = m.nrows
    if n != m.ncols:
        raise LinalgError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    rows = m.rows
    # minors of the last k rows indexed by the frozenset of used columns
    level: dict[tuple[int, ...], object] = {(): Fraction(1)}
    for k in range(1, n + 1):
        i = n - k
        nxt = {}
        for cols in combinations(range(n), k):
            acc = Fraction(0)
            for pos, j in enumerate(cols):
                a = rows[i][j]
                if not a:
                    continue
                rest = level.get(cols[:pos] + cols[pos + 1:])
                if rest is None or not rest:
                    continue
                term = a * rest
                acc = acc - term if pos % 2 else term + acc
            nxt[cols] = acc
        level = nxt
    return level[tuple(range(n))]


def sample_point(variables: Sequence[str], rng: random.Random, lo: int = -10, hi: int = 10) -> dict[str, Fraction]:
    return {v: Fraction(rng.randint(lo, hi)) for v in variables}


def matrix_variables(m: Matrix) -> tuple[str, ...]:
    seen: list[str] = []
    for r in m.rows:
        for x in r:
            if isinstance(x, MultiPoly):
                seen.extend(v for v in x.variables if v not in seen)
    return tuple(seen)


def minor_nonzero_witness(m: Matrix, r: int, tries: int = 32, seed: int = 0):
    """An ``r x r`` minor whose determinant is a nonzero polynomial, or ``None``.

    Candidate row/column sets come from pivots of exact evaluations at random
    integer points; the returned determinant is then computed symbolically.
    Returns ``(rows, cols, det)``.
    """
    if r > min(m.nrows, m.ncols):
        raise LinalgError(f"no {r}x{r} minors in a {m.nrows}x{m.ncols} matrix")
    if r == 0:
        return (), (), Fraction(1)
    variables = matrix_variables(m)
    rng = random.Random(seed)
    seen = set()
    for _ in range(tries):
        at = m.evaluate(sample_point(variables, rng)) if variables else m
        _, rk, pcols = rref(at)
        if rk < r:
            continue
        cols = pcols[:r]
        sub_rows = rref(at.submatrix(range(m.nrows), cols).transpose())[2][:r]
        key = (sub_rows, cols)
        if key in seen:
            continue
        seen.add(key)
        det = symbolic_det(m.submatrix(sub_rows, cols))
        if det:
            return tuple(sub_rows), tuple(cols), det
        if not variables:
            break
    return None
