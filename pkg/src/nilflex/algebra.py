"""Nilpotent Lie algebras given by structure strings, and their cochain complex.

A structure string such as ``(0,0,12,13,23,14-25)`` lists ``d(alpha_k)`` for
each generator ``alpha_k`` of the dual space; ``ij`` stands for
``alpha_i ^ alpha_j``.  Pairs written out of order (``42``) are normalised
to increasing order with a sign (``-24``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .linalg import Matrix, column_space_basis, rank as mat_rank
from .poly import MultiPoly

MAX_DIM = 9


class SpecError(ValueError):
    """Malformed structure string."""


class JacobiViolation(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


# -- multi-indices --------------------------------------------------------------

@lru_cache(maxsize=None)
def basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing index tuples of length ``k`` in ``1..n`` (lex order)."""
    if k < 0 or k > n:
        return ()
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def basis_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: i for i, I in enumerate(basis(n, k))}


def sort_sign(indices: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``indices``; 0 on a repeated index."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = sum(1 for a, b in combinations(idx, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


# -- forms ------------------------------------------------------------------------

class KForm:
    """Homogeneous exterior form on an ``n``-dimensional space.

    Coefficients are ``Fraction`` or ``MultiPoly``; zero coefficients are
    dropped on construction.
    """

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, degree: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.n = n
        self.degree = degree
        clean = {}
        for I, c in (terms or {}).items():
            I = tuple(I)
            if len(I) != degree:
                raise ValueError(f"index {I} in a {degree}-form")
            if isinstance(c, int):
                c = Fraction(c)
            if c:
                clean[I] = c
        self.terms = clean

    @classmethod
    def basic(cls, n: int, *indices: int, coeff=1) -> "KForm":
        """``coeff * alpha_{i1} ^ ... ^ alpha_{ik}`` with the sorting sign applied."""
        sign, I = sort_sign(indices)
        return cls(n, len(indices), {I: sign * coeff} if sign else {})

    @classmethod
    def one(cls, n: int, coeff=1) -> "KForm":
        return cls(n, 0, {(): coeff})

    @classmethod
    def from_vector(cls, n: int, degree: int, vec) -> "KForm":
        return cls(n, degree, dict(zip(basis(n, degree), vec)))

    def vector(self) -> tuple:
        zero = Fraction(0)
        return tuple(self.terms.get(I, zero) for I in basis(self.n, self.degree))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError(f"expected a form, got {type(other).__name__}")
        if other.n != self.n or other.degree != self.degree:
            raise ValueError(f"cannot add a {other.degree}-form to a {self.degree}-form")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        terms = dict(self.terms)
        for I, c in other.terms.items():
            terms[I] = c + terms[I] if I in terms else c
        return KForm(self.n, self.degree, terms)

    def __neg__(self):
        return KForm(self.n, self.degree, {I: -c for I, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, KForm):
            return wedge(self, c)
        return KForm(self.n, self.degree, {I: x * c for I, x in self.terms.items()})

    def __rmul__(self, c):
        return KForm(self.n, self.degree, {I: c * x for I, x in self.terms.items()})

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.n, self.degree) == (other.n, other.degree) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms)))

    def map_coefficients(self, fn) -> "KForm":
        return KForm(self.n, self.degree, {I: fn(c) for I, c in self.terms.items()})

    map_entries = map_coefficients

    def evaluate(self, point) -> "KForm":
        from .poly import poly_eval
        return self.map_coefficients(lambda c: poly_eval(c, point) if isinstance(c, MultiPoly) else c)

    def top_coefficient(self):
        """Coefficient of ``alpha_1 ^ ... ^ alpha_n`` (the form must be of top degree)."""
        if self.degree != self.n:
            raise ValueError("not a top-degree form")
        return self.terms.get(tuple(range(1, self.n + 1)), Fraction(0))

    def __repr__(self):
        return f"KForm({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for I in sorted(self.terms):
            c = self.terms[I]
            name = "a" + "".join(map(str, I)) if I else "1"
            if isinstance(c, MultiPoly):
                parts.append(f"({c})*{name}")
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; a result above the top degree is the zero form."""
    if a.n != b.n:
        raise ValueError("forms live on spaces of different dimension")
    deg = a.degree + b.degree
    if deg > a.n:
        return KForm(a.n, deg)
    terms: dict = {}
    for I, x in a.terms.items():
        sI = set(I)
        for J, y in b.terms.items():
            if sI.intersection(J):
                continue
            sign, K = sort_sign(I + J)
            t = x * y
            if sign < 0:
                t = -t
            terms[K] = t + terms[K] if K in terms else t
    return KForm(a.n, deg, terms)


def wedge_power(a: KForm, k: int) -> KForm:
    out = KForm.one(a.n)
    for _ in range(k):
        out = wedge(out, a)
    return out


# -- structure strings --------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSpec:
    """Parsed structure string: entry ``k`` maps increasing pairs to integer signs."""

    entries: tuple[tuple[tuple[tuple[int, int], int], ...], ...]
    text: str = ""

    @property
    def n(self) -> int:
        return len(self.entries)

    def normalized(self) -> str:
        return format_spec(self)


_TOKEN = re.compile(r"\s*([+-]?)\s*(\d\d)\s*")


def parse_spec(text: str, strict: bool = True) -> AlgebraSpec:
    """Parse ``"(0,0,12,13,23,14-25)"``.

    With ``strict`` (the default) entry ``k`` may only use indices below
    ``k``; turning it off lets malformed data reach the Jacobi check.
    """
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise SpecError(f"structure string must be parenthesised: {text!r}")
    raw = s[1:-1].split(",")
    n = len(raw)
    if n > MAX_DIM:
        raise SpecError(f"dimension {n} exceeds {MAX_DIM} (single-digit indices)")
    entries = []
    offset = text.index("(") + 1
    for k, chunk in enumerate(raw, start=1):
        body = chunk.strip()
        if body == "0":
            entries.append(())
            offset += len(chunk) + 1
            continue
        if not body:
            raise SpecError(f"empty entry {k} at position {offset}")
        pos = 0
        terms: dict[tuple[int, int], int] = {}
        first = True
        while pos < len(body):
            m = _TOKEN.match(body, pos)
            if not m or (not first and not m.group(1)):
                raise SpecError(f"malformed token in entry {k} at position {offset + chunk.index(body) + pos}: {body[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            i, j = int(m.group(2)[0]), int(m.group(2)[1])
            where = offset + chunk.index(body) + pos
            for idx in (i, j):
                if not 1 <= idx <= n:
                    raise SpecError(f"index {idx} out of range 1..{n} in entry {k} at position {where}")
                if strict and idx >= k:
                    raise SpecError(f"index {idx} not below {k} in entry {k} at position {where}")
            if i == j:
                raise SpecError(f"repeated index {i}{j} in entry {k} at position {where}")
            if i > j:
                i, j, sign = j, i, -sign
            terms[(i, j)] = terms.get((i, j), 0) + sign
            pos = m.end()
            first = False
        entries.append(tuple(sorted((p, c) for p, c in terms.items() if c)))
        offset += len(chunk) + 1
    return AlgebraSpec(tuple(entries), text.strip())


def format_spec(spec: AlgebraSpec) -> str:
    out = []
    for entry in spec.entries:
        if not entry:
            out.append("0")
            continue
        s = ""
        for (i, j), c in entry:
            coef = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else ("+" if s else "")
            s += f"{sign}{coef}{i}{j}"
        out.append(s)
    return "(" + ",".join(out) + ")"


# -- the algebra ----------------------------------------------------------------------

class NilpotentLieAlgebra:
    """Lie algebra dual to ``d`` on the generators ``alpha_1..alpha_n``.

    ``d(alpha_k) = sum c^{ij}_k alpha_ij``; the bracket is taken as
    ``[e_i, e_j] = -sum_k c^{ij}_k e_k`` (only spans matter downstream).
    """

    def __init__(self, n: int, d1: Mapping[int, KForm], name: str = ""):
        self.n = n
        self.d1 = {k: d1.get(k, KForm(n, 2)) for k in range(1, n + 1)}
        self.name = name
        self.structure_constants = {
            (i, j, k): c for k, f in self.d1.items() for (i, j), c in f.terms.items()
        }
        self._dcache: dict[int, Matrix] = {}

    def __repr__(self):
        return f"NilpotentLieAlgebra({self.spec_string()})"

    def spec_string(self) -> str:
        entries = []
        for k in range(1, self.n + 1):
            entries.append(tuple(sorted(((I[0], I[1]), c) for I, c in self.d1[k].terms.items())))
        return format_spec(AlgebraSpec(tuple(entries)))

    def generator(self, k: int) -> KForm:
        return KForm.basic(self.n, k)

    def d(self, form: KForm) -> KForm:
        """Exterior differential, extended from generators by the graded Leibniz rule."""
        n = self.n
        out = KForm(n, form.degree + 1)
        if form.degree >= n:
            return out
        terms: dict = {}
        for I, c in form.terms.items():
            for s, k in enumerate(I):
                dk = self.d1[k]
                if not dk:
                    continue
                # alpha_I = (-1)^s alpha_k ^ rest, so d contributes (-1)^s d(alpha_k) ^ rest
                rest = I[:s] + I[s + 1:]
                for J, x in dk.terms.items():
                    if set(J).intersection(rest):
                        continue
                    sign, K = sort_sign(J + rest)
                    if (s % 2) ^ (sign < 0):
                        t = -(c * x)
                    else:
                        t = c * x
                    terms[K] = t + terms[K] if K in terms else t
        return KForm(n, form.degree + 1, terms)

    def differential_matrix(self, k: int) -> Matrix:
        """Matrix of ``d: Lambda^k -> Lambda^{k+1}`` in the lex-ordered bases."""
        if k not in self._dcache:
            n = self.n
            src = basis(n, k)
            rows = len(basis(n, k + 1))
            cols = [self.d(KForm(n, k, {I: 1})).vector() if k < n else () for I in src]
            self._dcache[k] = Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)
        return self._dcache[k]

    def bracket_matrix(self) -> dict[tuple[int, int], tuple[Fraction, ...]]:
        out = {}
        for i, j in combinations(range(1, self.n + 1), 2):
            v = [Fraction(0)] * self.n
            for k in range(1, self.n + 1):
                c = self.structure_constants.get((i, j, k))
                if c:
                    v[k - 1] = -c
            out[(i, j)] = tuple(v)
        return out

    def check_jacobi(self) -> None:
        for k in range(1, self.n + 1):
            dd = self.d(self.d1[k])
            if dd:
                raise JacobiViolation(f"Jacobi violation: d^2(alpha_{k}) = {dd} != 0")

    def lower_central_series(self) -> list[int]:
        """Dimensions of g, [g,g], [g,[g,g]], ... down to the first repeat."""
        n = self.n
        br = self.bracket_matrix()
        # bracket of basis vectors as a bilinear map on coordinates
        current = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
        dims = [n]
        while True:
            new = []
            for x in range(n):
                for v in current:
                    w = [Fraction(0)] * n
                    for j in range(n):
                        if not v[j] or x == j:
                            continue
                        a, b = x + 1, j + 1
                        sign = 1 if a < b else -1
                        vec = br[(min(a, b), max(a, b))]
                        for k in range(n):
                            if vec[k]:
                                w[k] += sign * v[j] * vec[k]
                    if any(w):
                        new.append(tuple(w))
            dim = mat_rank(Matrix(new, n)) if new else 0
            if dim == dims[-1]:
                break
            dims.append(dim)
            if dim == 0:
                break
            current = column_space_basis(Matrix.from_columns(new, n))
        return dims

    def step_length(self) -> int:
        dims = self.lower_central_series()
        if dims[-1] != 0:
            raise NotNilpotent(f"lower central series stabilises at dimension {dims[-1]}")
        return len(dims) - 1

    def trace_free(self) -> bool:
        """Every ``ad_x`` has zero trace."""
        br = self.bracket_matrix()
        for x in range(1, self.n + 1):
            tr = Fraction(0)
            for j in range(1, self.n + 1):
                if j == x:
                    continue
                sign = 1 if x < j else -1
                tr += sign * br[(min(x, j), max(x, j))][j - 1]
            if tr:
                return False
        return True


def build_algebra(spec: AlgebraSpec | str, name: str = "", strict: bool = True) -> NilpotentLieAlgebra:
    """Algebra for a structure string; checks ``d^2 = 0`` and nilpotency."""
    if isinstance(spec, str):
        spec = parse_spec(spec, strict=strict)
    n = spec.n
    d1 = {
        k: KForm(n, 2, {(i, j): c for (i, j), c in entry})
        for k, entry in enumerate(spec.entries, start=1)
    }
    g = NilpotentLieAlgebra(n, d1, name or spec.text)
    g.check_jacobi()
    g.step_length()
    return g


def step_length(g: NilpotentLieAlgebra) -> int:
    return g.step_length()


def differential_matrix(g: NilpotentLieAlgebra, k: int) -> Matrix:
    return g.differential_matrix(k)


def direct_sum(g1: NilpotentLieAlgebra, g2: NilpotentLieAlgebra) -> NilpotentLieAlgebra:
    """Block sum; generators of ``g2`` are renumbered after those of ``g1``."""
    n = g1.n + g2.n
    if n > MAX_DIM:
        raise SpecError(f"direct sum has dimension {n} > {MAX_DIM}")
    shift = g1.n
    d1 = {k: KForm(n, 2, f.terms) for k, f in g1.d1.items()}
    for k, f in g2.d1.items():
        d1[k + shift] = KForm(n, 2, {(i + shift, j + shift): c for (i, j), c in f.terms.items()})
    return NilpotentLieAlgebra(n, d1, f"{g1.name} + {g2.name}")


def embed_form(f: KForm, n: int, shift: int) -> KForm:
    """Pull a form back along the projection onto a block starting at ``shift + 1``."""
    return KForm(n, f.degree, {tuple(i + shift for i in I): c for I, c in f.terms.items()})


def abelian(n: int) -> NilpotentLieAlgebra:
    return build_algebra("(" + ",".join(["0"] * n) + ")")
