"""Chevalley-Eilenberg cohomology with explicit representatives."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import KForm, NilpotentLieAlgebra, basis, wedge, wedge_power
from .linalg import (
    Matrix,
    QuotientMap,
    column_space_basis,
    nullspace_basis,
    rank,
)


@dataclass(frozen=True)
class CohomClass:
    degree: int
    coordinates: tuple
    representative: KForm
    ring: "CohomologyRing"

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def __add__(self, other: "CohomClass") -> "CohomClass":
        return self.ring.cls(self.representative + other.representative)

    def __mul__(self, c) -> "CohomClass":
        if isinstance(c, CohomClass):
            return cup(self, c)
        return self.ring.cls(self.representative * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CohomClass):
            return NotImplemented
        return self.degree == other.degree and self.ring is other.ring and all(
            a == b for a, b in zip(self.coordinates, other.coordinates)
        )

    def __hash__(self):
        return hash((self.degree, self.coordinates))


class CohomologyRing:
    """Per-degree cocycles, coboundaries and a chosen quotient basis.

    ``preferred`` maps a degree to cocycle representatives that must form a
    basis of that cohomology group; other degrees use the greedy pivot basis
    (coboundaries first, then cocycles in nullspace order).
    """

    def __init__(self, g: NilpotentLieAlgebra, preferred: Mapping[int, Sequence[KForm]] | None = None):
        self.algebra = g
        n = self.n = g.n
        preferred = dict(preferred or {})
        self.cocycles: list[list[tuple]] = []
        self.coboundaries: list[list[tuple]] = []
        self.maps: list[QuotientMap] = []
        for k in range(n + 1):
            dim = len(basis(n, k))
            if k < n:
                Z = nullspace_basis(g.differential_matrix(k))
            else:
                Z = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
            B = column_space_basis(g.differential_matrix(k - 1)) if k > 0 else []
            comp = None
            if k in preferred:
                comp = [f.vector() for f in preferred[k]]
                for f, v in zip(preferred[k], comp):
                    if g.d(f):
                        raise ValueError(f"preferred representative {f} is not closed")
            self.cocycles.append(Z)
            self.coboundaries.append(B)
            self.maps.append(QuotientMap(Z, B, dim, comp))

    # -- dimensions ----------------------------------------------------------
    def betti(self, k: int) -> int:
        return self.maps[k].rank if 0 <= k <= self.n else 0

    def betti_numbers(self) -> list[int]:
        return [self.betti(k) for k in range(self.n + 1)]

    def dim_cocycles(self, k: int) -> int:
        return len(self.cocycles[k])

    def dim_coboundaries(self, k: int) -> int:
        return len(self.coboundaries[k])

    # -- classes ---------------------------------------------------------------
    def basis_forms(self, k: int) -> list[KForm]:
        return [KForm.from_vector(self.n, k, v) for v in self.maps[k].basis]

    def basis_classes(self, k: int) -> list[CohomClass]:
        return [self.cls(f) for f in self.basis_forms(k)]

    def coordinates(self, form: KForm, check: bool = True) -> tuple:
        """Coordinates of the class of a cocycle (polynomial coefficients allowed)."""
        return self.maps[form.degree].coordinates(form.vector(), check=check)

    def cls(self, form: KForm) -> CohomClass:
        return CohomClass(form.degree, self.coordinates(form), form, self)

    def class_from_coordinates(self, k: int, coords: Sequence) -> CohomClass:
        rep = KForm(self.n, k)
        for c, f in zip(coords, self.basis_forms(k)):
            if c:
                rep = rep + f * c
        return CohomClass(k, tuple(Fraction(0) if not c else c for c in coords), rep, self)

    def projector(self, k: int) -> Matrix:
        return self.maps[k].projector()

    def multiplication_matrix(self, form: KForm, k: int) -> Matrix:
        """Matrix of ``[form] ^ - : H^k -> H^{k + deg form}`` in the chosen bases."""
        target = k + form.degree
        if target > self.n:
            return Matrix.zeros(0, self.betti(k))
        cols = [self.coordinates(wedge(form, b), check=False) for b in self.basis_forms(k)]
        return Matrix.from_columns(cols, self.betti(target)) if cols else Matrix.zeros(self.betti(target), 0)

    def volume_coefficient(self, form: KForm):
        return form.top_coefficient()


def compute_cohomology(g: NilpotentLieAlgebra, preferred: Mapping[int, Sequence[KForm]] | None = None) -> CohomologyRing:
    return CohomologyRing(g, preferred)


def cup(a: CohomClass, b: CohomClass) -> CohomClass:
    if a.ring is not b.ring:
        raise ValueError("classes from different cohomology rings")
    return a.ring.cls(wedge(a.representative, b.representative))


def poincare_pairing(a: CohomClass, b: CohomClass):
    """Coefficient of the volume form in ``rep(a) ^ rep(b)``."""
    n = a.ring.n
    if a.degree + b.degree != n:
        raise ValueError(f"degrees {a.degree} and {b.degree} are not complementary in dimension {n}")
    return wedge(a.representative, b.representative).top_coefficient()


def pairing_matrix(ring: CohomologyRing, k: int) -> Matrix:
    """Poincare pairing ``H^k x H^{n-k}`` in the chosen bases."""
    left = ring.basis_forms(k)
    right = ring.basis_forms(ring.n - k)
    return Matrix([[wedge(a, b).top_coefficient() for b in right] for a in left], len(right))


def rho_form(g: NilpotentLieAlgebra, ring: CohomologyRing, omega: CohomClass | KForm, k: int) -> tuple[Matrix, int]:
    """Skew form ``<a, b> = p(a, L^{m-2k-1} b)`` on ``H^{2k+1}`` and its rank."""
    n = g.n
    if n % 2:
        raise ValueError("odd-dimensional algebra")
    m = n // 2
    deg = 2 * k + 1
    if not 0 <= deg <= m:
        raise ValueError(f"need 0 <= 2k+1 <= m, got 2k+1 = {deg}, m = {m}")
    w = omega.representative if isinstance(omega, CohomClass) else omega
    power = wedge_power(w, m - deg)
    reps = ring.basis_forms(deg)
    images = [wedge(power, b) for b in reps]
    mat = Matrix([[wedge(a, lb).top_coefficient() for lb in images] for a in reps], len(reps))
    return mat, (rank(mat) if reps else 0)
