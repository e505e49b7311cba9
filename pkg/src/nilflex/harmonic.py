"""Symplectically harmonic forms computed directly from the operators.

For a fixed rational symplectic form this builds the Poisson bivector, the
symplectic star operator (from its defining pairing identity), the Koszul
differential and the adjoint Lefschetz operator as exact matrices on every
``Lambda^k``.  Harmonic dimensions then come from kernels and intersections,
without going through Lefschetz ranks on cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable

from .algebra import KForm, NilpotentLieAlgebra, basis, build_algebra, sort_sign, wedge, wedge_power
from .cohomology import CohomologyRing, compute_cohomology
from .linalg import Matrix, inverse, nullspace_basis, rank, span_rank
from .symplectic import NotSymplectic


class ConventionFault(AssertionError):
    """The two formulas for the Koszul differential disagree."""


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@lru_cache(maxsize=None)
def _pairing_inverse(n: int, k: int) -> Matrix:
    """Inverse of ``P[I][K]`` = volume coefficient of ``alpha_I ^ alpha_K``."""
    src, dst = basis(n, k), basis(n, n - k)
    P = Matrix([[sort_sign(I + K)[0] if set(I).isdisjoint(K) else 0 for K in dst] for I in src], len(dst))
    return inverse(P)


def _matrix_of(n: int, src: int, dst: int, op: Callable[[KForm], KForm]) -> Matrix:
    rows = len(basis(n, dst))
    cols = [op(KForm(n, src, {I: 1})).vector() for I in basis(n, src)]
    return Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)


def _interior(n: int, i: int, form: KForm) -> KForm:
    """Contraction with the dual basis vector ``e_i``."""
    out = {}
    for I, c in form.terms.items():
        if i in I:
            s = I.index(i)
            out[I[:s] + I[s + 1:]] = -c if s % 2 else c
    return KForm(n, max(form.degree - 1, 0), out) if form.degree else KForm(n, -1)


class FixedSymplecticForm:
    """A rational symplectic form on a nilpotent Lie algebra with its operators."""

    def __init__(self, g: NilpotentLieAlgebra, omega: KForm, pi_sign: int = 1):
        if g.n % 2:
            raise NotSymplectic("odd dimension")
        if omega.degree != 2:
            raise ValueError("omega must be a 2-form")
        if g.d(omega):
            raise NotSymplectic(f"omega is not closed: d(omega) = {g.d(omega)}")
        n = self.n = g.n
        self.m = n // 2
        self.algebra = g
        self.omega = omega
        w = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in omega.terms.items():
            w[i - 1][j - 1] = c
            w[j - 1][i - 1] = -c
        self.omega_matrix = Matrix(w, n)
        top = wedge_power(omega, self.m).top_coefficient()
        if not top:
            raise NotSymplectic(f"omega is degenerate: Pfaffian {top / factorial(self.m)} vanishes")
        self.pi_sign = pi_sign
        winv = inverse(self.omega_matrix)
        self.pi = Matrix([[pi_sign * x for x in r] for r in winv.rows], n)
        self.volume = wedge_power(omega, self.m) * Fraction(1, factorial(self.m))
        self._ops: dict = {}

    # -- pointwise algebra -------------------------------------------------------
    def lambda_pi(self, I: tuple, J: tuple) -> Fraction:
        """Determinant extension of the bivector to basic k-forms."""
        return _det([[self.pi.rows[a - 1][b - 1] for b in J] for a in I])

    def star_basis(self, k: int) -> Matrix:
        """Matrix of ``* : Lambda^k -> Lambda^{2m-k}``, solving
        ``beta ^ *alpha = Lambda^k(Pi)(beta, alpha) v`` over all basic ``beta``."""
        key = ("star", k)
        if key not in self._ops:
            n = self.n
            src = basis(n, k)
            dst = basis(n, n - k)
            Pinv = _pairing_inverse(n, k)
            vol = self.volume.top_coefficient()
            cols = []
            for J in src:
                rhs = [self.lambda_pi(I, J) * vol for I in src]
                cols.append(Pinv.apply(rhs))
            self._ops[key] = Matrix.from_columns(cols, len(dst)) if cols else Matrix.zeros(len(dst), 0)
        return self._ops[key]

    def star(self, alpha: KForm) -> KForm:
        return KForm.from_vector(self.n, self.n - alpha.degree, self.star_basis(alpha.degree).apply(alpha.vector()))

    # -- operator tables -----------------------------------------------------------
    def d_mat(self, k: int) -> Matrix:
        n = self.n
        if k < 0 or k > n:
            return Matrix.zeros(len(basis(n, k + 1)), len(basis(n, k)))
        return self.algebra.differential_matrix(k)

    def L_mat(self, k: int) -> Matrix:
        key = ("L", k)
        if key not in self._ops:
            self._ops[key] = _matrix_of(self.n, k, k + 2, lambda a: wedge(self.omega, a))
        return self._ops[key]

    def L_power(self, k: int, p: int) -> Matrix:
        key = ("Lp", k, p)
        if key not in self._ops:
            wp = wedge_power(self.omega, p)
            self._ops[key] = _matrix_of(self.n, k, k + 2 * p, lambda a: wedge(wp, a))
        return self._ops[key]

    def delta_mat(self, k: int) -> Matrix:
        """``delta = (-1)^{k+1} * d *`` on ``Lambda^k``."""
        key = ("delta", k)
        if key not in self._ops:
            n = self.n
            if k <= 0:
                self._ops[key] = Matrix.zeros(0, len(basis(n, k)))
            else:
                sign = -1 if (k + 1) % 2 else 1
                m = self.star_basis(n - k + 1) @ self.d_mat(n - k) @ self.star_basis(k)
                self._ops[key] = m * sign
        return self._ops[key]

    def Lstar_mat(self, k: int) -> Matrix:
        """``L* = - * L *`` on ``Lambda^k``."""
        key = ("Lstar", k)
        if key not in self._ops:
            n = self.n
            if k < 2:
                self._ops[key] = Matrix.zeros(len(basis(n, k - 2)), len(basis(n, k)))
            else:
                self._ops[key] = -(self.star_basis(n - k + 2) @ self.L_mat(n - k) @ self.star_basis(k))
        return self._ops[key]

    def contraction_mat(self, k: int, sign: int | None = None) -> Matrix:
        """``i(Pi) = sign * sum_{i<j} pi^{ij} iota_j iota_i`` on ``Lambda^k``."""
        sign = contraction_sign() if sign is None else sign
        n = self.n

        def op(a: KForm) -> KForm:
            out = KForm(n, k - 2)
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    p = self.pi.rows[i - 1][j - 1]
                    if p:
                        out = out + _interior(n, i, _interior(n, j, a)) * (sign * p)
            return out

        if k < 2:
            return Matrix.zeros(len(basis(n, k - 2)), len(basis(n, k)))
        return _matrix_of(n, k, k - 2, op)

    def delta_bracket_mat(self, k: int, sign: int | None = None) -> Matrix:
        """``[i(Pi), d] = i(Pi) d - d i(Pi)`` on ``Lambda^k``."""
        n = self.n
        if k <= 0:
            return Matrix.zeros(0, len(basis(n, k)))
        first = self.contraction_mat(k + 1, sign) @ self.d_mat(k) if k < n else \
            Matrix.zeros(len(basis(n, k - 1)), len(basis(n, k)))
        second = self.d_mat(k - 2) @ self.contraction_mat(k, sign) if k >= 2 else \
            Matrix.zeros(len(basis(n, k - 1)), len(basis(n, k)))
        return first - second

    def koszul_delta(self, alpha: KForm, cross_check: bool = True) -> KForm:
        k = alpha.degree
        if k == 0:
            return KForm(self.n, -1)
        v = self.delta_mat(k).apply(alpha.vector())
        if cross_check:
            w = self.delta_bracket_mat(k).apply(alpha.vector())
            if v != w:
                raise ConventionFault(f"*d* and [i(Pi), d] disagree on {alpha}")
        return KForm.from_vector(self.n, k - 1, v)

    # -- harmonic spaces -------------------------------------------------------------
    def harmonic_space(self, k: int) -> list[tuple]:
        key = ("hr", k)
        if key not in self._ops:
            stacked = Matrix(list(self.d_mat(k).rows) + list(self.delta_mat(k).rows), len(basis(self.n, k)))
            self._ops[key] = nullspace_basis(stacked)
        return self._ops[key]


@lru_cache(maxsize=None)
def contraction_sign() -> int:
    """Sign making the bivector contraction reproduce ``(-1)^{k+1} * d *``.

    Calibrated once on degree-1 and degree-2 forms of the Kodaira-Thurston
    algebra with ``omega = a14 + a23``.
    """
    g = build_algebra("(0,0,12,0)")
    f = FixedSymplecticForm(g, KForm.basic(4, 1, 4) + KForm.basic(4, 2, 3))
    found = None
    for s in (1, -1):
        if all(f.delta_bracket_mat(k, s) == f.delta_mat(k) for k in (1, 2)):
            found = s
            break
    if found is None:
        raise ConventionFault("no contraction sign reproduces the Koszul differential")
    return found


def invert_omega(g: NilpotentLieAlgebra, omega: KForm) -> FixedSymplecticForm:
    return FixedSymplecticForm(g, omega)


def star(f: FixedSymplecticForm, alpha: KForm) -> KForm:
    return f.star(alpha)


def koszul_delta(f: FixedSymplecticForm, alpha: KForm) -> KForm:
    return f.koszul_delta(alpha)


def _intersection_dim(U: list[tuple], W: list[tuple], dim: int) -> int:
    return span_rank(U, dim) + span_rank(W, dim) - span_rank(list(U) + list(W), dim)


@dataclass
class HarmonicProfile:
    n: int
    omega_hr: list[int]
    h: list[int]
    h_star: list[int]
    betti: list[int]
    delta_betti: list[int]

    def as_dict(self) -> dict:
        return {
            "dim_omega_hr": self.omega_hr,
            "h": self.h,
            "h_star": self.h_star,
            "b": self.betti,
            "b_delta": self.delta_betti,
        }


def harmonic_profile(f: FixedSymplecticForm, ring: CohomologyRing | None = None) -> HarmonicProfile:
    if "profile" in f._ops:
        return f._ops["profile"]
    n = f.n
    ring = ring or compute_cohomology(f.algebra)
    omega_hr, h, h_star, b_delta = [], [], [], []
    for k in range(n + 1):
        dim = len(basis(n, k))
        hr = f.harmonic_space(k)
        exact = [f.d_mat(k - 1).column(j) for j in range(f.d_mat(k - 1).ncols)] if k else []
        coexact = [f.delta_mat(k + 1).column(j) for j in range(f.delta_mat(k + 1).ncols)] if k < n else []
        omega_hr.append(len(hr))
        h.append(len(hr) - _intersection_dim(hr, exact, dim))
        h_star.append(len(hr) - _intersection_dim(hr, coexact, dim))
        ker_delta = dim - rank(f.delta_mat(k)) if k else dim
        b_delta.append(ker_delta - span_rank(coexact, dim))
    f._ops["profile"] = HarmonicProfile(n, omega_hr, h, h_star, ring.betti_numbers(), b_delta)
    return f._ops["profile"]


# -- identity suite ---------------------------------------------------------------------

@dataclass
class IdentityResult:
    name: str
    degree: int
    ok: bool
    counterexample: tuple | None = None

    def __str__(self):
        status = "ok" if self.ok else f"FAILED on basis vector {self.counterexample}"
        return f"{self.name} [degree {self.degree}]: {status}"


@dataclass
class IdentityReport:
    results: list[IdentityResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.ok]

    def names(self) -> list[str]:
        return sorted({r.name for r in self.results})

    def summary(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for r in self.results:
            out[r.name] = out.get(r.name, True) and r.ok
        return out


def _compare(name: str, k: int, lhs: Matrix, rhs: Matrix, n: int) -> IdentityResult:
    if lhs.shape != rhs.shape:
        return IdentityResult(name, k, False, ("shape", lhs.shape, rhs.shape))
    diff = lhs - rhs
    for j in range(diff.ncols):
        if any(diff.column(j)):
            return IdentityResult(name, k, False, basis(n, k)[j])
    return IdentityResult(name, k, True)


def _zero(n: int, src: int, dst: int) -> Matrix:
    return Matrix.zeros(len(basis(n, dst)), len(basis(n, src)))


def _safe(mat_fn, n, src, dst):
    if src < 0 or src > n or dst < 0 or dst > n:
        return _zero(n, src, dst)
    return mat_fn(src)


def identity_suite(f: FixedSymplecticForm, ring: CohomologyRing | None = None) -> IdentityReport:
    """Operator identities as exact matrix equalities in every degree."""
    n, m = f.n, f.m
    ring = ring or compute_cohomology(f.algebra)
    rep = IdentityReport()
    add = rep.results.append
    d = lambda k: _safe(f.d_mat, n, k, k + 1)
    L = lambda k: _safe(f.L_mat, n, k, k + 2)
    dl = lambda k: _safe(f.delta_mat, n, k, k - 1)
    Ls = lambda k: _safe(f.Lstar_mat, n, k, k - 2)
    for k in range(n + 1):
        dim = len(basis(n, k))
        add(_compare("star^2 = id", k, f.star_basis(n - k) @ f.star_basis(k), Matrix.identity(dim), n))
        add(_compare("[L,d] = 0", k, L(k + 1) @ d(k) - d(k + 2) @ L(k), _zero(n, k, k + 3), n))
        add(_compare("[L,delta] = -d", k, L(k - 1) @ dl(k) - dl(k + 2) @ L(k), -d(k), n))
        add(_compare("[L*,delta] = 0", k, Ls(k - 1) @ dl(k) - dl(k - 2) @ Ls(k), _zero(n, k, k - 3), n))
        # with L* = -*L* and delta = (-1)^{k+1} *d*, the bracket comes out as [d, L*] = -delta
        add(_compare("[d,L*] = -delta", k, d(k - 2) @ Ls(k) - Ls(k + 1) @ d(k), -dl(k), n))
        add(_compare("d delta + delta d = 0", k, d(k - 1) @ dl(k) + dl(k + 1) @ d(k), _zero(n, k, k), n))
        add(_compare("delta = [i(Pi), d]", k, f.delta_bracket_mat(k) if k else _zero(n, 0, -1), dl(k), n))
        add(_compare("i(Pi) = L*", k, f.contraction_mat(k) if k >= 2 else _zero(n, k, k - 2), Ls(k), n))
        # delta alpha = 0 iff d(*alpha) = 0
        ker_delta = nullspace_basis(dl(k)) if k else [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        ker_dstar = nullspace_basis(d(n - k) @ f.star_basis(k)) if k else ker_delta
        same = span_rank(ker_delta, dim) == span_rank(ker_dstar, dim) == span_rank(ker_delta + ker_dstar, dim)
        add(IdentityResult("ker delta = ker d*", k, same))
        # alpha in Im delta iff *alpha in Im d
        if k < n:
            im_delta = dl(k + 1).columns()
            im_d = d(n - k - 1).columns() if n - k - 1 >= 0 else []
            starred = [f.star_basis(k).apply(v) for v in im_delta]
            dim2 = len(basis(n, n - k))
            ok = span_rank(starred, dim2) == span_rank(im_d, dim2) == span_rank(starred + im_d, dim2)
            add(IdentityResult("Im delta = *Im d", k, ok))
    for k in range(m + 1):
        src = m - k
        dim = len(basis(n, src))
        ker_Lk1 = nullspace_basis(f.L_power(src, k + 1)) if src + 2 * (k + 1) <= n else \
            [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        ker_Ls = nullspace_basis(Ls(src)) if src >= 2 else \
            [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        same = span_rank(ker_Lk1, dim) == span_rank(ker_Ls, dim) == span_rank(ker_Lk1 + ker_Ls, dim)
        add(IdentityResult("ker L^{k+1} = ker L* on Lambda^{m-k}", k, same))
        # L^k : Omega_hr^{m-k} -> Omega_hr^{m+k} is bijective
        hr_lo = f.harmonic_space(src)
        hr_hi = f.harmonic_space(m + k)
        Lk = f.L_power(src, k)
        images = [Lk.apply(v) for v in hr_lo]
        dim_hi = len(basis(n, m + k))
        inside = span_rank(images + hr_hi, dim_hi) == len(hr_hi)
        bij = inside and span_rank(images, dim_hi) == len(hr_lo) == len(hr_hi)
        add(IdentityResult("L^k: Omega_hr^{m-k} -> Omega_hr^{m+k} bijective", k, bij))
        # H_hr^{m+k} = L^k(H_hr^{m-k}) inside H^{m+k}
        proj_hi = ring.projector(m + k)
        cls_hr_hi = [proj_hi.apply(v) for v in hr_hi]
        cls_img = [proj_hi.apply(v) for v in images]
        b = ring.betti(m + k)
        same = span_rank(cls_hr_hi, b) == span_rank(cls_img, b) == span_rank(cls_hr_hi + cls_img, b)
        add(IdentityResult("H_hr^{m+k} = L^k H_hr^{m-k}", k, same))
    prof = harmonic_profile(f, ring)
    for k in range(m + 1):
        add(IdentityResult("h*_{m-k} = h_{m+k}", k, prof.h_star[m - k] == prof.h[m + k]))
        add(IdentityResult("h_{m-k} >= h_{m+k}", k, prof.h[m - k] >= prof.h[m + k]))
    for k in range(n + 1):
        add(IdentityResult("dim H_delta^k = b_k", k, prof.delta_betti[k] == prof.betti[k]))
    for k in range(min(2, n) + 1):
        add(IdentityResult("h_k = b_k (k <= 2)", k, prof.h[k] == prof.betti[k]))
    return rep


# -- products -----------------------------------------------------------------------

@dataclass
class ProductStarReport:
    star_ok: bool
    harmonic_inclusion_ok: bool
    inequality_ok: bool
    h_product: list[int]
    h_sum: list[int]
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.star_ok and self.harmonic_inclusion_ok and self.inequality_ok


def product_star_check(f1: FixedSymplecticForm, f2: FixedSymplecticForm) -> ProductStarReport:
    """Star of a product form, harmonic products, and the sum-of-products inequality."""
    from .algebra import direct_sum, embed_form

    g = direct_sum(f1.algebra, f2.algebra)
    n1, n2 = f1.n, f2.n
    n = g.n
    omega = embed_form(f1.omega, n, 0) + embed_form(f2.omega, n, n1)
    f = FixedSymplecticForm(g, omega, f1.pi_sign)
    failures = []
    star_ok = True
    for p in range(n1 + 1):
        for q in range(n2 + 1):
            for I in basis(n1, p):
                a = KForm(n1, p, {I: 1})
                ea = embed_form(a, n, 0)
                sa = embed_form(f1.star(a), n, 0)
                for J in basis(n2, q):
                    b = KForm(n2, q, {J: 1})
                    lhs = f.star(wedge(ea, embed_form(b, n, n1)))
                    rhs = wedge(sa, embed_form(f2.star(b), n, n1)) * (-1 if (p * q) % 2 else 1)
                    if lhs != rhs:
                        star_ok = False
                        failures.append(f"star on a{I}(x)a{J}")
    incl_ok = True
    for p in range(n1 + 1):
        for q in range(n2 + 1):
            for u in f1.harmonic_space(p):
                for v in f2.harmonic_space(q):
                    prod = wedge(embed_form(KForm.from_vector(n1, p, u), n, 0),
                                 embed_form(KForm.from_vector(n2, q, v), n, n1))
                    if g.d(prod) or (prod.degree and any(f.delta_mat(prod.degree).apply(prod.vector()))):
                        incl_ok = False
                        failures.append(f"harmonic product in degree ({p},{q})")
    h1 = harmonic_profile(f1).h
    h2 = harmonic_profile(f2).h
    hp = harmonic_profile(f).h
    h_sum = [sum(h1[p] * h2[k - p] for p in range(max(0, k - n2), min(k, n1) + 1)) for k in range(n + 1)]
    ineq = all(s <= h for s, h in zip(h_sum, hp))
    return ProductStarReport(star_ok, incl_ok, ineq, hp, h_sum, failures)
