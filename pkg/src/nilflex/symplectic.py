"""Homogeneous symplectic forms, Lefschetz maps and harmonic Betti numbers.

A :class:`SymplecticFamily` writes a closed 2-form as ``sum p_i * w_i`` over
a basis ``w_i`` of H^2 with one parameter ``p_i`` per class (``A, B, C, ...``).
Nondegeneracy is governed by the coefficient of the volume form in
``omega^m``.  Harmonic Betti numbers in degrees ``2m-1`` and ``2m-2`` are
ranks of Lefschetz maps on cohomology.
"""

from __future__ import annotations

import logging
import os
import random
import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import KForm, NilpotentLieAlgebra, wedge_power
from .cohomology import CohomologyRing, compute_cohomology
from .linalg import Matrix, minor_nonzero_witness, rank
from .poly import MultiPoly, PolyError, parse_constraints, poly_eval, substitute

log = logging.getLogger(__name__)

DEFAULT_SEED = 20011
SAMPLE_RANGE = (-10, 10)


class NotSymplectic(ValueError):
    pass


class StratumError(ValueError):
    pass


def default_seed() -> int:
    env = os.environ.get("NILFLEX_SEED")
    return int(env) if env else DEFAULT_SEED


def parameter_names(count: int) -> tuple[str, ...]:
    letters = string.ascii_uppercase
    if count <= len(letters):
        return tuple(letters[:count])
    return tuple(f"P{i}" for i in range(1, count + 1))


def parse_point(text: str | Mapping) -> dict[str, Fraction]:
    """``"A=1,B=0,C=-1/2"`` -> exact assignment."""
    if isinstance(text, Mapping):
        return {k: Fraction(v) for k, v in text.items()}
    out = {}
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        name, sep, value = chunk.partition("=")
        if not sep:
            raise ValueError(f"bad assignment {chunk!r}")
        out[name.strip()] = Fraction(value.strip())
    return out


@dataclass
class SymplecticFamily:
    algebra: NilpotentLieAlgebra
    ring: CohomologyRing
    variables: tuple[str, ...]
    omega: KForm
    pf: MultiPoly
    _lefschetz: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def m(self) -> int:
        return self.algebra.n // 2

    def is_admissible(self) -> bool:
        return not self.pf.is_zero()

    def point_form(self, point: Mapping) -> KForm:
        return self.omega.evaluate(self._full_point(point))

    def _full_point(self, point: Mapping) -> dict[str, Fraction]:
        missing = [v for v in self.variables if v not in point]
        if missing:
            raise PolyError(f"no value assigned to {', '.join(missing)}")
        return {v: Fraction(point[v]) for v in self.variables}

    def pf_at(self, point: Mapping) -> Fraction:
        return poly_eval(self.pf, self._full_point(point))

    def is_symplectic(self, point: Mapping) -> bool:
        return self.pf_at(point) != 0

    def require_symplectic(self, point: Mapping) -> None:
        if not self.is_symplectic(point):
            raise NotSymplectic(f"form at {format_point(point)} is degenerate")


def format_point(point: Mapping) -> str:
    return ",".join(f"{k}={v}" for k, v in point.items())


def build_family(g: NilpotentLieAlgebra, ring: CohomologyRing | None = None,
                 h2_basis: Sequence[KForm] | None = None,
                 variables: Sequence[str] | None = None) -> SymplecticFamily:
    """Generic closed 2-form over an H^2 basis and its nondegeneracy polynomial."""
    if g.n % 2:
        raise ValueError(f"dimension {g.n} is odd; no symplectic forms")
    if ring is None:
        ring = compute_cohomology(g, {2: h2_basis} if h2_basis is not None else None)
    reps = ring.basis_forms(2)
    names = tuple(variables) if variables else parameter_names(len(reps))
    if len(names) != len(reps):
        raise ValueError(f"{len(names)} parameter names for b2 = {len(reps)}")
    gens = MultiPoly.gens(names)
    omega = KForm(g.n, 2)
    for p, w in zip(gens, reps):
        omega = omega + w * p
    top = wedge_power(omega, g.n // 2).top_coefficient()
    pf = top if isinstance(top, MultiPoly) else MultiPoly.constant(names, top)
    return SymplecticFamily(g, ring, names, omega, pf.extend(names) if pf.variables != names else pf)


def moduli_dim(g: NilpotentLieAlgebra, family: SymplecticFamily | None = None) -> int:
    """Dimension of the space of closed 2-forms, in which symplectic forms are open."""
    family = family or build_family(g)
    if not family.is_admissible():
        raise NotSymplectic("no symplectic structure")
    return family.ring.dim_cocycles(2)


@dataclass(frozen=True)
class LefschetzMatrix:
    source: int
    target: int
    power: int
    matrix: Matrix

    def at(self, point: Mapping) -> Matrix:
        return self.matrix.evaluate(point)


def lefschetz_map(ring: CohomologyRing, omega: KForm, k: int) -> Matrix:
    """``[omega]^{m-k} : H^k -> H^{2m-k}`` for any 2-form coefficients."""
    m = ring.n // 2
    return ring.multiplication_matrix(wedge_power(omega, m - k), k)


def lefschetz_matrix(family: SymplecticFamily, k: int) -> LefschetzMatrix:
    m = family.m
    if not 0 <= k <= m:
        raise ValueError(f"degree {k} outside 0..{m}")
    if k not in family._lefschetz:
        mat = lefschetz_map(family.ring, family.omega, k)
        family._lefschetz[k] = LefschetzMatrix(k, 2 * m - k, m - k, mat)
    return family._lefschetz[k]


def rank_at(lm: LefschetzMatrix, family: SymplecticFamily, point: Mapping) -> int:
    family.require_symplectic(point)
    return rank(lm.at(family._full_point(point)))


def symplectic_points(family: SymplecticFamily, count: int, seed: int | None = None,
                      pf: MultiPoly | None = None, variables: Sequence[str] | None = None,
                      lo: int = SAMPLE_RANGE[0], hi: int = SAMPLE_RANGE[1], max_tries: int = 2000):
    """Deterministic integer points where the (possibly substituted) Pf is nonzero."""
    pf = family.pf if pf is None else pf
    names = tuple(variables) if variables is not None else family.variables
    if pf.is_zero():
        return []
    rng = random.Random(default_seed() if seed is None else seed)
    out = []
    for _ in range(max_tries):
        pt = {v: Fraction(rng.randint(lo, hi)) for v in names}
        if poly_eval(pf, pt):
            out.append(pt)
            if len(out) == count:
                break
    return out


@dataclass(frozen=True)
class GenericRank:
    rank: int
    bound: int
    witness_point: dict
    minor: tuple | None  # (rows, cols, determinant) when rank < bound


def generic_rank(lm: LefschetzMatrix, family: SymplecticFamily, samples: int = 6,
                 seed: int | None = None) -> int:
    return generic_rank_certificate(lm, family, samples, seed).rank


def generic_rank_certificate(lm: LefschetzMatrix, family: SymplecticFamily, samples: int = 6,
                             seed: int | None = None, matrix: Matrix | None = None,
                             pf: MultiPoly | None = None,
                             variables: Sequence[str] | None = None) -> GenericRank:
    """Lower bound from exact evaluation, certified by a nonzero symbolic minor.

    A sampled rank equal to ``min(rows, cols)`` certifies itself.
    """
    pf = family.pf if pf is None else pf
    if pf.is_zero():
        raise NotSymplectic("no symplectic structure: Pf vanishes identically")
    mat = lm.matrix if matrix is None else matrix
    names = family.variables if variables is None else tuple(variables)
    bound = min(mat.nrows, mat.ncols)
    best, best_pt = -1, None
    for pt in symplectic_points(family, samples, seed, pf=pf, variables=names):
        r = rank(mat.evaluate(pt))
        if r > best:
            best, best_pt = r, pt
        if best == bound:
            break
    if best_pt is None:
        raise StratumError("no symplectic sample point found")
    minor = None
    if best < bound and best > 0:
        minor = minor_nonzero_witness(mat, best, seed=seed or 0)
        if minor is None:
            raise AssertionError("sampled rank not certified by a symbolic minor")
    return GenericRank(best, bound, best_pt, minor)


@dataclass(frozen=True)
class RankStratum:
    constraints: dict
    rank: int
    witness: dict
    pf_value: Fraction
    source: int = 0

    def describe(self) -> str:
        rules = ", ".join(f"{k}={v}" for k, v in self.constraints.items()) or "generic"
        return f"{rules}: rank {self.rank} at {format_point(self.witness)}"


def _expand_point(rules: Mapping[str, MultiPoly], free_point: Mapping, variables: Sequence[str]) -> dict:
    out = {}
    for v in variables:
        if v in rules:
            out[v] = poly_eval(rules[v], free_point)
        else:
            out[v] = Fraction(free_point[v])
    return out


def _on_stratum(rules: Mapping[str, MultiPoly], point: Mapping, variables: Sequence[str]) -> bool:
    """Exact membership test; only decidable when no rule uses fresh parameters."""
    for v, expr in rules.items():
        used = expr.used_variables()
        if any(u not in variables or u in rules for u in used):
            return False
        if poly_eval(expr, point) != Fraction(point[v]):
            return False
    return True


def rank_on_stratum(lm: LefschetzMatrix, family: SymplecticFamily, constraints, seed: int | None = None,
                    samples: int = 6, witness: Mapping | None = None) -> RankStratum:
    """Generic rank on the stratum cut out by ``variable = expression`` rules.

    Right-hand sides may introduce fresh parameters (polynomial parametrisation
    of a curved stratum).  The witness is returned in the original parameters.
    """
    rules = parse_constraints(constraints, family.variables)
    sub_pf = substitute(family.pf, rules)
    sub_mat = substitute(lm.matrix, rules)
    free = [v for v in family.variables if v not in rules]
    for r in rules.values():
        free.extend(v for v in r.used_variables() if v not in free and v not in rules)
    if sub_pf.is_zero():
        raise StratumError(f"stratum {constraints} lies outside the symplectic region")
    cert = generic_rank_certificate(lm, family, samples, seed, matrix=sub_mat, pf=sub_pf, variables=free)
    point = _expand_point(rules, cert.witness_point, family.variables)
    if witness is not None and _on_stratum(rules, witness, family.variables):
        w = family._full_point(witness)
        if family.is_symplectic(w) and rank(lm.at(w)) == cert.rank:
            point = w
    pf_value = family.pf_at(point)
    if not pf_value:
        raise StratumError("witness is degenerate")
    return RankStratum(dict(rules), cert.rank, point, pf_value, lm.source)


def is_lefschetz_type(family: SymplecticFamily, point: Mapping) -> bool:
    lm = lefschetz_matrix(family, 1)
    return rank_at(lm, family, point) == family.ring.betti(1)


def harmonic_betti_via_rank(family: SymplecticFamily, point: Mapping | None = None,
                            seed: int | None = None) -> dict[int, int | None]:
    """``h_{2m-k}`` for ``k = 0, 1, 2`` from Lefschetz ranks; ``h_{2m-3}`` only
    under Lefschetz type (``None`` otherwise)."""
    m = family.m
    out: dict[int, int | None] = {}
    if point is not None:
        family.require_symplectic(point)
        ranks = {k: rank(lefschetz_matrix(family, k).at(family._full_point(point)))
                 for k in range(0, min(3, m) + 1)}
    else:
        ranks = {k: generic_rank(lefschetz_matrix(family, k), family, seed=seed)
                 for k in range(0, min(3, m) + 1)}
    for k in range(0, min(2, m) + 1):
        out[2 * m - k] = ranks[k]
    if m >= 3:
        lef = ranks[1] == family.ring.betti(1)
        out[2 * m - 3] = ranks[3] if lef else None
    return out


def rho_upper_bound(family: SymplecticFamily, point: Mapping) -> int:
    """Rank of ``L^{m-3}`` on H^3; only an upper bound for ``h_{2m-3}`` in general."""
    return rank(lefschetz_matrix(family, 3).at(family._full_point(point)))


@dataclass(frozen=True)
class FlexibilityCertificate:
    degree: int
    point0: dict
    point1: dict
    rank0: int
    rank1: int

    def describe(self) -> str:
        return (f"h_{self.degree}: {self.rank0} at ({format_point(self.point0)}) vs "
                f"{self.rank1} at ({format_point(self.point1)})")


@dataclass
class RankExploration:
    """Exact ranks observed per target degree, with a witness point per value."""

    values: dict[int, dict[int, dict]] = field(default_factory=dict)
    generic: dict[int, int] = field(default_factory=dict)
    strata: list[RankStratum] = field(default_factory=list)

    def record(self, degree: int, r: int, point: Mapping):
        self.values.setdefault(degree, {}).setdefault(r, dict(point))

    def value_set(self, degree: int) -> set[int]:
        return set(self.values.get(degree, {}))


def explore_ranks(family: SymplecticFamily, strata: Sequence = (), points: int = 8,
                  seed: int | None = None, sparse: bool = True) -> RankExploration:
    """Ranks of ``L^{m-1}`` on H^1 and ``L^{m-2}`` on H^2 over generic samples,
    named strata and sparse small-integer points (which tend to hit strata)."""
    if not family.is_admissible():
        raise NotSymplectic("no symplectic structure")
    m = family.m
    seed = default_seed() if seed is None else seed
    ks = [k for k in (1, 2) if k <= m]
    ex = RankExploration()
    lms = {k: lefschetz_matrix(family, k) for k in ks}
    for k in ks:
        cert = generic_rank_certificate(lms[k], family, seed=seed)
        ex.generic[2 * m - k] = cert.rank
    candidates = symplectic_points(family, points, seed)
    if sparse:
        candidates += symplectic_points(family, points, seed + 1, lo=-1, hi=1)
    for s in strata:
        rules = s if not isinstance(s, tuple) else s[0]
        for k in ks:
            try:
                st = rank_on_stratum(lms[k], family, rules, seed=seed)
            except StratumError as exc:
                log.debug("skipping stratum %s: %s", rules, exc)
                continue
            ex.strata.append(st)
            candidates.append(st.witness)
    for pt in candidates:
        for k in ks:
            ex.record(2 * m - k, rank(lms[k].at(pt)), pt)
    return ex


def flexibility_certificate(family: SymplecticFamily, strata: Sequence = (), points: int = 8,
                            seed: int | None = None,
                            exploration: RankExploration | None = None) -> FlexibilityCertificate | None:
    """Two exact symplectic points with different ``h_{2m-1}`` or ``h_{2m-2}``."""
    ex = exploration or explore_ranks(family, strata, points, seed)
    m = family.m
    for degree in (2 * m - 1, 2 * m - 2):
        vals = ex.values.get(degree, {})
        if len(vals) > 1:
            lo, hi = min(vals), max(vals)
            return FlexibilityCertificate(degree, vals[lo], vals[hi], lo, hi)
    if m >= 3:
        # h_{2m-3} is only a rank under Lefschetz type at both ends
        lef = [p for vals in ex.values.values() for p in vals.values() if is_lefschetz_type(family, p)]
        lm3 = lefschetz_matrix(family, 3)
        by_rank: dict[int, dict] = {}
        for p in lef:
            by_rank.setdefault(rank(lm3.at(p)), p)
        if len(by_rank) > 1:
            lo, hi = min(by_rank), max(by_rank)
            return FlexibilityCertificate(2 * m - 3, by_rank[lo], by_rank[hi], lo, hi)
    return None


def segment_rank_check(family: SymplecticFamily, point0: Mapping, point1: Mapping, k: int,
                       depth: int = 20) -> bool:
    """Along ``omega_0 + lam * omega_1`` with ``lam = 2^-j`` (``j = 0..depth``) the
    form stays symplectic and the rank of ``L^{m-k}`` on H^k reaches
    ``rank(point1)`` for all but finitely many ``lam``.

    ``k`` is the source degree (``1`` for ``h_{2m-1}``, ``2`` for ``h_{2m-2}``).
    """
    p0 = family._full_point(point0)
    p1 = family._full_point(point1)
    if p0 == p1:
        raise ValueError("segment endpoints coincide")
    family.require_symplectic(p0)
    family.require_symplectic(p1)
    lm = lefschetz_matrix(family, k)
    r0, r1 = rank(lm.at(p0)), rank(lm.at(p1))
    if not r0 < r1:
        raise ValueError(f"need rank(point0) < rank(point1), got {r0} and {r1}")
    # both failure sets are zero sets of nonzero polynomials in lam
    root_bound = r1 * lm.power + family.m
    failures = 0
    last_ok = False
    for j in range(depth + 1):
        lam = Fraction(1, 2**j)
        pt = {v: p0[v] + lam * p1[v] for v in family.variables}
        ok = family.is_symplectic(pt) and rank(lm.at(pt)) >= r1
        failures += not ok
        last_ok = ok
    return last_ok and failures <= root_bound


@dataclass(frozen=True)
class ProductBetti:
    direct: dict[int, int]
    formula: dict[int, int]

    def consistent(self) -> bool:
        return self.direct == self.formula


def _rank_profile_form(ring: CohomologyRing, omega: KForm) -> dict[int, int]:
    m = ring.n // 2
    out = {}
    for k in (1, 2):
        if k <= m:
            out[2 * m - k] = rank(lefschetz_map(ring, omega, k))
    if m >= 1:
        out[2 * m] = rank(lefschetz_map(ring, omega, 0))
    return out


def product_harmonic_betti(g1: NilpotentLieAlgebra, omega1: KForm,
                           g2: NilpotentLieAlgebra, omega2: KForm) -> ProductBetti:
    """``h_{top-1}`` and ``h_{top-2}`` of the product, directly and by the Kunneth formula."""
    from .algebra import direct_sum, embed_form

    for g, w in ((g1, omega1), (g2, omega2)):
        if wedge_power(w, g.n // 2).top_coefficient() == 0 or g.d(w):
            raise NotSymplectic(f"input form {w} is not symplectic on {g.name}")
    g = direct_sum(g1, g2)
    w = embed_form(omega1, g.n, 0) + embed_form(omega2, g.n, g1.n)
    if wedge_power(w, g.n // 2).top_coefficient() == 0:
        raise NotSymplectic("product form is degenerate")
    h1 = _rank_profile_form(compute_cohomology(g1), omega1)
    h2 = _rank_profile_form(compute_cohomology(g2), omega2)
    hp = _rank_profile_form(compute_cohomology(g), w)
    m, n = g1.n // 2, g2.n // 2
    top = 2 * (m + n)
    direct = {top - 1: hp[top - 1], top - 2: hp[top - 2]}
    formula = {
        top - 1: h1[2 * m - 1] + h2[2 * n - 1],
        top - 2: h1.get(2 * m - 2, 1) + h1[2 * m - 1] * h2[2 * n - 1] + h2.get(2 * n - 2, 1),
    }
    return ProductBetti(direct, formula)
