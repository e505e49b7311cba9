"""End-to-end runs over the embedded catalogues, verification and report output."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .algebra import build_algebra, format_spec, parse_spec, wedge
from .catalog import (
    FLEXIBLE_STRUCTURES,
    FOUR_DIM,
    KODAIRA_THURSTON,
    KT_OMEGA,
    SIX_DIM,
    CatalogEntry,
    h2_basis_forms,
    parse_form,
)
from .cohomology import compute_cohomology, pairing_matrix, rho_form
from .harmonic import FixedSymplecticForm, harmonic_profile, identity_suite
from .linalg import rank, span_rank
from .poly import MultiPoly
from .symplectic import (
    build_family,
    default_seed,
    explore_ranks,
    flexibility_certificate,
    format_point,
    harmonic_betti_via_rank,
    moduli_dim,
    segment_rank_check,
    symplectic_points,
)


SCHEMA_VERSION = 1
CSV_COLUMNS = ("b1", "b2", "s", "h4", "h5", "moduli", "flexible", "structure")


@dataclass
class EntryReport:
    index: int
    structure: str
    reducible: str
    betti: list[int]
    step: int
    admissible: bool
    pf: str
    moduli: int | None = None
    pf_ratio: str | None = None
    generic: dict[int, int] = field(default_factory=dict)
    h4: list[int] = field(default_factory=list)
    h5: list[int] = field(default_factory=list)
    strata: list[dict] = field(default_factory=list)
    certificate: dict | None = None
    oracle: dict = field(default_factory=dict)
    structural: dict = field(default_factory=dict)
    mismatches: list[dict] = field(default_factory=list)

    @property
    def flexible(self) -> bool:
        return len(self.h4) > 1 or len(self.h5) > 1

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def as_dict(self) -> dict:
        d = asdict(self)
        d["flexible"] = self.flexible
        d["generic"] = {str(k): v for k, v in sorted(self.generic.items())}
        return d


def _mismatch(report: EntryReport, name: str, expected, computed):
    if expected != computed:
        report.mismatches.append({"field": name, "expected": expected, "computed": computed})


def _oracle_check(family, points) -> dict:
    """Compare oracle h's against rank values at each point; also h_k = b_k for k <= 2."""
    g = family.algebra
    m = family.m
    checked, agree, low_ok, identities_ok = [], True, True, True
    for pt in points:
        f = FixedSymplecticForm(g, family.point_form(pt))
        prof = harmonic_profile(f, family.ring)
        via_rank = harmonic_betti_via_rank(family, pt)
        same = all(prof.h[d] == v for d, v in via_rank.items() if v is not None)
        low = all(prof.h[k] == prof.betti[k] for k in range(min(2, m) + 1))
        ids = identity_suite(f, family.ring).ok
        agree &= same
        low_ok &= low
        identities_ok &= ids
        checked.append({"point": format_point(pt), "h": prof.h, "rank_values": {str(k): v for k, v in via_rank.items()},
                        "agree": same})
    return {"points": checked, "agree": agree, "h_low_equals_betti": low_ok, "identities": identities_ok}


def _structural(family, exploration) -> dict:
    """Parity and duality checks that hold for every symplectic algebra."""
    ring = family.ring
    g = family.algebra
    m = family.m
    b = ring.betti_numbers()
    out = {}
    out["poincare_nonsingular"] = all(
        rank(pairing_matrix(ring, k)) == b[k] for k in range(g.n + 1)
    )
    if exploration is not None:
        top_odd = 2 * m - 1
        out["h_top_minus_one_even"] = all(r % 2 == 0 for r in exploration.value_set(top_odd))
        out["semicontinuity"] = all(
            r <= exploration.generic[d] for d in exploration.generic for r in exploration.value_set(d)
        )
        pts = [p for vals in exploration.values.values() for p in vals.values()]
        rho_even = True
        for p in pts[:4]:
            w = family.point_form(p)
            for k in range((m - 1) // 2 + 1):
                _, r = rho_form(g, ring, w, k)
                rho_even &= r % 2 == 0
        out["rho_even"] = rho_even
    return out


def run_entry(entry: CatalogEntry, points: int = 8, seed: int | None = None,
              oracle_points: int = 2) -> EntryReport:
    seed = default_seed() if seed is None else seed
    try:
        g = build_algebra(entry.structure, name=entry.structure)
        family = build_family(g, h2_basis=h2_basis_forms(entry, g.n))
    except Exception as exc:
        raise type(exc)(f"row {entry.index} {entry.structure}: {exc}") from exc
    ring = family.ring
    rep = EntryReport(entry.index, g.spec_string(),
                      entry.reducible, ring.betti_numbers(), g.step_length(), family.is_admissible(),
                      str(family.pf))
    b = rep.betti
    _mismatch(rep, "b1", entry.b1, b[1])
    _mismatch(rep, "b2", entry.b2, b[2])
    _mismatch(rep, "6-s", entry.co_step, g.n - rep.step)
    _mismatch(rep, "symplectic", entry.symplectic, rep.admissible)
    rep.structural["b3 = 2(b2-b1+1)"] = b[3] == 2 * (b[2] - b[1] + 1)
    if not rep.admissible:
        rep.structural.update(_structural(family, None))
        _mismatch(rep, "structural", True, all(rep.structural.values()))
        return rep

    rep.moduli = moduli_dim(g, family)
    _mismatch(rep, "moduli", entry.moduli, rep.moduli)
    if entry.pf_condition:
        cond = MultiPoly.parse(entry.pf_condition, family.variables)
        ratio = family.pf.scalar_multiple_of(cond)
        rep.pf_ratio = None if ratio is None else str(ratio)
        _mismatch(rep, "Pf proportional to condition", True, ratio is not None and ratio != 0)

    strata = [rules for rules, _ in entry.strata]
    ex = explore_ranks(family, strata, points, seed)
    rep.generic = dict(ex.generic)
    rep.h4 = sorted(ex.value_set(4))
    rep.h5 = sorted(ex.value_set(5))
    _mismatch(rep, "h4", sorted(entry.h4), rep.h4)
    _mismatch(rep, "h5", sorted(entry.h5), rep.h5)
    _mismatch(rep, "generic h4 is max", max(entry.h4), ex.generic.get(4))

    expected_strata = {rules: exp for rules, exp in entry.strata}
    for st in ex.strata:
        degree = 2 * family.m - st.source
        rules = ",".join(f"{k}={v}" for k, v in st.constraints.items())
        row = {"constraints": rules, "degree": degree, "rank": st.rank, "witness": format_point(st.witness)}
        rep.strata.append(row)
    for rules, exp in expected_strata.items():
        found = {}
        for st in ex.strata:
            if _same_rules(st.constraints, rules, family.variables):
                found[2 * family.m - st.source] = st.rank
        for degree, r in exp.items():
            _mismatch(rep, f"stratum {rules} h{degree}", r, found.get(degree))

    cert = flexibility_certificate(family, strata, points, seed, exploration=ex)
    if cert is not None:
        k = 2 * family.m - cert.degree
        seg = segment_rank_check(family, cert.point0, cert.point1, k) if k in (1, 2) else None
        rep.certificate = {"degree": cert.degree, "point0": format_point(cert.point0), "rank0": cert.rank0,
                           "point1": format_point(cert.point1), "rank1": cert.rank1, "segment_check": seg,
                           "summary": cert.describe()}
        if seg is not None:
            _mismatch(rep, "segment check", True, seg)
    _mismatch(rep, "flexible", entry.flexible, cert is not None)

    oracle_pts = symplectic_points(family, oracle_points, seed)
    if cert is not None:
        oracle_pts += [cert.point0, cert.point1]
    rep.oracle = _oracle_check(family, oracle_pts)
    _mismatch(rep, "oracle agrees with ranks", True, rep.oracle["agree"])
    _mismatch(rep, "h_k = b_k for k <= 2", True, rep.oracle["h_low_equals_betti"])
    _mismatch(rep, "identity suite", True, rep.oracle["identities"])
    rep.structural.update(_structural(family, ex))
    _mismatch(rep, "structural", True, all(rep.structural.values()))
    return rep


def _same_rules(constraints: dict, text: str, variables) -> bool:
    from .poly import parse_constraints

    other = parse_constraints(text, variables)
    return set(other) == set(constraints) and all(other[k] == constraints[k] for k in other)


# -- four-dimensional checks ------------------------------------------------------

def four_dim_h3(structure: str, points: int = 2, seed: int | None = None) -> dict:
    """``h_3`` from the oracle at several symplectic points, with ``b_1``."""
    g = build_algebra(structure)
    family = build_family(g)
    values = set()
    for pt in symplectic_points(family, points, default_seed() if seed is None else seed):
        f = FixedSymplecticForm(g, family.point_form(pt))
        values.add(harmonic_profile(f, family.ring).h[3])
    return {"structure": structure, "b1": family.ring.betti(1), "h3": sorted(values)}


def kt_cup_images() -> dict:
    """Dimensions of ``[omega] ^ H^1`` and of the cup image ``H^1 x H^2 -> H^3`` for
    the Kodaira-Thurston algebra."""
    g = build_algebra(KODAIRA_THURSTON)
    ring = compute_cohomology(g)
    omega = parse_form(KT_OMEGA, 4)
    im_l = rank(ring.multiplication_matrix(omega, 1))
    images = []
    for a in ring.basis_forms(1):
        for b in ring.basis_forms(2):
            images.append(ring.coordinates(wedge(a, b), check=False))
    im_cup = span_rank(images, ring.betti(3))
    return {"im_L": im_l, "im_cup": im_cup, "b3": ring.betti(3)}


# -- verification -------------------------------------------------------------------

@dataclass
class VerifyReport:
    rows: list[EntryReport]
    four_dim: list[dict]
    kt: dict
    flexible: list[str]
    failures: list[dict] = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "rows": [r.as_dict() for r in self.rows],
            "four_dim": self.four_dim,
            "kodaira_thurston": self.kt,
            "flexible": self.flexible,
            "failures": self.failures,
            "ok": self.ok,
        }


def run_catalog(entries=SIX_DIM, points: int = 8, seed: int | None = None, jobs: int = 1) -> list[EntryReport]:
    seed = default_seed() if seed is None else seed
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(lambda e: run_entry(e, points, seed), entries))
    return [run_entry(e, points, seed) for e in entries]


def verify_all(points: int = 8, seed: int | None = None, jobs: int = 1) -> VerifyReport:
    seed = default_seed() if seed is None else seed
    rows = run_catalog(SIX_DIM, points, seed, jobs)
    failures = [dict(row=r.index, structure=r.structure, **m) for r in rows for m in r.mismatches]
    flexible = [r.structure for r in rows if r.flexible]
    expected_flex = sorted(format_spec(parse_spec(s)) for s in FLEXIBLE_STRUCTURES)
    if sorted(flexible) != expected_flex:
        failures.append({"row": None, "field": "flexible set", "expected": expected_flex, "computed": sorted(flexible)})
    four = []
    for e in FOUR_DIM:
        res = four_dim_h3(e.structure, seed=seed)
        four.append(res)
        if res["b1"] != e.b1 or res["h3"] != [e.h3]:
            failures.append({"row": e.structure, "field": "(b1, h3)", "expected": [e.b1, [e.h3]],
                             "computed": [res["b1"], res["h3"]]})
    kt = kt_cup_images()
    if (kt["im_L"], kt["im_cup"]) != (2, 3):
        failures.append({"row": KODAIRA_THURSTON, "field": "cup images", "expected": [2, 3],
                         "computed": [kt["im_L"], kt["im_cup"]]})
    return VerifyReport(rows, four, kt, flexible, failures, seed)


# -- output ---------------------------------------------------------------------------

def _fmt_set(values) -> str:
    return ",".join(str(v) for v in values) if values else "-"


def _table_row(r: EntryReport) -> dict:
    b = r.betti
    return {
        "b1": b[1], "b2": b[2], "s": len(b) - 1 - r.step,
        "h4": _fmt_set(r.h4), "h5": _fmt_set(r.h5),
        "moduli": "-" if r.moduli is None else r.moduli,
        "flexible": "yes" if r.flexible else "no",
        "structure": r.structure,
    }


def emit(report, fmt: str = "markdown") -> str:
    """Serialise a ``VerifyReport``, a list of ``EntryReport`` or one ``EntryReport``."""
    if isinstance(report, VerifyReport):
        rows = report.rows
    elif isinstance(report, EntryReport):
        rows = [report]
    else:
        rows = list(report)
    fmt = {"md": "markdown"}.get(fmt, fmt)
    if fmt == "json":
        if isinstance(report, VerifyReport):
            obj = report.as_dict()
        elif isinstance(report, EntryReport):
            obj = {"schema_version": SCHEMA_VERSION, **report.as_dict()}
        else:
            obj = {"schema_version": SCHEMA_VERSION, "rows": [r.as_dict() for r in rows]}
        return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(_table_row(r))
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| b1 | b2 | 6-s | Structure | sum | h4 | h5 | moduli | flexible | status |",
                 "|---|---|---|---|---|---|---|---|---|---|"]
        for r in rows:
            t = _table_row(r)
            status = "ok" if r.ok else "differs: " + ", ".join(m["field"] for m in r.mismatches)
            lines.append(f"| {t['b1']} | {t['b2']} | {t['s']} | {r.structure} | {r.reducible} | {t['h4']} | "
                         f"{t['h5']} | {t['moduli']} | {t['flexible']} | {status} |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; use markdown, csv or json")


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")
