"""Command line entry point: ``nilflex table|analyze|harmonic|verify|product``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .algebra import build_algebra
from .catalog import SIX_DIM
from .harmonic import FixedSymplecticForm, harmonic_profile, identity_suite, product_star_check
from .pipeline import SCHEMA_VERSION, emit, run_catalog, verify_all
from .symplectic import (
    build_family,
    default_seed,
    explore_ranks,
    flexibility_certificate,
    moduli_dim,
    parse_point,
    product_harmonic_betti,
)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _form(spec: str, point: str):
    g = build_algebra(spec)
    family = build_family(g)
    pt = parse_point(point)
    family.require_symplectic(pt)
    return g, family, family.point_form(pt)


def cmd_table(args) -> int:
    rows = run_catalog(SIX_DIM, args.points, args.seed, args.jobs)
    _write(emit(rows, args.format), args.out)
    return 0


def cmd_analyze(args) -> int:
    g = build_algebra(args.spec)
    family = build_family(g)
    ring = family.ring
    print(f"algebra      {g.spec_string()}")
    print(f"betti        {ring.betti_numbers()}")
    print(f"step length  {g.step_length()}")
    print(f"H^2 basis    {', '.join(str(f) for f in ring.basis_forms(2))}")
    print(f"Pf           {family.pf}")
    if g.n % 2 or not family.is_admissible():
        print("no symplectic structure")
        return 0
    print(f"moduli dim   {moduli_dim(g, family)}")
    ex = explore_ranks(family, points=args.points, seed=args.seed)
    for degree in sorted(ex.generic, reverse=True):
        print(f"h{degree}           generic {ex.generic[degree]}, observed {sorted(ex.value_set(degree))}")
    cert = flexibility_certificate(family, points=args.points, seed=args.seed, exploration=ex)
    print("flexible     " + (cert.describe() if cert else "no certificate found"))
    return 0


def cmd_harmonic(args) -> int:
    g, family, omega = _form(args.spec, args.omega)
    f = FixedSymplecticForm(g, omega)
    prof = harmonic_profile(f, family.ring)
    rep = identity_suite(f, family.ring)
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "omega": str(omega), **prof.as_dict(),
                          "identities": rep.summary()}, indent=2, sort_keys=True))
    else:
        print(f"omega        {omega}")
        print(f"b            {prof.betti}")
        print(f"h            {prof.h}  (h3 is the homogeneous value)" if g.n >= 6 else f"h            {prof.h}")
        print(f"h*           {prof.h_star}")
        print(f"dim Omega_hr {prof.omega_hr}")
        for name, ok in rep.summary().items():
            print(f"  {'ok  ' if ok else 'FAIL'} {name}")
    return 0 if rep.ok else 1


def cmd_verify(args) -> int:
    report = verify_all(args.points, args.seed, args.jobs)
    if args.format != "text":
        _write(emit(report, args.format), args.out)
    else:
        ok_rows = sum(r.ok for r in report.rows)
        print(f"rows matching: {ok_rows}/{len(report.rows)}")
        print(f"flexible: {len(report.flexible)} ({', '.join(report.flexible)})")
        for r in report.four_dim:
            print(f"4-dim {r['structure']}: b1 = {r['b1']}, h3 = {r['h3']}")
        print(f"Kodaira-Thurston: Im L = {report.kt['im_L']}, Im(H1 x H2 -> H3) = {report.kt['im_cup']}")
        for f in report.failures:
            print(f"MISMATCH row {f['row']} {f.get('structure', '')} {f['field']}: "
                  f"expected {f['expected']}, computed {f['computed']}")
    if args.strict:
        return 0 if report.ok else 1
    return 0


def cmd_product(args) -> int:
    g1, _, w1 = _form(args.spec1, args.omega1)
    g2, _, w2 = _form(args.spec2, args.omega2)
    pb = product_harmonic_betti(g1, w1, g2, w2)
    star = product_star_check(FixedSymplecticForm(g1, w1), FixedSymplecticForm(g2, w2))
    for k in sorted(pb.direct, reverse=True):
        print(f"h{k}: direct {pb.direct[k]}, formula {pb.formula[k]}")
    print(f"h of product     {star.h_product}")
    print(f"sum of products  {star.h_sum}")
    print(f"star on products {'ok' if star.star_ok else 'FAIL'}")
    print(f"harmonic products harmonic {'ok' if star.harmonic_inclusion_ok else 'FAIL'}")
    return 0 if pb.consistent() and star.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilflex", description="Symplectically harmonic Betti numbers of nilpotent Lie algebras")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def sampling(sp):
        sp.add_argument("--points", type=int, default=8, help="random symplectic samples per family")
        sp.add_argument("--seed", type=int, default=None, help="sampling seed (default: $NILFLEX_SEED or %d)" % default_seed())

    t = sub.add_parser("table", help="recompute the six-dimensional table")
    t.add_argument("--format", choices=["md", "markdown", "csv", "json"], default="md")
    t.add_argument("--out")
    t.add_argument("--jobs", type=int, default=1)
    sampling(t)
    t.set_defaults(func=cmd_table)

    a = sub.add_parser("analyze", help="cohomology, Pf and Lefschetz ranks of one algebra")
    a.add_argument("spec")
    sampling(a)
    a.set_defaults(func=cmd_analyze)

    h = sub.add_parser("harmonic", help="harmonic dimensions and identity suite at one form")
    h.add_argument("spec")
    h.add_argument("--omega", required=True, help='coefficients on the H^2 basis, e.g. "A=1,B=0,C=2"')
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_harmonic)

    v = sub.add_parser("verify", help="compare everything against the embedded expected values")
    v.add_argument("--strict", action="store_true", help="exit 1 on any mismatch")
    v.add_argument("--format", choices=["text", "md", "markdown", "csv", "json"], default="text")
    v.add_argument("--out")
    v.add_argument("--jobs", type=int, default=1)
    sampling(v)
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("product", help="harmonic Betti numbers of a product")
    pr.add_argument("spec1")
    pr.add_argument("spec2")
    pr.add_argument("--omega1", required=True)
    pr.add_argument("--omega2", required=True)
    pr.set_defaults(func=cmd_product)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
