from fractions import Fraction

import pytest

from nilflex.algebra import KForm, build_algebra
from nilflex.catalog import by_structure, h2_basis_forms, parse_form
from nilflex.poly import MultiPoly
from nilflex.symplectic import (
    NotSymplectic,
    StratumError,
    build_family,
    explore_ranks,
    flexibility_certificate,
    generic_rank_certificate,
    harmonic_betti_via_rank,
    lefschetz_matrix,
    moduli_dim,
    parse_point,
    product_harmonic_betti,
    rank_on_stratum,
    segment_rank_check,
    symplectic_points,
)


def catalog_family(spec):
    e = by_structure(spec)
    return e, build_family(build_algebra(e.structure), h2_basis=h2_basis_forms(e))


@pytest.mark.parametrize("spec", [
    "(0,0,12,13,23,14-25)", "(0,0,0,12,14,15+23+24)", "(0,0,0,12,13+14,24)",
    "(0,0,0,12,13,23)", "(0,0,0,0,12,13)",
])
def test_pf_is_condition_polynomial_up_to_scalar(spec):
    e, fam = catalog_family(spec)
    ratio = fam.pf.scalar_multiple_of(MultiPoly.parse(e.pf_condition, fam.variables))
    assert ratio is not None and ratio != 0


def test_filiform_case_strata():
    e, fam = catalog_family("(0,0,12,13,23,14-25)")
    lm = lefschetz_matrix(fam, 2)
    assert generic_rank_certificate(lm, fam).rank == 4
    assert rank_on_stratum(lm, fam, "C=D").rank == 3
    assert rank_on_stratum(lm, fam, "C=-D").rank == 3
    assert rank_on_stratum(lm, fam, "C=D,A=-2B").rank == 2
    assert rank_on_stratum(lm, fam, "C=-D,A=2B").rank == 2


def test_degenerate_stratum_rejected():
    _, fam = catalog_family("(0,0,12,13,23,14-25)")
    with pytest.raises(StratumError):
        rank_on_stratum(lefschetz_matrix(fam, 2), fam, "C=0,D=0")


def test_curved_strata_drop_rank():
    for spec in ("(0,0,0,12,13+14,24)", "(0,0,0,12,13,23)", "(0,0,0,0,12,13)"):
        e, fam = catalog_family(spec)
        rules, expected = e.strata[0]
        st = rank_on_stratum(lefschetz_matrix(fam, 2), fam, rules)
        assert st.rank == expected[4]
        assert fam.is_symplectic(st.witness)


def test_dash_rows_have_identically_zero_pf():
    fam = build_family(build_algebra("(0,0,12,13,14+23,34+52)"))
    assert fam.pf.is_zero()
    with pytest.raises(NotSymplectic):
        moduli_dim(fam.algebra, fam)


def test_certificate_and_segment():
    _, fam = catalog_family("(0,0,12,13,23,14-25)")
    cert = flexibility_certificate(fam, ["C=D,A=-2B"])
    assert cert.degree == 4 and cert.rank0 < cert.rank1
    assert fam.is_symplectic(cert.point0) and fam.is_symplectic(cert.point1)
    assert segment_rank_check(fam, cert.point0, cert.point1, 2)


def test_non_flexible_row_has_no_certificate():
    fam = build_family(build_algebra("(0,0,0,12,13,24)"))
    assert flexibility_certificate(fam) is None
    assert explore_ranks(fam).value_set(4) == {5}


def test_sampling_is_deterministic():
    _, fam = catalog_family("(0,0,0,0,12,13)")
    assert symplectic_points(fam, 4, seed=7) == symplectic_points(fam, 4, seed=7)


def test_seed_from_environment(monkeypatch):
    _, fam = catalog_family("(0,0,12,13,23,14-25)")
    monkeypatch.setenv("NILFLEX_SEED", "5")
    a = symplectic_points(fam, 3)
    assert a == symplectic_points(fam, 3, seed=5)


def test_rank_values_on_kt():
    fam = build_family(build_algebra("(0,0,12,0)"))
    pt = {v: 0 for v in fam.variables}
    pt.update(parse_point("B=1,C=1"))
    assert harmonic_betti_via_rank(fam, pt) == {4: 1, 3: 2, 2: 4}


def test_product_formula_kt_times_plane():
    kt = build_algebra("(0,0,12,0)")
    pb = product_harmonic_betti(kt, parse_form("14+23", 4), build_algebra("(0,0)"), KForm.basic(2, 1, 2))
    assert pb.direct == {5: 4, 4: 9}
    assert pb.consistent()


def test_parse_point():
    assert parse_point("A=1, B=-1/2") == {"A": 1, "B": Fraction(-1, 2)}
