import pytest

from nilflex.algebra import KForm, build_algebra
from nilflex.catalog import parse_form
from nilflex.harmonic import (
    FixedSymplecticForm,
    contraction_sign,
    harmonic_profile,
    identity_suite,
    product_star_check,
)
from nilflex.symplectic import NotSymplectic, build_family, harmonic_betti_via_rank, symplectic_points

KT = build_algebra("(0,0,12,0)")
KT_W = parse_form("14+23", 4)


def test_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        FixedSymplecticForm(KT, KForm.basic(4, 1, 2))  # degenerate
    with pytest.raises(NotSymplectic):
        FixedSymplecticForm(KT, KForm.basic(4, 3, 4) + KForm.basic(4, 1, 2))  # not closed


def test_star_pairing_definition():
    f = FixedSymplecticForm(KT, KT_W)
    vol = f.volume.top_coefficient()
    from nilflex.algebra import basis, wedge

    for k in range(5):
        for I in basis(4, k):
            for J in basis(4, k):
                lhs = wedge(KForm(4, k, {I: 1}), f.star(KForm(4, k, {J: 1}))).top_coefficient()
                assert lhs == f.lambda_pi(I, J) * vol


def test_kt_harmonic_numbers():
    prof = harmonic_profile(FixedSymplecticForm(KT, KT_W))
    assert prof.h == [1, 3, 4, 2, 1]
    assert prof.h_star == [1, 2, 4, 3, 1]


def test_identity_suite_on_kt_and_torus():
    for g, w in ((KT, KT_W), (build_algebra("(0,0,0,0)"), parse_form("12+34", 4))):
        rep = identity_suite(FixedSymplecticForm(g, w))
        assert rep.ok, [str(r) for r in rep.failures()]


def test_literal_fourth_commutator_fails_for_both_bivector_signs():
    # [L,delta] = -d and [L*,d] = -delta cannot hold together with
    # L* = -*L* and delta = (-1)^{k+1}*d*: flipping Pi flips delta but not L*.
    for sign in (1, -1):
        f = FixedSymplecticForm(KT, KT_W, pi_sign=sign)
        k = 2
        l_delta = f.L_mat(k - 1) @ f.delta_mat(k) - f.delta_mat(k + 2) @ f.L_mat(k)
        lstar_d = f.Lstar_mat(k + 1) @ f.d_mat(k) - f.d_mat(k - 2) @ f.Lstar_mat(k)
        assert not (l_delta == -f.d_mat(k) and lstar_d == -f.delta_mat(k))


def test_contraction_matches_star_formula():
    f = FixedSymplecticForm(build_algebra("(0,0,12,13,23,14-25)"),
                            parse_form("14", 6) + parse_form("15+24", 6) * 2 + parse_form("26-34", 6) * 3
                            + parse_form("16-35", 6))
    assert contraction_sign() in (1, -1)
    for k in range(1, 7):
        assert f.delta_bracket_mat(k) == f.delta_mat(k)


@pytest.mark.parametrize("spec", ["(0,0,12,13,23,14-25)", "(0,0,0,12,13,23)", "(0,0,12,13,14,15)"])
def test_oracle_equals_rank_formula(spec):
    g = build_algebra(spec)
    fam = build_family(g)
    for pt in symplectic_points(fam, 2, seed=3):
        prof = harmonic_profile(FixedSymplecticForm(g, fam.point_form(pt)), fam.ring)
        for degree, value in harmonic_betti_via_rank(fam, pt).items():
            if value is not None:
                assert prof.h[degree] == value


def test_scaling_invariance():
    g = build_algebra("(0,0,0,12,13,23)")
    fam = build_family(g)
    pt = symplectic_points(fam, 1, seed=1)[0]
    w = fam.point_form(pt)
    assert harmonic_profile(FixedSymplecticForm(g, w)).h == harmonic_profile(FixedSymplecticForm(g, w * -3)).h


def test_products():
    t2 = build_algebra("(0,0)")
    w2 = KForm.basic(2, 1, 2)
    r = product_star_check(FixedSymplecticForm(KT, KT_W), FixedSymplecticForm(t2, w2))
    assert r.ok and r.h_product[4:6] == [9, 4]
    r = product_star_check(FixedSymplecticForm(t2, w2),
                           FixedSymplecticForm(build_algebra("(0,0,0,0)"), parse_form("12+34", 4)))
    assert r.ok and r.h_product == [1, 6, 15, 20, 15, 6, 1]
