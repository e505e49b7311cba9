import pytest

from nilflex.algebra import KForm, build_algebra
from nilflex.catalog import SIX_DIM, by_structure, h2_basis_forms
from nilflex.cohomology import compute_cohomology, pairing_matrix, poincare_pairing, rho_form
from nilflex.linalg import NotACocycle, rank


@pytest.mark.parametrize("entry", SIX_DIM, ids=lambda e: e.structure)
def test_betti_numbers_against_table(entry):
    b = compute_cohomology(build_algebra(entry.structure)).betti_numbers()
    assert (b[1], b[2]) == (entry.b1, entry.b2)
    assert b == b[::-1]
    assert b[3] == 2 * (b[2] - b[1] + 1)


def test_filiform_case_cohomology():
    assert compute_cohomology(build_algebra("(0,0,12,13,23,14-25)")).betti_numbers() == [1, 2, 4, 6, 4, 2, 1]


def test_preferred_basis_is_used():
    e = by_structure("(0,0,12,13,23,14-25)")
    g = build_algebra(e.structure)
    ring = compute_cohomology(g, {2: h2_basis_forms(e)})
    assert ring.basis_forms(2) == h2_basis_forms(e)
    assert ring.coordinates(h2_basis_forms(e)[2]) == (0, 0, 1, 0)


def test_non_closed_preferred_rejected():
    g = build_algebra("(0,0,12,0)")
    with pytest.raises(ValueError):
        compute_cohomology(g, {2: [KForm.basic(4, 1, 3), KForm.basic(4, 3, 4)]})


def test_exact_forms_are_zero_classes():
    g = build_algebra("(0,0,12,0)")
    ring = compute_cohomology(g)
    assert ring.cls(g.d(KForm.basic(4, 3))).is_zero()
    with pytest.raises(NotACocycle):
        ring.coordinates(KForm.basic(4, 3, 4))


def test_cup_product_and_pairing():
    g = build_algebra("(0,0,12,0)")
    ring = compute_cohomology(g)
    a1, a2 = ring.cls(KForm.basic(4, 1)), ring.cls(KForm.basic(4, 2))
    assert (a1 * a2).is_zero()
    top = ring.cls(KForm.basic(4, 1, 4)) * ring.cls(KForm.basic(4, 2, 3))
    assert top.coordinates != (0,)
    assert poincare_pairing(ring.cls(KForm.basic(4, 1, 4)), ring.cls(KForm.basic(4, 2, 3))) == 1


@pytest.mark.parametrize("spec", ["(0,0,12,0)", "(0,0,12,13,23,14-25)", "(0,0,0,0,12,13)"])
def test_poincare_pairing_nonsingular(spec):
    ring = compute_cohomology(build_algebra(spec))
    for k in range(ring.n + 1):
        assert rank(pairing_matrix(ring, k)) == ring.betti(k)


def test_rho_is_even_rank():
    g = build_algebra("(0,0,0,12,13,23)")
    ring = compute_cohomology(g)
    w = KForm.basic(6, 1, 4) + KForm.basic(6, 2, 6) + KForm.basic(6, 3, 5) + KForm.basic(6, 1, 6)
    for k in (0, 1):
        _, r = rho_form(g, ring, w, k)
        assert r % 2 == 0
