import pytest

from nilflex.algebra import (
    JacobiViolation,
    KForm,
    SpecError,
    build_algebra,
    direct_sum,
    format_spec,
    parse_spec,
    wedge,
    wedge_power,
)
from nilflex.catalog import SIX_DIM


def test_reversed_pair_normalised_with_sign():
    assert format_spec(parse_spec("(0,0,0,12,13+42,14+23)")) == "(0,0,0,12,13-24,14+23)"
    assert format_spec(parse_spec("(0,0,12,13,14,34+52)")) == "(0,0,12,13,14,-25+34)"


def test_strict_parse_rejects_forward_references():
    with pytest.raises(SpecError):
        parse_spec("(0,0,12,34,0,0)")


def test_jacobi_violation_reported():
    with pytest.raises(JacobiViolation, match="a124"):
        build_algebra("(0,0,12,34,0,0)", strict=False)
    with pytest.raises(JacobiViolation):
        build_algebra("(0,0,12,13,0,34)", strict=False)


@pytest.mark.parametrize("bad", ["(0,0,1)", "(0,0,12,0,0,0,0,0,0,0)", "(0,0,x)", "0,0,12"])
def test_malformed_specs(bad):
    with pytest.raises(SpecError):
        parse_spec(bad)


def test_wedge_sign_and_graded_commutativity():
    a = KForm.basic(6, 5)
    b = KForm.basic(6, 1, 4)
    assert wedge(a, b) == KForm.basic(6, 1, 4, 5)
    c = KForm.basic(6, 2)
    assert wedge(a, c) == wedge(c, a) * -1
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_d_squared_zero_on_catalog():
    for e in SIX_DIM:
        g = build_algebra(e.structure)
        for k in range(6):
            assert (g.differential_matrix(k + 1) @ g.differential_matrix(k)).is_zero()


@pytest.mark.parametrize("spec,step", [
    ("(0,0,12,13,14,15)", 5), ("(0,0,12,13,23,14-25)", 4), ("(0,0,0,0,0,12)", 2),
    ("(0,0,0,0,0,0)", 1), ("(0,0,0,12,13,14+23)", 3),
])
def test_step_length(spec, step):
    assert build_algebra(spec).step_length() == step


def test_direct_sum_shifts_indices():
    g = direct_sum(build_algebra("(0,0,12,0)"), build_algebra("(0,0)"))
    assert g.spec_string() == "(0,0,12,0,0,0)"


def test_volume_of_standard_form():
    w = KForm.basic(6, 1, 2) + KForm.basic(6, 3, 4) + KForm.basic(6, 5, 6)
    assert wedge_power(w, 3).top_coefficient() == 6
