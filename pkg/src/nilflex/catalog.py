"""Embedded catalogues: six-dimensional nilpotent Lie algebras with their
expected invariants, four-dimensional ones, and named strata for the
algebras whose harmonic Betti numbers vary."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import KForm


@dataclass(frozen=True)
class CatalogEntry:
    structure: str
    b1: int
    b2: int
    co_step: int  # 6 - s
    h4: frozenset = frozenset()
    h5: frozenset = frozenset()
    moduli: int | None = None
    reducible: str = ""
    # flexible rows: H^2 basis as printed, stratum rules, condition polynomials
    h2_basis: tuple[str, ...] = ()
    strata: tuple[tuple[str, dict], ...] = ()
    pf_condition: str = ""
    index: int = 0

    @property
    def symplectic(self) -> bool:
        return bool(self.h4)

    @property
    def flexible(self) -> bool:
        return len(self.h4) > 1 or len(self.h5) > 1


def parse_form(text: str, n: int) -> KForm:
    """``"16+25-34"`` -> alpha_16 + alpha_25 - alpha_34 (indices are single digits)."""
    form = None
    s = text.replace(" ", "")
    i = 0
    while i < len(s):
        sign = 1
        if s[i] in "+-":
            sign = -1 if s[i] == "-" else 1
            i += 1
        j = i
        while j < len(s) and s[j].isdigit():
            j += 1
        idx = [int(c) for c in s[i:j]]
        if not idx:
            raise ValueError(f"bad form {text!r}")
        term = KForm.basic(n, *idx, coeff=sign)
        form = term if form is None else form + term
        i = j
    return form


def _e(structure, b1, b2, cs, h4=(), h5=(), moduli=None, red="", **kw):
    return dict(structure=structure, b1=b1, b2=b2, co_step=cs, h4=frozenset(h4), h5=frozenset(h5),
                moduli=moduli, reducible=red, **kw)


_ROWS = [
    _e("(0,0,12,13,14+23,34+52)", 2, 2, 1),
    _e("(0,0,12,13,14,34+52)", 2, 2, 1),
    _e("(0,0,12,13,14,15)", 2, 3, 1, {3}, {0}, 7),
    _e("(0,0,12,13,14+23,24+15)", 2, 3, 1, {2}, {0}, 7),
    _e("(0,0,12,13,14,23+15)", 2, 3, 1, {2}, {0}, 7),
    _e("(0,0,12,13,23,14)", 2, 4, 2, {4}, {0}, 8),
    _e("(0,0,12,13,23,14-25)", 2, 4, 2, {2, 3, 4}, {0}, 8,
       h2_basis=("14", "15+24", "26-34", "16-35"),
       pf_condition="ACD-B(C^2+D^2)",
       strata=(("C=D", {4: 3}), ("C=-D", {4: 3}), ("C=D,A=-2B", {4: 2}), ("C=-D,A=2B", {4: 2}))),
    _e("(0,0,12,13,23,14+25)", 2, 4, 2, {4}, {0}, 8),
    _e("(0,0,0,12,14-23,15+34)", 3, 4, 2, {2}, {0}, 7),
    _e("(0,0,0,12,14,15+23)", 3, 5, 2, {4}, {2}, 8),
    _e("(0,0,0,12,14,15+23+24)", 3, 5, 2, {3, 4}, {0, 2}, 8,
       h2_basis=("13", "15", "23", "16+25-34", "26-45"),
       pf_condition="AE^2+BDE-CDE-D^3",
       strata=(("E=0", {4: 3, 5: 0}),)),
    _e("(0,0,0,12,14,15+24)", 3, 5, 2, {4}, {2}, 8, "1+5"),
    _e("(0,0,0,12,14,15)", 3, 5, 2, {4}, {2}, 8, "1+5"),
    _e("(0,0,0,12,13,14+35)", 3, 5, 3),
    _e("(0,0,0,12,23,14+35)", 3, 5, 3),
    _e("(0,0,0,12,23,14-35)", 3, 5, 3),
    _e("(0,0,0,12,14,24)", 3, 5, 3, red="1+5"),
    _e("(0,0,0,12,13+42,14+23)", 3, 5, 3, {3}, {0}, 8),
    _e("(0,0,0,12,14,13+42)", 3, 5, 3, {3}, {0}, 8),
    _e("(0,0,0,12,13+14,24)", 3, 5, 3, {2, 3}, {0}, 8,
       h2_basis=("13", "15", "23", "16+25+34", "26"),
       pf_condition="D(BE-D^2)",
       # EB + 3D^2 = 0, parametrised by D = U*E, B = -3*U^2*E
       strata=(("D=U*E,B=-3*U^2*E", {4: 2}),)),
    _e("(0,0,0,12,13,14+23)", 3, 6, 3, {3}, {0}, 9),
    _e("(0,0,0,12,13,24)", 3, 6, 3, {5}, {0}, 9),
    _e("(0,0,0,12,13,14)", 3, 6, 3, {4}, {0}, 9),
    _e("(0,0,0,12,13,23)", 3, 8, 4, {7, 8}, {0}, 9,
       h2_basis=("14", "15", "16+25", "16-34", "24", "26", "35", "36"),
       pf_condition="ACH-AFG-BDF-BEH+DC^2+CEG+CD^2+DEG",
       # C^2+CD+D^2-BF-EG+AH = 0 on the chart H = 1 (ranks are scale invariant)
       strata=(("H=1,A=B*F+E*G-C^2-C*D-D^2", {4: 7}),)),
    _e("(0,0,0,0,12,15+34)", 4, 6, 3),
    _e("(0,0,0,0,12,15)", 4, 7, 3, {3}, {2}, 9, "1+1+4"),
    _e("(0,0,0,0,12,14+25)", 4, 7, 3, {3}, {2}, 9, "1+5"),
    _e("(0,0,0,0,13+42,14+23)", 4, 8, 4, {7}, {2}, 10),
    _e("(0,0,0,0,12,14+23)", 4, 8, 4, {6}, {2}, 10),
    _e("(0,0,0,0,12,34)", 4, 8, 4, {7}, {2}, 10, "3+3"),
    _e("(0,0,0,0,12,13)", 4, 9, 4, {7, 8}, {2}, 11, "1+5",
       h2_basis=("14", "15", "16", "23", "24", "25", "34", "26+35", "36"),
       pf_condition="-AFI+H^2A+BEI-BGH-CEH+CFG",
       # H^2 - FI = 0 on the chart I = 1
       strata=(("I=1,F=H^2", {4: 7}),)),
    _e("(0,0,0,0,0,12+34)", 5, 9, 4, red="1+5"),
    _e("(0,0,0,0,0,12)", 5, 11, 4, {9}, {4}, 12, "1+1+1+3"),
    _e("(0,0,0,0,0,0)", 6, 15, 5, {15}, {6}, 15, "1+1+1+1+1+1"),
]

SIX_DIM: tuple[CatalogEntry, ...] = tuple(CatalogEntry(index=i + 1, **row) for i, row in enumerate(_ROWS))

FLEXIBLE_STRUCTURES = (
    "(0,0,12,13,23,14-25)",
    "(0,0,0,12,14,15+23+24)",
    "(0,0,0,12,13+14,24)",
    "(0,0,0,12,13,23)",
    "(0,0,0,0,12,13)",
)


@dataclass(frozen=True)
class FourDimEntry:
    structure: str
    b1: int
    h3: int
    name: str = ""


FOUR_DIM: tuple[FourDimEntry, ...] = (
    FourDimEntry("(0,0,12,13)", 2, 0, "filiform"),
    FourDimEntry("(0,0,12,0)", 3, 2, "Kodaira-Thurston"),
    FourDimEntry("(0,0,0,0)", 4, 4, "torus"),
)

# dx3 = x1 x2, omega = x1 x4 + x2 x3
KODAIRA_THURSTON = "(0,0,12,0)"
KT_OMEGA = "14+23"
HEISENBERG = "(0,0,12)"


def by_structure(structure: str) -> CatalogEntry:
    from .algebra import format_spec, parse_spec

    key = format_spec(parse_spec(structure))
    for e in SIX_DIM:
        if format_spec(parse_spec(e.structure)) == key:
            return e
    raise KeyError(structure)


def h2_basis_forms(entry: CatalogEntry, n: int = 6) -> list[KForm] | None:
    if not entry.h2_basis:
        return None
    return [parse_form(t, n) for t in entry.h2_basis]
