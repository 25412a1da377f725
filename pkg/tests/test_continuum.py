"""Continuum operators, checked against independent sympy transcriptions."""

import json
from pathlib import Path

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from gaugecodes import continuum as ct
from gaugecodes.continuum import (
    DiffOpMatrix,
    DiffPoly,
    LambdaKind,
    PositionPoly,
    builtin_continuum,
    bulmash_perturbation,
    conservation_identities,
    d111,
    dmix,
    f2_to_continuum,
    format_maxwell,
    formal_adjoint,
    is_symplectic,
    matrix_from_json,
    matrix_to_json,
    maxwell,
    substitute,
)
from gaugecodes.polyform import builtin_map, parse_poly

GOLDEN = Path(__file__).parent / "golden"
D1, D2, D3 = sp.symbols("d1 d2 d3")
A0, A1, A2, A3 = sp.symbols("A0 A1 A2 A3")


def to_sympy(p: DiffPoly, syms=(D1, D2, D3)):
    return sp.Add(*[c * sp.Mul(*[s ** k for s, k in zip(syms, e)]) for e, c in p.terms.items()])


def rows_to_sympy(M: DiffOpMatrix, fields):
    return [sp.expand(sum(to_sympy(p) * f for p, f in zip(row, fields))) for row in M.entries]


def d(i, k=1):
    return DiffPoly.d(3, i, k)


# -- substitution ----------------------------------------------------------------------


def test_substitution_examples():
    assert substitute(parse_poly("1+x+y+z", 3)) == d111()
    assert substitute(parse_poly("1+xy+yz+xz", 3)) == dmix()
    p = f2_to_continuum(builtin_map("toric2"))
    assert p.entries[0][0] == -DiffPoly.d(2, 0)


def test_substitution_drops_even_coefficients():
    # (1+d)^2 = 1 + 2d + d^2: the middle term is even
    assert substitute(parse_poly("x^2", 1)) == DiffPoly(1, {(0,): 1, (2,): 1})
    assert substitute(parse_poly("1+x^2", 1)) == DiffPoly(1, {(2,): 1})


def test_u1_static_is_the_toric3_image():
    u1 = builtin_continuum("u1_static")
    assert u1.phi == f2_to_continuum(builtin_map("toric3"))
    assert [u1.phi.entries[r][0] for r in range(3)] == [-d(0), -d(1), -d(2)]


def test_haah_matches_substitution_defaults():
    assert builtin_continuum("haah").phi == f2_to_continuum(builtin_map("haah"))


# -- adjoint ---------------------------------------------------------------------------


def test_adjoint_examples():
    assert formal_adjoint(DiffOpMatrix(3, [[d(0)]])) == DiffOpMatrix(3, [[-d(0)]])
    assert formal_adjoint(DiffOpMatrix(3, [[d(0) * d(1)]])) == DiffOpMatrix(3, [[d(0) * d(1)]])
    charge = builtin_continuum("xcube").phi
    row = formal_adjoint(charge).entries[0]
    assert list(row) == [-d(1) * d(2), -d(0) * d(2), -d(0) * d(1), DiffPoly.zero(3), DiffPoly.zero(3), DiffPoly.zero(3)]


def diffpolys(nvars=3, deg=3):
    expo = st.tuples(*[st.integers(0, deg)] * nvars)
    return st.dictionaries(expo, st.integers(-3, 3), max_size=4).map(lambda t: DiffPoly(nvars, t))


def diffmats(rows, cols):
    return st.lists(st.lists(diffpolys(), min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda e: DiffOpMatrix(3, e)
    )


@given(diffmats(2, 3))
def test_adjoint_is_an_involution(M):
    assert formal_adjoint(formal_adjoint(M)) == M


@given(diffmats(2, 3), diffmats(3, 2))
def test_adjoint_reverses_products(A, B):
    assert formal_adjoint(A @ B) == formal_adjoint(B) @ formal_adjoint(A)


# -- symplectic and Maxwell ---------------------------------------------------------------------------


@pytest.mark.parametrize("family", ["u1_static", "u1_4d", "xcube", "haah"])
def test_builtins_are_symplectic(family):
    check = is_symplectic(builtin_continuum(family))
    assert check.ok and check.residual.is_zero()


def test_bulmash_perturbation_breaks_symplectic():
    bad = bulmash_perturbation(builtin_continuum("haah"))
    check = is_symplectic(bad)
    assert not check.ok
    four = DiffPoly.const(3, 4) * d111() * d111()
    nonzero = {(r, c) for r, row in enumerate(check.residual.entries) for c, p in enumerate(row) if not p.is_zero()}
    assert nonzero == {(0, 1), (1, 0)}
    assert {check.residual.entries[0][1], check.residual.entries[1][0]} == {four, -four}


def test_xcube_maxwell_matches_transcription():
    mw = maxwell(builtin_continuum("xcube"))
    got = rows_to_sympy(mw, (A0, A1, A2, A3))
    expected = [
        (D1**2 * D2**2 + D2**2 * D3**2 + D3**2 * D1**2) * A0,
        D2**2 * (A3 - A1) - D3**2 * (A1 - A2),
        D3**2 * (A1 - A2) - D1**2 * (A2 - A3),
        D1**2 * (A2 - A3) - D2**2 * (A3 - A1),
    ]
    assert [sp.expand(g - e) for g, e in zip(got, expected)] == [0, 0, 0, 0]


def test_haah_maxwell_matches_transcription():
    mw = maxwell(builtin_continuum("haah"))
    got = rows_to_sympy(mw, (A0, A1))
    mix = D1 * D2 + D2 * D3 + D1 * D3
    diag = mix**2 - (D1 + D2 + D3) ** 2
    assert [sp.expand(g - e) for g, e in zip(got, [diag * A0, diag * A1])] == [0, 0]


@pytest.mark.parametrize("family", ["xcube", "haah"])
def test_maxwell_golden_files(family):
    text = format_maxwell(builtin_continuum(family))
    assert text == (GOLDEN / ("%s_maxwell.txt" % family)).read_text().rstrip("\n")


def test_maxwell_requires_inner_pairing():
    with pytest.raises(ValueError):
        maxwell(builtin_continuum("xcube").with_lambda(LambdaKind.SYMPLECTIC))


# -- conservation identities ------------------------------------------------------------------------


@pytest.mark.parametrize("family", ct.CONTINUUM_FAMILIES)
def test_all_identities_hold(family):
    results = conservation_identities(builtin_continuum(family))
    assert results and all(r.ok for r in results), [r for r in results if not r.ok]


def test_xcube_row_sum_and_transverse_pairs():
    mw = maxwell(builtin_continuum("xcube"))
    row_sum = [mw.entries[1][c] + mw.entries[2][c] + mw.entries[3][c] for c in range(4)]
    assert all(p.is_zero() for p in row_sum)
    names = {r.name for r in conservation_identities(builtin_continuum("xcube")) if r.kind == "transverse"}
    for pair in ("(1,2)", "(1,3)", "(2,3)"):
        assert "transverse j0 over %s" % pair in names


def test_transverse_check_can_fail():
    # a row holding a bare d1^2 term does not meet the pair (2,3)
    gs = builtin_continuum("xcube")
    mw = maxwell(gs)
    entries = [list(r) for r in mw.entries]
    entries[0][0] = entries[0][0] + d(0, 2)
    results = conservation_identities(gs, DiffOpMatrix(3, entries))
    failed = [r for r in results if not r.ok]
    assert [r.name for r in failed] == ["transverse j0 over (2,3)"]


def test_u1_divergence_identity():
    gs = builtin_continuum("u1_4d")
    div = gs.identities[0].matrix
    assert (div @ maxwell(gs)).is_zero()


def test_haah_kernel_witnesses():
    witnesses = ct.haah_kernel_witnesses()
    phi = builtin_continuum("haah").phi
    for w in witnesses:
        zero = PositionPoly.zero(3)
        assert all(f.is_zero() for f in phi.apply([w, zero]))
        assert all(f.is_zero() for f in phi.apply([zero, w]))
    # a generic cubic is not annihilated
    x1 = PositionPoly.linear((1, 0, 0))
    assert not all(f.is_zero() for f in phi.apply([x1 * x1 * x1, PositionPoly.zero(3)]))


# -- serialization -------------------------------------------------------------------------------------


@pytest.mark.parametrize("family", ct.CONTINUUM_FAMILIES)
def test_json_roundtrip(family):
    phi = builtin_continuum(family).phi
    assert matrix_from_json(json.loads(json.dumps(matrix_to_json(phi)))) == phi


def test_sign_choice_is_stable_under_repeated_conversion():
    a = f2_to_continuum(builtin_map("xcube"))
    b = f2_to_continuum(builtin_map("xcube"))
    assert a == b and hash(a) == hash(b)
