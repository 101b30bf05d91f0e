from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pde2ode.errors import PivotAtPointError
from pde2ode.lie import (StructureConstants, antisymmetry_defect, derived_algebra_dimension,
                         is_derived_abelian, jacobi_defect, linearizability_verdict,
                         parse_point, parse_vector_field, structure_constants)

# Basis under which the bracket table of the determining system is usually printed.
PRINTED = ["eta", "xi", "eta_y", "eta_x", "eta_xx"]


def printed_table(y):
    """Nonzero brackets of the symmetry algebra as functions of the point's y."""
    y = Fraction(y)
    return {(1, 2): {5: Fraction(1, 2)}, (1, 3): {1: 1, 3: -1 / y}, (1, 4): {4: -1 / y},
            (1, 5): {5: -1 / y}, (2, 3): {5: y / 2}, (2, 4): {1: 1, 3: -1 / y},
            (2, 5): {4: 1}, (3, 4): {4: -1}, (3, 5): {5: -1}}


def basis(det, data, order):
    byname = {det.signature.derivative_name(d): d for d in data.parametric}
    return [byname[n] for n in order]


def compute(det, data, y0, order=None):
    sig = det.signature
    vf = parse_vector_field("xi:x,eta:y", sig)
    b = basis(det, data, order) if order else None
    return structure_constants(det, data, vf, parse_point("x0=0,y0=%s" % y0, sig), b)


@pytest.mark.parametrize("y0", [2, 3, Fraction(-5, 7)])
def test_table_matches(det, det_data, y0):
    sc = compute(det, det_data, y0, PRINTED)
    assert sc.c == StructureConstants.from_brackets(5, printed_table(y0)).c


def test_declaration_basis_is_a_relabelling(det, det_data):
    # the same algebra in initial-data order (xi, eta, eta_x, eta_y, eta_xx)
    sc = compute(det, det_data, 2)
    perm = [PRINTED.index(det.signature.derivative_name(d)) for d in sc.basis]
    ref = StructureConstants.from_brackets(5, printed_table(2)).c
    for i in range(5):
        for j in range(5):
            for k in range(5):
                assert sc.c[i][j][k] == ref[perm[i]][perm[j]][perm[k]]


def test_diagonal_and_unprinted_vanish(det, det_data):
    for y0 in (2, 3):
        sc = compute(det, det_data, y0, PRINTED)
        for i in range(5):
            assert not any(sc.c[i][i])
        assert not any(sc.c[3][4])


def test_derived_algebra(det, det_data):
    sc = compute(det, det_data, 2, PRINTED)
    assert derived_algebra_dimension(sc) == 3
    assert is_derived_abelian(sc)
    assert linearizability_verdict(sc, 3)
    assert not linearizability_verdict(sc, 2)


def test_textbook_algebras():
    assert derived_algebra_dimension(StructureConstants.from_brackets(3, {})) == 0
    affine = StructureConstants.from_brackets(2, {(1, 2): {2: 1}})
    assert derived_algebra_dimension(affine) == 1
    assert not linearizability_verdict(StructureConstants.from_brackets(2, {}), 3)
    heis = StructureConstants.from_brackets(3, {(1, 2): {3: 1}})
    assert derived_algebra_dimension(heis) == 1 and is_derived_abelian(heis)
    assert linearizability_verdict(heis, 1)
    # sl(2): derived algebra is everything and not abelian
    sl2 = StructureConstants.from_brackets(3, {(1, 2): {3: 1}, (3, 1): {1: 2}, (3, 2): {2: -2}})
    assert derived_algebra_dimension(sl2) == 3 and not is_derived_abelian(sl2)
    assert jacobi_defect(sl2) == []


def test_jacobi_detects_bad_table():
    # [X1,[X2,X3]] + [X2,[X3,X1]] + [X3,[X1,X2]] = X3 here
    bad = StructureConstants.from_brackets(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {1: 1}})
    assert jacobi_defect(bad)


def test_pivot_at_point(det, det_data):
    with pytest.raises(PivotAtPointError) as err:
        compute(det, det_data, 0)
    assert err.value.code == "E_PIVOT_AT_POINT"


def test_vector_field_and_point_validation(det, det_data):
    sig = det.signature
    with pytest.raises(ValueError):
        parse_vector_field("zeta:x", sig)
    with pytest.raises(ValueError):
        structure_constants(det, det_data, {0: 0}, {0: 0, 1: 2})
    with pytest.raises(ValueError):
        parse_point("x0=1", sig)
    assert parse_point("x=1/2, y_0=3", sig) == {0: Fraction(1, 2), 1: 3}


points = st.tuples(st.fractions(min_value=-5, max_value=5, max_denominator=9),
                   st.fractions(min_value=-5, max_value=5, max_denominator=9).filter(bool))


@settings(max_examples=20, deadline=None)
@given(points)
def test_antisymmetry_and_jacobi(det, det_data, pt):
    sig = det.signature
    vf = parse_vector_field("xi:x,eta:y", sig)
    sc = structure_constants(det, det_data, vf, {0: pt[0], 1: pt[1]})
    assert antisymmetry_defect(sc) == []
    assert jacobi_defect(sc) == []
    assert derived_algebra_dimension(sc) == 3
