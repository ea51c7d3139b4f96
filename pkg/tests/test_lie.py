from itertools import combinations

import pytest

from ncgeo.lie import (
    GroupElement,
    SlBasis,
    adjoint_action,
    bracket,
    identity_matrix,
    mat_from_rows,
    mat_is_zero,
    mat_mul,
    mat_sub,
    mat_trace,
    matrix_unit,
    sl_basis,
    structure_constants,
    special_unitary_samples,
)
from ncgeo.scalars import gr, I, MINUS_I, ONE, ZERO


def test_basis_order_n2():
    b = sl_basis(2)
    assert b.labels == ["E12", "E21", "H1"]
    assert b.elements[0] == matrix_unit(2, 0, 1)
    assert b.elements[2] == mat_from_rows([[1, 0], [0, -1]])


def test_basis_traceless_and_count():
    for n in (1, 2, 3, 4):
        b = sl_basis(n)
        assert len(b.elements) == n * n - 1
        for e in b.elements:
            assert not mat_trace(e)


def test_coordinates_round_trip():
    b = sl_basis(3)
    for e in b.elements:
        coords = b.coordinates(e)
        assert b.from_coordinates(coords) == e


def test_bracket_sl2_relations():
    b = sl_basis(2)
    E12, E21, H1 = b.elements
    assert bracket(H1, E12) == mat_from_rows([[0, 2], [0, 0]])
    assert bracket(E12, E21) == H1
    assert mat_is_zero(bracket(E12, E12))


def test_bracket_size_mismatch():
    with pytest.raises(ValueError):
        bracket(identity_matrix(2), identity_matrix(3))


def test_structure_constants_n2():
    sc = structure_constants(2)
    # [H1, E12] = 2 E12: indices H1=2, E12=0
    assert sc.entry(2, 0) == {0: gr(2)}
    assert sc.entry(0, 2) == {0: gr(-2)}
    # [E12, E21] = H1
    assert sc.entry(0, 1) == {2: ONE}
    assert sc.entry(1, 1) == {}


def jacobi_defect(n, i, j, k):
    b = sl_basis(n)
    x, y, z = b.elements[i], b.elements[j], b.elements[k]
    return mat_sub(
        mat_sub(bracket(bracket(x, y), z), bracket(x, bracket(y, z))),
        bracket(bracket(x, z), y),
    )


@pytest.mark.parametrize("n", [2, 3])
def test_jacobi_all_triples(n):
    d = n * n - 1
    for i, j, k in combinations(range(d), 3):
        assert mat_is_zero(jacobi_defect(n, i, j, k))


def test_structure_constants_jacobi_via_table():
    # contract the table with itself: sum over cyclic rotations vanishes
    sc = structure_constants(3)
    d = 8
    for i, j, k in combinations(range(d), 3):
        acc = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = sc.entry(a, b)
            for m, coef in inner.items():
                outer = sc.entry(m, c)
                for t, coef2 in outer.items():
                    acc[t] = acc.get(t, ZERO) + coef * coef2
        assert all(not v for v in acc.values())


def test_group_element_validation():
    with pytest.raises(ValueError):
        GroupElement([[1, 0], [0, 2]])  # not unitary
    with pytest.raises(ValueError):
        GroupElement([[0, 1], [1, 0]])  # unitary but det -1
    g = GroupElement([[I, ZERO], [ZERO, MINUS_I]])
    assert g.n == 2


def test_adjoint_action_identity():
    from ncgeo.lie import identity_element

    g = identity_element(2)
    x = matrix_unit(2, 0, 1)
    assert adjoint_action(g, x) == x


def test_adjoint_action_diagonal_phase():
    g = GroupElement([[I, ZERO], [ZERO, MINUS_I]])
    E12 = matrix_unit(2, 0, 1)
    H1 = mat_from_rows([[1, 0], [0, -1]])
    # independent oracle: plain matrix products g^{-1} x g
    oracle = mat_mul(g.inverse(), mat_mul(E12, g.matrix))
    assert adjoint_action(g, E12) == oracle
    assert adjoint_action(g, E12) == mat_from_rows([[0, -1], [0, 0]])
    assert adjoint_action(g, H1) == H1


def test_adjoint_preserves_trace_and_bracket():
    for g in special_unitary_samples(2):
        for x in sl_basis(2).elements:
            assert not mat_trace(adjoint_action(g, x))
            for y in sl_basis(2).elements:
                lhs = adjoint_action(g, bracket(x, y))
                rhs = bracket(adjoint_action(g, x), adjoint_action(g, y))
                assert lhs == rhs


def test_adjoint_composition_convention():
    gs = special_unitary_samples(2)
    g, h = gs[1], gs[3]
    gh = g * h
    x = sl_basis(2).elements[0]
    # with the g^{-1} x g convention, (gh) acts as h after g
    assert adjoint_action(gh, x) == adjoint_action(h, adjoint_action(g, x))


def test_special_unitary_samples_are_valid():
    for n in (1, 2, 3):
        for g in special_unitary_samples(n):
            GroupElement(g.matrix)  # revalidate


def test_conjugation_matrix_is_basis_expansion():
    b = sl_basis(2)
    for g in special_unitary_samples(2):
        A = g.conjugation_matrix()
        for j, e in enumerate(b.elements):
            direct = mat_mul(g.matrix, mat_mul(e, g.inverse()))
            rebuilt = b.from_coordinates([A[i][j] for i in range(b.dim)])
            assert rebuilt == direct
