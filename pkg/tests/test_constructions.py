from hypothesis import given, settings, strategies as st

from epsalg.algebra import center, derivation_space_all, inner_outer, trace_space
from epsalg.constructions import (PAULI_MATRICES, build_from_spec, clifford, color_matrix, elementary_matrix,
                                  fine_derivation_coords, fine_derivation_relation, pauli,
                                  plain_matrix, sl_eps_basis, supermatrix, tr_eps_elementary)
from epsalg.groups import FinAbGroup, eps_from_sigma, natural_z2, r_common, sign_factor
from epsalg.scalars import field, parse_cyc

fld = field(4)


def test_elementary_is_supermatrix():
    A = elementary_matrix(3, [(0,), (0,), (1,)], natural_z2())
    B = supermatrix(2, 1)
    assert A.degrees == B.degrees and A.mult == B.mult


def test_trivial_grading_and_constant_phi():
    A = plain_matrix(2)
    assert A.dim == 4 and all(d == () for d in A.degrees)
    C = elementary_matrix(2, [(1, 1), (1, 1)], sign_factor(FinAbGroup([2, 2]), [[1, 0], [0, 1]]))
    assert all(d == (0, 0) for d in C.degrees)


def _matmul(a, b):
    return [[sum(parse_cyc(str(a[i][k])) * parse_cyc(str(b[k][j])) for k in range(2)) for j in range(2)]
            for i in range(2)]


def test_pauli_matches_matrices():
    """Structure constants of the crossed product agree with the explicit 2x2 matrices."""
    A = pauli("super")
    mats = [PAULI_MATRICES[n] for n in ("1", "tau1", "tau2", "tau3")]
    for a in range(4):
        for b in range(4):
            prod = _matmul(mats[a], mats[b])
            ((k, c),) = A.mult[a][b].items()
            want = [[c * parse_cyc(str(x)) for x in row] for row in mats[k]]
            assert prod == want


def test_clifford_small():
    C1 = clifford(1)
    assert C1.dim == 2 and C1.mul(C1.basis_vec(1), C1.basis_vec(1)) == {0: fld.one}
    assert clifford(2).dim == 4


def test_builder_specs():
    assert build_from_spec("supermatrix:2,1").dim == 9
    assert build_from_spec("color:1,1,1,1:super").dim == 16
    assert build_from_spec("pauli:color").dim == 4
    assert build_from_spec("grassmann:3").dim == 8
    assert build_from_spec("matrix:2").dim == 4


def test_color_traces():
    for v, signs in (("color", [1, 1, 1, 1]), ("super", [1, -1, -1, 1])):
        A = color_matrix(1, 1, 1, 1, v)
        T = tr_eps_elementary(A)
        assert [int(T[i * 4 + i].coeffs[0]) for i in range(4)] == signs
        assert len(trace_space(A)) == 1
        assert len(center(A)) == 1
        assert all(r["out"] == 0 for r in inner_outer(A).values())


def test_sl_basis_sizes():
    assert len(sl_eps_basis(supermatrix(2, 1))) == 8
    assert len(sl_eps_basis(supermatrix(1, 1))) == 3


def test_pauli_trace_support_is_r_set():
    A = pauli("super")
    R = set(r_common(A.factor, eps_from_sigma(A.sigma)))
    T = trace_space(A)
    assert {A.degrees[k] for t in T for k in t} == R == {(1, 0), (0, 1)}


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(["pauli:super", "pauli:color", "clifford:2", "clifford:3"]))
def test_fine_coordinate_relation(spec):
    A = build_from_spec(spec)
    for ders in derivation_space_all(A).values():
        for X in ders:
            x = fine_derivation_coords(A, X)
            assert set(x) == set(A.order)
            assert fine_derivation_relation(A, X)
