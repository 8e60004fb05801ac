import pytest
from hypothesis import given, settings, strategies as st

from epsalg.algebra import (AlgebraError, Derivation, EpsAlgebra, algebra_make, center,
                            derivation_space_all, ground_field, inner_outer,
                            involution_check, is_eps_commutative, reality_check,
                            tensor_product, trace_space, vadd, vscale)
from epsalg.constructions import (clifford, color_matrix, grassmann, pauli, supermatrix,
                                  tr_eps_elementary)
from epsalg.groups import FinAbGroup, natural_z2, trivial_factor
from epsalg.scalars import field

fld = field(4)


def m2_constants():
    cons = []
    for i in range(2):
        for j in range(2):
            for l in range(2):
                cons.append((i * 2 + j, j * 2 + l, i * 2 + l, fld.one))
    return cons


def test_algebra_make_plain_m2():
    A = algebra_make(trivial_factor(FinAbGroup(())), [()] * 4, m2_constants(), {0: fld.one, 3: fld.one})
    assert A.dim == 4
    assert len(center(A)) == 1


def test_grassmann_one_generator():
    L = grassmann(1, "Z2")
    t = L.basis_vec(1)
    assert L.mul(t, t) == {}
    assert L.degrees == [(0,), (1,)]


def test_identity_involution_on_odd_line():
    L = grassmann(1, "Z2")
    A = EpsAlgebra(L.factor, L.degrees, [(0, 0, 0, fld.one), (0, 1, 1, fld.one), (1, 0, 1, fld.one)],
                   {0: fld.one}, [{0: fld.one}, {1: fld.one}])
    assert involution_check(A)


def test_identity_is_not_an_involution_on_two_generators():
    # theta1 theta2 is fixed, but the reversed product picks up a sign
    L = grassmann(2, "Z2")
    cons = [(a, b, k, c) for a in range(L.dim) for b in range(L.dim) for k, c in L.mult[a][b].items()]
    with pytest.raises(AlgebraError):
        EpsAlgebra(L.factor, L.degrees, cons, L.unit, [{j: fld.one} for j in range(L.dim)])


def test_wrong_degree_constants_rejected():
    eps = natural_z2()
    with pytest.raises(AlgebraError):
        EpsAlgebra(eps, [(0,), (1,)], [(0, 0, 0, fld.one), (0, 1, 1, fld.one), (1, 0, 1, fld.one),
                                       (1, 1, 1, fld.one)], {0: fld.one})


def test_unit_is_central():
    A = supermatrix(2, 1)
    for i in range(A.dim):
        assert A.bracket(A.unit, A.basis_vec(i)) == {}


def test_centers():
    assert len(center(supermatrix(2, 1))) == 1
    sup = pauli("super")
    Z = center(sup)
    assert sorted(sup.fmt(z) for z in Z) == ["1", "tau3"]
    assert len(center(pauli("color"))) == 4
    assert len(center(grassmann(2))) == 4


def test_traces_elementary():
    A = supermatrix(2, 1)
    T = trace_space(A)
    assert len(T) == 1
    ref = tr_eps_elementary(A)
    k = next(iter(ref))
    assert all(T[0][j] == T[0][k] * ref[j] * ref[k].inverse() for j in ref)
    C = color_matrix(1, 1, 1, 1, "color")
    assert all(v.is_one() for v in tr_eps_elementary(C).values())


def test_derivations():
    io = inner_outer(supermatrix(2, 1))
    assert sum(v["der"] for v in io.values()) == 8
    assert all(v["out"] == 0 for v in io.values())
    assert all(len(v) == 0 for v in derivation_space_all(pauli("color")).values())
    ps = inner_outer(pauli("super"))
    assert sorted(pauli("super").fmt(u) for v in ps.values() for u in v["inner_basis"]) == ["tau1", "tau2"]
    # commutative trivially graded: no inner derivations
    K2 = tensor_product(ground_field(trivial_factor(FinAbGroup(()))), ground_field(trivial_factor(FinAbGroup(()))))
    assert all(v["int"] == 0 for v in inner_outer(K2).values())


def test_tensor_of_odd_lines():
    L = grassmann(1, "Z2")
    T = tensor_product(L, L)
    a, b = T.basis_vec(2), T.basis_vec(1)  # theta(x)1 and 1(x)theta
    assert T.mul(a, b) == vscale(-fld.one, T.mul(b, a))
    assert is_eps_commutative(T)
    K = ground_field(L.factor)
    LK = tensor_product(L, K)
    assert LK.dim == L.dim and LK.mult == L.mult


def test_antihermitean_gives_real_derivation():
    A = supermatrix(2, 1)
    M = {1: fld.one, 3: -fld.one, 0: fld.i}  # E12 - E21 + i E11
    assert reality_check(Derivation.ad(A, M))


def test_diagonal_phase_unitary():
    A2 = supermatrix(2, 1)
    assert A2.is_unitary({0: fld.i, 4: -fld.one, 8: fld.one})


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False), st.sampled_from(["M(2,1)", "color", "pauli", "cl2"]))
def test_eps_jacobi_and_antisymmetry(rnd, which):
    A = {"M(2,1)": supermatrix(2, 1), "color": color_matrix(1, 1, 1, 0, "color"),
         "pauli": pauli("super"), "cl2": clifford(2)}[which]
    idx = [rnd.randrange(A.dim) for _ in range(3)]
    a, b, c = (A.basis_vec(i) for i in idx)
    da, db, dc = (A.degrees[i] for i in idx)
    ab = A.bracket(a, b)
    assert ab == vscale(-A.eps(da, db), A.bracket(b, a))
    t = vadd(vscale(A.eps(dc, da), A.bracket(a, A.bracket(b, c))),
             vadd(vscale(A.eps(da, db), A.bracket(b, A.bracket(c, a))),
                  vscale(A.eps(db, dc), A.bracket(c, A.bracket(a, b)))))
    assert t == {}


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["M(2,1)", "pauli", "lambda2"]))
def test_solver_derivations_satisfy_leibniz(which):
    A = {"M(2,1)": supermatrix(2, 1), "pauli": pauli("super"), "lambda2": grassmann(2)}[which]
    for ders in derivation_space_all(A).values():
        for X in ders:
            assert X.leibniz_check()
