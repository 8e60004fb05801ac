import pytest
from hypothesis import given, settings, strategies as st

from epsalg import diffcalc as dc
from epsalg.algebra import Derivation
from epsalg.constructions import grassmann, pauli, plain_matrix, sl_eps_basis, supermatrix
from epsalg.verify import calculus_algebras, grassmann_dim_formula

from oracles import brute_nullspace_dim, sympy_rank, wedge_by_permutations

ALGS = calculus_algebras()
NAMES = sorted(ALGS)


@pytest.mark.parametrize("name", NAMES)
def test_d_squared_full_bases(name):
    A, B = ALGS[name]
    for n in range(3):
        for k in B.form_degrees(n):
            assert dc.d_squared_zero(B, n, k)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(NAMES), st.integers(0, 2), st.randoms(use_true_random=False))
def test_d_squared_random_forms(name, n, rnd):
    A, B = ALGS[name]
    k = rnd.choice(B.form_degrees(n))
    w = dc.random_form(B, n, k, rnd, density=0.5)
    assert dc.differential(dc.differential(w)).is_zero()
    assert dc.apply_d_fast(w) == dc.differential(w)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(NAMES), st.randoms(use_true_random=False))
def test_cartan_identities(name, rnd):
    A, B = ALGS[name]
    x, y = rnd.randrange(B.r), rnd.randrange(B.r)
    n = rnd.randrange(3)
    w = dc.random_form(B, n, rnd.choice(B.form_degrees(n)), rnd, density=0.5)
    assert all(dc.cartan_identities(B, x, y, w).values())


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["M(2,1)", "Lambda(2)", "M(1,1,1,1)[super]"]), st.randoms(use_true_random=False))
def test_wedge_against_permutation_sum(name, rnd):
    A, B = ALGS[name]
    p, q = rnd.randrange(3), rnd.randrange(2)
    w1 = dc.random_form(B, p, rnd.choice(B.form_degrees(p)), rnd, density=0.4)
    w2 = dc.random_form(B, q, rnd.choice(B.form_degrees(q)), rnd, density=0.4)
    prod = dc.wedge(w1, w2)
    args = [rnd.randrange(B.r) for _ in range(p + q)]
    assert dc.evaluate(prod, args) == wedge_by_permutations(w1, w2, args)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(NAMES), st.randoms(use_true_random=False))
def test_d_is_graded_derivation_of_wedge(name, rnd):
    A, B = ALGS[name]
    p = rnd.randrange(2)
    w1 = dc.random_form(B, p, rnd.choice(B.form_degrees(p)), rnd, density=0.4)
    w2 = dc.random_form(B, 1, rnd.choice(B.form_degrees(1)), rnd, density=0.4)
    lhs = dc.differential(dc.wedge(w1, w2))
    sign = A.field.rational((-1) ** p)
    assert lhs == dc.wedge(dc.differential(w1), w2) + dc.wedge(w1, dc.differential(w2)).scale(sign)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_grassmann_form_dimensions(q):
    L = grassmann(q)
    B = dc.grassmann_der_basis(L)
    for n in range(5):
        for k in range(n, n + q + 1):
            assert B.form_space_dim(n, (k,)) == grassmann_dim_formula(q, n, k)


def test_grassmann_transfer_sign():
    L = grassmann(2)
    B = dc.grassmann_der_basis(L)
    printed_all = True
    for I in ([], [0], [1], [0, 1]):
        for J in ([], [0], [1], [0, 0], [0, 1], [1, 1]):
            dw = dc.differential(dc.grassmann_form(B, I, J))
            assert dw == dc.grassmann_transfer(B, I, J)
            printed_all &= dw == dc.grassmann_transfer(B, I, J, printed=True)
    # the (-1)^n global sign only agrees for odd n
    assert not printed_all


def _lift(rows, fld):
    return [{c: v if hasattr(v, "field") else fld.rational(v) for c, v in r.items()} for r in rows]


def test_cohomology_of_m2_against_sympy():
    A = plain_matrix(2)
    B = dc.der_basis_make(A)
    assert [dc.cohomology_dim(B, n)["H"] for n in range(4)] == [1, 0, 0, 1]
    k = A.group.zero()
    ranks = []
    for n in range(4):
        D = dc.DMatrix(B, n, k)
        rows = _lift(D.rows(), A.field)
        ncols = len(D.domain_keys())
        r = sympy_rank(rows, ncols)
        assert r == D.rank()
        assert brute_nullspace_dim(rows, ncols) == ncols - r
        ranks.append((ncols, r))
    H = [ranks[n][0] - ranks[n][1] - (ranks[n - 1][1] if n else 0) for n in range(4)]
    assert H == [1, 0, 0, 1]


def test_ad_kernel_is_unit():
    A = supermatrix(1, 1)
    els = [A.basis_vec(i) for i in range(A.dim)]
    K = dc.ad_kernel(A, els)
    assert len(K) == 1
    v = K[0]
    assert set(v) == {0, 3}


def test_ad_transport_on_sl():
    A = supermatrix(2, 1)
    r = dc.ad_transport_check(A, sl_eps_basis(A), max_n=2)
    assert r["values"] == r["values_ok"] and r["d"] == r["d_ok"] and r["wedge"] == r["wedge_ok"]


def test_inner_basis_rejects_dependent_members():
    A = pauli("super")
    with pytest.raises(dc.DerBasisError):
        dc.DerBasis(A, [Derivation.ad(A, A.basis_vec(1)), Derivation.ad(A, A.basis_vec(1))])
