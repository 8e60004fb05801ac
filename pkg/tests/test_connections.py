import random

import pytest
from hypothesis import given, settings, strategies as st

from epsalg import diffcalc as dc
from epsalg.algebra import vscale
from epsalg.connections import (ConnectionError_, EpsConnection, Gauge, GradedModule, canonical_connection,
                                connection_apply, connection_extend, connection_form, curvature,
                                curvature_value, gauge_transform, hermitean_check, potential_curvature,
                                random_connection, real_derivations, trivial_connection,
                                unitary_gauge_check)
from epsalg.constructions import sl_eps_basis, supermatrix
from epsalg.verify import _random_elem, _random_invertible_gauge, unitary_samples

A = supermatrix(2, 1)
SL = sl_eps_basis(A)
B = dc.inner_der_basis(A, SL)
M = GradedModule(A)
fld = A.field


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_curvature_right_linear(rnd):
    nab = random_connection(M, B, rnd)
    m = [_random_elem(A, rnd)]
    x, y = rnd.randrange(B.r), rnd.randrange(B.r)
    R = curvature(nab)
    dxy = A.group.add(B.deg[x], B.deg[y])
    for da, ah in A.homogeneous_parts(_random_elem(A, rnd)).items():
        lhs = curvature_value(nab, M.right_mul(m, ah), x, y)
        assert lhs == M.scale(A.eps(da, dxy), M.right_mul(curvature_value(nab, m, x, y), ah))
        assert lhs == R(M.right_mul(m, ah), x, y)


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_difference_of_connections_is_linear(rnd):
    n1, n2 = random_connection(M, B, rnd), random_connection(M, B, rnd)
    m = [_random_elem(A, rnd)]
    x = rnd.randrange(B.r)
    diff = lambda mm: M.sub(connection_apply(n1, mm, x), connection_apply(n2, mm, x))
    for da, ah in A.homogeneous_parts(_random_elem(A, rnd)).items():
        assert diff(M.right_mul(m, ah)) == M.scale(A.eps(da, B.deg[x]), M.right_mul(diff(m), ah))


def test_square_of_connection_is_curvature():
    rng = random.Random(3)
    nab = random_connection(M, B, rng)
    m = [_random_elem(A, rng, degree=A.degrees[2])]
    w = connection_extend(nab, connection_form(nab, m))
    for x in range(B.r):
        for y in range(B.r):
            assert w.evaluate([x, y]) == curvature_value(nab, m, x, y)


def test_potential_curvature():
    nab = random_connection(M, B, random.Random(5))
    for x, y in [(0, 1), (2, 5), (3, 3)]:
        F = potential_curvature(nab, x, y)
        assert curvature_value(nab, [A.unit], x, y) == [vscale(-fld.i, F)]


def test_canonical_connection_flat_and_invariant():
    can = canonical_connection(B, SL)
    assert curvature(can).is_zero()
    rng = random.Random(7)
    for _ in range(5):
        g = gauge_transform(_random_invertible_gauge(M, rng), can)
        assert all(g.omega[k] == can.omega[k] for k in can.omega)
    # the opposite sign is not flat
    assert not curvature(canonical_connection(B, SL, sign=1)).is_zero()


def test_gauge_covariance():
    rng = random.Random(11)
    nab = random_connection(M, B, rng)
    Phi = _random_invertible_gauge(M, rng)
    R, Rg, inv = curvature(nab), curvature(gauge_transform(Phi, nab)), Phi.inverse()
    m = [_random_elem(A, rng)]
    for x in range(B.r):
        for y in range(B.r):
            assert Rg(m, x, y) == Phi(R(inv(m), x, y))


def test_trivial_connection_and_unitary_gauges():
    reals = real_derivations(B)
    triv = trivial_connection(M, B)
    assert curvature(triv).is_zero()
    assert hermitean_check(triv, reals)
    for u in unitary_samples(A):
        Phi = Gauge(M, [[u]])
        assert unitary_gauge_check(Phi)
        assert hermitean_check(gauge_transform(Phi, triv), reals)


def test_non_unitary_gauge_breaks_hermiticity():
    Phi = Gauge(M, [[{0: fld.rational(2), 4: fld.one, 8: fld.one}]])
    assert not unitary_gauge_check(Phi)
    assert not hermitean_check(gauge_transform(Phi, trivial_connection(M, B)), real_derivations(B))


def test_wrong_degree_value_rejected():
    odd = next(j for j in range(A.dim) if A.degrees[j] != A.group.zero())
    even_member = next(c for c in range(B.r) if B.deg[c] == A.group.zero())
    with pytest.raises(ConnectionError_):
        EpsConnection(M, B, {(0, even_member): [A.basis_vec(odd)]})
