import random

import pytest
from hypothesis import given, settings, strategies as st

from epsalg import moyal as my
from epsalg.moyal import (MoyalContext, MoyalError, MoyalFields, MPoly, SuperElem, anticommutator,
                          commutator, star, super_bracket, super_make, super_mul, xtilde)

ctx = MoyalContext()
P = ctx.poly
i = ctx.i


def test_coordinate_commutator():
    x1, x2 = ctx.x(0), ctx.x(1)
    assert star(x1, x2) - star(x2, x1) == ctx.theta(0, 1) * i
    assert star(x1, x2) - x1 * x2 == ctx.theta(0, 1) * (i * ctx.half)


def test_unit():
    a = P("x1^2*x2 + 3")
    assert star(a, ctx.const(1)) == a and star(ctx.const(1), a) == a


def test_xtilde_commutator_example():
    a = P("x1^2*x2")
    for m in range(2):
        assert commutator(xtilde(ctx, m), a) == a.deriv(m) * (i * 2)


def test_star_commutator_of_xtilde():
    # [xt_m, xt_n] = -4i Theta^{-1}_{mn}
    xt = [xtilde(ctx, m) for m in range(2)]
    assert commutator(xt[0], xt[1]) == ctx.theta_inv(0, 1) * (i * -4)


def test_calc_rule_examples():
    gamma, xi, eta = my.generators(ctx)
    assert commutator(xi[0] * i, ctx.x(1)).is_zero()
    a = P("x1*x2^2 - 2*x1")
    assert anticommutator(xi[0] * i, a) == xi[0] * a * (i * 2)
    lhs = commutator(eta[0][1] * i, a)
    rhs = xi[0] * a.deriv(1) + xi[1] * a.deriv(0)
    assert lhs == rhs * 2
    assert lhs != rhs * ctx.half


def _poly(rnd, deg):
    return my.random_poly(ctx, rnd, deg, 0.4)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_star_associative(rnd, d1, d2, d3):
    a, b, c = _poly(rnd, d1), _poly(rnd, d2), _poly(rnd, d3)
    assert star(star(a, b), c) == star(a, star(b, c))


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_relations_and_rules(rnd):
    a, b = _poly(rnd, 3), _poly(rnd, 3)
    r = my.relations_check(ctx, a, b)
    assert r["leibniz"] and r["xt_commutator"] and r["xt_anticommutator"] and r["xx"]
    assert all(v for k, v in my.calcrules_check(ctx, a).items() if k != "eta_printed")


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_star_conjugation_reverses(rnd):
    a, b = _poly(rnd, 3), _poly(rnd, 3)
    assert star(a, b).conj() == star(b.conj(), a.conj())


def test_super_product_examples():
    b, d = P("x1"), P("x2^2")
    z = ctx.zero()
    assert super_mul(SuperElem(z, b), SuperElem(z, d)) == SuperElem(ctx.alpha() * star(b, d), z)
    one = super_make(ctx, even=ctx.const(1))
    phi = SuperElem(P("x1*x2"), P("x1 + 2"))
    assert super_mul(one, phi) == phi and super_mul(phi, one) == phi
    e1, e2 = super_make(ctx, even=P("x1")), super_make(ctx, even=P("x2"))
    assert super_bracket(e1, e2) == SuperElem(commutator(P("x1"), P("x2")), z)


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_super_associative(rnd):
    els = [SuperElem(_poly(rnd, 2), _poly(rnd, 2)) for _ in range(3)]
    a, b, c = els
    assert super_mul(super_mul(a, b), c) == super_mul(a, super_mul(b, c))


def test_bracket_table_statuses():
    rows = my.g_bracket_table(ctx)
    assert len(rows) == 10
    assert all(r["corrected"] for r in rows)
    assert [r["entry"] for r in rows if not r["printed"]] == [8, 9, 10]


def test_bracket_table_examples():
    g = lambda *lab: my.g_element(ctx, lab)
    gamma, xi, eta = my.generators(ctx)
    z = ctx.zero()
    assert super_bracket(g("gamma"), g("gamma")) == SuperElem(ctx.alpha() * -2, z)
    assert super_bracket(g("xi1", 0), g("xi1", 1)) == SuperElem(-(ctx.alpha() * eta[0][1]), z)
    assert super_bracket(g("xi0", 0), g("xi0", 1)) == SuperElem(ctx.theta_inv(0, 1) * i, z)


def test_jacobi_on_generators():
    import itertools
    els = [my.g_element(ctx, l) for l in my.g_labels(ctx)]
    for a, b, c in itertools.product(els, repeat=3):
        assert my.epsilon_jacobi(ctx, a, b, c)


def test_decompose_closes_on_g():
    els = {l: my.g_element(ctx, l) for l in my.g_labels(ctx)}
    for la in els:
        for lb in els:
            assert my.decompose_g(ctx, super_bracket(els[la], els[lb])) is not None


def test_curvature_zero_fields():
    f = MoyalFields.zero(ctx)
    for r in my.gauge_curvature(f):
        assert r["connection"] and r["moy1"] and r["moy2"]
    X, Y = ("xi0", 0), ("xi0", 1)
    assert my.curvature_abstract(f, X, Y).is_zero()


def test_curvature_agreement_and_printed_mismatch():
    rng = random.Random(2)
    bad = set()
    for _ in range(3):
        f = MoyalFields.random(ctx, rng)
        for r in my.gauge_curvature(f):
            assert r["connection"] and r["moy1"] and r["moy2"]
            if not r["moy1_printed"]:
                bad.add(r["entry"])
    assert bad == {1, 4}


def test_curvature_xi_gamma_example():
    rng = random.Random(4)
    f = MoyalFields.random(ctx, rng)
    for m in range(2):
        F = my.curvature_abstract(f, ("xi0", m), ("gamma",))
        want = f.phi.deriv(m) - commutator(f.A0[m], f.phi) * i
        assert F == SuperElem(ctx.zero(), want)


def test_gauge_by_constant_unitaries():
    f = MoyalFields.random(ctx, random.Random(6))
    same = my.gauge_transform_fields(1, f)
    assert same.A0 == f.A0 and same.phi == f.phi
    gi = my.gauge_transform_fields(i, f)
    assert gi.A0 == f.A0 and gi.A1 == f.A1 and gi.phi == f.phi
    for g in (i, -ctx.field.one, -i):
        assert my.gauge_covariance_check(g, f)
    with pytest.raises(MoyalError):
        my.gauge_transform_fields(2, f)


def test_fields_json_roundtrip():
    f = MoyalFields.random(ctx, random.Random(8))
    g = MoyalFields.from_json(ctx, f.to_json())
    assert g.A0 == f.A0 and g.A1 == f.A1 and g.phi == f.phi and g.G == f.G


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_format_roundtrip(rnd):
    a = _poly(rnd, 3)
    assert MPoly.parse(ctx, str(a)) == a


def test_bad_contexts():
    with pytest.raises(MoyalError):
        MoyalContext(D=3)
    with pytest.raises(MoyalError):
        MoyalContext(N=6)
    with pytest.raises(MoyalError):
        MoyalContext(Sigma=[[0, 1], [1, 0]])


def test_four_dimensions():
    c4 = MoyalContext(D=4)
    x = [c4.x(m) for m in range(4)]
    assert commutator(x[2], x[3]) == c4.theta(2, 3) * c4.i
    assert commutator(x[0], x[2]).is_zero()
    a = c4.poly("x1*x3 + x4^2")
    assert all(my.relations_check(c4, a, a)[k] for k in ("leibniz", "xt_commutator", "xx"))
