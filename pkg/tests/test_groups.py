import pytest
from hypothesis import given, settings, strategies as st

from epsalg.constructions import clifford_sigma, pauli_sigma
from epsalg.groups import (CommFactor, FactorError, FactorSet, FinAbGroup, check_axioms, equivalence_brute,
                           eps_from_sigma, factor_product, gamma_common, natural_z, natural_z2, r_common,
                           sign_factor, sigma_from_eps, trivial_factor)
from epsalg.scalars import field
from epsalg.verify import proper_factors_z2z2, sample_factors

Z2 = FinAbGroup([2])
Z2Z2 = FinAbGroup([2, 2])


def test_natural_z2_valid():
    eps = CommFactor(Z2, [[-1]])
    assert eps((1,), (1,)) == field(4).rational(-1)
    assert not eps.is_proper()
    assert eps.gamma0() == [(0,)]


def test_invalid_factors_name_the_condition():
    with pytest.raises(FactorError) as e:
        CommFactor(Z2, [["i"]])
    assert e.value.as_dict() == {"violated": "eps(e_r,e_r)=±1", "at": [1, 1]}
    fld = field(12)
    with pytest.raises(FactorError) as e:
        CommFactor(FinAbGroup([3]), [[fld.zeta(1, 3)]], fld=fld)
    assert e.value.violated == "eps(e_r,e_r)=1 for m_r odd"


def test_values_on_z2z2():
    es = sign_factor(Z2Z2, [[0, 1], [1, 0]])
    assert es((1, 0), (0, 1)) == field(4).rational(-1)
    sup = sign_factor(Z2Z2, [[1, 0], [0, 1]])
    assert sup((1, 1), (1, 1)).is_one()
    for j in Z2Z2.elements():
        assert es((0, 0), j).is_one()
    assert es.is_proper()
    assert trivial_factor(Z2Z2).signature_factor().is_trivial()


def test_product_factor():
    e = factor_product(natural_z(), natural_z2())
    fld = field(4)
    for p, i, q, j in [(1, 1, 1, 1), (2, 1, 3, 1), (1, 0, 1, 1)]:
        assert e((p, i), (q, j)) == fld.rational((-1) ** (p * q + i * j))
    e2 = factor_product(natural_z2(), natural_z2())
    assert e2((1, 1), (1, 1)).is_one()


def test_eps_from_sigma_examples():
    es = eps_from_sigma(pauli_sigma())
    fld = field(4)
    for j in Z2Z2.elements():
        for k in Z2Z2.elements():
            assert es(j, k) == fld.rational((-1) ** (j[0] * k[1] + j[1] * k[0]))
    assert eps_from_sigma(clifford_sigma(2))((1, 0), (0, 1)) == fld.rational(-1)
    sym = FactorSet(Z2Z2, {(a, b): fld.one for a in Z2Z2.elements() for b in Z2Z2.elements()})
    assert eps_from_sigma(sym).is_trivial()


def test_sigma_roundtrip_all_proper():
    for e in proper_factors_z2z2():
        assert eps_from_sigma(sigma_from_eps(e)) == e
    assert all(v.is_one() for v in sigma_from_eps(trivial_factor(Z2Z2)).table.values())


def test_common_sets_pauli():
    sup = sign_factor(Z2Z2, [[1, 0], [0, 1]])
    es = eps_from_sigma(pauli_sigma())
    assert sorted(gamma_common(sup, es)) == [(0, 0), (1, 1)]
    assert sorted(r_common(sup, es)) == [(0, 1), (1, 0)]
    assert sorted(gamma_common(sup, sup)) == Z2Z2.elements()


def test_equivalence():
    a = sign_factor(Z2Z2, [[1, 0], [0, 0]])
    b = sign_factor(Z2Z2, [[0, 0], [0, 1]])
    f = equivalence_brute(a, b)
    assert f is not None and sorted(f) == [(0, 1), (1, 0)]
    assert equivalence_brute(a, a) is not None
    assert equivalence_brute(trivial_factor(Z2), natural_z2()) is None


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(sample_factors())), st.randoms(use_true_random=False))
def test_axioms_random_triples(name, rnd):
    eps = sample_factors()[name]
    els = eps.group.elements()
    for _ in range(30):
        assert check_axioms(eps, rnd.choice(els), rnd.choice(els), rnd.choice(els))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=3, max_size=3))
def test_sign_factors_on_z2z2_are_valid_and_roundtrip_when_proper(bits):
    a, b, c = bits
    eps = sign_factor(Z2Z2, [[a, b], [b, c]])
    els = Z2Z2.elements()
    assert all(check_axioms(eps, i, j, k) for i in els for j in els for k in els)
    if eps.is_proper():
        assert eps_from_sigma(sigma_from_eps(eps)) == eps
