from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from opfunctors.catprop import (CatBasisElt, CatMorphism, boxplus, cat_map_linear, compose,
                                compose_basis, from_operad, hom_dim_closed_form, hom_space, identity,
                                leibniz_check, mu_i, mu_sum, permutation, shift,
                                shift_basis, to_operad)
from opfunctors.exactlin import transposition
from opfunctors.operads import builtin, default_mu, leib_to_lie


def oracle_dim(op, m, n):
    total = 0
    for f in product(range(n), repeat=m):
        term = 1
        for j in range(n):
            term *= op.dim(f.count(j))
        total += term
    return total


@pytest.mark.parametrize("name", ["Lie", "Leib", "AssU", "ComU"])
def test_hom_dims_match_fibre_count(name):
    op = builtin(name, 5)
    for m in range(5):
        for n in range(5):
            d = hom_space(op, m, n).dim
            assert d == oracle_dim(op, m, n) == hom_dim_closed_form(op, m, n)


def test_small_lie_homs():
    lie = builtin("Lie", 4)
    assert hom_space(lie, 2, 1).dim == 1
    assert hom_space(lie, 3, 2).dim == 6


def test_mu_after_transposition():
    lie = builtin("Lie", 4)
    mu = mu_i(lie, default_mu(lie), 1, 1)
    tau = permutation(lie, transposition(2, 0))
    assert compose(mu, tau) == -mu


def test_shift_of_mu():
    lie = builtin("Lie", 4)
    mu = from_operad(default_mu(lie))
    (elt, c), = shift(mu).terms()
    assert c == 1
    assert elt.f == (0, 0, 1)
    assert elt.labels == (mu.terms()[0][0].labels[0], lie.unit_index())
    assert shift_basis(mu.terms()[0][0], lie) == elt


def test_mu_sum_coefficients():
    lie = builtin("Lie", 4)
    s = mu_sum(lie, default_mu(lie), 2)
    assert sorted(s.coeffs.values()) == [1, 1]


def test_encode_roundtrip():
    lie = builtin("Lie", 4)
    for m in range(4):
        for n in range(4):
            for e in hom_space(lie, m, n).labels:
                assert CatBasisElt.decode(e.encode()) == e
    with pytest.raises(ValueError):
        CatBasisElt.decode("2>1:1:0.0")


def basis_triples(op, top):
    def strat(data):
        m, n, p, q = (data.draw(st.integers(0, top)) for _ in range(4))
        pick = lambda a, b: data.draw(st.sampled_from(hom_space(op, a, b).labels)) if hom_space(op, a, b).dim else None
        return pick(m, n), pick(n, p), pick(p, q)
    return strat


@pytest.mark.parametrize("name", ["Lie", "AssU", "Leib"])
@settings(max_examples=250, deadline=None)
@given(data=st.data())
def test_composition_associative(name, data):
    op = builtin(name, 5)
    f, g, h = basis_triples(op, 4 if name != "Lie" else 5)(data)
    if f is None or g is None or h is None:
        return
    F, G, H = (CatMorphism.basis(op, e) for e in (f, g, h))
    assert compose(H, compose(G, F)) == compose(compose(H, G), F)


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_assu_composition_concatenates_ordered_fibres(data):
    # independent model: a morphism m→n of Cat AssU is a map with a linear order on each fibre
    ass = builtin("AssU", 5)
    m, n, p = (data.draw(st.integers(0, 3)) for _ in range(3))
    sf, sg = hom_space(ass, m, n), hom_space(ass, n, p)
    if not sf.dim or not sg.dim:
        return
    f = data.draw(st.sampled_from(sf.labels))
    g = data.draw(st.sampled_from(sg.labels))

    def orders(e):
        return [[fib[x] for x in ass.space(len(fib)).labels[a]] for fib, a in zip(e.fibres(), e.labels)]

    of, og = orders(f), orders(g)
    expect = [[x for j in og[k] for x in of[j]] for k in range(p)]
    (res, c), = [(hom_space(ass, m, p).labels[k], v) for k, v in compose_basis(ass, g, f).items()]
    assert c == 1 and orders(res) == expect


def test_identity_is_neutral():
    lie = builtin("Lie", 4)
    for e in hom_space(lie, 3, 2).labels:
        x = CatMorphism.basis(lie, e)
        assert compose(identity(lie, 2), x) == x == compose(x, identity(lie, 3))


def test_boxplus_interchange():
    lie = builtin("Lie", 5)
    mu = from_operad(default_mu(lie))
    tau = permutation(lie, transposition(2, 0))
    lhs = compose(boxplus(mu, mu), boxplus(tau, tau))
    rhs = boxplus(compose(mu, tau), compose(mu, tau))
    assert lhs == rhs


def test_operad_roundtrip():
    lie = builtin("Lie", 4)
    x = lie.element(3, {0: 2, 1: -1})
    assert to_operad(from_operad(x)) == x


@pytest.mark.parametrize("name,holds", [("Lie", True), ("Leib", True), ("AssU", False), ("ComU", False)])
def test_leibniz_modes_agree(name, holds):
    op = builtin(name, 6)
    mu = default_mu(op)
    gen = leibniz_check(op, mu, "generators")
    exh = leibniz_check(op, mu, "exhaustive", nmax=5)
    assert gen.holds == exh.holds == holds
    if not holds:
        assert not gen.witness.is_zero()


def test_assu_witness_value():
    ass = builtin("AssU", 4)
    res = leibniz_check(ass, ass.product())
    assert res.tested == ass.product()
    assert res.witness == -1 * ass.word(1, 3, 2)


def test_cat_map_is_functorial():
    phi = leib_to_lie(5)
    leib, lie = phi.source, phi.target
    for f in hom_space(leib, 3, 2).labels:
        for g in hom_space(leib, 2, 1).labels:
            lhs = cat_map_linear(phi, 3, 1)(compose_basis(leib, g, f))
            F = CatMorphism(lie, 3, 2, cat_map_linear(phi, 3, 2)({hom_space(leib, 3, 2).index(f): 1}))
            G = CatMorphism(lie, 2, 1, cat_map_linear(phi, 2, 1)({hom_space(leib, 2, 1).index(g): 1}))
            assert compose(G, F).coeffs == lhs
