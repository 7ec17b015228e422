from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opfunctors import fmod
from opfunctors.catprop import hom_space
from opfunctors.exactlin import LinMap
from opfunctors.groupside import (FreeGroupWord, GroupHom, GroupParseError, TruncHopf, act_hom,
                                  cat_ass_dim, cat_ass_hom, check_hopf_axioms,
                                  conjugation_hom, delta_k, exp_space, filtration_escape_witness,
                                  filtration_subspace, from_assu_basis, gamma_tbar_dim_check,
                                  outer_check_exponential, pbw_dims, pbw_dims_bruteforce,
                                  primitive_conjugation_check, psi_k_star, psi_rho_composites, rho,
                                  symmetric_hopf_bridge, tensor_hopf_bridge, to_assu_basis,
                                  underline_module, nilpotent_free_lie, abelian_lie)
from opfunctors.operads import builtin

LIE = builtin("Lie", 5)


@pytest.mark.parametrize("comm", [False, True])
def test_hopf_axioms(comm):
    assert check_hopf_axioms(TruncHopf(2, 4, comm)).ok


def test_square_doubles_primitives():
    H = TruncHopf(2, 3)
    u = GroupHom.parse("1->1: x1^2")
    f = act_hom(H, u)
    sp = exp_space(H, 1)
    v = {sp.index(((0,),)): Fraction(1)}
    assert f(v) == {sp.index(((0,),)): Fraction(2)}


def test_psi2_is_multiplication():
    H = TruncHopf(2, 3)
    m = psi_k_star(H, 2, 0)
    prod = H.product_map()
    sp1 = exp_space(H, 1)
    for j, (a, b) in enumerate(m.domain.labels):
        w = H.mul_words(a, b)
        expect = {sp1.index((w,)): 1} if w is not None else {}
        assert m.cols[j] == expect
        assert prod.cols[prod.domain.index((a, b))] == ({H.space.index(w): 1} if w is not None else {})


def test_rho_on_two_letters_is_bracket():
    H = TruncHopf(2, 3)
    f = rho(H, 1)
    src, tgt = exp_space(H, 2), exp_space(H, 1)
    col = f.cols[src.index(((0,), (1,)))]
    assert col == {tgt.index(((0, 1),)): 1, tgt.index(((1, 0),)): -1}


@pytest.mark.parametrize("n", [1, 2])
def test_primitive_conjugation(n):
    rep = primitive_conjugation_check(n, 4)
    assert rep.passed and rep.checked > 0


@pytest.mark.parametrize("k,n", [(k, n) for k in (1, 2, 3) for n in (0, 1, 2)])
def test_psi_rho(k, n):
    assert psi_rho_composites(TruncHopf(2, 3), k, n)


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(words, min_size=2, max_size=2), st.lists(words, min_size=2, max_size=2))
def test_exponential_functor_is_contravariant(a, b):
    H = TruncHopf(2, 3)
    u = GroupHom(2, 2, [FreeGroupWord(2, w) for w in a])
    v = GroupHom(2, 2, [FreeGroupWord(2, w) for w in b])
    # Φ(v ∘ u) = Φ(u) ∘ Φ(v)
    assert act_hom(H, u.then(v)) == act_hom(H, u) @ act_hom(H, v)


def test_identity_acts_trivially():
    H = TruncHopf(2, 3)
    assert act_hom(H, GroupHom.identity(2)) == LinMap.identity(exp_space(H, 2))


def test_group_parse_errors():
    with pytest.raises(GroupParseError):
        GroupHom.parse("2->1: x1")
    with pytest.raises(GroupParseError):
        GroupHom.parse("1->1: y1")
    with pytest.raises(GroupParseError):
        GroupHom.parse("1->1: x2")
    assert str(GroupHom.parse("1->2: x2^-1 x1 x2")) == str(conjugation_hom(1))


def test_cat_ass_small_dims():
    assert cat_ass_dim(2, 1) == 2
    assert cat_ass_dim(2, 2) == 6
    ass = builtin("AssU", 4)
    for m in range(4):
        for n in range(4):
            assert cat_ass_dim(m, n) == hom_space(ass, m, n).dim == cat_ass_hom(m, n).space.dim


def test_cat_ass_translation_roundtrip():
    ass = builtin("AssU", 4)
    for e in cat_ass_hom(3, 2).space.labels:
        assert from_assu_basis(to_assu_basis(e, ass), ass) == e


def test_filtration_subspace():
    # the condition bounds the fibre over the last output; s=1, n=0 has a single map onto it
    assert filtration_subspace(1, 0, 0).dim == 0
    assert filtration_subspace(1, 0, 1).dim == 1
    assert filtration_subspace(2, 1, 0).dim == 2
    assert filtration_subspace(2, 1, 2).dim == cat_ass_dim(2, 2)


def test_filtration_not_a_submodule():
    w = filtration_escape_witness(2, 1, 1)
    assert w is not None


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_pbw_matches_cat_ass(m):
    G = fmod.free_module(LIE, m, m)
    for n in range(5):
        assert pbw_dims(G, n) == cat_ass_dim(m, n)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pbw_orbit_count_matches_bruteforce(m):
    G = fmod.free_module(LIE, m, m)
    for n in range(4):
        assert pbw_dims(G, n) == pbw_dims_bruteforce(G, n)


def test_pbw_of_free1_and_free2():
    assert [pbw_dims(fmod.free_module(LIE, 1, 1), n) for n in range(5)] == [0, 1, 2, 3, 4]
    assert pbw_dims(fmod.free_module(LIE, 2, 2), 2) == 6


def test_delta_k_of_free3():
    D = delta_k(fmod.free_module(LIE, 3, 3), 2)
    assert D.dims() == [3, 3, 0, 0]
    # dimension at n=1 equals the S_2-coinvariants of the 6-dim space Cat Lie(3,3)
    assert D.dim(1) == 3


@pytest.mark.parametrize("m,n", [(m, n) for m in (1, 2, 3) for n in (0, 1, 2)])
def test_gamma_tbar(m, n):
    assert gamma_tbar_dim_check(fmod.free_module(LIE, m, m), n).passed


def test_gamma_tbar_alpha():
    A = fmod.alpha_embed(fmod.SigmaModule.concentrated(fmod.trivial_rep(1), 1), LIE)
    assert gamma_tbar_dim_check(A, 1).passed


def test_outer_dichotomy():
    t = outer_check_exponential(TruncHopf(2, 3), 2)
    assert not t.outer and t.consistent and t.witness is not None
    s = outer_check_exponential(TruncHopf(2, 3, True), 2)
    assert s.outer and s.consistent


def test_bridges():
    tb = tensor_hopf_bridge()
    assert tb.matches and not tb.mu_zero and not tb.outer
    sb = symmetric_hopf_bridge(2, 3)
    assert sb.matches and sb.mu_zero and sb.outer


def test_underline_modules_are_functors():
    g, _ = nilpotent_free_lie(TruncHopf(2, 3))
    for alg in (g, abelian_lie(2)):
        F = underline_module(alg, LIE, 3)
        assert fmod.check_functoriality(F) == []
