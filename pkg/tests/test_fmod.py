import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from opfunctors import fmod, samples
from opfunctors.exactlin import LinMap, transposition
from opfunctors.operads import builtin, default_mu, leib_to_lie

LIE = builtin("Lie", 6)
LEIB = builtin("Leib", 6)
MU = default_mu(LIE)
seeds = st.integers(0, 10**6)
slow = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def test_free_dims():
    assert fmod.free_module(LIE, 1, 3).dims() == [0, 1, 0, 0]
    assert fmod.free_module(LIE, 2, 3).dims() == [0, 1, 2, 0]
    assert fmod.free_module(LIE, 3, 3).dims() == [0, 2, 6, 6]


def test_delta_of_free2():
    assert fmod.delta(fmod.free_module(LIE, 2, 2)).dims() == [1, 2, 0]


def test_mu_tilde_on_free2():
    F = fmod.free_module(LIE, 2, 2)
    phi = fmod.mu_tilde(F, MU)
    assert phi.map(1).to_dense() == [[1, -1]]
    assert not fmod.is_in_mu(F, MU)


def test_coker_and_kernel_of_free2():
    F = fmod.free_module(LIE, 2, 2)
    Q, _ = fmod.coker_mu(F, MU)
    assert Q.dims() == [0, 0, 2]
    K, inc = fmod.ker_mu(F, MU)
    assert K.dims()[1] == 1
    (v,) = [inc.map(1)({0: Fraction(1)})]
    assert v[0] == v[1] != 0


def test_assu_refused_with_witness():
    ass = builtin("AssU", 4)
    F = fmod.free_module(ass, 1, 3)
    with pytest.raises(fmod.LeibnizFailure) as exc:
        fmod.mu_tilde(F, ass.product())
    assert not exc.value.witness.is_zero()


@slow
@given(seeds, st.sampled_from(["Lie", "Leib"]))
def test_random_modules_are_functors(seed, name):
    F = samples.random_module(LIE if name == "Lie" else LEIB, random.Random(seed), 3)
    assert fmod.check_functoriality(F) == []


@slow
@given(seeds, st.sampled_from(["Lie", "Leib"]))
def test_mu_tilde_natural(seed, name):
    op = LIE if name == "Lie" else LEIB
    F = samples.random_module(op, random.Random(seed), 3)
    assert fmod.mu_tilde(F, default_mu(op)).is_natural()


@slow
@given(seeds)
def test_kernel_cokernel_rank_balance(seed):
    # dim δF(n) - dim κF(n) = rank μ̃(n) = dim F(n) - dim F^μ(n)
    F = samples.random_module(LIE, random.Random(seed), 3)
    dF = fmod.delta(F)
    K, _ = fmod.ker_mu(F, MU)
    Q, _ = fmod.coker_mu(F, MU)
    phi = fmod.mu_tilde(F, MU)
    for n in range(F.bound + 1):
        r = phi.map(n).rank()
        assert dF.dim(n) - K.dim(n) == r == F.dim(n) - Q.dim(n)


@slow
@given(seeds)
def test_reflection_is_idempotent(seed):
    F = samples.random_module(LIE, random.Random(seed), 3)
    Q, p = fmod.coker_mu(F, MU)
    assert fmod.is_in_mu(Q, MU)
    Q2, p2 = fmod.coker_mu(Q, MU)
    assert Q2.dims() == Q.dims() and p2.is_isomorphism()
    assert p.is_surjective() and p.is_natural()


@slow
@given(seeds)
def test_yoneda_morphisms_natural(seed):
    f = samples.random_morphism(LIE, random.Random(seed), 3)
    assert f.is_natural()
    K, inc = f.kernel()
    assert (f @ inc).ranks() == [0] * len((f @ inc).maps)


@slow
@given(seeds)
def test_shift_is_exact(seed):
    g = samples.random_morphism(LIE, random.Random(seed), 3)
    K, _ = g.kernel()
    dK, _ = fmod.shifted_morphism(g).kernel()
    assert dK.dims() == fmod.delta(K).dims()[:dK.bound + 1]


@slow
@given(seeds)
def test_six_term_exact(seed):
    i, p = samples.random_short_exact(LIE, random.Random(seed), 3)
    assert fmod.is_short_exact(i, p)
    assert fmod.six_term(i, p, MU).exact


@slow
@given(seeds)
def test_closure_under_sub_quotient_sum(seed):
    rng = random.Random(seed)
    Q, _ = fmod.coker_mu(samples.random_module(LIE, rng, 3), MU)
    subs = samples.random_generated_subspaces(rng, Q, 1)
    for X in (fmod.submodule(Q, subs), fmod.quotient(Q, subs), fmod.direct_sum([Q, Q])):
        assert fmod.is_in_mu(X, MU)


@slow
@given(seeds)
def test_factorization_through_reflection(seed):
    rng = random.Random(seed)
    F = samples.random_module(LIE, rng, 3)
    FK = fmod.quotient(F, samples.random_generated_subspaces(rng, F, 1))
    G, pG = fmod.coker_mu(FK, MU)
    f = pG @ fmod.projection_morphism(FK)
    h, p = fmod.factor_through_reflection(f, MU)
    assert h @ p == f and h.is_natural()


def test_factorization_rejects_target_outside():
    F = fmod.free_module(LIE, 2, 2)
    with pytest.raises(fmod.ModuleError):
        fmod.factor_through_reflection(fmod.identity_morphism(F), MU)


def test_socle_of_free2_six_term():
    F = fmod.free_module(LIE, 2, 2)
    K = fmod.generated_submodule(F, {1: [{0: 1}]})
    rep = fmod.six_term(fmod.inclusion_morphism(K),
                        fmod.projection_morphism(fmod.quotient(F, K.subspaces)), MU)
    assert rep.exact


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_delta_of_free_decomposes(m):
    iso, src, tgt, subsets = fmod.delta_proj_decompose(LIE, m, 4)
    assert src.dims() == tgt.dims()
    assert iso.is_isomorphism() and iso.is_natural()
    assert len(subsets) == 2 ** m - 1


def test_delta_proj_m4_dims():
    _, src, _, _ = fmod.delta_proj_decompose(LIE, 4, 4)
    assert src.dims()[:4] == [6, 22, 36, 24]


def test_delta_proj_equivariant():
    assert fmod.delta_proj_equivariance(LIE, 3, 4)


@slow
@given(seeds)
def test_restriction_commutes_with_reflection(seed):
    phi = leib_to_lie(6)
    G = samples.random_module(LIE, random.Random(seed), 3)
    R = fmod.restrict_along(phi, G)
    assert fmod.is_in_mu(G, MU) == fmod.is_in_mu(R, default_mu(LEIB))
    Gq, _ = fmod.coker_mu(G, MU)
    Rq, _ = fmod.coker_mu(R, default_mu(LEIB))
    assert fmod.restrict_along(phi, Gq).dims() == Rq.dims()


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(seeds)
def test_convolution_checks(seed):
    rng = random.Random(seed)
    F = samples.random_module(LIE, rng, 2)
    G = samples.random_module(LIE, rng, 2)
    if F.bound + G.bound > 4:
        return
    FG = fmod.convolution(F, G)
    assert fmod.check_functoriality(FG) == []
    rep = fmod.conv_mu_checks(F, G, MU)
    assert rep.iso_bijective and rep.iso_natural and rep.sum_rule and rep.stable_iso


def test_convolution_unit():
    F = fmod.free_module(LIE, 2, 2)
    assert fmod.convolution(F, fmod.unit_module(LIE, 0)).dims() == F.dims()


def test_convolution_dims_free_with_alpha():
    F = fmod.free_module(LIE, 2, 2)
    A = fmod.alpha_embed(fmod.SigmaModule.concentrated(fmod.trivial_rep(1), 2), LIE)
    rep = fmod.conv_mu_checks(F, A, MU)
    assert rep.ok


def test_morphism_shape_errors():
    F = fmod.free_module(LIE, 2, 2)
    G = fmod.free_module(LIE, 1, 2)
    with pytest.raises(fmod.ModuleError):
        fmod.ModuleMorphism(F, G, [LinMap.identity(F.space(n)) for n in range(3)])


def test_sym_action_on_free2():
    F = fmod.free_module(LIE, 2, 2)
    t = F.perm(2, transposition(2, 0))
    assert t @ t == LinMap.identity(F.space(2))
    assert t.trace() == 0
