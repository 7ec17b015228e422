import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from opfunctors import fmod, homresolve, samples
from opfunctors.operads import builtin, default_mu
from opfunctors.verify import _alpha

LIE = builtin("Lie", 6)
MU = default_mu(LIE)
slow = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def nonzero_module(seed):
    rng = random.Random(seed)
    while True:
        F = samples.random_module(LIE, rng, 3)
        if not F.is_zero():
            return F


def test_alpha_triv2_resolution():
    F = _alpha(LIE, "triv", 2)
    res = homresolve.projective_resolution(F)
    assert res.length <= 2
    assert res.terms[0].dim(2) == F.dim(2)
    assert res.d_squared_zero() and res.is_acyclic_augmented()


@slow
@given(st.integers(0, 10**6))
def test_resolution_euler_characteristic(seed):
    F = nonzero_module(seed)
    res = homresolve.projective_resolution(F)
    assert res.d_squared_zero() and res.is_acyclic_augmented()
    for n in range(F.bound + 1):
        assert sum((-1) ** k * P.dim(n) for k, P in enumerate(res.terms)) == F.dim(n)


@slow
@given(st.integers(0, 10**6))
def test_derived_methods_agree_and_euler(seed):
    F = nonzero_module(seed)
    rep = homresolve.derived_mu(F, MU)
    assert rep.agree and rep.first_is_coker and rep.kappa_acyclic_high
    Q, _ = fmod.coker_mu(F, MU)
    assert rep.dims(0) == Q.dims()
    # Euler characteristic of (P•)^μ equals the alternating sum of derived dims
    reflected = [fmod.coker_mu(P, MU)[0] for P in rep.resolution.terms]
    for n in range(F.bound + 1):
        lhs = sum((-1) ** k * R.dim(n) for k, R in enumerate(reflected))
        rhs = sum((-1) ** i * rep.dims(i)[n] for i in range(len(reflected)))
        assert lhs == rhs


@pytest.mark.parametrize("m", [1, 2, 3])
def test_projectives_have_no_higher_derived(m):
    F = fmod.free_module(LIE, m, 3)
    rep = homresolve.derived_mu(F, MU)
    assert rep.resolution.length == 0
    assert all(d == 0 for i in range(1, 4) for d in rep.dims(i))


@pytest.mark.parametrize("N,kind", [(2, "triv"), (2, "sign"), (3, "triv"), (3, "sign"), (3, "std")])
def test_first_derived_support(N, kind):
    F = _alpha(LIE, kind, N)
    d1 = homresolve.derived_mu(F, MU).dims(1)
    assert all(d == 0 for n, d in enumerate(d1) if n != N - 1)
    assert all(d <= e for d, e in zip(d1, fmod.delta(F).dims()))


def test_first_derived_differs_from_kappa():
    l1, k = homresolve.kappa_vs_first_derived(_alpha(LIE, "triv", 1), MU)
    assert l1 != k


def test_kappa_of_free4_outside():
    found = homresolve.search_kappa_outside([fmod.free_module(LIE, 4, 4)], MU)
    assert found is not None


def test_hypotheses_checked():
    ass = builtin("AssU", 4)
    with pytest.raises(homresolve.ResolutionError):
        homresolve.projective_resolution(fmod.free_module(ass, 1, 2))
    F = fmod.free_module(LIE, 3, 3)
    with pytest.raises(homresolve.ResolutionError):
        homresolve.projective_resolution(F, support=2)


def test_induced_projective_is_projective_cover_of_itself():
    term = homresolve.induced_projective(LIE, 2, fmod.trivial_rep(2), 3)
    rep = homresolve.derived_mu(term.module, MU)
    assert rep.resolution.length == 0
