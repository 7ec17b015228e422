"""Named verification suites.

Every suite returns ``{check name: {"pass": bool, ...details}}`` with
details that are plain JSON values, so runs with the same seed serialize
to identical bytes.  Timings are deliberately left out of the results.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from math import factorial
from typing import Callable

from . import catprop, fmod, groupside, homresolve, samples
from .exactlin import LinMap, fraction_str, transposition
from .operads import (LEIB_TEXT, LIE_TEXT, build_operad, builtin, check_operad_axioms,
                      default_mu, leib_to_lie, parse_presentation)

DEFAULT_SEED = 20240917


def _entry(passed: bool, **details) -> dict:
    out = {"pass": bool(passed)}
    out.update(details)
    return out


def _vec_text(x) -> dict:
    return {x.operad.basis_label_str(x.arity, a): fraction_str(c) for a, c in sorted(x.coeffs.items())}


def _matrix_text(f: LinMap) -> list:
    return [[fraction_str(x) for x in row] for row in f.to_dense()]


# ---------------------------------------------------------------- operads

def suite_operads(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    # fresh builds so that nothing comes from a cache
    lie = build_operad(parse_presentation(LIE_TEXT, nmax=5, name="Lie"))
    leib = build_operad(parse_presentation(LEIB_TEXT, nmax=5, name="Leib"))
    lie_dims = [lie.dim(n) for n in range(1, 6)]
    leib_dims = [leib.dim(n) for n in range(1, 6)]
    res["lie_dims"] = _entry(lie_dims == [factorial(n - 1) for n in range(1, 6)], dims=lie_dims)
    res["leib_dims"] = _entry(leib_dims == [factorial(n) for n in range(1, 6)], dims=leib_dims)
    for name in ("Lie", "Leib", "AssU", "ComU"):
        fails = check_operad_axioms(builtin(name, 4), 4)
        res[f"axioms_{name.lower()}"] = _entry(not fails, failures=fails[:5], nmax=4)
    return res


# ---------------------------------------------------------------- Leibniz

def suite_leibniz(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    for name in ("Lie", "Leib", "AssU", "ComU"):
        op = builtin(name, 6)
        mu = default_mu(op)
        gen = catprop.leibniz_check(op, mu, "generators")
        exh = catprop.leibniz_check(op, mu, "exhaustive", nmax=5)
        expected = name in ("Lie", "Leib")
        detail = {"holds": gen.holds}
        if not gen.holds:
            detail["witness"] = _vec_text(gen.witness)
            detail["tested"] = _vec_text(gen.tested)
        witness_ok = gen.holds or not gen.witness.is_zero()
        res[f"{name.lower()}_generators"] = _entry(gen.holds == expected and witness_ok, **detail)
        res[f"{name.lower()}_modes_agree"] = _entry(gen.holds == exh.holds, generators=gen.holds,
                                                    exhaustive=exh.holds, max_arity=5)
    return res


# ---------------------------------------------------------------- μ̃ naturality

def suite_naturality(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    rng = random.Random(seed)
    natural = []
    for k in range(20):
        op = builtin("Lie" if k % 2 == 0 else "Leib", 6)
        F = samples.random_module(op, rng, 3)
        phi = fmod.mu_tilde(F, default_mu(op), check=False)
        natural.append(phi.is_natural() and not fmod.check_functoriality(F))
    res["mu_tilde_natural_random"] = _entry(all(natural), modules=len(natural),
                                            natural=sum(natural))
    ass = builtin("AssU", 4)
    F = fmod.free_module(ass, 1, 3)
    refused = False
    try:
        fmod.mu_tilde(F, default_mu(ass))
    except fmod.LeibnizFailure:
        refused = True
    raw = fmod.mu_tilde_raw(F, default_mu(ass))
    phi = fmod.ModuleMorphism(fmod.delta(F), fmod.truncate(F, len(raw) - 1), raw)
    bad = phi.naturality_violation()
    detail = {"refused": refused}
    if bad is not None:
        xi, lhs, rhs = bad
        detail.update(morphism=xi.encode(), lhs=_matrix_text(lhs), rhs=_matrix_text(rhs))
    res["assu_raw_maps_not_natural"] = _entry(refused and bad is not None and lhs != rhs, **detail)
    # Σ_n-equivariance of the raw maps holds regardless
    dF = fmod.delta(F)
    equi = all(raw[n] @ dF.perm(n, transposition(n, i)) == F.perm(n, transposition(n, i)) @ raw[n]
               for n in range(len(raw)) for i in range(n - 1))
    res["assu_raw_maps_equivariant"] = _entry(equi)
    return res


# ---------------------------------------------------------------- δ of free modules

def suite_delta_proj(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    lie = builtin("Lie", 6)
    for m in range(1, 5):
        iso, src, tgt, subsets = fmod.delta_proj_decompose(lie, m, 4)
        dims_ok = src.dims() == tgt.dims()
        res[f"m{m}"] = _entry(dims_ok and iso.is_isomorphism() and iso.is_natural(),
                              source_dims=src.dims(), target_dims=tgt.dims(), summands=len(subsets))
    res["equivariance_m3"] = _entry(fmod.delta_proj_equivariance(lie, 3, 4))
    return res


# ---------------------------------------------------------------- reflection

def suite_reflection(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    lie = builtin("Lie", 6)
    mu = default_mu(lie)
    rng = random.Random(seed + 1)
    coker_in, factor_ok, closure_ok, six_ok, factor2_ok = [], [], [], [], []
    delta_exact = []
    for _ in range(20):
        F = samples.random_module(lie, rng, 3)
        Q, proj = fmod.coker_mu(F, mu)
        coker_in.append(fmod.is_in_mu(Q, mu))
        # a morphism into the subcategory: F → F/K → (F/K)^μ
        subs = samples.random_generated_subspaces(rng, F, 1)
        FK = fmod.quotient(F, subs)
        G, pG = fmod.coker_mu(FK, mu)
        f = pG @ fmod.projection_morphism(FK)
        try:
            h, p = fmod.factor_through_reflection(f, mu)
            unique = p.is_surjective()
            factor_ok.append(h.is_natural() and (h @ p) == f and unique)
        except fmod.ModuleError:
            factor_ok.append(False)
        # closure: sub, quotient and sum of objects of the subcategory
        sub_subs = samples.random_generated_subspaces(rng, Q, 1)
        S = fmod.submodule(Q, sub_subs)
        T = fmod.quotient(Q, sub_subs)
        U = fmod.direct_sum([Q, G]) if G.bound == Q.bound else Q
        closure_ok.append(all(fmod.is_in_mu(X, mu) for X in (S, T, U)))
        # the six-term sequence
        i, p2 = samples.random_short_exact(lie, rng, 3)
        six_ok.append(fmod.six_term(i, p2, mu).exact)
        # factorization of μ̃ for an extension of two objects of the subcategory
        lo = rng.randint(1, 2)
        W = fmod.arity_window(F, lo, lo + 1)
        low = [fmod.Subspace.whole(W.space(n)) if n == lo else fmod.Subspace.zero(W.space(n))
               for n in range(W.bound + 1)]
        i3 = fmod.inclusion_morphism(fmod.submodule(W, low))
        p3 = fmod.projection_morphism(fmod.quotient(W, low))
        factor2_ok.append(fmod.is_in_mu(i3.source, mu) and fmod.is_in_mu(p3.target, mu)
                          and fmod.closure_factorization(i3, p3, mu))
        # δ is exact: kernels of δf are shifted kernels of f
        g = samples.random_morphism(lie, rng, 3)
        K, _ = g.kernel()
        dg = fmod.shifted_morphism(g)
        dK, _ = dg.kernel()
        delta_exact.append(dK.dims() == fmod.delta(K).dims()[:dK.bound + 1])
    res["coker_in_subcategory"] = _entry(all(coker_in), modules=len(coker_in))
    res["adjunction_factorization"] = _entry(all(factor_ok), morphisms=len(factor_ok))
    res["closure_sub_quotient_sum"] = _entry(all(closure_ok), trials=len(closure_ok))
    res["six_term_exact"] = _entry(all(six_ok), sequences=len(six_ok))
    res["extension_factorization"] = _entry(all(factor2_ok), trials=len(factor2_ok))
    res["delta_exact"] = _entry(all(delta_exact), trials=len(delta_exact))
    # worked example: the socle of Cat Lie(2,−)
    F = fmod.free_module(lie, 2, 2)
    K = fmod.generated_submodule(F, {1: [{0: 1}]})
    rep = fmod.six_term(fmod.inclusion_morphism(K),
                        fmod.projection_morphism(fmod.quotient(F, K.subspaces)), mu)
    res["six_term_free2_socle"] = _entry(rep.exact, dims={str(n): d for n, d in rep.dims.items()})
    # κ_μ F outside the subcategory: search among free modules
    found = homresolve.search_kappa_outside([fmod.free_module(lie, m, 4) for m in range(1, 5)], mu)
    res["kappa_outside_witness"] = _entry(found is not None,
                                          witness=found[0].name if found else None,
                                          kappa_dims=found[1].dims() if found else None)
    # κ_μ of a subobject stays in the subcategory when κ_μ F does
    sub_ok = []
    for m in range(1, 4):
        F = fmod.free_module(lie, m, 3)
        kF, _ = fmod.ker_mu(F, mu)
        if not fmod.is_in_mu(kF, mu):
            continue
        for _ in range(3):
            K = fmod.submodule(F, samples.random_generated_subspaces(rng, F, 1))
            kK, _ = fmod.ker_mu(K, mu)
            sub_ok.append(fmod.is_in_mu(kK, mu))
    res["kappa_subobjects"] = _entry(all(sub_ok), trials=len(sub_ok))
    return res


# ---------------------------------------------------------------- change of operad

def suite_operad_change(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    phi = leib_to_lie(6)
    lie, leib = phi.target, phi.source
    mu_lie, mu_leib = default_mu(lie), default_mu(leib)
    rng = random.Random(seed + 2)
    modules = [fmod.free_module(lie, m, 3) for m in range(1, 4)]
    modules += [samples.random_module(lie, rng, 3) for _ in range(10)]
    equiv, dims_ok, delta_ok = [], [], []
    for G in modules:
        R = fmod.restrict_along(phi, G)
        equiv.append(fmod.is_in_mu(G, mu_lie) == fmod.is_in_mu(R, mu_leib))
        Gq, _ = fmod.coker_mu(G, mu_lie)
        Rq, _ = fmod.coker_mu(R, mu_leib)
        dims_ok.append(fmod.restrict_along(phi, Gq).dims() == Rq.dims())
        dG = fmod.restrict_along(phi, fmod.delta(G))
        dR = fmod.delta(R)
        same = True
        for m in range(dR.bound + 1):
            for n in range(dR.bound + 1):
                for xi in dR.basis_morphisms(m, n):
                    if dG.act(xi) != dR.act(xi):
                        same = False
        delta_ok.append(same)
    res["membership_equivalent"] = _entry(all(equiv), modules=len(modules))
    res["reflection_commutes"] = _entry(all(dims_ok), modules=len(modules))
    res["shift_commutes"] = _entry(all(delta_ok), modules=len(modules))
    G = fmod.free_module(lie, 2, 3)
    res["free2_not_in_subcategory"] = _entry(
        not fmod.is_in_mu(G, mu_lie) and not fmod.is_in_mu(fmod.restrict_along(phi, G), mu_leib))
    return res


# ---------------------------------------------------------------- convolution

def suite_convolution(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    lie = builtin("Lie", 6)
    mu = default_mu(lie)
    rng = random.Random(seed + 3)
    reports = []
    while len(reports) < 10:
        F = samples.random_module(lie, rng, 2)
        G = samples.random_module(lie, rng, 2)
        if F.bound + G.bound > 4:
            continue
        FG = fmod.convolution(F, G)
        r = fmod.conv_mu_checks(F, G, mu)
        reports.append((r, FG.bound, not fmod.check_functoriality(FG)))
    res["shift_iso"] = _entry(all(r.iso_bijective and r.iso_natural for r, _, _ in reports), pairs=len(reports))
    res["sum_rule"] = _entry(all(r.sum_rule for r, _, _ in reports), pairs=len(reports))
    res["reflection_monoidal"] = _entry(all(r.stable_iso for r, _, _ in reports), pairs=len(reports),
                                        max_bound=max(b for _, b, _ in reports))
    res["functorial"] = _entry(all(f for _, _, f in reports), pairs=len(reports))
    F = fmod.free_module(lie, 2, 2)
    A = fmod.alpha_embed(fmod.SigmaModule.concentrated(fmod.trivial_rep(1), 2), lie)
    r = fmod.conv_mu_checks(F, A, mu)
    res["free2_with_alpha_triv1"] = _entry(r.ok, dims={str(n): list(d) for n, d in r.dims.items()})
    unit = fmod.unit_module(lie, 0)
    FU = fmod.convolution(F, unit)
    res["unit"] = _entry(FU.dims() == F.dims())
    Q, _ = fmod.coker_mu(F, mu)
    res["product_of_objects_in_subcategory"] = _entry(fmod.is_in_mu(fmod.convolution(Q, A), mu))
    return res


# ---------------------------------------------------------------- homology

REPS = {"triv": fmod.trivial_rep, "sign": fmod.sign_rep, "std": fmod.standard_rep,
        "reg": fmod.regular_rep}


def _alpha(op, kind: str, n: int):
    M = fmod.SigmaModule.concentrated(REPS[kind](n), n, name=f"{kind}{n}")
    return fmod.alpha_embed(M, op)


def homology_test_modules(lie, rng) -> list:
    mods = []
    for n, kind in [(2, "triv"), (2, "sign"), (3, "std"), (3, "sign"), (3, "triv")]:
        mods.append(_alpha(lie, kind, n))
    while len(mods) < 10:
        F = samples.random_module(lie, rng, 3)
        if not F.is_zero():
            mods.append(F)
    return mods


def suite_homology(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    lie = builtin("Lie", 6)
    mu = default_mu(lie)
    rng = random.Random(seed + 4)
    agree, acyclic, high, first = [], [], [], []
    for F in homology_test_modules(lie, rng):
        rep = homresolve.derived_mu(F, mu)
        agree.append(rep.agree)
        acyclic.append(rep.resolution.d_squared_zero() and rep.resolution.is_acyclic_augmented())
        high.append(rep.kappa_acyclic_high)
        first.append(rep.first_is_coker)
    res["methods_agree"] = _entry(all(agree), modules=len(agree))
    res["resolutions_acyclic"] = _entry(all(acyclic), modules=len(acyclic))
    res["kappa_complex_vanishes_high"] = _entry(all(high), modules=len(high))
    res["first_derived_is_cokernel"] = _entry(all(first), modules=len(first))
    proj_ok = []
    for m in range(1, 4):
        F = fmod.free_module(lie, m, 3)
        rep = homresolve.derived_mu(F, mu)
        Q, _ = fmod.coker_mu(F, mu)
        higher_zero = all(all(d == 0 for d in rep.dims(i)) for i in range(1, 4))
        proj_ok.append(rep.resolution.length == 0 and higher_zero and rep.dims(0) == Q.dims())
    res["projectives_acyclic"] = _entry(all(proj_ok), modules=len(proj_ok))
    support_ok = []
    for N in (2, 3):
        for kind in ("triv", "sign", "std"):
            F = _alpha(lie, kind, N)
            if F.dim(N) == 0:
                continue
            d1 = homresolve.derived_mu(F, mu).dims(1)
            dF = fmod.delta(F).dims()
            support_ok.append(all(d == 0 for n, d in enumerate(d1) if n != N - 1)
                              and all(d <= dF[n] for n, d in enumerate(d1)))
    res["first_derived_support"] = _entry(all(support_ok), modules=len(support_ok))
    cands = [_alpha(lie, kind, n) for n in (1, 2, 3) for kind in ("triv", "sign")]
    found = homresolve.search_kappa_not_first_derived(cands, mu)
    res["kappa_differs_from_first_derived"] = _entry(
        found is not None, witness=found[0].name if found else None,
        first_derived=found[1] if found else None, kappa=found[2] if found else None)
    return res


# ---------------------------------------------------------------- group side

def suite_group(seed: int = DEFAULT_SEED) -> dict:
    res = {}
    for comm in (False, True):
        rep = groupside.check_hopf_axioms(groupside.TruncHopf(2, 4, comm))
        res["hopf_" + ("symmetric" if comm else "tensor")] = _entry(rep.ok, failures=rep.details[:5])
    prim = [groupside.primitive_conjugation_check(n, 4) for n in (1, 2)]
    res["primitive_conjugation"] = _entry(all(p.passed for p in prim), checked=sum(p.checked for p in prim))
    H = groupside.TruncHopf(2, 3)
    comp = [groupside.psi_rho_composites(H, k, n) for k in (1, 2, 3) for n in (0, 1, 2)]
    res["psi_rho_composites"] = _entry(all(comp), cases=len(comp))
    lie = builtin("Lie", 6)
    pbw = []
    for m in range(1, 5):
        G = fmod.free_module(lie, m, m)
        for n in range(5):
            pbw.append(groupside.pbw_dims(G, n) == groupside.cat_ass_dim(m, n))
    res["pbw_matches_cat_ass"] = _entry(all(pbw), cases=len(pbw))
    ass = builtin("AssU", 4)
    hom_ok = all(groupside.cat_ass_dim(m, n) == catprop.hom_space(ass, m, n).dim
                 for m in range(5) for n in range(5))
    res["cat_ass_basis_count"] = _entry(hom_ok)
    gam = []
    for m in range(1, 4):
        G = fmod.free_module(lie, m, m)
        for n in range(3):
            gam.append(groupside.gamma_tbar_dim_check(G, n).passed)
    A = fmod.alpha_embed(fmod.SigmaModule.concentrated(fmod.trivial_rep(1), 1), lie)
    gam.append(groupside.gamma_tbar_dim_check(A, 1).passed)
    res["gamma_tbar_dims"] = _entry(all(gam), cases=len(gam))
    t = groupside.outer_check_exponential(groupside.TruncHopf(2, 3), 2)
    s = groupside.outer_check_exponential(groupside.TruncHopf(2, 3, True), 2)
    res["outer_tensor"] = _entry(not t.outer and t.consistent)
    res["outer_symmetric"] = _entry(s.outer and s.consistent)
    tb = groupside.tensor_hopf_bridge()
    sb = groupside.symmetric_hopf_bridge(2, 3)
    res["bridge_nilpotent"] = _entry(tb.matches and not tb.mu_zero and not tb.outer, checked=tb.checked)
    res["bridge_abelian"] = _entry(sb.matches and sb.mu_zero and sb.outer, checked=sb.checked)
    w = groupside.filtration_escape_witness(2, 1, 1)
    res["filtration_escape"] = _entry(w is not None,
                                      element=[list(w[0].f), [list(o) for o in w[0].orders]] if w else None,
                                      morphism=w[1].encode() if w else None)
    return res


SUITES: dict[str, Callable[[int], dict]] = {
    "operads": suite_operads,
    "leibniz": suite_leibniz,
    "naturality": suite_naturality,
    "delta-proj": suite_delta_proj,
    "reflection": suite_reflection,
    "operad-change": suite_operad_change,
    "convolution": suite_convolution,
    "homology": suite_homology,
    "group": suite_group,
}


def suite_passed(result: dict) -> bool:
    return all(v["pass"] for v in result.values())


def run(suite: str, seed: int = DEFAULT_SEED, threads: int = 1) -> dict:
    """Run one suite or ``all``; returns ``{"suites": {...}, "passed": bool}``."""
    names = list(SUITES) if suite == "all" else [suite]
    for n in names:
        if n not in SUITES:
            raise KeyError(n)
    if threads > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda n: SUITES[n](seed), names))
    else:
        outs = [SUITES[n](seed) for n in names]
    results = dict(zip(names, outs))
    return {"seed": seed, "suites": results,
            "passed": all(suite_passed(r) for r in results.values())}
