"""Finite projective resolutions and the left derived functors of ``(−)^μ``.

A module vanishing above arity ``N`` over a reduced operad with ``O(1) = k``
is covered top arity first: ``Cat O(s, −) ⊗_{Σ_s} V`` maps onto the part of
the module generated at arity ``s``, and the construction recurses on the
kernel.  ``⊗_{Σ_s}`` is realized as coinvariants of the plain tensor product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .catprop import permutation_elt, compose_basis
from .exactlin import (LinMap, Space, Subspace, SymAction, all_perms, class_representatives,
                       coinvariant_relations, kernel_subspace, perm_inverse, solve, transposition)
from .fmod import (ModuleError, ModuleMorphism, SigmaModule, TruncatedModule, coker_mu,
                   direct_sum, free_module, is_in_mu, kappa_morphism, ker_mu, quotient,
                   reflect_morphism, tensor_constant, zero_module)
from .operads import Operad, OperadElement


class ResolutionError(ModuleError):
    pass


# ---------------------------------------------------------------- complexes

@dataclass
class ChainComplex:
    """``… → C_1 → C_0`` with ``differentials[k]: C_{k+1} → C_k``.

    ``augmentation`` (optional) maps ``C_0`` onto the module being resolved,
    which then sits in degree −1.
    """

    terms: list
    differentials: list
    augmentation: ModuleMorphism | None = None
    pieces: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def bound(self) -> int:
        return self.terms[0].bound if self.terms else 0

    def d_squared_zero(self) -> bool:
        maps = list(self.differentials)
        if self.augmentation is not None:
            maps = [self.augmentation] + maps
        for a, b in zip(maps, maps[1:]):
            if not (a @ b).is_zero():
                return False
        return True

    def is_acyclic_augmented(self) -> bool:
        """Exactness of ``… → P_1 → P_0 → F → 0`` checked by ranks."""
        if self.augmentation is None:
            raise ResolutionError("the complex has no augmentation")
        F = self.augmentation.target
        for n in range(self.bound + 1):
            ranks_out = [self.augmentation.maps[n].rank()] + [d.maps[n].rank() for d in self.differentials]
            if ranks_out[0] != F.dim(n):
                return False
            for k, P in enumerate(self.terms):
                r_in = ranks_out[k + 1] if k + 1 < len(ranks_out) else 0
                if ranks_out[k] + r_in != P.dim(n):
                    return False
        return True

    def dims_table(self) -> list[list[int]]:
        return [P.dims() for P in self.terms]


# ---------------------------------------------------------------- projective terms

@dataclass
class ProjectiveTerm:
    """``Cat O(s, −) ⊗_{Σ_s} V`` with its underlying quotient presentation."""

    s: int
    rep: SymAction
    module: TruncatedModule
    tensor: TruncatedModule


def induced_projective(op: Operad, s: int, rep: SymAction, N: int) -> ProjectiveTerm:
    """``Cat O(s, −) ⊗_{Σ_s} V``: coinvariants of ``x ⊗ v`` under ``(x∘σ) ⊗ v ~ x ⊗ σv``."""
    free = free_module(op, s, N)
    T = tensor_constant(free, rep.space, name=f"Cat({s},-)⊗V")
    subs = []
    for n in range(N + 1):
        sp = T.space(n)
        if sp.dim == 0 or s < 2:
            subs.append(Subspace.zero(sp))
            continue
        gens = []
        hom = free.space(n)
        for i in range(s - 1):
            tau = transposition(s, i)
            pre = permutation_elt(op, tau)
            rho = rep.generators[i]
            vdim = rep.space.dim
            # g(x⊗v) = (x∘τ)⊗(τv); coinvariants of g identify x∘τ⊗τv with x⊗v
            cols = []
            for x_idx, x in enumerate(hom.labels):
                xt = compose_basis(op, x, pre)
                for v in range(vdim):
                    col = {}
                    for a, c in xt.items():
                        for b, d in rho.cols[v].items():
                            col[a * vdim + b] = c * d
                    cols.append(col)
            gens.append(LinMap(sp, sp, cols))
        subs.append(coinvariant_relations(sp, gens))
    P = quotient(T, subs, name=f"Cat({s},-)⊗_S{s}V")
    return ProjectiveTerm(s, rep, P, T)


def evaluation_map(term: ProjectiveTerm, F: TruncatedModule, e: LinMap) -> ModuleMorphism:
    """``x ⊗ v ↦ F(x)(e(v))`` for a ``Σ_s``-equivariant ``e: V → F(s)``."""
    P, T = term.module, term.tensor
    vspace = term.rep.space
    maps = []
    for n in range(P.bound + 1):
        sp = T.space(n)
        cols = [F.act(x)(e.cols[vspace.index(v)]) for (x, v) in sp.labels]
        tensor_map = LinMap(sp, F.space(n), cols)
        maps.append(tensor_map @ P.sections[n])
    return ModuleMorphism(P, F, maps)


def _equivariant_section(F: TruncatedModule, proj: LinMap, s: int) -> LinMap:
    """A ``Σ_s``-equivariant section of a surjection ``F(s) → C(s)``, found by averaging."""
    C = proj.codomain
    cols = [solve(proj, {j: Fraction(1)}) for j in range(C.dim)]
    sec = LinMap(C, proj.domain, cols)
    if s < 2:
        return sec
    total = LinMap.zero(C, proj.domain)
    count = 0
    for p in all_perms(s):
        g = F.perm(s, p)
        ginv = F.perm(s, perm_inverse(p))
        total = total + g @ sec @ (proj @ ginv @ sec)
        count += 1
    return Fraction(1, count) * total


def cover(F: TruncatedModule) -> tuple[TruncatedModule, ModuleMorphism, list[ProjectiveTerm]]:
    """A surjection from a finite sum of induced projectives onto ``F``.

    Arities are covered from the top down; at each stage only the part of
    the cokernel still missing is covered.
    """
    op = F.operad
    N = F.bound
    terms: list[ProjectiveTerm] = []
    evals: list[ModuleMorphism] = []
    image = [Subspace.zero(F.space(n)) for n in range(N + 1)]
    for s in range(N, -1, -1):
        sub = image[s]
        _, proj, _ = sub.quotient()
        if proj.codomain.dim == 0:
            continue
        # Σ_s acts on C(s) = F(s)/image(s); the image is stable so this is induced
        sec_lin = sub.quotient()[2]
        acts = [proj @ F.perm(s, transposition(s, i)) @ sec_lin for i in range(s - 1)]
        rep = SymAction(proj.codomain, s, acts)
        e = _equivariant_section(F, proj, s)
        term = induced_projective(op, s, rep, N)
        ev = evaluation_map(term, F, e)
        terms.append(term)
        evals.append(ev)
        image = [Subspace.span(F.space(n), list(image[n].vectors) + list(ev.maps[n].cols))
                 for n in range(N + 1)]
    if not terms:
        Z = zero_module(op, N)
        return Z, ModuleMorphism(Z, F, [LinMap.zero(Z.space(n), F.space(n)) for n in range(N + 1)]), []
    P = direct_sum([t.module for t in terms], name="P")
    maps = []
    for n in range(N + 1):
        cols = []
        for ev in evals:
            cols.extend(ev.maps[n].cols)
        maps.append(LinMap(P.space(n), F.space(n), cols))
    eps = ModuleMorphism(P, F, maps)
    if not eps.is_surjective():
        raise ResolutionError("the top-down cover is not surjective")
    return P, eps, terms


def check_resolution_hypotheses(F: TruncatedModule) -> None:
    op = F.operad
    if not (op.reduced and op.unital_one):
        raise ResolutionError(f"{op.name} must be reduced with O(1) one-dimensional")
    if not F.vanishes_above:
        raise ResolutionError("the module must vanish above its bound")


def projective_resolution(F: TruncatedModule, support: int | None = None) -> ChainComplex:
    """The resolution obtained by covering and recursing on kernels."""
    check_resolution_hypotheses(F)
    if support is not None:
        if any(F.dim(n) for n in range(support + 1, F.bound + 1)):
            raise ResolutionError(f"the module is not supported in arities <= {support}")
    N = F.bound
    terms, diffs, pieces = [], [], []
    P, eps, t = cover(F)
    if P.is_zero():
        return ChainComplex([], [], None, [])
    terms.append(P)
    pieces.append(t)
    current = eps
    for _ in range(N + 2):
        K, inc = current.kernel()
        if K.is_zero():
            break
        Pn, eps_n, t = cover(K)
        d = inc @ eps_n
        d = ModuleMorphism(Pn, current.source, d.maps)
        terms.append(Pn)
        diffs.append(d)
        pieces.append(t)
        current = d
    else:
        raise ResolutionError("the resolution did not terminate")
    return ChainComplex(terms, diffs, eps, pieces)


# ---------------------------------------------------------------- homology

def homology_rep(d_in: LinMap | None, d_out: LinMap | None, space: Space,
                 act: SymAction | None) -> SymAction:
    """``ker d_out / im d_in`` with the induced symmetric group action."""
    Z = kernel_subspace(d_out) if d_out is not None else Subspace.whole(space)
    if d_in is not None:
        B = Subspace.span(Z.space, [Z.coords(c) for c in d_in.cols])
    else:
        B = Subspace.zero(Z.space)
    H, proj, sec = B.quotient()
    n = act.n if act is not None else 0
    gens = []
    if act is not None:
        for g in act.generators:
            gens.append(proj @ Z.coords_map(g @ Z.inclusion, Z.space) @ sec)
    return SymAction(H, n, gens)


def _sym(F: TruncatedModule, n: int) -> SymAction:
    return F.sym_action(n)


def complex_homology(terms: Sequence[TruncatedModule], diffs: Sequence[ModuleMorphism],
                     top: int) -> list[SigmaModule]:
    """Homology of ``terms[0] ← terms[1] ← …`` with ``diffs[k]: terms[k+1] → terms[k]``."""
    out = []
    for k, C in enumerate(terms):
        acts = []
        for n in range(top + 1):
            d_out = diffs[k - 1].map(n) if k >= 1 else None
            d_in = diffs[k].map(n) if k < len(diffs) else None
            acts.append(homology_rep(d_in, d_out, C.space(n), _sym(C, n)))
        out.append(SigmaModule(acts, name=f"H{k}"))
    return out


def characters(M: SigmaModule) -> list[list[Fraction]]:
    return [[a.character(p) for p in class_representatives(a.n)] for a in M.actions]


@dataclass
class DerivedReport:
    method_a: list
    method_b: dict
    agree: bool
    kappa_acyclic_high: bool
    first_is_coker: bool
    top: int
    resolution: ChainComplex | None = None
    notes: list = field(default_factory=list)

    def dims(self, i: int) -> list[int]:
        if i < len(self.method_a):
            return self.method_a[i].dims()
        return [0] * (self.top + 1)


def derived_mu(F: TruncatedModule, mu: OperadElement, resolution: ChainComplex | None = None) -> DerivedReport:
    """``𝕃_i(−)^μ F`` by (a) homology of ``(P•)^μ`` and (b) homology of ``κ_μ`` of
    the augmented resolution, ``𝕃_i ≅ H_{i−2}``."""
    res = resolution or projective_resolution(F)
    if not res.terms:
        z = SigmaModule([SymAction.trivial(Space(), n) for n in range(F.bound + 1)])
        return DerivedReport([z], {}, True, True, True, F.bound, res)
    # (a)
    reflected = [coker_mu(P, mu) for P in res.terms]
    qs = [q for q, _ in reflected]
    dq = [reflect_morphism(d, qs[k + 1], qs[k]) for k, d in enumerate(res.differentials)]
    top_a = min(q.bound for q in qs)
    method_a = complex_homology(qs, dq, top_a)
    # (b) κ of … → P_1 → P_0 → F, with F in degree −1
    kF, _ = ker_mu(F, mu)
    kP = [ker_mu(P, mu)[0] for P in res.terms]
    k_eps = kappa_morphism(res.augmentation, kP[0], kF)
    k_d = [kappa_morphism(d, kP[k + 1], kP[k]) for k, d in enumerate(res.differentials)]
    chain = [kF] + kP
    maps = [k_eps] + k_d
    top_b = min(c.bound for c in chain)
    hb = complex_homology(chain, maps, top_b)
    # hb[j] is H_{j-1}; 𝕃_i = H_{i-2} = hb[i-1] for i ≥ 1
    method_b = {i: hb[i - 1] for i in range(1, len(hb) + 1)}
    top = min(top_a, top_b)
    agree = True
    notes = []
    for i in range(1, max(len(method_a), len(hb) + 1)):
        a = method_a[i] if i < len(method_a) else None
        b = method_b.get(i)
        for n in range(top + 1):
            da = a.actions[n].space.dim if a else 0
            db = b.actions[n].space.dim if b else 0
            if da != db:
                agree = False
                notes.append(f"L{i} arity {n}: {da} vs {db}")
            elif da:
                for p in class_representatives(n):
                    if a.actions[n].character(p) != b.actions[n].character(p):
                        agree = False
                        notes.append(f"L{i} arity {n}: characters differ at {p}")
    # 𝕃_0 agrees with F^μ
    qF, _ = coker_mu(F, mu)
    if method_a[0].dims()[:top + 1] != qF.dims(upto=top):
        agree = False
        notes.append("L0 differs from the reflection")
    # vanishing of H_* for * ≥ N−1 and 𝕃_1 as a cokernel
    N = F.bound
    high = all(S.dims()[:top_b + 1] == [0] * (top_b + 1)
               for j, S in enumerate(hb) if j - 1 >= N - 1)
    coker_dims = []
    for n in range(top_b + 1):
        f = k_eps.map(n)
        coker_dims.append(f.codomain.dim - f.rank())
    first = hb[0].dims()[:top_b + 1] == coker_dims
    return DerivedReport(method_a, method_b, agree, high, first, top, res, notes)


# ---------------------------------------------------------------- witnesses

def kappa_vs_first_derived(F: TruncatedModule, mu: OperadElement):
    """Dims of ``𝕃_1(−)^μ F`` and ``κ_μ F`` side by side."""
    rep = derived_mu(F, mu)
    kF, _ = ker_mu(F, mu)
    top = min(rep.top, kF.bound)
    return rep.dims(1)[:top + 1], kF.dims(upto=top)


def search_kappa_not_first_derived(candidates, mu: OperadElement):
    """First candidate module with ``𝕃_1(−)^μ F ≇ κ_μ F`` (by dimension)."""
    for F in candidates:
        l1, k = kappa_vs_first_derived(F, mu)
        if l1 != k:
            return F, l1, k
    return None


def search_kappa_outside(candidates, mu: OperadElement):
    """First candidate with ``κ_μ F`` not in the subcategory."""
    for F in candidates:
        kF, _ = ker_mu(F, mu)
        if not is_in_mu(kF, mu):
            return F, kF
    return None
