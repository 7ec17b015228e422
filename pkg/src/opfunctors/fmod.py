"""Representations of ``Cat O`` truncated to arities ``0..N``.

A :class:`TruncatedModule` stores its spaces and computes the action of a
basis morphism on demand, caching the result.  A module may be flagged as
vanishing above its bound; such modules keep their bound under the shift,
because ``F(N+1) = 0`` is then known rather than unknown.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

from .catprop import (CatBasisElt, CatMorphism, cat_map_basis, compose_basis, hom_space,
                      identity_elt, mu_sum, permutation_elt, shift_basis, leibniz_check)
from .exactlin import (ONE, LinMap, Perm, Space, SpanBuilder, Subspace,
                       SymAction, all_perms, block_diagonal, coset_factor, direct_sum_space,
                       kernel_subspace, image_subspace, kron, perm_inverse,
                       solve, tensor_space, transposition, vec_iadd)
from .operads import Operad, OperadElement, OperadMorphism


class ModuleError(ValueError):
    pass


class LeibnizFailure(ModuleError):
    def __init__(self, witness: OperadElement, tested: OperadElement):
        self.witness = witness
        self.tested = tested
        super().__init__(f"the right Leibniz condition fails for {tested!r}: defect {witness!r}")


# ================================================================ Σ-modules

class SigmaModule:
    """Spaces ``M(0..N)`` with symmetric group actions only."""

    def __init__(self, actions: Sequence[SymAction], name: str = "M"):
        self.actions = tuple(actions)
        for n, a in enumerate(self.actions):
            if a.n != n:
                raise ModuleError("the arity-n action must be an action of Σ_n")
        self.name = name

    @property
    def bound(self) -> int:
        return len(self.actions) - 1

    def space(self, n: int) -> Space:
        return self.actions[n].space if n <= self.bound else Space()

    def dims(self) -> list[int]:
        return [a.space.dim for a in self.actions]

    def matrix(self, n: int, p: Perm) -> LinMap:
        return self.actions[n].matrix(p)

    @classmethod
    def concentrated(cls, action: SymAction, bound: int | None = None, name: str = "M") -> "SigmaModule":
        bound = action.n if bound is None else bound
        acts = [action if n == action.n else SymAction.trivial(Space(), n) for n in range(bound + 1)]
        return cls(acts, name=name)


def trivial_rep(n: int) -> SymAction:
    return SymAction.trivial(Space(["triv"]), n)


def sign_rep(n: int) -> SymAction:
    sp = Space(["sgn"])
    return SymAction(sp, n, [LinMap(sp, sp, [{0: -ONE}])] * max(n - 1, 0))


def regular_rep(n: int) -> SymAction:
    perms = list(all_perms(n))
    sp = Space(perms)

    def act(p):
        return LinMap(sp, sp, ({sp.index(tuple(p[x] for x in q)): ONE} for q in perms))

    return SymAction.from_function(sp, n, act)


def standard_rep(n: int) -> SymAction:
    """Permutation representation on ``e_1..e_n`` modulo the sum."""
    full = Space(range(n))
    total = Subspace.span(full, [{i: ONE for i in range(n)}])
    q, proj, sec = total.quotient()

    def act(p):
        perm = LinMap(full, full, ({p[i]: ONE} for i in range(n)))
        return proj @ perm @ sec

    return SymAction.from_function(q, n, act)


# ================================================================ modules

class TruncatedModule:
    def __init__(self, operad: Operad, spaces: Sequence[Space],
                 action: Callable[[CatBasisElt], LinMap], *, vanishes_above: bool = False,
                 name: str = "F"):
        self.operad = operad
        self.spaces = tuple(spaces)
        if not self.spaces:
            raise ModuleError("a module needs at least the arity-0 space")
        self.vanishes_above = vanishes_above
        self.name = name
        self._action = action
        self._cache: dict = {}
        self._lock = threading.RLock()

    @property
    def bound(self) -> int:
        return len(self.spaces) - 1

    def space(self, n: int) -> Space:
        if n < 0:
            return Space()
        if n <= self.bound:
            return self.spaces[n]
        if self.vanishes_above:
            return Space()
        raise ModuleError(f"{self.name} is only known up to arity {self.bound}")

    def dim(self, n: int) -> int:
        return self.space(n).dim

    def dims(self, upto: int | None = None) -> list[int]:
        top = self.bound if upto is None else upto
        return [self.dim(n) for n in range(top + 1)]

    def is_zero(self) -> bool:
        return all(sp.dim == 0 for sp in self.spaces)

    def support(self) -> list[int]:
        return [n for n, sp in enumerate(self.spaces) if sp.dim]

    # -- action
    def act(self, elt: CatBasisElt) -> LinMap:
        src, tgt = self.space(elt.source), self.space(elt.target)
        if src.dim == 0 or tgt.dim == 0:
            return LinMap.zero(src, tgt)
        got = self._cache.get(elt)
        if got is None:
            got = self._action(elt)
            if got.domain.dim != src.dim or got.codomain.dim != tgt.dim:
                raise ModuleError("action map has the wrong shape")
            with self._lock:
                self._cache[elt] = got
        return got

    def act_morphism(self, xi: CatMorphism) -> LinMap:
        src, tgt = self.space(xi.m), self.space(xi.n)
        total = LinMap.zero(src, tgt)
        if src.dim == 0 or tgt.dim == 0:
            return total
        sp = xi.space
        cols = [dict() for _ in range(src.dim)]
        for k, c in xi.coeffs.items():
            f = self.act(sp.labels[k])
            for j, col in enumerate(f.cols):
                if col:
                    vec_iadd(cols[j], col, c)
        return LinMap(src, tgt, cols)

    def act_vector(self, xi: CatMorphism, v: Mapping) -> dict:
        return self.act_morphism(xi)(v)

    def perm(self, n: int, p: Perm) -> LinMap:
        return self.act(permutation_elt(self.operad, tuple(p)))

    def sym_action(self, n: int) -> SymAction:
        sp = self.space(n)
        return SymAction(sp, n, [self.perm(n, transposition(n, i)) for i in range(n - 1)])

    def basis_morphisms(self, m: int, n: int) -> tuple[CatBasisElt, ...]:
        if self.dim(m) == 0 or self.dim(n) == 0:
            return ()
        if self.operad.reduced and m < n:
            return ()
        return hom_space(self.operad, m, n).labels

    def __repr__(self):
        return f"<module {self.name} over {self.operad.name}, dims {self.dims()}>"


def restrict(F: TruncatedModule) -> SigmaModule:
    """The underlying Σ-module."""
    return SigmaModule([F.sym_action(n) for n in range(F.bound + 1)], name=F.name + "↓")


def check_functoriality(F: TruncatedModule, rng=None, samples: int | None = None) -> list[str]:
    """Compare ``F(η∘ξ)`` with ``F(η)F(ξ)`` on composable basis pairs.

    Exhaustive unless ``samples`` is given, in which case that many random
    pairs per shape are drawn from ``rng``.
    """
    op = F.operad
    fails = []
    N = F.bound
    for n in range(N + 1):
        if F.dim(n) and F.act(identity_elt(op, n)) != LinMap.identity(F.space(n)):
            fails.append(f"identity at arity {n}")
    for m in range(N + 1):
        for n in range(N + 1):
            xis = F.basis_morphisms(m, n)
            if not xis:
                continue
            for p in range(N + 1):
                etas = F.basis_morphisms(n, p)
                if not etas:
                    continue
                pairs = [(e, x) for e in etas for x in xis]
                if samples is not None and len(pairs) > samples:
                    pairs = rng.sample(pairs, samples)
                target = hom_space(op, m, p)
                for eta, xi in pairs:
                    comp = compose_basis(op, eta, xi)
                    lhs = LinMap.zero(F.space(m), F.space(p))
                    for k, c in comp.items():
                        lhs = lhs + c * F.act(target.labels[k])
                    if lhs != F.act(eta) @ F.act(xi):
                        fails.append(f"{eta.encode()} after {xi.encode()}")
    return fails


# ---------------------------------------------------------------- constructions

def zero_module(op: Operad, N: int) -> TruncatedModule:
    return TruncatedModule(op, [Space()] * (N + 1), lambda e: None, vanishes_above=True, name="0")


def free_module(op: Operad, m: int, N: int) -> TruncatedModule:
    """``Cat O(m, −)`` with the action by post-composition."""
    if m > N:
        raise ModuleError("the free module needs m <= N")
    spaces = [hom_space(op, m, n) for n in range(N + 1)]

    def action(xi: CatBasisElt) -> LinMap:
        src, tgt = spaces[xi.source], spaces[xi.target]
        return LinMap(src, tgt, (compose_basis(op, xi, x) for x in src.labels))

    vanishes = op.reduced and N >= m
    return TruncatedModule(op, spaces, action, vanishes_above=vanishes, name=f"Cat{op.name}({m},-)")


def alpha_embed(M: SigmaModule, op: Operad, bound: int | None = None) -> TruncatedModule:
    """The module with underlying Σ-module ``M`` on which non-bijections act by zero."""
    if not (op.reduced and op.unital_one):
        raise ModuleError(f"{op.name} must be reduced with O(1) one-dimensional")
    N = M.bound if bound is None else bound
    spaces = [M.space(n) for n in range(N + 1)]

    def action(xi: CatBasisElt) -> LinMap:
        if xi.source != xi.target:
            return LinMap.zero(spaces[xi.source], spaces[xi.target])
        return M.matrix(xi.source, xi.f)

    return TruncatedModule(op, spaces, action, vanishes_above=True, name=f"alpha({M.name})")


def unit_module(op: Operad, bound: int = 0) -> TruncatedModule:
    """The monoidal unit: one dimension in arity 0."""
    return alpha_embed(SigmaModule.concentrated(trivial_rep(0), bound, name="k"), op)


def delta(F: TruncatedModule) -> TruncatedModule:
    """``δF(n) = F(n+1)`` with ``ξ`` acting through ``ξ ⊞ Id₁``."""
    if F.vanishes_above:
        top = F.bound
    else:
        if F.bound < 1:
            raise ModuleError("the shift of a module known only in arity 0 is unknown")
        top = F.bound - 1
    spaces = [F.space(n + 1) for n in range(top + 1)]
    op = F.operad

    def action(xi: CatBasisElt) -> LinMap:
        return F.act(shift_basis(xi, op))

    return TruncatedModule(op, spaces, action, vanishes_above=F.vanishes_above,
                           name=f"delta({F.name})")


def delta_power(F: TruncatedModule, k: int) -> TruncatedModule:
    for _ in range(k):
        F = delta(F)
    return F


def truncate(F: TruncatedModule, N: int) -> TruncatedModule:
    if N > F.bound and not F.vanishes_above:
        raise ModuleError("cannot extend an unknown module")
    spaces = [F.space(n) for n in range(N + 1)]
    keeps = F.vanishes_above and N >= F.bound
    return TruncatedModule(F.operad, spaces, F.act, vanishes_above=keeps or
                           (F.vanishes_above and all(F.dim(n) == 0 for n in range(N + 1, F.bound + 1))),
                           name=F.name)


def direct_sum(modules: Sequence[TruncatedModule], name: str | None = None) -> TruncatedModule:
    if not modules:
        raise ModuleError("empty direct sum")
    op = modules[0].operad
    bound = min(_effective_bound(F) for F in modules)
    vanishes = all(F.vanishes_above for F in modules)
    if vanishes:
        bound = max(F.bound for F in modules)
    spaces = [direct_sum_space([F.space(n) for F in modules]) for n in range(bound + 1)]

    def action(xi: CatBasisElt) -> LinMap:
        return block_diagonal([F.act(xi) for F in modules],
                              spaces[xi.source], spaces[xi.target])

    return TruncatedModule(op, spaces, action, vanishes_above=vanishes,
                           name=name or "+".join(F.name for F in modules))


def _effective_bound(F: TruncatedModule) -> float:
    return float("inf") if F.vanishes_above else F.bound


def tensor_constant(F: TruncatedModule, V: Space, name: str | None = None) -> TruncatedModule:
    """``F ⊗ V`` for a plain vector space ``V``."""
    spaces = [tensor_space(F.space(n), V) for n in range(F.bound + 1)]
    ident = LinMap.identity(V)

    def action(xi):
        return kron(F.act(xi), ident, spaces[xi.source], spaces[xi.target])

    return TruncatedModule(F.operad, spaces, action, vanishes_above=F.vanishes_above,
                           name=name or f"{F.name}⊗V")


def submodule(F: TruncatedModule, subs: Sequence[Subspace], name: str | None = None,
              check: bool = False) -> TruncatedModule:
    """The submodule with the given per-arity subspaces (assumed stable)."""
    subs = list(subs)
    if len(subs) != F.bound + 1:
        raise ModuleError("one subspace per arity is required")
    spaces = [s.space for s in subs]

    def action(xi):
        f = F.act(xi)
        src, tgt = subs[xi.source], subs[xi.target]
        cols = []
        for v in src.vectors:
            w = f(v)
            if check and not tgt.contains(w):
                raise ModuleError("subspaces are not stable under the action")
            cols.append(tgt.coords(w))
        return LinMap(src.space, tgt.space, cols)

    K = TruncatedModule(F.operad, spaces, action, vanishes_above=F.vanishes_above,
                        name=name or f"sub({F.name})")
    K.ambient = F
    K.subspaces = subs
    return K


def quotient(F: TruncatedModule, subs: Sequence[Subspace], name: str | None = None) -> TruncatedModule:
    subs = list(subs)
    if len(subs) != F.bound + 1:
        raise ModuleError("one subspace per arity is required")
    quots = [s.quotient() for s in subs]
    spaces = [q[0] for q in quots]

    def action(xi):
        return quots[xi.target][1] @ F.act(xi) @ quots[xi.source][2]

    Q = TruncatedModule(F.operad, spaces, action, vanishes_above=F.vanishes_above,
                        name=name or f"quot({F.name})")
    Q.ambient = F
    Q.subspaces = subs
    Q.projections = [q[1] for q in quots]
    Q.sections = [q[2] for q in quots]
    return Q


def inclusion_morphism(K: TruncatedModule) -> "ModuleMorphism":
    return ModuleMorphism(K, K.ambient, [s.inclusion for s in K.subspaces])


def projection_morphism(Q: TruncatedModule) -> "ModuleMorphism":
    return ModuleMorphism(Q.ambient, Q, list(Q.projections))


def generated_subspaces(F: TruncatedModule, gens: Mapping[int, Iterable[Mapping]]) -> list[Subspace]:
    """Per-arity subspaces of the submodule generated by ``gens``."""
    N = F.bound
    builders = [SpanBuilder(F.space(n)) for n in range(N + 1)]
    queue = []
    for n, vs in gens.items():
        for v in vs:
            if builders[n].add(v):
                queue.append((n, dict(v)))
    while queue:
        m, v = queue.pop()
        for n in range(N + 1):
            for xi in F.basis_morphisms(m, n):
                w = F.act(xi)(v)
                if w and builders[n].add(w):
                    queue.append((n, w))
    return [b.subspace() for b in builders]


def generated_submodule(F: TruncatedModule, gens: Mapping[int, Iterable[Mapping]],
                        name: str | None = None) -> TruncatedModule:
    return submodule(F, generated_subspaces(F, gens), name=name)


def restrict_along(phi: OperadMorphism, G: TruncatedModule) -> TruncatedModule:
    """``φ*G``: the same spaces with ``ξ`` acting as ``G(Cat φ (ξ))``."""
    if G.operad is not phi.target:
        raise ModuleError("the module must live over the target operad")
    tgt_homs: dict = {}

    def action(xi: CatBasisElt) -> LinMap:
        vec = cat_map_basis(phi, xi)
        sp = tgt_homs.get((xi.source, xi.target))
        if sp is None:
            sp = tgt_homs[(xi.source, xi.target)] = hom_space(phi.target, xi.source, xi.target)
        return G.act_morphism(CatMorphism(phi.target, xi.source, xi.target, vec))

    return TruncatedModule(phi.source, G.spaces, action, vanishes_above=G.vanishes_above,
                           name=f"{phi.name}*({G.name})")


# ================================================================ morphisms

class ModuleMorphism:
    def __init__(self, source: TruncatedModule, target: TruncatedModule, maps: Sequence[LinMap]):
        if source.operad is not target.operad:
            raise ModuleError("morphism between modules over different operads")
        self.source = source
        self.target = target
        self.maps = tuple(maps)
        for n, f in enumerate(self.maps):
            if f.domain.dim != source.dim(n) or f.codomain.dim != target.dim(n):
                raise ModuleError(f"component {n} has the wrong shape")

    @property
    def bound(self) -> int:
        return len(self.maps) - 1

    def map(self, n: int) -> LinMap:
        if n <= self.bound:
            return self.maps[n]
        return LinMap.zero(self.source.space(n), self.target.space(n))

    def naturality_violation(self, rng=None, samples: int | None = None):
        """First basis morphism ``ξ`` with ``g F(ξ) != G(ξ) g``, as ``(ξ, lhs, rhs)``."""
        F, G = self.source, self.target
        for m in range(self.bound + 1):
            for n in range(self.bound + 1):
                xis = list(hom_space(F.operad, m, n).labels) if (
                    (F.dim(m) or G.dim(m)) and (F.dim(n) or G.dim(n))
                    and not (F.operad.reduced and m < n)) else []
                if samples is not None and len(xis) > samples:
                    xis = rng.sample(xis, samples)
                for xi in xis:
                    lhs = self.maps[n] @ F.act(xi)
                    rhs = G.act(xi) @ self.maps[m]
                    if lhs != rhs:
                        return (xi, lhs, rhs)
        return None

    def is_natural(self, rng=None, samples=None) -> bool:
        return self.naturality_violation(rng, samples) is None

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        top = min(self.bound, other.bound)
        return ModuleMorphism(other.source, self.target,
                              [self.maps[n] @ other.maps[n] for n in range(top + 1)])

    def __add__(self, other):
        top = min(self.bound, other.bound)
        return ModuleMorphism(self.source, self.target,
                              [self.maps[n] + other.maps[n] for n in range(top + 1)])

    def __sub__(self, other):
        top = min(self.bound, other.bound)
        return ModuleMorphism(self.source, self.target,
                              [self.maps[n] - other.maps[n] for n in range(top + 1)])

    def __rmul__(self, c):
        return ModuleMorphism(self.source, self.target, [c * f for f in self.maps])

    def __eq__(self, other):
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        return self.bound == other.bound and all(a == b for a, b in zip(self.maps, other.maps))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps)

    def ranks(self) -> list[int]:
        return [f.rank() for f in self.maps]

    def is_injective(self) -> bool:
        return all(f.rank() == f.domain.dim for f in self.maps)

    def is_surjective(self) -> bool:
        return all(f.rank() == f.codomain.dim for f in self.maps)

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def truncated(self, N: int) -> "ModuleMorphism":
        return ModuleMorphism(truncate(self.source, N), truncate(self.target, N), self.maps[:N + 1])

    def kernel(self) -> tuple[TruncatedModule, "ModuleMorphism"]:
        src = truncate(self.source, self.bound) if self.source.bound != self.bound else self.source
        K = submodule(src, [kernel_subspace(f) for f in self.maps], name="ker")
        return K, inclusion_morphism(K)

    def image_subspaces(self) -> list[Subspace]:
        return [image_subspace(f) for f in self.maps]

    def cokernel(self) -> tuple[TruncatedModule, "ModuleMorphism"]:
        tgt = truncate(self.target, self.bound) if self.target.bound != self.bound else self.target
        Q = quotient(tgt, self.image_subspaces(), name="coker")
        return Q, projection_morphism(Q)


def identity_morphism(F: TruncatedModule) -> ModuleMorphism:
    return ModuleMorphism(F, F, [LinMap.identity(F.space(n)) for n in range(F.bound + 1)])


def zero_morphism(F: TruncatedModule, G: TruncatedModule) -> ModuleMorphism:
    top = min(F.bound, G.bound)
    return ModuleMorphism(F, G, [LinMap.zero(F.space(n), G.space(n)) for n in range(top + 1)])


def yoneda_morphism(free: TruncatedModule, m: int, G: TruncatedModule, g: Mapping) -> ModuleMorphism:
    """The morphism ``Cat O(m, −) → G`` sending ``Id_m`` to ``g ∈ G(m)``."""
    top = min(free.bound, G.bound) if not G.vanishes_above else free.bound
    maps = []
    for n in range(top + 1):
        src = free.space(n)
        maps.append(LinMap(src, G.space(n), (G.act(x)(g) for x in src.labels)))
    return ModuleMorphism(free, G, maps)


def direct_sum_map(parts: Sequence[ModuleMorphism], source: TruncatedModule) -> ModuleMorphism:
    """The morphism out of ``source = ⊕ parts[k].source`` given by its components."""
    target = parts[0].target
    top = min(p.bound for p in parts)
    maps = []
    for n in range(top + 1):
        cols = []
        for p in parts:
            cols.extend(p.maps[n].cols)
        maps.append(LinMap(source.space(n), target.space(n), cols))
    return ModuleMorphism(source, target, maps)


# ================================================================ μ̃ and the reflection

_LEIBNIZ_CACHE: dict = {}


def _mu_key(mu: OperadElement):
    return (id(mu.operad), tuple(sorted(mu.coeffs.items())))


def require_leibniz(op: Operad, mu: OperadElement) -> None:
    key = _mu_key(mu)
    res = _LEIBNIZ_CACHE.get(key)
    if res is None:
        res = _LEIBNIZ_CACHE[key] = leibniz_check(op, mu, "generators")
    if not res.holds:
        raise LeibnizFailure(res.witness, res.tested)


def mu_tilde_raw(F: TruncatedModule, mu: OperadElement) -> list[LinMap]:
    """Per-arity maps ``F(μ(n)): F(n+1) → F(n)`` without any Leibniz check."""
    op = F.operad
    top = F.bound if F.vanishes_above else F.bound - 1
    maps = []
    for n in range(top + 1):
        src, tgt = F.space(n + 1), F.space(n)
        if src.dim == 0 or tgt.dim == 0:
            maps.append(LinMap.zero(src, tgt))
        else:
            maps.append(F.act_morphism(mu_sum(op, mu, n)))
    return maps


def mu_tilde(F: TruncatedModule, mu: OperadElement, check: bool = True) -> ModuleMorphism:
    """``μ̃_F: δF → F``; refuses when the right Leibniz condition fails."""
    require_leibniz(F.operad, mu)
    dF = delta(F)
    phi = ModuleMorphism(dF, F, mu_tilde_raw(F, mu))
    if check:
        bad = phi.naturality_violation()
        if bad is not None:
            raise ModuleError(f"μ̃ is not natural at {bad[0].encode()}")
    return phi


def is_in_mu(F: TruncatedModule, mu: OperadElement) -> bool:
    require_leibniz(F.operad, mu)
    return all(f.is_zero() for f in mu_tilde_raw(F, mu))


def coker_mu(F: TruncatedModule, mu: OperadElement) -> tuple[TruncatedModule, ModuleMorphism]:
    """``F^μ = coker μ̃_F`` with the projection ``F → F^μ``."""
    phi = mu_tilde(F, mu, check=False)
    Q, proj = phi.cokernel()
    Q.name = f"{F.name}^mu"
    return Q, proj


def ker_mu(F: TruncatedModule, mu: OperadElement) -> tuple[TruncatedModule, ModuleMorphism]:
    """``κ_μF = ker μ̃_F`` with its inclusion into ``δF``."""
    phi = mu_tilde(F, mu, check=False)
    K, inc = phi.kernel()
    K.name = f"kappa({F.name})"
    return K, inc


def shifted_morphism(f: ModuleMorphism) -> ModuleMorphism:
    dF, dG = delta(f.source), delta(f.target)
    top = min(dF.bound, dG.bound)
    return ModuleMorphism(dF, dG, [f.map(n + 1) for n in range(top + 1)])


def kappa_morphism(f: ModuleMorphism, kF: TruncatedModule, kG: TruncatedModule) -> ModuleMorphism:
    """``κ_μ(f)``: the restriction of ``δf`` to the kernels."""
    top = min(kF.bound, kG.bound, f.bound - (0 if f.source.vanishes_above and f.target.vanishes_above else 1))
    maps = []
    for n in range(top + 1):
        sub_src, sub_tgt = kF.subspaces[n], kG.subspaces[n]
        g = f.map(n + 1)
        maps.append(LinMap(sub_src.space, sub_tgt.space, (sub_tgt.coords(g(v)) for v in sub_src.vectors)))
    return ModuleMorphism(kF, kG, maps)


def reflect_morphism(f: ModuleMorphism, qF: TruncatedModule, qG: TruncatedModule) -> ModuleMorphism:
    """``f^μ``: the morphism induced on the quotients."""
    top = min(qF.bound, qG.bound, f.bound)
    maps = [qG.projections[n] @ f.map(n) @ qF.sections[n] for n in range(top + 1)]
    return ModuleMorphism(qF, qG, maps)


def factor_through_reflection(f: ModuleMorphism, mu: OperadElement):
    """Factor ``f: F → G`` (``G`` in the subcategory) through ``F ↠ F^μ``.

    Returns ``(h, proj)`` with ``h ∘ proj == f``; raises if ``f`` does not kill
    the image of ``μ̃_F``.
    """
    Q, proj = coker_mu(f.source, mu)
    top = min(Q.bound, f.bound)
    maps = []
    for n in range(top + 1):
        h = f.map(n) @ Q.sections[n]
        if h @ proj.maps[n] != f.map(n):
            raise ModuleError(f"the morphism does not kill the image of μ̃ in arity {n}")
        maps.append(h)
    return ModuleMorphism(Q, f.target, maps), proj


# ================================================================ exact sequences

def is_short_exact(i: ModuleMorphism, p: ModuleMorphism) -> bool:
    top = min(i.bound, p.bound)
    for n in range(top + 1):
        a, b = i.maps[n], p.maps[n]
        if not (b @ a).is_zero():
            return False
        if a.rank() != a.domain.dim or b.rank() != b.codomain.dim:
            return False
        if a.rank() + b.rank() != a.codomain.dim:
            return False
    return True


def _exact_at(incoming: LinMap | None, outgoing: LinMap | None, dim: int) -> bool:
    r_in = incoming.rank() if incoming is not None else 0
    r_out = outgoing.rank() if outgoing is not None else 0
    if incoming is not None and outgoing is not None and not (outgoing @ incoming).is_zero():
        return False
    return r_in + r_out == dim


@dataclass
class SixTermReport:
    exact: bool
    arities: list[int]
    dims: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    maps: dict = field(default_factory=dict)

    def __bool__(self):
        return self.exact


def six_term(i: ModuleMorphism, p: ModuleMorphism, mu: OperadElement) -> SixTermReport:
    """``0 → κF₁ → κF₂ → κF₃ → F₁^μ → F₂^μ → F₃^μ → 0`` checked arity by arity."""
    if not is_short_exact(i, p):
        raise ModuleError("the input sequence is not short exact")
    F1, F2, F3 = i.source, i.target, p.target
    k1, _ = ker_mu(F1, mu)
    k2, _ = ker_mu(F2, mu)
    k3, _ = ker_mu(F3, mu)
    q1, _ = coker_mu(F1, mu)
    q2, _ = coker_mu(F2, mu)
    q3, _ = coker_mu(F3, mu)
    mu2 = mu_tilde_raw(F2, mu)
    top = min(k1.bound, k2.bound, k3.bound, q1.bound, q2.bound, q3.bound, i.bound, p.bound)
    if F1.vanishes_above and F2.vanishes_above and F3.vanishes_above:
        pass
    else:
        top = min(top, i.bound - 1, p.bound - 1)
    report = SixTermReport(True, list(range(top + 1)))
    ki = kappa_morphism(i, k1, k2)
    kp = kappa_morphism(p, k2, k3)
    qi = reflect_morphism(i, q1, q2)
    qp = reflect_morphism(p, q2, q3)
    for n in range(top + 1):
        # connecting map κF₃(n) → F₁^μ(n)
        cols = []
        for x in k3.subspaces[n].vectors:
            y = solve(p.map(n + 1), x)
            z = mu2[n](y)
            w = solve(i.map(n), z)
            if w is None:
                raise ModuleError("connecting map: μ̃ of a lift is not in the image of F₁")
            cols.append(q1.projections[n](w))
        conn = LinMap(k3.space(n), q1.space(n), cols)
        chain = [ki.maps[n], kp.maps[n], conn, qi.maps[n], qp.maps[n]]
        spaces = [k1.dim(n), k2.dim(n), k3.dim(n), q1.dim(n), q2.dim(n), q3.dim(n)]
        report.dims[n] = spaces
        report.maps[n] = chain
        for pos in range(6):
            incoming = chain[pos - 1] if pos >= 1 else None
            outgoing = chain[pos] if pos < 5 else None
            if not _exact_at(incoming, outgoing, spaces[pos]):
                report.exact = False
                report.failures.append(f"arity {n}, position {pos}")
    return report


def closure_factorization(i: ModuleMorphism, p: ModuleMorphism, mu: OperadElement) -> bool:
    """For ``F₁, F₃`` in the subcategory, ``μ̃_{F₂} = i ∘ c ∘ δp`` for some per-arity ``c``."""
    F2 = i.target
    mu2 = mu_tilde_raw(F2, mu)
    top = min(len(mu2) - 1, i.bound, p.bound - (0 if F2.vanishes_above else 1))
    for n in range(top + 1):
        dp = p.map(n + 1)
        # c is defined on δF₃(n) through lifts along δp
        cols = []
        for j in range(dp.codomain.dim):
            y = solve(dp, {j: ONE})
            w = solve(i.map(n), mu2[n](y))
            if w is None:
                return False
            cols.append(w)
        c = LinMap(dp.codomain, i.map(n).domain, cols)
        if i.map(n) @ c @ dp != mu2[n]:
            return False
    return True


# ================================================================ convolution

def convolution(F: TruncatedModule, G: TruncatedModule, bound: int | None = None,
                name: str | None = None) -> TruncatedModule:
    """``(F⊙G)(n) = ⊕_c F(|c|) ⊗ G(n−|c|)`` over subsets ``c`` of ``0..n-1``."""
    op = F.operad
    if G.operad is not op:
        raise ModuleError("convolution of modules over different operads")
    if not (op.reduced and op.unital_one):
        raise ModuleError("convolution needs a reduced operad with O(1) one-dimensional")
    candidates = []
    if not F.vanishes_above:
        candidates.append(F.bound)
    if not G.vanishes_above:
        candidates.append(G.bound)
    natural = F.bound + G.bound
    top = min(candidates + [natural])
    vanishes = F.vanishes_above and G.vanishes_above
    cap = op.nmax if bound is None else bound
    if top > cap:
        top, vanishes = cap, False
    spaces = []
    for n in range(top + 1):
        labels = []
        for k in range(n + 1):
            fk, gk = F.space(k), G.space(n - k)
            if fk.dim == 0 or gk.dim == 0:
                continue
            for c in combinations(range(n), k):
                for a in range(fk.dim):
                    for b in range(gk.dim):
                        labels.append((c, a, b))
        spaces.append(Space(labels))

    def action(xi: CatBasisElt) -> LinMap:
        m, n = xi.source, xi.target
        src, tgt = spaces[m], spaces[n]
        comps = _components(src)
        cols: list = [dict() for _ in range(src.dim)]
        for c, members in comps.items():
            split = _split(xi, c)
            if split is None:
                continue
            c_out, xf, xg = split
            fmap = F.act(xf)
            gmap = G.act(xg)
            for j in members:
                _, a, b = src.labels[j]
                col = {}
                for a2, x in fmap.cols[a].items():
                    for b2, y in gmap.cols[b].items():
                        col[tgt.index((c_out, a2, b2))] = x * y
                cols[j] = col
        return LinMap(src, tgt, cols)

    return TruncatedModule(op, spaces, action, vanishes_above=vanishes,
                           name=name or f"({F.name}⊙{G.name})")


def _components(space: Space) -> dict:
    comps: dict = {}
    for j, (c, _, _) in enumerate(space.labels):
        comps.setdefault(c, []).append(j)
    return comps


def _split(xi: CatBasisElt, c: tuple[int, ...]):
    """Split ``ξ`` along the subset ``c`` of its inputs, or None if a fibre crosses."""
    cset = set(c)
    fib = xi.fibres()
    inside = []
    outside = []
    for i, F_i in enumerate(fib):
        ins = [x in cset for x in F_i]
        if all(ins):
            inside.append(i)
        elif not any(ins):
            outside.append(i)
        else:
            return None
    comp = [x for x in range(xi.source) if x not in cset]
    pos_in = {y: t for t, y in enumerate(inside)}
    pos_out = {y: t for t, y in enumerate(outside)}
    xf = CatBasisElt(tuple(pos_in[xi.f[x]] for x in c), tuple(xi.labels[i] for i in inside))
    xg = CatBasisElt(tuple(pos_out[xi.f[x]] for x in comp), tuple(xi.labels[i] for i in outside))
    return tuple(inside), xf, xg


def convolution_morphism(f: ModuleMorphism, g: ModuleMorphism, source: TruncatedModule,
                         target: TruncatedModule) -> ModuleMorphism:
    """``f ⊙ g`` between the given convolution modules."""
    top = min(source.bound, target.bound)
    maps = []
    for n in range(top + 1):
        src, tgt = source.space(n), target.space(n)
        cols = []
        for (c, a, b) in src.labels:
            k = len(c)
            fc = f.map(k).cols[a]
            gc = g.map(n - k).cols[b]
            col = {}
            for a2, x in fc.items():
                for b2, y in gc.items():
                    col[tgt.index((c, a2, b2))] = x * y
            cols.append(col)
        maps.append(LinMap(src, tgt, cols))
    return ModuleMorphism(source, target, maps)


def delta_conv_iso(F: TruncatedModule, G: TruncatedModule, FG: TruncatedModule | None = None):
    """The relabelling ``δ(F⊙G) → δF⊙G ⊕ F⊙δG`` by whether the last input lies in ``c``.

    Returns ``(iso, source, target, first, second)`` where ``first = δF⊙G``
    and ``second = F⊙δG``.
    """
    FG = FG or convolution(F, G)
    src = delta(FG)
    first = convolution(delta(F), G)
    second = convolution(F, delta(G))
    tgt = direct_sum([first, second], name="dF.G+F.dG")
    top = min(src.bound, tgt.bound)
    maps = []
    for n in range(top + 1):
        s, t = src.space(n), tgt.space(n)
        cols = []
        for (c, a, b) in s.labels:
            if c and c[-1] == n:
                cols.append({t.index((0, (c[:-1], a, b))): ONE})
            else:
                cols.append({t.index((1, (c, a, b))): ONE})
        maps.append(LinMap(s, t, cols))
    return ModuleMorphism(src, tgt, maps), src, tgt, first, second


@dataclass
class ConvolutionReport:
    iso_bijective: bool
    iso_natural: bool
    sum_rule: bool
    stable_iso: bool
    dims: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.iso_bijective and self.iso_natural and self.sum_rule and self.stable_iso

    def __bool__(self):
        return self.ok


def conv_mu_checks(F: TruncatedModule, G: TruncatedModule, mu: OperadElement) -> ConvolutionReport:
    """The shift/convolution isomorphism, the sum rule for μ̃ and the comparison
    ``(F⊙G)^μ → F^μ⊙G^μ``."""
    FG = convolution(F, G)
    iso, src, tgt, first, second = delta_conv_iso(F, G, FG)
    bijective = iso.is_isomorphism()
    natural = iso.is_natural()
    # μ̃_{F⊙G} ∘ iso⁻¹ = [μ̃_F ⊙ Id, Id ⊙ μ̃_G]
    muF = ModuleMorphism(delta(F), F, mu_tilde_raw(F, mu))
    muG = ModuleMorphism(delta(G), G, mu_tilde_raw(G, mu))
    left = convolution_morphism(muF, identity_morphism(G), first, FG)
    right = convolution_morphism(identity_morphism(F), muG, second, FG)
    mu_fg = mu_tilde_raw(FG, mu)
    top = min(iso.bound, left.bound, right.bound, len(mu_fg) - 1)
    sum_rule = True
    for n in range(top + 1):
        combined = LinMap(tgt.space(n), FG.space(n), list(left.maps[n].cols) + list(right.maps[n].cols))
        if combined @ iso.maps[n] != mu_fg[n]:
            sum_rule = False
    # stability: (F⊙G)^μ ≅ F^μ ⊙ G^μ
    qF, pF = coker_mu(F, mu)
    qG, pG = coker_mu(G, mu)
    qFG, pFG = coker_mu(FG, mu)
    conv_q = convolution(qF, qG)
    canon = convolution_morphism(pF, pG, FG, conv_q)
    top2 = min(qFG.bound, canon.bound, conv_q.bound)
    stable = True
    dims = {}
    for n in range(top2 + 1):
        h = canon.maps[n] @ qFG.sections[n]
        if h @ pFG.maps[n] != canon.maps[n]:
            stable = False
        if h.rank() != h.domain.dim or h.rank() != h.codomain.dim:
            stable = False
        dims[n] = (qFG.dim(n), conv_q.dim(n))
    return ConvolutionReport(bijective, natural, sum_rule, stable, dims)


# ================================================================ shift of free modules

def delta_proj_decompose(op: Operad, m: int, N: int):
    """``δ Cat O(m, −) → ⊕_{X ⊊ m} Cat O(|X|, −) ⊗ O(m−|X|)``.

    Returns ``(iso, source, target, subsets)``; the summand order follows
    ``subsets``.
    """
    if not op.reduced:
        raise ModuleError("the decomposition is stated for reduced operads")
    src = delta(free_module(op, m, N))
    subsets = [X for k in range(m) for X in combinations(range(m), k)]
    summands = [tensor_constant(free_module(op, len(X), N), op.space(m - len(X)),
                                name=f"Cat({len(X)},-)⊗O({m - len(X)})")
                for X in subsets]
    tgt = direct_sum(summands)
    sindex = {X: t for t, X in enumerate(subsets)}
    maps = []
    for n in range(src.bound + 1):
        s, t = src.space(n), tgt.space(n)
        cols = []
        for x in s.labels:
            X = tuple(j for j in range(m) if x.f[j] < n)
            fx = CatBasisElt(tuple(x.f[j] for j in X), x.labels[:n])
            lab_X = op.space(m - len(X)).labels[x.labels[n]]
            cols.append({t.index((sindex[X], (fx, lab_X))): ONE})
        maps.append(LinMap(s, t, cols))
    return ModuleMorphism(src, tgt, maps), src, tgt, subsets


def delta_proj_equivariance(op: Operad, m: int, N: int) -> bool:
    """Compare the right ``Σ_m`` actions on both sides of the decomposition on
    adjacent transpositions.  The right-hand action is the induced one."""
    iso, src, tgt, subsets = delta_proj_decompose(op, m, N)
    sindex = {X: t for t, X in enumerate(subsets)}
    for n in range(src.bound + 1):
        s, t = src.space(n), tgt.space(n)
        if s.dim == 0:
            continue
        for i in range(m - 1):
            sigma = transposition(m, i)
            sinv = perm_inverse(sigma)
            pre = permutation_elt(op, sinv)
            # left action by precomposition with σ⁻¹ on δ Cat O(m, −)(n) = Cat O(m, n+1)
            lhs_cols = [compose_basis(op, x, pre) for x in s.labels]
            left = LinMap(s, s, lhs_cols)
            # induced action on the right-hand side
            right_cols = []
            for (k, (y, o)) in t.labels:
                X = subsets[k]
                comp = tuple(j for j in range(m) if j not in X)
                image, p1 = coset_factor(sigma, X)
                _, p2 = coset_factor(sigma, comp)
                ky = len(X)
                y_new = compose_basis(op, y, permutation_elt(op, perm_inverse(p1)))
                osp = op.space(m - ky)
                o_new = op.act_basis(p2, m - ky, osp.index(o))
                col = {}
                fsp = hom_space(op, ky, n)
                for yi, c in y_new.items():
                    for oi, d in o_new.items():
                        lab = (sindex[image], (fsp.labels[yi], osp.labels[oi]))
                        col[t.index(lab)] = c * d
                right_cols.append(col)
            right = LinMap(t, t, right_cols)
            if iso.maps[n] @ left != right @ iso.maps[n]:
                return False
    return True


def arity_window(F: TruncatedModule, lo: int, hi: int) -> TruncatedModule:
    """The subquotient of ``F`` living in arities ``lo..hi``.

    Over a reduced operad morphisms never raise arity, so arities ``< lo``
    form a submodule and so do arities ``≤ hi``.
    """
    if not F.operad.reduced:
        raise ModuleError("arity windows need a reduced operad")
    low = [Subspace.whole(F.space(n)) if n < lo else Subspace.zero(F.space(n))
           for n in range(F.bound + 1)]
    Q = quotient(F, low)
    high = [Subspace.whole(Q.space(n)) if n <= hi else Subspace.zero(Q.space(n))
            for n in range(Q.bound + 1)]
    return submodule(Q, high, name=f"{F.name}[{lo}..{hi}]")
