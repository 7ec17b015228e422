"""Seeded random modules, exact sequences and morphisms for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .exactlin import Subspace
from .fmod import (SigmaModule, TruncatedModule, ModuleMorphism, alpha_embed, delta, direct_sum,
                   free_module, generated_subspaces, inclusion_morphism, projection_morphism,
                   quotient, regular_rep, sign_rep, standard_rep, submodule, trivial_rep,
                   yoneda_morphism)
from .operads import Operad


def random_vector(rng: random.Random, dim: int, density: float = 0.6) -> dict:
    if dim == 0:
        return {}
    v = {}
    for i in range(dim):
        if rng.random() < density:
            c = rng.choice((-2, -1, 1, 1, 2))
            v[i] = Fraction(c)
    if not v:
        v[rng.randrange(dim)] = Fraction(1)
    return v


def random_sigma_module(rng: random.Random, N: int) -> SigmaModule:
    n = rng.randint(1, N)
    kind = rng.choice(("triv", "sign", "std", "reg") if n <= 3 else ("triv", "sign", "std"))
    rep = {"triv": trivial_rep, "sign": sign_rep, "std": standard_rep, "reg": regular_rep}[kind](n)
    if rep.space.dim == 0:
        rep = trivial_rep(n)
    return SigmaModule.concentrated(rep, N, name=f"{kind}{n}")


def _random_nonzero_arity(rng, F: TruncatedModule):
    # a generator in the top arity of a free module usually generates everything
    supp = F.support()
    if len(supp) > 1:
        supp = supp[:-1]
    return rng.choice(supp) if supp else None


def random_generated_subspaces(rng, F: TruncatedModule, count: int = 1) -> list[Subspace]:
    gens: dict = {}
    for _ in range(count):
        n = _random_nonzero_arity(rng, F)
        if n is None:
            break
        gens.setdefault(n, []).append(random_vector(rng, F.dim(n)))
    return generated_subspaces(F, gens)


def random_module(op: Operad, rng: random.Random, N: int = 3, depth: int = 0) -> TruncatedModule:
    """A small module vanishing above ``N``, built from free modules, α-images,
    shifts, generated submodules, quotients and sums."""
    kinds = ["free", "quotient", "sub", "alpha", "shift"]
    if depth == 0:
        kinds.append("sum")
    kind = rng.choice(kinds)
    if kind == "free":
        return free_module(op, rng.randint(1, min(N, 3)), N)
    if kind == "alpha":
        return alpha_embed(random_sigma_module(rng, N), op)
    if kind == "shift":
        m = rng.randint(2, min(N + 1, 3))
        return delta(free_module(op, m, max(N, m)))
    if kind == "sum":
        a = random_module(op, rng, N, depth + 1)
        b = random_module(op, rng, N, depth + 1)
        if a.bound != b.bound:
            return a
        return direct_sum([a, b])
    F = free_module(op, rng.randint(2, max(2, min(N, 3))), N)
    subs = random_generated_subspaces(rng, F, rng.randint(1, 2))
    if kind == "sub":
        return submodule(F, subs, name=f"sub({F.name})")
    return quotient(F, subs, name=f"quot({F.name})")


def random_short_exact(op: Operad, rng: random.Random, N: int = 3):
    """``(i, p)`` with ``0 → K → F → F/K → 0`` and ``K`` randomly generated."""
    F = random_module(op, rng, N)
    subs = random_generated_subspaces(rng, F, rng.randint(1, 2))
    K = submodule(F, subs)
    Q = quotient(F, subs)
    return inclusion_morphism(K), projection_morphism(Q)


def random_morphism(op: Operad, rng: random.Random, N: int = 3) -> ModuleMorphism:
    """A Yoneda morphism out of a free module into a random module."""
    G = random_module(op, rng, N)
    supp = [n for n in G.support() if n >= 1 and n <= G.bound]
    if not supp:
        m = 1
        g = {}
    else:
        m = rng.choice(supp)
        g = random_vector(rng, G.dim(m))
    free = free_module(op, m, G.bound)
    return yoneda_morphism(free, m, G, g)
