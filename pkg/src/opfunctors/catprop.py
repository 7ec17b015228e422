"""The PROP associated with an operad.

A basis element of ``Cat O(m, n)`` is a map ``f`` from ``0..m-1`` to
``0..n-1`` together with, for every output ``i``, a basis label of
``O(|f⁻¹(i)|)`` whose inputs are the fibre in increasing order.
"""

from __future__ import annotations

import threading
from math import factorial
from fractions import Fraction
from itertools import product
from typing import Mapping, NamedTuple

from .exactlin import (ONE, LinMap, Perm, Space, identity_perm, standardization,
                       vec_iadd, vec_scale)
from .operads import Operad, OperadElement, OperadError, OperadMorphism, TruncationError


class CatBasisElt(NamedTuple):
    f: tuple[int, ...]
    labels: tuple[int, ...]

    @property
    def source(self) -> int:
        return len(self.f)

    @property
    def target(self) -> int:
        return len(self.labels)

    def fibres(self) -> list[list[int]]:
        fib: list[list[int]] = [[] for _ in self.labels]
        for x, y in enumerate(self.f):
            fib[y].append(x)
        return fib

    def encode(self) -> str:
        """Canonical text form: ``m>n:<images, 1-based>:<labels>``."""
        return (f"{self.source}>{self.target}:" + ".".join(str(y + 1) for y in self.f)
                + ":" + ".".join(str(a) for a in self.labels))

    @classmethod
    def decode(cls, text: str) -> "CatBasisElt":
        shape, fs, ls = text.split(":")
        m, n = (int(x) for x in shape.split(">"))
        f = tuple(int(y) - 1 for y in fs.split(".")) if fs else ()
        labels = tuple(int(a) for a in ls.split(".")) if ls else ()
        if len(f) != m or len(labels) != n:
            raise ValueError(f"malformed basis morphism {text!r}")
        return cls(f, labels)


# ---------------------------------------------------------------- caches

class _PropCache:
    def __init__(self):
        self.lock = threading.RLock()
        self.homs: dict = {}
        self.compose: dict = {}


_CACHES: dict[int, _PropCache] = {}
_CACHES_LOCK = threading.Lock()


def _cache(op: Operad) -> _PropCache:
    key = id(op)
    with _CACHES_LOCK:
        got = _CACHES.get(key)
        if got is None:
            got = _CACHES[key] = _PropCache()
            # keep the operad alive as long as its cache
            got.operad = op
    return got


def hom_space(op: Operad, m: int, n: int) -> Space:
    """``Cat O(m, n)`` with basis ``CatBasisElt``, enumerated in lexicographic order."""
    cache = _cache(op)
    key = (m, n)
    got = cache.homs.get(key)
    if got is not None:
        return got
    with cache.lock:
        got = cache.homs.get(key)
        if got is None:
            if m > op.nmax:
                raise TruncationError(f"source {m} exceeds the bound {op.nmax}")
            labels = []
            for f in product(range(n), repeat=m):
                sizes = [0] * n
                for y in f:
                    sizes[y] += 1
                dims = [op.dim(s) for s in sizes]
                if 0 in dims:
                    continue
                for lab in product(*(range(d) for d in dims)):
                    labels.append(CatBasisElt(f, lab))
            got = Space(labels)
            cache.homs[key] = got
    return got


def hom_dim_closed_form(op: Operad, m: int, n: int) -> int:
    """``Σ_f ∏ dim O(|f⁻¹(i)|)`` via compositions of ``m`` and multinomials."""
    def rec(remaining: int, outputs: int) -> list[tuple[int, ...]]:
        if outputs == 0:
            return [()] if remaining == 0 else []
        out = []
        for s in range(remaining + 1):
            for rest in rec(remaining - s, outputs - 1):
                out.append((s,) + rest)
        return out

    total = 0
    for sizes in rec(m, n):
        multinom = factorial(m)
        weight = 1
        for s in sizes:
            multinom //= factorial(s)
            weight *= op.dim(s)
        total += multinom * weight
    return total


def compose_basis(op: Operad, g: CatBasisElt, f: CatBasisElt) -> dict:
    """``g ∘ f`` for basis elements, as a vector over ``Cat O(m, p)``."""
    cache = _cache(op)
    key = (g, f)
    got = cache.compose.get(key)
    if got is not None:
        return got
    m, n, p = f.source, f.target, g.target
    if g.source != n:
        raise OperadError("composition of morphisms with mismatched shapes")
    h = tuple(g.f[y] for y in f.f)
    ffib = f.fibres()
    gfib = g.fibres()
    factors = []
    for l in range(p):
        kids = tuple((len(ffib[i]), f.labels[i]) for i in gfib[l])
        nu = op.gamma(len(gfib[l]), g.labels[l], kids)
        block = [x for i in gfib[l] for x in ffib[i]]
        pi = standardization(block)
        if pi != identity_perm(len(block)):
            nu = op.act_vec(pi, len(block), nu)
        if not nu:
            cache.compose[key] = {}
            return {}
        factors.append(list(nu.items()))
    target = hom_space(op, m, p)
    out: dict = {}
    for combo in product(*factors):
        coef = ONE
        labs = []
        for a, c in combo:
            coef *= c
            labs.append(a)
        vec_iadd(out, {target.index(CatBasisElt(h, tuple(labs))): coef})
    cache.compose[key] = out
    return out


# ---------------------------------------------------------------- morphisms

class CatMorphism:
    __slots__ = ("operad", "m", "n", "coeffs")

    def __init__(self, operad: Operad, m: int, n: int, coeffs: Mapping[int, Fraction]):
        self.operad = operad
        self.m = m
        self.n = n
        self.coeffs = {k: Fraction(v) for k, v in coeffs.items() if v}

    @classmethod
    def basis(cls, op: Operad, elt: CatBasisElt) -> "CatMorphism":
        sp = hom_space(op, elt.source, elt.target)
        return cls(op, elt.source, elt.target, {sp.index(elt): ONE})

    @classmethod
    def zero(cls, op: Operad, m: int, n: int) -> "CatMorphism":
        return cls(op, m, n, {})

    @property
    def space(self) -> Space:
        return hom_space(self.operad, self.m, self.n)

    def terms(self) -> list[tuple[CatBasisElt, Fraction]]:
        sp = self.space
        return [(sp.labels[k], c) for k, c in sorted(self.coeffs.items())]

    def __add__(self, other: "CatMorphism") -> "CatMorphism":
        self._same(other)
        out = dict(self.coeffs)
        vec_iadd(out, other.coeffs)
        return CatMorphism(self.operad, self.m, self.n, out)

    def __sub__(self, other: "CatMorphism") -> "CatMorphism":
        self._same(other)
        out = dict(self.coeffs)
        vec_iadd(out, other.coeffs, -ONE)
        return CatMorphism(self.operad, self.m, self.n, out)

    def __neg__(self):
        return CatMorphism(self.operad, self.m, self.n, vec_scale(self.coeffs, -1))

    def __rmul__(self, c):
        return CatMorphism(self.operad, self.m, self.n, vec_scale(self.coeffs, c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CatMorphism):
            return NotImplemented
        return (self.operad is other.operad and (self.m, self.n) == (other.m, other.n)
                and self.coeffs == other.coeffs)

    __hash__ = None

    def _same(self, other):
        if other.operad is not self.operad or (other.m, other.n) != (self.m, self.n):
            raise OperadError("morphisms live in different hom spaces")

    def is_zero(self) -> bool:
        return not self.coeffs

    def __matmul__(self, other: "CatMorphism") -> "CatMorphism":
        return compose(self, other)

    def __repr__(self):
        if not self.coeffs:
            return f"0[Cat {self.operad.name}({self.m},{self.n})]"
        return " + ".join(f"{c}*{e.encode()}" for e, c in self.terms())


def compose(eta: CatMorphism, xi: CatMorphism) -> CatMorphism:
    """``eta ∘ xi`` for ``xi: m → n`` and ``eta: n → p``."""
    if eta.operad is not xi.operad or eta.m != xi.n:
        raise OperadError("composition of morphisms with mismatched shapes")
    op = eta.operad
    gs, fs = eta.space, xi.space
    out: dict = {}
    for gk, gc in eta.coeffs.items():
        for fk, fc in xi.coeffs.items():
            vec_iadd(out, compose_basis(op, gs.labels[gk], fs.labels[fk]), gc * fc)
    return CatMorphism(op, xi.m, eta.n, out)


def boxplus_basis(a: CatBasisElt, b: CatBasisElt) -> CatBasisElt:
    shift = a.target
    return CatBasisElt(a.f + tuple(y + shift for y in b.f), a.labels + b.labels)


def boxplus(xi: CatMorphism, other: CatMorphism) -> CatMorphism:
    if xi.operad is not other.operad:
        raise OperadError("⊞ across operads")
    op = xi.operad
    m, n = xi.m + other.m, xi.n + other.n
    target = hom_space(op, m, n)
    a_sp, b_sp = xi.space, other.space
    out = {}
    for ak, ac in xi.coeffs.items():
        for bk, bc in other.coeffs.items():
            elt = boxplus_basis(a_sp.labels[ak], b_sp.labels[bk])
            vec_iadd(out, {target.index(elt): ac * bc})
    return CatMorphism(op, m, n, out)


def identity_elt(op: Operad, n: int) -> CatBasisElt:
    return CatBasisElt(tuple(range(n)), (op.unit_index(),) * n)


def identity(op: Operad, n: int) -> CatMorphism:
    return CatMorphism.basis(op, identity_elt(op, n))


def permutation_elt(op: Operad, p: Perm) -> CatBasisElt:
    """The bijection ``p`` (sending input ``x`` to output ``p[x]``) with unit labels."""
    return CatBasisElt(tuple(p), (op.unit_index(),) * len(p))


def permutation(op: Operad, p: Perm) -> CatMorphism:
    return CatMorphism.basis(op, permutation_elt(op, p))


def from_operad(x: OperadElement) -> CatMorphism:
    """``O(n) = Cat O(n, 1)``."""
    op = x.operad
    sp = hom_space(op, x.arity, 1)
    f = (0,) * x.arity
    return CatMorphism(op, x.arity, 1, {sp.index(CatBasisElt(f, (a,))): c for a, c in x.coeffs.items()})


def to_operad(xi: CatMorphism) -> OperadElement:
    if xi.n != 1:
        raise OperadError("only morphisms with one output are operad elements")
    sp = xi.space
    return OperadElement(xi.operad, xi.m, {sp.labels[k].labels[0]: c for k, c in xi.coeffs.items()})


def shift_basis(elt: CatBasisElt, op: Operad) -> CatBasisElt:
    """``ξ ⊞ Id₁`` on a basis element."""
    return CatBasisElt(elt.f + (elt.target,), elt.labels + (op.unit_index(),))


def shift(xi: CatMorphism, k: int = 1) -> CatMorphism:
    return boxplus(xi, identity(xi.operad, k))


def mu_i(op: Operad, mu: OperadElement, n: int, i: int) -> CatMorphism:
    """The morphism ``n+1 → n`` applying ``mu`` to variables ``i`` and ``n+1`` (1-based)."""
    if mu.arity != 2:
        raise OperadError("mu must have arity 2")
    if not 1 <= i <= n:
        raise OperadError(f"index {i} out of range 1..{n}")
    if n + 1 > op.nmax:
        raise TruncationError(f"arity {n + 1} exceeds the bound {op.nmax}")
    f = tuple(range(n)) + (i - 1,)
    unit = op.unit_index()
    sp = hom_space(op, n + 1, n)
    out = {}
    for a, c in mu.coeffs.items():
        labels = tuple(a if j == i - 1 else unit for j in range(n))
        out[sp.index(CatBasisElt(f, labels))] = c
    return CatMorphism(op, n + 1, n, out)


def mu_sum(op: Operad, mu: OperadElement, n: int) -> CatMorphism:
    total = CatMorphism.zero(op, n + 1, n)
    for i in range(1, n + 1):
        total = total + mu_i(op, mu, n, i)
    return total


# ---------------------------------------------------------------- Leibniz

class LeibnizResult(NamedTuple):
    holds: bool
    witness: OperadElement | None = None
    tested: OperadElement | None = None

    def __bool__(self):
        return self.holds


def leibniz_defect(op: Operad, mu: OperadElement, nu: OperadElement) -> OperadElement:
    """``μ ∘ (ν ⊞ Id₁) − ν ∘ μ(n)`` in ``O(n+1)``."""
    n = nu.arity
    if n + 1 > op.nmax:
        raise TruncationError(f"the defect of an arity-{n} element needs arity {n + 1}")
    m = from_operad(mu)
    v = from_operad(nu)
    lhs = compose(m, shift(v))
    rhs = compose(v, mu_sum(op, mu, n))
    return to_operad(lhs - rhs)


def leibniz_check(op: Operad, mu: OperadElement, mode: str = "generators",
                  nmax: int | None = None) -> LeibnizResult:
    """Test the right Leibniz condition on generators or on every basis element."""
    if mode == "generators":
        tested = op.generators()
    elif mode == "exhaustive":
        top = op.nmax - 1 if nmax is None else nmax
        lo = 1 if op.reduced else 0
        tested = [op.basis_element(n, a) for n in range(lo, top + 1) for a in range(op.dim(n))]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for nu in tested:
        d = leibniz_defect(op, mu, nu)
        if not d.is_zero():
            return LeibnizResult(False, d, nu)
    return LeibnizResult(True)


# ---------------------------------------------------------------- functoriality in the operad

def cat_map_basis(phi: OperadMorphism, elt: CatBasisElt) -> dict:
    """``Cat φ`` on a basis element, as a vector over ``Cat P(m, n)``."""
    target = hom_space(phi.target, elt.source, elt.target)
    sizes = [0] * elt.target
    for y in elt.f:
        sizes[y] += 1
    factors = [list(phi.apply_basis(s, a).items()) for s, a in zip(sizes, elt.labels)]
    out: dict = {}
    for combo in product(*factors):
        coef = ONE
        labs = []
        for a, c in combo:
            coef *= c
            labs.append(a)
        vec_iadd(out, {target.index(CatBasisElt(elt.f, tuple(labs))): coef})
    return out


def cat_map(phi: OperadMorphism, xi: CatMorphism) -> CatMorphism:
    sp = xi.space
    out: dict = {}
    for k, c in xi.coeffs.items():
        vec_iadd(out, cat_map_basis(phi, sp.labels[k]), c)
    return CatMorphism(phi.target, xi.m, xi.n, out)


def cat_map_linear(phi: OperadMorphism, m: int, n: int) -> LinMap:
    src = hom_space(phi.source, m, n)
    tgt = hom_space(phi.target, m, n)
    return LinMap(src, tgt, [cat_map_basis(phi, e) for e in src.labels])
