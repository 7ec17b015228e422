"""Free groups, truncated tensor Hopf algebras and exponential functors.

``Φ_H(F_n) = H^{⊗n}`` is contravariant in group homomorphisms: a
homomorphism ``u: F_n → F_p`` acts ``H^{⊗p} → H^{⊗n}`` by splitting each
input slot with the iterated coproduct (one copy per occurrence of its
generator), applying the antipode to inverse occurrences and multiplying
the copies in the order the letters appear.  Everything is graded by total
tensor degree and capped at ``D``; all the maps used here preserve degree,
so the cap never truncates a result.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import factorial
from typing import Iterable, Mapping, Sequence

from .catprop import CatBasisElt, cat_map_basis, compose_basis, hom_space
from .exactlin import (ONE, LinMap, Space, Subspace, coinvariant_relations,
                       solve, transposition, vec_iadd)
from .fmod import ModuleError, TruncatedModule, quotient, delta_power, mu_tilde_raw
from .operads import Operad, builtin, default_mu, lie_to_assu


class GroupParseError(ValueError):
    def __init__(self, message: str, token: str | None = None):
        self.token = token
        super().__init__(message + (f" (at {token!r})" if token is not None else ""))


# ================================================================ free groups

class FreeGroupWord:
    """A reduced word in ``x_1^{±1} .. x_p^{±1}``; letters are signed 1-based indices."""

    __slots__ = ("rank", "letters")

    def __init__(self, rank: int, letters: Iterable[int] = ()):
        out: list[int] = []
        for a in letters:
            if a == 0 or abs(a) > rank:
                raise ValueError(f"letter {a} outside rank {rank}")
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        self.rank = rank
        self.letters = tuple(out)

    @classmethod
    def generator(cls, rank: int, i: int) -> "FreeGroupWord":
        return cls(rank, (i,))

    def __mul__(self, other: "FreeGroupWord") -> "FreeGroupWord":
        if self.rank != other.rank:
            raise ValueError("words in groups of different rank")
        return FreeGroupWord(self.rank, self.letters + other.letters)

    def inverse(self) -> "FreeGroupWord":
        return FreeGroupWord(self.rank, tuple(-a for a in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, FreeGroupWord) and (self.rank, self.letters) == (other.rank, other.letters)

    def __hash__(self):
        return hash((self.rank, self.letters))

    def substitute(self, images: Sequence["FreeGroupWord"], rank: int) -> "FreeGroupWord":
        out: list[int] = []
        for a in self.letters:
            w = images[abs(a) - 1]
            out.extend(w.letters if a > 0 else w.inverse().letters)
        return FreeGroupWord(rank, out)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str, rank: int) -> "FreeGroupWord":
        text = text.strip()
        if text in ("", "1", "e"):
            return cls(rank)
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise GroupParseError("bad letter", tok)
            i = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            if not 1 <= i <= rank:
                raise GroupParseError(f"generator index outside 1..{rank}", tok)
            letters.extend([i if e > 0 else -i] * abs(e))
        return cls(rank, letters)


class GroupHom:
    """``u: F_n → F_p`` given by the images of ``x_1 .. x_n``."""

    def __init__(self, n: int, p: int, images: Sequence[FreeGroupWord]):
        if len(images) != n:
            raise ValueError("one image per generator is required")
        for w in images:
            if w.rank != p:
                raise ValueError("images must lie in the target group")
        self.n = n
        self.p = p
        self.images = tuple(images)

    def __call__(self, w: FreeGroupWord) -> FreeGroupWord:
        return w.substitute(self.images, self.p)

    def then(self, v: "GroupHom") -> "GroupHom":
        """``v ∘ self``."""
        if v.n != self.p:
            raise ValueError("homomorphisms are not composable")
        return GroupHom(self.n, v.p, [v(w) for w in self.images])

    def __eq__(self, other):
        return isinstance(other, GroupHom) and (self.n, self.p, self.images) == (other.n, other.p, other.images)

    def __hash__(self):
        return hash((self.n, self.p, self.images))

    def __str__(self):
        return f"{self.n}->{self.p}: " + "; ".join(str(w) for w in self.images)

    @classmethod
    def parse(cls, text: str) -> "GroupHom":
        """``n->p: w1; w2; ...``"""
        m = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*:(.*)", text, re.S)
        if not m:
            raise GroupParseError("expected 'n->p: w1; w2; ...'", text.strip()[:20])
        n, p = int(m.group(1)), int(m.group(2))
        body = m.group(3).strip()
        parts = [s for s in body.split(";")] if n else []
        if n and len(parts) != n:
            raise GroupParseError(f"expected {n} images, got {len(parts)}", body)
        return cls(n, p, [FreeGroupWord.parse(s, p) for s in parts])

    @classmethod
    def identity(cls, n: int) -> "GroupHom":
        return cls(n, n, [FreeGroupWord.generator(n, i) for i in range(1, n + 1)])


def conjugation_hom(n: int) -> GroupHom:
    """``F_n → F_{n+1}``, ``x_i ↦ x_{n+1}^{-1} x_i x_{n+1}``."""
    p = n + 1
    z = FreeGroupWord.generator(p, p)
    return GroupHom(n, p, [z.inverse() * FreeGroupWord.generator(p, i) * z for i in range(1, n + 1)])


def inner_hom(n: int, j: int) -> GroupHom:
    """Conjugation of ``F_n`` by its generator ``x_j``."""
    z = FreeGroupWord.generator(n, j)
    return GroupHom(n, n, [z.inverse() * FreeGroupWord.generator(n, i) * z for i in range(1, n + 1)])


def psi_hom(n: int, k: int) -> GroupHom:
    """``id_{F_n} ⋆ ψ_k: F_{n+1} → F_{n+k}``, the last generator going to ``x_{n+1} .. x_{n+k}``."""
    p = n + k
    imgs = [FreeGroupWord.generator(p, i) for i in range(1, n + 1)]
    imgs.append(FreeGroupWord(p, range(n + 1, n + k + 1)))
    return GroupHom(n + 1, p, imgs)


# ================================================================ Hopf algebras

class TruncHopf:
    """``T(V)`` (or ``S(V)`` when ``commutative``) on ``d`` primitive letters, degrees ``≤ D``.

    Basis labels are tuples of letters; in the commutative case they are
    sorted.  Products of total degree above ``D`` are zero.
    """

    def __init__(self, d: int, D: int, commutative: bool = False):
        self.d = d
        self.D = D
        self.commutative = commutative
        words = []
        for k in range(D + 1):
            if commutative:
                words.extend(_multisets(d, k))
            else:
                words.extend(product(range(d), repeat=k))
        self.space = Space(tuple(w) for w in words)
        self._coprod: dict = {}

    @property
    def name(self) -> str:
        return ("S" if self.commutative else "T") + f"(V{self.d})<= {self.D}"

    def _norm(self, w: tuple) -> tuple:
        return tuple(sorted(w)) if self.commutative else w

    def degree(self, w: tuple) -> int:
        return len(w)

    # -- structure on basis words
    def mul_words(self, a: tuple, b: tuple) -> tuple | None:
        if len(a) + len(b) > self.D:
            return None
        return self._norm(a + b)

    def mul(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        labels = self.space.labels
        for i, c in x.items():
            for j, e in y.items():
                w = self.mul_words(labels[i], labels[j])
                if w is not None:
                    vec_iadd(out, {self.space.index(w): c * e})
        return out

    def split(self, w: tuple, parts: int) -> list[tuple[tuple, ...]]:
        """Iterated coproduct ``Δ^{(parts)}(w)`` as a list of tuples of words (with repetition)."""
        if parts == 0:
            return [()] if not w else []
        key = (w, parts)
        got = self._coprod.get(key)
        if got is None:
            got = []
            for assign in product(range(parts), repeat=len(w)):
                pieces = [[] for _ in range(parts)]
                for letter, slot in zip(w, assign):
                    pieces[slot].append(letter)
                got.append(tuple(self._norm(tuple(p)) for p in pieces))
            self._coprod[key] = got
        return got

    def antipode_word(self, w: tuple) -> tuple[int, tuple]:
        return (-1) ** len(w), self._norm(tuple(reversed(w)))

    # -- structure maps
    def unit_vec(self) -> dict:
        return {self.space.index(()): ONE}

    def counit(self) -> LinMap:
        k = Space(["k"])
        return LinMap(self.space, k, ({0: ONE} if not w else {} for w in self.space.labels))

    def product_map(self) -> LinMap:
        sp2 = self.tensor_power(2)
        cols = []
        for (a, b) in sp2.labels:
            w = self.mul_words(a, b)
            cols.append({self.space.index(w): ONE} if w is not None else {})
        return LinMap(sp2, self.space, cols)

    def coproduct_map(self) -> LinMap:
        sp2 = self.tensor_power(2)
        cols = []
        for w in self.space.labels:
            col: dict = {}
            for a, b in self.split(w, 2):
                vec_iadd(col, {sp2.index((a, b)): ONE})
            cols.append(col)
        return LinMap(self.space, sp2, cols)

    def antipode_map(self) -> LinMap:
        cols = []
        for w in self.space.labels:
            s, v = self.antipode_word(w)
            cols.append({self.space.index(v): Fraction(s)})
        return LinMap(self.space, self.space, cols)

    def tensor_power(self, n: int) -> Space:
        """``H^{⊗n}`` in total degree ``≤ D``; labels are tuples of words."""
        return exp_space(self, n)

    def is_primitive(self, x: Mapping) -> bool:
        sp2 = self.tensor_power(2)
        delta = self.coproduct_map()(x)
        expect: dict = {}
        for i, c in x.items():
            w = self.space.labels[i]
            vec_iadd(expect, {sp2.index((w, ())): c})
            vec_iadd(expect, {sp2.index(((), w)): c})
        return delta == expect

    def commutator(self, x: Mapping, y: Mapping) -> dict:
        out = self.mul(x, y)
        vec_iadd(out, self.mul(y, x), -ONE)
        return out

    def letter(self, i: int) -> dict:
        return {self.space.index((i,)): ONE}


def _multisets(d: int, k: int) -> list[tuple]:
    return list(combinations_with_replacement(range(d), k))


_EXP_SPACES: dict = {}


def exp_space(H: TruncHopf, n: int) -> Space:
    key = (id(H), n)
    got = _EXP_SPACES.get(key)
    if got is None:
        by_deg: dict = {}
        for w in H.space.labels:
            by_deg.setdefault(len(w), []).append(w)
        labels = []

        def rec(prefix, budget, left):
            if left == 0:
                labels.append(tuple(prefix))
                return
            for k in range(budget + 1):
                for w in by_deg.get(k, ()):
                    prefix.append(w)
                    rec(prefix, budget - k, left - 1)
                    prefix.pop()

        rec([], H.D, n)
        got = _EXP_SPACES[key] = (H, Space(labels))
    return got[1]


@dataclass
class HopfAxiomReport:
    coassociative: bool
    counital: bool
    antipode: bool
    multiplicative: bool
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coassociative and self.counital and self.antipode and self.multiplicative

    def __bool__(self):
        return self.ok


def check_hopf_axioms(H: TruncHopf) -> HopfAxiomReport:
    """Coassociativity, counit, antipode and multiplicativity of ``Δ``, exactly."""
    details = []
    sp = H.space
    idx = sp.index
    coassoc = counital = anti = mult = True
    for w in sp.labels:
        left: dict = {}
        right: dict = {}
        for a, b in H.split(w, 2):
            for a1, a2 in H.split(a, 2):
                left[(a1, a2, b)] = left.get((a1, a2, b), 0) + 1
            for b1, b2 in H.split(b, 2):
                right[(a, b1, b2)] = right.get((a, b1, b2), 0) + 1
        if left != right:
            coassoc = False
            details.append(f"coassociativity at {w}")
        # (ε ⊗ id)Δ = id = (id ⊗ ε)Δ
        lc = sum(1 for a, b in H.split(w, 2) if not a and b == w)
        rc = sum(1 for a, b in H.split(w, 2) if not b and a == w)
        if lc != 1 or rc != 1:
            counital = False
            details.append(f"counit at {w}")
        # m(S ⊗ id)Δ = ηε = m(id ⊗ S)Δ
        for side in (0, 1):
            acc: dict = {}
            for a, b in H.split(w, 2):
                if side == 0:
                    s, sa = H.antipode_word(a)
                    prod_w = H.mul_words(sa, b)
                else:
                    s, sb = H.antipode_word(b)
                    prod_w = H.mul_words(a, sb)
                if prod_w is not None:
                    vec_iadd(acc, {idx(prod_w): Fraction(s)})
            expect = H.unit_vec() if not w else {}
            if acc != expect:
                anti = False
                details.append(f"antipode ({'left' if side == 0 else 'right'}) at {w}")
    # Δ(ab) = Δ(a)Δ(b) when |a| + |b| ≤ D
    for a in sp.labels:
        for b in sp.labels:
            ab = H.mul_words(a, b)
            if ab is None:
                continue
            lhs: dict = {}
            for p, q in H.split(ab, 2):
                lhs[(p, q)] = lhs.get((p, q), 0) + 1
            rhs: dict = {}
            for a1, a2 in H.split(a, 2):
                for b1, b2 in H.split(b, 2):
                    key = (H.mul_words(a1, b1), H.mul_words(a2, b2))
                    rhs[key] = rhs.get(key, 0) + 1
            if lhs != rhs:
                mult = False
                details.append(f"multiplicativity at {a}·{b}")
    return HopfAxiomReport(coassoc, counital, anti, mult, details)


# ================================================================ exponential functors

@dataclass
class ExpFunctorValue:
    """A vector of ``Φ_H(F_n) = H^{⊗n}`` in total degree ``≤ D``."""

    hopf: TruncHopf
    slots: int
    coeffs: dict

    @property
    def space(self) -> Space:
        return exp_space(self.hopf, self.slots)

    def __eq__(self, other):
        return (isinstance(other, ExpFunctorValue) and self.hopf is other.hopf
                and self.slots == other.slots and self.coeffs == other.coeffs)

    @classmethod
    def basis(cls, H: TruncHopf, words: Sequence[tuple]) -> "ExpFunctorValue":
        sp = exp_space(H, len(words))
        return cls(H, len(words), {sp.index(tuple(words)): ONE})


def _act_basis(H: TruncHopf, u: GroupHom, inputs: tuple) -> dict:
    """``Φ(u)`` on one basis tensor of ``H^{⊗p}``; result over ``H^{⊗n}`` labels."""
    # occurrences of each generator, in reading order
    occ: list[list[tuple[int, int, bool]]] = [[] for _ in range(u.p)]
    for i, w in enumerate(u.images):
        for pos, a in enumerate(w.letters):
            occ[abs(a) - 1].append((i, pos, a < 0))
    per_slot = []
    for j in range(u.p):
        copies = len(occ[j])
        if copies == 0:
            if inputs[j]:
                return {}
            per_slot.append([()])
            continue
        per_slot.append(H.split(inputs[j], copies))
    out: dict = {}
    for choice in product(*per_slot):
        sign = 1
        pieces: list[list] = [[None] * len(w) for w in u.images]
        for j in range(u.p):
            for (i, pos, inv), piece in zip(occ[j], choice[j]):
                if inv:
                    s, piece = H.antipode_word(piece)
                    sign *= s
                pieces[i][pos] = piece
        result = []
        for i in range(u.n):
            word: tuple = ()
            for piece in pieces[i]:
                word = word + piece
            result.append(H._norm(word))
        key = tuple(result)
        out[key] = out.get(key, 0) + sign
    return {k: Fraction(v) for k, v in out.items() if v}


def act_hom(H: TruncHopf, u: GroupHom) -> LinMap:
    """``Φ_H(u): H^{⊗p} → H^{⊗n}`` for ``u: F_n → F_p``."""
    src = exp_space(H, u.p)
    tgt = exp_space(H, u.n)
    cols = []
    for lab in src.labels:
        col = {tgt.index(k): c for k, c in _act_basis(H, u, lab).items()}
        cols.append(col)
    return LinMap(src, tgt, cols)


def act_value(u: GroupHom, x: ExpFunctorValue) -> ExpFunctorValue:
    if x.slots != u.p:
        raise ValueError(f"the value has {x.slots} slots but the homomorphism targets F_{u.p}")
    f = act_hom(x.hopf, u)
    return ExpFunctorValue(x.hopf, u.n, f(x.coeffs))


def reduced_last_slot(H: TruncHopf, n: int) -> Subspace:
    """The summand of ``H^{⊗(n+1)}`` with positive degree in the last slot."""
    sp = exp_space(H, n + 1)
    keys = [i for i, lab in enumerate(sp.labels) if lab[-1]]
    return Subspace(sp, keys, [{k: ONE} for k in keys])


def rho(H: TruncHopf, n: int) -> LinMap:
    """Universal conjugation ``ρ_n: Φ(F_{n+1}) → Φ(F_n)``."""
    return act_hom(H, conjugation_hom(n))


def rho_bar(H: TruncHopf, n: int) -> LinMap:
    """``ρ_n`` restricted to the reduced summand."""
    red = reduced_last_slot(H, n)
    return rho(H, n) @ red.inclusion


def psi_k_star(H: TruncHopf, k: int, n: int) -> LinMap:
    """``Φ(F_{n+k}) → Φ(F_{n+1})``: multiply the last ``k`` slots."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return act_hom(H, psi_hom(n, k))


def psi_bar_k_star(H: TruncHopf, k: int, n: int) -> LinMap:
    """``ψ_k*`` restricted to the tensors whose last ``k`` slots all have positive degree,
    landing in the reduced summand."""
    src = exp_space(H, n + k)
    keys = [i for i, lab in enumerate(src.labels) if all(lab[n:])]
    sub = Subspace(src, keys, [{i: ONE} for i in keys])
    red = reduced_last_slot(H, n)
    f = psi_k_star(H, k, n) @ sub.inclusion
    return red.coords_map(f, sub.space)


def rho_power(H: TruncHopf, k: int, n: int) -> LinMap:
    """``ρ^k_n = ρ_n ∘ ρ^{k−1}_{n+1}``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return rho(H, n)
    return rho(H, n) @ rho_power(H, k - 1, n + 1)


def psi_rho_composites(H: TruncHopf, k: int, n: int) -> bool:
    return rho(H, n) @ psi_k_star(H, k, n) == rho_power(H, k, n)


@dataclass
class ConjugationReport:
    passed: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def primitive_conjugation_check(n: int, D: int, d: int = 2, H: TruncHopf | None = None) -> ConjugationReport:
    """``ρ̄(X_1⊗…⊗X_n⊗v) = Σ_j X_1⊗…⊗[X_j, v]⊗…⊗X_n`` on all basis tensors of
    total degree ``< D`` and every letter ``v``; the unit in the last slot maps to zero
    in the reduced summand by construction."""
    H = H or TruncHopf(d, D)
    f = rho(H, n)
    src = exp_space(H, n + 1)
    tgt = exp_space(H, n)
    checked = 0
    failures = []
    for X in exp_space(H, n).labels:
        if sum(len(w) for w in X) >= D:
            continue
        for v in range(H.d):
            lhs = f.cols[src.index(X + ((v,),))]
            rhs: dict = {}
            for j in range(n):
                xj = {H.space.index(X[j]): ONE}
                br = H.commutator(xj, H.letter(v))
                for b, c in br.items():
                    lab = X[:j] + (H.space.labels[b],) + X[j + 1:]
                    vec_iadd(rhs, {tgt.index(lab): c})
            checked += 1
            if lhs != rhs:
                failures.append((X, v))
    return ConjugationReport(not failures, checked, failures)


@dataclass
class OuterReport:
    outer: bool
    inner_trivial: bool
    consistent: bool
    witness: object = None

    def __bool__(self):
        return self.outer


def outer_check_exponential(H: TruncHopf, n: int) -> OuterReport:
    """``ρ̄ = 0`` at arities ``0..n`` versus triviality of every inner conjugation."""
    outer = True
    witness = None
    for k in range(n + 1):
        rb = rho_bar(H, k)
        if not rb.is_zero():
            outer = False
            if witness is None:
                for j, col in enumerate(rb.cols):
                    if col:
                        witness = (k, rb.domain.labels[j], {rb.codomain.labels[i]: c for i, c in col.items()})
                        break
    inner = True
    for k in range(1, n + 2):
        ident = LinMap.identity(exp_space(H, k))
        for j in range(1, k + 1):
            if act_hom(H, inner_hom(k, j)) != ident:
                inner = False
    return OuterReport(outer, inner, outer == inner, witness)


# ================================================================ Cat Ass^u and 𝕜Fin

@dataclass(frozen=True)
class CatAssBasisElt:
    """A map ``f: m → n`` with an order on each fibre."""

    f: tuple
    orders: tuple

    @property
    def source(self):
        return len(self.f)

    @property
    def target(self):
        return len(self.orders)


def fin_maps(m: int, n: int) -> list[tuple]:
    return list(product(range(n), repeat=m))


def cat_ass_basis(m: int, n: int) -> list[CatAssBasisElt]:
    out = []
    for f in fin_maps(m, n):
        fib = [[x for x in range(m) if f[x] == i] for i in range(n)]
        for orders in product(*(list(permutations(F)) for F in fib)):
            out.append(CatAssBasisElt(f, tuple(orders)))
    return out


@dataclass
class CatAssHom:
    space: Space
    fin: Space
    projection: LinMap


def cat_ass_hom(m: int, n: int) -> CatAssHom:
    """Basis of ``Cat Ass^u(m, n)`` by ordered fibres, with the forgetful map to ``𝕜Fin(m, n)``."""
    basis = cat_ass_basis(m, n)
    sp = Space(basis)
    fin = Space(fin_maps(m, n))
    proj = LinMap(sp, fin, ({fin.index(b.f): ONE} for b in basis))
    return CatAssHom(sp, fin, proj)


def cat_ass_dim(m: int, n: int) -> int:
    total = 0
    for f in fin_maps(m, n):
        sizes = [0] * n
        for y in f:
            sizes[y] += 1
        p = 1
        for s in sizes:
            p *= factorial(s)
        total += p
    return total


def to_assu_basis(elt: CatAssBasisElt, op: Operad) -> CatBasisElt:
    """The same morphism as a basis element of the operadic ``Cat AssU``."""
    fib = [[x for x in range(elt.source) if elt.f[x] == i] for i in range(elt.target)]
    labels = []
    for F, order in zip(fib, elt.orders):
        word = tuple(F.index(x) for x in order)
        labels.append(op.space(len(F)).index(word))
    return CatBasisElt(elt.f, tuple(labels))


def from_assu_basis(elt: CatBasisElt, op: Operad) -> CatAssBasisElt:
    fib = elt.fibres()
    orders = []
    for F, a in zip(fib, elt.labels):
        word = op.space(len(F)).labels[a]
        orders.append(tuple(F[t] for t in word))
    return CatAssBasisElt(elt.f, tuple(orders))


def filtration_subspace(s: int, n: int, K: int) -> Subspace:
    """``Cat Ass^u(s, n+1)^{[≤K]}``: basis elements whose last fibre has at most ``K`` points."""
    sp = Space(cat_ass_basis(s, n + 1))
    keys = [i for i, b in enumerate(sp.labels) if len(b.orders[-1]) <= K]
    return Subspace(sp, keys, [{i: ONE} for i in keys])


def filtration_escape_witness(s: int, n: int, K: int, max_source: int | None = None):
    """A basis element of the filtration piece and a basis element ``ξ`` of
    ``Cat Lie(t, s)`` with ``x ∘ Cat φ(ξ)`` outside the piece for ``t``."""
    top = max_source if max_source is not None else s + 1
    phi = lie_to_assu(max(top, 2) + 1)
    ass = phi.target
    lie = phi.source
    src_sub = filtration_subspace(s, n, K)
    for t in range(1, top + 1):
        tgt_sub = filtration_subspace(t, n, K)
        tgt_ass = hom_space(ass, t, n + 1)
        for xi in hom_space(lie, t, s).labels:
            img = cat_map_basis(phi, xi)
            sp_img = hom_space(ass, t, s)
            for j in src_sub.keys:
                x = to_assu_basis(src_sub.ambient.labels[j], ass)
                out: dict = {}
                for k, c in img.items():
                    for a, e in compose_basis(ass, x, sp_img.labels[k]).items():
                        vec_iadd(out, {a: c * e})
                vec = {}
                for a, c in out.items():
                    b = from_assu_basis(tgt_ass.labels[a], ass)
                    vec[tgt_sub.ambient.index(b)] = c
                if vec and not tgt_sub.contains(vec):
                    return src_sub.ambient.labels[j], xi, t
    return None


# ================================================================ PBW counts

def _young_coinvariant_dim(G: TruncatedModule, m: int, sizes: Sequence[int]) -> int:
    """Dimension of ``G(m)`` modulo the Young subgroup of consecutive blocks of the given sizes."""
    sp = G.space(m)
    if sp.dim == 0:
        return 0
    gens = []
    start = 0
    for s in sizes:
        for i in range(start, start + s - 1):
            gens.append(G.perm(m, transposition(m, i)))
        start += s
    if not gens:
        return sp.dim
    return sp.dim - coinvariant_relations(sp, gens).dim


def pbw_dims(G: TruncatedModule, n: int) -> int:
    """``Σ_m dim 𝕜Fin(m, n) ⊗_{Σ_m} G(m)``.

    The coinvariants split over ``Σ_m``-orbits of maps; the orbit of a
    non-decreasing map contributes the coinvariants of its Young stabilizer.
    """
    if not G.vanishes_above:
        raise ModuleError("the module must vanish above its bound")
    total = 0
    for m in range(G.bound + 1):
        if G.dim(m) == 0:
            continue
        if n == 0:
            if m == 0:
                total += G.dim(0)
            continue
        for f in combinations_with_replacement(range(n), m):
            sizes = [f.count(i) for i in range(n)]
            total += _young_coinvariant_dim(G, m, [s for s in sizes if s])
    return total


def pbw_dims_bruteforce(G: TruncatedModule, n: int) -> int:
    """The same count from the full tensor product ``𝕜Fin(m, n) ⊗ G(m)``."""
    total = 0
    for m in range(G.bound + 1):
        gsp = G.space(m)
        if gsp.dim == 0:
            continue
        maps = fin_maps(m, n)
        sp = Space((f, a) for f in maps for a in range(gsp.dim))
        gens = []
        for i in range(m - 1):
            tau = transposition(m, i)
            g = G.perm(m, tau)
            cols = []
            for f in maps:
                ft = tuple(f[tau[x]] for x in range(m))
                for a in range(gsp.dim):
                    cols.append({sp.index((ft, b)): c for b, c in g.cols[a].items()})
            gens.append(LinMap(sp, sp, cols))
        if gens:
            total += sp.dim - coinvariant_relations(sp, gens).dim
        else:
            total += sp.dim
    return total


def delta_k(G: TruncatedModule, k: int) -> TruncatedModule:
    """``(δ^k G)/Σ_k``: coinvariants for the symmetric group on the last ``k`` inputs."""
    if k < 1:
        raise ModuleError("k must be at least 1")
    if k > G.bound and not G.vanishes_above:
        raise ModuleError("k exceeds the bound")
    D = delta_power(G, k)
    if k == 1:
        return D
    subs = []
    for n in range(D.bound + 1):
        sp = D.space(n)
        if sp.dim == 0:
            subs.append(Subspace.zero(sp))
            continue
        gens = [G.perm(n + k, transposition(n + k, n + i)) for i in range(k - 1)]
        subs.append(coinvariant_relations(sp, gens))
    Q = quotient(D, subs, name=f"delta_({k})({G.name})")
    return Q


@dataclass
class GammaReport:
    lhs: int
    rhs: int
    terms: list

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def __bool__(self):
        return self.passed


def gamma_tbar_dim_check(G: TruncatedModule, n: int) -> GammaReport:
    """``dim τ̄(ΔCatAss^u ⊗ G)(F_n)`` against ``Σ_{k≥1} pbw(δ_(k) G, n)``."""
    lhs = pbw_dims(G, n + 1) - pbw_dims(G, n)
    terms = []
    for k in range(1, G.bound + 1):
        terms.append(pbw_dims(delta_k(G, k), n))
    return GammaReport(lhs, sum(terms), terms)


# ================================================================ Lie algebra modules

class LieAlgebra:
    """A finite-dimensional Lie algebra by structure constants."""

    def __init__(self, basis: Sequence, bracket: Mapping):
        self.space = Space(basis)
        self._br = {k: dict(v) for k, v in bracket.items()}

    def bracket_basis(self, i: int, j: int) -> dict:
        return self._br.get((i, j), {})

    def bracket(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                col = self.bracket_basis(i, j)
                if col:
                    vec_iadd(out, col, a * b)
        return out

    def is_abelian(self) -> bool:
        return not any(self._br.values())


def nilpotent_free_lie(H: TruncHopf) -> tuple[LieAlgebra, list[dict]]:
    """The free ``D``-step nilpotent Lie algebra on the letters of ``T(V)``,
    realized as Lie polynomials of degree ``≤ D``; returns the algebra and
    the embedding vectors into ``T(V)``."""
    if H.commutative:
        raise ValueError("needs the tensor algebra")
    layers = [[H.letter(i) for i in range(H.d)]]
    for _ in range(2, H.D + 1):
        builder = []
        for x in layers[-1]:
            for v in range(H.d):
                builder.append(H.commutator(x, H.letter(v)))
        sub = Subspace.span(H.space, builder)
        layers.append(list(sub.vectors))
    emb = [v for layer in layers for v in layer]
    span = Subspace.span(H.space, emb)
    if span.dim != len(emb):
        raise ValueError("Lie polynomial basis is not independent")
    # structure constants by solving within the span
    incl = LinMap(Space(range(len(emb))), H.space, emb)
    bracket = {}
    for i, x in enumerate(emb):
        for j, y in enumerate(emb):
            c = H.commutator(x, y)
            if c:
                sol = solve(incl, c)
                if sol is None:
                    raise ValueError("bracket leaves the span")
                bracket[(i, j)] = sol
    return LieAlgebra(range(len(emb)), bracket), emb


def abelian_lie(d: int) -> LieAlgebra:
    return LieAlgebra(range(d), {})


def underline_module(g: LieAlgebra, op: Operad, N: int) -> TruncatedModule:
    """``n ↦ g^{⊗n}`` with Lie words of ``Cat Lie`` acting by brackets."""
    dim = g.space.dim
    spaces = [Space(product(range(dim), repeat=n)) for n in range(N + 1)]
    cache: dict = {}

    def evaluate(tree, args):
        if isinstance(tree, int):
            return {args[tree - 1]: ONE}
        left = evaluate(tree[1], args)
        right = evaluate(tree[2], args)
        return g.bracket(left, right)

    def element(k, a, args):
        key = (k, a, args)
        got = cache.get(key)
        if got is None:
            got = cache[key] = evaluate(op.tree(k, a), args)
        return got

    def action(xi: CatBasisElt) -> LinMap:
        fib = xi.fibres()
        src, tgt = spaces[xi.source], spaces[xi.target]
        cols = []
        for lab in src.labels:
            parts = []
            for F, a in zip(fib, xi.labels):
                parts.append(list(element(len(F), a, tuple(lab[x] for x in F)).items()))
            col = {}
            for combo in product(*parts):
                c = ONE
                out = []
                for b, e in combo:
                    c *= e
                    out.append(b)
                if c:
                    vec_iadd(col, {tgt.index(tuple(out)): c})
            cols.append(col)
        return LinMap(src, tgt, cols)

    return TruncatedModule(op, spaces, action, vanishes_above=False, name="underline(g)")


@dataclass
class BridgeReport:
    matches: bool
    checked: int
    mu_zero: bool
    outer: bool

    def __bool__(self):
        return self.matches


def bridge_check(H: TruncHopf, g: LieAlgebra, emb: Sequence[Mapping], degrees: Sequence[int],
                 n_max: int = 2) -> BridgeReport:
    """Compare ``μ̃`` of ``underline(g)`` with ``ρ̄`` on degree-matched inputs.

    ``emb`` sends the basis of ``g`` into primitives of ``H`` and ``degrees``
    gives their degrees; inputs of total degree ``≤ D`` are compared.
    """
    lie = builtin("Lie", max(n_max + 1, 2))
    mu = default_mu(lie)
    U = underline_module(g, lie, n_max + 1)
    mus = mu_tilde_raw(U, mu)
    checked = 0
    ok = True
    for n in range(n_max + 1):
        f = rho(H, n)
        src = exp_space(H, n + 1)
        tgt = exp_space(H, n)
        usrc, utgt = U.space(n + 1), U.space(n)
        for j, lab in enumerate(usrc.labels):
            if sum(degrees[a] for a in lab) > H.D:
                continue
            lhs = _embed_tensor(H, emb, [lab], src, f)
            out = mus[n].cols[j]
            rhs: dict = {}
            for i, c in out.items():
                vec_iadd(rhs, _embed_tensor(H, emb, [utgt.labels[i]], tgt, None), c)
            checked += 1
            if lhs != rhs:
                ok = False
    mu_zero = all(m.is_zero() for m in mus)
    outer = outer_check_exponential(H, n_max).outer
    return BridgeReport(ok, checked, mu_zero, outer)


def _embed_tensor(H, emb, labs, space, then):
    """Image of ``e_{a_1} ⊗ … ⊗ e_{a_n}`` in ``H^{⊗n}``, optionally followed by a map."""
    out: dict = {}
    for lab in labs:
        parts = [list(emb[a].items()) for a in lab]
        for combo in product(*parts):
            c = ONE
            words = []
            for i, e in combo:
                c *= e
                words.append(H.space.labels[i])
            vec_iadd(out, {space.index(tuple(words)): c})
    return then(out) if then is not None else out


def symmetric_hopf_bridge(d: int, D: int, n_max: int = 2) -> BridgeReport:
    """Abelian ``g = V`` inside ``S(V)``: ``μ̃ = 0`` and the exponential functor is outer."""
    H = TruncHopf(d, D, commutative=True)
    g = abelian_lie(d)
    emb = [H.letter(i) for i in range(d)]
    return bridge_check(H, g, emb, [1] * d, n_max)


def tensor_hopf_bridge(d: int = 2, D: int = 3, n_max: int = 2) -> BridgeReport:
    H = TruncHopf(d, D)
    g, emb = nilpotent_free_lie(H)
    degrees = [len(H.space.labels[next(iter(v))]) for v in emb]
    return bridge_check(H, g, emb, degrees, n_max)
