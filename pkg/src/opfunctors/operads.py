"""Operads with explicit bases, partial compositions and symmetric actions.

Elements of an arity-``n`` component are sparse vectors over a basis.  The
symmetric action is written ``act(p, x)``; it is the left action given by
substituting variables, ``(act(p, x))(u_1..u_n) = x(u_{p(1)}, .., u_{p(n)})``,
so that ``act(p, act(q, x)) == act(p∘q, x)``.

Operads given by generators and relations are built degree by degree.  An
arity-``n`` component is the quotient of the space of "root shapes" (a
generator whose inputs carry already normal-formed elements on an ordered
partition of the leaves) by every relation placed at the root, with normal
forms substituted into its leaves.  This is the same quotient as the free
operad modulo the ideal generated by the relations, computed without ever
materialising trees with relations at interior nodes.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from itertools import permutations, product
from typing import Mapping, Sequence

from .exactlin import (ONE, ZERO, LinMap, Perm, Space, Subspace,
                       fraction_str, identity_perm, perm_compose, standardization,
                       vec_iadd, vec_scale)

DEFAULT_NMAX = 6


class OperadError(ValueError):
    pass


class TruncationError(OperadError):
    """Raised when a computation needs an arity above the truncation bound."""


class PresentationParseError(OperadError):
    def __init__(self, message: str, line: int | None = None, token: str | None = None):
        self.line = line
        self.token = token
        where = f"line {line}" if line is not None else "input"
        tok = f" at token {token!r}" if token is not None else ""
        super().__init__(f"{where}{tok}: {message}")


# ================================================================ trees

def tree_leaves(t) -> list[int]:
    if isinstance(t, int):
        return [t]
    out = []
    for c in t[1:]:
        out.extend(tree_leaves(c))
    return out


def tree_relabel(t, mapping):
    if isinstance(t, int):
        return mapping(t)
    return (t[0],) + tuple(tree_relabel(c, mapping) for c in t[1:])


def tree_graft(t, i: int, s):
    """Substitute ``s`` for leaf ``i`` of ``t`` (1-based), renumbering leaves."""
    k = len(tree_leaves(s))

    def go(x):
        if isinstance(x, int):
            if x < i:
                return x
            if x > i:
                return x + k - 1
            return tree_relabel(s, lambda y: y + i - 1)
        return (x[0],) + tuple(go(c) for c in x[1:])

    return go(t)


def tree_to_str(t) -> str:
    if isinstance(t, int):
        return str(t)
    return "(" + " ".join([t[0]] + [tree_to_str(c) for c in t[1:]]) + ")"


# ================================================================ presentations

class OperadPresentation:
    """Generators ``(name, arity)`` and relations as ``{tree: coefficient}``."""

    def __init__(self, generators: Sequence[tuple[str, int]],
                 relations: Sequence[Mapping], nmax: int = DEFAULT_NMAX, name: str = "O"):
        self.generators = tuple((str(g), int(a)) for g, a in generators)
        self.relations = tuple({t: Fraction(c) for t, c in r.items() if c} for r in relations)
        self.nmax = int(nmax)
        self.name = name
        arities = dict(self.generators)
        if len(arities) != len(self.generators):
            raise OperadError("generator names must be distinct")
        for g, a in self.generators:
            if a < 2:
                raise OperadError(
                    f"generator {g!r} has arity {a}; the quotient engine needs arities >= 2")
        for r in self.relations:
            ar = None
            for t in r:
                _check_tree(t, arities)
                leaves = tree_leaves(t)
                if ar is None:
                    ar = len(leaves)
                elif len(leaves) != ar:
                    raise OperadError("relation is not homogeneous in arity")

    def relation_arity(self, r) -> int:
        return len(tree_leaves(next(iter(r))))


def _check_tree(t, arities):
    leaves = tree_leaves(t)
    if sorted(leaves) != list(range(1, len(leaves) + 1)):
        raise OperadError(f"leaves of {tree_to_str(t)} are not a permutation of 1..n")

    def walk(x):
        if isinstance(x, int):
            return
        if x[0] not in arities:
            raise OperadError(f"unknown generator {x[0]!r}")
        if len(x) - 1 != arities[x[0]]:
            raise OperadError(f"generator {x[0]!r} used with {len(x) - 1} inputs")
        for c in x[1:]:
            walk(c)

    walk(t)


_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str, lineno: int) -> list[str]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tok = m.group(1) or m.group(2) or m.group(3)
        if m.group(3) and tok not in "()+-*":
            raise PresentationParseError("unexpected character", lineno, tok)
        toks.append(tok)
        pos = m.end()
    return toks


def _parse_relation(toks: list[str], lineno: int) -> dict:
    pos = 0
    rel: dict = {}

    def peek():
        return toks[pos] if pos < len(toks) else None

    def tree():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise PresentationParseError("unexpected end of relation", lineno)
        if tok == "(":
            pos += 1
            name = peek()
            if name is None or not re.match(r"[A-Za-z_]", name):
                raise PresentationParseError("expected a generator name", lineno, name)
            pos += 1
            kids = []
            while peek() != ")":
                if peek() is None:
                    raise PresentationParseError("unbalanced parenthesis", lineno)
                kids.append(tree())
            pos += 1
            return (name,) + tuple(kids)
        if tok.isdigit():
            pos += 1
            return int(tok)
        raise PresentationParseError("expected a tree", lineno, tok)

    sign = ONE
    first = True
    while pos < len(toks):
        tok = peek()
        if tok in "+-":
            sign = ONE if tok == "+" else -ONE
            pos += 1
        elif not first:
            raise PresentationParseError("expected '+' or '-' between terms", lineno, tok)
        coef = ONE
        tok = peek()
        if tok is not None and re.match(r"\d", tok):
            nxt = toks[pos + 1] if pos + 1 < len(toks) else None
            if "/" in tok or nxt in ("(", "*") or (nxt is not None and re.match(r"\d", nxt)):
                coef = Fraction(tok)
                pos += 1
                if peek() == "*":
                    pos += 1
        t = tree()
        rel[t] = rel.get(t, ZERO) + sign * coef
        sign = ONE
        first = False
    return {t: c for t, c in rel.items() if c}


def parse_presentation(text: str, nmax: int = DEFAULT_NMAX, name: str = "O") -> OperadPresentation:
    """Parse lines ``gen <name> <arity>`` and ``rel <signed sum of trees>``.

    ``#`` starts a comment.  An optional ``name <word>`` line names the operad.
    """
    gens = []
    rels = []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "gen":
            parts = rest.split()
            if len(parts) != 2:
                raise PresentationParseError("expected 'gen <name> <arity>'", lineno, line)
            gname, ar = parts
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", gname):
                raise PresentationParseError("bad generator name", lineno, gname)
            if not ar.isdigit():
                raise PresentationParseError("arity must be a non-negative integer", lineno, ar)
            gens.append((gname, int(ar)))
        elif head == "rel":
            pending.append((lineno, _parse_relation(_tokenize(rest, lineno), lineno)))
        elif head == "name":
            name = rest.strip() or name
        else:
            raise PresentationParseError("unknown directive", lineno, head)
    arities = dict(gens)
    for lineno, rel in pending:
        for t in rel:
            try:
                _check_tree(t, arities)
            except OperadError as exc:
                raise PresentationParseError(str(exc), lineno, tree_to_str(t)) from None
        rels.append(rel)
    try:
        return OperadPresentation(gens, rels, nmax=nmax, name=name)
    except OperadError as exc:
        raise PresentationParseError(str(exc)) from None


# ================================================================ operads

class Operad:
    """Common interface.  Subclasses provide bases and basis-level operations."""

    name = "O"
    reduced = True
    unital_one = True

    def __init__(self, nmax: int):
        self.nmax = int(nmax)
        self._lock = threading.RLock()
        self._memo_partial: dict = {}
        self._memo_act: dict = {}
        self._memo_gamma: dict = {}

    # -- to implement
    def space(self, n: int) -> Space:
        raise NotImplementedError

    def _partial_basis(self, m: int, i: int, k: int, a: int, b: int) -> dict:
        raise NotImplementedError

    def _act_basis(self, p: Perm, n: int, a: int) -> dict:
        raise NotImplementedError

    def unit_index(self) -> int:
        return 0

    def generators(self) -> list["OperadElement"]:
        """A generating set, used by the generator mode of the Leibniz check."""
        raise NotImplementedError

    # -- derived
    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        self._check_arity(n)
        return self.space(n).dim

    def _check_arity(self, n: int) -> None:
        if n > self.nmax:
            raise TruncationError(f"arity {n} exceeds the truncation bound {self.nmax} of {self.name}")

    def partial(self, m: int, i: int, k: int, a: int, b: int) -> dict:
        """Basis-level ``e_a ∘_i e_b`` (inputs numbered from 1)."""
        if not 1 <= i <= m:
            raise OperadError(f"input index {i} out of range for arity {m}")
        self._check_arity(m + k - 1)
        key = (m, i, k, a, b)
        got = self._memo_partial.get(key)
        if got is None:
            if k == 1 and self.unital_one and b == self.unit_index():
                got = {a: ONE}
            elif m == 1 and self.unital_one and a == self.unit_index():
                got = {b: ONE}
            else:
                got = self._partial_basis(m, i, k, a, b)
            self._memo_partial[key] = got
        return got

    def act_basis(self, p: Perm, n: int, a: int) -> dict:
        p = tuple(p)
        if len(p) != n:
            raise OperadError("permutation size does not match arity")
        key = (p, a)
        got = self._memo_act.get(key)
        if got is None:
            if p == identity_perm(n):
                got = {a: ONE}
            else:
                got = self._act_basis(p, n, a)
            self._memo_act[key] = got
        return got

    def act_vec(self, p: Perm, n: int, v: Mapping) -> dict:
        out: dict = {}
        for a, c in v.items():
            vec_iadd(out, self.act_basis(p, n, a), c)
        return out

    def partial_vec(self, m: int, i: int, k: int, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for a, c in x.items():
            for b, d in y.items():
                vec_iadd(out, self.partial(m, i, k, a, b), c * d)
        return out

    def gamma(self, n: int, b: int, kids: tuple) -> dict:
        """Full composite ``γ(e_b; e_{k_1}, .., e_{k_n})`` with ``kids[t] = (arity, index)``."""
        key = (n, b, kids)
        got = self._memo_gamma.get(key)
        if got is not None:
            return got
        cur = {b: ONE}
        arity = n
        unit = self.unit_index() if self.unital_one else None
        # arity-0 inputs first (descending), so intermediate arities never exceed the result
        zeros = [t for t in range(n, 0, -1) if kids[t - 1][0] == 0]
        for t in zeros:
            nxt: dict = {}
            for a, c in cur.items():
                vec_iadd(nxt, self.partial(arity, t, 0, a, kids[t - 1][1]), c)
            cur = nxt
            arity -= 1
        for t in range(n, 0, -1):
            ka, kb = kids[t - 1]
            if ka == 0 or (ka == 1 and kb == unit):
                continue
            pos = t - sum(1 for z in zeros if z < t)
            nxt = {}
            for a, c in cur.items():
                vec_iadd(nxt, self.partial(arity, pos, ka, a, kb), c)
            cur = nxt
            arity += ka - 1
        self._memo_gamma[key] = cur
        return cur

    def gamma_vec(self, n: int, top: Mapping, kids: Sequence[tuple[int, Mapping]]) -> dict:
        out: dict = {}
        supports = [list(v.items()) for _, v in kids]
        for b, c in top.items():
            for combo in product(*supports):
                coef = c
                idx = []
                for (ar, _), (j, d) in zip(kids, combo):
                    coef *= d
                    idx.append((ar, j))
                vec_iadd(out, self.gamma(n, b, tuple(idx)), coef)
        return out

    # -- elements
    def element(self, n: int, coeffs: Mapping | None = None) -> "OperadElement":
        return OperadElement(self, n, coeffs or {})

    def basis_element(self, n: int, a: int) -> "OperadElement":
        return OperadElement(self, n, {a: ONE})

    def unit(self) -> "OperadElement":
        return self.basis_element(1, self.unit_index())

    def basis_label_str(self, n: int, a: int) -> str:
        return str(self.space(n).labels[a])

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} nmax={self.nmax}>"


class OperadElement:
    __slots__ = ("operad", "arity", "coeffs")

    def __init__(self, operad: Operad, arity: int, coeffs: Mapping):
        self.operad = operad
        self.arity = arity
        self.coeffs = {int(k): Fraction(v) for k, v in coeffs.items() if v}

    def _same(self, other: "OperadElement") -> None:
        if other.operad is not self.operad or other.arity != self.arity:
            raise OperadError("elements live in different components")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        vec_iadd(out, other.coeffs)
        return OperadElement(self.operad, self.arity, out)

    def __sub__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        vec_iadd(out, other.coeffs, -ONE)
        return OperadElement(self.operad, self.arity, out)

    def __neg__(self):
        return OperadElement(self.operad, self.arity, vec_scale(self.coeffs, -1))

    def __rmul__(self, c):
        return OperadElement(self.operad, self.arity, vec_scale(self.coeffs, c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperadElement):
            return NotImplemented
        return other.operad is self.operad and other.arity == self.arity and other.coeffs == self.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def compose(self, i: int, other: "OperadElement") -> "OperadElement":
        if other.operad is not self.operad:
            raise OperadError("composition across operads")
        m, k = self.arity, other.arity
        return OperadElement(self.operad, m + k - 1,
                             self.operad.partial_vec(m, i, k, self.coeffs, other.coeffs))

    def act(self, p: Perm) -> "OperadElement":
        return OperadElement(self.operad, self.arity,
                             self.operad.act_vec(tuple(p), self.arity, self.coeffs))

    def to_dict(self) -> dict[str, str]:
        op = self.operad
        return {op.basis_label_str(self.arity, a): fraction_str(c)
                for a, c in sorted(self.coeffs.items())}

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"0[{self.operad.name}({self.arity})]"
        terms = [f"{fraction_str(c)}*{self.operad.basis_label_str(self.arity, a)}"
                 for a, c in sorted(self.coeffs.items())]
        return " + ".join(terms)


def partial_compose(x: OperadElement, i: int, y: OperadElement) -> OperadElement:
    return x.compose(i, y)


def sym_act(p: Perm, x: OperadElement) -> OperadElement:
    return x.act(p)


# ================================================================ presented operads

UNIT_LABEL = "id"


def ordered_partitions(n: int, parts: int) -> list[tuple[tuple[int, ...], ...]]:
    """Ordered set partitions of ``0..n-1`` into ``parts`` nonempty blocks."""
    out = []
    for assign in product(range(parts), repeat=n):
        blocks = [[] for _ in range(parts)]
        for x, b in enumerate(assign):
            blocks[b].append(x)
        if all(blocks):
            out.append(tuple(tuple(b) for b in blocks))
    return out


class PresentedOperad(Operad):
    """Quotient of a free operad by relations, built arity by arity.

    Basis labels at arity ``n >= 2`` are triples
    ``(generator index, blocks, child indices)``: a generator at the root
    whose ``t``-th input carries basis element ``children[t]`` of arity
    ``len(blocks[t])`` on the leaf set ``blocks[t]`` (0-based).
    """

    def __init__(self, presentation: OperadPresentation):
        super().__init__(presentation.nmax)
        self.presentation = presentation
        self.name = presentation.name
        self._gens = presentation.generators
        self._gindex = {g: i for i, (g, _) in enumerate(self._gens)}
        self._spaces: dict[int, Space] = {0: Space(), 1: Space([UNIT_LABEL])}
        self._nf: dict[int, dict] = {}
        self._trees: dict = {}
        for r in presentation.relations:
            if presentation.relation_arity(r) == 1:
                raise OperadError("inconsistent presentation: a relation kills the unit")
        for n in range(2, self.nmax + 1):
            self._build(n)

    def space(self, n: int) -> Space:
        self._check_arity(n)
        if n < 0:
            return Space()
        return self._spaces[n]

    # -- construction
    def _shape_key(self, label):
        g, blocks, kids = label
        return (g, tuple(-len(b) for b in reversed(blocks)), tuple(reversed(kids)),
                tuple(tuple(-x for x in b) for b in blocks))

    def _build(self, n: int) -> None:
        shapes = []
        for gi, (_, ar) in enumerate(self._gens):
            if ar > n:
                continue
            for blocks in ordered_partitions(n, ar):
                ranges = [range(self._spaces[len(b)].dim) for b in blocks]
                for kids in product(*ranges):
                    shapes.append((gi, blocks, kids))
        shapes.sort(key=self._shape_key)
        wspace = Space(shapes)
        rows = []
        for rel in self.presentation.relations:
            ra = self.presentation.relation_arity(rel)
            if ra > n:
                continue
            for blocks in ordered_partitions(n, ra):
                ranges = [range(self._spaces[len(b)].dim) for b in blocks]
                for subs in product(*ranges):
                    row: dict = {}
                    for t, c in rel.items():
                        vec_iadd(row, self._root_value(t, blocks, subs, wspace), c)
                    if row:
                        rows.append(row)
        sub = Subspace.span(wspace, rows)
        qspace, proj, _ = sub.quotient()
        self._spaces[n] = qspace
        self._nf[n] = (wspace, proj)

    def _root_value(self, t, blocks, subs, wspace: Space) -> dict:
        """A relation tree at the root with ``subs`` in its leaves, as a shape vector."""
        kids = [self._sub_value(c, blocks, subs) for c in t[1:]]
        return self._combine(self._gindex[t[0]], kids, wspace=wspace)

    def _sub_value(self, t, blocks, subs):
        if isinstance(t, int):
            return (blocks[t - 1], {subs[t - 1]: ONE})
        kids = [self._sub_value(c, blocks, subs) for c in t[1:]]
        return self._combine(self._gindex[t[0]], kids)

    def _combine(self, gi: int, kids, wspace: Space | None = None):
        """Root generator ``gi`` applied to ``kids = [(leafset, vec)]``.

        Returns the shape vector when ``wspace`` is given, else
        ``(sorted leaves, normal form vector)``.
        """
        leaves = sorted(x for ls, _ in kids for x in ls)
        rank = {x: r for r, x in enumerate(leaves)}
        blocks = tuple(tuple(rank[x] for x in ls) for ls, _ in kids)
        n = len(leaves)
        if wspace is None:
            self._check_arity(n)
            ws, proj = self._nf[n]
        else:
            ws, proj = wspace, None
        out: dict = {}
        for combo in product(*(list(v.items()) for _, v in kids)):
            coef = ONE
            idx = []
            for j, c in combo:
                coef *= c
                idx.append(j)
            w = ws.index((gi, blocks, tuple(idx)))
            if proj is None:
                vec_iadd(out, {w: coef})
            else:
                vec_iadd(out, proj.cols[w], coef)
        if wspace is not None:
            return out
        return (tuple(leaves), out)

    # -- evaluation of trees
    def evaluate(self, t) -> tuple[tuple[int, ...], dict]:
        """Normal form of a tree whose leaves are distinct integers."""
        if isinstance(t, int):
            return ((t,), {0: ONE})
        kids = [self.evaluate(c) for c in t[1:]]
        return self._combine(self._gindex[t[0]], kids)

    def normal_form(self, combo: Mapping) -> OperadElement:
        """Normal form of ``{tree: coefficient}`` with leaves 1..n."""
        out: dict = {}
        n = None
        for t, c in combo.items():
            leaves, v = self.evaluate(t)
            if leaves != tuple(range(1, len(leaves) + 1)):
                raise OperadError("leaves must be 1..n")
            n = len(leaves)
            vec_iadd(out, v, Fraction(c))
        if n is None:
            raise OperadError("empty combination")
        return OperadElement(self, n, out)

    def tree(self, n: int, a: int):
        """The normal-form basis element as a tree with leaves 1..n."""
        key = (n, a)
        got = self._trees.get(key)
        if got is None:
            if n == 1:
                got = 1
            else:
                gi, blocks, kids = self._spaces[n].labels[a]
                parts = []
                for b, k in zip(blocks, kids):
                    sub = self.tree(len(b), k)
                    parts.append(tree_relabel(sub, lambda x, b=b: b[x - 1] + 1))
                got = (self._gens[gi][0],) + tuple(parts)
            self._trees[key] = got
        return got

    def basis_label_str(self, n: int, a: int) -> str:
        return tree_to_str(self.tree(n, a))

    def _partial_basis(self, m, i, k, a, b):
        t = tree_graft(self.tree(m, a), i, self.tree(k, b))
        return self.evaluate(t)[1]

    def _act_basis(self, p, n, a):
        t = tree_relabel(self.tree(n, a), lambda x: p[x - 1] + 1)
        return self.evaluate(t)[1]

    def generator(self, name: str) -> OperadElement:
        ar = dict(self._gens)[name]
        return self.normal_form({(name,) + tuple(range(1, ar + 1)): 1})

    def generators(self) -> list[OperadElement]:
        return [self.generator(g) for g, _ in self._gens]


def build_operad(p: OperadPresentation) -> PresentedOperad:
    if p.nmax < 2:
        raise OperadError("the truncation bound must be at least 2")
    return PresentedOperad(p)


# ================================================================ unital built-ins

class UnitalAssociativeOperad(Operad):
    """Basis of arity ``n``: words listing the variables of a monomial."""

    name = "AssU"
    reduced = False

    def __init__(self, nmax: int = DEFAULT_NMAX):
        super().__init__(nmax)
        self._spaces = {n: Space(permutations(range(n))) for n in range(nmax + 1)}

    def space(self, n):
        self._check_arity(n)
        return self._spaces[n]

    def unit_index(self):
        return 0

    def _partial_basis(self, m, i, k, a, b):
        w = self._spaces[m].labels[a]
        v = self._spaces[k].labels[b]
        out = []
        for x in w:
            if x < i - 1:
                out.append(x)
            elif x > i - 1:
                out.append(x + k - 1)
            else:
                out.extend(y + i - 1 for y in v)
        return {self._spaces[m + k - 1].index(tuple(out)): ONE}

    def _act_basis(self, p, n, a):
        w = self._spaces[n].labels[a]
        return {self._spaces[n].index(tuple(p[x] for x in w)): ONE}

    def word(self, *letters: int) -> OperadElement:
        """Monomial ``x_{l1} x_{l2} ..`` with 1-based letters."""
        w = tuple(x - 1 for x in letters)
        return self.basis_element(len(w), self._spaces[len(w)].index(w))

    def product(self) -> OperadElement:
        return self.word(1, 2)

    def generators(self):
        return [self.product(), self.element(0, {0: ONE})]

    def basis_label_str(self, n, a):
        w = self._spaces[n].labels[a]
        return "".join(f"x{x + 1}" for x in w) if w else "1"


class UnitalCommutativeOperad(Operad):
    name = "ComU"
    reduced = False

    def __init__(self, nmax: int = DEFAULT_NMAX):
        super().__init__(nmax)
        self._spaces = {n: Space([("c", n)]) for n in range(nmax + 1)}

    def space(self, n):
        self._check_arity(n)
        return self._spaces[n]

    def _partial_basis(self, m, i, k, a, b):
        return {0: ONE}

    def _act_basis(self, p, n, a):
        return {0: ONE}

    def product(self) -> OperadElement:
        return self.basis_element(2, 0)

    def generators(self):
        return [self.product(), self.element(0, {0: ONE})]

    def basis_label_str(self, n, a):
        return f"c{n}"


LIE_TEXT = """\
name Lie
gen b 2
rel (b 1 2) + (b 2 1)
rel (b (b 1 2) 3) + (b (b 2 3) 1) + (b (b 3 1) 2)
"""

LEIB_TEXT = """\
name Leib
gen b 2
rel (b (b 1 2) 3) - (b (b 1 3) 2) - (b 1 (b 2 3))
"""

IDENTITY_TEXT = "name I\n"

_ALIASES = {"i": "I", "lie": "Lie", "leib": "Leib", "assu": "AssU", "comu": "ComU"}
_BUILTIN_CACHE: dict = {}
_BUILTIN_LOCK = threading.Lock()


def builtin(name: str, nmax: int = DEFAULT_NMAX) -> Operad:
    """One of ``I, Lie, Leib, AssU, ComU`` (case-insensitive), cached per bound."""
    canon = _ALIASES.get(name.lower())
    if canon is None:
        raise OperadError(f"unknown operad {name!r}")
    key = (canon, nmax)
    with _BUILTIN_LOCK:
        got = _BUILTIN_CACHE.get(key)
        if got is None:
            if canon == "AssU":
                got = UnitalAssociativeOperad(nmax)
            elif canon == "ComU":
                got = UnitalCommutativeOperad(nmax)
            else:
                text = {"I": IDENTITY_TEXT, "Lie": LIE_TEXT, "Leib": LEIB_TEXT}[canon]
                got = build_operad(parse_presentation(text, nmax=max(nmax, 2), name=canon))
                got.nmax = nmax if canon != "I" else max(nmax, 1)
            _BUILTIN_CACHE[key] = got
    return got


# ================================================================ morphisms

class OperadMorphism:
    """Per-arity linear maps compatible with compositions and symmetric actions."""

    def __init__(self, source: Operad, target: Operad, maps: Mapping[int, LinMap],
                 name: str = "phi"):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        self.name = name

    def map(self, n: int) -> LinMap:
        got = self.maps.get(n)
        if got is None:
            raise TruncationError(f"morphism not computed in arity {n}")
        return got

    def apply(self, x: OperadElement) -> OperadElement:
        return OperadElement(self.target, x.arity, self.map(x.arity)(x.coeffs))

    def apply_basis(self, n: int, a: int) -> dict:
        return self.map(n).cols[a]

    @property
    def nmax(self) -> int:
        return max(self.maps)


def evaluate_in(target: Operad, tree, images: Mapping[str, OperadElement]):
    """Value of a tree in ``target`` with each generator replaced by its image.

    Returns ``(sorted leaves, vector over target(len(leaves)))``.
    """
    if isinstance(tree, int):
        return ((tree,), {target.unit_index(): ONE})
    kids = [evaluate_in(target, c, images) for c in tree[1:]]
    top = images[tree[0]]
    block = [x for ls, _ in kids for x in ls]
    total = sum(len(ls) for ls, _ in kids)
    v = target.gamma_vec(top.arity, top.coeffs, [(len(ls), vec) for ls, vec in kids])
    pi = standardization(block)
    if pi != identity_perm(total):
        v = target.act_vec(pi, total, v)
    return (tuple(sorted(block)), v)


def morphism(source: PresentedOperad, target: Operad,
             images: Mapping[str, OperadElement], name: str = "phi") -> OperadMorphism:
    """Morphism out of a presented operad determined by generator images."""
    if not isinstance(source, PresentedOperad):
        raise OperadError("generator images determine morphisms only out of presented operads")
    arities = dict(source.presentation.generators)
    for g, ar in arities.items():
        img = images.get(g)
        if img is None:
            raise OperadError(f"no image given for generator {g!r}")
        if img.operad is not target or img.arity != ar:
            raise OperadError(f"image of {g!r} must be an arity-{ar} element of {target.name}")
    for rel in source.presentation.relations:
        out: dict = {}
        n = None
        for t, c in rel.items():
            leaves, v = evaluate_in(target, t, images)
            n = len(leaves)
            vec_iadd(out, v, c)
        if out:
            bad = OperadElement(target, n, out)
            raise OperadError(f"relation not preserved; its image is {bad!r}")
    top = min(source.nmax, target.nmax)
    maps = {}
    for n in range(0, top + 1):
        src = source.space(n)
        cols = [evaluate_in(target, source.tree(n, a), images)[1] for a in range(src.dim)]
        maps[n] = LinMap(src, target.space(n), cols)
    return OperadMorphism(source, target, maps, name=name)


def identity_morphism(op: Operad) -> OperadMorphism:
    return OperadMorphism(op, op, {n: LinMap.identity(op.space(n)) for n in range(op.nmax + 1)},
                          name="id")


def augmentation(op: Operad) -> OperadMorphism:
    if not (op.reduced and op.unital_one):
        raise OperadError(f"{op.name} is not reduced with a one-dimensional arity-one part")
    ident = builtin("I", max(op.nmax, 1))
    maps = {}
    for n in range(op.nmax + 1):
        if n == 1:
            maps[n] = LinMap(op.space(1), ident.space(1), [{0: ONE}])
        else:
            maps[n] = LinMap.zero(op.space(n), ident.space(n))
    return OperadMorphism(op, ident, maps, name="augmentation")


def forget_to_commutative(nmax: int = DEFAULT_NMAX) -> OperadMorphism:
    """``AssU -> ComU`` sending every monomial to the commutative one."""
    src = builtin("AssU", nmax)
    tgt = builtin("ComU", nmax)
    maps = {n: LinMap(src.space(n), tgt.space(n), [{0: ONE}] * src.dim(n))
            for n in range(nmax + 1)}
    return OperadMorphism(src, tgt, maps, name="forget")


def lie_to_assu(nmax: int = DEFAULT_NMAX) -> OperadMorphism:
    lie = builtin("Lie", nmax)
    ass = builtin("AssU", nmax)
    return morphism(lie, ass, {"b": ass.word(1, 2) - ass.word(2, 1)}, name="lie_to_assu")


def leib_to_lie(nmax: int = DEFAULT_NMAX) -> OperadMorphism:
    leib = builtin("Leib", nmax)
    lie = builtin("Lie", nmax)
    return morphism(leib, lie, {"b": lie.generator("b")}, name="leib_to_lie")


def default_mu(op: Operad) -> OperadElement:
    """The distinguished binary operation: the generator or the product."""
    if isinstance(op, PresentedOperad):
        binary = [g for g, a in op.presentation.generators if a == 2]
        if len(binary) != 1:
            raise OperadError(f"{op.name} has no unique binary generator")
        return op.generator(binary[0])
    if isinstance(op, (UnitalAssociativeOperad, UnitalCommutativeOperad)):
        return op.product()
    raise OperadError(f"no default binary operation for {op.name}")


# ================================================================ axiom checks

def check_operad_axioms(op: Operad, nmax: int | None = None) -> list[str]:
    """Exhaustive check of unit, equivariance and both associativity laws.

    Returns a list of failure descriptions (empty when every axiom holds).
    """
    top = op.nmax if nmax is None else nmax
    fails = []
    lo = 0 if not op.reduced else 1
    dims = {n: op.dim(n) for n in range(lo, top + 1)}
    unit = op.unit_index()
    # unit laws
    for n in range(lo, top + 1):
        for a in range(dims[n]):
            if op.partial(1, 1, n, unit, a) != {a: ONE}:
                fails.append(f"left unit on arity {n} basis {a}")
            for i in range(1, n + 1):
                if op.partial(n, i, 1, a, unit) != {a: ONE}:
                    fails.append(f"right unit at input {i} on arity {n} basis {a}")
    # group action
    for n in range(lo, min(top, 4) + 1):
        perms = list(permutations(range(n)))
        for a in range(dims[n]):
            for p in perms:
                for q in perms:
                    lhs = op.act_vec(p, n, op.act_basis(q, n, a))
                    if lhs != op.act_basis(perm_compose(p, q), n, a):
                        fails.append(f"action law arity {n}")
                        break
    # associativity and equivariance of partial compositions
    arities = range(lo, top + 1)
    for m in arities:
        if m == 0:
            continue
        for k in arities:
            if not lo <= m + k - 1 <= top:
                continue
            for l in arities:
                if k == 0 or not lo <= m + k + l - 2 <= top:
                    continue
                for a in range(dims[m]):
                    for b in range(dims[k]):
                        for c in range(dims[l]):
                            fails.extend(_assoc_fail(op, m, k, l, a, b, c))
            for a in range(dims[m]):
                for b in range(dims[k]):
                    fails.extend(_equivariance_fail(op, m, k, a, b))
    return fails


def _assoc_fail(op, m, k, l, a, b, c):
    out = []
    for i in range(1, m + 1):
        # sequential: (x ∘_i y) ∘_{i+j-1} z = x ∘_i (y ∘_j z)
        xy = op.partial(m, i, k, a, b)
        for j in range(1, k + 1):
            lhs = op.partial_vec(m + k - 1, i + j - 1, l, xy, {c: ONE})
            rhs = op.partial_vec(m, i, k + l - 1, {a: ONE}, op.partial(k, j, l, b, c))
            if lhs != rhs:
                out.append(f"sequential associativity ({m},{k},{l}) i={i} j={j}")
        # parallel: (x ∘_i y) ∘_{j+k-1} z = (x ∘_j z) ∘_i y for i < j
        for j in range(i + 1, m + 1):
            lhs = op.partial_vec(m + k - 1, j + k - 1, l, xy, {c: ONE})
            xz = op.partial(m, j, l, a, c)
            rhs = op.partial_vec(m + l - 1, i, k, xz, {b: ONE})
            if lhs != rhs:
                out.append(f"parallel associativity ({m},{k},{l}) i={i} j={j}")
    return out


def _equivariance_fail(op, m, k, a, b):
    """Checks ``act(p, x) ∘_i y = act(σ, x ∘_s y)`` with ``s = p⁻¹(i)`` and the
    analogous rule for acting on the second argument."""
    out = []
    n = m + k - 1
    for p in permutations(range(m)):
        xa = op.act_basis(p, m, a)
        inv = [0] * m
        for t, x in enumerate(p):
            inv[x] = t
        for i in range(1, m + 1):
            lhs = op.partial_vec(m, i, k, xa, {b: ONE})
            s = inv[i - 1] + 1
            rhs = op.act_vec(block_perm(p, s, k), n, op.partial(m, s, k, a, b))
            if lhs != rhs:
                out.append(f"equivariance in first slot ({m},{k}) p={p} i={i}")
    for q in permutations(range(k)):
        yb = op.act_basis(q, k, b)
        for i in range(1, m + 1):
            lhs = op.partial_vec(m, i, k, {a: ONE}, yb)
            rhs = op.act_vec(insert_perm(m, i, q), n, op.partial(m, i, k, a, b))
            if lhs != rhs:
                out.append(f"equivariance in second slot ({m},{k}) q={q} i={i}")
    return out


def block_perm(p: Perm, s: int, k: int) -> Perm:
    """The permutation ``σ`` with ``act(p, x) ∘_{p(s)} y = act(σ, x ∘_s y)``
    for ``y`` of arity ``k``."""
    m = len(p)
    i = p[s - 1] + 1
    out = []
    for t in range(1, m + 1):
        if t == s:
            out.extend(i - 1 + r for r in range(k))
        else:
            j = p[t - 1] + 1
            out.append(j - 1 if j < i else j + k - 2)
    return tuple(out)


def insert_perm(m: int, i: int, q: Perm) -> Perm:
    k = len(q)
    out = list(range(i - 1))
    out.extend(i - 1 + x for x in q)
    out.extend(range(i - 1 + k, m + k - 1))
    return tuple(out)
