"""Exact linear algebra over the rationals on spaces with labelled bases.

Vectors are sparse dicts ``{basis index: Fraction}``.  Maps store their
columns sparsely.  Row reduction is done on primitive integer rows and only
normalised to rationals at the end, with pivots always chosen as the first
nonzero position in basis order, so every kernel, image and quotient basis
is reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

Vec = dict  # sparse vector: basis index -> Fraction
Perm = tuple  # 0-based images, p[i] = image of i

ONE = Fraction(1)
ZERO = Fraction(0)


class LinearAlgebraError(ValueError):
    pass


# ---------------------------------------------------------------- vectors

def vec_add(u: Mapping[int, Fraction], v: Mapping[int, Fraction], scale=ONE) -> Vec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, ZERO) + scale * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(acc: dict, v: Mapping, scale=ONE) -> None:
    """In-place ``acc += scale * v``, dropping zeros."""
    for k, x in v.items():
        y = acc.get(k, ZERO) + scale * x
        if y:
            acc[k] = y
        else:
            del acc[k]


def vec_scale(v: Mapping[int, Fraction], c) -> Vec:
    c = Fraction(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def clean(v: Mapping) -> Vec:
    return {k: Fraction(x) for k, x in v.items() if x}


# ---------------------------------------------------------------- spaces

class Space:
    """Finite-dimensional space given by an ordered tuple of distinct labels."""

    __slots__ = ("labels", "_index", "_hash")

    def __init__(self, labels: Iterable[Hashable] = ()):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise LinearAlgebraError("basis labels must be distinct")
        self._hash = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def get_index(self, label):
        return self._index.get(label)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, Space) and self.labels == other.labels

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.labels)
        return self._hash

    def __repr__(self) -> str:
        return f"Space(dim={self.dim})"

    def basis_vector(self, label) -> Vec:
        return {self._index[label]: ONE}


def direct_sum_space(spaces: Sequence[Space]) -> Space:
    return Space((k, lab) for k, sp in enumerate(spaces) for lab in sp.labels)


def tensor_space(a: Space, b: Space) -> Space:
    return Space((x, y) for x in a.labels for y in b.labels)


# ---------------------------------------------------------------- maps

class LinMap:
    """Linear map with sparse column storage; ``cols[j]`` is the image of basis j."""

    __slots__ = ("domain", "codomain", "cols")

    def __init__(self, domain: Space, codomain: Space, cols: Iterable[Mapping[int, Fraction]]):
        self.domain = domain
        self.codomain = codomain
        self.cols = tuple(cols)
        if len(self.cols) != domain.dim:
            raise LinearAlgebraError("column count does not match domain dimension")

    # constructors
    @classmethod
    def zero(cls, domain: Space, codomain: Space) -> "LinMap":
        return cls(domain, codomain, ({} for _ in range(domain.dim)))

    @classmethod
    def identity(cls, space: Space) -> "LinMap":
        return cls(space, space, ({i: ONE} for i in range(space.dim)))

    @classmethod
    def from_rows(cls, domain: Space, codomain: Space, rows: Sequence[Sequence]) -> "LinMap":
        if len(rows) != codomain.dim or any(len(r) != domain.dim for r in rows):
            raise LinearAlgebraError("dense matrix has the wrong shape")
        cols = [{i: Fraction(rows[i][j]) for i in range(codomain.dim) if rows[i][j]}
                for j in range(domain.dim)]
        return cls(domain, codomain, cols)

    @classmethod
    def from_function(cls, domain: Space, codomain: Space,
                      image: Callable[[Hashable], Mapping[Hashable, Fraction]]) -> "LinMap":
        """Build from ``image(domain label) -> {codomain label: coefficient}``."""
        cols = []
        for lab in domain.labels:
            col: dict = {}
            for tlab, c in image(lab).items():
                if c:
                    vec_iadd(col, {codomain.index(tlab): Fraction(c)})
            cols.append(col)
        return cls(domain, codomain, cols)

    # evaluation and algebra
    def __call__(self, v: Mapping[int, Fraction]) -> Vec:
        out: dict = {}
        for j, x in v.items():
            col = self.cols[j]
            for i, y in col.items():
                z = out.get(i, ZERO) + x * y
                if z:
                    out[i] = z
                else:
                    del out[i]
        return out

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if other.codomain.dim != self.domain.dim:
            raise LinearAlgebraError("composition of maps with mismatched spaces")
        return LinMap(other.domain, self.codomain, (self(c) for c in other.cols))

    def __add__(self, other: "LinMap") -> "LinMap":
        self._check_same_shape(other)
        return LinMap(self.domain, self.codomain,
                      (vec_add(a, b) for a, b in zip(self.cols, other.cols)))

    def __sub__(self, other: "LinMap") -> "LinMap":
        self._check_same_shape(other)
        return LinMap(self.domain, self.codomain,
                      (vec_add(a, b, -ONE) for a, b in zip(self.cols, other.cols)))

    def __neg__(self) -> "LinMap":
        return LinMap(self.domain, self.codomain, (vec_scale(c, -1) for c in self.cols))

    def __rmul__(self, c) -> "LinMap":
        return LinMap(self.domain, self.codomain, (vec_scale(col, c) for col in self.cols))

    def _check_same_shape(self, other: "LinMap") -> None:
        if self.domain.dim != other.domain.dim or self.codomain.dim != other.codomain.dim:
            raise LinearAlgebraError("maps of different shapes")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.domain.dim == other.domain.dim
                and self.codomain.dim == other.codomain.dim
                and all(a == b for a, b in zip(self.cols, other.cols)))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.codomain.dim, self.domain.dim)

    def rows(self) -> list[dict]:
        rows: list[dict] = [dict() for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                rows[i][j] = x
        return rows

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[ZERO] * self.domain.dim for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                dense[i][j] = x
        return dense

    def transpose(self) -> "LinMap":
        return LinMap(self.codomain, self.domain, self.rows())

    def rank(self) -> int:
        return len(_echelon(self.cols, reduce_fully=False))

    def trace(self) -> Fraction:
        if self.domain.dim != self.codomain.dim:
            raise LinearAlgebraError("trace of a non-square map")
        return sum((col.get(j, ZERO) for j, col in enumerate(self.cols)), ZERO)

    def restrict(self, domain: "Subspace") -> "LinMap":
        return self @ domain.inclusion

    def with_spaces(self, domain: Space, codomain: Space) -> "LinMap":
        """Same matrix, relabelled spaces of equal dimensions."""
        if domain.dim != self.domain.dim or codomain.dim != self.codomain.dim:
            raise LinearAlgebraError("relabelling must preserve dimensions")
        return LinMap(domain, codomain, self.cols)

    def __repr__(self) -> str:
        return f"LinMap({self.codomain.dim}x{self.domain.dim})"


def block_diagonal(maps: Sequence[LinMap], domain: Space | None = None,
                   codomain: Space | None = None) -> LinMap:
    domain = domain or direct_sum_space([f.domain for f in maps])
    codomain = codomain or direct_sum_space([f.codomain for f in maps])
    cols = []
    offset = 0
    for f in maps:
        cols.extend({i + offset: x for i, x in c.items()} for c in f.cols)
        offset += f.codomain.dim
    return LinMap(domain, codomain, cols)


def hstack(maps: Sequence[LinMap], codomain: Space | None = None) -> LinMap:
    """The map out of a direct sum given by its components."""
    if not maps:
        raise LinearAlgebraError("empty stack")
    domain = direct_sum_space([f.domain for f in maps])
    cols = [c for f in maps for c in f.cols]
    return LinMap(domain, codomain or maps[0].codomain, cols)


def vstack(maps: Sequence[LinMap], domain: Space | None = None) -> LinMap:
    """The map into a direct sum given by its components."""
    codomain = direct_sum_space([f.codomain for f in maps])
    dom = domain or maps[0].domain
    cols = []
    for j in range(dom.dim):
        col = {}
        offset = 0
        for f in maps:
            for i, x in f.cols[j].items():
                col[i + offset] = x
            offset += f.codomain.dim
        cols.append(col)
    return LinMap(dom, codomain, cols)


def kron(f: LinMap, g: LinMap, domain: Space | None = None,
         codomain: Space | None = None) -> LinMap:
    """Tensor product of maps on the ``(a, b)`` product bases."""
    domain = domain or tensor_space(f.domain, g.domain)
    codomain = codomain or tensor_space(f.codomain, g.codomain)
    nb = g.codomain.dim
    cols = []
    for cf in f.cols:
        for cg in g.cols:
            cols.append({i * nb + k: x * y for i, x in cf.items() for k, y in cg.items()})
    return LinMap(domain, codomain, cols)


# ---------------------------------------------------------------- elimination

def _primitive(v: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for x in v.values():
        d = x.denominator if isinstance(x, Fraction) else 1
        den = den * d // gcd(den, d)
    row = {k: int(x * den) for k, x in v.items() if x}
    return _content_free(row)


def _content_free(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)] if row else 1
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: x // g for k, x in row.items()}
    return row


def _eliminate(row: dict[int, int], piv: dict[int, int], p: int) -> dict[int, int]:
    a, b = row[p], piv[p]
    g = gcd(a, b)
    fa, fb = a // g, b // g
    out = {k: fb * x for k, x in row.items()} if fb != 1 else dict(row)
    for k, x in piv.items():
        y = out.get(k, 0) - fa * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return _content_free(out) if out else out


class _Reducer:
    """Incremental fraction-free echelon form keyed by leading index."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}

    def reduce(self, row: dict[int, int]) -> dict[int, int]:
        rows = self.rows
        while row:
            p = min(row)
            piv = rows.get(p)
            if piv is None:
                return row
            row = _eliminate(row, piv, p)
        return row

    def add(self, v: Mapping[int, Fraction]) -> bool:
        row = self.reduce(_primitive(v))
        if not row:
            return False
        self.rows[min(row)] = row
        return True

    def rref(self) -> dict[int, Vec]:
        pivots = sorted(self.rows)
        done: dict[int, dict[int, int]] = {}
        for p in reversed(pivots):
            row = self.rows[p]
            for q in sorted(k for k in row if k != p and k in done):
                if q in row:
                    row = _eliminate(row, done[q], q)
            done[p] = row
        return {p: {k: Fraction(x, done[p][p]) for k, x in done[p].items()} for p in pivots}


def _echelon(vectors: Iterable[Mapping[int, Fraction]], reduce_fully=True) -> dict[int, Vec]:
    red = _Reducer()
    for v in vectors:
        if v:
            red.add(v)
    if reduce_fully:
        return red.rref()
    return red.rows


def rank(f: LinMap) -> int:
    return f.rank()


def rank_of_vectors(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    return len(_echelon(vectors, reduce_fully=False))


# ---------------------------------------------------------------- subspaces

class Subspace:
    """Subspace of ``ambient`` with a basis adapted to a set of key positions.

    Basis vector ``j`` has coefficient 1 at ``keys[j]`` and 0 at every other
    key, so coordinates of a member are read off at the keys.
    """

    __slots__ = ("ambient", "keys", "vectors", "space", "_inclusion", "_quotient")

    def __init__(self, ambient: Space, keys: Sequence[int], vectors: Sequence[Vec],
                 labels: Sequence[Hashable] | None = None):
        self.ambient = ambient
        self.keys = tuple(keys)
        self.vectors = tuple(vectors)
        self.space = Space(labels if labels is not None else (ambient.labels[k] for k in self.keys))
        self._inclusion = None
        self._quotient = None

    @classmethod
    def span(cls, ambient: Space, vectors: Iterable[Mapping[int, Fraction]]) -> "Subspace":
        ech = _echelon(vectors)
        keys = sorted(ech)
        return cls(ambient, keys, [ech[k] for k in keys])

    @classmethod
    def whole(cls, ambient: Space) -> "Subspace":
        return cls(ambient, range(ambient.dim), [{i: ONE} for i in range(ambient.dim)])

    @classmethod
    def zero(cls, ambient: Space) -> "Subspace":
        return cls(ambient, (), ())

    @property
    def dim(self) -> int:
        return len(self.keys)

    @property
    def inclusion(self) -> LinMap:
        if self._inclusion is None:
            self._inclusion = LinMap(self.space, self.ambient, self.vectors)
        return self._inclusion

    def coords(self, v: Mapping[int, Fraction]) -> Vec:
        """Coordinates of a vector assumed to lie in the subspace."""
        out = {}
        for j, k in enumerate(self.keys):
            x = v.get(k)
            if x:
                out[j] = x
        return out

    def residue(self, v: Mapping[int, Fraction]) -> Vec:
        r = dict(v)
        for j, k in enumerate(self.keys):
            x = v.get(k)
            if x:
                vec_iadd(r, self.vectors[j], -x)
        return r

    def contains(self, v: Mapping[int, Fraction]) -> bool:
        return not self.residue(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def coords_map(self, f: LinMap, source: "Subspace | Space") -> LinMap:
        """Express ``f`` restricted to ``source`` as a map into this subspace."""
        if isinstance(source, Subspace):
            cols = [self.coords(f(v)) for v in source.vectors]
            dom = source.space
        else:
            cols = [self.coords(c) for c in f.cols]
            dom = source
        return LinMap(dom, self.space, cols)

    def quotient(self) -> tuple[Space, LinMap, LinMap]:
        """The quotient ambient/self: (space, projection, section).

        The quotient basis consists of the non-key ambient labels; the
        section sends each to the corresponding ambient basis vector.
        """
        if self._quotient is None:
            keyset = set(self.keys)
            rest = [i for i in range(self.ambient.dim) if i not in keyset]
            pos = {i: t for t, i in enumerate(rest)}
            qspace = Space(self.ambient.labels[i] for i in rest)
            cols: list[dict] = [None] * self.ambient.dim
            for i in rest:
                cols[i] = {pos[i]: ONE}
            for j, k in enumerate(self.keys):
                cols[k] = {pos[i]: -x for i, x in self.vectors[j].items() if i != k}
            proj = LinMap(self.ambient, qspace, cols)
            sec = LinMap(qspace, self.ambient, ({i: ONE} for i in rest))
            self._quotient = (qspace, proj, sec)
        return self._quotient

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.ambient.dim})"


class SpanBuilder:
    """Growing span with cheap membership tests, used for closure computations."""

    def __init__(self, ambient: Space):
        self.ambient = ambient
        self._red = _Reducer()

    def add(self, v: Mapping[int, Fraction]) -> bool:
        if not v:
            return False
        return self._red.add(v)

    @property
    def dim(self) -> int:
        return len(self._red.rows)

    def subspace(self) -> Subspace:
        ech = self._red.rref()
        keys = sorted(ech)
        return Subspace(self.ambient, keys, [ech[k] for k in keys])


def kernel_subspace(f: LinMap) -> Subspace:
    ech = _echelon(r for r in f.rows() if r)
    pivots = set(ech)
    free = [j for j in range(f.domain.dim) if j not in pivots]
    vectors = []
    for c in free:
        v = {c: ONE}
        for p, row in ech.items():
            x = row.get(c)
            if x:
                v[p] = -x
        vectors.append(v)
    return Subspace(f.domain, free, vectors)


def image_subspace(f: LinMap) -> Subspace:
    return Subspace.span(f.codomain, f.cols)


def kernel(f: LinMap) -> tuple[Space, LinMap]:
    sub = kernel_subspace(f)
    return sub.space, sub.inclusion


def cokernel(f: LinMap) -> tuple[Space, LinMap]:
    space, proj, _ = image_subspace(f).quotient()
    return space, proj


def solve(f: LinMap, b: Mapping[int, Fraction]) -> Vec | None:
    """Some x with f(x) = b, or None if b is not in the image."""
    red = _Reducer()
    # augment every column with a tag entry recording which column it is
    n = f.codomain.dim
    tagged = []
    for j, c in enumerate(f.cols):
        v = dict(c)
        v[n + j] = ONE
        tagged.append(v)
    for v in tagged:
        red.add(v)
    ech = red.rref()
    target = dict(b)
    combo: dict = {}
    for p in sorted(ech):
        if p >= n:
            break
        x = target.get(p)
        if x:
            row = ech[p]
            vec_iadd(target, {k: v for k, v in row.items() if k < n}, -x)
            vec_iadd(combo, {k - n: v for k, v in row.items() if k >= n}, x)
    if target:
        return None
    return combo


def is_injective(f: LinMap) -> bool:
    return f.rank() == f.domain.dim


def is_surjective(f: LinMap) -> bool:
    return f.rank() == f.codomain.dim


def is_isomorphism(f: LinMap) -> bool:
    return f.domain.dim == f.codomain.dim and f.rank() == f.domain.dim


def inverse(f: LinMap) -> LinMap:
    if not is_isomorphism(f):
        raise LinearAlgebraError("map is not invertible")
    cols = []
    for i in range(f.codomain.dim):
        x = solve(f, {i: ONE})
        cols.append(x)
    return LinMap(f.codomain, f.domain, cols)


def invariant_trace(g: LinMap, sub: Subspace) -> Fraction:
    """Trace of ``g`` on a ``g``-stable subspace."""
    total = ZERO
    for j, v in enumerate(sub.vectors):
        total += g(v).get(sub.keys[j], ZERO)
    return total


# ---------------------------------------------------------------- permutations

def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p ∘ q``."""
    return tuple(p[x] for x in q)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def transposition(n: int, i: int, j: int | None = None) -> Perm:
    """Swap of ``i`` and ``j`` (default ``i+1``), 0-based."""
    j = i + 1 if j is None else j
    p = list(range(n))
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def adjacent_word(p: Perm) -> list[int]:
    """Indices ``i`` with ``p = s_{i1} ∘ s_{i2} ∘ ...`` and ``s_i`` swapping i, i+1."""
    arr = list(p)
    word = []
    # bubble sort arr into identity; each swap right-multiplies by s_i
    n = len(arr)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i)
                changed = True
    # p ∘ s_{w1} ∘ ... ∘ s_{wk} = id, hence p = s_{wk} ∘ ... ∘ s_{w1}
    return word[::-1]


def all_perms(n: int) -> Iterator[Perm]:
    return permutations(range(n))


def perm_sign(p: Perm) -> int:
    return -1 if len(adjacent_word(p)) % 2 else 1


def standardization(seq: Sequence[int]) -> Perm:
    """``π`` with ``π[t]`` = rank of ``seq[t]`` among the entries of ``seq``."""
    order = sorted(seq)
    rank_of = {x: r for r, x in enumerate(order)}
    return tuple(rank_of[x] for x in seq)


def cycle_type(p: Perm) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                k += 1
            lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def class_representatives(n: int) -> list[Perm]:
    reps: dict = {}
    for p in all_perms(n):
        reps.setdefault(cycle_type(p), p)
    return [reps[k] for k in sorted(reps)]


# ---------------------------------------------------------------- Σ_n actions

class SymAction:
    """A left action of the symmetric group on ``space`` given by the
    adjacent transpositions ``s_1 .. s_{n-1}``."""

    def __init__(self, space: Space, n: int, generators: Sequence[LinMap]):
        if len(generators) != max(n - 1, 0):
            raise LinearAlgebraError("need one generator per adjacent transposition")
        self.space = space
        self.n = n
        self.generators = tuple(generators)
        self._cache: dict = {}

    @classmethod
    def from_function(cls, space: Space, n: int, act: Callable[[Perm], LinMap]) -> "SymAction":
        return cls(space, n, [act(transposition(n, i)) for i in range(n - 1)])

    @classmethod
    def trivial(cls, space: Space, n: int) -> "SymAction":
        return cls(space, n, [LinMap.identity(space)] * max(n - 1, 0))

    def matrix(self, p: Perm) -> LinMap:
        p = tuple(p)
        if len(p) != self.n:
            raise LinearAlgebraError("permutation of the wrong size")
        got = self._cache.get(p)
        if got is None:
            got = LinMap.identity(self.space)
            for i in reversed(adjacent_word(p)):
                got = self.generators[i] @ got
            self._cache[p] = got
        return got

    def check_coxeter(self) -> bool:
        gens = self.generators
        ident = LinMap.identity(self.space)
        for i, s in enumerate(gens):
            if s @ s != ident:
                return False
            for j in range(i + 1, len(gens)):
                t = gens[j]
                if j == i + 1:
                    if s @ t @ s != t @ s @ t:
                        return False
                elif s @ t != t @ s:
                    return False
        return True

    def character(self, p: Perm) -> Fraction:
        return self.matrix(p).trace()


def tensor_actions(a: SymAction, b: SymAction) -> tuple[Space, Callable[[Perm, Perm], LinMap]]:
    """``A ⊗ B`` with the block action of ``Σ_{n1} × Σ_{n2}``."""
    space = tensor_space(a.space, b.space)

    def act(p1: Perm, p2: Perm) -> LinMap:
        return kron(a.matrix(p1), b.matrix(p2), space, space)

    return space, act


def shuffle_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


def coset_factor(sigma: Perm, subset: Sequence[int]) -> tuple[tuple[int, ...], Perm]:
    """For ``σ`` and a subset ``c`` return ``(σ(c) sorted, π)`` with
    ``σ ∘ ι_c = ι_{σ(c)} ∘ π`` for the increasing injections ``ι``."""
    image = tuple(sorted(sigma[x] for x in subset))
    pos = {x: t for t, x in enumerate(image)}
    return image, tuple(pos[sigma[x]] for x in subset)


def induce(space: Space, n1: int, n2: int,
           block_action: Callable[[Perm, Perm], LinMap]) -> tuple[Space, Callable[[Perm], LinMap]]:
    """Induction from ``Σ_{n1} × Σ_{n2}`` to ``Σ_n``.

    Basis labels are ``(c, a)`` with ``c`` an ``n1``-subset of ``0..n-1``
    (the coset of the order-preserving shuffle) and ``a`` a label of ``space``.
    """
    n = n1 + n2
    subsets = shuffle_subsets(n, n1)
    ind = Space((c, a) for c in subsets for a in space.labels)
    dim_a = space.dim
    cpos = {c: t for t, c in enumerate(subsets)}

    def act(sigma: Perm) -> LinMap:
        sigma = tuple(sigma)
        cols: list = [None] * ind.dim
        for t, c in enumerate(subsets):
            comp = tuple(x for x in range(n) if x not in c)
            image, p1 = coset_factor(sigma, c)
            _, p2 = coset_factor(sigma, comp)
            block = block_action(p1, p2)
            off = cpos[image] * dim_a
            for j, col in enumerate(block.cols):
                cols[t * dim_a + j] = {off + i: x for i, x in col.items()}
        return LinMap(ind, ind, cols)

    return ind, act


def coinvariants(space: Space, generators: Sequence[LinMap]) -> tuple[Space, LinMap]:
    """Quotient of ``space`` by the span of ``g(v) - v`` over the generators."""
    sub = coinvariant_relations(space, generators)
    qspace, proj, _ = sub.quotient()
    return qspace, proj


def coinvariant_relations(space: Space, generators: Sequence[LinMap]) -> Subspace:
    for g in generators:
        if g.domain.dim != space.dim or not is_isomorphism(g):
            raise LinearAlgebraError("coinvariants need invertible generators")
    rel = []
    for g in generators:
        for j, col in enumerate(g.cols):
            rel.append(vec_add(col, {j: ONE}, -ONE))
    return Subspace.span(space, rel)


def averaging_operator(action: SymAction) -> LinMap:
    total = LinMap.zero(action.space, action.space)
    count = 0
    for p in all_perms(action.n):
        total = total + action.matrix(p)
        count += 1
    return Fraction(1, count) * total


# ---------------------------------------------------------------- formatting

def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
