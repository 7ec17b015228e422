from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from opfunctors.exactlin import (LinMap, LinearAlgebraError, Space, Subspace, adjacent_word,
                                 all_perms, averaging_operator, cokernel, coinvariants, cycle_type,
                                 fraction_str, identity_perm, induce, inverse, is_isomorphism, kernel,
                                 parse_fraction, perm_compose, perm_inverse, perm_sign,
                                 rank, solve, tensor_actions, transposition)
from opfunctors.fmod import regular_rep, sign_rep, trivial_rep

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    sparse = draw(st.booleans())
    cell = st.one_of(st.just(Fraction(0)), entries) if sparse else entries
    return [[draw(cell) for _ in range(c)] for _ in range(r)], r, c


def as_map(rows, r, c):
    return LinMap.from_rows(Space(range(c)), Space(range(r)), rows)


def sympy_rank(rows, r, c):
    return sympy.Matrix(r, c, [x for row in rows for x in row]).rank() if r and c else 0


def test_kernel_of_row_vector():
    f = as_map([[1, -1]], 1, 2)
    K, inc = kernel(f)
    assert K.dim == 1
    v = inc({0: Fraction(1)})
    assert v[0] == v[1] != 0


def test_cokernel_of_surjective_row():
    Q, _ = cokernel(as_map([[1, -1]], 1, 2))
    assert Q.dim == 0


def test_shape_mismatch_raises():
    f = as_map([[1, 2]], 1, 2)
    with pytest.raises(LinearAlgebraError):
        f @ f


def test_inverse_of_singular_raises():
    with pytest.raises(LinearAlgebraError):
        inverse(as_map([[1, 1], [1, 1]], 2, 2))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    rows, r, c = m
    assert rank(as_map(rows, r, c)) == sympy_rank(rows, r, c)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    rows, r, c = m
    f = as_map(rows, r, c)
    K, inc = kernel(f)
    Q, _ = cokernel(f)
    assert K.dim + rank(f) == c
    assert Q.dim + rank(f) == r
    assert (f @ inc).is_zero()


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4), st.lists(entries, min_size=4, max_size=4))
def test_solve_consistent(m, coeffs):
    rows, r, c = m
    f = as_map(rows, r, c)
    x = {j: coeffs[j] for j in range(c) if coeffs[j]}
    b = f(x)
    y = solve(f, b)
    assert y is not None and f(y) == b


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=0, max_size=4),
       st.lists(entries, min_size=3, max_size=3))
def test_subspace_membership(gens, probe):
    amb = Space(range(3))
    vecs = [{i: x for i, x in enumerate(g) if x} for g in gens]
    S = Subspace.span(amb, vecs)
    for v in vecs:
        assert S.contains(v)
    p = {i: x for i, x in enumerate(probe) if x}
    r = S.residue(p)
    # residue lies in a complement and differs from p by an element of S
    diff = {i: p.get(i, 0) - r.get(i, 0) for i in range(3)}
    assert S.contains({i: x for i, x in diff.items() if x})
    Q, proj, _ = S.quotient()
    assert Q.dim == 3 - S.dim


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_perm_group_laws(n, data):
    perms = list(all_perms(n))
    p = data.draw(st.sampled_from(perms))
    q = data.draw(st.sampled_from(perms))
    assert perm_compose(p, perm_inverse(p)) == identity_perm(n)
    assert perm_sign(perm_compose(p, q)) == perm_sign(p) * perm_sign(q)
    sorted_ct = sorted(cycle_type(p), reverse=True)
    assert sum(sorted_ct) == n
    # the adjacent word composes back to p
    word = adjacent_word(p)
    acc = identity_perm(n)
    for i in word:
        acc = perm_compose(acc, transposition(n, i))
    assert acc == p


def test_coxeter_relations_of_standard_reps():
    for n in range(1, 5):
        for rep in (trivial_rep(n), sign_rep(n), regular_rep(n)):
            assert rep.check_coxeter()


def _induced_character_oracle(chi_a, chi_b, n1, n2, g):
    # Frobenius formula for the character of an induced representation
    n = n1 + n2
    total = Fraction(0)
    order = 0
    for x in all_perms(n):
        order += 1
        h = perm_compose(perm_inverse(x), perm_compose(g, x))
        if all(h[i] < n1 for i in range(n1)):
            p1 = h[:n1]
            p2 = tuple(y - n1 for y in h[n1:])
            total += chi_a(p1) * chi_b(p2)
    sub = sum(1 for _ in all_perms(n1)) * sum(1 for _ in all_perms(n2))
    return total / sub


@pytest.mark.parametrize("n1,n2", [(2, 1), (1, 2), (2, 2)])
def test_induced_character_matches_frobenius(n1, n2):
    A, B = sign_rep(n1), trivial_rep(n2)
    sp, act2 = tensor_actions(A, B)
    ind, act = induce(sp, n1, n2, act2)
    assert ind.dim == len(list(all_perms(n1 + n2))) // (len(list(all_perms(n1))) * len(list(all_perms(n2))))
    for g in all_perms(n1 + n2):
        expect = _induced_character_oracle(A.character, B.character, n1, n2, g)
        assert act(g).trace() == expect


def test_induced_sign_triv_on_transposition():
    sp, act2 = tensor_actions(sign_rep(2), trivial_rep(1))
    ind, act = induce(sp, 2, 1, act2)
    assert ind.dim == 3
    assert act(transposition(3, 0)).trace() == -1


def test_coinvariants_by_averaging():
    reg = regular_rep(2)
    Q, _ = coinvariants(reg.space, [reg.matrix(transposition(2, 0))])
    assert Q.dim == 1
    assert averaging_operator(reg).rank() == 1
    sg = sign_rep(2)
    Q, _ = coinvariants(sg.space, [sg.matrix(transposition(2, 0))])
    assert Q.dim == 0
    assert averaging_operator(sg).rank() == 0


@given(st.fractions(max_denominator=50))
def test_fraction_text_roundtrip(x):
    assert parse_fraction(fraction_str(x)) == x


@settings(max_examples=40, deadline=None)
@given(matrices(4, 4))
def test_isomorphism_and_inverse(m):
    rows, r, c = m
    f = as_map(rows, r, c)
    if r == c and is_isomorphism(f):
        g = inverse(f)
        assert g @ f == LinMap.identity(f.domain)
    else:
        assert not is_isomorphism(f) or r == c
