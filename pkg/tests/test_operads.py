from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from opfunctors.exactlin import is_injective
from opfunctors.operads import (LEIB_TEXT, LIE_TEXT, OperadError, PresentationParseError,
                                TruncationError, build_operad, builtin, check_operad_axioms,
                                default_mu, leib_to_lie, lie_to_assu, morphism, parse_presentation)


def fresh(text, nmax, name):
    return build_operad(parse_presentation(text, nmax=nmax, name=name))


def test_lie_dims_from_quotient():
    lie = fresh(LIE_TEXT, 5, "Lie")
    assert [lie.dim(n) for n in range(1, 6)] == [factorial(n - 1) for n in range(1, 6)]


def test_leib_dims_from_quotient():
    leib = fresh(LEIB_TEXT, 5, "Leib")
    assert [leib.dim(n) for n in range(1, 6)] == [factorial(n) for n in range(1, 6)]


def test_lie_embeds_in_assu():
    # an independent count: the bracket words span (n-1)! dimensions of the associative words
    phi = lie_to_assu(5)
    for n in range(1, 6):
        f = phi.map(n)
        assert is_injective(f)
        assert f.rank() == factorial(n - 1)


@pytest.mark.parametrize("name", ["Lie", "Leib", "AssU", "ComU", "I"])
def test_axioms_exhaustive(name):
    assert check_operad_axioms(builtin(name, 4), 4) == []


def test_jacobi_normal_form():
    lie = builtin("Lie", 4)
    b = lie.generator("b")
    t = b.compose(1, b)
    total = t + t.act((1, 2, 0)) + t.act((2, 0, 1))
    assert total.is_zero()


def test_antisymmetry():
    lie = builtin("Lie", 3)
    b = lie.generator("b")
    assert b.act((1, 0)) == -b


def test_assu_block_substitution():
    ass = builtin("AssU", 4)
    p = ass.product()
    assert p.compose(1, p) == ass.word(1, 2, 3)
    assert p.compose(2, p) == ass.word(1, 2, 3)
    assert ass.word(2, 1).compose(1, p) == ass.word(3, 1, 2)


def _word_compose(w, i, v):
    # independent substitution of the word v for the letter i in w (1-based)
    k = len(v)
    out = []
    for x in w:
        if x < i:
            out.append(x)
        elif x > i:
            out.append(x + k - 1)
        else:
            out.extend(y + i - 1 for y in v)
    return tuple(out)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_assu_partial_matches_word_substitution(m, k, data):
    if m == 0:
        return
    ass = builtin("AssU", 6)
    w = data.draw(st.sampled_from(list(permutations(range(1, m + 1)))))
    v = data.draw(st.sampled_from(list(permutations(range(1, k + 1))))) if k else ()
    i = data.draw(st.integers(1, m))
    got = ass.word(*w).compose(i, ass.word(*v) if k else ass.element(0, {0: 1}))
    assert got == ass.word(*_word_compose(w, i, v))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lie_associativity_random(data):
    lie = builtin("Lie", 5)
    def elt(n):
        coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=lie.dim(n), max_size=lie.dim(n)))
        return lie.element(n, dict(enumerate(coeffs)))
    a, b, c = elt(2), elt(2), elt(2)
    # sequential: (a ∘₁ b) ∘₁ c = a ∘₁ (b ∘₁ c)
    assert a.compose(1, b).compose(1, c) == a.compose(1, b.compose(1, c))
    # parallel: (a ∘₁ b) ∘₃ c = (a ∘₂ c) ∘₁ b
    assert a.compose(1, b).compose(3, c) == a.compose(2, c).compose(1, b)


def test_lie_to_assu_valid_and_bad_leib_image_rejected():
    phi = lie_to_assu(3)
    assert phi.apply(default_mu(phi.source)) == phi.target.word(1, 2) - phi.target.word(2, 1)
    leib = builtin("Leib", 3)
    ass = builtin("AssU", 3)
    with pytest.raises(OperadError):
        morphism(leib, ass, {"b": ass.word(1, 2)})


def test_leib_to_lie_respects_composition():
    phi = leib_to_lie(4)
    leib = phi.source
    b = leib.generator("b")
    x = b.compose(1, b)
    assert phi.apply(x) == phi.apply(b).compose(1, phi.apply(b))


def test_truncation_error_above_nmax():
    lie = builtin("Lie", 3)
    with pytest.raises(TruncationError):
        lie.dim(4)


@pytest.mark.parametrize("text,line,token", [
    ("gen b 2\nrel (b 1 2) + (b 2 1\n", 2, None),
    ("gen b 2\nrel (b 1 2) + 3x (b 2 1)\n", 2, "x"),
    ("gen b 2\nrel (c 1 2)\n", 2, "c"),
])
def test_parse_errors_report_position(text, line, token):
    with pytest.raises(PresentationParseError) as exc:
        parse_presentation(text, nmax=3)
    msg = str(exc.value)
    assert f"line {line}" in msg
    if token:
        assert repr(token) in msg or token in msg


def test_comu_dims_and_assu_dims():
    assert [builtin("ComU", 4).dim(n) for n in range(5)] == [1] * 5
    assert [builtin("AssU", 4).dim(n) for n in range(5)] == [factorial(n) for n in range(5)]
