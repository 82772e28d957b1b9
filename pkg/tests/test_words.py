import pytest
from hypothesis import given, settings

from fpcheck.words import (
    Presentation,
    WordSyntaxError,
    canonical_relator,
    concat,
    cyclic_permutations,
    cyclic_reduce,
    exponent_sum,
    format_word,
    free_reduce,
    invert,
    parse_relations,
    parse_word,
    power,
    substitute,
)

from conftest import words


@pytest.mark.parametrize("w, expected", [
    ((1, -1), ()),
    ((-1, 2, -3), (-1, 2, -3)),
    ((1, 2, -2, 1), (1, 1)),
    ((1, 2, 3, -3, -2, -1), ()),
])
def test_free_reduce(w, expected):
    assert free_reduce(w) == expected


@pytest.mark.parametrize("w, expected", [
    ((1, 2), (-2, -1)),
    ((), ()),
    ((-1, 2, -3), (3, -2, 1)),
])
def test_invert(w, expected):
    assert invert(w) == expected


@pytest.mark.parametrize("w, core, conj", [
    ((1, 2, -1), (2,), (1,)),
    ((2, 1, -2, -1), (2, 1, -2, -1), ()),
    ((-2, 1, 2), (1,), (-2,)),
    ((), (), ()),
])
def test_cyclic_reduce_examples(w, core, conj):
    assert cyclic_reduce(w) == (core, conj)


def test_substitute_elimination_display():
    x = Presentation.from_strings("x1 x2 x3", []).word
    r2 = x("x2^-1 x3^-1 x2^-1 x3 x2 x3")
    assert substitute(r2, 3, x("x1^-1 x2")) == x("x2^-2 x1 x2^-1 x1^-1 x2^2 x1^-1 x2")


def test_substitute_small_cases():
    assert substitute((3,), 3, (-1, 2)) == (-1, 2)
    assert substitute((1, 2), 3, (1,)) == (1, 2)
    with pytest.raises(ValueError):
        substitute((1,), 1, (1, 2))


def test_exponent_sum_examples():
    w = (1, 2, 1, -2, -1, -2)
    assert exponent_sum(w, 1) == 1
    assert exponent_sum(w, 2) == -1
    assert exponent_sum((), 1) == 0


def test_power():
    assert power((1, 2), 2) == (1, 2, 1, 2)
    assert power((1, 2), -1) == (-2, -1)
    assert power((1,), 0) == ()


@settings(max_examples=10_000, deadline=None)
@given(words())
def test_free_reduce_idempotent_and_shortening(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert len(r) <= len(w)
    assert all(a != -b for a, b in zip(r, r[1:]))


@given(words())
def test_word_times_inverse_is_trivial(w):
    assert free_reduce(concat(w, invert(w))) == ()
    assert invert(invert(w)) == free_reduce(w)


@given(words())
def test_cyclic_reduce_conjugation_identity(w):
    core, conj = cyclic_reduce(w)
    assert free_reduce(concat(conj, core, invert(conj))) == free_reduce(w)
    assert not core or core[0] != -core[-1]


@given(words(max_gen=4), words(max_gen=2, max_size=6))
def test_substitute_commutes_with_reduction(w, rep):
    assert free_reduce(substitute(free_reduce(w), 3, rep)) == free_reduce(substitute(w, 3, rep))


@given(words(), words())
def test_exponent_sum_additive(u, v):
    for g in (1, 2, 3):
        assert exponent_sum(concat(u, v), g) == exponent_sum(u, g) + exponent_sum(v, g)
        assert exponent_sum(invert(u), g) == -exponent_sum(u, g)


@given(words())
def test_canonical_relator_ignores_rotation_and_inversion(w):
    core, _ = cyclic_reduce(w)
    c = canonical_relator(core)
    for rot in cyclic_permutations(core):
        assert canonical_relator(rot) == c
        assert canonical_relator(invert(rot)) == c


def test_parse_word_forms():
    s = ("a", "b")
    assert parse_word("a b^-1 (a b)^2", s) == (1, -2, 1, 2, 1, 2)
    assert parse_word("1", s) == ()
    assert parse_word("(a b)^-1", s) == (-2, -1)
    assert parse_word("a^0 b", s) == (2,)


@pytest.mark.parametrize("text, column", [("a c", 3), ("a^", 3), ("(a b", 5), ("a )", 3)])
def test_parse_word_errors_are_positioned(text, column):
    with pytest.raises(WordSyntaxError) as exc:
        parse_word(text, ("a", "b"))
    assert exc.value.column == column


def test_parse_relations_chains():
    s = ("a", "b")
    assert parse_relations("a^2 = b^3", s) == [(1, 1, -2, -2, -2)]
    assert parse_relations("a^2 = b^3 = 1", s) == [(1, 1), (2, 2, 2)]


@given(words(max_gen=2))
def test_format_then_parse(w):
    s = ("a", "b")
    assert parse_word(format_word(w, s), s) == free_reduce(w)


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(("a", "a"))
    with pytest.raises(ValueError):
        Presentation(("a",), ((2,),))
    p = Presentation.from_strings("a b", ["a^2", "a a^-1"])
    assert p.relators == ((1, 1), ())
    assert p.index("b") == 2
    with pytest.raises(KeyError):
        p.index("c")


def test_equivalence_up_to_rotation_and_inversion():
    p = Presentation.from_strings("a b", ["a b a^-1 b^-1", "a^2"])
    q = Presentation.from_strings("a b", ["a^-2", "b a^-1 b^-1 a"])
    assert p.equivalent_to(q)
    assert not p.equivalent_to(Presentation.from_strings("a b", ["a^2"]))
