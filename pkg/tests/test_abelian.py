import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fpcheck.abelian import (
    HandleCountTable,
    IntMatrix,
    abelian_invariants,
    determinant,
    euler_characteristic,
    is_perfect,
    relation_matrix,
    smith_normal_form,
)
from fpcheck.paperdata import complement_presentation, target_presentation
from fpcheck.words import Presentation

matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


def assert_valid_snf(m: IntMatrix):
    res = smith_normal_form(m)
    assert res.left @ m @ res.right == res.diagonal_matrix(m.shape)
    assert determinant(res.left) in (1, -1)
    assert determinant(res.right) in (1, -1)
    d = res.diagonal
    assert all(x >= 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 if d[i] else d[i + 1] == 0 for i in range(len(d) - 1))
    return res


def sympy_diagonal(rows):
    s = sympy_snf(Matrix(rows), domain=ZZ)
    return tuple(abs(int(s[i, i])) for i in range(min(s.shape)))


def test_complement_relation_matrix():
    assert relation_matrix(complement_presentation()).tolist() == [[1, -1, 0], [0, -1, 1], [-1, 1, -1]]


def test_first_row_of_changed_presentation():
    p = Presentation.from_strings("a b", ["a^2 b^-3", "a b"])
    assert relation_matrix(p).tolist()[0] == [2, -3]


def test_no_relators_gives_empty_matrix():
    m = relation_matrix(Presentation(("a", "b"), ()))
    assert m.shape == (0, 2)
    assert abelian_invariants(Presentation(("a", "b"), ())).free_rank == 2


@pytest.mark.parametrize("rows, diagonal", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], (1, 1, 1)),
    ([[2, 0], [0, 3], [5, 5]], (1, 1)),
    ([[1, -1, 0], [0, -1, 1], [-1, 1, -1]], (1, 1, 1)),
    ([[2, 4], [6, 8]], (2, 4)),
    ([[0, 0], [0, 0]], (0, 0)),
])
def test_snf_examples(rows, diagonal):
    assert assert_valid_snf(IntMatrix.from_rows(rows)).diagonal == diagonal


def test_identity_transforms_for_identity():
    res = smith_normal_form(IntMatrix.identity(3))
    assert res.left == IntMatrix.identity(3) and res.right == IntMatrix.identity(3)


def test_large_entries_stay_exact():
    big = 10 ** 30
    m = IntMatrix.from_rows([[big, big + 1], [big - 1, big]])
    res = assert_valid_snf(m)
    assert res.diagonal == (1, 1)


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    res = assert_valid_snf(IntMatrix.from_rows(rows))
    assert res.diagonal == sympy_diagonal(rows)


def _random_unimodular(n, rng):
    m = IntMatrix.identity(n).tolist()
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            q = rng.randint(-3, 3)
            m[i] = [x + q * y for x, y in zip(m[i], m[j])]
    return IntMatrix.from_rows(m)


def test_snf_invariant_under_unimodular_change():
    rng = random.Random(11)
    for _ in range(100):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
        d = smith_normal_form(m).diagonal
        moved = _random_unimodular(r, rng) @ m @ _random_unimodular(c, rng)
        assert smith_normal_form(moved).diagonal == d
        perm = rng.sample(range(r), r)
        assert smith_normal_form(IntMatrix.from_rows([m.rows[i] for i in perm], c)).diagonal == d


@pytest.mark.parametrize("rows", [[[3]], [[1, 2], [3, 4]], [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
                                  [[0, 1], [1, 0]], [[0, 0, 1], [0, 1, 0], [1, 0, 0]]])
def test_determinant_matches_sympy(rows):
    assert determinant(IntMatrix.from_rows(rows)) == Matrix(rows).det()


def test_determinant_random_against_sympy():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert determinant(IntMatrix.from_rows(rows)) == Matrix(rows).det()


def test_abelian_invariants_examples():
    inv = abelian_invariants(Presentation.from_strings("a", ["a^5"]))
    assert (inv.free_rank, inv.torsion) == (0, (5,))
    assert str(inv) == "Z/5"
    assert abelian_invariants(complement_presentation()).is_trivial()
    assert abelian_invariants(target_presentation()).is_trivial()
    assert str(abelian_invariants(Presentation.from_strings("a b", ["a^2", "b^4"]))) == "Z/2 + Z/4"
    assert str(abelian_invariants(Presentation.from_strings("a b", ["a^2 b^-3", "a^2 (a b)^-5"]))) == "Z/19"


def test_is_perfect():
    assert is_perfect(complement_presentation())
    assert not is_perfect(Presentation.from_strings("a", ["a^5"]))
    assert not is_perfect(Presentation(("a",), ()))


def test_complement_determinant():
    assert determinant(relation_matrix(complement_presentation())) in (1, -1)


def test_euler_characteristic_examples():
    assert euler_characteristic(HandleCountTable.from_handles(5, [(0, 1), (1, 3), (2, 3), (3, 3), (4, 3), (5, 1)])) == 0
    assert euler_characteristic(HandleCountTable.from_handles(4, [(0, 3), (1, 2), (3, 2), (4, 3)])) == 2
    assert euler_characteristic(HandleCountTable.from_handles(3, [(0, 1), (2, 1), (3, 1)])) == 1


def test_handle_table_merging_and_validation():
    t = HandleCountTable.from_handles(2, [(0, 3), (1, 2), (1, 2), (2, 3)])
    assert t.merged and t.as_list() == [3, 4, 3]
    assert not HandleCountTable.from_handles(2, [(0, 1), (2, 1)]).merged
    with pytest.raises(ValueError):
        HandleCountTable.from_handles(2, [(3, 1)])
    with pytest.raises(ValueError):
        HandleCountTable.from_handles(2, [(0, -1)])
