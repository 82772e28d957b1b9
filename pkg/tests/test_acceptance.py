"""Acceptance criteria 1-8, each exact, each with its time budget.

Every test records one ``criterion N: PASS|FAIL`` line; the lines are
printed at the end of the pytest run and also when this file is executed
directly (``python tests/test_acceptance.py``).
"""

import functools
import io
import random
import sys
import time
from pathlib import Path

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from corpus import corpus, random_presentation_file  # noqa: E402

from fpcheck.abelian import (  # noqa: E402
    IntMatrix,
    abelian_invariants,
    determinant,
    euler_characteristic,
    relation_matrix,
    smith_normal_form,
)
from fpcheck.cli import parse_presentation, print_presentation, run  # noqa: E402
from fpcheck.coset import check_table, enumerate_cosets, order, permutation_rep  # noqa: E402
from fpcheck.paperdata import (  # noqa: E402
    complement_presentation,
    derivation_script,
    handle_tables,
    target_presentation,
)
from fpcheck.permgrp import Permutation, closure, find_epimorphism, satisfies  # noqa: E402
from fpcheck.tietze import DerivationScript, DerivationStep, replay_derivation  # noqa: E402
from fpcheck.words import Presentation  # noqa: E402


def criterion(number, title, budget_s):
    """Time the test, enforce the budget and record one summary line."""
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            t0 = time.perf_counter()
            status, note = "FAIL", ""
            try:
                note = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - t0
                assert elapsed < budget_s, f"took {elapsed:.2f} s, budget {budget_s} s"
                status = "PASS"
            except BaseException as exc:
                note = f"{type(exc).__name__}: {exc}".splitlines()[0]
                raise
            finally:
                elapsed = time.perf_counter() - t0
                ACCEPTANCE_LINES.append(
                    f"criterion {number}: {status}  {title} ({elapsed:.2f} s) {note}".rstrip())
        return inner
    return wrap


@criterion(1, "order certificate for <a,b | a^2, b^3, (ab)^5>", 1.0)
def test_criterion_1_order_certificate():
    p = target_presentation()
    res = enumerate_cosets(p, [], "felsch", 10_000)
    assert res.completed and res.index == 60
    assert check_table(res.table, p) == []
    # independent oracle: closure of a standard A5 generating pair
    a = Permutation.from_cycles(5, [(1, 2), (3, 4)])
    b = Permutation.from_cycles(5, [(1, 3, 5)])
    assert satisfies(p, (a, b))
    assert len(closure([a, b], cap=1000)) == 60
    assert len(closure(permutation_rep(res.table), cap=1000)) == 60
    return "order 60, closure 60"


@criterion(2, "derivation replay", 1.0)
def test_criterion_2_derivation_replay():
    script = derivation_script()
    rep = replay_derivation(complement_presentation(), script)
    assert rep.mismatches == [] and rep.error is None
    assert rep.steps_applied == len(script.steps)
    quotient_steps = [i for i, s in enumerate(script.steps) if s.is_quotient]
    assert quotient_steps == [rep.isomorphism_preserving_prefix_length]
    # the quotient step adds exactly a^2 and b^3
    words = script.steps[quotient_steps[0]].params["words"]
    ab = Presentation.from_strings("a b")
    assert sorted(ab.word(w) for w in words) == [(1, 1), (2, 2, 2)]
    assert rep.final.equivalent_to(target_presentation())
    return f"0 mismatches, prefix {rep.isomorphism_preserving_prefix_length}"


@criterion(3, "non-triviality via epimorphism onto A5", 60.0)
def test_criterion_3_epimorphism():
    p = complement_presentation()
    found = find_epimorphism(p, 5, 60)
    assert found is not None
    assert all(x.is_even() and x.degree == 5 for x in found)
    assert satisfies(p, found)
    assert len(closure(found, cap=1000)) == 60
    return " ".join(f"{s}={x}" for s, x in zip(p.generators, found))


@criterion(4, "complement group is perfect", 1.0)
def test_criterion_4_perfect():
    p = complement_presentation()
    assert abelian_invariants(p).is_trivial()
    m = relation_matrix(p)
    assert m.shape == (3, 3)
    assert determinant(m) in (1, -1)
    assert Matrix(m.tolist()).det() in (1, -1)
    return f"det {determinant(m)}"


@criterion(5, "complement group order is a multiple of 60", 60.0)
def test_criterion_5_complement_order():
    res = order(complement_presentation(), 100_000)
    assert res.completed
    assert check_table(res.table, complement_presentation()) == []
    k = res.index
    assert k > 0 and k % 60 == 0
    return f"order {k}"


@criterion(6, "Euler characteristics for n = 2..10", 1.0)
def test_criterion_6_euler():
    for n in range(2, 11):
        t = handle_tables(n)
        s = 1 + (-1) ** n
        assert euler_characteristic(t["Kn"]) == s
        assert euler_characteristic(t["boundaryX"]) == s
        assert euler_characteristic(t["X"]) == 1
        assert euler_characteristic(t["SnxS2"]) == 2 * s
    t2 = handle_tables(2)
    assert t2["Kn"].merged and t2["Kn"].as_list() == [3, 4, 3]
    return "9 values of n, merging at n = 2"


def _snf_ok(rows, check_sympy):
    m = IntMatrix.from_rows(rows)
    res = smith_normal_form(m)
    assert res.left @ m @ res.right == res.diagonal_matrix(m.shape)
    assert determinant(res.left) in (1, -1) and determinant(res.right) in (1, -1)
    d = res.diagonal
    for x, y in zip(d, d[1:]):
        assert (y % x == 0) if x else y == 0
    if check_sympy:
        s = sympy_snf(Matrix(rows), domain=ZZ)
        assert d == tuple(abs(int(s[i, i])) for i in range(min(s.shape)))


@criterion(7, "property suites", 120.0)
def test_criterion_7_property_suites():
    rng = random.Random(1)
    for i in range(1000):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        _snf_ok([[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)], i % 10 == 0)

    entries = corpus()
    assert len(entries) >= 20
    for _, p, n in entries:
        felsch, hlt = order(p, 100_000, "felsch"), order(p, 100_000, "hlt")
        assert felsch.completed and hlt.completed
        assert felsch.index == hlt.index
        if n is not None:
            assert felsch.index == n
        assert check_table(felsch.table, p) == [] and check_table(hlt.table, p) == []

    for _ in range(1000):
        p = parse_presentation(random_presentation_file(rng))
        assert parse_presentation(print_presentation(p)) == p
    return f"1000 SNF, {len(entries)} presentations x 2 strategies, 1000 files"


@criterion(8, "negative controls", 10.0)
def test_criterion_8_negative_controls(tmp_path):
    script = derivation_script()
    steps = list(script.steps)
    corrupted = 3
    bad = steps[corrupted].expected.with_relators(
        (steps[corrupted].expected.relators[0], (1, 2, 1, 2)))
    steps[corrupted] = DerivationStep(steps[corrupted].kind, steps[corrupted].params, bad)
    rep = replay_derivation(complement_presentation(), DerivationScript(tuple(steps)))
    assert [m.index for m in rep.mismatches] == [corrupted]

    capped = enumerate_cosets(target_presentation(), [], "felsch", 10)
    assert not capped.completed and capped.index is None

    f = tmp_path / "a5.txt"
    f.write_text(print_presentation(target_presentation()))
    out = io.StringIO()
    code = run(["order", str(f), "--max-cosets", "10"], out, io.StringIO())
    assert code == 2
    assert out.getvalue().startswith("inconclusive")
    return f"mismatch at step {corrupted}, capped run exits {code}"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
