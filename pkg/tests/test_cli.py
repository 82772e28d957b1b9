import io
import json
import os
import random
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import fpcheck
from fpcheck.cli import (
    REPORT_SCHEMA,
    ParseError,
    format_script,
    parse_presentation,
    parse_script,
    print_presentation,
    run,
)
from fpcheck.paperdata import complement_presentation, derivation_script, target_presentation
from fpcheck.tietze import replay_derivation
from fpcheck.words import Presentation

from corpus import random_presentation_file

TARGET_TEXT = "gens a b\nrel a^2\nrel b^3\nrel (a b)^5\n"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def target_file(tmp_path):
    f = tmp_path / "a5.txt"
    f.write_text(TARGET_TEXT)
    return f


def test_parse_target():
    assert parse_presentation(TARGET_TEXT) == target_presentation()


def test_parse_free_group():
    assert parse_presentation("gens a\n") == Presentation(("a",), ())


def test_comments_and_blank_lines():
    text = "# header\n\ngens a b   # two\nrel a^2 # square\n  rel b^-3\n"
    assert parse_presentation(text) == Presentation.from_strings("a b", ["a^2", "b^-3"])


@pytest.mark.parametrize("text, line, column", [
    ("rel a^2", 1, 1),
    ("gens a\nrel b", 2, 5),
    ("gens a\nrel a^", 2, 7),
    ("gens a\nrel (a", 2, 7),
    ("gens a\nfoo a", 2, 1),
    ("gens a\ngens b", 2, 1),
    ("gens a a", 1, 6),
    ("gens 2x", 1, 6),
    ("# nothing\n", 1, 1),
])
def test_positioned_errors(text, line, column):
    with pytest.raises(ParseError) as exc:
        parse_presentation(text)
    assert (exc.value.line, exc.value.column) == (line, column)


def test_print_identity_relator():
    p = Presentation(("a",), ((),))
    assert print_presentation(p) == "gens a\nrel 1\n"
    assert parse_presentation(print_presentation(p)) == p


@pytest.mark.parametrize("p", [target_presentation(), complement_presentation()])
def test_round_trip_registry(p):
    assert parse_presentation(print_presentation(p)) == p


def test_script_round_trip():
    script = derivation_script()
    text = format_script(script)
    again = parse_script(text)
    assert format_script(again) == text
    rep = replay_derivation(again.start, again)
    assert rep.ok and rep.isomorphism_preserving_prefix_length == 5


def test_script_errors():
    with pytest.raises(ParseError):
        parse_script("step Frobnicate\n")
    with pytest.raises(ParseError):
        parse_script("relator 1\n")
    with pytest.raises(ParseError) as exc:
        parse_script("start gens a\nstep ConjugateRelator\n  relator 1\n")
    assert exc.value.line == 2


def test_order_command(target_file):
    code, out, _ = call("order", str(target_file))
    assert code == 0 and out.strip() == "60"


def test_order_overflow_exit_2(target_file):
    code, out, _ = call("order", str(target_file), "--max-cosets", "10")
    assert code == 2 and "60" not in out


def test_order_dump_table(target_file, tmp_path):
    code, out, _ = call("order", str(target_file), "--strategy", "hlt", "--dump-table")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "60"
    assert len(lines) == 1 + 1 + 60


def test_abelianize(target_file, tmp_path):
    f = tmp_path / "c5.txt"
    f.write_text("gens a\nrel a^5\n")
    assert call("abelianize", str(f))[:2] == (0, "Z/5\n")
    assert call("abelianize", str(target_file))[:2] == (0, "0\n")


def test_simplify(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text(print_presentation(complement_presentation()))
    code, out, _ = call("simplify", str(f))
    q = parse_presentation(out)
    assert code == 0 and q.rank == 2


def test_replay_bundled_and_file(tmp_path):
    assert call("replay", "--paper")[0] == 0
    f = tmp_path / "s.txt"
    code, text, _ = call("replay", "--paper", "--print-script")
    f.write_text(text)
    code, out, _ = call("replay", str(f))
    assert code == 0 and "isomorphism-preserving prefix: 5" in out


def test_replay_corrupted_script_fails(tmp_path):
    text = format_script(derivation_script())
    lines = text.splitlines()
    i = lines.index("  expect rel x2^-1 x1 x2^-1 x1^-1 x2^2 x1^-1")
    lines[i] = "  expect rel x2^-1 x1 x2^-1 x1^-1 x2^2 x1"
    f = tmp_path / "bad.txt"
    f.write_text("\n".join(lines) + "\n")
    report = tmp_path / "r.json"
    code, out, _ = call("replay", str(f), "--out", str(report))
    assert code == 1 and "mismatch at step 2" in out
    data = json.loads(report.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["checks"][0]["details"]["mismatch_indices"] == [1]


def test_replay_needs_a_source():
    assert call("replay")[0] == 3


def test_perm_search(target_file, tmp_path):
    code, out, _ = call("perm-search", str(target_file), "--degree", "5", "--order", "60")
    assert code == 0 and "image order 60" in out
    f = tmp_path / "c2.txt"
    f.write_text("gens a\nrel a^2\n")
    assert call("perm-search", str(f))[0] == 1
    free = tmp_path / "free.txt"
    free.write_text("gens a b c\n")
    assert call("perm-search", str(free), "--order", "7", "--cap", "50")[0] == 2


def test_verify_command_report(tmp_path):
    report = tmp_path / "report.json"
    code, out, _ = call("verify-paper", "--n", "2..10", "--out", str(report))
    assert code == 0 and "overall: pass" in out
    data = json.loads(report.read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["n_range"] == [2, 10]
    assert len(data["checks"]) == 7


def test_verify_command_small_cap_is_inconclusive():
    assert call("verify-paper", "--n", "2..3", "--max-cosets", "10")[0] == 2


@pytest.mark.parametrize("argv", [[], ["bogus"], ["verify-paper", "--n", "1..4"],
                                  ["verify-paper", "--n", "x"], ["order"],
                                  ["order", "/nonexistent/file"]])
def test_usage_errors_exit_3(argv):
    assert call(*argv)[0] == 3


def test_parse_error_exit_3(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("rel a^2\n")
    code, _, err = call("order", str(f))
    assert code == 3 and "line 1" in err


def test_module_entry_point(target_file):
    src = str(Path(fpcheck.__file__).resolve().parent.parent)
    env = {**os.environ, "PYTHONPATH": src}
    proc = subprocess.run([sys.executable, "-m", "fpcheck", "order", str(target_file)],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0 and proc.stdout.strip() == "60"


def test_round_trip_generated_files():
    rng = random.Random(2024)
    for _ in range(1000):
        p = parse_presentation(random_presentation_file(rng))
        assert parse_presentation(print_presentation(p)) == p
