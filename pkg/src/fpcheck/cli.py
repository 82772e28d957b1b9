"""Command-line front end and text formats.

Presentation files::

    # comment
    gens a b
    rel a^2
    rel b^3
    rel (a b)^5

Derivation script files hold an optional start presentation (``start gens``
/ ``start rel`` lines) followed by ``step <Kind>`` blocks whose indented
lines carry the step parameters; see :func:`format_script`.

Exit codes: 0 all checks passed, 1 a check failed, 2 inconclusive
(overflow), 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .abelian import abelian_invariants, relation_matrix
from .coset import DEFAULT_MAX_COSETS, enumerate_cosets
from .paperdata import FAIL, INCONCLUSIVE, PASS, derivation_script, complement_presentation, verify_paper
from .permgrp import SearchOverflow, closure, find_epimorphism
from .tietze import DerivationScript, DerivationStep, StepKind, greedy_simplify, replay_derivation
from .words import Presentation, WordSyntaxError, format_word, parse_relations

__all__ = [
    "ParseError",
    "parse_presentation",
    "print_presentation",
    "parse_script",
    "format_script",
    "REPORT_SCHEMA",
    "main",
    "run",
]

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class ParseError(ValueError):
    """Syntax error with a 1-based ``line`` and ``column``."""

    def __init__(self, message, line, column=1, expected=None):
        self.line, self.column, self.expected = line, column, expected
        exp = f" (expected {expected})" if expected else ""
        super().__init__(f"line {line}, column {column}: {message}{exp}")


def _strip_comment(line):
    return line.split("#", 1)[0].rstrip()


def _relations(text, symbols, lineno, offset):
    try:
        return parse_relations(text, symbols)
    except WordSyntaxError as exc:
        col = offset + (exc.column or 1)
        raise ParseError(str(exc).split(" at column")[0], lineno, col, exc.expected) from None


def parse_presentation(text: str) -> Presentation:
    gens = None
    rels: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        body = line.lstrip()
        if not body:
            continue
        indent = len(line) - len(body)
        key, _, rest = body.partition(" ")
        if key == "gens":
            if gens is not None:
                raise ParseError("second 'gens' line", lineno, indent + 1, "'rel'")
            gens = tuple(rest.split())
            if len(set(gens)) != len(gens):
                raise ParseError("duplicate generator", lineno, indent + 6)
            for s in gens:
                if not (s[0].isalpha() or s[0] == "_") or not all(ch.isalnum() or ch == "_" for ch in s):
                    raise ParseError(f"bad generator symbol {s!r}", lineno, line.index(s) + 1, "identifier")
        elif key == "rel":
            if gens is None:
                raise ParseError("relator before 'gens' line", lineno, indent + 1, "'gens'")
            if not rest.strip():
                raise ParseError("empty relator", lineno, len(line) + 1, "word")
            rels.extend(_relations(rest, gens, lineno, indent + 4))
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, indent + 1, "'gens' or 'rel'")
    if gens is None:
        raise ParseError("missing 'gens' line", 1, 1, "'gens'")
    return Presentation(gens, tuple(rels))


def print_presentation(p: Presentation) -> str:
    lines = ["gens " + " ".join(p.generators)]
    lines += ["rel " + p.format(r) for r in p.relators]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Derivation scripts


def format_script(script: DerivationScript) -> str:
    """Text form of a script; relator indices are written 1-based."""
    out = []
    if script.title:
        out.append(f"title {script.title}")
    if script.start is not None:
        out.append("start gens " + " ".join(script.start.generators))
        out += ["start rel " + script.start.format(r) for r in script.start.relators]
    for st in script.steps:
        a = st.params
        out.append(f"step {st.kind.value}")
        k = st.kind
        if k is StepKind.ELIMINATE_GENERATOR:
            out += [f"  generator {a['generator']}", f"  relator {a['relator'] + 1}"]
        elif k is StepKind.CONJUGATE_RELATOR:
            out += [f"  relator {a['relator'] + 1}", f"  left {_wtext(a['left'])}"]
        elif k is StepKind.CHANGE_GENERATORS:
            out.append("  new " + " ".join(a["new_symbols"]))
            out += [f"  old {_wtext(w)}" for w in a["old_in_terms_of_new"]]
            out += [f"  def {_wtext(w)}" for w in a["new_in_terms_of_old"]]
        elif k is StepKind.ADD_QUOTIENT_RELATOR:
            out += [f"  word {_wtext(w)}" for w in a["words"]]
            out.append("  quotient yes")
        elif k is StepKind.NORMALIZE_MODULO_TORSION:
            out.append(f"  relator {a['relator'] + 1}")
            out += [f"  order {g} {n}" for g, n in a["orders"].items()]
        elif k is StepKind.REPLACE_RELATOR_BY_EQUIVALENT:
            out += [f"  relator {a['relator'] + 1}", f"  replacement {_wtext(a['replacement'])}"]
        out += [f"  checkpoint {c}" for c in st.checkpoints]
        if st.expected is not None:
            out.append("  expect gens " + " ".join(st.expected.generators))
            out += ["  expect rel " + st.expected.format(r) for r in st.expected.relators]
        if st.note:
            out.append(f"  note {st.note}")
    return "\n".join(out) + "\n"


def _wtext(w):
    if isinstance(w, str):
        return w.strip() or "1"
    raise TypeError("script words must be text to be serialised")


def parse_script(text: str) -> DerivationScript:
    title = ""
    start_gens, start_rels = None, []
    steps: list = []
    cur: Optional[dict] = None

    def flush():
        if cur is None:
            return
        try:
            steps.append(_build_step(cur))
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), cur["line"], 1) from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        body = line.strip()
        if not body:
            continue
        key, _, rest = body.partition(" ")
        rest = rest.strip()
        if key == "title" and cur is None:
            title = rest
        elif key == "start" and cur is None:
            sub, _, val = rest.partition(" ")
            if sub == "gens":
                start_gens = tuple(val.split())
            elif sub == "rel":
                if start_gens is None:
                    raise ParseError("start relator before start gens", lineno, 1, "'start gens'")
                start_rels.extend(_relations(val, start_gens, lineno, line.index(val) if val else 0))
            else:
                raise ParseError(f"unknown start entry {sub!r}", lineno, 7, "'gens' or 'rel'")
        elif key == "step":
            flush()
            try:
                kind = StepKind(rest)
            except ValueError:
                raise ParseError(f"unknown step kind {rest!r}", lineno, 6,
                                 "|".join(k.value for k in StepKind)) from None
            cur = {"kind": kind, "line": lineno, "items": []}
        elif cur is not None:
            cur["items"].append((key, rest, lineno))
        else:
            raise ParseError(f"unexpected {key!r} outside a step", lineno, 1, "'step'")
    flush()
    start = Presentation(start_gens, tuple(start_rels)) if start_gens is not None else None
    return DerivationScript(tuple(steps), start, title)


def _build_step(cur) -> DerivationStep:
    kind = cur["kind"]
    params: dict = {}
    checkpoints, note = [], ""
    exp_gens, exp_rels = None, []
    multi = {"old": "old_in_terms_of_new", "def": "new_in_terms_of_old", "word": "words"}
    for key, val, lineno in cur["items"]:
        if key in ("relator",):
            params["relator"] = int(val) - 1
        elif key == "generator":
            params["generator"] = val
        elif key in ("left", "replacement"):
            params[key] = val
        elif key == "new":
            params["new_symbols"] = tuple(val.split())
        elif key in multi:
            params.setdefault(multi[key], []).append(val)
        elif key == "quotient":
            params["quotient"] = val in ("yes", "true", "1")
        elif key == "order":
            g, n = val.split()
            params.setdefault("orders", {})[g] = int(n)
        elif key == "checkpoint":
            checkpoints.append(val)
        elif key == "note":
            note = val
        elif key == "expect":
            sub, _, w = val.partition(" ")
            if sub == "gens":
                exp_gens = tuple(w.split())
            elif sub == "rel" and exp_gens is not None:
                exp_rels.extend(_relations(w, exp_gens, lineno, 0))
            else:
                raise ParseError("bad expect line", lineno, 1, "'expect gens' then 'expect rel'")
        else:
            raise ParseError(f"unknown step entry {key!r}", lineno, 1)
    for k in multi.values():
        if k in params:
            params[k] = tuple(params[k])
    expected = Presentation(exp_gens, tuple(exp_rels)) if exp_gens is not None else None
    return DerivationStep(kind, params, expected, note, tuple(checkpoints))


# --------------------------------------------------------------------------
# Structured report

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["toolkit", "version", "outcome", "checks"],
    "properties": {
        "toolkit": {"type": "string"},
        "version": {"type": "string"},
        "outcome": {"enum": [PASS, FAIL, INCONCLUSIVE]},
        "n_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "citation", "outcome", "details", "elapsed_ms"],
                "properties": {
                    "id": {"type": "string"},
                    "citation": {"type": "string", "minLength": 1},
                    "outcome": {"enum": [PASS, FAIL, INCONCLUSIVE]},
                    "details": {"type": "object"},
                    "elapsed_ms": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
    },
}


def _single_check_report(check_id, outcome, details, citation="command-line run"):
    return {"toolkit": "fpcheck", "version": __version__, "outcome": outcome,
            "checks": [{"id": check_id, "citation": citation, "outcome": outcome,
                        "details": details, "elapsed_ms": 0.0}]}


# --------------------------------------------------------------------------
# Commands


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _n_range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo < 2 or hi < lo:
        raise argparse.ArgumentTypeError("need 2 <= LO <= HI")
    return range(lo, hi + 1)


def _build_parser():
    ap = _Parser(prog="fpcheck", description="Finitely presented group checks.")
    ap.add_argument("--version", action="version", version=f"fpcheck {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, file=True):
        if file:
            p.add_argument("file", help="presentation file ('-' for stdin)")
        p.add_argument("--out", help="write a JSON report here")
        return p

    p = common(sub.add_parser("order", help="group order by coset enumeration"))
    p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    p.add_argument("--strategy", choices=["felsch", "hlt"], default="felsch")
    p.add_argument("--dump-table", action="store_true", help="print the coset table")

    common(sub.add_parser("abelianize", help="abelian invariants of the group"))

    p = common(sub.add_parser("simplify", help="greedy Tietze simplification"))
    p.add_argument("--passes", type=int, default=20)

    p = common(sub.add_parser("replay", help="replay a derivation script"), file=False)
    p.add_argument("script", nargs="?", help="script file")
    p.add_argument("--presentation", help="start presentation (overrides the script's)")
    p.add_argument("--paper", action="store_true", help="use the bundled derivation")
    p.add_argument("--print-script", action="store_true", help="print the script text and exit")

    p = common(sub.add_parser("perm-search", help="search for an epimorphism onto a permutation group"))
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--order", type=int, default=60, dest="target_order")
    p.add_argument("--cap", type=int, default=10_000_000)
    p.add_argument("--all-perms", action="store_true", help="allow odd permutations")

    p = common(sub.add_parser("verify-paper", help="run the full verification suite"), file=False)
    p.add_argument("--n", type=_n_range, default=range(2, 11), help="LO..HI (default 2..10)")
    p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    p.add_argument("--strategy", choices=["felsch", "hlt"], default="felsch")
    return ap


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_json(path, obj):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")


_EXIT = {PASS: EXIT_PASS, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}


def _cmd_order(args, out):
    p = parse_presentation(_read(args.file))
    res = enumerate_cosets(p, (), args.strategy, args.max_cosets)
    if not res.completed:
        print(f"inconclusive: more than {args.max_cosets} cosets needed", file=out)
        details = {"overflow_cap": args.max_cosets, "cosets_defined": res.cosets_defined}
        outcome = INCONCLUSIVE
    else:
        print(res.index, file=out)
        if args.dump_table:
            print(res.table.dump(), file=out)
        details = {"order": res.index, "cosets_defined": res.cosets_defined,
                   "coincidences": res.coincidences}
        outcome = PASS
    _write_json(args.out, _single_check_report("order", outcome, details))
    return _EXIT[outcome]


def _cmd_abelianize(args, out):
    p = parse_presentation(_read(args.file))
    inv = abelian_invariants(p)
    print(inv, file=out)
    _write_json(args.out, _single_check_report("abelianize", PASS, {
        "free_rank": inv.free_rank, "torsion": list(inv.torsion),
        "relation_matrix": relation_matrix(p).tolist()}))
    return EXIT_PASS


def _cmd_simplify(args, out):
    p = parse_presentation(_read(args.file))
    q = greedy_simplify(p, args.passes)
    out.write(print_presentation(q))
    _write_json(args.out, _single_check_report("simplify", PASS, {
        "generators": list(q.generators), "relators": [q.format(r) for r in q.relators],
        "total_length_before": p.total_length(), "total_length_after": q.total_length()}))
    return EXIT_PASS


def _cmd_replay(args, out):
    if args.paper:
        script = derivation_script()
    elif args.script:
        script = parse_script(_read(args.script))
    else:
        raise _UsageError("give a script file or --paper")
    if args.print_script:
        out.write(format_script(script))
        return EXIT_PASS
    start = parse_presentation(_read(args.presentation)) if args.presentation else script.start
    if start is None:
        raise _UsageError("script has no start presentation; pass --presentation")
    rep = replay_derivation(start, script)
    for i, p in enumerate(rep.intermediate_presentations):
        flag = " MISMATCH" if any(m.index == i for m in rep.mismatches) else ""
        print(f"[{i + 1}] {script.steps[i].kind.value}: {p}{flag}", file=out)
    for m in rep.mismatches:
        print(f"mismatch at step {m.index + 1}: {m.detail}\n  expected {m.expected}\n  actual   {m.actual}",
              file=out)
    if rep.error:
        print(f"step {rep.error[0] + 1} does not apply: {rep.error[1]}", file=out)
    print(f"steps applied: {rep.steps_applied}; isomorphism-preserving prefix: "
          f"{rep.isomorphism_preserving_prefix_length}", file=out)
    outcome = PASS if rep.ok else FAIL
    _write_json(args.out, _single_check_report("replay", outcome, {
        "steps_applied": rep.steps_applied,
        "isomorphism_preserving_prefix_length": rep.isomorphism_preserving_prefix_length,
        "mismatch_indices": [m.index for m in rep.mismatches],
        "error": list(rep.error) if rep.error else None}))
    return _EXIT[outcome]


def _cmd_perm_search(args, out):
    p = parse_presentation(_read(args.file))
    try:
        found = find_epimorphism(p, args.degree, args.target_order, args.cap, even=not args.all_perms)
    except SearchOverflow as exc:
        print(f"inconclusive: {exc}", file=out)
        _write_json(args.out, _single_check_report("perm-search", INCONCLUSIVE, {"reason": str(exc)}))
        return EXIT_INCONCLUSIVE
    if found is None:
        print("no epimorphism found", file=out)
        _write_json(args.out, _single_check_report("perm-search", FAIL, {"assignment": None}))
        return EXIT_FAIL
    for s, x in zip(p.generators, found):
        print(f"{s} -> {x}", file=out)
    image = len(closure(found, cap=args.target_order)) if found else 1
    print(f"image order {image}", file=out)
    _write_json(args.out, _single_check_report("perm-search", PASS, {
        "assignment": {s: str(x) for s, x in zip(p.generators, found)}, "image_order": image}))
    return EXIT_PASS


def _cmd_verify(args, out):
    rep = verify_paper(args.n, max_cosets=args.max_cosets, strategy=args.strategy)
    print(rep.summary(), file=out)
    _write_json(args.out, rep.to_dict())
    return _EXIT[rep.outcome]


_COMMANDS = {
    "order": _cmd_order,
    "abelianize": _cmd_abelianize,
    "simplify": _cmd_simplify,
    "replay": _cmd_replay,
    "perm-search": _cmd_perm_search,
    "verify-paper": _cmd_verify,
}


def run(argv: Sequence[str], out=None, err=None) -> int:
    """Run one command line; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _build_parser().parse_args(list(argv))
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=err)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
    except OSError as exc:
        print(f"error: {exc}", file=err)
    return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
