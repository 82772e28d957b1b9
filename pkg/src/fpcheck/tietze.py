"""Moves on presentations and a replay engine for written-out derivations.

Every move except :func:`add_quotient_relator` preserves the isomorphism type
of the presented group. The replay engine applies a script of typed steps,
compares each intermediate presentation against a transcribed expectation,
and records where the isomorphism-preserving prefix of the script ends.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .words import (
    Presentation,
    Word,
    canonical_relator,
    concat,
    cyclic_permutations,
    cyclic_reduce,
    free_reduce,
    invert,
    parse_relations,
    parse_word,
    substitute,
    substitute_all,
)

__all__ = [
    "TietzeError",
    "StepKind",
    "DerivationStep",
    "DerivationScript",
    "DerivationReport",
    "Mismatch",
    "eliminate_generator",
    "conjugate_relator",
    "change_generators",
    "add_quotient_relator",
    "normalize_modulo_torsion",
    "torsion_canonical",
    "torsion_orders",
    "replace_relator",
    "apply_step",
    "replay_derivation",
    "greedy_simplify",
]


class TietzeError(ValueError):
    pass


# --------------------------------------------------------------------------
# Moves


def eliminate_generator(p: Presentation, g, via_relator: int) -> Presentation:
    """Solve relator ``via_relator`` (0-based) for ``g`` and substitute it away.

    The relator, cyclically reduced, must contain ``g`` exactly once.
    """
    gi = p.index(g)
    if not 0 <= via_relator < len(p.relators):
        raise TietzeError(f"no relator {via_relator}")
    core, _ = cyclic_reduce(p.relators[via_relator])
    hits = [k for k, x in enumerate(core) if abs(x) == gi]
    if len(hits) != 1:
        raise TietzeError(f"relator {via_relator} is not solvable for "
                          f"{p.generators[gi - 1]} ({len(hits)} occurrences)")
    k = hits[0]
    rot = core[k:] + core[:k]
    rest = rot[1:]
    # g.rest = 1  gives  g = rest^-1 ;  g^-1.rest = 1  gives  g = rest
    value = invert(rest) if rot[0] == gi else rest

    def shift(x):
        return x - 1 if x > gi else (x + 1 if x < -gi else x)

    rels = []
    for i, r in enumerate(p.relators):
        if i == via_relator:
            continue
        rels.append(tuple(shift(x) for x in substitute(r, gi, value)))
    gens = p.generators[:gi - 1] + p.generators[gi:]
    return Presentation(gens, tuple(rels), p.label, p.quotient)


def conjugate_relator(p: Presentation, idx: int, left: Sequence[int]) -> Presentation:
    """Replace relator ``idx`` by ``left . r . left^-1``."""
    if not 0 <= idx < len(p.relators):
        raise TietzeError(f"no relator {idx}")
    rels = list(p.relators)
    rels[idx] = concat(left, rels[idx], invert(left))
    return p.with_relators(rels)


def change_generators(
    p: Presentation,
    new_symbols: Sequence[str],
    old_in_terms_of_new: Sequence[Word],
    new_in_terms_of_old: Sequence[Word],
) -> Presentation:
    """Rewrite ``p`` on a new generating set.

    ``old_in_terms_of_new[i]`` expresses old generator ``i+1`` over the new
    symbols and ``new_in_terms_of_old[j]`` the reverse. The two families must
    be mutually inverse automorphisms of the free group, which is checked by
    substituting each into the other.
    """
    if len(old_in_terms_of_new) != p.rank or len(new_in_terms_of_old) != len(new_symbols):
        raise TietzeError("substitution families have the wrong length")
    for i, w in enumerate(old_in_terms_of_new):
        if substitute_all(w, new_in_terms_of_old) != (i + 1,):
            raise TietzeError(f"substitutions are not mutually inverse at {p.generators[i]}")
    for j, w in enumerate(new_in_terms_of_old):
        if substitute_all(w, old_in_terms_of_new) != (j + 1,):
            raise TietzeError(f"substitutions are not mutually inverse at {new_symbols[j]}")
    rels = tuple(substitute_all(r, old_in_terms_of_new) for r in p.relators)
    return Presentation(tuple(new_symbols), rels, p.label, p.quotient)


def add_quotient_relator(p: Presentation, *words: Sequence[int]) -> Presentation:
    """Append relators; the result presents a quotient of ``p``'s group."""
    return p.with_relators(p.relators + tuple(free_reduce(w) for w in words), quotient=True)


def _runs(w):
    out = []
    for x in w:
        g, e = abs(x), (1 if x > 0 else -1)
        if out and out[-1][0] == g:
            out[-1][1] += e
        else:
            out.append([g, e])
    return out


def normalize_modulo_torsion(w: Sequence[int], orders: Mapping[int, int], strict: bool = True) -> Word:
    """Rewrite ``w`` using ``g^k = 1`` for each ``g -> k`` in ``orders``.

    Each maximal run ``g^e`` becomes ``g^(e mod k)`` with a nonnegative
    exponent; runs that vanish let their neighbours merge, and this repeats
    until stable. With ``strict=False`` generators missing from ``orders``
    are left alone instead of raising ``KeyError``.
    """
    runs = _runs(free_reduce(w))
    while True:
        out = []
        for g, e in runs:
            k = orders.get(g)
            if k is None:
                if strict:
                    raise KeyError(f"no order given for generator {g}")
            elif k > 0:
                e %= k
            if e == 0:
                continue
            if out and out[-1][0] == g:
                out[-1][1] += e
            else:
                out.append([g, e])
        if out == runs:
            break
        runs = out
    res = []
    for g, e in runs:
        res.extend([g if e > 0 else -g] * abs(e))
    return tuple(res)


def _cyclic_torsion_form(w, orders, strict):
    w = normalize_modulo_torsion(w, orders, strict)
    while True:
        runs = _runs(w)
        if len(runs) <= 1:
            return w
        if runs[0][0] != runs[-1][0]:
            break
        # bring the last run round to the front so the wrapped runs merge
        k = len(w) - abs(runs[-1][1])
        w = normalize_modulo_torsion(w[k:] + w[:k], orders, strict)
    return min(r for r in cyclic_permutations(w) if abs(r[0]) != abs(r[-1]))


def torsion_canonical(w: Sequence[int], orders: Mapping[int, int], strict: bool = True) -> Word:
    """Shortest, then least, cyclic torsion-normal form of ``w`` or ``w^-1``.

    Two relators with equal canonical forms define the same normal subgroup
    once the relators ``g^k`` of ``orders`` are present.
    """
    a = _cyclic_torsion_form(w, orders, strict)
    b = _cyclic_torsion_form(invert(w), orders, strict)
    return min(a, b, key=lambda x: (len(x), x))


def torsion_orders(p: Presentation, exclude: Sequence[int] = ()) -> dict:
    """Generator -> k for relators of ``p`` that are (conjugates of) ``g^+-k``."""
    from math import gcd
    out: dict = {}
    for i, r in enumerate(p.relators):
        if i in exclude:
            continue
        core, _ = cyclic_reduce(r)
        if core and all(x == core[0] for x in core):
            g = abs(core[0])
            out[g] = gcd(out.get(g, 0), len(core))
    return out


def _normalize_relator(p: Presentation, idx: int, orders: Mapping[int, int]) -> Presentation:
    present = torsion_orders(p, exclude=[idx])
    for g, k in orders.items():
        if present.get(g, 0) == 0 or k % present[g]:
            raise TietzeError(f"relator {p.generators[g - 1]}^{k} is not in the presentation")
    rels = list(p.relators)
    rels[idx] = torsion_canonical(rels[idx], orders, strict=False)
    return p.with_relators(rels)


def replace_relator(p: Presentation, idx: int, new: Sequence[int]) -> Presentation:
    """Replace relator ``idx`` by ``new``; an empty ``new`` deletes it.

    The replacement is accepted only if it agrees with the old relator
    modulo the pure-power relators among the others, which guarantees the
    normal closure is unchanged.
    """
    if not 0 <= idx < len(p.relators):
        raise TietzeError(f"no relator {idx}")
    orders = torsion_orders(p, exclude=[idx])
    old = p.relators[idx]
    if torsion_canonical(old, orders, strict=False) != torsion_canonical(new, orders, strict=False):
        raise TietzeError(f"{p.format(new)} is not visibly equivalent to {p.format(old)}")
    rels = list(p.relators)
    if free_reduce(new):
        rels[idx] = free_reduce(new)
    else:
        del rels[idx]
    return p.with_relators(rels)


# --------------------------------------------------------------------------
# Derivation scripts


class StepKind(str, enum.Enum):
    ELIMINATE_GENERATOR = "EliminateGenerator"
    CONJUGATE_RELATOR = "ConjugateRelator"
    CHANGE_GENERATORS = "ChangeGenerators"
    ADD_QUOTIENT_RELATOR = "AddQuotientRelator"
    NORMALIZE_MODULO_TORSION = "NormalizeModuloTorsion"
    REPLACE_RELATOR_BY_EQUIVALENT = "ReplaceRelatorByEquivalent"


@dataclass(frozen=True)
class DerivationStep:
    """One move of a script.

    Words in ``params`` are kept as text and parsed against the generators of
    the incoming presentation, so a script reads like the derivation it
    transcribes. Relator indices are 0-based. ``checkpoints`` (torsion steps
    only) are relations that must all agree with the relator being
    normalised; ``note`` is free text carried into reports.
    """

    kind: StepKind
    params: Mapping = field(default_factory=dict)
    expected: Optional[Presentation] = None
    note: str = ""
    checkpoints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", StepKind(self.kind))
        required = {
            StepKind.ELIMINATE_GENERATOR: {"generator", "relator"},
            StepKind.CONJUGATE_RELATOR: {"relator", "left"},
            StepKind.CHANGE_GENERATORS: {"new_symbols", "old_in_terms_of_new", "new_in_terms_of_old"},
            StepKind.ADD_QUOTIENT_RELATOR: {"words", "quotient"},
            StepKind.NORMALIZE_MODULO_TORSION: {"relator", "orders"},
            StepKind.REPLACE_RELATOR_BY_EQUIVALENT: {"relator", "replacement"},
        }[self.kind]
        missing = required - set(self.params)
        if missing:
            raise TietzeError(f"{self.kind.value} step missing {sorted(missing)}")
        if self.kind is StepKind.ADD_QUOTIENT_RELATOR and self.params["quotient"] is not True:
            raise TietzeError("AddQuotientRelator steps must carry quotient=True")

    @property
    def is_quotient(self) -> bool:
        return self.kind is StepKind.ADD_QUOTIENT_RELATOR

    # convenience constructors

    @classmethod
    def eliminate(cls, generator, relator, **kw):
        return cls(StepKind.ELIMINATE_GENERATOR, {"generator": generator, "relator": relator}, **kw)

    @classmethod
    def conjugate(cls, relator, left, **kw):
        return cls(StepKind.CONJUGATE_RELATOR, {"relator": relator, "left": left}, **kw)

    @classmethod
    def change(cls, new_symbols, old_in_terms_of_new, new_in_terms_of_old, **kw):
        return cls(StepKind.CHANGE_GENERATORS, {
            "new_symbols": tuple(new_symbols),
            "old_in_terms_of_new": tuple(old_in_terms_of_new),
            "new_in_terms_of_old": tuple(new_in_terms_of_old)}, **kw)

    @classmethod
    def quotient(cls, *words, **kw):
        return cls(StepKind.ADD_QUOTIENT_RELATOR, {"words": tuple(words), "quotient": True}, **kw)

    @classmethod
    def normalize(cls, relator, orders, **kw):
        return cls(StepKind.NORMALIZE_MODULO_TORSION, {"relator": relator, "orders": dict(orders)}, **kw)

    @classmethod
    def replace(cls, relator, replacement, **kw):
        return cls(StepKind.REPLACE_RELATOR_BY_EQUIVALENT,
                   {"relator": relator, "replacement": replacement}, **kw)


@dataclass(frozen=True)
class DerivationScript:
    steps: tuple = ()
    start: Optional[Presentation] = None
    title: str = ""

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class Mismatch:
    index: int
    expected: object
    actual: object
    detail: str = ""


@dataclass
class DerivationReport:
    steps_applied: int = 0
    isomorphism_preserving_prefix_length: int = 0
    intermediate_presentations: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    error: Optional[tuple] = None  # (step index, message)

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.error is None

    @property
    def final(self) -> Optional[Presentation]:
        return self.intermediate_presentations[-1] if self.intermediate_presentations else None


def _w(text_or_word, symbols):
    if isinstance(text_or_word, str):
        return parse_word(text_or_word, symbols)
    return free_reduce(text_or_word)


def apply_step(p: Presentation, step: DerivationStep) -> Presentation:
    """Apply one step; raises :class:`TietzeError` if it does not apply."""
    k, a = step.kind, step.params
    syms = p.generators
    try:
        if k is StepKind.ELIMINATE_GENERATOR:
            return eliminate_generator(p, a["generator"], a["relator"])
        if k is StepKind.CONJUGATE_RELATOR:
            return conjugate_relator(p, a["relator"], _w(a["left"], syms))
        if k is StepKind.CHANGE_GENERATORS:
            new = tuple(a["new_symbols"])
            return change_generators(
                p, new,
                [_w(w, new) for w in a["old_in_terms_of_new"]],
                [_w(w, syms) for w in a["new_in_terms_of_old"]])
        if k is StepKind.ADD_QUOTIENT_RELATOR:
            return add_quotient_relator(p, *(_w(w, syms) for w in a["words"]))
        if k is StepKind.NORMALIZE_MODULO_TORSION:
            idx = a["relator"]
            if not 0 <= idx < len(p.relators):
                raise TietzeError(f"no relator {idx}")
            orders = {p.index(g): n for g, n in a["orders"].items()}
            return _normalize_relator(p, idx, orders)
        if k is StepKind.REPLACE_RELATOR_BY_EQUIVALENT:
            return replace_relator(p, a["relator"], _w(a["replacement"], syms))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, TietzeError):
            raise
        raise TietzeError(str(exc)) from exc
    raise TietzeError(f"unknown step kind {k}")


def _checkpoint_mismatches(p: Presentation, step: DerivationStep) -> list:
    """Relations listed in ``step.checkpoints`` that disagree with the relator."""
    if not step.checkpoints:
        return []
    idx = step.params["relator"]
    orders = {p.index(g): n for g, n in step.params["orders"].items()}
    target = torsion_canonical(p.relators[idx], orders, strict=False)
    bad = []
    for text in step.checkpoints:
        rels = parse_relations(text, p.generators)
        if len(rels) != 1 or torsion_canonical(rels[0], orders, strict=False) != target:
            bad.append(text)
    return bad


def replay_derivation(p0: Presentation, script) -> DerivationReport:
    """Apply ``script`` to ``p0`` and compare against the expected displays.

    Expected presentations match when generator symbols agree and the
    nontrivial relators agree as multisets up to cyclic permutation and
    inversion. A step that fails to apply is recorded in ``error`` and
    halts the replay.
    """
    steps = script.steps if isinstance(script, DerivationScript) else tuple(script)
    report = DerivationReport()
    prefix = None
    p = p0
    for i, step in enumerate(steps):
        try:
            for text in _checkpoint_mismatches(p, step):
                report.mismatches.append(Mismatch(i, text, p.format(p.relators[step.params["relator"]]),
                                                  "checkpoint disagrees modulo torsion"))
            p = apply_step(p, step)
        except (TietzeError, KeyError, ValueError) as exc:
            report.error = (i, str(exc))
            break
        report.steps_applied += 1
        report.intermediate_presentations.append(p)
        if step.is_quotient and prefix is None:
            prefix = i
        if step.expected is not None and not step.expected.equivalent_to(p):
            report.mismatches.append(Mismatch(i, step.expected, p, "presentation differs"))
    report.isomorphism_preserving_prefix_length = report.steps_applied if prefix is None else prefix
    return report


# --------------------------------------------------------------------------
# Greedy cleanup


def _tidy(p: Presentation) -> Presentation:
    seen, rels = set(), []
    for r in p.relators:
        core, _ = cyclic_reduce(r)
        c = canonical_relator(core)
        if core and c not in seen:
            seen.add(c)
            rels.append(core)
    return p.with_relators(rels)


def _best_elimination(p: Presentation) -> Optional[Presentation]:
    best = None
    # later generators go first so that ties keep the earlier symbols
    for g in range(p.rank, 0, -1):
        for i, r in enumerate(p.relators):
            if sum(1 for x in r if abs(x) == g) != 1:
                continue
            cand = _tidy(eliminate_generator(p, g, i))
            if cand.total_length() <= p.total_length() and (
                    best is None or cand.total_length() < best.total_length()):
                best = cand
    return best


def _shorten_pairs(p: Presentation) -> Optional[Presentation]:
    rels = list(p.relators)
    changed = False
    for i in range(len(rels)):
        for j in range(len(rels)):
            if i == j:
                continue
            for s in cyclic_permutations(rels[j]) + cyclic_permutations(invert(rels[j])):
                cand, _ = cyclic_reduce(concat(rels[i], s))
                if len(cand) < len(rels[i]):
                    rels[i] = cand
                    changed = True
    return p.with_relators(rels) if changed else None


def greedy_simplify(p: Presentation, max_passes: int = 20) -> Presentation:
    """Shrink ``p`` by generator eliminations and relator-by-relator products.

    Each pass first removes one generator when that does not lengthen the
    relators, then replaces any relator that a product with a cyclic
    conjugate of another relator (or its inverse) makes shorter. Stops at a
    fixed point or after ``max_passes``.
    """
    p = _tidy(p)
    for _ in range(max_passes):
        nxt = _best_elimination(p)
        if nxt is None:
            nxt = _shorten_pairs(p)
            if nxt is not None:
                nxt = _tidy(nxt)
        if nxt is None:
            break
        p = nxt
    return p
