"""Free-group words and finite presentations.

A word is a tuple of nonzero integers: ``k`` stands for the k-th generator
(1-based) and ``-k`` for its inverse. Words read left to right, so ``(1, 2)``
is "first generator 1, then generator 2".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

Word = tuple  # tuple[int, ...]
GeneratorRef = Union[int, str]

__all__ = [
    "Word",
    "Presentation",
    "free_reduce",
    "invert",
    "concat",
    "cyclic_reduce",
    "cyclic_permutations",
    "substitute",
    "substitute_all",
    "exponent_sum",
    "power",
    "canonical_relator",
    "format_word",
    "parse_word",
    "parse_relations",
    "WordSyntaxError",
]


def free_reduce(w: Iterable[int]) -> Word:
    """Cancel adjacent ``g, -g`` pairs until none remain."""
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a valid letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w: Sequence[int]) -> Word:
    return free_reduce(-x for x in reversed(w))


def concat(*words: Sequence[int]) -> Word:
    return free_reduce(x for w in words for x in w)


def power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    return free_reduce(tuple(w) * k)


def cyclic_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator . core . conjugator^-1``.

    ``core`` is cyclically reduced: its first letter is not the inverse of its
    last.
    """
    r = free_reduce(w)
    i, j = 0, len(r) - 1
    while i < j and r[i] == -r[j]:
        i += 1
        j -= 1
    return r[i:j + 1], r[:i]


def cyclic_permutations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def canonical_relator(w: Sequence[int]) -> Word:
    """Representative of the class of ``w`` under conjugation and inversion.

    Two relators generate the same normal subgroup of the free group whenever
    their canonical forms agree.
    """
    core, _ = cyclic_reduce(w)
    if not core:
        return ()
    candidates = cyclic_permutations(core) + cyclic_permutations(invert(core))
    return min(candidates)


def substitute(w: Sequence[int], g: int, replacement: Sequence[int]) -> Word:
    """Replace generator ``g`` (a positive index) by ``replacement``.

    ``replacement`` must not mention ``g``; the substitution would otherwise not
    be a well-defined elimination.
    """
    if g <= 0:
        raise ValueError(f"generator index must be positive, got {g}")
    if any(abs(x) == g for x in replacement):
        raise ValueError(f"replacement word mentions generator {g}")
    rep = tuple(replacement)
    rep_inv = invert(rep)
    out: list[int] = []
    for x in w:
        if x == g:
            out.extend(rep)
        elif x == -g:
            out.extend(rep_inv)
        else:
            out.append(x)
    return free_reduce(out)


def substitute_all(w: Sequence[int], images: Sequence[Sequence[int]]) -> Word:
    """Apply the endomorphism sending generator ``k`` to ``images[k-1]``.

    Unlike :func:`substitute` this is simultaneous, so images may mention any
    generator of the target alphabet.
    """
    inv_images = [invert(im) for im in images]
    out: list[int] = []
    for x in w:
        out.extend(images[x - 1] if x > 0 else inv_images[-x - 1])
    return free_reduce(out)


def exponent_sum(w: Sequence[int], g: int) -> int:
    return sum(1 if x == g else -1 for x in w if abs(x) == g)


# --------------------------------------------------------------------------
# Presentations


@dataclass(frozen=True)
class Presentation:
    """Generators (by symbol) and relators (reduced words meaning ``r = 1``).

    ``quotient`` marks presentations reached through a move that may have
    shrunk the group; it is bookkeeping and takes no part in equality.
    """

    generators: tuple
    relators: tuple = ()
    label: str = field(default="", compare=False)
    quotient: bool = field(default=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generator symbols in {gens}")
        for s in gens:
            if not isinstance(s, str) or not s:
                raise ValueError(f"bad generator symbol {s!r}")
        rels = []
        for r in self.relators:
            r = free_reduce(r)
            for x in r:
                if abs(x) > len(gens):
                    raise ValueError(f"relator {r} uses undeclared generator {abs(x)}")
            rels.append(r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def from_strings(cls, generators, relators=(), label="") -> "Presentation":
        """Build from symbol names and relator strings in ``a b^-1 (a b)^2`` syntax.

        A relator string may also be an equation chain ``u = v = w``.
        """
        gens = tuple(generators.split()) if isinstance(generators, str) else tuple(generators)
        rels = [w for r in relators for w in parse_relations(r, gens)]
        return cls(gens, tuple(rels), label)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, g: GeneratorRef) -> int:
        """1-based index of a generator given by index or symbol."""
        if isinstance(g, str):
            try:
                return self.generators.index(g) + 1
            except ValueError:
                raise KeyError(f"unknown generator {g!r}") from None
        if not 1 <= g <= self.rank:
            raise KeyError(f"generator index {g} out of range 1..{self.rank}")
        return g

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.generators)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def relator_classes(self) -> list:
        """Sorted canonical forms of the nontrivial relators."""
        return sorted(c for c in map(canonical_relator, self.relators) if c)

    def equivalent_to(self, other: "Presentation") -> bool:
        """Same symbols, same relator multiset up to conjugation and inversion."""
        return (self.generators == other.generators
                and self.relator_classes() == other.relator_classes())

    def with_relators(self, relators, **kw) -> "Presentation":
        return Presentation(self.generators, tuple(relators),
                            kw.get("label", self.label),
                            kw.get("quotient", self.quotient))

    def __str__(self):
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"< {' '.join(self.generators)} | {rels} >"


# --------------------------------------------------------------------------
# Text syntax: factors are ``sym``, ``sym^k`` or ``( word )^k``; ``1`` is the
# identity.


class WordSyntaxError(ValueError):
    def __init__(self, message, column=None, expected=None):
        self.column = column
        self.expected = expected
        where = f" at column {column}" if column is not None else ""
        super().__init__(f"{message}{where}")


_TOKEN = re.compile(r"\s*(?:(?P<sym>[A-Za-z_][A-Za-z0-9_]*)|(?P<one>1)(?![0-9])"
                    r"|(?P<lp>\()|(?P<rp>\))|(?P<caret>\^)\s*(?P<exp>[-+]?\d+)?)")


def parse_word(text: str, symbols: Sequence[str]) -> Word:
    index = {s: i + 1 for i, s in enumerate(symbols)}
    stack: list[list[int]] = [[]]
    pos = 0
    last: list[int] | None = None
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise WordSyntaxError(f"unexpected character {text[col - 1]!r}", col,
                                  "generator, '(', ')' or '^'")
        col = m.start(m.lastindex or 0) + 1
        if m.group("sym"):
            s = m.group("sym")
            if s not in index:
                raise WordSyntaxError(f"undeclared generator {s!r}", col, "declared generator")
            last = [index[s]]
            stack[-1].extend(last)
        elif m.group("one"):
            last = []
        elif m.group("lp"):
            stack.append([])
            last = None
        elif m.group("rp"):
            if len(stack) == 1:
                raise WordSyntaxError("unbalanced ')'", col, "factor")
            last = stack.pop()
            stack[-1].extend(last)
        else:
            if m.group("exp") is None:
                raise WordSyntaxError("missing exponent", m.end() + 1, "integer")
            if last is None:
                raise WordSyntaxError("exponent without base", col, "factor")
            k = int(m.group("exp"))
            del stack[-1][len(stack[-1]) - len(last):]
            stack[-1].extend(power(last, k))
            last = None
        pos = m.end()
    if len(stack) != 1:
        raise WordSyntaxError("unclosed '('", len(text) + 1, "')'")
    return free_reduce(stack[0])


def parse_relations(text: str, symbols: Sequence[str]) -> list:
    """Parse ``w`` or an equation chain into relators.

    A chain ending in the identity, ``u = v = 1``, gives one relator per
    nontrivial member (``u``, ``v``). Any other chain ``u = v = w`` gives the
    adjacent quotients ``u v^-1`` and ``v w^-1``.
    """
    sides = [parse_word(s, symbols) for s in text.split("=")]
    if len(sides) == 1:
        return sides
    if not sides[-1]:
        return [s for s in sides if s] or [()]
    return [concat(u, invert(v)) for u, v in zip(sides, sides[1:])]


def format_word(w: Sequence[int], symbols: Sequence[str]) -> str:
    """Render with runs collapsed to powers: ``(1, 1, -2)`` -> ``a^2 b^-1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        k = (j - i) * (1 if w[i] > 0 else -1)
        s = symbols[abs(w[i]) - 1]
        parts.append(s if k == 1 else f"{s}^{k}")
        i = j
    return " ".join(parts)
