"""Todd-Coxeter coset enumeration.

Two strategies share one table implementation:

* ``felsch`` defines cosets in strict row/column order and after every
  definition or deduction scans the cyclic conjugates of the relators that
  start with the new letter;
* ``hlt`` scans every relator from every coset, filling gaps as it goes, and
  runs a lookahead pass before giving up at the coset cap.

Columns are ordered ``g1, g1^-1, g2, g2^-1, ...``. Coincidences are resolved
immediately through a union-find forest whose roots are the smaller coset
numbers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .permgrp import Permutation
from .words import Presentation, Word, cyclic_permutations, cyclic_reduce, free_reduce, invert

__all__ = [
    "CosetTable",
    "EnumerationResult",
    "IncompleteTable",
    "enumerate_cosets",
    "order",
    "permutation_rep",
    "check_table",
    "DEFAULT_MAX_COSETS",
]

DEFAULT_MAX_COSETS = 100_000
FELSCH, HLT = "felsch", "hlt"


class IncompleteTable(ValueError):
    pass


def _col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


@dataclass(frozen=True)
class CosetTable:
    """A coset table with cosets renumbered ``0..index-1`` (0 is the subgroup).

    ``rows[c][j]`` is the coset reached from ``c`` by column ``j`` (see module
    docstring for the column order), or ``None`` if undefined.
    """

    generators: tuple
    rows: tuple

    @property
    def index(self) -> int:
        return len(self.rows)

    def is_complete(self) -> bool:
        return all(e is not None for row in self.rows for e in row)

    def act(self, coset: int, w: Sequence[int]) -> Optional[int]:
        c = coset
        for x in w:
            c = self.rows[c][_col(x)]
            if c is None:
                return None
        return c

    def dump(self) -> str:
        """One line per coset: ``coset: image under g1 g1^-1 g2 ...`` (1-based)."""
        head = ["coset"] + [s + suf for s in self.generators for suf in ("", "^-1")]
        lines = ["\t".join(head)]
        for c, row in enumerate(self.rows):
            lines.append("\t".join([str(c + 1)] + ["-" if e is None else str(e + 1) for e in row]))
        return "\n".join(lines)


@dataclass
class EnumerationResult:
    completed: bool
    index: Optional[int]
    cap: int
    table: Optional[CosetTable]
    strategy: str
    cosets_defined: int = 0
    coincidences: int = 0
    max_live: int = 0

    @property
    def overflow(self) -> bool:
        return not self.completed

    def __str__(self):
        if self.completed:
            return f"Completed({self.index})"
        return f"Overflow({self.cap})"


class _Overflow(Exception):
    pass


class _Enumerator:
    def __init__(self, p: Presentation, subgroup: Sequence[Word], max_cosets: int):
        self.ngens = p.rank
        self.ncols = 2 * self.ngens
        self.inv_col = [j ^ 1 for j in range(self.ncols)]
        self.relators = [tuple(_col(x) for x in cyclic_reduce(r)[0]) for r in p.relators]
        self.relators = [r for r in self.relators if r]
        self.subgroup = [tuple(_col(x) for x in free_reduce(w)) for w in subgroup]
        self.subgroup = [w for w in self.subgroup if w]
        self.max_cosets = max_cosets
        self.table: list = [[None] * self.ncols]
        self.parent = [0]
        self.live = 1
        self.defined = 1
        self.coincidences = 0
        self.max_live = 1
        self.deductions: deque = deque()
        self.track_deductions = False

    # -- union-find -------------------------------------------------------

    def find(self, c: int) -> int:
        root = c
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    # -- table primitives -------------------------------------------------

    def new_coset(self) -> int:
        if self.live >= self.max_cosets:
            raise _Overflow
        c = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(c)
        self.live += 1
        self.defined += 1
        self.max_live = max(self.max_live, self.live)
        return c

    def set_entry(self, c: int, j: int, d: int) -> None:
        self.table[c][j] = d
        self.table[d][self.inv_col[j]] = c
        if self.track_deductions:
            self.deductions.append((c, j))

    def define(self, c: int, j: int) -> None:
        self.set_entry(c, j, self.new_coset())

    # -- coincidences -----------------------------------------------------

    def coincidence(self, a: int, b: int) -> None:
        queue: deque = deque()
        self._merge(a, b, queue)
        table, inv_col = self.table, self.inv_col
        while queue:
            g = queue.popleft()
            row = table[g]
            for j in range(self.ncols):
                d = row[j]
                if d is None:
                    continue
                ji = inv_col[j]
                if table[d][ji] == g:
                    table[d][ji] = None
                mu, nu = self.find(g), self.find(d)
                if table[mu][j] is not None:
                    self._merge(nu, table[mu][j], queue)
                elif table[nu][ji] is not None:
                    self._merge(mu, table[nu][ji], queue)
                else:
                    self.set_entry(mu, j, nu)

    def _merge(self, a: int, b: int, queue: deque) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        self.live -= 1
        self.coincidences += 1
        queue.append(hi)

    # -- scanning ---------------------------------------------------------

    def scan(self, c: int, w: Sequence[int], fill: bool) -> None:
        """Trace ``w`` from ``c`` forwards and backwards.

        A one-letter gap yields a deduction, a closed trace that ends at
        two different cosets a coincidence. With ``fill`` the remaining gap is
        bridged by new definitions.
        """
        table, inv_col = self.table, self.inv_col
        f, i = c, 0
        b, j = c, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][inv_col[w[j]]] is not None:
                b = table[b][inv_col[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                self.set_entry(f, w[i], b)
                return
            if not fill:
                return
            self.define(f, w[i])

    # -- strategies -------------------------------------------------------

    def run_hlt(self) -> None:
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        self._hlt_sweep()
        while not self.closing_pass():
            self._hlt_sweep()

    def _hlt_sweep(self) -> None:
        c = 0
        while c < len(self.table):
            for w in self.relators:
                if not self.is_live(c):
                    break
                self._scan_with_lookahead(c, w)
            if self.is_live(c):
                for j in range(self.ncols):
                    if self.table[c][j] is None:
                        self._define_with_lookahead(c, j)
            c += 1

    def _scan_with_lookahead(self, c, w):
        while self.is_live(c):
            try:
                self.scan(c, w, fill=True)
                return
            except _Overflow:
                self._lookahead()

    def _define_with_lookahead(self, c, j):
        try:
            self.define(c, j)
        except _Overflow:
            self._lookahead()
            if self.is_live(c) and self.table[c][j] is None:
                self.define(c, j)

    def _lookahead(self) -> None:
        before = self.live
        for d in range(len(self.table)):
            for w in self.relators:
                if not self.is_live(d):
                    break
                self.scan(d, w, fill=False)
        if self.live >= before:
            raise _Overflow

    def closing_pass(self) -> bool:
        """Scan every relator at every live coset without filling.

        Returns True when the table is complete and nothing changed.
        """
        before = (self.live, self.coincidences)
        for d in range(len(self.table)):
            for w in self.relators:
                if not self.is_live(d):
                    break
                self.scan(d, w, fill=False)
        if (self.live, self.coincidences) != before:
            return False
        return all(e is not None for c in range(len(self.table)) if self.is_live(c)
                   for e in self.table[c])

    def run_felsch(self) -> None:
        self.track_deductions = True
        # cyclic conjugates of relators and their inverses, by first letter
        conj: list = [[] for _ in range(self.ncols)]
        seen = set()
        for r in self.relators:
            for w in cyclic_permutations(r) + cyclic_permutations(
                    tuple(self.inv_col[x] for x in reversed(r))):
                if w not in seen:
                    seen.add(w)
                    conj[w[0]].append(w)
        self.conjugates = conj
        for w in self.subgroup:
            self.scan(0, w, fill=True)
        self.process_deductions()
        # relators must hold at the subgroup coset even before any deduction
        for w in self.relators:
            if self.is_live(0):
                self.scan(0, w, fill=False)
        self.process_deductions()
        self._felsch_sweep()
        self.track_deductions = False
        while not self.closing_pass():
            self.track_deductions = True
            self._felsch_sweep()
            self.track_deductions = False

    def _felsch_sweep(self) -> None:
        c = 0
        while c < len(self.table):
            for j in range(self.ncols):
                if not self.is_live(c):
                    break
                if self.table[c][j] is None:
                    self.define(c, j)
                    self.process_deductions()
            c += 1

    def process_deductions(self) -> None:
        table, inv_col, conj = self.table, self.inv_col, self.conjugates
        while self.deductions:
            c, j = self.deductions.popleft()
            if not self.is_live(c):
                continue
            for w in conj[j]:
                if not self.is_live(c):
                    break
                self.scan(c, w, fill=False)
            d = table[c][j]
            if d is None:
                continue
            d = self.find(d)
            for w in conj[inv_col[j]]:
                if not self.is_live(d):
                    break
                self.scan(d, w, fill=False)

    # -- output -----------------------------------------------------------

    def compact(self, symbols) -> CosetTable:
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        renum = {c: i for i, c in enumerate(live)}
        rows = []
        for c in live:
            row = []
            for e in self.table[c]:
                row.append(None if e is None else renum[self.find(e)])
            rows.append(tuple(row))
        return CosetTable(tuple(symbols), tuple(rows))


def enumerate_cosets(
    p: Presentation,
    subgroup_generators: Sequence[Word] = (),
    strategy: str = FELSCH,
    max_cosets: int = DEFAULT_MAX_COSETS,
) -> EnumerationResult:
    """Enumerate the cosets of ``<subgroup_generators>`` in the group of ``p``.

    ``Completed(k)`` means the subgroup has index ``k`` (the group order for
    an empty subgroup list). Overflow means more than ``max_cosets`` live
    cosets were needed and says nothing about finiteness.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    strategy = strategy.lower()
    if strategy not in (FELSCH, HLT):
        raise ValueError(f"unknown strategy {strategy!r}")
    en = _Enumerator(p, subgroup_generators, max_cosets)
    try:
        if strategy == FELSCH:
            en.run_felsch()
        else:
            en.run_hlt()
    except _Overflow:
        return EnumerationResult(False, None, max_cosets, None, strategy,
                                 en.defined, en.coincidences, en.max_live)
    table = en.compact(p.generators)
    return EnumerationResult(True, table.index, max_cosets, table, strategy,
                             en.defined, en.coincidences, en.max_live)


def order(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS,
          strategy: str = FELSCH) -> EnumerationResult:
    return enumerate_cosets(p, (), strategy, max_cosets)


def permutation_rep(t: CosetTable) -> list:
    """Action of each generator on the cosets, as permutations of ``1..index``."""
    if not t.is_complete():
        raise IncompleteTable("coset table has undefined entries")
    perms = []
    for g in range(len(t.generators)):
        perms.append(Permutation(tuple(row[2 * g] + 1 for row in t.rows)))
    return perms


def check_table(t: CosetTable, p: Presentation, subgroup_generators: Sequence[Word] = ()) -> list:
    """List every way ``t`` fails to be a closed coset table for ``p``.

    Written against the table alone so that it shares no code with the
    enumerator. An empty list means: all entries defined, each generator
    column and its inverse column are mutually inverse, every relator closes
    at every coset, every subgroup generator fixes coset 0, and every coset is
    reachable from coset 0.
    """
    problems = []
    n = len(t.rows)
    m = len(t.generators)
    for c, row in enumerate(t.rows):
        if len(row) != 2 * m:
            problems.append(f"row {c} has {len(row)} columns")
            continue
        for k in range(m):
            d, e = row[2 * k], row[2 * k + 1]
            if d is None or e is None:
                problems.append(f"row {c} generator {k + 1} undefined")
                continue
            if not (0 <= d < n and 0 <= e < n):
                problems.append(f"row {c} generator {k + 1} out of range")
                continue
            if t.rows[d][2 * k + 1] != c:
                problems.append(f"{c}^g{k + 1}={d} but {d}^g{k + 1}^-1 != {c}")
            if t.rows[e][2 * k] != c:
                problems.append(f"{c}^g{k + 1}^-1={e} but {e}^g{k + 1} != {c}")
    if problems:
        return problems

    def trace(c, w):
        for x in w:
            c = t.rows[c][2 * (x - 1)] if x > 0 else t.rows[c][2 * (-x - 1) + 1]
        return c

    for r in p.relators:
        for c in range(n):
            if trace(c, r) != c:
                problems.append(f"relator {r} does not close at coset {c}")
    for w in subgroup_generators:
        if trace(0, w) != 0:
            problems.append(f"subgroup generator {w} moves coset 0")
    reached = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for d in t.rows[c]:
            if d not in reached:
                reached.add(d)
                frontier.append(d)
    if len(reached) != n:
        problems.append(f"only {len(reached)} of {n} cosets reachable")
    return problems
