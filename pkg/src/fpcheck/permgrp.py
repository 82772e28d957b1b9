"""Small permutation groups: composition, closure, and epimorphism search.

Permutations act on points ``1..degree`` from the right, matching the
left-to-right reading of words: ``compose(p, q)`` applies ``p`` first.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .words import Presentation, Word, cyclic_reduce

__all__ = [
    "Permutation",
    "ClosureOverflow",
    "SearchOverflow",
    "compose",
    "closure",
    "evaluate",
    "satisfies",
    "alternating_group",
    "symmetric_group",
    "find_epimorphism",
]


class ClosureOverflow(RuntimeError):
    pass


class SearchOverflow(RuntimeError):
    """Epimorphism search gave up before exhausting the candidates."""


@dataclass(frozen=True, order=True)
class Permutation:
    """Bijection of ``1..degree``; ``images[i-1]`` is the image of point ``i``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation of 1..{len(imgs)}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        imgs = list(range(1, degree + 1))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, 1))

    def cycles(self) -> list:
        seen, out = set(), []
        for i in range(1, self.degree + 1):
            if i in seen or self(i) == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self(i)
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm
        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) if cyc else "()"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` then ``q``."""
    if p.degree != q.degree:
        raise ValueError("degree mismatch")
    qi = q.images
    return Permutation(tuple(qi[i - 1] for i in p.images))


def closure(gens: Sequence[Permutation], cap: int = 10_000) -> set:
    """All elements of the group generated by ``gens`` (breadth first).

    Raises :class:`ClosureOverflow` once more than ``cap`` elements are found.
    """
    if not gens:
        raise ValueError("closure needs at least one generator")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators of mixed degree")
    e = Permutation.identity(degree)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ClosureOverflow(f"closure exceeds {cap} elements")
                queue.append(y)
    return seen


def evaluate(w: Sequence[int], assignment: Sequence[Permutation]) -> Permutation:
    """Image of ``w`` when generator ``k`` maps to ``assignment[k-1]``."""
    if not assignment:
        if w:
            raise ValueError("empty assignment for a nonempty word")
        raise ValueError("cannot infer degree from an empty assignment")
    degree = assignment[0].degree
    cur = list(range(1, degree + 1))
    invs: dict = {}
    for x in w:
        if abs(x) > len(assignment):
            raise KeyError(f"generator {abs(x)} is not assigned")
        if x > 0:
            p = assignment[x - 1].images
        else:
            if x not in invs:
                invs[x] = assignment[-x - 1].inverse().images
            p = invs[x]
        cur = [p[i - 1] for i in cur]
    return Permutation(tuple(cur))


def satisfies(p: Presentation, assignment: Sequence[Permutation]) -> bool:
    return all(evaluate(r, assignment).is_identity() for r in p.relators)


def symmetric_group(degree: int) -> list:
    return [Permutation(t) for t in itertools.permutations(range(1, degree + 1))]


def alternating_group(degree: int) -> list:
    return [p for p in symmetric_group(degree) if p.is_even()]


def _power_constraints(p: Presentation) -> dict:
    """Generator -> gcd of ``k`` over relators conjugate to ``g^k``."""
    from math import gcd
    out: dict = {}
    for r in p.relators:
        core, _ = cyclic_reduce(r)
        if core and all(abs(x) == abs(core[0]) for x in core):
            g = abs(core[0])
            out[g] = gcd(out.get(g, 0), len(core))
    return out


def find_epimorphism(
    p: Presentation,
    degree: int,
    target_order: int,
    cap: int = 10_000_000,
    even: bool = True,
) -> Optional[tuple]:
    """Search for a map of ``p``'s generators onto a permutation group of
    ``target_order`` elements on ``degree`` points.

    Candidate images are the even (or, with ``even=False``, all)
    permutations of ``degree`` points, tried in lexicographic order of their
    image tuples with generators assigned in declaration order; the first
    witness is returned. A relator is checked as soon as all of its
    generators are assigned, and a pure-power relator ``g^k`` restricts
    ``g`` to elements whose order divides ``k``.

    Returns a tuple of permutations (one per generator) or ``None`` when no
    witness exists. Raises :class:`SearchOverflow` after ``cap`` partial
    assignments without a verdict.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    pool = sorted(alternating_group(degree) if even else symmetric_group(degree))
    powers = _power_constraints(p)
    m = p.rank
    candidates = []
    for g in range(1, m + 1):
        k = powers.get(g)
        candidates.append([x for x in pool if k is None or k % x.order() == 0])

    # relators become checkable once their largest generator is assigned
    ready: list = [[] for _ in range(m + 1)]
    for r in p.relators:
        if r:
            ready[max(abs(x) for x in r)].append(r)

    visited = 0
    chosen: list = []

    def extend(depth):
        nonlocal visited
        if depth == m:
            imgs = tuple(chosen)
            try:
                if len(closure(imgs, cap=target_order)) == target_order:
                    return imgs
            except ClosureOverflow:
                pass
            return None
        for x in candidates[depth]:
            visited += 1
            if visited > cap:
                raise SearchOverflow(f"no verdict after {cap} partial assignments")
            chosen.append(x)
            if all(evaluate(r, chosen).is_identity() for r in ready[depth + 1]):
                found = extend(depth + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    if m == 0:
        return () if target_order == 1 else None
    return extend(0)
