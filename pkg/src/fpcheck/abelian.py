"""Exact integer linear algebra: relation matrices, Smith normal form,
abelian invariants and handle-count Euler characteristics.

Entries are Python ints, so intermediate growth never wraps around.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .words import Presentation, exponent_sum

__all__ = [
    "IntMatrix",
    "SNFResult",
    "AbelianInvariants",
    "HandleCountTable",
    "relation_matrix",
    "smith_normal_form",
    "abelian_invariants",
    "is_perfect",
    "determinant",
    "euler_characteristic",
]


@dataclass(frozen=True)
class IntMatrix:
    """Rectangular integer matrix; ``ncols`` is kept explicitly so that
    matrices with no rows still know their width."""

    rows: tuple
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("give ncols for an empty matrix")
            ncols = len(rows[0])
        return cls(tuple(map(tuple, rows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.rows), other.ncols)

    def tolist(self) -> list:
        return [list(r) for r in self.rows]


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    """``left @ input @ right`` is diagonal with entries ``diagonal``."""

    diagonal: tuple
    left: IntMatrix
    right: IntMatrix

    def diagonal_matrix(self, shape) -> IntMatrix:
        r, c = shape
        return IntMatrix(tuple(tuple(self.diagonal[i] if i == j and i < len(self.diagonal) else 0
                                     for j in range(c)) for i in range(r)), c)


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivot: the nonzero entry of least absolute value in the remaining
    submatrix, ties to the lowest (row, column).
    """
    nr, nc = m.shape
    a = m.tolist()
    left = IntMatrix.identity(nr).tolist()
    right = IntMatrix.identity(nc).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in right:
                row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        left[i] = [-x for x in left[i]]

    for t in range(min(nr, nc)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, nr):
                add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, nc):
                add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, nr)) or any(a[t][j] for j in range(t + 1, nc)):
                continue  # remainders are smaller than p: repivot
            bad = next((i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SNFResult(diag, IntMatrix(tuple(map(tuple, left)), nr),
                     IntMatrix(tuple(map(tuple, right)), nc))


def relation_matrix(p: Presentation) -> IntMatrix:
    """Row per relator, column per generator, entries are exponent sums."""
    return IntMatrix(tuple(tuple(exponent_sum(r, g) for g in range(1, p.rank + 1))
                           for r in p.relators), p.rank)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple = ()

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = ["Z"] * self.free_rank if self.free_rank <= 3 else [f"Z^{self.free_rank}"]
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    """First homology of the presented group."""
    diag = smith_normal_form(relation_matrix(p)).diagonal
    nonzero = [d for d in diag if d]
    return AbelianInvariants(p.rank - len(nonzero), tuple(d for d in nonzero if d > 1))


def is_perfect(p: Presentation) -> bool:
    return abelian_invariants(p).is_trivial()


# --------------------------------------------------------------------------
# Handle counts


@dataclass(frozen=True)
class HandleCountTable:
    """Handles of a manifold of dimension ``manifold_dimension``, by index.

    Build with :meth:`from_handles`, which adds up counts whose indices
    coincide (as happens for small parameter values) and sets ``merged``.
    """

    manifold_dimension: int
    counts: Mapping = field(default_factory=dict)
    merged: bool = False

    def __post_init__(self):
        if self.manifold_dimension < 0:
            raise ValueError("negative dimension")
        for i, c in self.counts.items():
            if not 0 <= i <= self.manifold_dimension:
                raise ValueError(f"handle index {i} outside 0..{self.manifold_dimension}")
            if c < 0:
                raise ValueError(f"negative count at index {i}")

    @classmethod
    def from_handles(cls, dimension: int, handles: Iterable) -> "HandleCountTable":
        """``handles`` is an iterable of ``(index, count)`` pairs."""
        counts: dict = {}
        merged = False
        for i, c in handles:
            if i in counts:
                merged = True
            counts[i] = counts.get(i, 0) + c
        return cls(dimension, dict(sorted(counts.items())), merged)

    def as_list(self) -> list:
        return [self.counts.get(i, 0) for i in range(self.manifold_dimension + 1)]

    def __getitem__(self, i):
        return self.counts.get(i, 0)


def euler_characteristic(h: HandleCountTable) -> int:
    return sum((-1) ** i * c for i, c in h.counts.items())
