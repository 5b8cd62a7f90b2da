"""Directed cycles over cells.

A cycle visits M >= 2 distinct cells in order; rotations of the same visit
sequence are the same cycle, so each is stored in canonical form (smallest
cell first).  Reversals are distinct cycles for M >= 3: the polytope bound
attached to a cycle depends on who interferes with whom, which is
direction-sensitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator

from .network import CellNetwork, NetworkFormatError


@dataclass(frozen=True)
class Cycle:
    """Ordered tuple of distinct cells, canonical rotation (min cell first)."""

    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.cells) < 2:
            raise ValueError("a cycle visits at least two cells")
        if len(set(self.cells)) != len(self.cells):
            raise ValueError(f"repeated cell in cycle {self.cells}")
        if self.cells[0] != min(self.cells):
            raise ValueError(
                f"cycle {self.cells} not canonical: rotate smallest cell first"
            )

    @classmethod
    def from_cells(cls, cells: tuple[int, ...]) -> "Cycle":
        """Canonicalize an arbitrary rotation of a visit sequence."""
        if not cells:
            raise ValueError("empty cycle")
        pivot = cells.index(min(cells))
        return cls(cells[pivot:] + cells[:pivot])

    @property
    def length(self) -> int:
        return len(self.cells)

    def at(self, m: int) -> int:
        """Cell at position m, with modulo indexing (at(0) is the last cell,
        at(M+1) the first)."""
        return self.cells[(m - 1) % len(self.cells)]

    def __str__(self) -> str:
        return "->".join(str(c) for c in self.cells)


def predecessor(cycle: Cycle, m: int) -> int:
    """Cell preceding position m on the cycle (wraps: position 1 -> last)."""
    if not 1 <= m <= cycle.length:
        raise ValueError(f"position {m} out of range 1..{cycle.length}")
    return cycle.at(m - 1)


def successor(cycle: Cycle, m: int) -> int:
    """Cell following position m on the cycle (wraps: last -> position 1)."""
    if not 1 <= m <= cycle.length:
        raise ValueError(f"position {m} out of range 1..{cycle.length}")
    return cycle.at(m + 1)


def enumerate_cycles(cell_count: int) -> tuple[Cycle, ...]:
    """All directed cycles over `cell_count` cells, one per rotation class.

    Ordered by length, then lexicographically by visit sequence.  The total
    is sum over M of C(K, M) * (M-1)!.
    """
    if cell_count < 1:
        raise NetworkFormatError("need at least one cell")
    found: list[Cycle] = []
    for length in range(2, cell_count + 1):
        for subset in combinations(range(1, cell_count + 1), length):
            head, rest = subset[0], subset[1:]
            for tail in permutations(rest):
                found.append(Cycle((head,) + tail))
    found.sort(key=lambda c: (c.length, c.cells))
    return tuple(found)


def rank_tuples(net: CellNetwork, cycle: Cycle) -> Iterator[tuple[int, ...]]:
    """All choices of one user rank per visited cell, in product order.

    Element m of a yielded tuple is the chosen rank in cycle.cells[m].
    """
    for cell in cycle.cells:
        if not 1 <= cell <= net.cell_count:
            raise ValueError(f"cycle visits cell {cell}, network has {net.cell_count}")
    ranges = [range(1, net.user_counts[c - 1] + 1) for c in cycle.cells]
    return product(*ranges)


def cycle_count(cell_count: int) -> int:
    """Closed form for len(enumerate_cycles(cell_count))."""
    from math import comb, factorial

    return sum(
        comb(cell_count, m) * factorial(m - 1) for m in range(2, cell_count + 1)
    )
