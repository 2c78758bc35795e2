"""Dense-free linear algebra over GF(2): vectors are Python int bitmasks.

Chains of a simplicial complex are encoded as bitmasks over a fixed ordering
of the simplices in one degree, so Gaussian elimination is a loop of XORs on
arbitrary-precision integers.
"""

from __future__ import annotations

from typing import Iterable


class PivotTable:
    """Incremental column space: feed vectors, track how many are independent."""

    __slots__ = ("pivots", "rank")

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}
        self.rank = 0

    def add(self, v: int) -> bool:
        """Reduce ``v`` against stored pivots; keep it if independent.

        Returns True when the rank grew.
        """
        pivots = self.pivots
        while v:
            low = v & -v
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                self.rank += 1
                return True
            v ^= p
        return False


def rank(vectors: Iterable[int]) -> int:
    table = PivotTable()
    for v in vectors:
        table.add(v)
    return table.rank


def kernel_basis(columns: list[int]) -> list[int]:
    """Kernel of the matrix whose columns are the given bitmask vectors.

    Kernel elements come back as bitmasks over *column indices*: bit ``t`` set
    means column ``t`` participates in that dependency.
    """
    pivots: dict[int, tuple[int, int]] = {}
    basis: list[int] = []
    for idx, v in enumerate(columns):
        combo = 1 << idx
        while v:
            low = v & -v
            entry = pivots.get(low)
            if entry is None:
                pivots[low] = (v, combo)
                break
            v ^= entry[0]
            combo ^= entry[1]
        else:
            basis.append(combo)
    return basis
