"""Sparse graded Betti tables with exact integer entries."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError


def _check_key(i: int, j: int) -> None:
    if i == 0 and j == 0:
        return
    if i < 1 or j <= i:
        raise ConfigError(f"structurally zero position ({i}, {j}) cannot hold an entry")


class BettiTable:
    """Map (homological degree i, internal degree j) -> positive exact count.

    Structural zeros -- (i, i) for i >= 1, (0, j) for j >= 1, and every
    position with i > j -- are rejected at construction; zero values are
    simply omitted, so two tables are equal iff they hold the same nonzero
    entries.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: dict[tuple[int, int], int]):
        clean: dict[tuple[int, int], int] = {}
        for (i, j), value in entries.items():
            if value == 0:
                continue
            if value < 0 or value != int(value):
                raise ConfigError(f"entry ({i},{j}) must be a non-negative integer: {value!r}")
            _check_key(i, j)
            clean[(int(i), int(j))] = int(value)
        self._entries = clean

    def get(self, i: int, j: int) -> int:
        return self._entries.get((i, j), 0)

    def items(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self._entries.items())

    def keys(self) -> list[tuple[int, int]]:
        return sorted(self._entries)

    def to_dict(self) -> dict[tuple[int, int], int]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self._entries == other._entries

    def __repr__(self) -> str:
        body = ", ".join(f"({i},{j}): {v}" for (i, j), v in self.items())
        return f"BettiTable({{{body}}})"


@dataclass(frozen=True)
class PersistencePair:
    """A pair of filtration scales eps_lo <= eps_hi."""

    eps_lo: float
    eps_hi: float

    def __post_init__(self) -> None:
        if self.eps_lo > self.eps_hi:
            raise ConfigError(f"need eps_lo <= eps_hi, got ({self.eps_lo}, {self.eps_hi})")
