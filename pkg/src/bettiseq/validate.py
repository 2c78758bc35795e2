"""Oracle-vs-fast-engine equivalence sweeps.

The fast engine's two closed diagonals are proved against the brute-force
Hochster enumeration by exact table equality: randomized clouds for breadth,
plus an exhaustive scan over bounded gap patterns for small n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .betti import BettiTable
from .fastbetti import graded_betti_fast
from .oracle import graded_betti_bruteforce
from .seqdata import PositionCloud
from .simplex import GapGraph


@dataclass(frozen=True)
class SweepMismatch:
    positions: tuple[int, ...]
    threshold: int
    fast: dict
    oracle: dict


@dataclass
class SweepReport:
    clouds_checked: int
    tables_checked: int
    mismatches: list[SweepMismatch]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _corrupt(table: BettiTable) -> BettiTable:
    entries = table.to_dict()
    key = next((k for k in sorted(entries) if k != (0, 0)), None)
    if key is None:
        entries[(1, 2)] = 1
    else:
        entries[key] += 1
    return BettiTable(entries)


def _check_cloud(cloud: PositionCloud, report: SweepReport, corrupt_first: bool) -> None:
    report.clouds_checked += 1
    for k in range(0, cloud.span + 2):
        fast = graded_betti_fast(cloud, k)
        if corrupt_first and report.tables_checked == 0:
            fast = _corrupt(fast)
        oracle = graded_betti_bruteforce(GapGraph(cloud, k), max_vertices=len(cloud))
        report.tables_checked += 1
        if fast != oracle:
            report.mismatches.append(
                SweepMismatch(cloud.positions, k, fast.to_dict(), oracle.to_dict())
            )


def run_equivalence_sweep(
    max_n: int = 12,
    trials: int = 200,
    seed: int = 7,
    corrupt_self_test: bool = False,
    progress=None,
) -> SweepReport:
    """Random clouds with 1..max_n points, every threshold up to span + 1."""
    rng = np.random.Generator(np.random.PCG64(seed))
    report = SweepReport(0, 0, [])
    position_range = max(2 * max_n, 8)
    for trial in range(trials):
        n = int(rng.integers(1, max_n + 1))
        picks = rng.choice(position_range, size=n, replace=False)
        cloud = PositionCloud(tuple(sorted(int(p) + 1 for p in picks)))
        _check_cloud(cloud, report, corrupt_self_test)
        if progress is not None and (trial + 1) % 20 == 0:
            progress(trial + 1, trials)
    return report


def exhaustive_sweep(max_n: int = 5, max_gap: int = 5) -> SweepReport:
    """Every cloud shape with up to max_n points and consecutive gaps in 1..max_gap.

    Threshold-graph structure depends only on the gap pattern, so this covers
    all small instances up to translation.
    """
    report = SweepReport(0, 0, [])
    for n in range(1, max_n + 1):
        for gaps in product(range(1, max_gap + 1), repeat=n - 1):
            positions = [1]
            for g in gaps:
                positions.append(positions[-1] + g)
            _check_cloud(PositionCloud(tuple(positions)), report, False)
    return report
