"""Reference-vs-mutant curve comparison over a shared filtration grid.

For each token class and each sequence the scan emits whole-graph component
and cycle curves plus one graded Betti series per (i, j) key that is nonzero
anywhere on the grid for either sequence, so reference and mutant series are
directly subtractable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DataError
from .fastbetti import betti_curve, ph_betti
from .seqdata import TOKEN_CLASSES, alphabet_kind, class_clouds

REF = "REF"
MUT = "MUT"
SERIES_KINDS = ("ph_b0", "ph_b1", "graded")


@dataclass(frozen=True)
class CurveSeries:
    sequence_tag: str
    token_class: str
    series_kind: str
    key: tuple[int, int] | None
    samples: tuple[tuple[int, int], ...]

    def value_at(self, eps: int) -> int:
        for e, v in self.samples:
            if e == eps:
                return v
        raise KeyError(f"epsilon {eps} not sampled")


def default_grid(ref_seq: str, mut_seq: str) -> tuple[int, ...]:
    """0..(largest class-cloud span + 1), capped at the sequence length."""
    spans = [
        cloud.span
        for seq in (ref_seq, mut_seq)
        for cloud in class_clouds(seq).values()
    ]
    top = min(max(spans, default=0) + 1, max(len(ref_seq), len(mut_seq)))
    return tuple(range(top + 1))


def compare(ref_seq: str, mut_seq: str, grid) -> list[CurveSeries]:
    """Aligned REF/MUT curve series for all four token classes."""
    ref_kind = alphabet_kind(ref_seq)
    mut_kind = alphabet_kind(mut_seq)
    if "either" not in (ref_kind, mut_kind) and ref_kind != mut_kind:
        raise DataError(f"cannot compare a {ref_kind} sequence with a {mut_kind} sequence")
    grid = tuple(int(g) for g in grid)

    out: list[CurveSeries] = []
    clouds = {REF: class_clouds(ref_seq), MUT: class_clouds(mut_seq)}
    for cls in TOKEN_CLASSES:
        curves = {tag: betti_curve(clouds[tag][cls], grid) for tag in (REF, MUT)}
        keys = sorted(
            (curves[REF].nonzero_keys() | curves[MUT].nonzero_keys()) - {(0, 0)}
        )
        for tag in (REF, MUT):
            ph = [ph_betti(clouds[tag][cls], k) for k in grid]
            out.append(CurveSeries(tag, cls, "ph_b0", None, tuple(zip(grid, (b0 for b0, _ in ph)))))
            out.append(CurveSeries(tag, cls, "ph_b1", None, tuple(zip(grid, (b1 for _, b1 in ph)))))
            for key in keys:
                samples = tuple(
                    (eps, table.get(*key))
                    for eps, table in zip(grid, curves[tag].tables)
                )
                out.append(CurveSeries(tag, cls, "graded", key, samples))
    return out


def single_series(tag: str, sequence: str, grid) -> list[CurveSeries]:
    """Curve series for one sequence, tagged with the given label."""
    grid = tuple(int(g) for g in grid)
    clouds = class_clouds(sequence)
    out: list[CurveSeries] = []
    for cls in TOKEN_CLASSES:
        curve = betti_curve(clouds[cls], grid)
        keys = sorted(curve.nonzero_keys() - {(0, 0)})
        ph = [ph_betti(clouds[cls], k) for k in grid]
        out.append(CurveSeries(tag, cls, "ph_b0", None, tuple(zip(grid, (b0 for b0, _ in ph)))))
        out.append(CurveSeries(tag, cls, "ph_b1", None, tuple(zip(grid, (b1 for _, b1 in ph)))))
        for key in keys:
            samples = tuple((eps, table.get(*key)) for eps, table in zip(grid, curve.tables))
            out.append(CurveSeries(tag, cls, "graded", key, samples))
    return out


def find_series(
    series: list[CurveSeries],
    tag: str,
    token_class: str,
    kind: str,
    key: tuple[int, int] | None = None,
) -> CurveSeries:
    for s in series:
        if (s.sequence_tag, s.token_class, s.series_kind, s.key) == (tag, token_class, kind, key):
            return s
    raise KeyError(f"no series ({tag}, {token_class}, {kind}, {key})")


def series_rows(series: list[CurveSeries]) -> list[tuple]:
    """Long-format rows: (tag, class, kind, i, j, epsilon, value)."""
    rows = []
    for s in series:
        i, j = (s.key if s.key is not None else ("", ""))
        for eps, value in s.samples:
            rows.append((s.sequence_tag, s.token_class, s.series_kind, i, j, eps, value))
    return rows
