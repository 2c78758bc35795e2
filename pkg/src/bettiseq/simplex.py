"""Small simplicial complexes (dimension <= 2) and implicit threshold graphs.

A ``GapGraph`` is the 1-skeleton of the Vietoris-Rips complex of a 1-D
integer point cloud: two positions are adjacent iff their gap is at most K.
Edges are never materialized as a matrix; membership is a subtraction.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DataError
from .gf2 import PivotTable
from .seqdata import PositionCloud


class SimplicialComplex:
    """Explicit face-set complex over integer vertex labels.

    Faces are stored downward-closed; construction from any face iterable
    completes the closure. Dimension is capped at 2 (triangles).
    """

    def __init__(self, faces: Iterable[Iterable[int]], extra_vertices: Iterable[int] = ()):
        closed: set[frozenset[int]] = set()
        verts: set[int] = set(int(v) for v in extra_vertices)
        for face in faces:
            fs = frozenset(int(v) for v in face)
            if not fs:
                continue
            if len(fs) > 3:
                raise ConfigError(f"faces of dimension > 2 are not supported: {sorted(fs)}")
            for size in range(1, len(fs) + 1):
                for sub in combinations(sorted(fs), size):
                    closed.add(frozenset(sub))
            verts.update(fs)
        for v in verts:
            closed.add(frozenset((v,)))
        self._faces = closed
        self._vertices = tuple(sorted(verts))

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def dim(self) -> int:
        """-1 for the complex with no vertices."""
        return max((len(f) for f in self._faces), default=0) - 1

    def faces_of_size(self, size: int) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(f)) for f in self._faces if len(f) == size)

    def f_vector(self) -> tuple[int, int, int]:
        counts = [0, 0, 0]
        for f in self._faces:
            counts[len(f) - 1] += 1
        return tuple(counts)

    def has_face(self, face: Iterable[int]) -> bool:
        return frozenset(face) in self._faces

    def induced(self, subset: Iterable[int]) -> "SimplicialComplex":
        w = frozenset(int(v) for v in subset)
        extra = w - set(self._vertices)
        if extra:
            raise ConfigError(f"not vertices of the complex: {sorted(extra)}")
        return SimplicialComplex((f for f in self._faces if f <= w), extra_vertices=w)

    def facets(self) -> list[tuple[int, ...]]:
        """Inclusion-maximal faces."""
        out = []
        for f in self._faces:
            if not any(f < g for g in self._faces):
                out.append(tuple(sorted(f)))
        return sorted(out)

    def minimal_nonfaces(self) -> set[frozenset[int]]:
        """Inclusion-minimal vertex sets that are not faces.

        For a dimension <= 2 complex these have at most 4 vertices: every
        proper subset of a minimal nonface must itself be a face.
        """
        verts = self._vertices
        out: set[frozenset[int]] = set()
        for pair in combinations(verts, 2):
            if not self.has_face(pair):
                out.add(frozenset(pair))
        for tri in combinations(verts, 3):
            if self.has_face(tri):
                continue
            if all(self.has_face(p) for p in combinations(tri, 2)):
                out.add(frozenset(tri))
        for quad in combinations(verts, 4):
            if all(self.has_face(t) for t in combinations(quad, 3)):
                out.add(frozenset(quad))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._faces == other._faces

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self._vertices)}, f={self.f_vector()})"


@dataclass(frozen=True)
class GapGraph:
    """Threshold graph on a 1-D cloud: {a, b} is an edge iff |a - b| <= K."""

    cloud: PositionCloud
    threshold: int

    def __post_init__(self) -> None:
        if self.threshold < 0:
            raise ConfigError(f"threshold must be non-negative, got {self.threshold}")

    @property
    def positions(self) -> tuple[int, ...]:
        return self.cloud.positions

    @property
    def n(self) -> int:
        return len(self.cloud)

    def has_edge(self, a: int, b: int) -> bool:
        if a == b or not (self.cloud.contains(a) and self.cloud.contains(b)):
            return False
        return abs(a - b) <= self.threshold

    def edge_count(self) -> int:
        pos = self.positions
        count = 0
        lo = 0
        for t in range(len(pos)):
            while pos[t] - pos[lo] > self.threshold:
                lo += 1
            count += t - lo
        return count

    def edges(self) -> list[tuple[int, int]]:
        pos = self.positions
        out = []
        for t in range(len(pos)):
            for s in range(t - 1, -1, -1):
                if pos[t] - pos[s] > self.threshold:
                    break
                out.append((pos[s], pos[t]))
        return sorted(out)

    def component_count(self) -> int:
        pos = self.positions
        if not pos:
            return 0
        breaks = sum(1 for a, b in zip(pos, pos[1:]) if b - a > self.threshold)
        return 1 + breaks

    def induced(self, subset: Iterable[int]) -> "GapGraph":
        return GapGraph(self.cloud.subset(subset), self.threshold)

    def to_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.edges(), extra_vertices=self.positions)

    def minimal_nonfaces(self) -> set[frozenset[int]]:
        """Non-edge pairs plus triangles: the graph carries no 2-faces, so a
        triple is a minimal nonface exactly when all three pairs are edges."""
        pos = self.positions
        k = self.threshold
        out: set[frozenset[int]] = set()
        for a, b in combinations(pos, 2):
            if b - a > k:
                out.add(frozenset((a, b)))
        for i in range(len(pos)):
            hi = bisect_right(pos, pos[i] + k)
            for j, l in combinations(range(i + 1, hi), 2):
                out.add(frozenset((pos[i], pos[j], pos[l])))
        return out


def build_vr1(cloud: PositionCloud, epsilon: float) -> GapGraph:
    """Rips 1-skeleton at scale epsilon; integer events make K = floor(epsilon)."""
    if epsilon < 0:
        raise ConfigError(f"epsilon must be non-negative, got {epsilon}")
    return GapGraph(cloud, int(math.floor(epsilon)))


def induced_subcomplex(obj, subset: Iterable[int]):
    """Restriction to a vertex subset, preserving the input kind."""
    if isinstance(obj, (SimplicialComplex, GapGraph)):
        return obj.induced(subset)
    raise ConfigError(f"cannot restrict a {type(obj).__name__}")


def minimal_nonfaces(obj) -> set[frozenset[int]]:
    """Minimal generators of the Stanley-Reisner ideal, as vertex sets."""
    if isinstance(obj, (SimplicialComplex, GapGraph)):
        return obj.minimal_nonfaces()
    raise ConfigError(f"cannot take nonfaces of a {type(obj).__name__}")


def homology_ranks_from_faces(
    num_vertices: int,
    edges: list[tuple[int, int]],
    triangles: list[tuple[int, int, int]],
) -> list[int]:
    """Reduced homology ranks [H~_{-1}, H~_0, H~_1, H~_2] over GF(2).

    ``edges`` and ``triangles`` use vertex indices 0..num_vertices-1 and are
    assumed downward-closed (every triangle edge present in ``edges``).
    """
    if num_vertices == 0:
        return [1, 0, 0, 0]
    d1 = PivotTable()
    for a, b in edges:
        d1.add((1 << a) | (1 << b))
    rank_d1 = d1.rank
    rank_d2 = 0
    if triangles:
        edge_index = {frozenset(e): i for i, e in enumerate(edges)}
        d2 = PivotTable()
        for a, b, c in triangles:
            col = (
                (1 << edge_index[frozenset((a, b))])
                | (1 << edge_index[frozenset((a, c))])
                | (1 << edge_index[frozenset((b, c))])
            )
            d2.add(col)
        rank_d2 = d2.rank
    h0 = (num_vertices - rank_d1) - 1
    h1 = (len(edges) - rank_d1) - rank_d2
    h2 = len(triangles) - rank_d2
    return [0, h0, h1, h2]


def reduced_homology_ranks(obj, max_dim: int = 2) -> list[int]:
    """Ranks of the reduced homology groups H~_r for r = -1..max_dim.

    The complex on zero vertices is the one with only the empty face; its
    H~_{-1} has rank 1 and everything else vanishes.
    """
    if max_dim > 2:
        raise ConfigError("homology is only computed up to dimension 2")
    if isinstance(obj, GapGraph):
        obj = obj.to_complex()
    if not isinstance(obj, SimplicialComplex):
        raise ConfigError(f"cannot compute homology of a {type(obj).__name__}")
    index = {v: i for i, v in enumerate(obj.vertices)}
    edges = [(index[a], index[b]) for a, b in obj.faces_of_size(2)]
    triangles = [(index[a], index[b], index[c]) for a, b, c in obj.faces_of_size(3)]
    ranks = homology_ranks_from_faces(len(obj.vertices), edges, triangles)
    return ranks[: max_dim + 2]


def load_complex_text(path: str | Path) -> SimplicialComplex:
    """Read a complex from text: one face per line, space-separated labels."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"complex file not found: {path}")
    faces = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            faces.append([int(tok) for tok in line.split()])
        except ValueError:
            raise DataError(f"bad face at line {line_no}: {line!r}") from None
    return SimplicialComplex(faces)


def dump_complex_text(complex_: SimplicialComplex, path: str | Path) -> None:
    lines = [" ".join(str(v) for v in facet) for facet in complex_.facets()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
