"""Brute-force ground truth for graded Betti tables via subset enumeration.

Every entry is a sum of reduced homology ranks of induced subcomplexes over
all vertex subsets of one size, computed honestly from boundary matrices
over GF(2). Exponential in the vertex count; guarded by a hard cap. This
module exists to validate the fast engine, not to be fast itself.
"""

from __future__ import annotations

from .betti import BettiTable, PersistencePair
from .errors import ConfigError
from .gf2 import PivotTable, kernel_basis
from .seqdata import PositionCloud
from .simplex import GapGraph, SimplicialComplex, build_vr1

DEFAULT_VERTEX_CAP = 14


def _check_cap(n: int, max_vertices: int) -> None:
    if n > max_vertices:
        raise ConfigError(
            f"refusing brute-force enumeration over {n} vertices "
            f"(cap {max_vertices}): 2^{n} subsets is a combinatorial explosion; "
            "raise max_vertices explicitly if you mean it"
        )


def _complex_arrays(obj):
    """Vertex count plus edge/triangle index structures for subset scans."""
    if isinstance(obj, GapGraph):
        verts = obj.positions
        index = {v: i for i, v in enumerate(verts)}
        edges = [(index[a], index[b]) for a, b in obj.edges()]
        triangles: list[tuple[int, int, int]] = []
    elif isinstance(obj, SimplicialComplex):
        verts = obj.vertices
        index = {v: i for i, v in enumerate(verts)}
        edges = [(index[a], index[b]) for a, b in obj.faces_of_size(2)]
        triangles = [(index[a], index[b], index[c]) for a, b, c in obj.faces_of_size(3)]
    else:
        raise ConfigError(f"cannot take Betti numbers of a {type(obj).__name__}")
    edge_vcols = [((1 << a) | (1 << b)) for a, b in edges]
    edge_index = {frozenset(e): i for i, e in enumerate(edges)}
    tri_vcols = []
    tri_ecols = []
    for a, b, c in triangles:
        tri_vcols.append((1 << a) | (1 << b) | (1 << c))
        tri_ecols.append(
            (1 << edge_index[frozenset((a, b))])
            | (1 << edge_index[frozenset((a, c))])
            | (1 << edge_index[frozenset((b, c))])
        )
    return len(verts), edge_vcols, tri_vcols, tri_ecols


def graded_betti_bruteforce(obj, max_vertices: int = DEFAULT_VERTEX_CAP) -> BettiTable:
    """Graded Betti table of the Stanley-Reisner ring, one subset at a time.

    For each subset W of size m and each homology degree r with nonzero rank
    h, the entry at (m - r - 1, m) grows by h. The empty subset contributes
    the constant (0, 0) entry.
    """
    n, edge_vcols, tri_vcols, tri_ecols = _complex_arrays(obj)
    _check_cap(n, max_vertices)
    entries: dict[tuple[int, int], int] = {(0, 0): 1}

    for mask in range(1, 1 << n):
        m = mask.bit_count()
        pivots: dict[int, int] = {}
        rank_d1 = 0
        e_w = 0
        for col in edge_vcols:
            if col & mask == col:
                e_w += 1
                v = col
                while v:
                    low = v & -v
                    p = pivots.get(low)
                    if p is None:
                        pivots[low] = v
                        rank_d1 += 1
                        break
                    v ^= p
        rank_d2 = 0
        t_w = 0
        if tri_vcols:
            d2 = PivotTable()
            for vcol, ecol in zip(tri_vcols, tri_ecols):
                if vcol & mask == vcol:
                    t_w += 1
                    d2.add(ecol)
            rank_d2 = d2.rank
        h0 = (m - rank_d1) - 1
        h1 = (e_w - rank_d1) - rank_d2
        h2 = t_w - rank_d2
        if h0:
            entries[(m - 1, m)] = entries.get((m - 1, m), 0) + h0
        if h1:
            entries[(m - 2, m)] = entries.get((m - 2, m), 0) + h1
        if h2:
            entries[(m - 3, m)] = entries.get((m - 3, m), 0) + h2
    return BettiTable(entries)


def _inclusion_rank_h0(mask: int, tgt_edge_vcols: list[int]) -> int:
    """Rank of H~_0(src) -> H~_0(tgt) for graphs on the same vertex subset.

    The reduced 0-cycles of the source are spanned by differences of its
    vertices (the augmentation kernel, which is the same for both ends);
    quotienting by target boundaries counts surviving components.
    """
    table = PivotTable()
    for col in tgt_edge_vcols:
        table.add(col)
    rank_boundaries = table.rank
    first = mask & -mask
    rest = mask ^ first
    total = rank_boundaries
    while rest:
        bit = rest & -rest
        rest ^= bit
        if table.add(first | bit):
            total += 1
    return total - rank_boundaries


def _inclusion_rank_h1(src_edge_vcols: list[int], src_to_tgt: list[int]) -> int:
    """Rank of H~_1(src) -> H~_1(tgt) for graphs: cycle space image rank.

    Source cycles (kernel of the source edge-boundary matrix) are rewritten
    over the target edge ordering; with no 2-cells the target has no degree-1
    boundaries, so the image rank is the rank of the rewritten cycles.
    """
    cycles = kernel_basis(src_edge_vcols)
    table = PivotTable()
    rank_map = 0
    for combo in cycles:
        translated = 0
        rest = combo
        while rest:
            bit = rest & -rest
            rest ^= bit
            translated |= 1 << src_to_tgt[bit.bit_length() - 1]
        if table.add(translated):
            rank_map += 1
    return rank_map


def persistent_graded_betti_bruteforce(
    cloud: PositionCloud,
    pair: PersistencePair,
    max_vertices: int = DEFAULT_VERTEX_CAP,
) -> BettiTable:
    """Persistent graded Betti table of a 1-D cloud between two scales.

    Entry (i, i+j) sums, over subsets W of size i+j, the rank of the
    inclusion-induced map on reduced homology in degree j-1 between the
    threshold graphs of W at the two scales.
    """
    n = len(cloud)
    _check_cap(n, max_vertices)
    lo_graph = build_vr1(cloud, pair.eps_lo)
    hi_graph = build_vr1(cloud, pair.eps_hi)
    index = {v: i for i, v in enumerate(cloud.positions)}
    hi_edges = [(index[a], index[b]) for a, b in hi_graph.edges()]
    hi_vcols = [((1 << a) | (1 << b)) for a, b in hi_edges]
    pos = cloud.positions
    is_src = [abs(pos[a] - pos[b]) <= lo_graph.threshold for a, b in hi_edges]

    entries: dict[tuple[int, int], int] = {(0, 0): 1}
    for mask in range(1, 1 << n):
        m = mask.bit_count()
        tgt_cols = []
        src_cols = []
        src_to_tgt = []
        for col, src in zip(hi_vcols, is_src):
            if col & mask == col:
                if src:
                    src_cols.append(col)
                    src_to_tgt.append(len(tgt_cols))
                tgt_cols.append(col)
        if m >= 2:
            r0 = _inclusion_rank_h0(mask, tgt_cols)
            if r0:
                entries[(m - 1, m)] = entries.get((m - 1, m), 0) + r0
        if m >= 3:
            r1 = _inclusion_rank_h1(src_cols, src_to_tgt)
            if r1:
                entries[(m - 2, m)] = entries.get((m - 2, m), 0) + r1
    return BettiTable(entries)


def persistent_betti_classical(
    cloud: PositionCloud, eps_lo: float, eps_hi: float, degree: int
) -> int:
    """Classical persistent reduced Betti number of the whole threshold graph.

    Rank of H~_degree(G at eps_lo) -> H~_degree(G at eps_hi) for degree 0 or 1.
    """
    if degree not in (0, 1):
        raise ConfigError("threshold graphs carry homology only in degrees 0 and 1")
    pair = PersistencePair(eps_lo, eps_hi)
    n = len(cloud)
    if n == 0:
        return 0
    lo_graph = build_vr1(cloud, pair.eps_lo)
    hi_graph = build_vr1(cloud, pair.eps_hi)
    index = {v: i for i, v in enumerate(cloud.positions)}
    full = (1 << n) - 1
    tgt_cols = []
    src_cols = []
    src_to_tgt = []
    pos = cloud.positions
    for a, b in hi_graph.edges():
        col = (1 << index[a]) | (1 << index[b])
        if abs(a - b) <= lo_graph.threshold:
            src_cols.append(col)
            src_to_tgt.append(len(tgt_cols))
        tgt_cols.append(col)
    if degree == 0:
        return _inclusion_rank_h0(full, tgt_cols)
    return _inclusion_rank_h1(src_cols, src_to_tgt)
