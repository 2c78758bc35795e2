import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from bettiseq.betti import BettiTable, PersistencePair
from bettiseq.errors import ConfigError
from bettiseq.oracle import (
    graded_betti_bruteforce,
    persistent_betti_classical,
    persistent_graded_betti_bruteforce,
)
from bettiseq.seqdata import PositionCloud
from bettiseq.simplex import GapGraph, SimplicialComplex

from test_simplex import BIPYRAMID, TETRA_SHELL, nx_graph

small_clouds = st.lists(st.integers(1, 18), min_size=1, max_size=7, unique=True).map(
    lambda xs: PositionCloud(tuple(sorted(xs)))
)


class TestBettiTable:
    def test_structural_zero_keys_rejected(self):
        for key in [(1, 1), (0, 2), (2, 1), (3, 2)]:
            with pytest.raises(ConfigError):
                BettiTable({key: 1})

    def test_zero_values_omitted(self):
        t = BettiTable({(0, 0): 1, (1, 2): 0})
        assert t.keys() == [(0, 0)]
        assert t.get(1, 2) == 0

    def test_equality_and_items(self):
        a = BettiTable({(0, 0): 1, (1, 3): 2})
        b = BettiTable({(1, 3): 2, (0, 0): 1, (2, 4): 0})
        assert a == b
        assert a.items() == [((0, 0), 1), ((1, 3), 2)]

    def test_negative_rejected(self):
        with pytest.raises(ConfigError):
            BettiTable({(1, 2): -1})

    def test_pair_validation(self):
        with pytest.raises(ConfigError):
            PersistencePair(3, 2)
        PersistencePair(2.0, 2.0)


class TestBruteforce:
    def test_tetra_shell_golden(self):
        assert graded_betti_bruteforce(TETRA_SHELL) == BettiTable({(0, 0): 1, (1, 3): 1})

    def test_bipyramid_golden(self):
        expected = BettiTable({(0, 0): 1, (1, 2): 3, (2, 4): 3, (3, 6): 1})
        assert graded_betti_bruteforce(BIPYRAMID) == expected

    def test_single_vertex(self):
        c = SimplicialComplex([], extra_vertices=(3,))
        assert graded_betti_bruteforce(c) == BettiTable({(0, 0): 1})

    def test_cap_refusal(self):
        big = GapGraph(PositionCloud(tuple(range(1, 16))), 1)
        with pytest.raises(ConfigError, match="cap"):
            graded_betti_bruteforce(big)
        graded_betti_bruteforce(big, max_vertices=15)

    @given(small_clouds, st.integers(0, 19))
    @settings(max_examples=40, deadline=None)
    def test_vr1_tables_live_on_two_diagonals(self, cloud, k):
        table = graded_betti_bruteforce(GapGraph(cloud, k))
        for (i, j) in table.keys():
            assert (i, j) == (0, 0) or j - i in (1, 2)


class TestPersistent:
    def test_diagonal_matches_plain(self):
        cloud = PositionCloud((2, 3, 9, 12, 14))
        for k in range(0, cloud.span + 2):
            plain = graded_betti_bruteforce(GapGraph(cloud, k))
            diag = persistent_graded_betti_bruteforce(cloud, PersistencePair(k, k))
            assert plain == diag

    @given(small_clouds, st.integers(0, 19), st.integers(0, 19))
    @settings(max_examples=30, deadline=None)
    def test_diagonal_matches_plain_random(self, cloud, a, b):
        lo, hi = min(a, b), max(a, b)
        table = persistent_graded_betti_bruteforce(cloud, PersistencePair(lo, hi))
        for (i, j) in table.keys():
            assert (i, j) == (0, 0) or (i >= 1 and j > i)

    def test_cycle_not_in_image(self):
        # The triangle at the larger scale is not the image of anything at
        # the smaller scale, where the three points form a path.
        table = persistent_graded_betti_bruteforce(PositionCloud((1, 2, 3)), PersistencePair(1, 2))
        assert table.get(1, 3) == 0
        assert table == BettiTable({(0, 0): 1})

    def test_monotonicity_guard(self):
        cloud = PositionCloud((1, 4, 5, 9, 11))
        for lo, hi in itertools.combinations(range(0, cloud.span + 2), 2):
            pers = persistent_graded_betti_bruteforce(cloud, PersistencePair(lo, hi))
            t_lo = graded_betti_bruteforce(GapGraph(cloud, lo))
            t_hi = graded_betti_bruteforce(GapGraph(cloud, hi))
            for (i, j), v in pers.items():
                assert v <= min(t_lo.get(i, j), t_hi.get(i, j))

    @given(small_clouds, st.integers(0, 15), st.integers(0, 6))
    @settings(max_examples=30, deadline=None)
    def test_full_support_recovers_classical(self, cloud, lo, extra):
        hi = lo + extra
        n = len(cloud)
        table = persistent_graded_betti_bruteforce(cloud, PersistencePair(lo, hi))
        # independent recomputation: surviving components come from the
        # coarse graph, surviving cycles inject from the fine graph
        g_lo, g_hi = nx_graph(GapGraph(cloud, lo)), nx_graph(GapGraph(cloud, hi))
        c_hi = nx.number_connected_components(g_hi)
        b1_lo = g_lo.number_of_edges() - n + nx.number_connected_components(g_lo)
        if n >= 2:
            assert table.get(n - 1, n) == c_hi - 1 == persistent_betti_classical(cloud, lo, hi, 0)
        if n >= 3:
            assert table.get(n - 2, n) == b1_lo == persistent_betti_classical(cloud, lo, hi, 1)

    def test_classical_rejects_bad_degree(self):
        with pytest.raises(ConfigError):
            persistent_betti_classical(PositionCloud((1, 2)), 0, 1, 2)
