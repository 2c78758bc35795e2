import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from bettiseq.errors import ConfigError, DataError
from bettiseq.seqdata import PositionCloud
from bettiseq.simplex import (
    GapGraph,
    SimplicialComplex,
    build_vr1,
    dump_complex_text,
    induced_subcomplex,
    load_complex_text,
    minimal_nonfaces,
    reduced_homology_ranks,
)

TETRA_SHELL = SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2), (1, 3), (2, 3)])
BIPYRAMID = SimplicialComplex(
    [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1), (5, 1, 2), (5, 2, 3), (5, 3, 4), (5, 4, 1)]
)


def nx_graph(graph: GapGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(graph.positions)
    g.add_edges_from(graph.edges())
    return g


clouds = st.lists(st.integers(1, 40), min_size=1, max_size=10, unique=True).map(
    lambda xs: PositionCloud(tuple(sorted(xs)))
)


class TestComplex:
    def test_downward_closure(self):
        c = SimplicialComplex([(1, 2, 3)])
        assert c.has_face((1, 2)) and c.has_face((3,)) and c.has_face((1, 3))
        assert c.f_vector() == (3, 3, 1)

    def test_vertices_are_faces(self):
        c = SimplicialComplex([(1, 2)], extra_vertices=(9,))
        assert c.has_face((9,))
        assert c.vertices == (1, 2, 9)

    def test_dimension_cap(self):
        with pytest.raises(ConfigError):
            SimplicialComplex([(1, 2, 3, 4)])

    def test_induced_identity(self):
        assert BIPYRAMID.induced(BIPYRAMID.vertices) == BIPYRAMID

    def test_induced_empty_is_void(self):
        void = BIPYRAMID.induced(())
        assert void.vertices == ()
        assert reduced_homology_ranks(void) == [1, 0, 0, 0]

    def test_induced_requires_subset(self):
        with pytest.raises(ConfigError):
            BIPYRAMID.induced((0, 99))

    def test_facets(self):
        assert TETRA_SHELL.facets() == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]


class TestGapGraph:
    def test_edges_primer_example(self):
        g = build_vr1(PositionCloud((5, 6, 18, 20, 21)), 13)
        assert g.edge_count() == 6
        assert set(g.edges()) == {(5, 6), (5, 18), (6, 18), (18, 20), (18, 21), (20, 21)}

    def test_complete_at_large_epsilon(self):
        g = build_vr1(PositionCloud((5, 6, 18, 20, 21)), 20)
        assert g.edge_count() == 10

    def test_single_vertex(self):
        g = build_vr1(PositionCloud((7,)), 0)
        assert g.edge_count() == 0 and g.component_count() == 1

    def test_floor_semantics(self):
        assert build_vr1(PositionCloud((1, 3)), 1.9).threshold == 1
        assert build_vr1(PositionCloud((1, 3)), 2.0).threshold == 2

    def test_negative_epsilon(self):
        with pytest.raises(ConfigError):
            build_vr1(PositionCloud((1,)), -0.5)

    def test_induced_path_graph(self):
        g = GapGraph(PositionCloud((1, 2, 3)), 1)
        sub = induced_subcomplex(g, (1, 3))
        assert sub.edge_count() == 0 and sub.component_count() == 2

    def test_induced_triangle_from_complete(self):
        g = GapGraph(PositionCloud((5, 6, 18, 20, 21)), 20)
        sub = g.induced((5, 18, 21))
        assert sub.edge_count() == 3

    def test_induced_not_a_subset(self):
        with pytest.raises(ConfigError):
            GapGraph(PositionCloud((1, 2)), 1).induced((3,))

    @given(clouds, st.integers(0, 41))
    @settings(max_examples=60)
    def test_components_match_bfs(self, cloud, k):
        graph = GapGraph(cloud, k)
        assert graph.component_count() == nx.number_connected_components(nx_graph(graph))

    @given(clouds, st.integers(0, 41), st.data())
    @settings(max_examples=60)
    def test_induced_components_match_bfs(self, cloud, k, data):
        members = data.draw(st.lists(st.sampled_from(cloud.positions), unique=True))
        graph = GapGraph(cloud, k).induced(members)
        expected = nx.number_connected_components(nx_graph(graph))
        assert graph.component_count() == expected


class TestHomology:
    def test_tetra_shell_contractible(self):
        assert reduced_homology_ranks(TETRA_SHELL) == [0, 0, 0, 0]

    def test_bipyramid_is_a_sphere(self):
        assert reduced_homology_ranks(BIPYRAMID) == [0, 0, 0, 1]

    def test_single_point(self):
        assert reduced_homology_ranks(SimplicialComplex([], extra_vertices=(4,))) == [0, 0, 0, 0]

    def test_four_cycle(self):
        square = SimplicialComplex([(0, 1), (1, 2), (2, 3), (0, 3)])
        assert reduced_homology_ranks(square) == [0, 0, 1, 0]

    def test_two_points(self):
        c = SimplicialComplex([], extra_vertices=(1, 5))
        assert reduced_homology_ranks(c) == [0, 1, 0, 0]

    @given(clouds, st.integers(0, 41))
    @settings(max_examples=40)
    def test_euler_relation(self, cloud, k):
        complex_ = GapGraph(cloud, k).to_complex()
        f0, f1, f2 = complex_.f_vector()
        h = reduced_homology_ranks(complex_)
        assert f0 - f1 + f2 == 1 + h[1] - h[2] + h[3]

    def test_euler_relation_dim2(self):
        for complex_ in (TETRA_SHELL, BIPYRAMID):
            f0, f1, f2 = complex_.f_vector()
            h = reduced_homology_ranks(complex_)
            assert f0 - f1 + f2 == 1 + h[1] - h[2] + h[3]


class TestMinimalNonfaces:
    def test_tetra_shell(self):
        assert minimal_nonfaces(TETRA_SHELL) == {frozenset({1, 2, 3})}

    def test_bipyramid(self):
        assert minimal_nonfaces(BIPYRAMID) == {
            frozenset({0, 5}),
            frozenset({1, 3}),
            frozenset({2, 4}),
        }

    def test_k35_census(self):
        g = GapGraph(PositionCloud(tuple(range(1, 36))), 35)
        nf = minimal_nonfaces(g)
        assert len(nf) == 6545
        assert all(len(f) == 3 for f in nf)

    def test_full_two_skeleton_has_quartics(self):
        from itertools import combinations

        c = SimplicialComplex(list(combinations(range(5), 3)))
        nf = minimal_nonfaces(c)
        assert nf == {frozenset(q) for q in combinations(range(5), 4)}

    @given(clouds, st.integers(0, 41))
    @settings(max_examples=40)
    def test_gap_graph_nonface_sizes(self, cloud, k):
        for f in minimal_nonfaces(GapGraph(cloud, k)):
            assert len(f) in (2, 3)

    @given(clouds, st.integers(0, 41))
    @settings(max_examples=25)
    def test_gap_graph_nonfaces_match_complex(self, cloud, k):
        graph = GapGraph(cloud, k)
        assert minimal_nonfaces(graph) == minimal_nonfaces(graph.to_complex())


class TestComplexFiles:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "bip.txt"
        dump_complex_text(BIPYRAMID, path)
        assert load_complex_text(path) == BIPYRAMID

    def test_closure_completed_on_load(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("# facet list\n0 1 2\n", encoding="utf-8")
        c = load_complex_text(path)
        assert c.has_face((0, 1)) and c.has_face((2,))

    def test_bad_face(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 x 2\n", encoding="utf-8")
        with pytest.raises(DataError):
            load_complex_text(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_complex_text(tmp_path / "nope.txt")
