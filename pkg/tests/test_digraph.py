import json
from importlib.resources import files

import pytest

from mtk import DiGraph, UndirectedGraph
from mtk.digraph import (Path, decompose_cylinder_intersection, dual_graph, is_multitree,
                         leq, min_upper_bounds, path_count_matrix, topological_order,
                         vertex_cylinder)
from mtk.errors import CertificationError, ParseError, PreconditionError
from mtk.presentation import dual_quotient

from .conftest import free_rose_gog


def diamond():
    return DiGraph.build("abcd", [("ab", "a", "b"), ("ac", "a", "c"), ("bd", "b", "d"), ("cd", "c", "d")])


def crossing():
    # u1 and u2 both sit above v and w
    return DiGraph.build(["v", "w", "u1", "u2"],
                         [("p", "v", "u1"), ("q", "w", "u1"), ("r", "v", "u2"), ("s", "w", "u2")])


def chain():
    return DiGraph.build("abc", [("x", "a", "b"), ("y", "b", "c")])


class TestConstruction:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ParseError):
            DiGraph.from_json({"vertices": ["a", "a"], "edges": []})

    def test_unknown_endpoint_rejected(self):
        with pytest.raises(ParseError):
            DiGraph.from_json({"vertices": ["a"], "edges": [{"id": "e", "range": "a", "source": "z"}]})

    def test_json_round_trip(self):
        g = diamond()
        assert DiGraph.from_json(json.loads(json.dumps(g.to_json()))) == g

    def test_in_and_out_edges(self):
        g = diamond()
        assert [e.id for e in g.in_edges["a"]] == ["ab", "ac"]
        assert [e.id for e in g.out_edges["d"]] == ["bd", "cd"]
        assert g.sources() == ["d"]

    def test_bar_must_be_fixed_point_free_involution(self):
        with pytest.raises(ParseError):
            UndirectedGraph.from_json({"vertices": ["x"], "edges": [
                {"id": "e", "range": "x", "source": "x", "bar": "e"}]})


class TestPaths:
    def test_composability(self):
        g = chain()
        p = Path(g, ("x", "y"), "a")
        assert p.range == "a" and p.source == "c"
        with pytest.raises(PreconditionError):
            Path(g, ("y", "x"), "b")

    def test_concatenation_and_prefix(self):
        g = chain()
        p = Path(g, ("x",), "a") + Path(g, ("y",), "b")
        assert p.edges == ("x", "y")
        assert p.prefix(1).edges == ("x",)
        assert len(Path(g, (), "b")) == 0


class TestCounts:
    def test_single_vertex(self):
        g = DiGraph.build(["v"], [])
        assert path_count_matrix(g, 5).tolist() == [[1]]

    def test_one_edge(self):
        g = DiGraph.build("ab", [("e", "a", "b")])
        m = path_count_matrix(g, 3)
        assert m[0, 1] == 1 and m[1, 0] == 0

    def test_diamond(self):
        g = diamond()
        assert path_count_matrix(g, 4)[g.index["a"], g.index["d"]] == 2


class TestMultitree:
    def test_diamond_is_not(self):
        assert not is_multitree(diamond())

    def test_cycle_is_not(self):
        assert not is_multitree(DiGraph.build(["v"], [("e", "v", "v")]))
        assert topological_order(DiGraph.build("ab", [("e", "a", "b"), ("f", "b", "a")])) is None

    def test_crossing_is(self):
        assert is_multitree(crossing())

    def test_bundled_figure(self):
        doc = json.loads(files("mtk").joinpath("data/multitree.json").read_text())
        g = DiGraph.from_json(doc)
        assert is_multitree(g)
        for v in g.vertices:
            for w in g.vertices:
                decompose_cylinder_intersection(g, v, w)


class TestCylinders:
    def test_isolated(self):
        g = DiGraph.build(["v"], [])
        assert vertex_cylinder(g, "v") == {"v"}

    def test_chain(self):
        assert vertex_cylinder(chain(), "a") == {"a", "b", "c"}
        assert leq(chain(), "a", "c") and not leq(chain(), "c", "a")

    def test_crossing(self):
        assert vertex_cylinder(crossing(), "v") == {"v", "u1", "u2"}

    def test_min_upper_bounds(self):
        g = crossing()
        assert min_upper_bounds(g, "v", "v") == ["v"]
        assert min_upper_bounds(g, "v", "w") == ["u1", "u2"]
        two = DiGraph.build("ab", [])
        assert min_upper_bounds(two, "a", "b") == []

    def test_decomposition(self):
        d = decompose_cylinder_intersection(crossing(), "v", "w")
        assert d.bounds == ("u1", "u2")
        assert d.intersection == {"u1", "u2"}
        assert decompose_cylinder_intersection(crossing(), "v", "v").bounds == ("v",)
        empty = decompose_cylinder_intersection(DiGraph.build("ab", []), "a", "b")
        assert empty.bounds == () and not empty.intersection

    def test_non_multitree_fails_certification(self):
        g = DiGraph.build(["v", "w", "u1", "u2", "t"],
                          [("p", "v", "u1"), ("q", "w", "u1"), ("r", "v", "u2"), ("s", "w", "u2"),
                           ("a", "u1", "t"), ("b", "u2", "t")])
        with pytest.raises(CertificationError):
            decompose_cylinder_intersection(g, "v", "w")


class TestDual:
    def test_path_graph(self):
        g = UndirectedGraph.from_pairs("xyz", [("e", "E", "x", "y"), ("f", "F", "y", "z")])
        d = dual_graph(g)
        assert sorted(d.vertices) == ["E", "F", "e", "f"]
        assert sorted((e.range, e.source) for e in d.edges) == [("F", "E"), ("e", "f")]

    def test_single_edge(self):
        g = UndirectedGraph.from_pairs("xy", [("e", "E", "x", "y")])
        d = dual_graph(g)
        assert len(d.vertices) == 2 and not d.edges

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_rose(self, n):
        d = dual_graph(free_rose_gog(n).graph)
        assert len(d.vertices) == 2 * n
        assert all(d.in_degree(v) == 2 * n - 1 for v in d.vertices)

    def test_matches_dual_quotient(self):
        gog = free_rose_gog(3)
        assert dual_quotient(gog).graph.adjacency() == dual_graph(gog.graph).adjacency()
