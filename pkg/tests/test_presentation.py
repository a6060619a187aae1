from fractions import Fraction

import pytest

from mtk import CYCLIC, TRIVIAL, DiGraph, GraphOfGroupsZ, QuotientPresentation, UndirectedGraph
from mtk.digraph import dual_graph
from mtk.errors import ParseError, ValidationError
from mtk.presentation import (StabiliserClass, denominator, dual_in_degree_defects, dual_quotient,
                              signed_index_ratio, validate, validate_graph_of_groups)

from .conftest import bs_loop, rose


def rules(report):
    return {v.rule for v in report.violations}


class TestValidate:
    def test_rose_ok(self):
        assert validate(rose(2)).ok

    def test_source_vertex(self):
        p = QuotientPresentation(DiGraph.build(["v"], []), {"v": TRIVIAL}, {})
        report = validate(p)
        assert rules(report) == {"source"}
        assert "in-degree 0" in str(report.violations[0])

    def test_mixed_classes(self):
        g = DiGraph.build("uv", [("e", "u", "v"), ("a", "u", "u"), ("b", "v", "v")])
        p = QuotientPresentation(g, {"u": TRIVIAL, "v": CYCLIC}, {"e": (1, 1), "b": (1, 1)})
        assert "mixed-classes" in rules(validate(p))

    def test_omega_rules(self):
        g = DiGraph.build(["v"], [("e", "v", "v")])
        assert "omega-missing" in rules(validate(QuotientPresentation(g, {"v": CYCLIC}, {})))
        assert "omega-zero" in rules(validate(bs_loop(0, 2)))
        assert "omega-trivial" in rules(validate(QuotientPresentation(g, {"v": TRIVIAL}, {"e": (1, 1)})))

    def test_raise_if_failed(self):
        p = QuotientPresentation(DiGraph.build(["v"], []), {"v": TRIVIAL}, {})
        with pytest.raises(ValidationError) as info:
            validate(p).raise_if_failed()
        assert info.value.violations

    def test_class_names(self):
        assert StabiliserClass.parse("Z") is CYCLIC
        assert StabiliserClass.parse("trivial") is TRIVIAL
        with pytest.raises(ValueError):
            StabiliserClass.parse("Z/2")


class TestJson:
    def test_round_trip(self, bs23):
        assert QuotientPresentation.from_json(bs23.to_json()) == bs23

    def test_missing_class(self):
        doc = rose(1).to_json()
        del doc["classes"]["v"]
        with pytest.raises(ParseError):
            QuotientPresentation.from_json(doc)

    def test_bad_omega_shape(self):
        doc = bs_loop(2, 3).to_json()
        doc["omega"]["e"] = [2]
        with pytest.raises(ParseError):
            QuotientPresentation.from_json(doc)


class TestRatios:
    def test_examples(self):
        g = DiGraph.build(["v"], [("e", "v", "v"), ("f", "v", "v")])
        p = QuotientPresentation(g, {"v": CYCLIC}, {"e": (2, 3), "f": (-1, 5)})
        assert signed_index_ratio(p, p.path((), "v")) == 1
        assert signed_index_ratio(p, p.path(("e",), "v")) == Fraction(3, 2)
        assert signed_index_ratio(p, p.path(("e", "f"), "v")) == Fraction(-15, 2)

    def test_denominators(self):
        assert denominator(Fraction(3)) == 1
        assert denominator(Fraction(-15, 2)) == 2
        assert denominator(Fraction(3, 4)) == 4

    def test_trivial_edges_have_unit_ratio(self):
        p = rose(2)
        assert p.omega_pair("e0") == (1, 1)
        assert signed_index_ratio(p, p.path(("e0", "e1", "e0"), "v")) == 1


class TestDual:
    def test_free_group(self, f2_gog):
        d = dual_quotient(f2_gog)
        assert len(d.graph.vertices) == 4
        assert all(d.graph.in_degree(v) == 3 for v in d.graph.vertices)
        bar = f2_gog.graph.bar
        a = d.graph.adjacency()
        for e in d.graph.vertices:
            for f in d.graph.vertices:
                assert a[d.graph.index[e], d.graph.index[f]] == (0 if f == bar[e] else 1)
        assert not dual_in_degree_defects(f2_gog, d)

    def test_baumslag_solitar(self):
        g = UndirectedGraph.from_pairs(["v"], [("e", "E", "v", "v")])
        gog = GraphOfGroupsZ(g, {"v": CYCLIC}, {"e": 2, "E": 3})
        d = dual_quotient(gog)
        assert sorted(d.graph.vertices) == ["E", "e"]
        found = {}
        for edge in d.graph.edges:
            found.setdefault((edge.range, edge.source), []).append(d.omega[edge.id])
        assert found == {("e", "e"): [(2, 3)], ("e", "E"): [(1, 1), (1, 1)],
                         ("E", "E"): [(3, 2)], ("E", "e"): [(1, 1)]}
        assert not dual_in_degree_defects(gog, d)
        assert validate(d).ok

    def test_singular_vertex_rejected(self):
        g = UndirectedGraph.from_pairs("xy", [("e", "E", "x", "y")])
        report = validate_graph_of_groups(GraphOfGroupsZ(g, {"x": TRIVIAL, "y": TRIVIAL}))
        assert "singular" in rules(report)
        with pytest.raises(ValidationError):
            dual_quotient(GraphOfGroupsZ(g, {"x": TRIVIAL, "y": TRIVIAL}))

    def test_tree_piece(self):
        # a trivial edge between two vertices of degree 3 gets dual edges
        pairs = [("e", "E", "a", "b"), ("f1", "F1", "a", "a1"), ("f2", "F2", "a", "a2"),
                 ("f3", "F3", "b", "b1"), ("f4", "F4", "b", "b2")]
        g = UndirectedGraph.from_pairs(["a", "b", "a1", "a2", "b1", "b2"], pairs)
        d = dual_graph(g)
        assert {(x.range, x.source) for x in d.in_edges["e"]} == {("e", "f3"), ("e", "f4")}
        assert not d.in_edges["f1"]
