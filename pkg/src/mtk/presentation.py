"""Quotient data of a group action: quotient graph, stabiliser classes, indices.

A `QuotientPresentation` records, for an action on a multitree, the quotient
directed graph together with the stabiliser class of each vertex orbit and,
on infinite-cyclic components, the pair ``(omega_e, omega_ebar)``: the chosen
generator of the edge group maps to ``omega_e`` times the generator at the
range and to ``omega_ebar`` times the generator at the source.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ._jsonio import Reader
from .digraph import DiGraph, Path, UndirectedGraph, dual_edge_id
from .errors import PreconditionError, ValidationError


class StabiliserClass(enum.Enum):
    TRIVIAL = "trivial"
    INFINITE_CYCLIC = "z"

    @classmethod
    def parse(cls, text: str) -> "StabiliserClass":
        lowered = text.lower()
        if lowered in ("z", "infinitecyclic", "infinite_cyclic"):
            return cls.INFINITE_CYCLIC
        if lowered == "trivial":
            return cls.TRIVIAL
        raise ValueError(f"unknown stabiliser class {text!r}")


TRIVIAL = StabiliserClass.TRIVIAL
CYCLIC = StabiliserClass.INFINITE_CYCLIC


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.subject}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule, subject, message):
        self.violations.append(Violation(rule, subject, message))

    def raise_if_failed(self, what="presentation"):
        if self.violations:
            raise ValidationError(
                f"invalid {what}: " + "; ".join(str(v) for v in self.violations),
                self.violations)

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"rule": v.rule, "subject": v.subject, "message": v.message}
                               for v in self.violations]}


@dataclass(frozen=True)
class QuotientPresentation:
    graph: DiGraph
    classes: dict
    omega: dict = field(default_factory=dict)

    def vertex_class(self, v: str) -> StabiliserClass:
        return self.classes[v]

    def edge_class(self, e: str) -> StabiliserClass:
        return self.classes[self.graph.edge_map[e].range]

    def omega_pair(self, e: str) -> tuple[int, int]:
        """``(omega_e, omega_ebar)``; ``(1, 1)`` on trivial components."""
        if self.edge_class(e) is TRIVIAL:
            return (1, 1)
        return self.omega[e]

    def index(self, e: str) -> int:
        """``[G_{r(e)} : G_e]``, the number of lifts of ``e`` at a lift of its range."""
        return abs(self.omega_pair(e)[0])

    def components(self) -> list[tuple[str, ...]]:
        return self.graph.weak_components()

    def component_class(self, component: Iterable[str]) -> StabiliserClass:
        classes = {self.classes[v] for v in component}
        if len(classes) != 1:
            raise PreconditionError("component mixes stabiliser classes")
        return classes.pop()

    def restrict(self, component: Iterable[str]) -> "QuotientPresentation":
        sub = self.graph.induced(component)
        return QuotientPresentation(
            sub,
            {v: self.classes[v] for v in sub.vertices},
            {e.id: self.omega[e.id] for e in sub.edges if e.id in self.omega})

    def path(self, edges: Iterable[str] = (), vertex: str | None = None) -> Path:
        return Path(self.graph, tuple(edges), vertex)

    def to_json(self) -> dict:
        doc = self.graph.to_json()
        doc["classes"] = {v: self.classes[v].value for v in self.graph.vertices}
        doc["omega"] = {e: list(self.omega[e]) for e in sorted(self.omega)}
        return doc

    @classmethod
    def from_json(cls, doc, source=None) -> "QuotientPresentation":
        reader = doc if isinstance(doc, Reader) else Reader(doc, source)
        graph = DiGraph.from_json(reader)
        classes = _read_classes(reader, graph.vertices)
        omega = {}
        omega_reader = reader.optional("omega")
        if omega_reader is not None:
            for eid, r in omega_reader.as_dict().items():
                if eid not in graph.edge_map:
                    r.fail(f"unknown edge {eid!r}")
                pair = r.as_list()
                if len(pair) != 2:
                    r.fail("expected a pair [omega_e, omega_ebar]")
                omega[eid] = (pair[0].as_int(), pair[1].as_int())
        return cls(graph, classes, omega)


def _read_classes(reader, vertices):
    classes_reader = reader.require("classes")
    classes = {}
    for v, r in classes_reader.as_dict().items():
        if v not in vertices:
            r.fail(f"unknown vertex {v!r}")
        try:
            classes[v] = StabiliserClass.parse(r.as_id())
        except ValueError as exc:
            r.fail(str(exc))
    for v in vertices:
        if v not in classes:
            classes_reader.fail(f"no stabiliser class for vertex {v!r}")
    return classes


def validate(p: QuotientPresentation) -> ValidationReport:
    """Check the structural rules a quotient of a no-source multitree obeys."""
    report = ValidationReport()
    g = p.graph
    for v in g.vertices:
        if v not in p.classes:
            report.add("missing-class", f"vertex {v}", "no stabiliser class given")
    if not report.ok:
        return report
    for v in g.vertices:
        if not g.in_edges[v]:
            report.add("source", f"vertex {v}", "vertex has in-degree 0")
    for e in g.edges:
        if p.classes[e.range] is not p.classes[e.source]:
            report.add("mixed-classes", f"edge {e.id}",
                       f"mixed stabiliser classes in component "
                       f"({p.classes[e.range].value} at range, {p.classes[e.source].value} at source)")
    for e in g.edges:
        cyclic = p.classes[e.range] is CYCLIC or p.classes[e.source] is CYCLIC
        if cyclic and e.id not in p.omega:
            report.add("omega-missing", f"edge {e.id}", "omega pair missing on an infinite-cyclic edge")
        if not cyclic and e.id in p.omega:
            report.add("omega-trivial", f"edge {e.id}", "omega pair given on a trivial-stabiliser edge")
        if e.id in p.omega and 0 in p.omega[e.id]:
            report.add("omega-zero", f"edge {e.id}", "omega entries must be nonzero")
    for eid in sorted(set(p.omega) - set(g.edge_map)):
        report.add("omega-unknown", f"edge {eid}", "omega given for an unknown edge")
    return report


def signed_index_ratio(p: QuotientPresentation, path: Path) -> Fraction:
    """``q(alpha)``: the product of ``omega_ebar / omega_e`` along the path."""
    q = Fraction(1)
    for e in path.edges:
        w, wbar = p.omega_pair(e)
        q *= Fraction(wbar, w)
    return q


def denominator(r: Fraction) -> int:
    """``<r>``, the smallest positive denominator of ``r``."""
    return r.denominator


@dataclass(frozen=True)
class GraphOfGroupsZ:
    """A graph of groups whose vertex and edge groups are all trivial or ``Z``.

    ``alpha[e]`` is the signed index of the edge group in the group at the
    range of ``e``: the edge generator maps to ``alpha[e]`` times the vertex
    generator.  The reverse edge carries the embedding at the other end.
    """

    graph: UndirectedGraph
    classes: dict
    alpha: dict = field(default_factory=dict)

    def alpha_of(self, e: str) -> int:
        if self.classes[self.graph.edge_map[e].range] is TRIVIAL:
            return self.alpha.get(e, 1)
        return self.alpha[e]

    def to_json(self) -> dict:
        doc = self.graph.to_json()
        doc["classes"] = {v: self.classes[v].value for v in self.graph.vertices}
        doc["alpha"] = {e: self.alpha[e] for e in sorted(self.alpha)}
        return doc

    @classmethod
    def from_json(cls, doc, source=None) -> "GraphOfGroupsZ":
        reader = doc if isinstance(doc, Reader) else Reader(doc, source)
        graph = UndirectedGraph.from_json(reader, source)
        classes = _read_classes(reader, graph.vertices)
        alpha = {}
        alpha_reader = reader.optional("alpha")
        if alpha_reader is not None:
            for eid, r in alpha_reader.as_dict().items():
                if eid not in graph.edge_map:
                    r.fail(f"unknown edge {eid!r}")
                alpha[eid] = r.as_int()
        return cls(graph, classes, alpha)


def validate_graph_of_groups(gog: GraphOfGroupsZ) -> ValidationReport:
    report = ValidationReport()
    g = gog.graph
    for v in g.vertices:
        if v not in gog.classes:
            report.add("missing-class", f"vertex {v}", "no stabiliser class given")
    if not report.ok:
        return report
    for e in g.edges:
        if gog.classes[e.range] is not gog.classes[e.source]:
            report.add("mixed-classes", f"edge {e.id}", "mixed stabiliser classes in component")
            continue
        if gog.classes[e.range] is CYCLIC:
            a = gog.alpha.get(e.id)
            if a is None:
                report.add("alpha-missing", f"edge {e.id}", "alpha missing on an infinite-cyclic edge")
            elif a == 0:
                report.add("alpha-zero", f"edge {e.id}", "alpha must be nonzero")
        elif gog.alpha.get(e.id, 1) not in (1, -1):
            report.add("alpha-trivial", f"edge {e.id}", "alpha must be +-1 between trivial groups")
    if report.ok:
        for v in g.vertices:
            # valence of a lift of v in the covering tree
            valence = sum(abs(gog.alpha_of(f.id)) for f in g.in_edges[v])
            if valence < 2:
                report.add("singular", f"vertex {v}",
                           "lifts of this vertex have valence < 2 in the covering tree")
    return report


def dual_quotient(gog: GraphOfGroupsZ) -> QuotientPresentation:
    """Quotient presentation of the action on the dual multitree.

    For oriented edges ``e``, ``f`` with ``s(e) == r(f) == w`` the orbits of
    reduced 2-paths ``ef`` at a lift of ``w`` are the double cosets
    ``G_e \\ G_w / G_f = Z / (aZ + bZ)`` with ``a = alpha[bar e]`` and
    ``b = alpha[f]``: ``gcd(|a|, |b|)`` classes, each stabilised by
    ``lcm(|a|, |b|) Z``.  When ``f == bar e`` the backtracking orbit is
    dropped, leaving ``|a| - 1`` classes.
    """
    validate_graph_of_groups(gog).raise_if_failed("graph of groups")
    g = gog.graph
    edges, omega = [], {}
    for e in g.edges:
        back = g.bar[e.id]
        cyclic = gog.classes[e.source] is CYCLIC
        a = gog.alpha_of(back)
        for f in g.in_edges[e.source]:
            base = dual_edge_id(e.id, f.id)
            if not cyclic:
                if f.id != back:
                    edges.append((base, e.id, f.id))
                continue
            b = gog.alpha_of(f.id)
            lcm = math.lcm(abs(a), abs(b))
            count = abs(a) - 1 if f.id == back else math.gcd(a, b)
            pair = (lcm // a, lcm // b)
            for k in range(count):
                eid = base if count == 1 else f"{base}#{k}"
                edges.append((eid, e.id, f.id))
                omega[eid] = pair
    graph = DiGraph.build([e.id for e in g.edges], edges)
    classes = {e.id: gog.classes[e.range] for e in g.edges}
    return QuotientPresentation(graph, classes, omega)


def dual_in_degree_defects(gog: GraphOfGroupsZ, dual: QuotientPresentation) -> list[str]:
    """Dual vertices whose lifted in-degree differs from the tree valence minus one.

    A lift of the oriented edge ``e`` receives one dual edge per tree edge at
    ``s(e)`` other than its own reverse, so the weighted in-degree
    ``sum |omega_hat|`` over incoming dual edges must equal
    ``sum_{r(f) = s(e)} |alpha_f| - 1``.
    """
    g = gog.graph
    defects = []
    for e in g.edges:
        lifted = sum(dual.index(d.id) for d in dual.graph.in_edges[e.id])
        valence = sum(abs(gog.alpha_of(f.id)) for f in g.in_edges[e.source])
        if lifted != valence - 1:
            defects.append(f"{e.id}: lifted in-degree {lifted}, expected {valence - 1}")
    return defects
