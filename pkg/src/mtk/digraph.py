"""Finite directed and undirected graphs, multitree checks and vertex cylinders.

Paths are written right to left: a path ``e1 e2 ... en`` satisfies
``source(e_i) == range(e_{i+1})``, its range is ``range(e1)`` and its source is
``source(en)``.  A path "from w to v" therefore has source ``w`` and range
``v``, and ``v <= w`` in a multitree exactly when such a path exists.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from ._jsonio import Reader
from .errors import CertificationError, ParseError, PreconditionError
from .zmatrix import IntMatrix


class Edge(NamedTuple):
    id: str
    range: str
    source: str


@dataclass(frozen=True)
class DiGraph:
    """A finite directed graph with sorted, opaque string ids.

    Build instances with :meth:`build`; the raw constructor assumes its
    arguments are already sorted and only checks consistency.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex id")
        if len({e.id for e in self.edges}) != len(self.edges):
            raise PreconditionError("duplicate edge id")
        known = set(self.vertices)
        for e in self.edges:
            if e.range not in known or e.source not in known:
                raise PreconditionError(f"edge {e.id!r} references an unknown vertex")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable) -> "DiGraph":
        """Create a graph from vertex ids and ``(id, range, source)`` triples."""
        vs = tuple(sorted(str(v) for v in vertices))
        es = tuple(sorted((Edge(str(i), str(r), str(s)) for i, r, s in edges)))
        return cls(vs, es)

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def in_edges(self) -> dict[str, tuple[Edge, ...]]:
        """``r^{-1}(v)`` for every vertex ``v``."""
        table = defaultdict(list)
        for e in self.edges:
            table[e.range].append(e)
        return {v: tuple(table[v]) for v in self.vertices}

    @cached_property
    def out_edges(self) -> dict[str, tuple[Edge, ...]]:
        """``s^{-1}(v)`` for every vertex ``v``."""
        table = defaultdict(list)
        for e in self.edges:
            table[e.source].append(e)
        return {v: tuple(table[v]) for v in self.vertices}

    def in_degree(self, v: str) -> int:
        return len(self.in_edges[v])

    def sources(self) -> list[str]:
        """Vertices receiving no edge (``|r^{-1}(v)| == 0``)."""
        return [v for v in self.vertices if not self.in_edges[v]]

    def adjacency(self) -> IntMatrix:
        """Entry ``(v, w)`` counts edges with range ``v`` and source ``w``."""
        n = len(self.vertices)
        rows = [[0] * n for _ in range(n)]
        for e in self.edges:
            rows[self.index[e.range]][self.index[e.source]] += 1
        return IntMatrix.from_rows(rows, cols=n)

    def weak_components(self) -> list[tuple[str, ...]]:
        """Weakly connected components, each sorted, ordered by first vertex."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            a, b = find(e.range), find(e.source)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups = defaultdict(list)
        for v in self.vertices:
            groups[find(v)].append(v)
        return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])

    def induced(self, vertices: Iterable[str]) -> "DiGraph":
        keep = set(vertices)
        return DiGraph(
            tuple(v for v in self.vertices if v in keep),
            tuple(e for e in self.edges if e.range in keep and e.source in keep),
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "range": e.range, "source": e.source} for e in self.edges],
        }

    @classmethod
    def from_json(cls, doc, source=None) -> "DiGraph":
        reader = doc if isinstance(doc, Reader) else Reader(doc, source)
        vertices = [r.as_id() for r in reader.require("vertices").as_list()]
        edges = []
        for r in reader.require("edges").as_list():
            edges.append((r.require("id").as_id(), r.require("range").as_id(),
                          r.require("source").as_id()))
        _check_ids(reader, vertices, edges)
        return cls.build(vertices, edges)


def _check_ids(reader, vertices, edges):
    seen = set()
    for i, v in enumerate(vertices):
        if v in seen:
            reader.child("vertices").child(i).fail(f"duplicate vertex id {v!r}")
        seen.add(v)
    ids = set()
    for i, (eid, r, s) in enumerate(edges):
        where = reader.child("edges").child(i)
        if eid in ids:
            where.fail(f"duplicate edge id {eid!r}")
        ids.add(eid)
        for key, v in (("range", r), ("source", s)):
            if v not in seen:
                where.child(key).fail(f"unknown vertex {v!r}")


@dataclass(frozen=True)
class UndirectedGraph(DiGraph):
    """A directed graph with a fixed-point-free edge-reversal involution."""

    bar: dict = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        emap = {e.id: e for e in self.edges}
        if set(self.bar) != set(emap):
            raise PreconditionError("bar must be defined on exactly the edge ids")
        for eid, e in emap.items():
            b = self.bar[eid]
            if b == eid:
                raise PreconditionError(f"bar({eid!r}) must differ from {eid!r}")
            if b not in emap or self.bar[b] != eid:
                raise PreconditionError(f"bar is not an involution at {eid!r}")
            if emap[b].source != e.range or emap[b].range != e.source:
                raise PreconditionError(f"range({eid!r}) must equal source(bar({eid!r}))")

    @classmethod
    def build(cls, vertices, edges, bar=None) -> "UndirectedGraph":
        vs = tuple(sorted(str(v) for v in vertices))
        es = tuple(sorted(Edge(str(i), str(r), str(s)) for i, r, s in edges))
        return cls(vs, es, {str(k): str(v) for k, v in (bar or {}).items()})

    @classmethod
    def from_pairs(cls, vertices, pairs) -> "UndirectedGraph":
        """Build from ``(id, bar_id, range, source)``; ``bar_id`` is the reverse."""
        edges, bar = [], {}
        for eid, bid, r, s in pairs:
            edges += [(eid, r, s), (bid, s, r)]
            bar[eid], bar[bid] = bid, eid
        return cls.build(vertices, edges, bar)

    def is_nonsingular(self) -> bool:
        return all(len(self.in_edges[v]) > 1 for v in self.vertices)

    def to_json(self) -> dict:
        doc = super().to_json()
        doc["bar"] = {k: self.bar[k] for k in sorted(self.bar)}
        return doc

    @classmethod
    def from_json(cls, doc, source=None) -> "UndirectedGraph":
        reader = doc if isinstance(doc, Reader) else Reader(doc, source)
        base = DiGraph.from_json(reader)
        bar_reader = reader.require("bar")
        bar = {k: r.as_id() for k, r in bar_reader.as_dict().items()}
        emap = base.edge_map
        for k, b in bar.items():
            if k not in emap:
                bar_reader.child(k).fail(f"unknown edge {k!r}")
            if b not in emap:
                bar_reader.child(k).fail(f"unknown edge {b!r}")
        missing = sorted(set(emap) - set(bar))
        if missing:
            bar_reader.fail(f"no reverse given for edge {missing[0]!r}")
        try:
            return cls(base.vertices, base.edges, bar)
        except PreconditionError as exc:
            raise ParseError(str(exc), source=source, field="$.bar") from exc


@dataclass(frozen=True)
class Path:
    """A path in ``graph``; ``vertex`` is only used for length-zero paths."""

    graph: DiGraph = field(repr=False, compare=False)
    edges: tuple[str, ...] = ()
    vertex: str | None = None

    def __post_init__(self):
        emap = self.graph.edge_map
        if not self.edges:
            if self.vertex not in self.graph.index:
                raise PreconditionError("a length-0 path needs a vertex of the graph")
            return
        for a in self.edges:
            if a not in emap:
                raise PreconditionError(f"unknown edge {a!r}")
        for a, b in zip(self.edges, self.edges[1:]):
            if emap[a].source != emap[b].range:
                raise PreconditionError(f"edges {a!r}, {b!r} are not composable")

    def __len__(self):
        return len(self.edges)

    @property
    def range(self) -> str:
        return self.graph.edge_map[self.edges[0]].range if self.edges else self.vertex

    @property
    def source(self) -> str:
        return self.graph.edge_map[self.edges[-1]].source if self.edges else self.vertex

    def prefix(self, k: int) -> "Path":
        """The path ``e1 ... ek`` (``k == 0`` gives the range vertex)."""
        return Path(self.graph, self.edges[:k], self.range if k == 0 else None)

    def __add__(self, other: "Path") -> "Path":
        if self.source != other.range:
            raise PreconditionError("paths are not composable")
        return Path(self.graph, self.edges + other.edges, self.range)

    def is_reduced(self) -> bool:
        bar = getattr(self.graph, "bar", None)
        if not bar:
            return True
        return all(b != bar[a] for a, b in zip(self.edges, self.edges[1:]))


def path_count_matrix(g: DiGraph, max_len: int) -> IntMatrix:
    """Count paths of length ``0..max_len`` between every ordered vertex pair.

    Entry ``(v, w)`` is the number of paths with range ``v`` and source ``w``.
    """
    a = g.adjacency()
    power = IntMatrix.identity(len(g.vertices))
    total = power
    for _ in range(max_len):
        power = power @ a
        total = total + power
    return total


def topological_order(g: DiGraph) -> list[str] | None:
    """Vertices ordered so every edge goes from source to a later range.

    Returns ``None`` when ``g`` has a directed cycle.
    """
    # Kahn's algorithm run backwards: peel off vertices that are no edge's source
    indeg = {v: len(g.out_edges[v]) for v in g.vertices}
    ready = deque(v for v in g.vertices if indeg[v] == 0)
    order = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for e in g.in_edges[v]:
            indeg[e.source] -= 1
            if indeg[e.source] == 0:
                ready.append(e.source)
    if len(order) != len(g.vertices):
        return None
    order.reverse()
    return order


def is_multitree(g: DiGraph) -> bool:
    """At most one path (length 0 included) between every ordered vertex pair."""
    order = topological_order(g)
    if order is None:
        return False
    position = {v: i for i, v in enumerate(order)}
    for w in g.vertices:
        # count paths from w, capped at 2, following source -> range
        count = {w: 1}
        for u in order[position[w]:]:
            c = count.get(u)
            if not c:
                continue
            for e in g.out_edges[u]:
                n = count.get(e.range, 0) + c
                if n > 1:
                    return False
                count[e.range] = n
    return True


def vertex_cylinder(g: DiGraph, v: str) -> frozenset[str]:
    """All ``w`` admitting a path with range ``v`` and source ``w``."""
    seen = {v}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        for e in g.in_edges[x]:
            if e.source not in seen:
                seen.add(e.source)
                queue.append(e.source)
    return frozenset(seen)


def leq(g: DiGraph, v: str, w: str) -> bool:
    """``v <= w``: some path runs from ``w`` to ``v``."""
    return w in vertex_cylinder(g, v)


def min_upper_bounds(g: DiGraph, v: str, w: str) -> list[str]:
    """Minimal common upper bounds of ``v`` and ``w``, sorted."""
    common = vertex_cylinder(g, v) & vertex_cylinder(g, w)
    cyl = {u: vertex_cylinder(g, u) for u in common}
    minimal = [u for u in common
               if not any(u in cyl[x] for x in common if x != u)]
    return sorted(minimal)


@dataclass(frozen=True)
class CylinderDecomposition:
    v: str
    w: str
    bounds: tuple[str, ...]
    parts: dict = field(compare=False)
    intersection: frozenset = frozenset()


def decompose_cylinder_intersection(g: DiGraph, v: str, w: str) -> CylinderDecomposition:
    """Split ``Z(v) ∩ Z(w)`` into the cylinders of ``v ∨ w`` and certify it.

    Raises `CertificationError` when the cylinders overlap or fail to cover the
    intersection, which only happens for graphs that are not multitrees.
    """
    inter = vertex_cylinder(g, v) & vertex_cylinder(g, w)
    bounds = min_upper_bounds(g, v, w)
    parts = {u: vertex_cylinder(g, u) for u in bounds}
    covered = set()
    for u in bounds:
        overlap = covered & parts[u]
        if overlap:
            raise CertificationError(
                f"cylinders of {v!r} v {w!r} overlap at {sorted(overlap)[0]!r}")
        covered |= parts[u]
    if covered != inter:
        diff = sorted(covered ^ inter)
        raise CertificationError(
            f"cylinders of {v!r} v {w!r} do not cover the intersection (at {diff[0]!r})")
    return CylinderDecomposition(v, w, tuple(bounds), parts, frozenset(inter))


def dual_edge_id(e: str, f: str) -> str:
    return f"{e}|{f}"


def dual_graph(g: UndirectedGraph) -> DiGraph:
    """Vertices are the edges of ``g``; edges are reduced 2-paths ``ef``.

    The dual edge ``ef`` has range ``e`` and source ``f``.
    """
    edges = []
    for e in g.edges:
        for f in g.in_edges[e.source]:
            if f.id != g.bar[e.id]:
                edges.append((dual_edge_id(e.id, f.id), e.id, f.id))
    if len({i for i, _, _ in edges}) != len(edges):
        raise PreconditionError("edge ids containing '|' make dual edge ids ambiguous")
    return DiGraph.build([e.id for e in g.edges], edges)
