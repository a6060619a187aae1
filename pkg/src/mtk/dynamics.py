"""Decision procedures for minimality, aperiodicity, local contractivity and
topological freeness of boundary actions, read off the quotient data.

Every decider has a companion ``*_witness`` function returning the evidence
(cycles, paths, primes) behind its answer, in JSON-ready form.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .digraph import DiGraph, Path, vertex_cylinder
from .errors import PreconditionError
from .presentation import TRIVIAL, QuotientPresentation, signed_index_ratio, validate


@dataclass(frozen=True)
class TriState:
    value: str
    reason: str | None = None

    @classmethod
    def unknown(cls, reason: str) -> "TriState":
        return cls("unknown", reason)

    def __bool__(self):
        raise TypeError("TriState has no truth value; compare with YES/NO")

    def __str__(self):
        return self.value if self.reason is None else f"{self.value} ({self.reason})"

    def to_json(self):
        doc = {"value": self.value}
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc


YES = TriState("yes")
NO = TriState("no")


def strongly_connected_components(g: DiGraph) -> list[tuple[str, ...]]:
    """Tarjan's algorithm, iterative; components come out sorted internally."""
    index, low, on_stack = {}, {}, set()
    stack, result = [], []
    counter = 0
    for root in g.vertices:
        if root in index:
            continue
        work = [(root, iter(g.out_edges[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, edges = work[-1]
            advanced = False
            for e in edges:
                w = e.range
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.out_edges[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                result.append(tuple(sorted(comp)))
    return sorted(result)


def _is_cyclic(g: DiGraph, comp) -> bool:
    if len(comp) > 1:
        return True
    v = comp[0]
    return any(e.source == v for e in g.in_edges[v])


def _cycle_in(g: DiGraph, comp, through_edge=None, through_vertex=None) -> list[str]:
    """A cycle inside the strongly connected ``comp``, as a right-to-left path.

    The cycle starts with ``through_edge`` if given, otherwise at
    ``through_vertex`` (default: the first vertex of ``comp``).
    """
    members = set(comp)
    if through_edge is None:
        v = through_vertex if through_vertex is not None else comp[0]
        through_edge = next(e.id for e in g.in_edges[v] if e.source in members)
    first = g.edge_map[through_edge]
    return [first.id] + _path_between(g, first.range, first.source, members)


def is_cofinal(g: DiGraph) -> bool:
    """Every infinite path passes a vertex with a path to every vertex.

    Quantifying over cycles is enough, and a cycle meets a vertex reaching
    ``v`` exactly when its strongly connected component does.
    """
    return cofinality_witness(g) is None


def cofinality_witness(g: DiGraph):
    """``None`` when cofinal, else a cycle and a vertex the cycle cannot reach."""
    if g.sources():
        raise PreconditionError(f"graph has a source: vertex {g.sources()[0]!r}")
    for comp in strongly_connected_components(g):
        if not _is_cyclic(g, comp):
            continue
        rep = comp[0]
        for v in g.vertices:
            if rep not in vertex_cylinder(g, v):
                return {"cycle": _cycle_in(g, comp), "unreachable_vertex": v}
    return None


def is_aperiodic(g: DiGraph) -> bool:
    """Every cycle has an entrance (a vertex on it with in-degree at least 2)."""
    return aperiodicity_witness(g) is None


def aperiodicity_witness(g: DiGraph):
    """``None`` when aperiodic, else a cycle without an entrance."""
    lonely = [v for v in g.vertices if g.in_degree(v) == 1]
    sub = g.induced(lonely)
    for comp in strongly_connected_components(sub):
        if _is_cyclic(sub, comp):
            return {"cycle_without_entrance": _cycle_in(sub, comp)}
    return None


def local_contractivity_sufficient(p: QuotientPresentation) -> TriState:
    """Test the sufficient condition for local contractivity.

    Answers YES when every vertex can be reached from a cycle that has an
    entrance or runs through an edge of index at least 2.  The condition is
    not necessary, so failure yields UNKNOWN, never NO.
    """
    validate(p).raise_if_failed()
    return YES if local_contractivity_witness(p)["ok"] else TriState.unknown(
        "sufficient condition fails")


def local_contractivity_witness(p: QuotientPresentation) -> dict:
    g = p.graph
    good = []
    for comp in strongly_connected_components(g):
        if not _is_cyclic(g, comp):
            continue
        members = set(comp)
        entrance = next((v for v in comp if g.in_degree(v) >= 2), None)
        if entrance is not None:
            good.append((comp, _cycle_in(g, comp, through_vertex=entrance),
                         f"entrance at {entrance}"))
            continue
        big = next((e.id for e in g.edges
                    if e.range in members and e.source in members and p.index(e.id) >= 2), None)
        if big is not None:
            good.append((comp, _cycle_in(g, comp, through_edge=big),
                         f"edge {big} has index {p.index(big)}"))
    per_vertex, ok = {}, True
    for v in g.vertices:
        cyl = vertex_cylinder(g, v)
        hit = next((c for c in good if c[0][0] in cyl), None)
        if hit is None:
            ok = False
            per_vertex[v] = None
            continue
        comp, cycle, why = hit
        start = g.edge_map[cycle[0]].range
        per_vertex[v] = {"cycle": cycle, "reason": why,
                         "path_to_vertex": _path_between(g, start, v)}
    return {"ok": ok, "vertices": per_vertex}


def _path_between(g: DiGraph, source: str, target: str, within=None) -> list[str]:
    """Edges of a shortest path with the given source and range."""
    came = {target: None}
    queue = deque([target])
    while queue:
        x = queue.popleft()
        if x == source:
            break
        for e in g.in_edges[x]:
            if e.source not in came and (within is None or e.source in within):
                came[e.source] = e
                queue.append(e.source)
    if source not in came:
        raise PreconditionError(f"no path from {source!r} to {target!r}")
    edges = []
    y = source
    while came[y] is not None:
        edges.append(came[y].id)
        y = came[y].range
    edges.reverse()
    return edges


def lift_stabiliser_generator(p: QuotientPresentation, path: Path) -> int:
    """Generator ``M`` of the stabiliser ``M Z`` of any lift of ``path``.

    ``M = lcm_k <q(alpha_{k-1}) / omega_{e_k}>``; length-zero paths give 1.
    """
    m = 1
    q = Fraction(1)
    for e in path.edges:
        w, wbar = p.omega_pair(e)
        m = math.lcm(m, (q / w).denominator)
        q *= Fraction(wbar, w)
    return m


def _valuation(n: int, prime: int) -> int:
    n = abs(n)
    k = 0
    while n % prime == 0:
        n //= prime
        k += 1
    return k


def _primes_of(values) -> list[int]:
    primes = set()
    for n in values:
        n = abs(n)
        d = 2
        while d * d <= n:
            while n % d == 0:
                primes.add(d)
                n //= d
            d += 1
        if n > 1:
            primes.add(n)
    return sorted(primes)


def _negative_cycle(g: DiGraph, vertices, weight) -> list[str] | None:
    """Bellman-Ford over edges inside ``vertices``, relaxing range -> source."""
    members = set(vertices)
    edges = [e for e in g.edges if e.range in members and e.source in members]
    dist = {v: 0 for v in vertices}
    pred = {}
    changed = None
    for _ in range(len(vertices)):
        changed = None
        for e in edges:
            cand = dist[e.range] + weight[e.id]
            if cand < dist[e.source]:
                dist[e.source] = cand
                pred[e.source] = e
                changed = e.source
        if changed is None:
            return None
    x = changed
    for _ in range(len(vertices)):
        x = pred[x].range
    cycle, y = [], x
    while True:
        e = pred[y]
        cycle.append(e.id)
        y = e.range
        if y == x:
            break
    cycle.reverse()
    return cycle


def unbounded_denominator_witness(p: QuotientPresentation, v: str):
    """A prime ``p``, path ``beta`` and cycle ``eta`` with ``v_p(q(eta)) < 0``.

    The eventually periodic path ``beta eta eta ...`` then has unbounded
    denominators.  Returns ``None`` when no such cycle is reachable from ``v``.
    """
    if p.vertex_class(v) is TRIVIAL:
        return None
    g = p.graph
    reach = sorted(vertex_cylinder(g, v))
    members = set(reach)
    local = [e for e in g.edges if e.range in members]
    for prime in _primes_of(x for e in local for x in p.omega_pair(e.id)):
        weight = {e.id: _valuation(p.omega_pair(e.id)[1], prime)
                  - _valuation(p.omega_pair(e.id)[0], prime) for e in local}
        cycle = _negative_cycle(g, reach, weight)
        if cycle is not None:
            start = g.edge_map[cycle[0]].range
            beta = _path_between(g, start, v)
            q = signed_index_ratio(p, Path(g, tuple(cycle)))
            return {"prime": prime, "beta": beta, "eta": cycle,
                    "q_eta": str(q), "denominator": q.denominator}
    return None


def has_unbounded_denominator_path(p: QuotientPresentation, v: str) -> bool:
    """Some infinite path with range ``v`` has ``<q(lambda_{k-1}) / omega_{e_k}>`` unbounded."""
    return unbounded_denominator_witness(p, v) is not None


def is_topologically_free(p: QuotientPresentation) -> TriState:
    validate(p).raise_if_failed()
    return topological_freeness_witness(p)["value"]


def topological_freeness_witness(p: QuotientPresentation) -> dict:
    comps = []
    overall = YES
    for comp in p.components():
        sub = p.restrict(comp)
        if p.component_class(comp) is TRIVIAL:
            witness = aperiodicity_witness(sub.graph)
            value = YES if witness is None else NO
            comps.append({"vertices": list(comp), "case": "free", "value": value,
                          "evidence": witness})
        else:
            evidence = {v: unbounded_denominator_witness(sub, v) for v in comp}
            value = YES if all(evidence.values()) else NO
            comps.append({"vertices": list(comp), "case": "infinite-cyclic",
                          "value": value, "evidence": evidence})
        if value is NO:
            overall = NO
    return {"value": overall, "components": comps}
