"""Finite truncations of the covering tree over a base vertex.

A node is a quotient path ``e_1 ... e_k`` with range the base vertex plus a
digit vector ``c`` with ``0 <= c_i < |omega_{e_i}|``: the digits pick one of
the ``|omega_e|`` lifts of each edge.  The parent of a node drops its last
edge and digit.  On infinite-cyclic components the integers act on nodes by
the carry recursion implemented in `mtk.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

from . import kernels
from .dynamics import lift_stabiliser_generator
from .errors import CertificationError, PreconditionError, SizeGuardError
from .presentation import TRIVIAL, QuotientPresentation, validate

DEFAULT_MAX_NODES = 10**6


class LiftNode(NamedTuple):
    path: tuple[str, ...]
    digits: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.path)


ROOT = LiftNode((), ())


@dataclass(frozen=True)
class LiftTree:
    presentation: QuotientPresentation
    base: str
    depth: int
    levels: tuple = field(repr=False)

    @property
    def cyclic(self) -> bool:
        return self.presentation.vertex_class(self.base) is not TRIVIAL

    def nodes(self):
        for level in self.levels:
            yield from level

    def __len__(self):
        return sum(len(level) for level in self.levels)

    def __contains__(self, node) -> bool:
        node = LiftNode(tuple(node[0]), tuple(node[1]))
        if node.depth > self.depth or len(node.digits) != node.depth:
            return False
        p = self.presentation
        target = self.base
        for e, c in zip(node.path, node.digits):
            edge = p.graph.edge_map.get(e)
            if edge is None or edge.range != target or not 0 <= c < p.index(e):
                return False
            target = edge.source
        return True

    def vertex_of(self, node: LiftNode) -> str:
        """Quotient vertex of the node: the source of its path."""
        if not node.path:
            return self.base
        return self.presentation.graph.edge_map[node.path[-1]].source

    def parent(self, node: LiftNode) -> LiftNode | None:
        if not node.path:
            return None
        return LiftNode(node.path[:-1], node.digits[:-1])

    def children(self, node: LiftNode) -> list[LiftNode]:
        if node.depth >= self.depth:
            return []
        p = self.presentation
        return [LiftNode(node.path + (e.id,), node.digits + (c,))
                for e in p.graph.in_edges[self.vertex_of(node)]
                for c in range(p.index(e.id))]

    def omega_lists(self, path) -> tuple[list[int], list[int]]:
        pairs = [self.presentation.omega_pair(e) for e in path]
        return [a for a, _ in pairs], [b for _, b in pairs]

    def to_dot(self) -> str:
        """Graphviz source with edges drawn from child to parent."""
        names = {n: f"n{k}" for k, n in enumerate(self.nodes())}
        lines = ["digraph lifts {", "  rankdir=BT;"]
        for n, name in names.items():
            label = "root" if not n.path else " ".join(f"{e}:{c}" for e, c in zip(n.path, n.digits))
            lines.append(f'  {name} [label="{label}"];')
        for n, name in names.items():
            par = self.parent(n)
            if par is not None:
                lines.append(f"  {name} -> {names[par]};")
        lines.append("}")
        return "\n".join(lines)


def build_lift_tree(p: QuotientPresentation, v: str, d: int,
                    max_nodes: int = DEFAULT_MAX_NODES) -> LiftTree:
    validate(p).raise_if_failed()
    if v not in p.graph.index:
        raise PreconditionError(f"unknown vertex {v!r}")
    if d < 0:
        raise PreconditionError("depth must be nonnegative")
    tree = LiftTree(p, v, d, ())
    levels = [[ROOT]]
    total = 1
    for _ in range(d):
        nxt = []
        for node in levels[-1]:
            nxt.extend(tree.children(node))
            if total + len(nxt) > max_nodes:
                raise SizeGuardError(f"lift tree exceeds {max_nodes} nodes", max_nodes)
        total += len(nxt)
        levels.append(nxt)
    return LiftTree(p, v, d, tuple(tuple(level) for level in levels))


def _check(t: LiftTree, node, m: int) -> LiftNode:
    if node not in t:
        raise PreconditionError(f"node {tuple(node)!r} is not in this lift tree")
    if not t.cyclic and m != 0:
        raise PreconditionError("trivial stabilisers: only m = 0 acts")
    return LiftNode(tuple(node[0]), tuple(node[1]))


def act_on_lift(t: LiftTree, m: int, node) -> LiftNode:
    node = _check(t, node, m)
    if m == 0 or not node.path:
        return node
    w, wbar = t.omega_lists(node.path)
    digits, _ = kernels.act(node.digits, w, wbar, m)
    return LiftNode(node.path, digits)


def carry_out(t: LiftTree, m: int, node) -> int:
    """The multiplier passed beyond the last digit of ``node``."""
    node = _check(t, node, m)
    w, wbar = t.omega_lists(node.path)
    return kernels.act(node.digits, w, wbar, m)[1]


def brute_stabiliser(t: LiftTree, node) -> int:
    """Least positive ``M`` with ``act_on_lift(t, M, node) == node``."""
    node = _check(t, node, 0)
    if not t.cyclic:
        raise PreconditionError("stabilisers are only searched on infinite-cyclic components")
    w, wbar = t.omega_lists(node.path)
    m = kernels.brute_stabiliser(node.digits, w, wbar)
    if m <= 0:
        raise CertificationError(f"stabiliser search failed at node {tuple(node)!r}")
    return m


def brute_stabilisers(t: LiftTree) -> dict[LiftNode, int]:
    """`brute_stabiliser` for every node, batched per quotient path."""
    if not t.cyclic:
        raise PreconditionError("stabilisers are only searched on infinite-cyclic components")
    out = {}
    paths = dict.fromkeys(n.path for n in t.nodes())
    for path in paths:
        w, wbar = t.omega_lists(path)
        values = kernels.stabilisers_for_path(w, wbar)
        for digits, m in zip(product(*(range(abs(a)) for a in w)), values):
            if m <= 0:
                raise CertificationError(f"stabiliser search failed on path {path!r}")
            out[LiftNode(path, digits)] = m
    return out


@dataclass
class LiftReport:
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, check: str, node, message: str):
        self.violations.append({"check": check, "node": _node_json(node), "message": message})

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": dict(self.checked), "violations": list(self.violations)}


def _node_json(node):
    if node is None:
        return None
    return {"path": list(node[0]), "digits": list(node[1])}


def _quotient_paths(p: QuotientPresentation, v: str, d: int):
    paths, frontier = [()], [((), v)]
    for _ in range(d):
        nxt = []
        for path, u in frontier:
            for e in p.graph.in_edges[u]:
                nxt.append((path + (e.id,), e.source))
        paths.extend(x for x, _ in nxt)
        frontier = nxt
    return paths


def verify_lift_invariants(t: LiftTree, multipliers=None) -> LiftReport:
    """Check lift counts, in-degrees, digit bounds and the action axioms.

    ``multipliers`` defaults to a small symmetric range together with the
    edge indices.  On trivial components only ``m = 0`` is tried.
    """
    p = t.presentation
    report = LiftReport()
    counts = {}
    for node in t.nodes():
        counts[node.path] = counts.get(node.path, 0) + 1
        if node not in t:
            report.add("digit-bound", node, "digit outside [0, |omega|) or path not composable")
    for path in _quotient_paths(p, t.base, t.depth):
        expected = math.prod(p.index(e) for e in path)
        got = counts.pop(path, 0)
        if got != expected:
            report.add("lift-count", (path, ()), f"{got} lifts, expected {expected}")
    for path in counts:
        report.add("projection", (path, ()), "path is not a quotient path into the base")
    report.checked["lift-count"] = True

    kids = {}
    for node in t.nodes():
        par = t.parent(node)
        if par is not None:
            kids[par] = kids.get(par, 0) + 1
    for level in t.levels[:-1]:
        for node in level:
            u = t.vertex_of(node)
            expected = sum(p.index(e.id) for e in p.graph.in_edges[u])
            if kids.get(node, 0) != expected:
                report.add("in-degree", node, f"in-degree {kids.get(node, 0)}, expected {expected}")
    report.checked["in-degree"] = True

    if multipliers is None:
        if t.cyclic:
            extra = {p.index(e.id) for e in p.graph.edges}
            multipliers = sorted(set(range(-3, 4)) | extra)
        else:
            multipliers = [0]
    members = set(t.nodes())
    for node in t.nodes():
        if node not in t:
            continue
        for m in multipliers:
            image = act_on_lift(t, m, node)
            if image not in members or image.path != node.path:
                report.add("projection", node, f"m={m} moves the node off its quotient path")
                continue
            par = t.parent(node)
            if par is not None and t.parent(image) != act_on_lift(t, m, par):
                report.add("parent", node, f"m={m} does not commute with the parent map")
            if act_on_lift(t, -m, image) != node:
                report.add("inverse", node, f"m={m} and -m are not mutually inverse")
        for a in multipliers[:3]:
            for b in multipliers[-3:]:
                lhs = act_on_lift(t, a + b, node)
                if lhs != act_on_lift(t, a, act_on_lift(t, b, node)):
                    report.add("composition", node, f"action of {a}+{b} differs from the composite")
    report.checked["action"] = list(multipliers)
    return report


def compare_with_formula(t: LiftTree) -> list[str]:
    """Nodes where the brute stabiliser differs from the closed formula."""
    problems = []
    for node, m in brute_stabilisers(t).items():
        formula = lift_stabiliser_generator(t.presentation, t.presentation.path(node.path, t.base))
        if m != formula:
            problems.append(f"{node.path} {node.digits}: brute {m}, formula {formula}")
    return problems
