"""Seeded cross-checks between the closed formulas and the brute-force oracles.

Each ``check_*`` function draws its own instances from a seeded generator
and returns a `CheckResult` listing every failure.  `run_suite` runs them all
in a fixed order; the command line's ``oracle`` command is a thin wrapper.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from itertools import combinations

from . import oracles
from .digraph import (DiGraph, UndirectedGraph, decompose_cylinder_intersection, dual_graph,
                      is_multitree, leq, path_count_matrix, vertex_cylinder)
from .dynamics import (has_unbounded_denominator_path, is_aperiodic, is_cofinal,
                       lift_stabiliser_generator)
from .errors import MtkError
from .ktheory import k_theory, stabiliser_matrices, theta_induced
from .lifttree import brute_stabilisers, build_lift_tree, verify_lift_invariants
from .presentation import (CYCLIC, TRIVIAL, GraphOfGroupsZ, QuotientPresentation,
                           dual_in_degree_defects, dual_quotient, signed_index_ratio, validate,
                           validate_graph_of_groups)
from .setfamily import (is_finitely_aligned, is_independent, saturate, transition_matrix,
                        verify_prop_equivalence)
from .zmatrix import IntMatrix, cokernel, kernel, rank_fraction_free, smith_normal_form

MAX_REPORTED = 5


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str):
        self.failures.append(message)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "cases": self.cases,
                "failures": self.failures[:MAX_REPORTED],
                "failure_count": len(self.failures)}


def _timed(fn):
    def run(seed: int = 0, **kw) -> CheckResult:
        start = time.perf_counter()
        result = fn(random.Random(f"{fn.__name__}:{seed}"), **kw)
        result.seconds = time.perf_counter() - start
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _is_unimodular(m: IntMatrix) -> bool:
    return abs(m.det()) == 1


@_timed
def check_linear_algebra(rng, cases=500, small_cases=200) -> CheckResult:
    """Smith certificates on random matrices and cokernels against two oracles."""
    res = CheckResult("linear-algebra")
    for k in range(cases):
        m = oracles.random_matrix(rng)
        res.cases += 1
        snf = smith_normal_form(m)
        d = snf.diagonal
        if snf.U @ m @ snf.V != snf.S:
            res.fail(f"matrix {k}: U M V != S for {m.tolist()}")
        if not (_is_unimodular(snf.U) and _is_unimodular(snf.V)):
            res.fail(f"matrix {k}: transform not unimodular for {m.tolist()}")
        if any(snf.S[i, j] for i in range(m.rows) for j in range(m.cols) if i != j):
            res.fail(f"matrix {k}: S not diagonal for {m.tolist()}")
        nonzero = [x for x in d if x]
        if d[:len(nonzero)] != nonzero or any(x < 0 for x in d) or any(
                b % a for a, b in zip(nonzero, nonzero[1:])):
            res.fail(f"matrix {k}: diagonal {d} is not a divisibility chain")
        if snf.rank != rank_fraction_free(m):
            res.fail(f"matrix {k}: rank {snf.rank} != elimination rank for {m.tolist()}")
    for k in range(small_cases):
        m = oracles.random_matrix(rng, max_dim=3, bound=rng.choice((3, 10)))
        res.cases += 1
        got = cokernel(m)
        want = oracles.cokernel_by_minors(m)
        if got != want:
            res.fail(f"small matrix {k}: cokernel {got} != minors oracle {want} for {m.tolist()}")
        for n in (2, 3, 4, 6):
            expect = n ** got.rank * math.prod(math.gcd(t, n) for t in got.torsion)
            count = oracles.cokernel_order_by_counting(m, n)
            if count != expect:
                res.fail(f"small matrix {k}: |coker mod {n}| counted {count}, expected {expect}")
        if kernel(m).rank != m.cols - rank_fraction_free(m):
            res.fail(f"small matrix {k}: kernel rank mismatch")
    return res


@_timed
def check_cylinders(rng, cases=200, max_vertices=12) -> CheckResult:
    """Cylinder intersections split uniquely into the cylinders of minimal upper bounds."""
    res = CheckResult("cylinders")
    for k in range(cases):
        g = oracles.random_multitree(rng, max_vertices)
        res.cases += 1
        n = len(g.vertices)
        counts = path_count_matrix(g, n)
        if any(x > 1 for r in counts.entries for x in r):
            res.fail(f"multitree {k}: generator produced repeated paths")
            continue
        reach = oracles.reach_matrix(g, n)
        up = {v: {x for x in g.vertices if reach[(x, v)]} for v in g.vertices}
        for v in g.vertices:
            for w in g.vertices:
                # order equivalence on multitrees
                if (w in vertex_cylinder(g, v)) != (vertex_cylinder(g, w) <= vertex_cylinder(g, v)) \
                        or (w in vertex_cylinder(g, v)) != leq(g, v, w):
                    res.fail(f"multitree {k}: order equivalence fails at ({v}, {w})")
                try:
                    dec = decompose_cylinder_intersection(g, v, w)
                except MtkError as exc:
                    res.fail(f"multitree {k}: ({v}, {w}) {exc}")
                    continue
                inter = up[v] & up[w]
                # the maximal up-sets inside the intersection, found by brute force
                inside = [u for u in inter if up[u] <= inter]
                maximal = sorted(u for u in inside
                                 if not any(u != x and up[u] < up[x] for x in inside))
                if list(dec.bounds) != maximal or set().union(*(up[u] for u in maximal)) != inter:
                    res.fail(f"multitree {k}: ({v}, {w}) bounds {list(dec.bounds)} vs oracle {maximal}")
    return res


def _random_tree(rng, max_vertices=9) -> UndirectedGraph:
    n = rng.randint(2, max_vertices)
    pairs = []
    for i in range(1, n):
        j = rng.randrange(i)
        pairs.append((f"t{i}", f"T{i}", f"x{j}", f"x{i}"))
    return UndirectedGraph.from_pairs([f"x{i}" for i in range(n)], pairs)


def _random_gog(rng, cls) -> GraphOfGroupsZ:
    """A one- or two-vertex graph of groups with loops and links."""
    n = rng.randint(1, 2)
    vertices = [f"x{i}" for i in range(n)]
    pairs = []
    for k in range(rng.randint(1, 3)):
        a, b = rng.choice(vertices), rng.choice(vertices)
        pairs.append((f"g{k}", f"G{k}", a, b))
    if n == 2 and not any({p[2], p[3]} == {"x0", "x1"} for p in pairs):
        pairs.append(("h", "H", "x0", "x1"))
    g = UndirectedGraph.from_pairs(vertices, pairs)
    alpha = {}
    if cls is CYCLIC:
        alpha = {e.id: rng.choice((-1, 1)) * rng.randint(1, 4) for e in g.edges}
    return GraphOfGroupsZ(g, {v: cls for v in vertices}, alpha)


@_timed
def check_duals(rng, cases=100) -> CheckResult:
    """Dual construction: in-degree identity, validity, free-case agreement, trees."""

    res = CheckResult("dual")
    for k in range(cases):
        cls = rng.choice((TRIVIAL, CYCLIC))
        gog = _random_gog(rng, cls)
        if not validate_graph_of_groups(gog).ok:
            continue
        res.cases += 1
        dual = dual_quotient(gog)
        for problem in dual_in_degree_defects(gog, dual):
            res.fail(f"gog {k}: {problem}")
        report = validate(dual)
        if not report.ok:
            res.fail(f"gog {k}: dual fails validation: {report.violations[0]}")
        if cls is TRIVIAL and dual.graph != dual_graph(gog.graph):
            res.fail(f"gog {k}: trivial dual differs from the dual graph")
    for k in range(cases):
        tree = _random_tree(rng)
        res.cases += 1
        if not is_multitree(dual_graph(tree)):
            res.fail(f"tree {k}: dual graph is not a multitree")
    return res


def _flip_vertex(p: QuotientPresentation, v: str) -> QuotientPresentation:
    omega = {}
    for e in p.graph.edges:
        a, b = p.omega[e.id]
        omega[e.id] = (-a if e.range == v else a, -b if e.source == v else b)
    return replace(p, omega=omega)


@_timed
def check_ktheory(rng, cases=100) -> CheckResult:
    """Edge-sum consistency, sign and relabelling invariance, free-case formula."""
    res = CheckResult("ktheory")
    for k in range(cases):
        p = oracles.random_presentation(rng, max_vertices=5, max_omega=4, max_in=3)
        res.cases += 1
        a0, a1 = stabiliser_matrices(p)
        idx = p.graph.index
        for v in p.graph.vertices:
            col = [0] * len(idx)
            for e in p.graph.in_edges[v]:
                col[idx[e.source]] += abs(p.omega[e.id][0])
            if [a0[i, idx[v]] for i in range(len(idx))] != col:
                res.fail(f"presentation {k}: column {v} of A0 disagrees with the edge sum")
        for e in p.graph.edges:
            if theta_induced(p, e.id)[0] != abs(p.omega[e.id][0]):
                res.fail(f"presentation {k}: theta_induced degree 0 wrong on {e.id}")
        base = k_theory(p)
        both = replace(p, omega={e: (-a, -b) for e, (a, b) in p.omega.items()})
        if stabiliser_matrices(both) != (a0, a1):
            res.fail(f"presentation {k}: reversing all generators changed A0/A1")
        v = rng.choice(p.graph.vertices)
        flipped = k_theory(_flip_vertex(p, v))
        if (flipped.K0, flipped.K1) != (base.K0, base.K1):
            res.fail(f"presentation {k}: flipping the generator at {v} changed K-theory")
        perm = {x: f"r{n}" for n, x in enumerate(reversed(p.graph.vertices))}
        relabelled = QuotientPresentation(
            DiGraph.build(perm.values(), [(f"z{e.id}", perm[e.range], perm[e.source])
                                          for e in p.graph.edges]),
            {perm[x]: c for x, c in p.classes.items()},
            {f"z{e}": w for e, w in p.omega.items()})
        other = k_theory(relabelled)
        if (other.K0, other.K1) != (base.K0, base.K1):
            res.fail(f"presentation {k}: relabelling changed K-theory")
        unit = replace(p, omega={e: (rng.choice((-1, 1)), rng.choice((-1, 1))) for e in p.omega})
        if stabiliser_matrices(unit)[0] != p.graph.adjacency().T:
            res.fail(f"presentation {k}: unit indices do not give the transposed adjacency")

        free = oracles.random_presentation(rng, max_vertices=6, max_in=3, cls=TRIVIAL)
        res.cases += 1
        rows = [[int(i == j) for j in range(len(free.graph.vertices))]
                for i in range(len(free.graph.vertices))]
        for e in free.graph.edges:
            rows[free.graph.index[e.source]][free.graph.index[e.range]] -= 1
        m = IntMatrix.from_rows(rows, cols=len(rows))
        kt = k_theory(free)
        if kt.K0 != oracles.cokernel_by_minors(m):
            res.fail(f"free presentation {k}: K0 disagrees with coker(1 - A^T)")
        if kt.K1.rank != len(rows) - rank_fraction_free(m):
            res.fail(f"free presentation {k}: K1 disagrees with ker(1 - A^T)")
    return res


@_timed
def check_graph_deciders(rng, cases=200, max_vertices=7) -> CheckResult:
    """Cofinality and aperiodicity against exhaustive walk enumeration."""
    res = CheckResult("graph-deciders")
    for k in range(cases):
        g = oracles.random_no_source_digraph(rng, max_vertices)
        res.cases += 1
        if is_cofinal(g) != oracles.cofinal_by_enumeration(g):
            res.fail(f"digraph {k}: is_cofinal disagrees with enumeration on {g.to_json()}")
        aperiodic = is_aperiodic(g)
        if aperiodic != oracles.aperiodic_by_enumeration(g):
            res.fail(f"digraph {k}: is_aperiodic disagrees with enumeration on {g.to_json()}")
        if aperiodic:
            # adding an edge into a vertex never removes an entrance
            v = rng.choice(g.vertices)
            bigger = DiGraph.build(g.vertices, [tuple(e) for e in g.edges]
                                   + [("extra", v, rng.choice(g.vertices))])
            if not is_aperiodic(bigger):
                res.fail(f"digraph {k}: extra edge into {v} broke aperiodicity")
    return res


@_timed
def check_freeness(rng, cases=100, max_vertices=5, max_omega=4) -> CheckResult:
    """Negative-cycle decider against eventually periodic path enumeration."""
    res = CheckResult("topological-freeness")
    for k in range(cases):
        p = oracles.random_presentation(rng, max_vertices, max_omega)
        res.cases += 1
        for v in p.graph.vertices:
            fast = has_unbounded_denominator_path(p, v)
            slow = oracles.unbounded_by_enumeration(p, v, max_len=8, k_max=64)
            if fast != (slow is not None):
                res.fail(f"presentation {k} vertex {v}: decider {fast}, enumeration {slow}")
        for a, b in oracles.composable_pairs(p, rng, 10):
            if signed_index_ratio(p, a + b) != signed_index_ratio(p, a) * signed_index_ratio(p, b):
                res.fail(f"presentation {k}: q not multiplicative on {a.edges} + {b.edges}")
    return res


@_timed
def check_isotropy(rng, cases=50, max_vertices=4, max_omega=4, depth=5) -> CheckResult:
    """Brute stabilisers on every lift equal the closed formula; M q is integral."""
    res = CheckResult("isotropy")
    for k in range(cases):
        p = oracles.random_presentation(rng, max_vertices, max_omega)
        res.cases += 1
        for v in p.graph.vertices:
            tree = build_lift_tree(p, v, depth)
            brute = brute_stabilisers(tree)
            formula = {}
            for node, m in brute.items():
                path = p.path(node.path, v)
                if node.path not in formula:
                    want = lift_stabiliser_generator(p, path)
                    formula[node.path] = want
                    if (want * signed_index_ratio(p, path)).denominator != 1:
                        res.fail(f"presentation {k}: M q(alpha) not integral on {node.path}")
                if m != formula[node.path]:
                    res.fail(f"presentation {k} vertex {v}: node {node.path} {node.digits} "
                             f"brute {m}, formula {formula[node.path]}")
                    break
                par = tree.parent(node)
                if par is not None and par.path and m % brute[par]:
                    res.fail(f"presentation {k}: parent stabiliser does not divide child's at {node}")
            counts = oracles.lift_counts_by_enumeration(p, v, depth)
            for path, n in counts.items():
                if sum(1 for node in brute if node.path == path) != n:
                    res.fail(f"presentation {k}: wrong number of lifts of {path}")
                    break
            small = build_lift_tree(p, v, min(depth, 3))
            report = verify_lift_invariants(small)
            for problem in report.violations[:1]:
                res.fail(f"presentation {k} vertex {v}: {problem}")
    return res


@_timed
def check_setfamilies(rng, cases=100) -> CheckResult:
    """Transition matrices, saturation and the equivalence of the two conditions."""
    res = CheckResult("set-families")
    for k in range(cases):
        family, action = oracles.random_prop_family(rng, mirrored=bool(k % 2))
        res.cases += 1
        try:
            a, b = verify_prop_equivalence(family)
            if not (a and b):
                res.fail(f"family {k}: generator produced a family failing the conditions")
                continue
            tm = transition_matrix(family)
            m = tm.matrix
            n = m.rows
            if any(x not in (0, 1) for r in m.entries for x in r):
                res.fail(f"family {k}: transition matrix is not a 0/1 matrix")
            if any(m[i, i] != 1 for i in range(n)) or any(m[i, j] for i in range(n) for j in range(i)):
                res.fail(f"family {k}: transition matrix is not unipotent upper triangular")
            if m.det() != 1:
                res.fail(f"family {k}: determinant {m.det()}")
            F = oracles.random_invariant_subset(family, action, rng)
            J = saturate(family, F, action)
            if not set(F) <= set(J):
                res.fail(f"family {k}: saturation lost indices of F")
            if not action.is_invariant(J):
                res.fail(f"family {k}: saturation is not invariant")
            if not is_finitely_aligned(family.subfamily(J)):
                res.fail(f"family {k}: saturation is not finitely aligned")
        except MtkError as exc:
            res.fail(f"family {k}: {type(exc).__name__}: {exc}")
    for k in range(cases):
        family = oracles.random_family(rng)
        res.cases += 1
        try:
            verify_prop_equivalence(family)
        except MtkError as exc:
            res.fail(f"random family {k}: {exc}")
        if is_independent(family):
            for i, j in combinations(family.ids, 2):
                found = family.partitions(family[i] & family[j], limit=10**6)
                if len(found) > 1 and family[i] & family[j]:
                    res.fail(f"random family {k}: {len(found)} partitions of {i} & {j}")
    return res


CHECKS = {
    "linear-algebra": check_linear_algebra,
    "cylinders": check_cylinders,
    "dual": check_duals,
    "ktheory": check_ktheory,
    "graph-deciders": check_graph_deciders,
    "topological-freeness": check_freeness,
    "isotropy": check_isotropy,
    "set-families": check_setfamilies,
}


def run_suite(seed: int = 0, only=None):
    """Run the checks in order, yielding each result as it completes."""
    for name, check in CHECKS.items():
        if only and name not in only:
            continue
        yield check(seed)


__all__ = ["CheckResult", "CHECKS", "run_suite"] + [f.__name__ for f in CHECKS.values()]
