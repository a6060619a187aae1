"""Random instance generators and brute-force reference computations.

The reference computations deliberately avoid the machinery they check: no
Smith form, no strongly connected components, no Bellman-Ford.  They are
exponential and meant for small inputs only.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .digraph import DiGraph, Path, is_multitree, path_count_matrix
from .presentation import CYCLIC, QuotientPresentation
from .setfamily import PermAction, SetFamily
from .zmatrix import AbelianGroup, IntMatrix, rank_fraction_free

# --- generators -------------------------------------------------------------


def random_matrix(rng: random.Random, max_dim=8, bound=10) -> IntMatrix:
    rows, cols = rng.randint(1, max_dim), rng.randint(1, max_dim)
    # a share of low-rank and sparse matrices keeps the torsion interesting
    style = rng.random()
    if style < 0.2:
        k = rng.randint(1, min(rows, cols))
        left = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(rows)]
        right = [[rng.randint(-3, 3) for _ in range(cols)] for _ in range(k)]
        m = IntMatrix.from_rows(left, k) @ IntMatrix.from_rows(right, cols)
        if all(abs(x) <= bound for r in m.entries for x in r):
            return m
    density = 0.4 if style < 0.5 else 1.0
    return IntMatrix.from_rows(
        [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(cols)]
         for _ in range(rows)], cols)


def random_multitree(rng: random.Random, max_vertices=12) -> DiGraph:
    """Add random forward edges, keeping only those that preserve the multitree property."""
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    edges = []
    for i, j in pairs[: rng.randint(0, len(pairs))]:
        # edge from vertex i (source) to vertex j (range)
        trial = edges + [(f"e{len(edges)}", vertices[j], vertices[i])]
        if is_multitree(DiGraph.build(vertices, trial)):
            edges = trial
    return DiGraph.build(vertices, edges)


def random_no_source_digraph(rng: random.Random, max_vertices=7, max_in=3) -> DiGraph:
    n = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = []
    for v in vertices:
        for _ in range(rng.randint(1, max_in)):
            edges.append((f"e{len(edges)}", v, rng.choice(vertices)))
    return DiGraph.build(vertices, edges)


def random_presentation(rng: random.Random, max_vertices=4, max_omega=4, max_in=2,
                        cls=CYCLIC) -> QuotientPresentation:
    g = random_no_source_digraph(rng, max_vertices, max_in)
    omega = {}
    if cls is CYCLIC:
        for e in g.edges:
            omega[e.id] = tuple(rng.choice((-1, 1)) * rng.randint(1, max_omega) for _ in range(2))
    return QuotientPresentation(g, {v: cls for v in g.vertices}, omega)


def random_prop_family(rng: random.Random, max_atoms=8, max_members=8, mirrored=False):
    """A family satisfying the primitive-decomposition conditions, with an action.

    Pick a random partial order on the indices and disjoint nonempty blocks;
    member ``j`` is the union of the blocks at or below ``j``.  With
    ``mirrored`` the construction is duplicated on a second copy of the atoms
    and the action swaps the copies.
    """
    copies = 2 if mirrored else 1
    atoms_per_copy = max_atoms // copies
    k = rng.randint(1, min(max_members // copies, atoms_per_copy))
    below = {j: {j} for j in range(k)}
    for i, j in combinations(range(k), 2):
        if rng.random() < 0.35:
            below[j] |= below[i]
    for j in range(k):  # transitive closure in index order
        for i in sorted(below[j]):
            below[j] |= below[i]
    # some atoms may stay outside every member
    used = rng.randint(k, atoms_per_copy)
    cuts = sorted(rng.sample(range(1, used), k - 1)) if k > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [used])]
    blocks, start = [], 0
    for s in sizes:
        blocks.append(range(start, start + s))
        start += s
    members, universe = {}, set()
    for c in range(copies):
        for j in range(k):
            atoms = {f"{a}.{c}" if mirrored else str(a) for i in below[j] for a in blocks[i]}
            members[f"m{j}.{c}" if mirrored else f"m{j}"] = atoms
        universe |= {f"{a}.{c}" if mirrored else str(a) for a in range(atoms_per_copy)}
    family = SetFamily.of(members, universe)
    if not mirrored:
        return family, PermAction()
    swap = {f"m{j}.{c}": f"m{j}.{1 - c}" for j in range(k) for c in range(2)}
    return family, PermAction((swap,))


def random_family(rng: random.Random, max_atoms=6, max_members=6) -> SetFamily:
    n = rng.randint(1, max_atoms)
    atoms = [str(a) for a in range(n)]
    members = []
    for _ in range(rng.randint(1, max_members)):
        s = frozenset(a for a in atoms if rng.random() < 0.5)
        if s and s not in members:
            members.append(s)
    if not members:
        members = [frozenset(atoms)]
    return SetFamily.of(members, atoms)


def random_invariant_subset(family: SetFamily, action: PermAction, rng: random.Random):
    """A random subset of member ids closed under the action."""
    picked = [i for i in family.ids if rng.random() < 0.4]
    closed = action.orbit_closure(picked)
    return [i for i in family.ids if i in closed]


def composable_pairs(p: QuotientPresentation, rng: random.Random, count: int):
    """Random pairs of paths ``(a, b)`` with ``s(a) == r(b)``."""
    g = p.graph
    for _ in range(count):
        v = rng.choice(g.vertices)
        edges, u = [], v
        for _ in range(rng.randint(0, 6)):
            e = rng.choice(g.in_edges[u])
            edges.append(e.id)
            u = e.source
        cut = rng.randint(0, len(edges))
        mid = g.edge_map[edges[cut - 1]].source if cut else v
        yield Path(g, tuple(edges[:cut]), v), Path(g, tuple(edges[cut:]), mid)


# --- reference computations -------------------------------------------------


def _minors(m: IntMatrix, k: int):
    for rs in combinations(range(m.rows), k):
        for cs in combinations(range(m.cols), k):
            yield IntMatrix.from_rows([[m[i, j] for j in cs] for i in rs], k).det()


def cokernel_by_minors(m: IntMatrix) -> AbelianGroup:
    """Cokernel from determinantal divisors ``D_k`` (gcd of all ``k x k`` minors).

    The invariant factors are ``D_k / D_{k-1}``.  Enumerates every minor.
    """
    r = rank_fraction_free(m)
    orders, prev = [], 1
    for k in range(1, r + 1):
        d = 0
        for x in _minors(m, k):
            d = math.gcd(d, x)
        orders.append(d // prev)
        prev = d
    return AbelianGroup.of(m.rows - r, orders)


def cokernel_order_by_counting(m: IntMatrix, modulus: int) -> int:
    """``|Z^n / (image + modulus Z^n)|`` by closing the column span mod ``modulus``."""
    n = m.rows
    gens = [tuple(m[i, j] % modulus for i in range(n)) for j in range(m.cols)]
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple((a + b) % modulus for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return modulus ** n // len(seen)


def reach_matrix(g: DiGraph, depth: int) -> dict:
    """``reach[(x, v)]``: a path from ``x`` to ``v`` of length at most ``depth``."""
    counts = path_count_matrix(g, depth)
    idx = g.index
    return {(x, v): counts[idx[v], idx[x]] > 0 for x in g.vertices for v in g.vertices}


def closed_walks(g: DiGraph, max_len: int):
    """Every closed walk of length ``1..max_len``, as (start vertex, edge ids)."""
    for start in g.vertices:
        stack = [(start, ())]
        while stack:
            x, walk = stack.pop()
            for e in g.in_edges[x]:
                w = walk + (e.id,)
                if e.source == start:
                    yield start, w
                if len(w) < max_len:
                    stack.append((e.source, w))


def cofinal_by_enumeration(g: DiGraph) -> bool:
    n = len(g.vertices)
    reach = reach_matrix(g, 2 * n)
    emap = g.edge_map
    for start, walk in closed_walks(g, n):
        on_walk = {start} | {emap[e].source for e in walk}
        for v in g.vertices:
            if not any(reach[(x, v)] for x in on_walk):
                return False
    return True


def aperiodic_by_enumeration(g: DiGraph) -> bool:
    n = len(g.vertices)
    emap = g.edge_map
    # an entrance-free cycle is simple, so length n suffices
    for start, walk in closed_walks(g, n):
        on_walk = {start} | {emap[e].source for e in walk}
        if all(g.in_degree(x) < 2 for x in on_walk):
            return False
    return True


def _paths_from(g: DiGraph, v: str, max_len: int):
    """All paths with range ``v`` of length ``0..max_len``, with their source."""
    out, frontier = [((), v)], [((), v)]
    for _ in range(max_len):
        nxt = []
        for path, u in frontier:
            for e in g.in_edges[u]:
                nxt.append((path + (e.id,), e.source))
        out.extend(nxt)
        frontier = nxt
    return out


def _denominator_windows(p: QuotientPresentation, edges, beta_len, period):
    q = Fraction(1)
    dens = []
    for e in edges:
        w, wbar = p.omega_pair(e)
        dens.append((q / w).denominator)
        q *= Fraction(wbar, w)
    windows = []
    start = beta_len
    while start + period <= len(dens):
        lcm = 1
        for d in dens[start:start + period]:
            lcm = math.lcm(lcm, d)
        windows.append(lcm)
        start += period
    return windows


def unbounded_by_enumeration(p: QuotientPresentation, v: str, max_len=8, k_max=64):
    """Search eventually periodic paths ``beta eta eta ...`` with range ``v``.

    For each candidate the denominators of ``q(lambda_{k-1}) / omega_{e_k}``
    are evaluated for ``k <= k_max`` and grouped by period.  The path is
    unbounded when the last window's lcm fails to divide the first one's.
    Returns the witness ``(beta, eta)`` or ``None``.
    """
    g = p.graph
    for beta, u in _paths_from(g, v, max_len - 1):
        for start, eta in closed_walks(g, max_len - len(beta)):
            if start != u:
                continue
            reps = max(2, (k_max - len(beta)) // len(eta))
            edges = (beta + eta * reps)[:k_max]
            windows = _denominator_windows(p, edges, len(beta), len(eta))
            if len(windows) >= 2 and windows[0] % windows[-1] != 0:
                return beta, eta
    return None


def lift_counts_by_enumeration(p: QuotientPresentation, v: str, depth: int) -> dict:
    """Lifts per quotient path, by multiplying indices edge by edge."""
    return {path: math.prod(p.index(e) for e in path) for path, _ in _paths_from(p.graph, v, depth)}


__all__ = [
    "random_matrix", "random_multitree", "random_no_source_digraph", "random_presentation",
    "random_prop_family", "random_family", "random_invariant_subset", "composable_pairs", "cokernel_by_minors", "cokernel_order_by_counting",
    "reach_matrix", "closed_walks", "cofinal_by_enumeration", "aperiodic_by_enumeration",
    "unbounded_by_enumeration", "lift_counts_by_enumeration",
]
