"""Finite set families modelling independent, finitely aligned families of
compact open sets.

Members are indexed by string ids and stored as frozensets of atoms.  The
partition questions (is this set a disjoint union of members?) are answered
by exhaustive exact-cover search, so universes are capped at
`DEFAULT_MAX_ATOMS` atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from ._jsonio import Reader
from .errors import CertificationError, PreconditionError, SizeGuardError, UniquenessError
from .zmatrix import IntMatrix

DEFAULT_MAX_ATOMS = 16


def _atom_key(a: str):
    return (0, int(a), a) if a.lstrip("-").isdigit() else (1, 0, a)


@dataclass(frozen=True)
class SetFamily:
    universe: frozenset
    members: dict = field(hash=False)
    ids: tuple = ()
    max_atoms: int = DEFAULT_MAX_ATOMS

    def __post_init__(self):
        if not self.ids:
            object.__setattr__(self, "ids", tuple(self.members))
        if set(self.ids) != set(self.members) or len(self.ids) != len(self.members):
            raise ValueError("ids must list every member exactly once")
        seen = {}
        for i in self.ids:
            m = self.members[i]
            if not m:
                raise ValueError(f"member {i!r} is empty")
            if not m <= self.universe:
                raise ValueError(f"member {i!r} has atoms outside the universe")
            if m in seen:
                raise ValueError(f"members {seen[m]!r} and {i!r} are equal as sets")
            seen[m] = i
        if len(self.universe) > self.max_atoms:
            raise SizeGuardError(
                f"universe has {len(self.universe)} atoms, more than the cap of {self.max_atoms}",
                self.max_atoms)

    @classmethod
    def of(cls, members, universe=None, **kw) -> "SetFamily":
        """Build from ``{id: atoms}`` or a list of atom collections (ids ``"0"``, ``"1"``, ...)."""
        if not isinstance(members, dict):
            members = {str(k): m for k, m in enumerate(members)}
        members = {str(k): frozenset(str(a) for a in m) for k, m in members.items()}
        if universe is None:
            universe = frozenset().union(*members.values())
        return cls(frozenset(str(a) for a in universe), members, tuple(members), **kw)

    def __getitem__(self, i) -> frozenset:
        return self.members[i]

    def __len__(self):
        return len(self.ids)

    def subfamily(self, ids) -> "SetFamily":
        keep = [i for i in self.ids if i in set(ids)]
        return SetFamily(self.universe, {i: self.members[i] for i in keep}, tuple(keep),
                         self.max_atoms)

    def partitions(self, target, limit: int = 2) -> list[tuple[str, ...]]:
        """Up to ``limit`` ways of writing ``target`` as a disjoint union of members."""
        target = frozenset(str(a) for a in target)
        candidates = [i for i in self.ids if self.members[i] <= target]
        order = {i: k for k, i in enumerate(self.ids)}
        cover = {a: [i for i in candidates if a in self.members[i]] for a in target}
        memo = {}

        def search(remaining):
            # Algorithm X: branch on the atom with the fewest usable members
            if not remaining:
                return [()]
            if remaining in memo:
                return memo[remaining]
            atom = min(remaining, key=lambda a: (len(cover[a]), _atom_key(a)))
            found = []
            for i in cover[atom]:
                m = self.members[i]
                if m <= remaining:
                    for rest in search(remaining - m):
                        found.append((i,) + rest)
                        if len(found) >= limit:
                            break
                if len(found) >= limit:
                    break
            memo[remaining] = found
            return found

        return [tuple(sorted(s, key=order.__getitem__)) for s in search(target)]

    def to_json(self, action: "PermAction | None" = None) -> dict:
        doc = {
            "universe": sorted(self.universe, key=_atom_key),
            "members": {i: sorted(self.members[i], key=_atom_key) for i in self.ids},
        }
        if action is not None:
            doc["action"] = [dict(g) for g in action.generators]
        return doc

    @classmethod
    def from_json(cls, doc, source=None) -> tuple["SetFamily", "PermAction"]:
        reader = doc if isinstance(doc, Reader) else Reader(doc, source)
        universe = frozenset(r.as_id() for r in reader.require("universe").as_list())
        members = {}
        for i, r in reader.require("members").as_dict().items():
            atoms = frozenset(a.as_id() for a in r.as_list())
            if not atoms <= universe:
                r.fail(f"atoms {sorted(atoms - universe, key=_atom_key)} are not in the universe")
            members[i] = atoms
        try:
            family = cls(universe, members, tuple(members))
        except ValueError as exc:
            reader.require("members").fail(str(exc))
        generators = []
        action_reader = reader.optional("action")
        for r in action_reader.as_list() if action_reader is not None else []:
            generators.append(_read_generator(r, family.ids))
        return family, PermAction(tuple(generators))


def _read_generator(r: Reader, ids) -> dict:
    if isinstance(r.doc, dict):
        perm = {k: v.as_id() for k, v in r.as_dict().items()}
    else:
        # array aligned with the member order: entry k is the image of member k,
        # given as an id or as a position
        images = r.as_list()
        if len(images) != len(ids):
            r.fail(f"permutation has {len(images)} entries for {len(ids)} members")
        perm = {}
        for k, img in enumerate(images):
            if isinstance(img.doc, int) and not isinstance(img.doc, bool):
                if not 0 <= img.doc < len(ids):
                    img.fail("position out of range")
                perm[ids[k]] = ids[img.doc]
            else:
                perm[ids[k]] = img.as_id()
    if set(perm) != set(ids) or set(perm.values()) != set(ids):
        r.fail("not a permutation of the member ids")
    return perm


@dataclass(frozen=True)
class PermAction:
    """A group acting on member ids, given by generating permutations."""

    generators: tuple = ()

    def orbit_closure(self, ids) -> frozenset:
        closed = set(ids)
        frontier = list(closed)
        while frontier:
            i = frontier.pop()
            for g in self.generators:
                j = g[i]
                if j not in closed:
                    closed.add(j)
                    frontier.append(j)
        return frozenset(closed)

    def is_invariant(self, ids) -> bool:
        return self.orbit_closure(ids) == frozenset(ids)


def is_independent(f: SetFamily) -> bool:
    """No member is the union of the members strictly inside it."""
    return independence_witness(f) is None


def independence_witness(f: SetFamily):
    for i in f.ids:
        m = f[i]
        inside = [f[j] for j in f.ids if f[j] < m]
        if inside and frozenset().union(*inside) == m:
            return i
    return None


def is_finitely_aligned(f: SetFamily) -> bool:
    """Each pairwise intersection is empty or a disjoint union of members."""
    return alignment_witness(f) is None


def alignment_witness(f: SetFamily):
    for i, j in combinations(f.ids, 2):
        inter = f[i] & f[j]
        if inter and not f.partitions(inter, limit=1):
            return (i, j)
    return None


def decompose_set(f: SetFamily, target) -> list[str] | None:
    """The unique partition of ``target`` into members, ``None`` if there is none."""
    target = frozenset(str(a) for a in target)
    found = f.partitions(target, limit=2)
    if not found:
        return None
    if len(found) > 1:
        raise UniquenessError(
            f"two partitions of {sorted(target, key=_atom_key)}: {list(found[0])} and {list(found[1])}")
    return list(found[0])


def decompose_intersection(f: SetFamily, i: str, j: str) -> list[str] | None:
    if i == j:
        return [i]
    return decompose_set(f, f[i] & f[j])


def check_action(f: SetFamily, h: PermAction) -> None:
    """Reject generators that do not respect containment between members."""
    for g in h.generators:
        if set(g) != set(f.ids) or set(g.values()) != set(f.ids):
            raise PreconditionError("generator is not a permutation of the member ids")
        for i in f.ids:
            for j in f.ids:
                if (f[i] <= f[j]) != (f[g[i]] <= f[g[j]]):
                    raise PreconditionError(
                        f"generator breaks containment between members {i!r} and {j!r}")


def saturate(f: SetFamily, F, h: PermAction = PermAction()) -> list[str]:
    """Enlarge an invariant index set ``F`` to one whose subfamily is finitely aligned.

    ``J`` is the union, over nonempty ``Y ⊆ F``, of the decompositions of
    ``∩_{i ∈ Y} member(i)``.  Equal intersections are decomposed once.
    """
    F = list(dict.fromkeys(F))
    unknown = [i for i in F if i not in f.members]
    if unknown:
        raise PreconditionError(f"unknown member id {unknown[0]!r}")
    if not is_independent(f):
        raise PreconditionError(f"family is not independent (member {independence_witness(f)!r})")
    pair = alignment_witness(f)
    if pair is not None:
        raise PreconditionError(f"family is not finitely aligned (members {pair[0]!r}, {pair[1]!r})")
    check_action(f, h)
    if not h.is_invariant(F):
        raise PreconditionError("index set is not invariant under the action")

    # all intersections of nonempty subsets of F, built by pairwise closure
    sets = {f[i] for i in F}
    frontier = set(sets)
    while frontier:
        new = {a & b for a in frontier for b in sets} - sets
        sets |= new
        frontier = new
    J = set(F)
    for s in sets:
        if s:
            parts = decompose_set(f, s)
            if parts is None:
                raise CertificationError(f"intersection {sorted(s, key=_atom_key)} has no partition")
            J.update(parts)
    result = [i for i in f.ids if i in J]
    if not h.is_invariant(result):
        raise CertificationError("saturation is not invariant")
    if not is_finitely_aligned(f.subfamily(result)):
        raise CertificationError("saturated subfamily is not finitely aligned")
    return result


def saturation_is_minimal(f: SetFamily, F, J, h: PermAction = PermAction()) -> bool:
    """Whether dropping any single index of ``J \\ F`` breaks alignment or invariance."""
    for i in J:
        if i in F:
            continue
        smaller = [j for j in J if j != i]
        if h.is_invariant(smaller) and is_finitely_aligned(f.subfamily(smaller)):
            return False
    return True


def primitive_parts(f: SetFamily) -> dict[str, frozenset]:
    """``e'_i``: member ``i`` minus every strictly smaller member."""
    parts = {}
    for i in f.ids:
        below = [f[j] for j in f.ids if f[j] < f[i]]
        parts[i] = f[i].difference(*below)
    return parts


def _condition_a_witness(f: SetFamily):
    prim = primitive_parts(f)
    for i in f.ids:
        if not prim[i]:
            return f"primitive part of member {i!r} is empty"
    for i, j in combinations(f.ids, 2):
        if prim[i] & prim[j]:
            return f"primitive parts of members {i!r} and {j!r} overlap"
    for j in f.ids:
        covered = frozenset().union(*(prim[i] for i in f.ids if prim[i] <= f[j]))
        if covered != f[j]:
            return f"member {j!r} is not a union of primitive parts"
    return None


def _condition_b_witness(f: SetFamily):
    bad = independence_witness(f)
    if bad is not None:
        return f"member {bad!r} is the union of the members inside it"
    for i, j in combinations(f.ids, 2):
        inter = f[i] & f[j]
        inside = [f[k] for k in f.ids if f[k] <= inter]
        if frozenset().union(*inside) != inter:
            return f"intersection of members {i!r} and {j!r} is not the union of members inside it"
    return None


def verify_prop_equivalence(f: SetFamily) -> tuple[bool, bool]:
    """Evaluate both characterisations of a spanning orthogonal primitive family.

    A: the primitive parts are nonempty, pairwise disjoint, and every member
    is a union of them.  B: the family is independent and each pairwise
    intersection is the union of the members it contains.  They must agree.
    """
    a = _condition_a_witness(f) is None
    b = _condition_b_witness(f) is None
    if a != b:
        raise CertificationError(f"conditions disagree on this family: A={a}, B={b}")
    return a, b


@dataclass(frozen=True)
class TransitionMatrix:
    """``gamma[i][j] = 1`` iff member ``order[i]`` lies inside member ``order[j]``."""

    order: tuple[str, ...]
    matrix: IntMatrix
    primitives: dict = field(hash=False, compare=False)

    def to_json(self) -> dict:
        return {"order": list(self.order), "matrix": self.matrix.to_json(),
                "primitives": {i: sorted(self.primitives[i], key=_atom_key) for i in self.order},
                "determinant": str(self.matrix.det())}


def transition_matrix(f: SetFamily) -> TransitionMatrix:
    """Containment matrix of the family, certified unipotent with determinant 1.

    Members are ordered by size (then id), a linear extension of inclusion,
    which makes the matrix upper unitriangular.
    """
    problem = _condition_a_witness(f)
    if problem is not None:
        raise PreconditionError(problem)
    order = tuple(sorted(f.ids, key=lambda i: (len(f[i]), f.ids.index(i))))
    n = len(order)
    rows = [[int(f[order[i]] <= f[order[j]]) for j in range(n)] for i in range(n)]
    m = IntMatrix.from_rows(rows, cols=n)
    prim = primitive_parts(f)
    for j in range(n):
        pieces = [prim[order[i]] for i in range(n) if rows[i][j]]
        union = frozenset().union(*pieces)
        if union != f[order[j]] or sum(map(len, pieces)) != len(union):
            raise CertificationError(f"member {order[j]!r} is not the disjoint union of its primitives")
    for i in range(n):
        if rows[i][i] != 1 or any(rows[i][j] for j in range(i)):
            raise CertificationError("transition matrix is not upper unitriangular")
    if m.det() != 1:
        raise CertificationError("transition matrix has determinant other than 1")
    return TransitionMatrix(order, m, prim)


def family_report(f: SetFamily, h: PermAction = PermAction(), F=None) -> dict:
    """Every check on one family, as used by the command line."""
    report = {
        "independent": is_independent(f),
        "finitely_aligned": is_finitely_aligned(f),
        "primitive_parts": {i: sorted(s, key=_atom_key) for i, s in primitive_parts(f).items()},
    }
    a, b = verify_prop_equivalence(f)
    report["condition_a"], report["condition_b"] = a, b
    if a:
        report["transition_matrix"] = transition_matrix(f).to_json()
    if report["independent"] and report["finitely_aligned"]:
        decomp = {}
        for i, j in combinations(f.ids, 2):
            decomp[f"{i},{j}"] = decompose_intersection(f, i, j)
        report["intersections"] = decomp
        if F is not None:
            J = saturate(f, F, h)
            report["saturation"] = {"F": list(F), "J": J,
                                    "minimal": saturation_is_minimal(f, F, J, h)}
    return report
