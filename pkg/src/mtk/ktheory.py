"""K-theory of boundary crossed products from quotient data.

Maps act on column vectors indexed by the quotient vertices, so column ``v``
of ``A0`` holds the coefficients of ``A0(v) = sum_{r(e) = v} |omega_e| s(e)``.
With trivial stabilisers the same convention turns the edge-sum map into the
transpose of the adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError
from .presentation import CYCLIC, TRIVIAL, QuotientPresentation, validate
from .zmatrix import AbelianGroup, IntMatrix, cokernel, direct_sum, kernel

FREE = "free"
INFINITE_CYCLIC = "infinite-cyclic"


def adjacency_matrix(p: QuotientPresentation) -> IntMatrix:
    """``A[v][w]`` = number of edges with range ``v`` and source ``w``."""
    return p.graph.adjacency()


def theta_induced(p: QuotientPresentation, e: str) -> tuple[int, int]:
    """Multipliers of the edge map on ``K_0`` and ``K_1`` of the vertex groups.

    ``(|omega_e|, sgn(omega_e) * omega_ebar)`` for infinite-cyclic edges.  A
    trivial edge sends the unit class to the unit class and has nothing to
    act on in ``K_1``, reported as ``(1, 0)``.
    """
    if p.edge_class(e) is TRIVIAL:
        return (1, 0)
    w, wbar = p.omega[e]
    return (abs(w), wbar if w > 0 else -wbar)


def _edge_sum(p: QuotientPresentation, degree: int) -> IntMatrix:
    n = len(p.graph.vertices)
    idx = p.graph.index
    rows = [[0] * n for _ in range(n)]
    for e in p.graph.edges:
        rows[idx[e.source]][idx[e.range]] += theta_induced(p, e.id)[degree]
    return IntMatrix.from_rows(rows, cols=n)


def stabiliser_matrices(p: QuotientPresentation) -> tuple[IntMatrix, IntMatrix]:
    """``(A0, A1)`` on ``Z[vertices]`` for an all-infinite-cyclic presentation."""
    bad = [v for v in p.graph.vertices if p.classes[v] is not CYCLIC]
    if bad:
        raise PreconditionError(f"vertex {bad[0]!r} has trivial stabilisers; A0/A1 need Z")
    return _edge_sum(p, 0), _edge_sum(p, 1)


@dataclass(frozen=True)
class ComponentK:
    vertices: tuple[str, ...]
    case: str
    matrices: dict = field(compare=False)
    K0: AbelianGroup
    K1: AbelianGroup

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "case": self.case,
            "matrices": {k: m.to_json() for k, m in self.matrices.items()},
            "K0": self.K0.to_json(),
            "K1": self.K1.to_json(),
        }


@dataclass(frozen=True)
class KTheoryReport:
    components: tuple[ComponentK, ...]

    @property
    def K0(self) -> AbelianGroup:
        return direct_sum(*(c.K0 for c in self.components))

    @property
    def K1(self) -> AbelianGroup:
        return direct_sum(*(c.K1 for c in self.components))

    def to_json(self) -> dict:
        return {
            "components": [c.to_json() for c in self.components],
            "global": {"K0": self.K0.to_json(), "K1": self.K1.to_json()},
        }

    def to_text(self) -> str:
        lines = []
        for i, c in enumerate(self.components):
            lines.append(f"component {i} [{', '.join(c.vertices)}] ({c.case})")
            lines.append(f"  K0 = {c.K0}")
            lines.append(f"  K1 = {c.K1}")
        lines.append(f"K0 = {self.K0}")
        lines.append(f"K1 = {self.K1}")
        return "\n".join(lines)


def _component(p: QuotientPresentation, vertices) -> ComponentK:
    sub = p.restrict(vertices)
    one = IntMatrix.identity(len(sub.graph.vertices))
    if p.component_class(vertices) is TRIVIAL:
        m = one - adjacency_matrix(sub).T
        return ComponentK(tuple(vertices), FREE, {"1-A^T": m}, cokernel(m), kernel(m))
    a0, a1 = stabiliser_matrices(sub)
    m0, m1 = one - a0, one - a1
    return ComponentK(
        tuple(vertices), INFINITE_CYCLIC, {"1-A0": m0, "1-A1": m1},
        direct_sum(cokernel(m0), kernel(m1)),
        direct_sum(cokernel(m1), kernel(m0)))


def k_theory(p: QuotientPresentation) -> KTheoryReport:
    """K-groups of the boundary crossed product, per weak component and summed."""
    validate(p).raise_if_failed()
    return KTheoryReport(tuple(_component(p, c) for c in p.components()))


@dataclass(frozen=True)
class SixTermReport:
    """The matrices ``id - alpha_0`` and ``id - alpha_1`` and the corner groups.

    ``degree0_basis`` indexes every quotient vertex (each contributes a copy
    of ``Z`` to ``K_0``); ``degree1_basis`` only the infinite-cyclic vertices,
    since the trivial group has vanishing ``K_1``.
    """

    degree0_basis: tuple[str, ...]
    degree1_basis: tuple[str, ...]
    id_minus_alpha0: IntMatrix
    id_minus_alpha1: IntMatrix

    def corners(self) -> dict[str, AbelianGroup]:
        return {
            "coker(id-alpha0)": cokernel(self.id_minus_alpha0),
            "ker(id-alpha0)": kernel(self.id_minus_alpha0),
            "coker(id-alpha1)": cokernel(self.id_minus_alpha1),
            "ker(id-alpha1)": kernel(self.id_minus_alpha1),
        }

    def to_json(self) -> dict:
        return {
            "degree0_basis": list(self.degree0_basis),
            "degree1_basis": list(self.degree1_basis),
            "id-alpha0": self.id_minus_alpha0.to_json(),
            "id-alpha1": self.id_minus_alpha1.to_json(),
            "corners": {k: g.to_json() for k, g in self.corners().items()},
        }

    def to_text(self) -> str:
        lines = [f"degree 0 basis: {', '.join(self.degree0_basis) or '(empty)'}",
                 "id - alpha_0 =", str(self.id_minus_alpha0),
                 f"degree 1 basis: {', '.join(self.degree1_basis) or '(empty)'}",
                 "id - alpha_1 =", str(self.id_minus_alpha1)]
        lines += [f"{k} = {g}" for k, g in self.corners().items()]
        return "\n".join(lines)


def six_term_report(p: QuotientPresentation) -> SixTermReport:
    """Assemble ``id - alpha_i`` edge by edge from `theta_induced`.

    Components are concatenated in order, so the matrices are block diagonal.
    """
    validate(p).raise_if_failed()
    basis0 = [v for comp in p.components() for v in comp]
    basis1 = [v for v in basis0 if p.classes[v] is CYCLIC]
    pos0 = {v: i for i, v in enumerate(basis0)}
    pos1 = {v: i for i, v in enumerate(basis1)}
    alpha0 = [[0] * len(basis0) for _ in basis0]
    alpha1 = [[0] * len(basis1) for _ in basis1]
    for e in p.graph.edges:
        m0, m1 = theta_induced(p, e.id)
        alpha0[pos0[e.source]][pos0[e.range]] += m0
        if e.range in pos1:
            alpha1[pos1[e.source]][pos1[e.range]] += m1
    one0 = IntMatrix.identity(len(basis0))
    one1 = IntMatrix.identity(len(basis1))
    return SixTermReport(
        tuple(basis0), tuple(basis1),
        one0 - IntMatrix.from_rows(alpha0, cols=len(basis0)),
        one1 - IntMatrix.from_rows(alpha1, cols=len(basis1)))
