"""Exact integer matrices, Smith normal form, kernels and cokernels.

Everything here uses Python integers, so no entry can overflow.  Matrices act
on column vectors: an ``r x c`` matrix is a map ``Z^c -> Z^r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("matrix entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(tuple(values[i] if i == j else 0 for j in range(n))
                               for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                               for r in self.entries))

    def _zip(self, other, op):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(op(a, b) for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.entries))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def det(self) -> int:
        """Determinant by Bareiss fraction-free elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, doc) -> "IntMatrix":
        return cls.from_rows([[int(x) for x in r] for r in doc])

    def __str__(self):
        if not self.rows or not self.cols:
            return f"[] ({self.rows}x{self.cols})"
        width = max(len(str(x)) for r in self.entries for x in r)
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]"
                         for r in self.entries)


def rank_fraction_free(m: IntMatrix) -> int:
    """Rank by integer-preserving Gaussian elimination (no Smith form involved)."""
    a = m.tolist()
    rank, col = 0, 0
    rows, cols = m.rows, m.cols
    while rank < rows and col < cols:
        pivot = next((i for i in range(rank, rows) if a[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, rows):
            f = a[i][col]
            if f:
                a[i] = [p * x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.rows, self.S.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with explicit row and column transforms.

    Pivots on the entry of smallest absolute value; if the pivot fails to
    divide the rest of the block, the offending row is added to the pivot row
    and reduction resumes.
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row[dst] += k * row[src]
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the smallest one into the pivot slot
                i, j = min(((i, t) for i in range(t, rows) if a[i][t]),
                           key=lambda ij: abs(a[ij[0]][ij[1]]))
                k, l = min(((t, j) for j in range(t, cols) if a[t][j]),
                           key=lambda ij: abs(a[ij[0]][ij[1]]))
                if abs(a[i][j]) <= abs(a[k][l]):
                    swap_rows(t, i)
                else:
                    swap_cols(t, l)
                continue
            p = a[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SmithDecomposition(IntMatrix.from_rows(u, rows), IntMatrix.from_rows(a, cols),
                              IntMatrix.from_rows(v, cols))


def _factorize(n: int) -> dict[int, int]:
    factors = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
        if d > 1_000_000:
            # large cofactor: hand the remainder to sympy
            from sympy import factorint

            for p, e in factorint(n).items():
                factors[p] = factors.get(p, 0) + e
            return factors
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _invariant_factors(values: Iterable[int]) -> tuple[int, ...]:
    """Regroup cyclic orders into a divisibility chain via prime powers."""
    by_prime: dict[int, list[int]] = {}
    for n in values:
        n = abs(n)
        if n == 0:
            raise ValueError("torsion orders must be nonzero")
        for p, e in _factorize(n).items():
            by_prime.setdefault(p, []).append(e)
    length = max((len(es) for es in by_prime.values()), default=0)
    chain = [1] * length
    for p, es in by_prime.items():
        es.sort(reverse=True)
        for k, e in enumerate(es):
            chain[length - 1 - k] *= p ** e
    return tuple(chain)


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k`` with ``d_i >= 2`` and ``d_i | d_{i+1}``."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        if any(d < 2 for d in self.torsion) or any(
                b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError(f"torsion {self.torsion} is not a canonical invariant-factor chain")

    @classmethod
    def of(cls, rank: int = 0, orders: Iterable[int] = ()) -> "AbelianGroup":
        """Canonical form of ``Z^rank ⊕ (⊕ Z/n for n in orders)``; orders of 1 vanish."""
        return cls(rank, _invariant_factors(orders))

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": [str(d) for d in self.torsion]}

    @classmethod
    def from_json(cls, doc) -> "AbelianGroup":
        return cls(int(doc["rank"]), tuple(int(d) for d in doc["torsion"]))

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    return AbelianGroup.of(sum(g.rank for g in groups),
                           [d for g in groups for d in g.torsion])


def cokernel(m: IntMatrix) -> AbelianGroup:
    """``Z^rows / image(m)``."""
    diag = smith_normal_form(m).diagonal
    nonzero = [d for d in diag if d]
    return AbelianGroup.of(m.rows - len(nonzero), nonzero)


def kernel(m: IntMatrix) -> AbelianGroup:
    """``ker(m) ⊆ Z^cols``; always free."""
    return AbelianGroup(m.cols - smith_normal_form(m).rank)


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = math.gcd(g, x)
    return g
