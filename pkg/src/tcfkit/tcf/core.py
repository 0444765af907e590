"""Points and affine inequalities over the edge space E_n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..combinat import DimensionMismatch, SetPartition, edge_pairs, edge_position, num_vertices
from ..ecf import SetFunction
from ..exactnum import Q


class EmptySubset(ValueError):
    pass


class InvalidParameters(ValueError):
    pass


class NotAMember(ValueError):
    pass


@dataclass(frozen=True)
class TcfPoint:
    """Symmetric unit-diagonal matrix stored as its upper-triangle edge vector."""

    n: int
    chi: tuple

    def __post_init__(self):
        if len(self.chi) != self.n * (self.n - 1) // 2:
            raise DimensionMismatch(f"expected {self.n * (self.n - 1) // 2} entries")
        object.__setattr__(self, "chi", tuple(Q(v) for v in self.chi))

    @staticmethod
    def of(values: Sequence) -> "TcfPoint":
        return TcfPoint(num_vertices(len(values)), tuple(values))

    @staticmethod
    def from_matrix(rows: Sequence[Sequence]) -> "TcfPoint":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix is not square")
        for i in range(n):
            if Q(rows[i][i]) != 1:
                raise ValueError(f"diagonal entry {i + 1} is not 1")
            for j in range(i + 1, n):
                if Q(rows[i][j]) != Q(rows[j][i]):
                    raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        return TcfPoint(n, tuple(rows[i - 1][j - 1] for i, j in edge_pairs(n)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(1)
        if i > j:
            i, j = j, i
        return self.chi[edge_position(i, j, self.n)]

    def matrix(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def values(self) -> set:
        return set(self.chi)


@dataclass(frozen=True)
class AffineInequality:
    """sum c_ij x_ij <= c0 with integer data of gcd 1."""

    n: int
    c: tuple
    c0: int

    def __post_init__(self):
        if len(self.c) != self.n * (self.n - 1) // 2:
            raise DimensionMismatch("coefficient vector has the wrong length")
        vals = [Q(v) for v in self.c] + [Q(self.c0)]
        den = math.lcm(*(v.denominator for v in vals))
        ints = [int(v * den) for v in vals]
        g = math.gcd(*ints)
        if g > 1:
            ints = [v // g for v in ints]
        object.__setattr__(self, "c", tuple(ints[:-1]))
        object.__setattr__(self, "c0", ints[-1])

    def value(self, x) -> Fraction:
        chi = x.chi if isinstance(x, TcfPoint) else x
        return sum((a * Q(v) for a, v in zip(self.c, chi) if a), Fraction(0))

    def slack(self, x) -> Fraction:
        return self.c0 - self.value(x)

    def holds(self, x) -> bool:
        return self.value(x) <= self.c0

    def coefficient(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.c[edge_position(i, j, self.n)]

    def is_trivial(self) -> bool:
        return not any(self.c)

    def support(self) -> list[tuple[int, int]]:
        return [e for e, a in zip(edge_pairs(self.n), self.c) if a]

    def __str__(self) -> str:
        terms = []
        for (i, j), a in zip(edge_pairs(self.n), self.c):
            if a:
                sign = "-" if a < 0 else "+"
                mag = "" if abs(a) == 1 else f"{abs(a)}"
                terms.append(f"{sign} {mag}x{i},{j}")
        lhs = " ".join(terms).lstrip("+ ") or "0"
        return f"{lhs} <= {self.c0}"


def project_psi(theta: SetFunction) -> TcfPoint:
    """χ_ij = 2 − θ({i, j})."""
    if not theta.has_ecf_boundary():
        raise ValueError("θ must satisfy θ(∅)=0 and θ({i})=1")
    n = theta.n
    return TcfPoint(n, tuple(2 - theta.values[(1 << (i - 1)) | (1 << (j - 1))] for i, j in edge_pairs(n)))


def clique_partition_point(p: SetPartition) -> TcfPoint:
    n = p.n
    block = {}
    for k, b in enumerate(p.blocks):
        for v in b:
            block[v] = k
    return TcfPoint(n, tuple(int(block[i] == block[j]) for i, j in edge_pairs(n)))


def lift_point(x: TcfPoint) -> TcfPoint:
    """Append an (n+1)-st variable independent of the others."""
    n = x.n
    return TcfPoint(n + 1, tuple(x[i, j] if j <= n else 0 for i, j in edge_pairs(n + 1)))


def restrict(x: TcfPoint, subset: Iterable[int]) -> TcfPoint:
    """Principal submatrix on ``subset``, relabelled 1..k in increasing order."""
    keep = sorted(set(subset))
    if not keep:
        raise EmptySubset("subset must be nonempty")
    if keep[0] < 1 or keep[-1] > x.n:
        raise ValueError("subset out of range")
    k = len(keep)
    if k == 1:
        return TcfPoint(1, ())
    return TcfPoint(k, tuple(x[keep[a - 1], keep[b - 1]] for a, b in edge_pairs(k)))


def lift_inequality(ineq: AffineInequality) -> AffineInequality:
    n = ineq.n
    return AffineInequality(
        n + 1, tuple(ineq.coefficient(i, j) if j <= n else 0 for i, j in edge_pairs(n + 1)), ineq.c0
    )


def relabel_inequality(ineq: AffineInequality, images: Sequence[int], n: int | None = None) -> AffineInequality:
    """Inequality on K_n with vertex i renamed to images[i-1] (images may embed into a larger n)."""
    n = n or ineq.n
    c = [0] * (n * (n - 1) // 2)
    for (i, j), a in zip(edge_pairs(ineq.n), ineq.c):
        if a:
            u, v = sorted((images[i - 1], images[j - 1]))
            c[edge_position(u, v, n)] = a
    return AffineInequality(n, tuple(c), ineq.c0)
