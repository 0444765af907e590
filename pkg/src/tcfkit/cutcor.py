"""Correlation and cut polytopes, switchings, generator orbits and the
pullback of cut inequalities to TCF_n.

Cut inequalities live on K_{n+1}; the extra vertex n+1 carries the
marginals p_i under the covariance mapping.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .combinat import edge_pairs, edge_permutation, edge_position, num_vertices, transposition_maps
from .exactnum import Q
from .runtime import Budget
from .tcf.core import AffineInequality, TcfPoint

# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class CorrelationVector:
    n: int
    p: tuple  # p_1..p_n
    pe: tuple  # p_ij in edge order

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(Q(v) for v in self.p))
        object.__setattr__(self, "pe", tuple(Q(v) for v in self.pe))
        if len(self.p) != self.n or len(self.pe) != self.n * (self.n - 1) // 2:
            raise ValueError("wrong number of coordinates")

    def flat(self) -> tuple:
        return self.p + self.pe


@dataclass(frozen=True)
class CutVector:
    n: int  # number of nodes of the complete graph
    x: tuple


def correlation_vector(R: Iterable[int], n: int) -> CorrelationVector:
    R = set(R)
    return CorrelationVector(
        n, tuple(int(i in R) for i in range(1, n + 1)), tuple(int(i in R and j in R) for i, j in edge_pairs(n))
    )


def cut_vector(S: Iterable[int], n: int) -> CutVector:
    S = set(S)
    return CutVector(n, tuple(int((i in S) != (j in S)) for i, j in edge_pairs(n)))


def correlation_vertices(n: int) -> list[CorrelationVector]:
    return [correlation_vector([i + 1 for i in range(n) if m >> i & 1], n) for m in range(1 << n)]


def cut_vertices(n: int) -> list[tuple]:
    """The 2^(n-1) distinct cut vectors of K_n (S ranging over sets avoiding n)."""
    return [cut_vector([i + 1 for i in range(n - 1) if m >> i & 1], n).x for m in range(1 << (n - 1))]


def zeta(p: CorrelationVector) -> tuple:
    """Covariance mapping: x_{i,n+1} = p_i, x_ij = p_i + p_j − 2 p_ij."""
    n = p.n
    out = []
    for i, j in edge_pairs(n + 1):
        if j == n + 1:
            out.append(p.p[i - 1])
        else:
            out.append(p.p[i - 1] + p.p[j - 1] - 2 * p.pe[edge_position(i, j, n)])
    return tuple(out)


def xi(x: Sequence) -> CorrelationVector:
    """Inverse of zeta."""
    n = num_vertices(len(x)) - 1
    x = [Q(v) for v in x]
    p = [x[edge_position(i, n + 1, n + 1)] for i in range(1, n + 1)]
    pe = [(p[i - 1] + p[j - 1] - x[edge_position(i, j, n + 1)]) / 2 for i, j in edge_pairs(n)]
    return CorrelationVector(n, tuple(p), tuple(pe))


def iota(x: TcfPoint) -> CorrelationVector:
    """p_i = 1/n, p_ij = χ_ij / n."""
    n = x.n
    return CorrelationVector(n, (Fraction(1, n),) * n, tuple(v / n for v in x.chi))


# ---------------------------------------------------------------------------
# inequalities


@dataclass(frozen=True)
class CutInequality(AffineInequality):
    """sum c_ij x_ij <= c0 over the edges of K_n (n = number of nodes)."""

    name: str = field(default="", compare=False)


def switch(ineq: CutInequality, S: Iterable[int]) -> CutInequality:
    """c'_ij = (1 − 2δ(S)_ij) c_ij,  c0' = c0 − Σ δ(S)_ij c_ij."""
    d = cut_vector(S, ineq.n).x
    c = tuple(-a if s else a for a, s in zip(ineq.c, d))
    c0 = ineq.c0 - sum(a for a, s in zip(ineq.c, d) if s)
    return CutInequality(ineq.n, c, c0, ineq.name)


def _vertex_switch_maps(n: int) -> list[tuple[int, ...]]:
    """Positions of the edges incident to each vertex."""
    return [tuple(edge_position(min(v, w), max(v, w), n) for w in range(1, n + 1) if w != v) for v in range(1, n + 1)]


def expand_generator_orbit(gen: CutInequality, budget: Budget | None = None) -> set[CutInequality]:
    """Closure under node permutations and switchings.

    BFS over transpositions and single-node switchings, which generate the
    whole group.  Both moves preserve the gcd of (c, c0), so raw tuples
    serve as exact keys; inequalities that differ only by a positive
    factor cannot arise.
    """
    n = gen.n
    m = len(gen.c)
    perms = transposition_maps(n)
    stars = _vertex_switch_maps(n)
    start = tuple(gen.c) + (gen.c0,)
    seen = {start}
    queue = deque([start])
    steps = 0
    while queue:
        v = queue.popleft()
        steps += 1
        if budget is not None and steps % 4096 == 0:
            budget.check(partial=len(seen))
        nbrs = [tuple(v[k] for k in g) + (v[m],) for g in perms]
        for star in stars:
            w = list(v)
            s = 0
            for k in star:
                s += w[k]
                w[k] = -w[k]
            w[m] -= s
            nbrs.append(tuple(w))
        for w in nbrs:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return {CutInequality(n, w[:m], w[m], gen.name) for w in seen}


def pull_back_to_tcf(ineq: AffineInequality) -> AffineInequality:
    """Substitute x = ζ(ι(χ)) and clear the factor 1/n:
    Σ (−2c_ij) χ_ij ≤ n·c0 − 2 Σ_{i<j≤n} c_ij − Σ_i c_{i,n+1}."""
    n = ineq.n - 1
    c = []
    rhs = n * ineq.c0
    for (i, j), a in zip(edge_pairs(n + 1), ineq.c):
        if j == n + 1:
            rhs -= a
        else:
            c.append(-2 * a)
            rhs -= 2 * a
    return AffineInequality(n, tuple(c), rhs)


@dataclass(frozen=True)
class CorInequality:
    """Σ b_i p_i + Σ a_ij p_ij <= c0."""

    n: int
    b: tuple
    a: tuple
    c0: int

    def value(self, p: CorrelationVector) -> Fraction:
        return sum((u * v for u, v in zip(self.b, p.p)), Fraction(0)) + sum(
            (u * v for u, v in zip(self.a, p.pe)), Fraction(0)
        )

    def holds(self, p: CorrelationVector) -> bool:
        return self.value(p) <= self.c0


def pull_back_to_cor(ineq: AffineInequality) -> CorInequality:
    """b_i = Σ_{s≠i} c_is (s up to n+1), a_ij = −2 c_ij."""
    n = ineq.n - 1
    b = [0] * n
    a = []
    for (i, j), c in zip(edge_pairs(n + 1), ineq.c):
        if j == n + 1:
            b[i - 1] += c
        else:
            b[i - 1] += c
            b[j - 1] += c
            a.append(-2 * c)
    return CorInequality(n, tuple(b), tuple(a), ineq.c0)


def cor_coordinate_maps(n: int) -> list[tuple[int, ...]]:
    """Index maps of S_n acting on the coordinates (p_1..p_n, p_12..p_{n-1,n})."""
    out = []
    for images in itertools.permutations(range(1, n + 1)):
        out.append(tuple(v - 1 for v in images) + tuple(n + k for k in edge_permutation(images)))
    return out


def cut_vertex_switching_orbits(n: int) -> int:
    """Orbits of the cut vectors of K_n under switching (always 1)."""
    verts = set(cut_vertices(n))
    seen: set = set()
    count = 0
    for v in sorted(verts):
        if v in seen:
            continue
        count += 1
        for S in subsets(n):
            d = cut_vector(S, n).x
            seen.add(tuple(a ^ b for a, b in zip(v, d)))
    return count


# ---------------------------------------------------------------------------
# unit covariance maps

DIRECTIONS = ("f", "f_inv", "g", "g_inv", "gf", "gf_inv")


def unit_cov_map(x: Sequence, direction: str) -> tuple:
    """Affine maps on E_n:
    f(x) = (4/n)x − 4/n + 1,  g(x) = ½(1 − x),  (g∘f)(x) = (2/n)(1 − x),
    and their inverses."""
    n = num_vertices(len(x))
    x = [Q(v) for v in x]
    k = Fraction(4, n)
    maps = {
        "f": lambda v: k * v - k + 1,
        "f_inv": lambda v: (v - 1) / k + 1,
        "g": lambda v: (1 - v) / 2,
        "g_inv": lambda v: 1 - 2 * v,
        "gf": lambda v: Fraction(2, n) * (1 - v),
        "gf_inv": lambda v: 1 - Fraction(n, 2) * v,
    }
    if direction not in maps:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    return tuple(maps[direction](v) for v in x)


# ---------------------------------------------------------------------------
# generators of the facets of CUT_7 up to permutation and switching

_GENERATOR_ROWS = (
    ("Q_7(1,1,-1,0,0,0,0)", (1, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)),
    ("Q_7(1,1,1,-1,-1,0,0)", (1, 1, -1, -1, 0, 0, 1, -1, -1, 0, 0, -1, -1, 0, 0, 1, 0, 0, 0, 0, 0)),
    ("Q_7(2,1,1,-1,-1,-1,0)", (2, 2, -2, -2, -2, 0, 1, -1, -1, -1, 0, -1, -1, -1, 0, 1, 1, 0, 1, 0, 0)),
    ("Q_7(1,1,1,-1,-1,-1,-1)", (1, 1, 1, -1, -1, -1, 1, 1, -1, -1, -1, 1, -1, -1, -1, -1, -1, -1, 1, 1, 1)),
    ("Q_7(2,2,1,-1,-1,-1,-1)", (4, 2, -2, -2, -2, -2, 2, -2, -2, -2, -2, -1, -1, -1, -1, 1, 1, 1, 1, 1, 1)),
    ("Q_7(3,1,1,-1,-1,-1,-1)", (3, 3, -3, -3, -3, -3, 1, -1, -1, -1, -1, -1, -1, -1, -1, 1, 1, 1, 1, 1, 1)),
    ("CW1_7(1,1,1,1,1,-1,-1)", (0, 1, 1, 0, -1, -1, 0, 1, 1, -1, -1, 0, 1, -1, -1, 0, -1, -1, -1, -1, 1)),
    ("CW1_7(2,2,1,1,-1,-1,-1)", (3, 2, 1, -2, -2, -2, 1, 2, -2, -2, -2, 0, -1, -1, -1, -1, -1, -1, 1, 1, 1)),
    ("CW1_7(3,2,2,-1,-1,-1,-1)", (5, 5, -3, -3, -3, -3, 3, -2, -2, -2, -2, -2, -2, -2, -2, 1, 1, 1, 1, 1, 1)),
    ("Par_7", (-1, -1, 0, -1, -1, 0, 1, 0, 1, 0, -1, 1, 0, 0, -1, -1, -1, -1, 1, 0, 1)),
    ("Gr_7", (1, 1, 1, -2, -1, 0, 1, 1, -2, 0, -1, 1, -2, -1, 0, -2, 0, -1, 1, 1, -1)),
)

GENERATORS: tuple[CutInequality, ...] = tuple(CutInequality(7, c, 0, name) for name, c in _GENERATOR_ROWS)


def cut_facets_from_generators(
    generators: Sequence[CutInequality], budget: Budget | None = None
) -> list[set[CutInequality]]:
    return [expand_generator_orbit(g, budget) for g in generators]


def max_cut_value(ineq: AffineInequality) -> int:
    """max over cut vectors of the left-hand side (for validity checks)."""
    return max(sum(a for a, v in zip(ineq.c, x) if v) for x in cut_vertices(ineq.n))


def cut_inequality_from_b(b: Sequence[int]) -> CutInequality:
    """Hypermetric cut inequality Σ b_i b_j x_ij <= 0 with Σ b = 1."""
    n = len(b)
    return CutInequality(n, tuple(b[i - 1] * b[j - 1] for i, j in edge_pairs(n)), 0)


def triangle_cut(n: int = 3) -> CutInequality:
    c = [0] * (n * (n - 1) // 2)
    c[edge_position(1, 2, n)] = 1
    c[edge_position(1, 3, n)] = -1
    c[edge_position(2, 3, n)] = -1
    return CutInequality(n, tuple(c), 0)


def subsets(n: int):
    for r in range(n + 1):
        yield from itertools.combinations(range(1, n + 1), r)


__all__ = [
    "CorInequality",
    "CorrelationVector",
    "CutInequality",
    "CutVector",
    "DIRECTIONS",
    "GENERATORS",
    "correlation_vector",
    "correlation_vertices",
    "cor_coordinate_maps",
    "cut_facets_from_generators",
    "cut_vertex_switching_orbits",
    "cut_inequality_from_b",
    "cut_vector",
    "cut_vertices",
    "expand_generator_orbit",
    "iota",
    "max_cut_value",
    "pull_back_to_cor",
    "pull_back_to_tcf",
    "subsets",
    "switch",
    "triangle_cut",
    "unit_cov_map",
    "xi",
    "zeta",
]
