"""End-to-end computations of Ex(TCF_n) and the facets of TCF_n."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinat import canonical_rows, edge_pairs, orbit, set_partitions
from .cutcor import CutInequality, expand_generator_orbit, pull_back_to_tcf
from .ecf import free_subsets, theta_h_representation
from .exactnum import PointSet
from .hull import VRep, certify_facet, dd_vertices, filter_extreme, hull_facets, tight_points
from .runtime import Budget, BudgetExceeded
from .tcf.core import AffineInequality, TcfPoint, clique_partition_point
from .tcf.hypermetric import recognize_hypermetric


class IncompleteGenerators(ValueError):
    pass


def value_class(chi: Sequence) -> tuple:
    """Sorted value set together with 0 and, for 0/1 points, 1."""
    vals = set(chi) | {Fraction(0)}
    if vals <= {0, 1}:
        vals = {Fraction(0), Fraction(1)}
    return tuple(sorted(vals))


def class_label(cls: tuple) -> str:
    return "{" + ",".join(str(v) for v in cls) + "}"


# ---------------------------------------------------------------------------
# vertices


@dataclass
class VertexOrbit:
    rep: tuple  # canonical (lexicographically smallest) member
    size: int

    @property
    def value_class(self) -> tuple:
        return value_class(self.rep)


@dataclass
class VertexResult:
    n: int
    theta_vertices: int
    projected: int
    projected_orbits: int
    orbits: list[VertexOrbit] = field(default_factory=list)
    partial: bool = False

    @property
    def vertex_count(self) -> int:
        return sum(o.size for o in self.orbits)

    def vertices(self) -> list[tuple]:
        out = []
        for o in self.orbits:
            out.extend(sorted(orbit(o.rep, self.n)))
        return out

    def class_counts(self) -> dict[tuple, tuple[int, int]]:
        """value class -> (vertices, orbits)."""
        out: dict[tuple, list[int]] = {}
        for o in self.orbits:
            c = out.setdefault(o.value_class, [0, 0])
            c[0] += o.size
            c[1] += 1
        return {k: tuple(v) for k, v in sorted(out.items())}


def project_theta_vertices(n: int, theta_vertices: Sequence[Sequence]) -> list[tuple]:
    """χ = 2 − θ on pairs; the pair coordinates lead the free-coordinate order."""
    m = n * (n - 1) // 2
    free = free_subsets(n)
    assert all(bin(free[k]).count("1") == 2 for k in range(m))
    seen = set()
    for v in theta_vertices:
        seen.add(tuple(2 - v[k] for k in range(m)))
    return sorted(seen)


def _orbit_groups(points: Sequence[tuple], n: int) -> tuple[list[list[int]], list[tuple]]:
    """Orbit decomposition as index lists (canonical member first) and the
    canonical members, ordered by canonical form."""
    den = math.lcm(*(v.denominator for p in points for v in p))
    mat = np.array([[int(v * den) for v in p] for p in points], dtype=np.int64)
    canon, keys = canonical_rows(mat, n)
    if keys is None:
        keys = np.unique(canon, axis=0, return_inverse=True)[1].ravel()
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    groups: list[list[int]] = [[] for _ in range(len(uniq))]
    for idx, g in enumerate(inverse.ravel()):
        groups[g].append(idx)
    reps = []
    for g, members in enumerate(groups):
        rep = tuple(Fraction(int(v), den) for v in canon[first[g]])
        k = next(i for i in members if points[i] == rep)
        members.remove(k)
        members.insert(0, k)
        reps.append(rep)
    return groups, reps


def tcf_vertices(n: int, budget: Budget | None = None, theta=None) -> VertexResult:
    """Θ_n vertices → ψ_n → dedupe → orbits → orbit-shortcut extremality."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if theta is None:
        theta = dd_vertices(theta_h_representation(n), budget).points
    pts = project_theta_vertices(n, theta)
    groups, reps = _orbit_groups(pts, n)
    res = VertexResult(n, len(theta), len(pts), len(groups))
    try:
        ext = set(filter_extreme(pts, group_orbits=True, n=n, budget=budget, orbits=groups))
    except BudgetExceeded as exc:
        ext = set(exc.partial or ())
        res.partial = True
    for members, rep in zip(groups, reps):
        if rep in ext:
            res.orbits.append(VertexOrbit(rep, len(members)))
    if res.partial:
        raise BudgetExceeded("vertex filtering stopped early", partial=res)
    return res


# ---------------------------------------------------------------------------
# facets


@dataclass
class FacetOrbit:
    rep: AffineInequality
    size: int
    tight: int
    generator: int | None = None  # 1-based index into the generator list
    generator_name: str = ""

    @property
    def hypermetric(self):
        return recognize_hypermetric(self.rep)


@dataclass
class FacetResult:
    n: int
    orbits: list[FacetOrbit] = field(default_factory=list)
    route: str = "hull"
    cut_facets: int | None = None
    rows_per_generator: list[int] = field(default_factory=list)
    partial: bool = False

    @property
    def facet_count(self) -> int:
        return sum(o.size for o in self.orbits)

    def facets(self) -> list[AffineInequality]:
        out = []
        for o in self.orbits:
            out.extend(sorted(orbit(o.rep, self.n), key=lambda q: q.c))
        return out


def _canonical_inequalities(ineqs: Sequence[AffineInequality], n: int) -> list[tuple[AffineInequality, list[int]]]:
    """Group inequalities into S_n orbits; returns (canonical rep, member indices)."""
    if not ineqs:
        return []
    mat = np.array([q.c for q in ineqs], dtype=np.int64)
    canon, keys = canonical_rows(mat, n)
    if keys is None:
        keys = np.unique(canon, axis=0, return_inverse=True)[1].ravel()
    groups: dict[tuple, list[int]] = {}
    reps: dict[tuple, AffineInequality] = {}
    for idx, (k, q) in enumerate(zip(keys.tolist(), ineqs)):
        key = (k, q.c0)
        if key not in groups:
            groups[key] = []
            reps[key] = AffineInequality(n, tuple(int(v) for v in canon[idx]), q.c0)
        groups[key].append(idx)
    return [(reps[k], groups[k]) for k in sorted(groups, key=lambda k: (reps[k].c, reps[k].c0))]


def tcf_facets_hull(n: int, vertices: Sequence[Sequence], budget: Budget | None = None) -> FacetResult:
    """Facets by dualising the vertex set (practical for n ≤ 5)."""
    h = hull_facets(VRep(n * (n - 1) // 2, tuple(tuple(v) for v in vertices)), budget)
    if h.equations:
        raise ValueError("vertex set is not full-dimensional")
    ineqs = [AffineInequality(n, a, b) for a, b in h.rows]
    ps = PointSet(vertices)
    res = FacetResult(n, route="hull")
    for rep, members in _canonical_inequalities(ineqs, n):
        res.orbits.append(FacetOrbit(rep, len(members), len(tight_points(rep.c, rep.c0, ps))))
    return res


def tcf_facets_cut(
    n: int,
    generators: Sequence[CutInequality],
    vertices: Sequence[Sequence],
    budget: Budget | None = None,
) -> FacetResult:
    """Expand each cut generator, pull back to E_n, and keep the orbit
    representatives that certify as facets against ``vertices``.  A TCF
    facet orbit is attributed to the first generator producing it."""
    if any(g.n != n + 1 for g in generators):
        raise IncompleteGenerators(f"generators must live on K_{n + 1}")
    ps = PointSet(vertices)
    res = FacetResult(n, route="cut", cut_facets=0)
    done: set = set()
    try:
        for gi, gen in enumerate(generators, start=1):
            cut_orbit = expand_generator_orbit(gen, budget)
            res.cut_facets += len(cut_orbit)
            res.rows_per_generator.append(len(cut_orbit))
            pulled = {pull_back_to_tcf(q) for q in cut_orbit}
            pulled = sorted((q for q in pulled if not q.is_trivial()), key=lambda q: (q.c, q.c0))
            for rep, _ in _canonical_inequalities(pulled, n):
                key = (rep.c, rep.c0)
                if key in done:
                    continue
                done.add(key)
                if budget is not None:
                    budget.check()
                verdict = certify_facet(rep, ps)
                if verdict:
                    size = len(orbit(rep.c, n))
                    res.orbits.append(FacetOrbit(rep, size, verdict.tight, gi, gen.name))
    except BudgetExceeded as exc:
        res.partial = True
        raise BudgetExceeded(str(exc), partial=res) from exc
    return res


def cpp_points(n: int) -> list[tuple]:
    return [clique_partition_point(p).chi for p in set_partitions(n)]


def edge_labels(n: int) -> list[str]:
    return [f"{i}{j}" for i, j in edge_pairs(n)]


def as_points(vertices: Sequence[tuple], n: int) -> list[TcfPoint]:
    return [TcfPoint(n, v) for v in vertices]
