"""Exact vertex and facet enumeration, extreme-point filtering and facet
certification.

Vertex enumeration is the double description method on the homogenised cone
{(t, x) : b t - a.x >= 0, t >= 0}.  Rays are primitive integer vectors; the
set of rows tight at a ray is a Python int used as a bitset.  Two rays are
adjacent when no third ray is tight on every row they share, which is
checked with one bitset of rays per row.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactnum import (
    Inside,
    PointSet,
    Q,
    in_convex_hull,
    lcm_of_denominators,
    nullspace,
    primitive,
    rref,
)
from .runtime import Budget


class UnboundedInput(ValueError):
    pass


class OrbitHypothesisViolated(ValueError):
    pass


class InequalityViolated(ValueError):
    def __init__(self, vertex):
        super().__init__(f"inequality violated at {vertex}")
        self.vertex = vertex


@dataclass(frozen=True)
class HRep:
    """{x : a.x <= b for (a, b) in rows, a.x = b for (a, b) in equations}."""

    dim: int
    rows: tuple
    equations: tuple = ()

    def __post_init__(self):
        for a, _ in itertools.chain(self.rows, self.equations):
            if len(a) != self.dim:
                raise ValueError("row length does not match dimension")

    def contains(self, x: Sequence) -> bool:
        for a, b in self.rows:
            if sum(ai * xi for ai, xi in zip(a, x)) > b:
                return False
        for a, b in self.equations:
            if sum(ai * xi for ai, xi in zip(a, x)) != b:
                return False
        return True


@dataclass(frozen=True)
class VRep:
    dim: int
    points: tuple

    def __len__(self):
        return len(self.points)


# ---------------------------------------------------------------------------
# double description


def _int_row(a, b) -> tuple[int, ...]:
    return primitive([Q(b)] + [-Q(v) for v in a])  # homogenised: b t - a.x >= 0


def _eliminate_equations(h: HRep):
    """Parametrise {a.x = b} as x = x0 + N y; return (x0, N, rows in y)."""
    if not h.equations:
        return None, None, [(tuple(Q(v) for v in a), Q(b)) for a, b in h.rows]
    A = [list(a) for a, _ in h.equations]
    red, piv = rref([list(a) + [b] for a, b in h.equations])
    if piv and piv[-1] == h.dim:
        return None, None, None  # inconsistent
    x0 = [Fraction(0)] * h.dim
    for row, pc in zip(red, piv):
        x0[pc] = row[-1]
    N = nullspace(A)
    rows = []
    for a, b in h.rows:
        a = [Q(v) for v in a]
        na = tuple(sum(ai * col[i] for i, ai in enumerate(a)) for col in N)
        rows.append((na, Q(b) - sum(ai * xi for ai, xi in zip(a, x0))))
    return x0, N, rows


def dd_vertices(h: HRep, budget: Budget | None = None) -> VRep:
    """Vertices of the bounded polyhedron ``h``."""
    x0, N, rows = _eliminate_equations(h)
    if rows is None:
        return VRep(h.dim, ())
    d = len(N) if N is not None else h.dim
    if d == 0:
        pt = tuple(x0)
        return VRep(h.dim, (pt,) if all(b >= 0 for _, b in rows) else ())
    verts = _dd_core([_int_row(a, b) for a, b in rows] + [(1,) + (0,) * d], d + 1, budget)
    out = []
    for v in verts:
        if N is None:
            out.append(v)
        else:
            out.append(tuple(x0[i] + sum(y * col[i] for y, col in zip(v, N)) for i in range(h.dim)))
    out.sort()
    return VRep(h.dim, tuple(out))


def _initial_basis(rows: list[tuple[int, ...]], D: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[int]] = []  # echelon rows with pivot columns
    pivcols: list[int] = []
    for idx, r in enumerate(rows):
        v = list(r)
        for brow, pc in zip(basis, pivcols):
            if v[pc]:
                f, g = v[pc], brow[pc]
                v = [g * x - f * y for x, y in zip(v, brow)]
        pc = next((k for k, x in enumerate(v) if x), None)
        if pc is None:
            continue
        gg = math.gcd(*v)
        v = [x // gg for x in v]
        basis.append(v)
        pivcols.append(pc)
        chosen.append(idx)
        if len(chosen) == D:
            break
    return chosen


def _dd_core(rows: list[tuple[int, ...]], D: int, budget: Budget | None) -> list[tuple]:
    init = _initial_basis(rows, D)
    if len(init) < D:
        raise UnboundedInput("the inequalities do not bound the polyhedron")
    R0 = [list(rows[i]) for i in init]
    # rays of the simplicial cone: columns of R0^{-1}
    red, piv = rref([r + [int(i == k) for k in range(D)] for i, r in enumerate(R0)])
    inv_cols = [[red[i][D + k] for i in range(D)] for k in range(D)]
    rays: list[tuple[int, ...]] = [primitive(c) for c in inv_cols]
    zeros: list[int] = []
    for k in range(D):
        z = 0
        for kk, ri in enumerate(init):
            if kk != k:
                z |= 1 << ri
        zeros.append(z)
    rest = [i for i in range(len(rows)) if i not in set(init)]
    inserted = list(init)
    for ridx in rest:
        if budget is not None:
            budget.check()
        row = rows[ridx]
        vals = [sum(a * b for a, b in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << ridx
        new_rays: list[tuple[int, ...]] = []
        new_zeros: list[int] = []
        if pos and neg:
            # per-row bitsets over current rays
            rowrays: dict[int, int] = {}
            for j in inserted:
                jb = 1 << j
                acc = 0
                for k, z in enumerate(zeros):
                    if z & jb:
                        acc |= 1 << k
                rowrays[j] = acc
            need = D - 2
            for p in pos:
                zp = zeros[p]
                rp = rays[p]
                vp = vals[p]
                for q in neg:
                    zpq = zp & zeros[q]
                    if zpq.bit_count() < need:
                        continue
                    target = (1 << p) | (1 << q)
                    common = -1
                    z = zpq
                    adjacent = False
                    while z:
                        low = z & -z
                        common &= rowrays[low.bit_length() - 1]
                        if common == target:
                            adjacent = True
                            break
                        z ^= low
                    if not adjacent:
                        continue
                    vq = vals[q]
                    rq = rays[q]
                    nr = [vp * b - vq * a for a, b in zip(rp, rq)]
                    g = math.gcd(*nr)
                    if g > 1:
                        nr = [x // g for x in nr]
                    new_rays.append(tuple(nr))
                    new_zeros.append(zpq | bit)
        rays = [rays[k] for k in pos] + [rays[k] for k in zer] + new_rays
        zeros = [zeros[k] for k in pos] + [zeros[k] | bit for k in zer] + new_zeros
        inserted.append(ridx)
    out = []
    for r in rays:
        t = r[0]
        if t == 0:
            raise UnboundedInput("recession direction found")
        out.append(tuple(Fraction(v, t) for v in r[1:]))
    return out


# ---------------------------------------------------------------------------
# facets from points


def _dedupe(points) -> list[tuple]:
    seen = set()
    out = []
    for p in points:
        p = tuple(Q(v) for v in p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def affine_hull(points: Sequence[Sequence]) -> tuple[list[tuple], list[int]]:
    """Equations (a, b) of the affine hull and a set of coordinates onto which
    the projection is injective on it."""
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    dim = len(p0)
    if diffs:
        red, piv = rref(diffs)
    else:
        red, piv = [], []
    eqs = []
    for a in nullspace(red, dim):
        a = primitive(a)
        eqs.append((a, sum(x * y for x, y in zip(a, p0))))
    return eqs, piv


def hull_facets(v: VRep | Sequence[Sequence], budget: Budget | None = None) -> HRep:
    """Facets of conv(points) by polarity through the centroid.

    Facets are primitive integer rows.  If the points are not full
    dimensional, the affine hull is returned as ``equations`` and the facet
    rows only involve a set of coordinates that parametrises it."""
    pts = _dedupe(v.points if isinstance(v, VRep) else v)
    if not pts:
        raise ValueError("no points")
    dim = len(pts[0])
    eqs, keep = affine_hull(pts)
    r = len(keep)
    if r == 0:
        return HRep(dim, (), tuple(eqs))
    proj = [tuple(p[i] for i in keep) for p in pts]
    c = [sum(col, Fraction(0)) / len(proj) for col in zip(*proj)]
    polar_rows = tuple((tuple(x - ci for x, ci in zip(p, c)), Fraction(1)) for p in proj)
    pv = dd_vertices(HRep(r, polar_rows), budget)
    rows = []
    for a in pv.points:
        b = 1 + sum(ai * ci for ai, ci in zip(a, c))
        full = [Fraction(0)] * dim
        for ai, i in zip(a, keep):
            full[i] = ai
        prim = primitive(full + [b])
        rows.append((prim[:-1], prim[-1]))
    rows.sort()
    return HRep(dim, tuple(rows), tuple(eqs))


# ---------------------------------------------------------------------------
# extreme points


def filter_extreme(
    points: VRep | Sequence[Sequence],
    known_extreme: Iterable | None = None,
    group_orbits: bool = False,
    n: int | None = None,
    budget: Budget | None = None,
    orbits: Sequence[Sequence[int]] | None = None,
) -> list[tuple]:
    """Extreme points of conv(points).

    Each candidate x is tested with an exact hull LP against the other points.
    With ``group_orbits`` the points are edge vectors over K_n, the input must
    be a union of S_n orbits, and one representative per orbit is tested
    against everything outside its orbit; its verdict holds for the whole
    orbit.  ``orbits`` may supply the orbit decomposition as index lists
    (each list's first entry is the representative); their sizes are checked
    against full orbits.  Points in ``known_extreme`` are trusted and not
    retested.
    """
    pts = _dedupe(points.points if isinstance(points, VRep) else points)
    known = set(_dedupe(known_extreme or []))
    ps = PointSet(pts)
    if not group_orbits:
        out = []
        for i, p in enumerate(pts):
            if budget is not None:
                budget.check(partial=out)
            if p in known or not isinstance(in_convex_hull(p, ps, exclude=[i]), Inside):
                out.append(p)
        return out

    from .combinat import num_vertices, orbit

    if n is None:
        n = num_vertices(ps.dim)
    if orbits is None:
        pool = set(pts)
        orbits = []
        seen: set = set()
        for p in pts:
            if p in seen:
                continue
            orb = orbit(p, n)
            if not orb <= pool:
                raise OrbitHypothesisViolated("the point set is not closed under permutations")
            seen |= orb
            orbits.append([ps.index[x] for x in sorted(orb)])
    else:
        covered = sum(len(o) for o in orbits)
        if covered != len(pts) or len({i for o in orbits for i in o}) != covered:
            raise OrbitHypothesisViolated("orbits do not partition the point set")
        for o in orbits:
            if len(orbit(pts[o[0]], n)) != len(o):
                raise OrbitHypothesisViolated("the point set is not closed under permutations")
    out = []
    for orb in orbits:
        if budget is not None:
            budget.check(partial=out)
        members = [pts[i] for i in orb]
        if any(x in known for x in members) or len(orb) == len(ps):
            out.extend(members)
            continue
        if not isinstance(in_convex_hull(members[0], ps, exclude=orb), Inside):
            out.extend(members)
    return out


def is_extreme(x: Sequence, others: PointSet | Sequence[Sequence]) -> bool:
    """x ∉ conv(others)."""
    return not isinstance(in_convex_hull(x, others), Inside)


# ---------------------------------------------------------------------------
# facet certification


@dataclass(frozen=True)
class FacetVerdict:
    facet: bool
    rank: int
    tight: int

    def __bool__(self):
        return self.facet


def incremental_rank(rows: Iterable[Sequence[int]], target: int | None = None) -> int:
    """Exact rank of integer rows, stopping early once ``target`` is reached."""
    basis: list[list[int]] = []
    pivcols: list[int] = []
    for r in rows:
        v = [int(x) for x in r]
        for brow, pc in zip(basis, pivcols):
            f = v[pc]
            if f:
                g = brow[pc]
                v = [g * x - f * y for x, y in zip(v, brow)]
        pc = next((k for k, x in enumerate(v) if x), None)
        if pc is None:
            continue
        gg = math.gcd(*v)
        basis.append([x // gg for x in v])
        pivcols.append(pc)
        if target is not None and len(basis) >= target:
            break
    return len(basis)


def tight_points(a: Sequence, b, vertices: PointSet) -> np.ndarray:
    """Indices of vertices with a.v = b; raises if some vertex has a.v > b."""
    ai = primitive(list(a) + [b])
    vals = vertices.values(ai[:-1])
    rhs = ai[-1] * vertices.den
    over = np.flatnonzero(vals > rhs)
    if len(over):
        raise InequalityViolated(vertices.points[int(over[0])])
    return np.flatnonzero(vals == rhs)


def certify_facet(ineq, vertices: VRep | PointSet | Sequence[Sequence]) -> FacetVerdict:
    """Facet iff the tight vertices, with a leading 1, have rank = dimension."""
    a, b = _as_row(ineq)
    ps = vertices if isinstance(vertices, PointSet) else PointSet(
        vertices.points if isinstance(vertices, VRep) else vertices
    )
    tight = tight_points(a, b, ps)
    dim = ps.dim
    den = ps.den
    rows = ([den] + [int(v) for v in ps.mat[i]] for i in tight)
    rk = incremental_rank(rows, dim)
    return FacetVerdict(rk == dim, rk, len(tight))


def _as_row(ineq):
    if hasattr(ineq, "c") and hasattr(ineq, "c0"):
        return tuple(ineq.c), ineq.c0
    a, b = ineq
    return tuple(a), b
