"""Exact rational linear algebra and linear programming.

Everything here works over :class:`fractions.Fraction` (or plain ``int``) and
never rounds.  Matrices are plain sequences of rows.

Rank and determinant use Bareiss fraction-free elimination.  The simplex
solver works on an integer tableau (entries are scaled by the current basis
determinant, as in integer pivoting codes) and uses Bland's rule, so it
terminates on degenerate problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

LE, EQ, GE = "<=", "=", ">="
_SENSES = {LE, EQ, GE, "≤", "≥"}


class Unbounded(Exception):
    """The objective is unbounded in the requested direction."""


class EmptyPointList(ValueError):
    pass


def Q(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or a ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact input")
    return Fraction(x)


def lcm_of_denominators(values: Iterable) -> int:
    out = 1
    for v in values:
        if isinstance(v, Fraction):
            out = math.lcm(out, v.denominator)
    return out


def primitive(values: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (direction preserved)."""
    L = lcm_of_denominators(values)
    ints = [int(v * L) for v in values]
    g = 0
    for a in ints:
        g = math.gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    return tuple(ints)


def _integer_rows(m: Sequence[Sequence]) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row.  Returns (rows, factor) where
    det(original) = det(rows) * factor."""
    rows = []
    factor = Fraction(1)
    for r in m:
        L = lcm_of_denominators(r)
        rows.append([int(Q(v) * L) for v in r])
        factor /= L
    return rows, factor


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[int, int, int]:
    """In-place fraction-free elimination with row pivoting.

    Returns (rank, last pivot, sign of the row permutation).  For a square
    nonsingular matrix the last pivot is the determinant up to that sign."""
    nrows = len(rows)
    r = 0
    prev = 1
    sign = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        pr = rows[r]
        piv = pr[c]
        for i in range(r + 1, nrows):
            ri = rows[i]
            f = ri[c]
            if f == 0:
                if piv != prev:
                    rows[i] = [(a * piv) // prev for a in ri]
                continue
            rows[i] = [(a * piv - f * b) // prev for a, b in zip(ri, pr)]
        prev = piv
        r += 1
    return r, prev, sign


def rank(m: Sequence[Sequence]) -> int:
    """Exact rank over the rationals."""
    if not m:
        return 0
    rows, _ = _integer_rows(m)
    ncols = len(rows[0])
    if ncols > len(rows):
        # eliminate along the short side
        rows = [list(col) for col in zip(*rows)]
        ncols = len(rows[0])
    return _bareiss(rows, ncols)[0]


def det(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    rows, factor = _integer_rows(m)
    rk, last, sign = _bareiss(rows, n)
    if rk < n:
        return Fraction(0)
    return sign * last * factor


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    a = [[Q(v) for v in row] for row in m]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : m x = 0}."""
    if not m:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ncols = len(m[0])
    red, piv = rref(m)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of a x = b, or None if inconsistent."""
    aug = [list(r) + [bv] for r, bv in zip(a, b)]
    ncols = len(a[0]) if a else 0
    red, piv = rref(aug)
    if piv and piv[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, piv):
        x[pc] = row[-1]
    return x


# ---------------------------------------------------------------------------
# linear programming


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    sense: str
    rhs: Fraction

    def __post_init__(self):
        if self.sense not in _SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")


@dataclass(frozen=True)
class LinearProgram:
    """min/max c.x subject to rows and bounds.

    ``bounds`` is a tuple of ``(lo, hi)`` pairs, ``None`` meaning infinite.
    When ``bounds`` is omitted every variable is free."""

    num_vars: int
    constraints: tuple = ()
    objective: tuple | None = None
    maximize: bool = False
    bounds: tuple | None = None

    def __post_init__(self):
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise ValueError("constraint length does not match variable count")
        if self.objective is not None and len(self.objective) != self.num_vars:
            raise ValueError("objective length does not match variable count")
        if self.bounds is not None and len(self.bounds) != self.num_vars:
            raise ValueError("bounds length does not match variable count")

    @staticmethod
    def build(num_vars, rows, objective=None, maximize=False, bounds=None):
        cons = tuple(
            Constraint(tuple(Q(v) for v in a), _norm_sense(s), Q(b)) for a, s, b in rows
        )
        obj = None if objective is None else tuple(Q(v) for v in objective)
        bnds = None
        if bounds is not None:
            bnds = tuple(
                (None if lo is None else Q(lo), None if hi is None else Q(hi))
                for lo, hi in bounds
            )
        return LinearProgram(num_vars, cons, obj, maximize, bnds)


def _norm_sense(s: str) -> str:
    return {"≤": LE, "≥": GE}.get(s, s)


@dataclass(frozen=True)
class Feasible:
    witness: tuple
    optimum: Fraction | None = None


@dataclass(frozen=True)
class Infeasible:
    """Farkas certificate.

    Multiply constraint k by ``farkas[k]`` (after writing a ``>=`` row as
    ``-a.x <= -b``), upper bounds by ``upper[j]`` and lower bounds by
    ``lower[j]``.  The sum has zero left-hand side and a negative right-hand
    side.  ``farkas[k] >= 0`` on inequality rows; equality rows are free."""

    farkas: tuple
    lower: tuple = ()
    upper: tuple = ()


def check_farkas(lp: LinearProgram, cert: Infeasible) -> bool:
    n = lp.num_vars
    lhs = [Fraction(0)] * n
    rhs = Fraction(0)
    for y, con in zip(cert.farkas, lp.constraints):
        sgn = -1 if _norm_sense(con.sense) == GE else 1
        if _norm_sense(con.sense) != EQ and y < 0:
            return False
        for j, a in enumerate(con.coeffs):
            lhs[j] += sgn * y * a
        rhs += sgn * y * con.rhs
    bounds = lp.bounds or ((None, None),) * n
    lower = cert.lower or (0,) * n
    upper = cert.upper or (0,) * n
    for j, ((lo, hi), mu_lo, mu_hi) in enumerate(zip(bounds, lower, upper)):
        if mu_lo < 0 or mu_hi < 0:
            return False
        if mu_lo:
            if lo is None:
                return False
            lhs[j] -= mu_lo
            rhs -= mu_lo * lo
        if mu_hi:
            if hi is None:
                return False
            lhs[j] += mu_hi
            rhs += mu_hi * hi
    return all(v == 0 for v in lhs) and rhs < 0


def check_feasible(lp: LinearProgram, x: Sequence) -> bool:
    for con in lp.constraints:
        v = sum(a * xi for a, xi in zip(con.coeffs, x))
        s = _norm_sense(con.sense)
        if (s == LE and v > con.rhs) or (s == GE and v < con.rhs) or (s == EQ and v != con.rhs):
            return False
    if lp.bounds:
        for (lo, hi), xi in zip(lp.bounds, x):
            if (lo is not None and xi < lo) or (hi is not None and xi > hi):
                return False
    return True


@dataclass
class _StdResult:
    status: str  # "optimal" | "infeasible"
    z: list = field(default_factory=list)
    value: Fraction | None = None
    farkas: list = field(default_factory=list)  # y with A^T y <= 0, b^T y > 0


def simplex_standard(A: Sequence[Sequence], b: Sequence, c: Sequence | None = None) -> _StdResult:
    """Solve min c.z s.t. A z = b, z >= 0 exactly.

    Returns an optimal basic solution, or a Farkas vector ``y`` with
    ``A^T y <= 0`` and ``b.y > 0`` when the system is empty.  Raises
    :class:`Unbounded`.  Two phases, Bland's rule, integer tableau.
    """
    m = len(A)
    N = len(A[0]) if m else 0
    if c is None:
        c = [0] * N
    # clear denominators row-wise and make every rhs nonnegative
    rows = []
    rowscale = []
    for a_row, bv in zip(A, b):
        vals = list(a_row) + [bv]
        L = lcm_of_denominators(vals)
        ints = [int(Q(v) * L) for v in vals]
        if ints[-1] < 0:
            ints = [-v for v in ints]
            L = -L
        rows.append(ints)
        rowscale.append(L)
    W = N + m  # columns: structural, artificial, then rhs at index W
    T = []
    for i, r in enumerate(rows):
        art = [0] * m
        art[i] = 1
        T.append(r[:-1] + art + [r[-1]])
    basis = [N + i for i in range(m)]
    obj = [0] * (W + 1)
    for r in T:
        for j in range(N):
            obj[j] -= r[j]
        obj[W] -= r[W]
    d = 1

    def pivot(r: int, s: int) -> None:
        nonlocal d, obj
        prow = T[r]
        piv = prow[s]
        for i in range(m):
            if i == r:
                continue
            ri = T[i]
            f = ri[s]
            if f == 0:
                if piv != d:
                    T[i] = [(a * piv) // d for a in ri]
            else:
                T[i] = [(a * piv - f * q) // d for a, q in zip(ri, prow)]
        f = obj[s]
        if f == 0:
            if piv != d:
                obj = [(a * piv) // d for a in obj]
        else:
            obj = [(a * piv - f * q) // d for a, q in zip(obj, prow)]
        d = piv
        if d < 0:
            d = -d
            for i in range(m):
                T[i] = [-a for a in T[i]]
            obj = [-a for a in obj]
        basis[r] = s

    def run(allowed: int) -> None:
        while True:
            s = next((j for j in range(allowed) if obj[j] < 0), None)
            if s is None:
                return
            best = None
            for i in range(m):
                a = T[i][s]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    # compare T[i][W]/a with T[best][W]/T[best][s]
                    lhs = T[i][W] * T[best][s]
                    rhs = T[best][W] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                        best = i
            if best is None:
                raise Unbounded()
            pivot(best, s)

    run(N)
    if obj[W] != 0:  # phase-1 optimum is -obj[W]/d > 0
        y = []
        for i in range(m):
            yi = 1 - Fraction(obj[N + i], d)
            y.append(yi * rowscale[i])
        return _StdResult("infeasible", farkas=y)

    # drive zero-level artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= N:
            s = next((j for j in range(N) if T[i][j] != 0), None)
            if s is not None:
                pivot(i, s)

    L = lcm_of_denominators(c)
    ci = [int(Q(v) * L) for v in c]
    obj = [d * ci[j] if j < N else 0 for j in range(W)] + [0]
    for i in range(m):
        cb = ci[basis[i]] if basis[i] < N else 0
        if cb:
            ri = T[i]
            obj = [o - cb * t for o, t in zip(obj, ri)]
    run(N)
    z = [Fraction(0)] * N
    for i in range(m):
        if basis[i] < N:
            z[basis[i]] = Fraction(T[i][W], d)
    value = Fraction(-obj[W], d * L)
    return _StdResult("optimal", z=z, value=value)


def lp_solve(lp: LinearProgram) -> Feasible | Infeasible:
    """Solve a general LP exactly (see :class:`LinearProgram`)."""
    n = lp.num_vars
    bounds = lp.bounds or ((None, None),) * n
    # variable substitution x = shift + T z
    cols: list[tuple[int, int]] = []  # (original var, sign)
    shift = [Fraction(0)] * n
    kind = []
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None:
            shift[j] = lo
            cols.append((j, 1))
            kind.append("lo")
        elif hi is not None:
            shift[j] = hi
            cols.append((j, -1))
            kind.append("hi")
        else:
            cols.append((j, 1))
            cols.append((j, -1))
            kind.append("free")
    ncol_x = len(cols)
    rows = []  # (coeff over z cols, sense, rhs, tag)
    for k, con in enumerate(lp.constraints):
        a = con.coeffs
        coeff = [sg * a[j] for j, sg in cols]
        rhs = con.rhs - sum(a[j] * shift[j] for j in range(n) if a[j])
        rows.append((coeff, _norm_sense(con.sense), rhs, ("con", k)))
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None and hi is not None:
            coeff = [Fraction(0)] * ncol_x
            coeff[next(i for i, (jj, _) in enumerate(cols) if jj == j)] = Fraction(1)
            rows.append((coeff, LE, hi - lo, ("ub", j)))
    nslack = sum(1 for r in rows if r[1] != EQ)
    A = []
    b = []
    slack_i = 0
    for coeff, sense, rhs, _ in rows:
        sl = [0] * nslack
        if sense == LE:
            sl[slack_i] = 1
            slack_i += 1
        elif sense == GE:
            sl[slack_i] = -1
            slack_i += 1
        A.append(list(coeff) + sl)
        b.append(rhs)
    c = [0] * (ncol_x + nslack)
    if lp.objective is not None:
        sgn = -1 if lp.maximize else 1
        for i, (j, sg) in enumerate(cols):
            c[i] = sgn * sg * lp.objective[j]
    if not A:
        if lp.objective is not None and any(lp.objective):
            raise Unbounded()
        x = tuple(shift)
        return Feasible(x, Fraction(0) if lp.objective is not None else None)
    res = simplex_standard(A, b, c)
    if res.status == "optimal":
        x = list(shift)
        for i, (j, sg) in enumerate(cols):
            x[j] += sg * res.z[i]
        opt = None
        if lp.objective is not None:
            opt = sum(a * v for a, v in zip(lp.objective, x))
        return Feasible(tuple(x), opt)

    # translate the standard-form Farkas vector back (see module notes)
    y = res.farkas
    w = {}
    wub = {}
    for yi, (_, sense, _, tag) in zip(y, rows):
        if tag[0] == "con":
            w[tag[1]] = yi
        else:
            wub[tag[1]] = yi
    farkas = []
    g = [Fraction(0)] * n
    for k, con in enumerate(lp.constraints):
        wk = w[k]
        s = _norm_sense(con.sense)
        sigma = -1 if s == GE else 1
        farkas.append(-wk * sigma)
        for j, a in enumerate(con.coeffs):
            if a:
                g[j] += wk * a
    lower = [Fraction(0)] * n
    upper = [Fraction(0)] * n
    for j in range(n):
        if kind[j] == "lo":
            wp = wub.get(j, Fraction(0))
            upper[j] = -wp
            lower[j] = -(g[j] + wp)
        elif kind[j] == "hi":
            upper[j] = g[j]
    cert = Infeasible(tuple(farkas), tuple(lower), tuple(upper))
    assert check_farkas(lp, cert), "internal error: Farkas certificate failed to verify"
    return cert


# ---------------------------------------------------------------------------
# convex hull membership


@dataclass(frozen=True)
class Inside:
    coefficients: tuple  # one per input point


@dataclass(frozen=True)
class Outside:
    h: tuple
    t: Fraction


class PointSet:
    """A fixed list of rational points prepared for repeated hull queries.

    Points are kept both as Fractions and as an integer numpy matrix on a
    common denominator; the latter is only used to screen candidate columns,
    and every screening decision is exact integer arithmetic."""

    def __init__(self, points: Sequence[Sequence]):
        if len(points) == 0:
            raise EmptyPointList("no points given")
        self.points = [tuple(Q(v) for v in p) for p in points]
        self.dim = len(self.points[0])
        if any(len(p) != self.dim for p in self.points):
            raise ValueError("points of different dimensions")
        self.den = lcm_of_denominators(v for p in self.points for v in p)
        ints = [[int(v * self.den) for v in p] for p in self.points]
        self.maxabs = max((abs(v) for r in ints for v in r), default=0)
        if self.maxabs < 2**31:
            self.mat = np.array(ints, dtype=np.int64).reshape(len(ints), self.dim)
        else:
            self.mat = np.array(ints, dtype=object).reshape(len(ints), self.dim)
        self.index = {p: i for i, p in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def values(self, h: Sequence[int]) -> np.ndarray:
        """Exact h . (den * y) for every point y."""
        hmax = max((abs(v) for v in h), default=0)
        if self.mat.dtype != object and hmax * self.maxabs * max(self.dim, 1) < 2**62:
            return self.mat @ np.array(h, dtype=np.int64)
        return self.mat.astype(object) @ np.array([int(v) for v in h], dtype=object)


def _hull_lp(p, cols):
    d = len(p)
    A = [[pt[k] for pt in cols] for k in range(d)]
    A.append([1] * len(cols))
    b = list(p) + [1]
    return simplex_standard(A, b)


def in_convex_hull(p: Sequence, points, *, exclude: Iterable[int] = (), batch: int = 0) -> Inside | Outside:
    """Decide p ∈ conv(points) exactly.

    ``points`` may be a list or a :class:`PointSet`; indices in ``exclude``
    are ignored.  Large sets are handled by column generation: solve on a
    subset, and if the subset's separating hyperplane is violated by other
    points, add the worst offenders and repeat.  The final answer is always
    certified against every point.
    """
    ps = points if isinstance(points, PointSet) else PointSet(points)
    p = tuple(Q(v) for v in p)
    if len(p) != ps.dim:
        raise ValueError("dimension mismatch")
    excluded = set(exclude)
    live = np.ones(len(ps), dtype=bool)
    if excluded:
        live[list(excluded)] = False
    if not live.any():
        raise EmptyPointList("all points excluded")
    hit = ps.index.get(p)
    if hit is not None and hit not in excluded:
        coeffs = [Fraction(0)] * len(ps)
        coeffs[hit] = Fraction(1)
        return Inside(tuple(coeffs))

    live_idx = np.flatnonzero(live)
    batch = batch or max(2 * (ps.dim + 1), 24)
    if len(live_idx) <= 4 * batch:
        active = list(live_idx)
    else:
        pf = np.array([float(v) for v in p]) * ps.den
        dist = np.abs(ps.mat[live_idx].astype(float) - pf).sum(axis=1)
        active = list(live_idx[np.argsort(dist, kind="stable")[:batch]])
    while True:
        res = _hull_lp(p, [ps.points[i] for i in active])
        if res.status == "optimal":
            coeffs = [Fraction(0)] * len(ps)
            for i, lam in zip(active, res.z):
                coeffs[i] = lam
            return Inside(tuple(coeffs))
        y = res.farkas
        h = y[:-1]
        t = -y[-1]
        hv = primitive(list(h) + [t])
        hi, ti = hv[:-1], hv[-1]
        vals = ps.values(hi)
        over = np.flatnonzero(live & (vals > ti * ps.den))
        if len(over) == 0:
            return Outside(tuple(Fraction(v) for v in hi), Fraction(ti))
        excess = vals[over] - ti * ps.den
        order = np.argsort(-excess.astype(float), kind="stable")
        active.extend(int(i) for i in over[order[:batch]])
