"""Hypermetric inequalities: construction, bounded screening and recognition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..combinat import edge_pairs
from ..exactnum import lcm_of_denominators, primitive
from .core import AffineInequality, TcfPoint


def hypermetric_inequality(b: Sequence[int]) -> AffineInequality:
    """sum_{i<j} (-b_i b_j) x_ij <= ½ sum b_i (b_i - 1)."""
    b = [int(v) for v in b]
    if not any(b):
        raise ValueError("b must not be zero")
    n = len(b)
    c = tuple(-b[i - 1] * b[j - 1] for i, j in edge_pairs(n))
    return AffineInequality(n, c, sum(v * (v - 1) for v in b) // 2)


def is_pure(b: Sequence[int]) -> bool:
    return all(v in (-1, 0, 1) for v in b)


@dataclass(frozen=True)
class AllSatisfied:
    max_abs_b: int
    checked: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Violation:
    b: tuple
    value: Fraction  # left-hand side at the point
    bound: Fraction  # right-hand side

    def __bool__(self):
        return False

    @property
    def inequality(self) -> AffineInequality:
        return hypermetric_inequality(self.b)


def _b_grid(n: int, bound: int, chunk: int = 200_000):
    """Yield int64 arrays whose rows run over {-bound..bound}^n."""
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    tail = 0
    while tail < n and (2 * bound + 1) ** (tail + 1) <= chunk:
        tail += 1
    tail = max(tail, 1)
    grid = np.stack(np.meshgrid(*([r] * tail), indexing="ij"), axis=-1).reshape(-1, tail)
    for head in itertools.product(range(-bound, bound + 1), repeat=n - tail):
        block = np.empty((len(grid), n), dtype=np.int64)
        block[:, : n - tail] = head
        block[:, n - tail :] = grid
        yield block


def hypermetric_valid_check(x: TcfPoint, max_abs_b: int) -> AllSatisfied | Violation:
    """Test every hypermetric inequality with ‖b‖∞ ≤ max_abs_b.

    The inequality of b reads bXbᵀ ≥ Σb for the unit-diagonal matrix X, and
    among ±b only the sign with Σb ≥ 0 can bind.  Smaller ‖b‖∞ is searched
    first; within a level the most violated b is reported.
    """
    if max_abs_b < 1:
        raise ValueError("max_abs_b must be at least 1")
    n = x.n
    den = lcm_of_denominators(x.chi)
    entries = [[int(v * den) for v in row] for row in x.matrix()]
    big = max((abs(v) for r in entries for v in r), default=1)
    dtype = np.int64 if big * n * n * max_abs_b**2 < 2**62 else object
    X = np.array(entries, dtype=dtype)
    checked = 0
    for level in range(1, max_abs_b + 1):
        best = None
        for B in _b_grid(n, level):
            B = B[np.abs(B).max(axis=1) == level]
            sums = B.sum(axis=1)
            B, sums = B[sums >= 0], sums[sums >= 0]
            if dtype is object:
                B = B.astype(object)
            checked += len(B)
            gap = ((B @ X) * B).sum(axis=1) - den * sums
            k = int(np.argmin(gap))
            if len(B) and gap[k] < 0 and (best is None or gap[k] < best[0]):
                best = (gap[k], tuple(int(v) for v in B[k]))
        if best is not None:
            b = best[1]
            ineq_c = [-b[i - 1] * b[j - 1] for i, j in edge_pairs(n)]
            value = sum((a * v for a, v in zip(ineq_c, x.chi)), Fraction(0))
            return Violation(b, value, Fraction(sum(v * (v - 1) for v in b), 2))
    return AllSatisfied(max_abs_b, checked)


# ---------------------------------------------------------------------------
# recognition


@dataclass(frozen=True)
class Hypermetric:
    """The inequality equals q times the hypermetric inequality of b."""

    b: tuple
    q: Fraction

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotHypermetric:
    reason: str

    def __bool__(self):
        return False


def _scale_of(ineq: AffineInequality, b: Sequence[int]) -> Fraction | None:
    """q > 0 with ineq = q · (hypermetric inequality of b), if any."""
    n = ineq.n
    raw = [-b[i - 1] * b[j - 1] for i, j in edge_pairs(n)]
    raw0 = Fraction(sum(v * (v - 1) for v in b), 2)
    q = None
    for a, r in zip(list(ineq.c) + [ineq.c0], raw + [raw0]):
        if r == 0:
            if a != 0:
                return None
            continue
        ratio = Fraction(a) / r
        if q is None:
            q = ratio
        elif q != ratio:
            return None
    if q is None or q <= 0:
        return None
    return q


def recognize_hypermetric(ineq: AffineInequality, pair_search: int = 64) -> Hypermetric | NotHypermetric:
    """Decide whether ineq is a positive multiple of a hypermetric inequality.

    With support U (vertices touched by nonzero coefficients) of size at
    least 3, the ratios β_i = c_ik / c_{i0 k} determine b up to a factor t,
    the products c_ij = -κ β_i β_j fix κ = q·t², and the constant term fixes
    t unless Σβ = 0, in which case the primitive multiple is returned.  A
    single edge leads to a quadratic in (b_i, b_j), solved by bounded search.
    """
    n = ineq.n
    U = sorted({v for e in ineq.support() for v in e})
    if not U:
        if ineq.c0 < 0:
            return NotHypermetric("0 <= negative constant")
        b = [0] * n
        b[0] = 1 if ineq.c0 == 0 else 2
        return Hypermetric(tuple(b), Fraction(1) if ineq.c0 == 0 else Fraction(ineq.c0))
    for i, j in itertools.combinations(U, 2):
        if ineq.coefficient(i, j) == 0:
            return NotHypermetric(
                f"support is not a complete subgraph: x{i},{j} has coefficient 0"
            )
    if len(U) == 2:
        i, j = U
        cands = [
            (bi, bj)
            for bi in range(-pair_search, pair_search + 1)
            for bj in range(-pair_search, pair_search + 1)
            if bi and bj
        ]
        cands.sort(key=lambda t: (max(abs(t[0]), abs(t[1])), -t[0], -t[1]))
        for bi, bj in cands:
            b = [0] * n
            b[i - 1], b[j - 1] = bi, bj
            q = _scale_of(ineq, b)
            if q is not None:
                return Hypermetric(tuple(b), q)
        return NotHypermetric(f"no b with |b_i| <= {pair_search} on a single edge")

    i0 = U[0]
    beta = {i0: Fraction(1)}
    for i in U[1:]:
        k = next(v for v in U if v not in (i0, i))
        beta[i] = Fraction(ineq.coefficient(i, k), ineq.coefficient(i0, k))
    kappa = None
    for i, j in itertools.combinations(U, 2):
        val = -Fraction(ineq.coefficient(i, j)) / (beta[i] * beta[j])
        if kappa is None:
            kappa = val
        elif val != kappa:
            return NotHypermetric("coefficients are not of rank-one form -q·b_i·b_j")
    if kappa <= 0:
        return NotHypermetric("coefficient signs force a negative scale")
    s1 = sum(beta.values())
    s2 = sum(v * v for v in beta.values())
    if s1 == 0:
        if Fraction(ineq.c0) != kappa * s2 / 2:
            return NotHypermetric("constant term does not match")
        prim = primitive([beta.get(i, 0) for i in range(1, n + 1)])
        b = list(prim)
        if next(v for v in b if v) < 0:
            b = [-v for v in b]
    else:
        denom = kappa * s2 / 2 - ineq.c0
        if denom == 0:
            return NotHypermetric("constant term does not match")
        t = kappa * s1 / 2 / denom
        vals = [t * beta.get(i, 0) for i in range(1, n + 1)]
        if any(v.denominator != 1 for v in vals):
            return NotHypermetric("the forced b is not integral")
        b = [int(v) for v in vals]
    q = _scale_of(ineq, b)
    if q is None:
        return NotHypermetric("constant term does not match")
    return Hypermetric(tuple(b), q)


def hypermetric_b_key(b: Sequence[int]) -> tuple:
    """Permutation-invariant key of b up to global sign: sorted values of
    whichever of ±b has the larger sum (ties: lexicographically larger)."""
    a = tuple(sorted(b, reverse=True))
    m = tuple(sorted((-v for v in b), reverse=True))
    if sum(a) != sum(m):
        return a if sum(a) > sum(m) else m
    return max(a, m)


