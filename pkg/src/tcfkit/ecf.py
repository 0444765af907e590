"""Set functions on subsets of {1..n}: complete alternation, the polytope of
extremal coefficient functions, spectral weights and binary models.

Subsets are bitmasks (bit i-1 <-> element i) and set functions are dense
tuples of length 2**n.

The quantity that drives everything here is, for nonempty L with K = L^c,

    g_L(f) = sum_{I ⊆ L} (-1)^{|I|+1} f(K ∪ I).

f is completely alternating iff every g_L(f) >= 0, and for an extremal
coefficient function θ the numbers g_K(θ) are exactly the spectral weights
λ_K, with θ(A) = sum_{K ∩ A ≠ ∅} λ_K.  Substituting J = K ∪ I shows
g_L = -μ(L^c) with μ the upward Möbius transform
μ(K) = sum_{J ⊇ K} (-1)^{|J \\ K|} f(J), so all 2^n - 1 values come out of a
single O(n 2^n) pass.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .combinat import mask_subset, subset_mask
from .exactnum import Q, primitive


class OverlappingSets(ValueError):
    pass


class NotCompletelyAlternating(ValueError):
    pass


class NotACapacity(ValueError):
    pass


def _mask(s) -> int:
    return s if isinstance(s, int) else subset_mask(s)


@dataclass(frozen=True)
class SetFunction:
    n: int
    values: tuple  # length 2**n, indexed by bitmask

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError("need one value per subset")

    def __call__(self, subset) -> Fraction:
        return self.values[_mask(subset)]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @staticmethod
    def from_callable(n: int, fn) -> "SetFunction":
        return SetFunction(n, tuple(Q(fn(mask_subset(m))) for m in range(1 << n)))

    @staticmethod
    def ecf(n: int, pair_and_larger: dict) -> "SetFunction":
        """ECF-role constructor: ∅ -> 0, singletons -> 1, the rest from a
        mapping subset (iterable or mask) -> value."""
        vals = [Fraction(0)] * (1 << n)
        for i in range(n):
            vals[1 << i] = Fraction(1)
        for k, v in pair_and_larger.items():
            vals[_mask(k)] = Q(v)
        return SetFunction(n, tuple(vals))

    def has_ecf_boundary(self) -> bool:
        return self.values[0] == 0 and all(self.values[1 << i] == 1 for i in range(self.n))

    def scaled(self, factor) -> "SetFunction":
        return SetFunction(self.n, tuple(v * factor for v in self.values))

    def free_coordinates(self) -> tuple:
        return tuple(self.values[m] for m in free_subsets(self.n))


def cardinality(n: int) -> SetFunction:
    return SetFunction(n, tuple(Fraction(bin(m).count("1")) for m in range(1 << n)))


def complete_dependence(n: int) -> SetFunction:
    return SetFunction(n, tuple(Fraction(int(m != 0)) for m in range(1 << n)))


def alternation_value(f: SetFunction, K, L) -> Fraction:
    """sum over I ⊆ L of (-1)^{|I|+1} f(K ∪ I)."""
    K, L = _mask(K), _mask(L)
    if K & L:
        raise OverlappingSets("K and L must be disjoint")
    if L == 0:
        raise ValueError("L must be nonempty")
    total = Fraction(0)
    sub = L
    while True:
        sign = 1 if bin(sub).count("1") % 2 else -1
        total += sign * f.values[K | sub]
        if sub == 0:
            break
        sub = (sub - 1) & L
    return total


def upward_moebius(values: Sequence, n: int) -> list:
    """μ(K) = sum_{J ⊇ K} (-1)^{|J \\ K|} values[J]."""
    a = list(values)
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if not m & bit:
                a[m] -= a[m | bit]
    return a


def downward_moebius(values: Sequence, n: int) -> list:
    """m(S) = sum_{R ⊆ S} (-1)^{|S \\ R|} values[R]."""
    a = list(values)
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                a[m] -= a[m ^ bit]
    return a


def alternation_values(f: SetFunction) -> list:
    """g_L(f) for every mask L (index 0 unused, set to 0)."""
    mu = upward_moebius(f.values, f.n)
    full = f.full
    out = [Fraction(0)] * (1 << f.n)
    for L in range(1, 1 << f.n):
        out[L] = -mu[full ^ L]
    return out


@dataclass(frozen=True)
class CAResult:
    ok: bool
    violating: tuple[int, ...] | None = None  # the set L (1-based elements)

    def __bool__(self):
        return self.ok


def is_completely_alternating(f: SetFunction) -> CAResult:
    g = alternation_values(f)
    for L in sorted(range(1, 1 << f.n), key=lambda m: (bin(m).count("1"), m)):
        if g[L] < 0:
            return CAResult(False, mask_subset(L))
    return CAResult(True)


def free_subsets(n: int) -> list[int]:
    """Masks of the subsets with at least two elements, ordered by size and
    then lexicographically; these are the coordinates of Θ_n."""
    out = []
    for k in range(2, n + 1):
        for c in itertools.combinations(range(n), k):
            out.append(sum(1 << i for i in c))
    return out


def free_coordinate_maps(n: int) -> list[tuple[int, ...]]:
    """Index maps of the relabelling action of S_n on the free coordinates."""
    free = free_subsets(n)
    pos = {m: k for k, m in enumerate(free)}
    out = []
    for perm in itertools.permutations(range(n)):
        g = []
        for m in free:
            img = 0
            for i in range(n):
                if m >> i & 1:
                    img |= 1 << perm[i]
            g.append(pos[img])
        out.append(tuple(g))
    return out


def theta_h_representation(n: int):
    """The inequalities g_L(θ) >= 0 in the free coordinates, written as
    a.x <= b with integer data of gcd 1.  Rows are ordered by L (size, then
    lexicographic).  There are 2^n - 1 of them for n >= 3; at n = 2 the rows
    for L = {1} and L = {2} coincide and only one copy is kept."""
    from .hull import HRep

    if n < 2:
        raise ValueError("n must be at least 2")
    coords = free_subsets(n)
    pos = {m: k for k, m in enumerate(coords)}
    full = (1 << n) - 1
    rows = []
    for L in sorted(range(1, 1 << n), key=lambda m: (bin(m).count("1"), m)):
        K = full ^ L
        a = [0] * len(coords)
        const = 0
        sub = L
        while True:
            J = K | sub
            sign = 1 if bin(sub).count("1") % 2 else -1
            size = bin(J).count("1")
            if size >= 2:
                a[pos[J]] -= sign  # move to the left of "<="
            elif size == 1:
                const += sign
            if sub == 0:
                break
            sub = (sub - 1) & L
        row = primitive(a + [const])
        entry = (tuple(row[:-1]), row[-1])
        if entry not in rows:
            rows.append(entry)
    return HRep(len(coords), tuple(rows))


def theta_from_free(n: int, free_values: Sequence) -> SetFunction:
    vals = [Fraction(0)] * (1 << n)
    for i in range(n):
        vals[1 << i] = Fraction(1)
    for m, v in zip(free_subsets(n), free_values):
        vals[m] = Q(v)
    return SetFunction(n, tuple(vals))


# ---------------------------------------------------------------------------
# spectral weights


@dataclass(frozen=True)
class TmSpectralWeights:
    n: int
    weights: tuple  # length 2**n, index 0 unused

    def __call__(self, subset) -> Fraction:
        return self.weights[_mask(subset)]

    def support(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return [(mask_subset(m), w) for m, w in enumerate(self.weights) if m and w]

    def theta(self) -> SetFunction:
        """θ(A) = sum of λ_K over K meeting A."""
        return theta_from_weights(self.n, self.weights)

    def margins(self) -> list:
        return [sum(w for m, w in enumerate(self.weights) if m >> i & 1) for i in range(self.n)]


def theta_from_weights(n: int, weights: Sequence) -> SetFunction:
    total = sum(weights[1:], Fraction(0))
    # θ(A) = total - sum over K disjoint from A = total - ζ(A^c), ζ = subset sums
    zeta = list(weights)
    zeta[0] = Fraction(0)
    for i in range(n):
        bit = 1 << i
        for m in range(1 << n):
            if m & bit:
                zeta[m] += zeta[m ^ bit]
    full = (1 << n) - 1
    return SetFunction(n, tuple(total - zeta[full ^ A] for A in range(1 << n)))


def tm_weights(theta: SetFunction) -> TmSpectralWeights:
    if not theta.has_ecf_boundary():
        raise ValueError("θ must satisfy θ(∅)=0 and θ({i})=1")
    g = alternation_values(theta)
    bad = [m for m in range(1, 1 << theta.n) if g[m] < 0]
    if bad:
        raise NotCompletelyAlternating(f"negative weight at {mask_subset(bad[0])}")
    return TmSpectralWeights(theta.n, tuple(g))


def tm_neg_log_cdf(lam: TmSpectralWeights, x: Sequence[float]) -> float:
    """-log P(X_1 <= x_1, ..., X_n <= x_n) for unit Fréchet margins."""
    if len(x) != lam.n:
        raise ValueError("dimension mismatch")
    if any(v <= 0 for v in x):
        raise ValueError("arguments must be positive")
    inv = [1.0 / float(v) for v in x]
    total = 0.0
    for m in range(1, 1 << lam.n):
        w = lam.weights[m]
        if w:
            total += float(w) * max(inv[i] for i in range(lam.n) if m >> i & 1)
    return total


# ---------------------------------------------------------------------------
# binary models


@dataclass(frozen=True)
class BinaryModel:
    """Finite probability space whose atoms are labelled by subsets S; event
    A_i is the union of the atoms with i ∈ S."""

    n: int
    atoms: tuple  # ((mask, mass), ...), masses > 0

    def __post_init__(self):
        if any(m < 0 for _, m in self.atoms):
            raise ValueError("negative mass")
        if sum((m for _, m in self.atoms), Fraction(0)) != 1:
            raise ValueError("masses must sum to 1")

    def mass(self, subset) -> Fraction:
        s = _mask(subset)
        return sum((m for a, m in self.atoms if a == s), Fraction(0))

    def hit_probability(self, subset) -> Fraction:
        """P(S ∩ A ≠ ∅), the capacity of A."""
        A = _mask(subset)
        return sum((m for a, m in self.atoms if a & A), Fraction(0))

    def event_probability(self, i: int) -> Fraction:
        return self.hit_probability(1 << (i - 1))

    def joint_probability(self, i: int, j: int) -> Fraction:
        both = (1 << (i - 1)) | (1 << (j - 1))
        return sum((m for a, m in self.atoms if a & both == both), Fraction(0))

    def has_equal_events(self) -> bool:
        p = {self.event_probability(i) for i in range(1, self.n + 1)}
        return len(p) == 1 and p.pop() > 0

    def tcf(self) -> tuple:
        """χ_ij = P(A_i ∩ A_j) / P(A_j) in edge order."""
        out = []
        for i, j in itertools.combinations(range(1, self.n + 1), 2):
            out.append(self.joint_probability(i, j) / self.event_probability(j))
        return tuple(out)

    def symmetric_difference_probability(self, i: int, j: int) -> Fraction:
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        return sum((m for a, m in self.atoms if bool(a & bi) != bool(a & bj)), Fraction(0))


def capacity_to_distribution(C: SetFunction) -> BinaryModel:
    """Masses m(S) = sum_{R ⊆ S} (-1)^{|S \\ R|} (1 - C(R^c))."""
    n = C.n
    if C.values[0] != 0:
        raise NotACapacity("C(∅) must be 0")
    full = C.full
    base = [1 - C.values[full ^ R] for R in range(1 << n)]
    m = downward_moebius(base, n)
    neg = [S for S in range(1 << n) if m[S] < 0]
    if neg:
        raise NotACapacity(f"negative mass at {mask_subset(neg[0])}")
    atoms = tuple((S, m[S]) for S in range(1 << n) if m[S] != 0)
    return BinaryModel(n, atoms)


def distribution_to_capacity(model: BinaryModel) -> SetFunction:
    return SetFunction(model.n, tuple(model.hit_probability(A) for A in range(1 << model.n)))


# ---------------------------------------------------------------------------
# vertices of Θ_n by basis enumeration


def incidence_columns(n: int) -> np.ndarray:
    """n x (2^n - 1) 0/1 matrix; column K-1 is the indicator of K."""
    cols = np.zeros((n, (1 << n) - 1), dtype=np.int8)
    for K in range(1, 1 << n):
        for i in range(n):
            if K >> i & 1:
                cols[i, K - 1] = 1
    return cols


def theta_vertices_by_bases(n: int, chunk: int = 400_000, budget=None) -> list[SetFunction]:
    """Vertices of Θ_n through their spectral weights.

    The weights λ identify Θ_n with {λ >= 0 : sum_{K ∋ i} λ_K = 1 for all i},
    whose vertices are the nonnegative basic solutions B^{-1} 1.  Every
    n-subset of columns is tried; determinants of these small 0/1 matrices
    are computed in floating point and rounded, which is exact because
    |det| is tiny, and each resulting vertex is re-verified in integers.
    """
    M = incidence_columns(n).astype(np.float64)
    ncols = M.shape[1]
    scale = math.lcm(*range(1, _max01det(n) + 1))
    found: set[bytes] = set()
    tails_len = n - 2 if n >= 2 else 0
    tails = np.array(list(itertools.combinations(range(ncols), tails_len)), dtype=np.int16)
    if tails_len == 0:
        tails = np.zeros((1, 0), dtype=np.int16)
    firsts = tails[:, 0] if tails_len else None
    for a in range(ncols):
        for b in range(a + 1, ncols):
            if budget is not None:
                budget.check()
            if tails_len:
                start = np.searchsorted(firsts, b + 1)
                t = tails[start:]
            else:
                t = tails
            if len(t) == 0:
                continue
            for lo in range(0, len(t), chunk):
                tt = t[lo:lo + chunk].astype(np.int64)
                idx = np.concatenate(
                    [np.full((len(tt), 1), a), np.full((len(tt), 1), b), tt], axis=1
                )
                _collect_bases(M, idx, scale, found)
    out = []
    for key in found:
        lam_int = np.frombuffer(key, dtype=np.int32)
        weights = [Fraction(0)] + [Fraction(int(v), scale) for v in lam_int]
        out.append(theta_from_weights(n, weights))
    out.sort(key=lambda t: t.values)
    # exact re-verification
    inc = incidence_columns(n).astype(np.int64)
    for th in out:
        lam = alternation_values(th)
        assert all(v >= 0 for v in lam[1:])
        ints = np.array([int(v * scale) for v in lam[1:]], dtype=np.int64)
        assert (inc @ ints == scale).all()
    return out


def _max01det(n: int) -> int:
    # largest determinant of an n x n 0/1 matrix, n <= 8
    return [1, 1, 1, 2, 3, 5, 9, 32, 56][n]


def _collect_bases(M: np.ndarray, idx: np.ndarray, scale: int, found: set) -> None:
    B = M[:, idx].transpose(1, 0, 2)  # (N, n, n), columns chosen by idx
    d = np.rint(np.linalg.det(B)).astype(np.int64)
    ok = d != 0
    if not ok.any():
        return
    B = B[ok]
    d = d[ok]
    idx = idx[ok]
    n = B.shape[1]
    lam = np.linalg.solve(B, np.ones((len(B), n, 1)))[:, :, 0]
    num = np.rint(lam * d[:, None]).astype(np.int64)  # Cramer numerators
    sign = np.sign(d)[:, None]
    feas = ((num * sign) >= 0).all(axis=1)
    if not feas.any():
        return
    num = num[feas] * scale // np.abs(d[feas])[:, None] * sign[feas]
    idx = idx[feas]
    dense = np.zeros((len(idx), M.shape[1]), dtype=np.int32)
    rows = np.repeat(np.arange(len(idx)), n)
    dense[rows, idx.ravel()] = num.ravel()
    for row in np.unique(dense, axis=0):
        found.add(row.tobytes())
