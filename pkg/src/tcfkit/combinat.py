"""Indexing of edges and subsets, set partitions, and the relabelling action
of the symmetric group on edge vectors.

Vertices are 1-based wherever they cross the API; positions inside edge
vectors are 0-based in lexicographic pair order (1,2),(1,3),...,(n-1,n).
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Sequence


class OutOfRange(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class EdgeIndexer:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")

    @property
    def size(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        return edge_pairs(self.n)

    def position(self, i: int, j: int) -> int:
        return edge_position(i, j, self.n)


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 2))


def edge_position(i: int, j: int, n: int | EdgeIndexer) -> int:
    """0-based position of edge {i, j} (1-based vertices, i < j)."""
    if isinstance(n, EdgeIndexer):
        n = n.n
    if not (1 <= i < j <= n):
        raise OutOfRange(f"edge ({i},{j}) not in K_{n}")
    i0 = i - 1
    return i0 * n - i0 * (i0 + 1) // 2 + (j - i - 1)


def num_vertices(num_edges: int) -> int:
    n = (1 + math.isqrt(1 + 8 * num_edges)) // 2
    if n * (n - 1) // 2 != num_edges:
        raise DimensionMismatch(f"{num_edges} is not a triangular number")
    return n


def edge_matrix(x: Sequence, n: int, diagonal=1) -> list[list]:
    """Symmetric n x n matrix from an edge vector."""
    m = [[diagonal if i == j else 0 for j in range(n)] for i in range(n)]
    for (i, j), v in zip(edge_pairs(n), x):
        m[i - 1][j - 1] = m[j - 1][i - 1] = v
    return m


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; ``images[i-1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError("not a permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(n: int, a: int, b: int) -> "Permutation":
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        return Permutation(tuple(im))


@lru_cache(maxsize=None)
def edge_permutation(images: tuple[int, ...]) -> tuple[int, ...]:
    """Index map g with act(σ, x)[e] = x[g[e]]."""
    n = len(images)
    out = []
    for i, j in edge_pairs(n):
        a, b = images[i - 1], images[j - 1]
        if a > b:
            a, b = b, a
        out.append(edge_position(a, b, n))
    return tuple(out)


def act(perm: Permutation | Sequence[int], x: Sequence) -> tuple:
    """Relabelled edge vector, (σx)_ij = x_{σ(i)σ(j)}.

    This is a right action on coordinates, so act(σ∘τ, x) = act(τ, act(σ, x)).
    """
    images = perm.images if isinstance(perm, Permutation) else tuple(perm)
    if len(x) != len(images) * (len(images) - 1) // 2:
        raise DimensionMismatch("permutation and vector sizes differ")
    g = edge_permutation(images)
    return tuple(x[k] for k in g)


@lru_cache(maxsize=None)
def transposition_maps(n: int) -> tuple[tuple[int, ...], ...]:
    """Edge index maps of all transpositions (a b) of {1..n}."""
    maps = []
    for a, b in itertools.combinations(range(1, n + 1), 2):
        im = list(range(1, n + 1))
        im[a - 1], im[b - 1] = b, a
        maps.append(edge_permutation(tuple(im)))
    return tuple(maps)


@lru_cache(maxsize=None)
def all_edge_permutations(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(edge_permutation(p) for p in itertools.permutations(range(1, n + 1)))


def _split(x):
    """Separate an edge vector from an optional trailing constant."""
    if hasattr(x, "c") and hasattr(x, "c0"):
        return tuple(x.c), x.c0, type(x)
    return tuple(x), None, None


def orbit(x, n: int | None = None) -> set:
    """Full S_n orbit of an edge vector (or of an inequality's coefficient
    vector, the constant being invariant), by BFS over transpositions."""
    vec, c0, cls = _split(x)
    if n is None:
        n = num_vertices(len(vec))
    gens = transposition_maps(n)
    seen = {vec}
    queue = deque([vec])
    while queue:
        v = queue.popleft()
        for g in gens:
            w = tuple(v[k] for k in g)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if cls is None:
        return seen
    return {cls(n=n, c=w, c0=c0) for w in seen}


def canonical_representative(x, n: int | None = None):
    """Lexicographically smallest element of the orbit."""
    vec, c0, cls = _split(x)
    best = min(orbit(vec, n))
    if cls is None:
        return best
    return cls(n=num_vertices(len(vec)) if n is None else n, c=best, c0=c0)


def orbit_partition(vectors: Iterable[tuple], n: int) -> dict[tuple, list[tuple]]:
    """Group a permutation-closed or arbitrary collection into orbits.

    Returns canonical form -> orbit elements found in ``vectors``.  Each
    orbit is expanded once by BFS; members not in the input are dropped.
    """
    pool = set(vectors)
    out: dict[tuple, list[tuple]] = {}
    done: set = set()
    for v in sorted(pool):
        if v in done:
            continue
        orb = orbit(v, n)
        done |= orb
        out[min(orb)] = sorted(orb & pool)
    return out


def canonical_rows(mat, n: int | None = None, maps: Sequence[Sequence[int]] | None = None):
    """Lexicographically smallest image of every row of an integer matrix
    under a group given by coordinate maps (default: S_n on edge vectors).

    When rows fit, each image is packed into one int64 key; otherwise rows
    are compared column by column.  Returns (canonical rows, keys); keys is
    None in the second case.
    """
    import numpy as np

    mat = np.asarray(mat, dtype=np.int64)
    if maps is None:
        maps = all_edge_permutations(n)
    maps = [np.asarray(g, dtype=np.intp) for g in maps]
    N, m = mat.shape
    if N == 0:
        return mat.copy(), np.zeros(0, dtype=np.int64)
    lo = int(mat.min())
    base = int(mat.max()) - lo + 1
    if base**m < 2**63:
        shifted = mat - lo
        pw = np.array([base ** (m - 1 - k) for k in range(m)], dtype=np.int64)
        best = None
        for g in maps:
            k = shifted[:, g] @ pw
            best = k if best is None else np.minimum(best, k)
        keys = best.copy()
        out = np.empty_like(mat)
        rem = best
        for k in range(m):
            out[:, k] = rem // pw[k]
            rem = rem % pw[k]
        return out + lo, keys
    best = mat[:, maps[0]].copy()
    rows = np.arange(N)
    for g in maps[1:]:
        img = mat[:, g]
        diff = img != best
        first = diff.argmax(axis=1)
        smaller = diff.any(axis=1) & (img[rows, first] < best[rows, first])
        best[smaller] = img[smaller]
    return best, None


def count_orbits(mat, n: int | None = None, maps=None) -> int:
    import numpy as np

    canon, keys = canonical_rows(mat, n, maps)
    if keys is not None:
        return len(np.unique(keys))
    return len(np.unique(canon, axis=0))


# ---------------------------------------------------------------------------
# subsets and set partitions


def subset_mask(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        m |= 1 << (i - 1)
    return m


def mask_subset(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` including 0 and ``mask``."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for b in self.blocks:
            if not b or seen & b:
                raise ValueError("blocks must be nonempty and disjoint")
            seen |= b
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must cover {1..n}")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @staticmethod
    def of(*blocks: Iterable[int], n: int | None = None) -> "SetPartition":
        bs = [frozenset(b) for b in blocks]
        if n is not None:
            covered = set().union(*bs) if bs else set()
            bs += [frozenset({i}) for i in range(1, n + 1) if i not in covered]
        return SetPartition(tuple(sorted(bs, key=min)))


def set_partitions(n: int) -> list[SetPartition]:
    """All partitions of {1..n} (restricted growth strings)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []

    def rec(i: int, labels: list[int], k: int) -> None:
        if i == n:
            blocks = [set() for _ in range(k)]
            for v, lab in enumerate(labels, start=1):
                blocks[lab].add(v)
            out.append(SetPartition(tuple(frozenset(b) for b in blocks)))
            return
        for lab in range(k + 1):
            labels.append(lab)
            rec(i + 1, labels, max(k, lab + 1))
            labels.pop()

    rec(0, [], 0)
    return out


def bell(n: int) -> int:
    b = [1]
    for m in range(n):
        b.append(sum(math.comb(m, k) * b[k] for k in range(m + 1)))
    return b[n]


def divides_factorial(size: int, n: int) -> bool:
    return math.factorial(n) % size == 0
