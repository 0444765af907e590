"""Membership in TCF_n with certificates, realization by binary models, and
exact optimization of linear functionals over TCF_n.

A point χ lies in TCF_n iff χ = ψ_n(θ) for an extremal coefficient function
θ.  Writing θ through its spectral weights λ_K ≥ 0 (θ(A) = Σ_{K∩A≠∅} λ_K)
turns every complete-alternation inequality into λ_K ≥ 0, and the data of
χ into the equations

    Σ_{K ∋ i} λ_K = 1            (θ({i}) = 1)
    Σ_{K ⊇ {i,j}} λ_K = χ_ij     (θ({i,j}) = 2 − χ_ij).

A Farkas vector (y_i, y_ij) for this system is exactly a valid inequality
Σ y_ij x_ij ≤ −Σ y_i that χ violates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

from ..combinat import edge_pairs, set_partitions
from ..ecf import BinaryModel, SetFunction, TmSpectralWeights, capacity_to_distribution, theta_from_weights, tm_weights
from ..exactnum import Q, simplex_standard
from ..runtime import pmap
from .core import AffineInequality, NotAMember, TcfPoint, clique_partition_point, project_psi

MEMBER = "Member"
NON_MEMBER = "NonMember"


@dataclass(frozen=True)
class MembershipCertificate:
    verdict: str
    point: TcfPoint
    witness: SetFunction | None = None
    separator: AffineInequality | None = None

    def __post_init__(self):
        if (self.verdict == MEMBER) != (self.witness is not None) or (self.witness is None) == (
            self.separator is None
        ):
            raise ValueError("exactly one of witness/separator must match the verdict")

    def __bool__(self):
        return self.verdict == MEMBER

    @property
    def value(self) -> Fraction | None:
        """Left-hand side of the separator at the point."""
        return None if self.separator is None else self.separator.value(self.point)

    @property
    def violation(self) -> Fraction | None:
        return None if self.separator is None else self.value - self.separator.c0


def _system(n: int):
    """Rows over the 2^n − 1 spectral weights (column K-1 for mask K)."""
    cols = range(1, 1 << n)
    rows = [[1 if K >> (i - 1) & 1 else 0 for K in cols] for i in range(1, n + 1)]
    for i, j in edge_pairs(n):
        both = (1 << (i - 1)) | (1 << (j - 1))
        rows.append([1 if K & both == both else 0 for K in cols])
    return rows


def _weights_from(z: Sequence) -> tuple:
    return (Fraction(0),) + tuple(z)


def membership(x: TcfPoint, facets: Iterable[AffineInequality] | None = None) -> MembershipCertificate:
    """Decide x ∈ TCF_n exactly.

    Members come with a witness θ satisfying project_psi(θ) = x.  For
    non-members the separator is read off the Farkas vector.  If ``facets``
    (a known facet list of TCF_n) is given it is scanned first, and a
    violated facet, the one crossed first by the segment from an interior
    point to x, is reported without solving the LP.
    """
    n = x.n
    if n == 1:
        return MembershipCertificate(MEMBER, x, witness=SetFunction(1, (Fraction(0), Fraction(1))))
    if facets is not None:
        facets = list(facets)
        hit = exit_facet(x, facets)
        if hit is not None:
            return MembershipCertificate(NON_MEMBER, x, separator=hit)
    A = _system(n)
    b = [1] * n + list(x.chi)
    res = simplex_standard(A, b)
    if res.status == "optimal":
        theta = theta_from_weights(n, _weights_from(res.z))
        assert project_psi(theta) == x
        return MembershipCertificate(MEMBER, x, witness=theta)
    y = res.farkas
    sep = AffineInequality(n, tuple(y[n:]), -sum(y[:n], Fraction(0)))
    assert sep.value(x) > sep.c0
    return MembershipCertificate(NON_MEMBER, x, separator=sep)


@lru_cache(maxsize=None)
def interior_point(n: int) -> TcfPoint:
    """Barycentre of the clique partition points (CPP_n is full-dimensional)."""
    parts = set_partitions(n)
    tot = [Fraction(0)] * (n * (n - 1) // 2)
    for p in parts:
        for k, v in enumerate(clique_partition_point(p).chi):
            tot[k] += v
    return TcfPoint(n, tuple(v / len(parts) for v in tot))


def exit_facet(x: TcfPoint, facets: Iterable[AffineInequality]) -> AffineInequality | None:
    """Violated facet crossed first by the segment from interior_point(n) to x.

    Ties are broken by coefficient vector.  None if no facet is violated.
    """
    p = interior_point(x.n)
    best_key, best = None, None
    for f in facets:
        v = f.value(x)
        if v <= f.c0:
            continue
        v0 = f.value(p)
        t = (f.c0 - v0) / (v - v0)
        key = (t, f.c)
        if best_key is None or key < best_key:
            best_key, best = key, f
    return best


def is_member(x: TcfPoint) -> bool:
    return bool(membership(x))


def membership_many(points: Sequence[TcfPoint], workers: int = 1) -> list[MembershipCertificate]:
    return pmap(membership, points, workers=workers)


# ---------------------------------------------------------------------------
# realization


@dataclass(frozen=True)
class Realization:
    model: BinaryModel
    weights: TmSpectralWeights
    theta: SetFunction
    kappa: Fraction  # θ({1..n})
    probability: Fraction  # common value of P(A_i)


def realize(x: TcfPoint, event_probability=None) -> Realization:
    """Events A_1..A_n with equal probabilities and P(A_i|A_j) = χ_ij.

    By default P(A_i) = 1/κ with κ = θ({1..n}); any smaller positive value
    can be requested, the remaining mass going to the empty label.
    """
    cert = membership(x)
    if not cert:
        raise NotAMember("point is not in TCF_n")
    theta = cert.witness
    lam = tm_weights(theta)
    kappa = theta(theta.full)
    p = Fraction(1) / kappa if event_probability is None else Q(event_probability)
    if not 0 < p <= 1 / kappa:
        raise ValueError(f"event probability must lie in (0, {1 / kappa}]")
    if p == 1 / kappa:
        model = capacity_to_distribution(theta.scaled(p))
    else:
        atoms = [(m, p * w) for m, w in enumerate(lam.weights) if m and w]
        atoms.append((0, 1 - p * kappa))
        model = BinaryModel(x.n, tuple(atoms))
    return Realization(model, lam, theta, kappa, p)


def realize_binary(x: TcfPoint, event_probability=None) -> BinaryModel:
    return realize(x, event_probability).model


# ---------------------------------------------------------------------------
# linear optimization over TCF_n


@dataclass(frozen=True)
class Optimum:
    value: Fraction
    point: TcfPoint
    theta: SetFunction


def maximize(c: Sequence, n: int) -> Optimum:
    """max Σ c_ij χ_ij over TCF_n, attained at a projected Θ_n vertex."""
    cols = range(1, 1 << n)
    A = [[1 if K >> (i - 1) & 1 else 0 for K in cols] for i in range(1, n + 1)]
    gain = []
    for K in cols:
        gain.append(sum((Q(a) for (i, j), a in zip(edge_pairs(n), c) if K >> (i - 1) & 1 and K >> (j - 1) & 1), Fraction(0)))
    res = simplex_standard(A, [1] * n, [-g for g in gain])
    theta = theta_from_weights(n, _weights_from(res.z))
    return Optimum(-res.value, project_psi(theta), theta)


def is_valid(ineq: AffineInequality) -> bool:
    return maximize(ineq.c, ineq.n).value <= ineq.c0
