"""Exact positive semidefiniteness of unit-diagonal matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..exactnum import det, primitive
from .core import TcfPoint


@dataclass(frozen=True)
class PsdYes:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class PsdNo:
    a: tuple  # integer vector with a X aᵀ < 0
    value: Fraction

    def __bool__(self):
        return False


def quadratic_form(x: TcfPoint, a) -> Fraction:
    X = x.matrix()
    return sum((a[i] * X[i][j] * a[j] for i in range(x.n) for j in range(x.n)), Fraction(0))


def principal_minors_nonnegative(x: TcfPoint) -> bool:
    X = x.matrix()
    for k in range(2, x.n + 1):
        for idx in itertools.combinations(range(x.n), k):
            if det([[X[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def _negative_direction(X: list[list[Fraction]]) -> list[Fraction] | None:
    """Symmetric elimination S = P X Pᵀ; returns a row of P with negative
    form, or None when X is PSD."""
    n = len(X)
    S = [row[:] for row in X]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        if S[k][k] < 0:
            return P[k]
        if S[k][k] == 0:
            j = next((j for j in range(k + 1, n) if S[k][j] != 0), None)
            if j is None:
                continue
            # (t p_k + p_j) has form 2 t S_kj + S_jj, made equal to -1
            t = -(S[j][j] + 1) / (2 * S[k][j])
            return [t * u + v for u, v in zip(P[k], P[j])]
        for j in range(k + 1, n):
            f = S[k][j] / S[k][k]
            if f == 0:
                continue
            P[j] = [v - f * u for u, v in zip(P[k], P[j])]
            for l in range(k, n):
                S[j][l] -= f * S[k][l]
            for l in range(k, n):
                S[l][j] = S[j][l]
    return None


def is_psd(x: TcfPoint) -> PsdYes | PsdNo:
    """Decide by principal minors; on failure return a primitive integer a
    (first nonzero entry negative flipped to positive) with a X aᵀ < 0."""
    if principal_minors_nonnegative(x):
        return PsdYes()
    v = _negative_direction(x.matrix())
    assert v is not None
    a = list(primitive(v))
    if next(u for u in a if u) < 0:
        a = [-u for u in a]
    val = quadratic_form(x, a)
    assert val < 0
    return PsdNo(tuple(a), val)
