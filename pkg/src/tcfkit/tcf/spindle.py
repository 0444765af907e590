"""Facets of TCF_n through the two exposed vertices 0 and 1."""

from __future__ import annotations

from dataclasses import dataclass

from .core import AffineInequality
from .hypermetric import is_pure, recognize_hypermetric


@dataclass(frozen=True)
class SpindleFacet:
    ineq: AffineInequality
    b: tuple | None  # hypermetric b-vector if any
    pure: bool


@dataclass(frozen=True)
class Spindle:
    n: int
    at_v0: tuple  # SpindleFacet with c0 = 0
    at_v1: tuple  # SpindleFacet with Σc = c0
    others: int  # stored facets through neither vertex

    def inequalities(self) -> list[AffineInequality]:
        return [f.ineq for f in self.at_v0 + self.at_v1]


def _entry(q: AffineInequality) -> SpindleFacet:
    h = recognize_hypermetric(q)
    b = h.b if h else None
    return SpindleFacet(q, b, b is not None and is_pure(b))


def spindle_h_representation(n: int) -> Spindle:
    """Split the stored facets of TCF_n (n ≤ 6) by incidence with
    v0 = (0,…,0) and v1 = (1,…,1)."""
    from ..store import UnsupportedN, stored_facets

    if n > 6:
        raise UnsupportedN("stored facets exist only for n <= 6")
    v0, v1, rest = [], [], 0
    for q in stored_facets(n):
        hit = False
        if q.c0 == 0:
            v0.append(_entry(q))
            hit = True
        if sum(q.c) == q.c0:
            v1.append(_entry(q))
            hit = True
        rest += not hit
    return Spindle(n, tuple(v0), tuple(v1), rest)
