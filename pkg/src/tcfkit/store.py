"""Packaged reference data: CUT_7 generators and orbit representatives of the
vertices and facets of TCF_n for n ≤ 6, all produced by this package's own
pipelines (see ``tcfkit tcf-vertices`` / ``tcfkit tcf-facets``)."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .combinat import orbit
from .tcf.core import AffineInequality, TcfPoint

VERTEX_FILE = "tcf_vertex_orbits.jsonl"
FACET_FILE = "tcf_facet_orbits.jsonl"
GENERATOR_FILE = "cut7_generators.jsonl"


class UnsupportedN(ValueError):
    pass


def data_path(name: str):
    return resources.files("tcfkit.data") / name


def _records(name: str) -> list[dict]:
    from .io import read_jsonl

    path = data_path(name)
    if not path.is_file():
        return []
    with resources.as_file(path) as p:
        return list(read_jsonl(p))


@lru_cache(maxsize=None)
def vertex_orbits(n: int) -> tuple[tuple[TcfPoint, int], ...]:
    from .io import point_from_json

    out = tuple((point_from_json(r), int(r["orbit"])) for r in _records(VERTEX_FILE) if r["n"] == n)
    if not out:
        raise UnsupportedN(f"no stored vertex data for n={n}")
    return out


@lru_cache(maxsize=None)
def stored_vertices(n: int) -> tuple[tuple, ...]:
    out = []
    for rep, size in vertex_orbits(n):
        orb = orbit(rep.chi, n)
        assert len(orb) == size, "stored orbit length disagrees with the orbit"
        out.extend(sorted(orb))
    return tuple(out)


@lru_cache(maxsize=None)
def facet_orbits(n: int) -> tuple[dict, ...]:
    """Records with keys ineq, orbit, tight, generator, name."""
    from .io import ineq_from_json

    out = []
    for r in _records(FACET_FILE):
        if r["n"] != n:
            continue
        out.append(
            {
                "ineq": ineq_from_json(r),
                "orbit": int(r["orbit"]),
                "tight": int(r["tight"]),
                "generator": r.get("generator"),
                "name": r.get("name", ""),
            }
        )
    if not out:
        raise UnsupportedN(f"no stored facet data for n={n}")
    return tuple(out)


@lru_cache(maxsize=None)
def stored_facets(n: int) -> tuple[AffineInequality, ...]:
    out = []
    for rec in facet_orbits(n):
        q = rec["ineq"]
        orb = orbit(q, n)
        assert len(orb) == rec["orbit"], "stored orbit length disagrees with the orbit"
        out.extend(sorted(orb, key=lambda a: a.c))
    return tuple(out)


def has_facets(n: int) -> bool:
    try:
        facet_orbits(n)
        return True
    except UnsupportedN:
        return False


def stored_generators():
    from .cutcor import GENERATORS
    from .io import ineq_from_json

    recs = _records(GENERATOR_FILE)
    if not recs:
        return list(GENERATORS)
    return [ineq_from_json(r, cut=True) for r in recs]
