import pytest

from tcfkit.pipeline import tcf_facets_hull, tcf_vertices
from tcfkit.store import (
    UnsupportedN,
    facet_orbits,
    has_facets,
    stored_facets,
    stored_generators,
    stored_vertices,
    vertex_orbits,
)
from tcfkit.cutcor import GENERATORS
from tcfkit.tcf import TcfPoint
from tcfkit.tcf.spindle import spindle_h_representation


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_stored_data_matches_recomputation(n):
    r = tcf_vertices(n)
    assert set(stored_vertices(n)) == set(r.vertices())
    f = tcf_facets_hull(n, r.vertices())
    assert set(stored_facets(n)) == set(f.facets())
    assert {rec["ineq"]: rec["tight"] for rec in facet_orbits(n)} == {o.rep: o.tight for o in f.orbits}


def test_unsupported_n():
    with pytest.raises(UnsupportedN):
        vertex_orbits(9)
    assert not has_facets(9)


def test_generators_file_matches_builtin():
    assert [g.c for g in stored_generators()] == [g.c for g in GENERATORS]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_spindle_split(n):
    sp = spindle_h_representation(n)
    total = len(stored_facets(n))
    assert len(sp.at_v0) + len(sp.at_v1) + sp.others == total
    v0 = TcfPoint(n, (0,) * (n * (n - 1) // 2))
    v1 = TcfPoint(n, (1,) * (n * (n - 1) // 2))
    assert all(f.ineq.value(v0) == f.ineq.c0 for f in sp.at_v0)
    assert all(f.ineq.value(v1) == f.ineq.c0 for f in sp.at_v1)
    assert all(f.b is not None for f in sp.at_v0 + sp.at_v1)


def test_spindle_rejects_large_n():
    with pytest.raises(UnsupportedN):
        spindle_h_representation(7)
