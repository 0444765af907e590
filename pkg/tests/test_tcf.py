import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, strategies as st

from tcfkit.combinat import DimensionMismatch, SetPartition, edge_pairs, orbit, set_partitions
from tcfkit.ecf import is_completely_alternating
from tcfkit.exactnum import Inside, det, in_convex_hull, rank
from tcfkit.tcf import (
    AffineInequality,
    EmptySubset,
    Hypermetric,
    InvalidParameters,
    NotAMember,
    NotHypermetric,
    TcfPoint,
    clique_partition_point,
    cyclic_facet_points,
    cyclic_inequality,
    denominator_model,
    denominator_vertex,
    hypermetric_b_key,
    hypermetric_inequality,
    hypermetric_valid_check,
    is_member,
    is_psd,
    is_pure,
    is_valid,
    lift_inequality,
    lift_point,
    maximize,
    membership,
    project_psi,
    realize,
    recognize_hypermetric,
    relabel_inequality,
    restrict,
    star_point,
)
from tcfkit.tcf.membership import exit_facet, interior_point, membership_many
from tcfkit.tcf.psd import principal_minors_nonnegative, quadratic_form

from conftest import frac_list, golden

HALF = Fraction(1, 2)


def cpp(n):
    return [clique_partition_point(p).chi for p in set_partitions(n)]


@st.composite
def cpp_mixtures(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pts = cpp(n)
    k = draw(st.integers(1, 4))
    idx = draw(st.lists(st.integers(0, len(pts) - 1), min_size=k, max_size=k))
    w = draw(st.lists(st.integers(1, 5), min_size=k, max_size=k))
    tot = sum(w)
    chi = [sum(Fraction(wi, tot) * pts[i][e] for i, wi in zip(idx, w)) for e in range(len(pts[0]))]
    return TcfPoint(n, tuple(chi))


@st.composite
def grid_points(draw, min_n=2, max_n=5, den=4):
    n = draw(st.integers(min_n, max_n))
    m = n * (n - 1) // 2
    vals = draw(st.lists(st.integers(0, den), min_size=m, max_size=m))
    return TcfPoint(n, tuple(Fraction(v, den) for v in vals))


def table3_facets(n):
    """All facets of TCF_n (n ≤ 5) from the transcribed b-vectors."""
    out = set()
    for r in golden("tcf_facets_small.json"):
        if r["n"] == n:
            out |= orbit(hypermetric_inequality(r["b"]), n)
    return out


def oracle_member(x):
    if x.n <= 4:
        return isinstance(in_convex_hull(x.chi, cpp(x.n)), Inside)
    return all(q.holds(x) for q in table3_facets(x.n))


# ---------------------------------------------------------------------------
# core


def test_point_from_matrix_validation():
    x = TcfPoint.from_matrix([[1, HALF, 0], [HALF, 1, 1], [0, 1, 1]])
    assert x.chi == (HALF, 0, 1) and x[3, 2] == 1 and x[2, 2] == 1
    with pytest.raises(ValueError):
        TcfPoint.from_matrix([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        TcfPoint.from_matrix([[2, 0], [0, 1]])
    with pytest.raises(DimensionMismatch):
        TcfPoint(3, (0, 0))


def test_inequality_normalisation_and_display():
    q = AffineInequality(3, (2, -2, 4), 6)
    assert q.c == (1, -1, 2) and q.c0 == 3
    assert str(q) == "x1,2 - x1,3 + 2x2,3 <= 3"
    assert AffineInequality(2, (Fraction(1, 2),), Fraction(1, 2)).c == (1,)
    assert q.coefficient(3, 1) == -1 and q.support() == [(1, 2), (1, 3), (2, 3)]


def test_restrict_lift_and_relabel():
    x = TcfPoint(4, (1, 2, 3, 4, 5, 6))
    assert restrict(x, [2, 4]).chi == (5,)
    assert restrict(x, [1, 3, 4]).chi == (2, 3, 6)
    with pytest.raises(EmptySubset):
        restrict(x, [])
    y = lift_point(TcfPoint(2, (HALF,)))
    assert y.chi == (HALF, 0, 0)
    q = lift_inequality(AffineInequality(2, (1,), 1))
    assert q.c == (1, 0, 0)
    r = relabel_inequality(AffineInequality(3, (1, 0, 0), 1), (3, 1, 2))
    assert r.coefficient(1, 3) == 1


def test_project_psi_of_cpp_theta():
    from tcfkit.ecf import SetFunction

    # θ(A) = number of blocks of {1,2}{3} met by A
    th = SetFunction.from_callable(3, lambda A: len({(1 if a in (1, 2) else 2) for a in A}))
    assert project_psi(th).chi == (1, 0, 0)


# ---------------------------------------------------------------------------
# hypermetric


def test_hypermetric_inequality_examples():
    assert hypermetric_inequality((1, 1)).c == (-1,) and hypermetric_inequality((1, 1)).c0 == 0
    tri = hypermetric_inequality((1, 1, -1))
    assert tri.c == (-1, 1, 1) and tri.c0 == 1
    assert is_pure((1, -1, 0)) and not is_pure((2, 1))


def brute_hyp(x, bound):
    X = x.matrix()
    worst = None
    for b in itertools.product(range(-bound, bound + 1), repeat=x.n):
        if sum(b) < 0 or not any(b):
            continue
        gap = sum(b[i] * X[i][j] * b[j] for i in range(x.n) for j in range(x.n)) - sum(b)
        if gap < 0:
            return False
    return True


@given(grid_points(2, 4, den=2))
def test_hypermetric_check_matches_brute_force(x):
    res = hypermetric_valid_check(x, 2)
    assert bool(res) == brute_hyp(x, 2)
    if not res:
        assert res.value > res.bound
        assert res.inequality.value(x) > res.inequality.c0


def test_hypermetric_check_triangle_violation():
    res = hypermetric_valid_check(TcfPoint(3, (1, 1, 0)), 1)
    assert not res and res.b == (-1, 1, 1)
    assert res.value == 2 and res.bound == 1
    with pytest.raises(ValueError):
        hypermetric_valid_check(TcfPoint(3, (1, 1, 0)), 0)


@given(st.integers(2, 6).flatmap(lambda n: st.lists(st.integers(-3, 3), min_size=n, max_size=n)), st.integers(1, 4))
def test_recognize_recovers_b(b, scale):
    assume(any(b) and sum(v * (v - 1) for v in b) // 2 >= 0)
    q = hypermetric_inequality(b)
    assume(not q.is_trivial())
    h = recognize_hypermetric(q)
    assert isinstance(h, Hypermetric)
    # the recovered b defines the same inequality
    assert hypermetric_inequality(h.b) == q


def test_recognize_small_cases():
    assert recognize_hypermetric(AffineInequality(2, (1,), 1)).b == (1, -1)
    assert recognize_hypermetric(AffineInequality(2, (-1,), 0)).b == (1, 1)
    assert not recognize_hypermetric(cyclic_inequality(3, 6))
    assert isinstance(recognize_hypermetric(AffineInequality(3, (1, 1, 1), 0)), NotHypermetric)


def test_b_key_is_invariant():
    assert hypermetric_b_key((2, 1, -1)) == hypermetric_b_key((1, -2, -1)) == hypermetric_b_key((-1, 1, 2))


# ---------------------------------------------------------------------------
# membership


@given(cpp_mixtures())
def test_mixtures_of_clique_partitions_are_members(x):
    cert = membership(x)
    assert cert
    assert project_psi(cert.witness) == x
    assert is_completely_alternating(cert.witness)


@given(grid_points(2, 5, den=3))
def test_membership_agrees_with_oracle(x):
    cert = membership(x)
    assert bool(cert) == oracle_member(x)
    if not cert:
        assert cert.separator.value(x) > cert.separator.c0
        assert is_valid(cert.separator)


def test_membership_triangle_example():
    cert = membership(TcfPoint(3, (1, 1, 0)))
    assert not cert
    assert cert.separator == AffineInequality(3, (1, 1, -1), 1)
    assert cert.value == 2 and cert.violation == 1


def test_membership_with_facet_list_reports_facet():
    facets = sorted(table3_facets(4), key=lambda q: q.c)
    x = TcfPoint(4, (1, 1, 1, 0, 0, 0))
    cert = membership(x, facets)
    assert not cert and cert.separator in facets
    assert exit_facet(interior_point(4), facets) is None
    assert membership(interior_point(4), facets)


def test_membership_many_matches_single():
    pts = [TcfPoint(3, (1, 1, 0)), TcfPoint(3, (HALF, HALF, HALF))]
    assert [bool(c) for c in membership_many(pts)] == [False, True]


def test_realize_two_points():
    r = realize(TcfPoint(2, (HALF,)))
    assert r.kappa == Fraction(3, 2) and r.probability == Fraction(2, 3)
    assert r.model.tcf() == (HALF,)
    r = realize(TcfPoint(2, (HALF,)), Fraction(1, 3))
    assert r.model.event_probability(1) == Fraction(1, 3) and r.model.tcf() == (HALF,)
    with pytest.raises(NotAMember):
        realize(TcfPoint(3, (1, 1, 0)))


def test_realize_clique_partition_gives_uniform_model():
    x = clique_partition_point(SetPartition.of({1, 2}, {3, 4, 5}, n=6))
    r = realize(x)
    masses = sorted(m for _, m in r.model.atoms)
    assert masses == [Fraction(1, 3)] * 3
    assert r.model.tcf() == x.chi


def test_realize_independence():
    r = realize(TcfPoint(4, (0,) * 6))
    assert r.weights.support() == [((i,), 1) for i in range(1, 5)]
    assert all(len([i for i in range(4) if s >> i & 1]) == 1 for s, _ in r.model.atoms)


def test_maximize():
    assert maximize(cyclic_inequality(3, 6).c, 6).value == 2
    assert maximize((1, 1, -1), 3).value == 1
    assert is_valid(cyclic_inequality(2, 4))
    assert not is_valid(AffineInequality(3, (1, 1, -1), 0))


# ---------------------------------------------------------------------------
# PSD


@given(grid_points(2, 5, den=2))
def test_psd_agrees_with_sympy(x):
    M = sympy.Matrix(x.n, x.n, lambda i, j: sympy.Rational(x[i + 1, j + 1].numerator, x[i + 1, j + 1].denominator))
    res = is_psd(x)
    assert bool(res) == bool(M.is_positive_semidefinite)
    if not res:
        assert quadratic_form(x, res.a) == res.value < 0
        first = next(v for v in res.a if v)
        assert first > 0


def test_star_point_is_not_psd():
    res = is_psd(star_point(6))
    assert not res and res.a == (1, 1, 1, 1, 1, -2) and res.value == -1
    assert principal_minors_nonnegative(star_point(4))


# ---------------------------------------------------------------------------
# constructions


def test_denominator_vertex_values():
    x = denominator_vertex(1, 2)
    assert x.n == 5 and sorted(x.chi).count(HALF) == 5 and x.values() == {0, HALF}
    y = denominator_vertex(1, 3, "II")
    assert y.n == 9 and y.values() == {0, Fraction(1, 3), Fraction(2, 3)}
    z = denominator_vertex(2, 5)
    assert Fraction(2, 5) in z.values() and z.n == 13
    with pytest.raises(InvalidParameters):
        denominator_model(0, 3)
    with pytest.raises(InvalidParameters):
        cyclic_inequality(3, 5)


def test_cyclic_inequality_tight_family_has_rank_15_and_det_2():
    q = cyclic_inequality(3, 6)
    pts = cyclic_facet_points()
    assert len(pts) == 15 and all(q.value(p) == q.c0 for p in pts)
    M = [[1] + list(p.chi) for p in pts]
    assert rank(M) == 15
    # drop the constant column: χ ↦ (χ) rows of a 15x15 system
    assert abs(det([list(p.chi) for p in pts])) == 2
