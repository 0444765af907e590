from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tcfkit.exactnum import (
    EmptyPointList,
    Infeasible,
    Inside,
    LinearProgram,
    Outside,
    PointSet,
    Q,
    check_farkas,
    check_feasible,
    det,
    in_convex_hull,
    lp_solve,
    nullspace,
    primitive,
    rank,
    rref,
    solve,
)

small = st.integers(-4, 4)


def matrices(rows=4, cols=4):
    return st.integers(1, rows).flatmap(
        lambda r: st.integers(1, cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_q_rejects_floats():
    assert Q("3/4") == Fraction(3, 4)
    assert Q(2) == 2
    with pytest.raises(TypeError):
        Q(0.5)


def test_primitive_scales_to_coprime_integers():
    assert primitive([Fraction(2, 3), Fraction(4, 3), 0]) == (1, 2, 0)
    assert primitive([-6, 9]) == (-2, 3)


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sympy.Matrix(m).rank()


@given(st.integers(1, 4).flatmap(lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=k, max_size=k)))
def test_det_matches_sympy(m):
    assert det(m) == sympy.Matrix(m).det()


@given(matrices())
def test_nullspace_vectors_are_annihilated(m):
    basis = nullspace(m)
    assert len(basis) == len(m[0]) - rank(m)
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in m)


@given(matrices())
def test_rref_agrees_with_sympy(m):
    red, piv = rref(m)
    ref, ref_piv = sympy.Matrix(m).rref()
    assert tuple(piv) == tuple(ref_piv)
    for i, row in enumerate(red[: len(piv)]):
        assert [sympy.Rational(v.numerator, v.denominator) for v in row] == list(ref.row(i))


def test_solve():
    assert solve([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    assert solve([[1, 1], [2, 2]], [1, 3]) is None


def test_lp_optimum_and_witness():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0
    lp = LinearProgram.build(
        2, [((1, 2), "<=", 4), ((3, 1), "<=", 6)], objective=(1, 1), maximize=True, bounds=((0, None), (0, None))
    )
    res = lp_solve(lp)
    assert res.optimum == Fraction(14, 5)
    assert check_feasible(lp, res.witness)


def test_lp_infeasible_has_farkas_certificate():
    lp = LinearProgram.build(2, [((1, 1), "<=", 1), ((1, 1), ">=", 2)])
    res = lp_solve(lp)
    assert isinstance(res, Infeasible)
    assert check_farkas(lp, res)


@given(
    st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4),
    st.lists(st.integers(-6, 6), min_size=4, max_size=4),
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
)
def test_lp_against_scipy(rows, rhs, obj):
    scipy = pytest.importorskip("scipy.optimize")
    cons = [(tuple(r), "<=", b) for r, b in zip(rows, rhs)]
    lp = LinearProgram.build(3, cons, objective=obj, maximize=False, bounds=((0, 5),) * 3)
    res = lp_solve(lp)
    ref = scipy.linprog(obj, A_ub=[r for r, _, _ in cons], b_ub=[b for _, _, b in cons], bounds=[(0, 5)] * 3)
    if isinstance(res, Infeasible):
        assert ref.status == 2
        assert check_farkas(lp, res)
    else:
        assert ref.status == 0
        assert check_feasible(lp, res.witness)
        assert abs(float(res.optimum) - ref.fun) < 1e-9


def test_convex_hull_inside_and_outside():
    square = [(0, 0), (1, 0), (0, 1), (1, 1)]
    r = in_convex_hull((Fraction(1, 2), Fraction(1, 3)), square)
    assert isinstance(r, Inside)
    comb = [sum(c * p[k] for c, p in zip(r.coefficients, square)) for k in range(2)]
    assert comb == [Fraction(1, 2), Fraction(1, 3)] and sum(r.coefficients) == 1
    r = in_convex_hull((2, 0), square)
    assert isinstance(r, Outside)
    assert sum(a * x for a, x in zip(r.h, (2, 0))) > r.t
    assert all(sum(a * x for a, x in zip(r.h, p)) <= r.t for p in square)


def test_convex_hull_exclude_and_large_sets():
    pts = [(i, j) for i in range(12) for j in range(12)]
    ps = PointSet(pts)
    corner = ps.index[(0, 0)]
    assert isinstance(in_convex_hull((0, 0), ps, exclude=[corner]), Outside)
    assert isinstance(in_convex_hull((5, 5), ps, exclude=[ps.index[(5, 5)]]), Inside)
    with pytest.raises(EmptyPointList):
        in_convex_hull((0, 0), [(0, 0)], exclude=[0])
