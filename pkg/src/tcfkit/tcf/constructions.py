"""Explicit vertices with prescribed rational values and the cyclic
(non-hypermetric) inequalities."""

from __future__ import annotations

from fractions import Fraction

from ..combinat import SetPartition, edge_pairs, edge_position
from ..ecf import BinaryModel
from .core import AffineInequality, InvalidParameters, TcfPoint, clique_partition_point


def denominator_model(k: int, m: int, construction: str | None = None) -> BinaryModel:
    """Event model whose TCF has a coordinate k/m (or 1/m, (m-1)/m).

    Construction "I" uses n = 2m+1 events
        A_{1,i} = {ω_1, ω_{2,i}},  A_{2,i} = {ω_{2,i}, ω_{3,i}},  A_{3,1} = {ω_{3,1..m}}
    with weights 1/m, (m-1)/m, 1/m on ω_1, ω_{2,i}, ω_{3,i}.  Construction
    "II" adds ω_{3,m+1}, ω_{3,m+2} of weight k/m, (m-k)/m and the events
        A_{3,2} = {ω_{3,1..m-k}, ω_{3,m+1}},  A_{3,3} = {ω_{3,m+1}, ω_{3,m+2}}.
    Events are numbered A_{1,1..m}, A_{2,1..m}, A_{3,1}[, A_{3,2}, A_{3,3}].
    """
    if construction is None:
        construction = "I" if k in (1, m - 1) else "II"
    if m < 2 or not 1 <= k <= m - 1 or construction not in ("I", "II"):
        raise InvalidParameters(f"no construction {construction} for k={k}, m={m}")
    a1 = lambda i: i - 1  # noqa: E731  (0-based event index)
    a2 = lambda i: m + i - 1  # noqa: E731
    a31, a32, a33 = 2 * m, 2 * m + 1, 2 * m + 2
    atoms: list[tuple[int, Fraction]] = []

    def add(events, g):
        atoms.append((sum(1 << e for e in events), Fraction(g)))

    add([a1(i) for i in range(1, m + 1)], Fraction(1, m))
    for i in range(1, m + 1):
        add([a1(i), a2(i)], Fraction(m - 1, m))
    for i in range(1, m + 1):
        ev = [a2(i), a31]
        if construction == "II" and i <= m - k:
            ev.append(a32)
        add(ev, Fraction(1, m))
    n = 2 * m + 1
    if construction == "II":
        add([a32, a33], Fraction(k, m))
        add([a33], Fraction(m - k, m))
        n += 2
    total = sum(g for _, g in atoms)
    return BinaryModel(n, tuple((s, g / total) for s, g in atoms))


def denominator_vertex(k: int, m: int, construction: str | None = None) -> TcfPoint:
    """Vertex of TCF_n with coordinate values in {0, 1/m, (m-1)/m, k/m, (m-k)/m}.

    Construction "I" (n = 2m+1) is used by default when k ∈ {1, m-1};
    otherwise "II" (n = 2m+3).
    """
    model = denominator_model(k, m, construction)
    assert model.has_equal_events()
    return TcfPoint(model.n, model.tcf())


def cyclic_inequality(k: int, n: int) -> AffineInequality:
    """Σ_{i<2k} x_{i,2k} − Σ_{i<2k} x_{i,π(i)} ≤ k − 1, π the cycle 1→2→…→2k−1→1,
    lifted to n ≥ 2k vertices."""
    if k < 2 or n < 2 * k:
        raise InvalidParameters("need k >= 2 and n >= 2k")
    c = [0] * (n * (n - 1) // 2)
    hub = 2 * k
    for i in range(1, hub):
        c[edge_position(i, hub, n)] += 1
        j = i + 1 if i < hub - 1 else 1
        a, b = sorted((i, j))
        c[edge_position(a, b, n)] -= 1
    return AffineInequality(n, tuple(c), k - 1)


def cyclic_facet_partitions() -> list[SetPartition]:
    """The 15 clique partitions on K_6 tight at the k=3 cyclic inequality:
    A_r = {r, π²r, 6};  B_r = {r, πr, π³r, 6};  B_r together with {π²r, π⁴r}."""
    pi = lambda r, s=1: (r - 1 + s) % 5 + 1  # noqa: E731
    out = []
    for r in range(1, 6):
        out.append(SetPartition.of({r, pi(r, 2), 6}, n=6))
    for r in range(1, 6):
        out.append(SetPartition.of({r, pi(r), pi(r, 3), 6}, n=6))
    for r in range(1, 6):
        out.append(SetPartition.of({r, pi(r), pi(r, 3), 6}, {pi(r, 2), pi(r, 4)}, n=6))
    return out


def cyclic_facet_points() -> list[TcfPoint]:
    return [clique_partition_point(p) for p in cyclic_facet_partitions()]


def star_point(n: int) -> TcfPoint:
    """x_{i,n} = ½ for i < n, all other coordinates 0."""
    return TcfPoint(n, tuple(Fraction(1, 2) if j == n else 0 for i, j in edge_pairs(n)))


def hyp_separation_point() -> TcfPoint:
    """On K_6: ½ on the star into vertex 6 and on the 5-cycle 12,23,34,45,15."""
    cyc = {(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)}
    return TcfPoint(6, tuple(Fraction(1, 2) if j == 6 or (i, j) in cyc else 0 for i, j in edge_pairs(6)))
