"""Command-line front end: ``tcfkit theta|tcf-vertices|tcf-facets|check|realize|tables``.

Exit codes: 0 success, 2 non-member (``check``), 3 budget exceeded,
4 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .combinat import DimensionMismatch, all_edge_permutations, count_orbits, edge_pairs, orbit
from .cutcor import (
    CutInequality,
    cor_coordinate_maps,
    correlation_vertices,
    cut_vertex_switching_orbits,
    cut_vertices,
    expand_generator_orbit,
    pull_back_to_cor,
)
from .ecf import free_coordinate_maps, theta_h_representation
from .hull import dd_vertices, hull_facets
from .io import (
    MalformedInput,
    fmt,
    hrep_records,
    ineq_to_json,
    model_to_json,
    point_from_json,
    point_to_json,
    read_generators,
    read_jsonl,
    read_point,
    setfunction_to_json,
    vrep_records,
    weights_to_json,
    write_jsonl,
)
from .pipeline import (
    FacetResult,
    IncompleteGenerators,
    VertexResult,
    class_label,
    tcf_facets_cut,
    tcf_facets_hull,
    tcf_vertices,
)
from .runtime import Budget, BudgetExceeded, pmap
from .store import UnsupportedN, has_facets, stored_facets, stored_generators, stored_vertices
from .tcf import (
    NotAMember,
    TcfPoint,
    hypermetric_valid_check,
    is_psd,
    membership,
    realize,
)

EXIT_OK, EXIT_NON_MEMBER, EXIT_BUDGET, EXIT_INPUT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


# ---------------------------------------------------------------------------
# reports


class Report:
    def __init__(self, title: str, args: argparse.Namespace):
        self.title = title
        self.args = args
        self.lines: list[str] = []
        self.partial = False
        self.start = time.monotonic()

    def add(self, *lines: str) -> None:
        self.lines.extend(lines)

    def table(self, headers: list[str], rows: list[list]) -> None:
        self.lines.append("| " + " | ".join(headers) + " |")
        self.lines.append("|" + "|".join("---" for _ in headers) + "|")
        for r in rows:
            self.lines.append("| " + " | ".join(str(v) for v in r) + " |")
        self.lines.append("")

    def render(self) -> str:
        budget = "unlimited" if self.args.budget is None else f"{self.args.budget:g} s"
        head = [
            f"# {self.title}" + (" (PARTIAL)" if self.partial else ""),
            "",
            f"- command: `{self.args.command_line}`",
            "- seed: none (every computation is deterministic)",
            f"- budget: {budget}",
            f"- elapsed: {time.monotonic() - self.start:.1f} s",
            f"- tcfkit {__version__}",
            "",
        ]
        if self.partial:
            head += ["**PARTIAL: the runtime budget was exceeded; results below are incomplete.**", ""]
        return "\n".join(head + self.lines).rstrip() + "\n"

    def emit(self) -> None:
        text = self.render()
        sys.stdout.write(text)
        if getattr(self.args, "report", None):
            Path(self.args.report).write_text(text, encoding="utf-8")


def _budget(args) -> Budget | None:
    return Budget(args.budget) if args.budget is not None else None


def _vec(values) -> str:
    return "(" + ", ".join(fmt(v) for v in values) + ")"


def _need_n(args, lo: int = 2, hi: int | None = None) -> int:
    if args.n is None:
        raise MalformedInput("--n is required")
    if args.n < lo or (hi is not None and args.n > hi):
        raise MalformedInput(f"--n must lie in [{lo}, {hi if hi is not None else '∞'}]")
    return args.n


# ---------------------------------------------------------------------------
# theta


def cmd_theta(args) -> int:
    n = _need_n(args, 2, args.max_n)
    rep = Report(f"Θ_{n}: {args.mode}", args)
    rep.add("Coordinates are θ(A) for |A| ≥ 2, ordered by size and then lexicographically.", "")
    h = theta_h_representation(n)
    if args.mode == "facets":
        if args.out:
            write_jsonl(args.out, hrep_records(h))
        rep.add(f"Θ_{n} ⊂ Q^{h.dim}: {len(h.rows)} inequalities")
        rep.emit()
        return EXIT_OK
    try:
        v = dd_vertices(h, _budget(args))
    except BudgetExceeded:
        rep.partial = True
        rep.add(f"Θ_{n} ⊂ Q^{h.dim}: vertex enumeration did not finish")
        rep.emit()
        return EXIT_BUDGET
    if args.out:
        write_jsonl(args.out, vrep_records(v))
    rep.add(f"Θ_{n} ⊂ Q^{h.dim}: {len(v.points)} vertices")
    rep.emit()
    return EXIT_OK


# ---------------------------------------------------------------------------
# vertices


def _vertex_report(rep: Report, res: VertexResult) -> None:
    n = res.n
    rep.add(
        f"- Θ_{n} vertices: {res.theta_vertices}",
        f"- distinct projected points: {res.projected} in {res.projected_orbits} orbits",
        f"- vertices of TCF_{n}: {res.vertex_count} in {len(res.orbits)} orbits",
        "",
        "Value classes:",
        "",
    )
    rep.table(
        ["values", "vertices", "orbits"],
        [[class_label(k), v, o] for k, (v, o) in res.class_counts().items()],
    )
    rep.add(f"Orbit representatives (coordinates {', '.join(f'{i}{j}' for i, j in edge_pairs(n))}):", "")
    rep.table(
        ["#", "representative", "orbit", "values"],
        [[k, _vec(o.rep), o.size, class_label(o.value_class)] for k, o in enumerate(res.orbits, 1)],
    )


def cmd_tcf_vertices(args) -> int:
    n = _need_n(args, 2, args.max_n)
    rep = Report(f"Vertices of TCF_{n}", args)
    code = EXIT_OK
    try:
        res = tcf_vertices(n, _budget(args))
    except BudgetExceeded as exc:
        if not isinstance(exc.partial, VertexResult):
            rep.partial = True
            rep.add("Vertex enumeration of Θ_n did not finish.")
            rep.emit()
            return EXIT_BUDGET
        res, code = exc.partial, EXIT_BUDGET
        rep.partial = True
    _vertex_report(rep, res)
    if args.out:
        write_jsonl(
            args.out,
            ({**point_to_json(TcfPoint(n, v)), "orbit": k}
             for k, o in enumerate(res.orbits, 1) for v in sorted(orbit(o.rep, n))),
        )
    if args.orbits_out:
        write_jsonl(
            args.orbits_out,
            ({**point_to_json(TcfPoint(n, o.rep)), "orbit": o.size} for o in res.orbits),
        )
    rep.emit()
    return code


# ---------------------------------------------------------------------------
# facets


def _load_vertices(args, n: int) -> list[tuple]:
    if args.input:
        pts = [point_from_json(r) for r in read_jsonl(args.input)]
        if any(p.n != n for p in pts):
            raise MalformedInput("vertex file does not match --n")
        return [p.chi for p in pts]
    try:
        return list(stored_vertices(n))
    except UnsupportedN:
        return tcf_vertices(n, _budget(args)).vertices()


def _facet_report(rep: Report, res: FacetResult) -> None:
    n = res.n
    hyp = [o for o in res.orbits if o.hypermetric]
    rep.add(
        f"- route: {'cut-polytope pullback' if res.route == 'cut' else 'convex hull of the vertices'}",
        f"- facets of TCF_{n}: {res.facet_count} in {len(res.orbits)} orbits",
        f"- hypermetric: {sum(o.size for o in hyp)} facets in {len(hyp)} orbits",
    )
    if res.cut_facets is not None:
        rep.add(
            f"- cut facets expanded: {res.cut_facets}",
            f"- rows per generator: {', '.join(str(v) for v in res.rows_per_generator)}",
        )
    rep.add("", f"Orbit representatives Σ c_ij x_ij ≤ c0 (coefficients {', '.join(f'{i}{j}' for i, j in edge_pairs(n))}):", "")
    rows = []
    for k, o in enumerate(res.orbits, 1):
        h = o.hypermetric
        rows.append(
            [
                k,
                o.generator if o.generator is not None else "-",
                " ".join(str(v) for v in o.rep.c),
                o.rep.c0,
                o.tight,
                o.size,
                _vec(h.b) if h else "not hypermetric",
            ]
        )
    rep.table(["#", "generator", "c", "c0", "tight", "orbit", "b"], rows)


def cmd_tcf_facets(args) -> int:
    n = _need_n(args, 2, args.max_n)
    rep = Report(f"Facets of TCF_{n}", args)
    budget = _budget(args)
    code = EXIT_OK
    try:
        vertices = _load_vertices(args, n)
        if args.generators or n == 6:
            gens = read_generators(args.generators) if args.generators else stored_generators()
            if gens[0].n != n + 1:
                raise IncompleteGenerators(f"generators live on K_{gens[0].n}, need K_{n + 1}")
            res = tcf_facets_cut(n, gens, vertices, budget)
        else:
            res = tcf_facets_hull(n, vertices, budget)
    except BudgetExceeded as exc:
        rep.partial = True
        if not isinstance(exc.partial, FacetResult):
            rep.add("The computation did not finish.")
            rep.emit()
            return EXIT_BUDGET
        res, code = exc.partial, EXIT_BUDGET
    _facet_report(rep, res)
    if args.out:
        write_jsonl(
            args.out,
            (ineq_to_json(q, orbit=k) for k, o in enumerate(res.orbits, 1) for q in _facet_orbit(o.rep, n)),
        )
    if args.orbits_out:
        write_jsonl(
            args.orbits_out,
            (
                ineq_to_json(o.rep, orbit=o.size, tight=o.tight, generator=o.generator, name=o.generator_name)
                for o in res.orbits
            ),
        )
    rep.emit()
    return code


def _facet_orbit(q, n):
    return sorted(orbit(q, n), key=lambda a: a.c)


# ---------------------------------------------------------------------------
# check / realize


def _read_points(path) -> list[TcfPoint]:
    if str(path).endswith(".jsonl"):
        pts = [point_from_json(r) for r in read_jsonl(path)]
        if not pts:
            raise MalformedInput(f"{path}: no points")
        return pts
    return [read_point(path)]


def _check_one(job):
    x, bound = job
    facets = stored_facets(x.n) if 2 <= x.n <= 6 and has_facets(x.n) else None
    cert = membership(x, facets)
    hyp = hypermetric_valid_check(x, bound) if x.n >= 2 else None
    psd = is_psd(x)
    return cert, hyp, psd


def cmd_check(args) -> int:
    if not args.input:
        raise MalformedInput("--in is required")
    pts = _read_points(args.input)
    results = pmap(_check_one, [(x, args.hypermetric_bound) for x in pts], workers=args.workers)
    rep = Report("Membership check", args)
    out = []
    any_non = False
    for k, (x, (cert, hyp, psd)) in enumerate(zip(pts, results), 1):
        if len(pts) > 1:
            rep.add(f"## Point {k}", "")
        rep.add(f"- n = {x.n}", f"- χ = {_vec(x.chi)}", f"- verdict: **{cert.verdict}**")
        rec = {"verdict": cert.verdict, "point": point_to_json(x), "witness": None, "separator": None}
        if cert:
            rep.add(f"- witness θ: {json.dumps(setfunction_to_json(cert.witness)['values'], ensure_ascii=False)}")
            rec["witness"] = setfunction_to_json(cert.witness)
        else:
            any_non = True
            sep = cert.separator
            rep.add(
                f"- separator: {sep}",
                f"- value at χ: {fmt(cert.value)} > {sep.c0} (violation {fmt(cert.violation)})",
            )
            rec["separator"] = {**ineq_to_json(sep), "value": fmt(cert.value)}
        if hyp is not None:
            if hyp:
                rep.add(f"- hypermetric screening, ‖b‖∞ ≤ {args.hypermetric_bound}: all {hyp.checked} satisfied")
            else:
                rep.add(
                    f"- hypermetric screening, ‖b‖∞ ≤ {args.hypermetric_bound}: violated by b = {_vec(hyp.b)} "
                    f"({fmt(hyp.value)} > {fmt(hyp.bound)})"
                )
            rec["hypermetric"] = {"bound": args.hypermetric_bound, "satisfied": bool(hyp),
                                  "b": None if hyp else list(hyp.b)}
        if psd:
            rep.add("- positive semidefinite: yes")
        else:
            rep.add(f"- positive semidefinite: no, a = {_vec(psd.a)} gives aXaᵀ = {fmt(psd.value)}")
        rec["psd"] = {"psd": bool(psd), "a": None if psd else list(psd.a)}
        rep.add("")
        out.append(rec)
    if args.out:
        if len(out) == 1:
            Path(args.out).write_text(json.dumps(out[0], indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        else:
            write_jsonl(args.out, out)
    rep.emit()
    return EXIT_NON_MEMBER if any_non else EXIT_OK


def cmd_realize(args) -> int:
    if not args.input:
        raise MalformedInput("--in is required")
    x = read_point(args.input)
    r = realize(x, args.probability)
    model = r.model
    back = model.tcf()
    rep = Report("Binary realization", args)
    rep.add(
        f"- n = {x.n}",
        f"- κ = θ({{1..n}}) = {fmt(r.kappa)}",
        f"- P(A_i) = {fmt(r.probability)} for every i: {model.has_equal_events()}",
        f"- χ recomputed from the model: {_vec(back)}",
        f"- round trip exact: {back == x.chi}",
        "",
    )
    rep.table(
        ["atom label S", "mass"],
        [["{" + ",".join(str(i + 1) for i in range(x.n) if s >> i & 1) + "}", fmt(m)] for s, m in model.atoms],
    )
    rep.table(
        ["K", "λ_K"],
        [["{" + ",".join(map(str, K)) + "}", fmt(w)] for K, w in r.weights.support()],
    )
    if args.out:
        doc = {
            "point": point_to_json(x),
            "kappa": fmt(r.kappa),
            "probability": fmt(r.probability),
            "model": model_to_json(model),
            "weights": weights_to_json(r.weights),
            "theta": setfunction_to_json(r.theta),
            "roundtrip": [fmt(v) for v in back],
        }
        Path(args.out).write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
    rep.emit()
    return EXIT_OK


# ---------------------------------------------------------------------------
# tables

REFERENCE = {
    "Θ vertices": {2: 2, 3: 6, 4: 42, 5: 1292, 6: 200214},
    "Θ facets": {2: 2, 3: 7, 4: 15, 5: 31, 6: 63},
    "Θ vertex orbits": {2: 2, 3: 4, 4: 10, 5: 45, 6: 583},
    "Θ facet orbits": {2: 2, 3: 3, 4: 4, 5: 5, 6: 6},
    "TCF vertices": {2: 2, 3: 5, 4: 15, 5: 214, 6: 28895},
    "TCF facets": {2: 2, 3: 6, 4: 22, 5: 110, 6: 18720},
    "TCF vertex orbits": {2: 2, 3: 3, 4: 5, 5: 11, 6: 88},
    "TCF facet orbits": {2: 2, 3: 2, 4: 3, 5: 7, 6: 67},
    "COR vertices": {2: 4, 3: 8, 4: 16, 5: 32, 6: 64},
    "COR facets": {2: 4, 3: 16, 4: 56, 5: 368, 6: 116764},
    "COR vertex orbits": {2: 3, 3: 4, 4: 5, 5: 6, 6: 7},
    "COR facet orbits": {2: 3, 3: 5, 4: 10, 5: 29, 6: 428},
    "CUT_{n+1} vertices": {2: 4, 3: 8, 4: 16, 5: 32, 6: 64},
    "CUT_{n+1} facets": {2: 4, 3: 16, 4: 56, 5: 368, 6: 116764},
    "CUT_{n+1} vertex orbits": {2: 2, 3: 3, 4: 3, 5: 4, 6: 4},
    "CUT_{n+1} facet orbits": {2: 2, 3: 2, 4: 5, 5: 11, 6: 108},
    "CUT_{n+1} perm./switch. vertex orbits": {2: 1, 3: 1, 4: 1, 5: 1, 6: 1},
    "CUT_{n+1} perm./switch. facet orbits": {2: 1, 3: 1, 4: 2, 5: 3, 6: 11},
}


def _cut_facets(n: int, budget) -> tuple[list[CutInequality], int]:
    """Facets of CUT_{n+1} and their number of permutation/switching orbits."""
    if n + 1 == 7:
        orbits = [expand_generator_orbit(g, budget) for g in stored_generators()]
        union = set().union(*orbits)
        if len(union) != sum(len(o) for o in orbits):
            raise ValueError("generator orbits overlap")
        return sorted(union, key=lambda a: (a.c, a.c0)), len(orbits)
    h = hull_facets(cut_vertices(n + 1), budget)
    facets = {CutInequality(n + 1, a, b) for a, b in h.rows}
    remaining = set(facets)
    count = 0
    while remaining:
        q = min(remaining, key=lambda a: (a.c, a.c0))
        remaining -= expand_generator_orbit(q, budget)
        count += 1
    return sorted(facets, key=lambda a: (a.c, a.c0)), count


def _with_constant(maps):
    return [tuple(g) + (len(g),) for g in maps]


def table_column(n: int, budget: Budget | None = None) -> dict[str, int]:
    h = theta_h_representation(n)
    th = dd_vertices(h, budget).points
    maps = free_coordinate_maps(n)
    den = math.lcm(*(v.denominator for p in th for v in p))
    mat = np.array([[int(v * den) for v in p] for p in th], dtype=np.int64)
    hmat = np.array([[int(v) for v in a] + [int(b)] for a, b in h.rows], dtype=np.int64)
    vres = tcf_vertices(n, budget, theta=th)
    verts = vres.vertices()
    if n == 6:
        fres = tcf_facets_cut(n, stored_generators(), verts, budget)
    else:
        fres = tcf_facets_hull(n, verts, budget)
    cutf, cuto = _cut_facets(n, budget)
    cut_mat = np.array([q.c + (q.c0,) for q in cutf], dtype=np.int64)
    cors = [pull_back_to_cor(q) for q in cutf]
    cor_mat = np.array([q.b + q.a + (q.c0,) for q in cors], dtype=np.int64)
    cor_maps = cor_coordinate_maps(n)
    cor_v = np.array([v.flat() for v in correlation_vertices(n)], dtype=np.int64)
    return {
        "Θ vertices": len(th),
        "Θ facets": len(h.rows),
        "Θ vertex orbits": count_orbits(mat, maps=maps),
        "Θ facet orbits": count_orbits(hmat, maps=_with_constant(maps)),
        "TCF vertices": vres.vertex_count,
        "TCF facets": fres.facet_count,
        "TCF vertex orbits": len(vres.orbits),
        "TCF facet orbits": len(fres.orbits),
        "COR vertices": len(cor_v),
        "COR facets": len(cors),
        "COR vertex orbits": count_orbits(cor_v, maps=cor_maps),
        "COR facet orbits": count_orbits(cor_mat, maps=_with_constant(cor_maps)),
        "CUT_{n+1} vertices": len(cut_vertices(n + 1)),
        "CUT_{n+1} facets": len(cutf),
        "CUT_{n+1} vertex orbits": count_orbits(np.array(cut_vertices(n + 1), dtype=np.int64), n + 1),
        "CUT_{n+1} facet orbits": count_orbits(cut_mat, maps=_with_constant(all_edge_permutations(n + 1))),
        "CUT_{n+1} perm./switch. vertex orbits": cut_vertex_switching_orbits(n + 1),
        "CUT_{n+1} perm./switch. facet orbits": cuto,
    }


def _table_job(job):
    n, seconds = job
    return n, table_column(n, Budget(seconds) if seconds is not None else None)


def cmd_tables(args) -> int:
    ns = [2, 3, 4, 5] + ([6] if args.extended else [])
    rep = Report("Vertex and facet counts", args)
    try:
        cols = dict(pmap(_table_job, [(n, args.budget) for n in ns], workers=args.workers, chunksize=1))
    except BudgetExceeded:
        rep.partial = True
        rep.add("The runtime budget was exceeded before all columns were computed.")
        rep.emit()
        return EXIT_BUDGET
    rows = []
    mism = 0
    for key, ref in REFERENCE.items():
        row = [key]
        for n in ns:
            got = cols[n][key]
            ok = got == ref[n]
            mism += not ok
            row.append(f"{got} ✓" if ok else f"{got} ✗ (reference {ref[n]})")
        rows.append(row)
    rep.table(["count"] + [f"n={n}" for n in ns], rows)
    rep.add(f"{'All cells match' if mism == 0 else f'{mism} cell(s) differ from'} the reference values.")
    rep.emit()
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of points")
    common.add_argument("--in", dest="input", help="input file")
    common.add_argument("--out", help="output file")
    common.add_argument("--report", help="also write the Markdown report here")
    common.add_argument("--generators", help="JSON-lines cut generator file")
    common.add_argument("--extended", action="store_true", help="include n = 6 (long)")
    common.add_argument("--budget", type=float, help="wall-clock budget in seconds")
    common.add_argument("--hypermetric-bound", type=int, default=3, help="‖b‖∞ bound for screening")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--max-n", type=int, default=6, help="largest n accepted by enumeration commands")

    p = _Parser(prog="tcfkit", description="Exact computations on tail correlation polytopes.")
    p.add_argument("--version", action="version", version=f"tcfkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("theta", parents=[common], help="H- or V-representation of Θ_n")
    s.add_argument("--mode", choices=["facets", "vertices"], default="facets")
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("tcf-vertices", parents=[common], help="vertices of TCF_n")
    s.add_argument("--orbits-out", help="write orbit representatives (JSON lines)")
    s.set_defaults(func=cmd_tcf_vertices)

    s = sub.add_parser("tcf-facets", parents=[common], help="facets of TCF_n")
    s.add_argument("--orbits-out", help="write orbit representatives (JSON lines)")
    s.set_defaults(func=cmd_tcf_facets)

    s = sub.add_parser("check", parents=[common], help="membership with certificate")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("realize", parents=[common], help="binary model realizing a point")
    s.add_argument("--probability", type=Fraction, help="common event probability (default 1/κ)")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("tables", parents=[common], help="reproduce the vertex/facet count table")
    s.set_defaults(func=cmd_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_line = "tcfkit " + " ".join(shlex.quote(a) for a in argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"tcfkit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (MalformedInput, IncompleteGenerators, UnsupportedN, NotAMember, DimensionMismatch, ValueError, OSError) as exc:
        print(f"tcfkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
