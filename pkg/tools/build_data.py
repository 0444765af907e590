"""Regenerate the packaged data files in src/tcfkit/data/.

    python3 tools/build_data.py [--max-n 6]

n = 6 takes about five minutes on one idle core (Θ_6 vertex enumeration, then the
extremality LPs, then the cut-route facet pass).
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from tcfkit.cutcor import GENERATORS
from tcfkit.io import ineq_to_json, point_to_json, write_jsonl
from tcfkit.pipeline import tcf_facets_cut, tcf_facets_hull, tcf_vertices
from tcfkit.tcf import TcfPoint

DATA = Path(__file__).resolve().parent.parent / "src" / "tcfkit" / "data"


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()

    write_jsonl(DATA / "cut7_generators.jsonl", (ineq_to_json(g) for g in GENERATORS))
    vrecs, frecs = [], []
    for n in range(2, args.max_n + 1):
        t = time.monotonic()
        vres = tcf_vertices(n)
        vrecs += [{**point_to_json(TcfPoint(n, o.rep)), "orbit": o.size} for o in vres.orbits]
        verts = vres.vertices()
        fres = tcf_facets_cut(n, GENERATORS, verts) if n == 6 else tcf_facets_hull(n, verts)
        frecs += [
            ineq_to_json(o.rep, orbit=o.size, tight=o.tight, generator=o.generator, name=o.generator_name)
            for o in fres.orbits
        ]
        print(f"n={n}: {vres.vertex_count} vertices, {fres.facet_count} facets, {time.monotonic() - t:.0f} s")
    write_jsonl(DATA / "tcf_vertex_orbits.jsonl", vrecs)
    write_jsonl(DATA / "tcf_facet_orbits.jsonl", frecs)


if __name__ == "__main__":
    main()
