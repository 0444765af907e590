"""JSON / JSON-lines / CSV encodings.  Rationals are strings "p/q" (or "k");
floats are never written and are rejected on input."""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from .combinat import mask_subset, subset_mask
from .cutcor import CutInequality
from .ecf import BinaryModel, SetFunction, TmSpectralWeights
from .hull import HRep, VRep
from .tcf.core import AffineInequality, TcfPoint


class MalformedInput(ValueError):
    pass


class MalformedMatrix(MalformedInput):
    pass


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise MalformedInput("booleans are not numbers")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        raise MalformedInput(f"floating-point value {s!r}; write rationals as \"p/q\"")
    if isinstance(s, str):
        t = s.strip()
        if "." in t or "e" in t.lower():
            raise MalformedInput(f"non-rational literal {s!r}; write rationals as \"p/q\"")
        try:
            return Fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"cannot parse {s!r} as a rational") from exc
    raise MalformedInput(f"cannot parse {s!r} as a rational")


def fmt_set(mask: int) -> str:
    return "{" + ",".join(str(i) for i in mask_subset(mask)) + "}"


def parse_set(s: str) -> int:
    t = s.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise MalformedInput(f"bad subset literal {s!r}")
    body = t[1:-1].strip()
    return subset_mask(int(v) for v in body.split(",")) if body else 0


# ---------------------------------------------------------------------------
# objects <-> dicts


def point_to_json(x: TcfPoint) -> dict:
    return {"n": x.n, "chi": [fmt(v) for v in x.chi]}


def point_from_json(d: dict) -> TcfPoint:
    try:
        return TcfPoint(int(d["n"]), tuple(parse_rational(v) for v in d["chi"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad point record: {exc}") from exc


def ineq_to_json(q: AffineInequality, **extra) -> dict:
    d = {"n": q.n, "c": list(q.c), "c0": q.c0}
    if getattr(q, "name", ""):
        d["name"] = q.name
    d.update(extra)
    return d


def ineq_from_json(d: dict, cut: bool = False) -> AffineInequality:
    try:
        c = tuple(int(v) for v in d["c"])
        if cut:
            return CutInequality(int(d["n"]), c, int(d["c0"]), d.get("name", ""))
        return AffineInequality(int(d["n"]), c, int(d["c0"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad inequality record: {exc}") from exc


def setfunction_to_json(f: SetFunction) -> dict:
    vals = {}
    for m in range(1 << f.n):
        v = f.values[m]
        default = 0 if m == 0 else (1 if m & (m - 1) == 0 else None)
        if default is None or v != default:
            vals[fmt_set(m)] = fmt(v)
    return {"n": f.n, "values": vals}


def setfunction_from_json(d: dict) -> SetFunction:
    n = int(d["n"])
    vals = [Fraction(0)] + [None] * ((1 << n) - 1)
    for i in range(n):
        vals[1 << i] = Fraction(1)
    for k, v in d["values"].items():
        vals[parse_set(k)] = parse_rational(v)
    if any(v is None for v in vals):
        raise MalformedInput("set function is missing values")
    return SetFunction(n, tuple(vals))


def model_to_json(m: BinaryModel) -> dict:
    return {"n": m.n, "atoms": [{"set": list(mask_subset(s)), "mass": fmt(p)} for s, p in m.atoms]}


def model_from_json(d: dict) -> BinaryModel:
    return BinaryModel(
        int(d["n"]), tuple((subset_mask(a["set"]), parse_rational(a["mass"])) for a in d["atoms"])
    )


def weights_to_json(w: TmSpectralWeights) -> dict:
    return {"n": w.n, "weights": {fmt_set(m): fmt(v) for m, v in enumerate(w.weights) if m and v}}


def weights_from_json(d: dict) -> TmSpectralWeights:
    n = int(d["n"])
    vals = [Fraction(0)] * (1 << n)
    for k, v in d["weights"].items():
        vals[parse_set(k)] = parse_rational(v)
    return TmSpectralWeights(n, tuple(vals))


# ---------------------------------------------------------------------------
# JSON lines


def write_jsonl(path, records: Iterable[dict]) -> int:
    k = 0
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, separators=(",", ":")) + "\n")
            k += 1
    return k


def read_jsonl(path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedInput(f"{path}:{lineno}: {exc}") from exc


def hrep_records(h: HRep) -> Iterator[dict]:
    for a, b in h.rows:
        yield {"a": [fmt(v) for v in a], "b": fmt(b)}
    for a, b in h.equations:
        yield {"a": [fmt(v) for v in a], "b": fmt(b), "eq": True}


def hrep_from_records(records: Iterable[dict]) -> HRep:
    rows, eqs = [], []
    dim = None
    for r in records:
        a = tuple(parse_rational(v) for v in r["a"])
        dim = len(a) if dim is None else dim
        (eqs if r.get("eq") else rows).append((a, parse_rational(r["b"])))
    return HRep(dim or 0, tuple(rows), tuple(eqs))


def vrep_records(v: VRep) -> Iterator[dict]:
    for p in v.points:
        yield {"x": [fmt(t) for t in p]}


def vrep_from_records(records: Iterable[dict]) -> VRep:
    pts = tuple(tuple(parse_rational(t) for t in r["x"]) for r in records)
    return VRep(len(pts[0]) if pts else 0, pts)


def read_generators(path) -> list[CutInequality]:
    out = [ineq_from_json(r, cut=True) for r in read_jsonl(path)]
    if not out:
        raise MalformedInput(f"{path}: no generators")
    if len({g.n for g in out}) != 1:
        raise MalformedInput(f"{path}: generators over different graphs")
    return out


# ---------------------------------------------------------------------------
# matrix input


def read_point(path) -> TcfPoint:
    """A symmetric unit-diagonal matrix as CSV, a JSON list of rows, or a
    JSON edge vector {"n": ..., "chi": [...]}."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedMatrix(str(exc)) from exc
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedMatrix(f"{path}: {exc}") from exc
        if isinstance(data, dict):
            try:
                return point_from_json(data)
            except (MalformedInput, ValueError) as exc:
                raise MalformedMatrix(str(exc)) from exc
        rows = data
    else:
        rows = [r for r in csv.reader(text.splitlines()) if r and any(c.strip() for c in r)]
    try:
        mat = [[parse_rational(v) for v in r] for r in rows]
        return TcfPoint.from_matrix(mat)
    except (MalformedInput, ValueError) as exc:
        raise MalformedMatrix(f"{path}: {exc}") from exc
