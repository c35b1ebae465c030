"""JSON and CSV codecs. Scalars are exact "p/q" strings; floats are never read."""

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from inscriber.builder import BuildStep, BuildTrace, InscribedPolytope, InscribedReport
from inscriber.complex import DelaunayReport, Triangulation, build_triangulation
from inscriber.errors import ParseError
from inscriber.kernel import Line, Point, Sphere
from inscriber.trees import Decision, DualTree, PlanChild, RootedPlan

_SCALAR = re.compile(r"^-?\d+(/\d+)?$")


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_scalar(raw) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"not an exact scalar: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str) or not _SCALAR.match(raw.strip()):
        raise ParseError(f"not an exact scalar: {raw!r} (expected an integer or 'p/q')")
    try:
        return Fraction(raw.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {raw!r}") from None


def format_point(p: Sequence[Fraction]) -> List[str]:
    return [format_scalar(v) for v in p]


def parse_point(raw) -> Point:
    if not isinstance(raw, list):
        raise ParseError(f"a point is a list of scalars, got {raw!r}")
    return tuple(parse_scalar(v) for v in raw)


def _require(data: Dict[str, Any], key: str):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"missing field {key!r}")
    return data[key]


def _int(raw, what: str) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"{what} must be an integer, got {raw!r}")
    return raw


def _int_rows(raw, what: str) -> List[Tuple[int, ...]]:
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a list of index lists")
    rows = []
    for row in raw:
        if not isinstance(row, list):
            raise ParseError(f"{what} entries must be lists, got {row!r}")
        rows.append(tuple(_int(i, what) for i in row))
    return rows


# triangulations and polytopes

def triangulation_to_dict(t: Triangulation) -> Dict[str, Any]:
    return {
        "dim": t.dim,
        "vertices": [format_point(v) for v in t.vertices],
        "facets": [list(f) for f in t.facets],
    }


def triangulation_from_dict(data) -> Triangulation:
    dim = _int(_require(data, "dim"), "dim")
    vertices = [parse_point(v) for v in _require(data, "vertices")]
    return build_triangulation(dim, vertices, _int_rows(_require(data, "facets"), "facets"))


def polytope_to_dict(p: InscribedPolytope) -> Dict[str, Any]:
    return {
        "d": p.d,
        "north": p.north,
        "vertices": [format_point(v) for v in p.vertices],
        "facets": [list(f) for f in p.facets],
        "sphere": {"center": format_point(p.sphere.center), "radius_sq": format_scalar(p.sphere.radius_sq)},
    }


def polytope_from_dict(data) -> InscribedPolytope:
    d = _int(_require(data, "d"), "d")
    north = data.get("north")
    if north is not None:
        north = _int(north, "north")
    vertices = tuple(parse_point(v) for v in _require(data, "vertices"))
    if any(len(v) != d for v in vertices):
        raise ParseError(f"every vertex must have {d} coordinates")
    facets = tuple(tuple(sorted(f)) for f in _int_rows(_require(data, "facets"), "facets"))
    if any(not 0 <= i < len(vertices) for f in facets for i in f):
        raise ParseError("a facet refers to a missing vertex")
    sphere = None
    if data.get("sphere") is not None:
        raw = data["sphere"]
        sphere = Sphere(center=parse_point(_require(raw, "center")), radius_sq=parse_scalar(_require(raw, "radius_sq")))
    return InscribedPolytope(d=d, vertices=vertices, facets=facets, north=north, sphere=sphere)


# trees and plans

def tree_to_dict(t: DualTree) -> Dict[str, Any]:
    return {"nodes": t.nodes, "edges": [list(e) for e in t.edges]}


def tree_from_dict(data) -> DualTree:
    nodes = _int(_require(data, "nodes"), "nodes")
    edges = _int_rows(_require(data, "edges"), "edges")
    if any(len(e) != 2 for e in edges):
        raise ParseError("every edge must join two nodes")
    return DualTree(nodes=nodes, edges=tuple(edges))


def plan_to_dict(p: RootedPlan, d: int) -> Dict[str, Any]:
    children = {}
    for node, kids in sorted(p.children.items()):
        entries = []
        for child in kids:
            entry: Dict[str, Any] = {"node": child.node}
            if child.face is not None:
                entry["face"] = child.face
            entries.append(entry)
        children[str(node)] = entries
    return {"d": d, "root": p.root, "children": children}


def plan_from_dict(data) -> Tuple[RootedPlan, int]:
    d = _int(_require(data, "d"), "d")
    root = _int(_require(data, "root"), "root")
    raw = _require(data, "children")
    if not isinstance(raw, dict):
        raise ParseError("children must map node ids to lists")
    children = {}
    for key, entries in raw.items():
        if not str(key).lstrip("-").isdigit() or not isinstance(entries, list):
            raise ParseError(f"bad children entry for {key!r}")
        kids = []
        for entry in entries:
            face = entry.get("face") if isinstance(entry, dict) else None
            kids.append(PlanChild(node=_int(_require(entry, "node"), "node"), face=None if face is None else _int(face, "face")))
        children[int(key)] = tuple(kids)
    return RootedPlan(root=root, children=children), d


def facets_from_dict(data) -> Tuple[List[Tuple[int, ...]], int]:
    """Boundary facet list of a stacked polytope: {"d": d, "facets": [[...], ...]}."""
    return _int_rows(_require(data, "facets"), "facets"), _int(_require(data, "d"), "d")


# traces

def trace_to_dict(trace: BuildTrace) -> Dict[str, Any]:
    steps = []
    for step in trace.steps:
        steps.append(
            {
                "node": step.node,
                "parent": step.parent,
                "facet": list(step.facet),
                "point": format_point(step.point),
                "line": None
                if step.line is None
                else {"base": format_point(step.line.base), "direction": format_point(step.line.direction)},
                "lam": None if step.lam is None else format_scalar(step.lam),
                "denominator_bits": step.denominator_bits,
            }
        )
    return {"d": trace.d, "scale": format_scalar(trace.scale), "steps": steps}


def _int_list(raw, what: str) -> Tuple[int, ...]:
    if not isinstance(raw, list):
        raise ParseError(f"{what} must be a list of integers, got {raw!r}")
    return tuple(_int(i, what) for i in raw)


def _trace_step(raw) -> BuildStep:
    if not isinstance(raw, dict):
        raise ParseError(f"a trace step is an object, got {raw!r}")
    line = raw.get("line")
    lam = raw.get("lam")
    parent = raw.get("parent")
    if line is not None and not isinstance(line, dict):
        raise ParseError(f"line must be an object with base and direction, got {line!r}")
    return BuildStep(
        node=_int(_require(raw, "node"), "node"),
        parent=None if parent is None else _int(parent, "parent"),
        facet=_int_list(_require(raw, "facet"), "facet"),
        point=parse_point(_require(raw, "point")),
        line=None if line is None else Line(parse_point(_require(line, "base")), parse_point(_require(line, "direction"))),
        lam=None if lam is None else parse_scalar(lam),
    )


def trace_from_dict(data) -> BuildTrace:
    raw_steps = _require(data, "steps")
    if not isinstance(raw_steps, list):
        raise ParseError(f"steps must be a list, got {raw_steps!r}")
    steps = tuple(_trace_step(raw) for raw in raw_steps)
    return BuildTrace(d=_int(_require(data, "d"), "d"), scale=parse_scalar(_require(data, "scale")), steps=steps)


# reports

def delaunay_report_to_dict(report: DelaunayReport) -> Dict[str, Any]:
    return {
        "mode": report.mode.value,
        "ok": report.ok,
        "violations": [{"face": list(face), "witness": witness} for face, witness in report.violations],
    }


def inscribed_report_to_dict(report: InscribedReport) -> Dict[str, Any]:
    return {
        "ok": report.ok,
        "violations": [
            {"check": v.check, "face": list(v.face), "witness": v.witness, "detail": v.detail}
            for v in report.violations
        ],
    }


def decision_to_dict(decision: Decision) -> Dict[str, Any]:
    return {
        "inscribable": decision.inscribable,
        "max_degree": decision.max_degree,
        "witness": decision.witness,
    }


# files

def load_json(path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    return path


def write_csv(path, frame: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def read_csv(path) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None


def parse_optional_scalar(raw: Optional[str]) -> Optional[Fraction]:
    return None if raw is None else parse_scalar(raw)
