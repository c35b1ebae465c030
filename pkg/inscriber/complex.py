"""Simplicial triangulations in R^m with exact coordinates.

Facets are sorted vertex-index tuples. Every operation returns a new
Triangulation; ridge adjacency is rebuilt eagerly.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from inscriber.errors import (
    DanglingVertex,
    DegenerateFacet,
    DegeneratePointSet,
    DimensionMismatch,
    NonManifoldRidge,
    NotInterior,
    NotSimpleInterior,
    UnknownFacet,
    UnknownVertex,
)
from inscriber.kernel import (
    Point,
    Side,
    as_point,
    centroid,
    circumsphere,
    dot,
    face_circumsphere,
    insphere_determinant_side,
    norm_sq,
    nullspace,
    orientation,
    rank,
    sphere_side,
    strictly_feasible,
    sub,
)

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]


class DelaunayMode(Enum):
    FACETS_EMPTY = 1
    ALL_FACES_SUPPORTED = 2
    RIDGES_SUPPORTED = 3
    INTERIOR_RIDGES_LOCAL = 4

    @classmethod
    def parse(cls, label) -> "DelaunayMode":
        if isinstance(label, cls):
            return label
        text = str(label).strip()
        if text.isdigit():
            return cls(int(text))
        return cls[text.upper().replace("-", "_")]


@dataclass(frozen=True)
class Triangulation:
    dim: int
    vertices: Tuple[Point, ...]
    facets: Tuple[Face, ...]
    ridges: Mapping[Face, Tuple[Face, ...]] = field(compare=False, repr=False, hash=False)

    def points(self, face: Iterable[int]) -> Tuple[Point, ...]:
        return tuple(self.vertices[i] for i in face)

    def facets_at(self, v: int) -> Tuple[Face, ...]:
        return tuple(f for f in self.facets if v in f)

    def interior_ridges(self) -> List[Face]:
        return sorted(r for r, fs in self.ridges.items() if len(fs) == 2)

    def boundary_ridges(self) -> List[Face]:
        return sorted(r for r, fs in self.ridges.items() if len(fs) == 1)

    def link(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted({u for f in self.facets_at(v) for u in f if u != v}))


@dataclass(frozen=True)
class DelaunayReport:
    mode: DelaunayMode
    violations: Tuple[Tuple[Face, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _ridge_map(facets: Sequence[Face]) -> Dict[Face, Tuple[Face, ...]]:
    ridges: Dict[Face, List[Face]] = {}
    for f in facets:
        for ridge in combinations(f, len(f) - 1):
            ridges.setdefault(ridge, []).append(f)
    for ridge, owners in ridges.items():
        if len(owners) > 2:
            raise NonManifoldRidge(f"ridge {ridge} lies in {len(owners)} facets")
    return {r: tuple(fs) for r, fs in ridges.items()}


def _assemble(dim: int, vertices: Tuple[Point, ...], facets: Iterable[Face]) -> Triangulation:
    ordered = tuple(sorted(facets))
    return Triangulation(dim=dim, vertices=vertices, facets=ordered, ridges=MappingProxyType(_ridge_map(ordered)))


def build_triangulation(dim: int, vertices, facets, *, check_support: bool = True) -> Triangulation:
    """Validate and assemble a triangulation.

    check_support confirms exactly that the facets tile the convex hull of the
    vertices. Callers whose facets are a triangulation by construction may
    switch it off.
    """
    points = tuple(as_point(v) for v in vertices)
    for p in points:
        if len(p) != dim:
            raise DimensionMismatch(f"vertex {p} is not in R^{dim}")
    cleaned: Set[Face] = set()
    for raw in facets:
        f = tuple(sorted(int(i) for i in raw))
        if len(f) != dim + 1 or len(set(f)) != dim + 1:
            raise DegenerateFacet(f"facet {tuple(raw)} must have {dim + 1} distinct vertices")
        if f[0] < 0 or f[-1] >= len(points):
            raise DegenerateFacet(f"facet {f} refers to a missing vertex")
        if f in cleaned:
            raise DegenerateFacet(f"facet {f} listed twice")
        if orientation([points[i] for i in f]) == 0:
            raise DegenerateFacet(f"facet {f} is affinely dependent")
        cleaned.add(f)
    if not cleaned:
        raise DegenerateFacet("a triangulation needs at least one facet")
    used = {i for f in cleaned for i in f}
    dangling = [i for i in range(len(points)) if i not in used]
    if dangling:
        raise DanglingVertex(f"vertices {dangling} belong to no facet")
    t = _assemble(dim, points, cleaned)
    if check_support and not covers_convex_hull(t):
        raise DegenerateFacet("facets overlap or do not cover the convex hull")
    return t


def strictly_inside(simplex: Sequence[Point], p: Point) -> bool:
    orient = orientation(simplex)
    for i in range(len(simplex)):
        replaced = list(simplex)
        replaced[i] = p
        if orientation(replaced) != orient:
            return False
    return True


def _inside_closed(simplex: Sequence[Point], p: Point) -> bool:
    orient = orientation(simplex)
    for i in range(len(simplex)):
        replaced = list(simplex)
        replaced[i] = p
        if orientation(replaced) == -orient:
            return False
    return True


def covers_convex_hull(t: Triangulation) -> bool:
    """Exact tiling test for a pseudomanifold.

    No interior ridge folds and every boundary ridge lies on a supporting
    hyperplane, so the facets cover the hull the same number of times almost
    everywhere. The centroid of one facet lying in no other facet makes that
    number one.
    """
    for ridge, owners in t.ridges.items():
        base = list(t.points(ridge))
        sides = [orientation(base + [t.vertices[next(i for i in f if i not in ridge)]]) for f in owners]
        if len(owners) == 2:
            if sides[0] != -sides[1]:
                return False
        elif any(orientation(base + [q]) == -sides[0] for q in t.vertices):
            return False
    first = t.facets[0]
    point = centroid(t.points(first))
    return not any(_inside_closed(t.points(g), point) for g in t.facets[1:])


def stellar_subdivide(t: Triangulation, facet: Iterable[int], p) -> Triangulation:
    f = tuple(sorted(facet))
    if f not in t.facets:
        raise UnknownFacet(f"facet {f} is not in the triangulation")
    point = as_point(p)
    if len(point) != t.dim:
        raise DimensionMismatch(f"point {point} is not in R^{t.dim}")
    if not strictly_inside(t.points(f), point):
        raise NotInterior(f"point {point} is not strictly inside facet {f}")
    new = len(t.vertices)
    created = [f[:i] + f[i + 1:] + (new,) for i in range(len(f))]
    facets = [g for g in t.facets if g != f] + created
    return _assemble(t.dim, t.vertices + (point,), facets)


def vertex_degree(t: Triangulation, v: int) -> int:
    _check_vertex(t, v)
    return len(t.facets_at(v))


def is_interior_vertex(t: Triangulation, v: int) -> bool:
    _check_vertex(t, v)
    return not any(v in r for r in t.boundary_ridges())


def _check_vertex(t: Triangulation, v: int) -> None:
    if not 0 <= v < len(t.vertices):
        raise UnknownVertex(f"vertex {v} is not in the triangulation")


def undo_stellar(t: Triangulation, v: int) -> Triangulation:
    _check_vertex(t, v)
    star = t.facets_at(v)
    link = t.link(v)
    if not is_interior_vertex(t, v) or len(star) != t.dim + 1 or len(link) != t.dim + 1:
        raise NotSimpleInterior(f"vertex {v} is not an interior vertex of degree {t.dim + 1}")
    expected = {tuple(sorted((set(link) - {u}) | {v})) for u in link}
    if set(star) != expected or not strictly_inside(t.points(link), t.vertices[v]):
        raise NotSimpleInterior(f"the star of vertex {v} is not a stellar subdivision")

    def shift(i: int) -> int:
        return i - 1 if i > v else i

    facets = [tuple(shift(i) for i in f) for f in t.facets if v not in f]
    facets.append(tuple(shift(i) for i in link))
    vertices = t.vertices[:v] + t.vertices[v + 1:]
    return _assemble(t.dim, vertices, facets)


def _face_support_witness(t: Triangulation, face: Face) -> Optional[int]:
    """First vertex (by index) after which no sphere through face keeps all seen vertices outside."""
    pts = t.points(face)
    p0 = pts[0]
    center = face_circumsphere(pts).center
    normals = nullspace([sub(p, p0) for p in pts[1:]], t.dim)
    rows = []
    for q_idx, q in enumerate(t.vertices):
        if q_idx in face:
            continue
        w = tuple(2 * a for a in sub(p0, q))
        rows.append(([dot(w, n) for n in normals], norm_sq(p0) - norm_sq(q) - dot(w, center)))
        if not strictly_feasible(rows):
            return q_idx
    return None


def _facets_empty(t: Triangulation) -> List[Tuple[Face, int]]:
    violations = []
    for f in t.facets:
        sphere = circumsphere(t.points(f))
        for j, q in enumerate(t.vertices):
            if j not in f and sphere_side(sphere, q) is not Side.OUTSIDE:
                violations.append((f, j))
    return violations


def _interior_ridges_local(t: Triangulation) -> List[Tuple[Face, int]]:
    violations = []
    for ridge in t.interior_ridges():
        first, second = t.ridges[ridge]
        v1 = next(i for i in first if i not in ridge)
        v2 = next(i for i in second if i not in ridge)
        if v1 > v2:
            first, v1, v2 = second, v2, v1
        if insphere_determinant_side(t.points(first), t.vertices[v2]) is not Side.OUTSIDE:
            violations.append((ridge, v2))
    return violations


def _supported(t: Triangulation, faces: Iterable[Face]) -> List[Tuple[Face, int]]:
    violations = []
    for face in faces:
        witness = _face_support_witness(t, face)
        if witness is not None:
            violations.append((face, witness))
    return violations


def _all_faces(t: Triangulation) -> List[Face]:
    faces: Set[Face] = set()
    for f in t.facets:
        for size in range(1, len(f) + 1):
            faces.update(combinations(f, size))
    return sorted(faces, key=lambda face: (len(face), face))


def check_delaunay(t: Triangulation, mode) -> DelaunayReport:
    mode = DelaunayMode.parse(mode)
    if mode is DelaunayMode.FACETS_EMPTY:
        violations = _facets_empty(t)
    elif mode is DelaunayMode.INTERIOR_RIDGES_LOCAL:
        violations = _interior_ridges_local(t)
    elif mode is DelaunayMode.RIDGES_SUPPORTED:
        violations = _supported(t, sorted(t.ridges))
    else:
        violations = _supported(t, _all_faces(t))
    report = DelaunayReport(mode=mode, violations=tuple(sorted(violations)))
    logger.debug("check_delaunay %s: %d violations", mode.name, len(report.violations))
    return report


def brute_force_delaunay(points: Sequence) -> Triangulation:
    pts = tuple(as_point(p) for p in points)
    if not pts:
        raise DegeneratePointSet("no points")
    m = len(pts[0])
    if len(pts) < m + 1 or rank([sub(p, pts[0]) for p in pts[1:]]) != m:
        raise DegeneratePointSet(f"points do not affinely span R^{m}")
    facets = []
    for subset in combinations(range(len(pts)), m + 1):
        simplex = [pts[i] for i in subset]
        if orientation(simplex) == 0:
            continue
        sphere = circumsphere(simplex)
        sides = [sphere_side(sphere, pts[j]) for j in range(len(pts)) if j not in subset]
        if Side.ON in sides:
            raise DegeneratePointSet(f"{m + 2} cospherical points including {subset}")
        if Side.INSIDE not in sides:
            facets.append(subset)
    try:
        t = build_triangulation(m, pts, facets)
    except (DegenerateFacet, NonManifoldRidge, DanglingVertex) as exc:
        raise DegeneratePointSet(f"empty-sphere simplices do not form a triangulation: {exc}") from exc
    return t
