"""Exact Delaunay realizations of subdivision plans and their inscribed lifts.

A plan node is realized by inserting one vertex. Expanding a node of degree d
inserts its children on a line through the node's vertex that is tangent to
the circumspheres of the facets left alone, moving the new points towards the
vertex until every empty-sphere condition holds.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from inscriber.complex import (
    DelaunayMode,
    Face,
    Triangulation,
    build_triangulation,
    check_delaunay,
    is_interior_vertex,
    stellar_subdivide,
    strictly_inside,
    vertex_degree,
)
from inscriber.config import DEFAULT_HALVING_CAP
from inscriber.errors import (
    BadDimension,
    DegenerateNormals,
    DegenerateSimplex,
    NotDelaunay,
    NotSimpleInterior,
    PlanNotBuildable,
    SearchExhausted,
    SupportNotSimplex,
    UnknownFacet,
    VerificationFailed,
)
from inscriber.kernel import (
    HyperSide,
    Line,
    Point,
    Side,
    Sphere,
    as_scalar,
    centroid,
    circumsphere,
    hyperplane_side,
    hyperplane_through,
    inverse_stereographic,
    north_pole,
    norm_sq,
    nullspace,
    orientation,
    scale,
    solve,
    sphere_side,
    sub,
    unit_sphere,
)
from inscriber.trees import PlanChild, RootedPlan, plan_is_buildable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InscribedPolytope:
    d: int
    vertices: Tuple[Point, ...]
    facets: Tuple[Face, ...]
    north: Optional[int] = None
    sphere: Optional[Sphere] = None

    def __post_init__(self):
        if self.sphere is None:
            object.__setattr__(self, "sphere", unit_sphere(self.d))

    def points(self, face) -> Tuple[Point, ...]:
        return tuple(self.vertices[i] for i in face)


@dataclass(frozen=True)
class BuildStep:
    node: int
    parent: Optional[int]
    facet: Face
    point: Point
    line: Optional[Line] = None
    lam: Optional[Fraction] = None

    @property
    def denominator_bits(self) -> int:
        return max(c.denominator.bit_length() for c in self.point)


@dataclass(frozen=True)
class BuildTrace:
    d: int
    scale: Fraction
    steps: Tuple[BuildStep, ...]


@dataclass(frozen=True)
class BuildResult:
    triangulation: Triangulation
    trace: BuildTrace
    vertex_of: Mapping[int, int]


@dataclass(frozen=True)
class Expansion:
    triangulation: Triangulation
    new_vertices: Tuple[int, ...]
    points: Tuple[Point, ...]
    line: Line
    lam: Fraction


@dataclass(frozen=True)
class InscribedViolation:
    check: str
    face: Tuple[int, ...]
    witness: Optional[int] = None
    detail: str = ""


@dataclass(frozen=True)
class InscribedReport:
    violations: Tuple[InscribedViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def initial_simplex(d: int, scale_factor=1) -> Triangulation:
    s = as_scalar(scale_factor)
    if d < 2:
        raise BadDimension(f"dimension d={d} is below 2")
    if s <= 0:
        raise BadDimension(f"scale {s} must be positive")
    m = d - 1
    vertices = [(Fraction(0),) * m] + [tuple(s if i == j else Fraction(0) for i in range(m)) for j in range(m)]
    return build_triangulation(m, vertices, [tuple(range(d))])


def init_root(d: int, scale_factor=1) -> Triangulation:
    if d < 3:
        raise BadDimension(f"construction needs d >= 3, got {d}")
    base = initial_simplex(d, scale_factor)
    return stellar_subdivide(base, base.facets[0], centroid(base.vertices))


def _check_expansion_vertex(t: Triangulation, c: int) -> None:
    if not is_interior_vertex(t, c) or vertex_degree(t, c) != t.dim + 1:
        raise NotSimpleInterior(f"vertex {c} is not interior of degree {t.dim + 1}")


def tangent_line(t: Triangulation, c: int, keep: Sequence[Face]) -> Line:
    _check_expansion_vertex(t, c)
    if len(keep) != t.dim - 1:
        raise BadDimension(f"a tangent line keeps {t.dim - 1} facets, got {len(keep)}")
    at = set(t.facets_at(c))
    point = t.vertices[c]
    rows = []
    for f in keep:
        f = tuple(sorted(f))
        if f not in at:
            raise UnknownFacet(f"facet {f} does not contain vertex {c}")
        rows.append(sub(point, circumsphere(t.points(f)).center))
    kernel = nullspace(rows, t.dim)
    if not kernel:
        raise DegenerateNormals(f"the kept circumspheres at vertex {c} admit no common tangent line")
    direction = kernel[0]
    biggest = max(abs(v) for v in direction)
    return Line(base=point, direction=scale(1 / biggest, direction))


def _cone_sign(t: Triangulation, c: int, facet: Face, direction: Point) -> int:
    """+1 if direction points into facet at c, -1 if its negative does, else 0."""
    base = t.vertices[c]
    edges = [sub(t.vertices[w], base) for w in facet if w != c]
    matrix = [[e[r] for e in edges] for r in range(t.dim)]
    coeffs = solve(matrix, list(direction))
    if coeffs is None:
        return 0
    if all(a > 0 for a in coeffs):
        return 1
    if all(a < 0 for a in coeffs):
        return -1
    return 0


def choose_points(
    t: Triangulation,
    c: int,
    f1: Face,
    f2: Face,
    line: Line,
    *,
    single: bool = False,
    halving_cap: int = DEFAULT_HALVING_CAP,
) -> Tuple[Point, Optional[Point], Fraction]:
    """Halving search for x1 = line.at(lam) in f1 and x2 = line.at(-lam) in f2.

    lam is signed relative to line.direction. With single=True only x1 is
    placed and f2 acts as the partner facet whose sphere x1 must also avoid.
    """
    f1, f2 = tuple(sorted(f1)), tuple(sorted(f2))
    if f1 == f2 or c not in f1 or c not in f2:
        raise UnknownFacet(f"facets {f1} and {f2} must be distinct facets at vertex {c}")
    sign = _cone_sign(t, c, f1, line.direction)
    if sign == 0 or _cone_sign(t, c, f2, line.direction) != -sign:
        raise SearchExhausted(f"the tangent line at vertex {c} does not pass through {f1} and {f2}")
    avoid = [circumsphere(t.points(f)) for f in t.facets if c not in f]
    if single:
        avoid.append(circumsphere(t.points(f2)))

    def acceptable(x: Point, facet: Face) -> bool:
        return strictly_inside(t.points(facet), x) and all(sphere_side(s, x) is Side.OUTSIDE for s in avoid)

    lam = Fraction(sign)
    for iteration in range(halving_cap):
        x1 = line.at(lam)
        x2 = None if single else line.at(-lam)
        if acceptable(x1, f1) and (single or acceptable(x2, f2)):
            logger.debug("vertex %d: accepted lam=%s after %d halvings", c, lam, iteration)
            return x1, x2, lam
        lam /= 2
    raise SearchExhausted(f"no admissible points at vertex {c} after {halving_cap} halvings")


def expand_at(t: Triangulation, c: int, faces: Sequence[Face], *, halving_cap: int = DEFAULT_HALVING_CAP) -> Expansion:
    faces = [tuple(sorted(f)) for f in faces]
    at = t.facets_at(c)
    if len(faces) not in (1, 2) or len(set(faces)) != len(faces) or any(f not in at for f in faces):
        raise UnknownFacet(f"expand_at needs one or two distinct facets at vertex {c}, got {faces}")
    f1 = faces[0]
    f2 = faces[1] if len(faces) == 2 else next(f for f in at if f != f1)
    keep = [f for f in at if f not in (f1, f2)]
    line = tangent_line(t, c, keep)
    single = len(faces) == 1
    x1, x2, lam = choose_points(t, c, f1, f2, line, single=single, halving_cap=halving_cap)
    first = len(t.vertices)
    result = stellar_subdivide(t, f1, x1)
    if single:
        return Expansion(result, (first,), (x1,), line, lam)
    result = stellar_subdivide(result, f2, x2)
    return Expansion(result, (first, first + 1), (x1, x2), line, lam)


def _created_face(source: Face, c: int, label: int) -> Face:
    return tuple(sorted(source[:label] + source[label + 1:] + (c,)))


def _assign_labels(children: Sequence[PlanChild]) -> List[int]:
    taken = {ch.face for ch in children if ch.face is not None}
    free = (label for label in range(len(children) + len(taken) + 1) if label not in taken)
    return [ch.face if ch.face is not None else next(free) for ch in children]


def build_from_plan(
    p: RootedPlan,
    d: int,
    scale_factor=1,
    *,
    halving_cap: int = DEFAULT_HALVING_CAP,
) -> BuildResult:
    diagnosis = plan_is_buildable(p, d)
    if not diagnosis.ok:
        raise PlanNotBuildable(f"plan is not buildable: {diagnosis.status.value} at node {diagnosis.node}", diagnosis.node)
    s = as_scalar(scale_factor)
    t = init_root(d, s)
    root_facet = tuple(range(d))
    steps = [BuildStep(node=p.root, parent=None, facet=root_facet, point=t.vertices[d])]
    vertex_of: Dict[int, int] = {p.root: d}
    source: Dict[int, Face] = {p.root: root_facet}

    stack = [p.root]
    while stack:
        node = stack.pop()
        children = p.children_of(node)
        if not children:
            continue
        c = vertex_of[node]
        faces = [_created_face(source[node], c, label) for label in _assign_labels(children)]
        expansion = expand_at(t, c, faces, halving_cap=halving_cap)
        signs = (1, -1)
        for child, face, v, point, sign in zip(children, faces, expansion.new_vertices, expansion.points, signs):
            vertex_of[child.node] = v
            source[child.node] = face
            steps.append(
                BuildStep(
                    node=child.node,
                    parent=node,
                    facet=face,
                    point=point,
                    line=expansion.line,
                    lam=sign * expansion.lam,
                )
            )
        t = expansion.triangulation
        stack.extend(reversed([ch.node for ch in children]))

    trace = BuildTrace(d=d, scale=s, steps=tuple(steps))
    logger.info(
        "built %d vertices, %d facets (max denominator bits %d)",
        len(t.vertices),
        len(t.facets),
        max(step.denominator_bits for step in steps),
    )
    return BuildResult(triangulation=t, trace=trace, vertex_of=vertex_of)


def build_path(d: int, n: int, scale_factor=1, *, halving_cap: int = DEFAULT_HALVING_CAP) -> BuildResult:
    """n points on the ray from vertex 0 through the barycenter of the base simplex."""
    if d < 3 or n < 1:
        raise BadDimension(f"path construction needs d >= 3 and n >= 1, got d={d}, n={n}")
    s = as_scalar(scale_factor)
    t = initial_simplex(d, s)
    m = d - 1
    ray = Line(base=t.vertices[0], direction=(Fraction(1),) * m)
    end = s / m
    target = tuple(range(d))
    tip = 0
    previous = Fraction(0)
    steps: List[BuildStep] = []
    for k in range(n):
        avoid = [circumsphere(t.points(f)) for f in t.facets if f != target]
        gap = end - previous
        for _ in range(halving_cap):
            gap /= 2
            lam = previous + gap
            x = ray.at(lam)
            if strictly_inside(t.points(target), x) and all(sphere_side(sp, x) is Side.OUTSIDE for sp in avoid):
                break
        else:
            raise SearchExhausted(f"no admissible ray point for step {k}")
        new = len(t.vertices)
        steps.append(BuildStep(node=k, parent=k - 1 if k else None, facet=target, point=x, line=ray, lam=lam))
        t = stellar_subdivide(t, target, x)
        # the ray leaves through the facet opposite the previous tip
        target = tuple(sorted(set(target) - {tip} | {new}))
        tip = new
        previous = lam
    trace = BuildTrace(d=d, scale=s, steps=tuple(steps))
    return BuildResult(triangulation=t, trace=trace, vertex_of={k: d + k for k in range(n)})


def replay_trace(trace: BuildTrace) -> Triangulation:
    t = initial_simplex(trace.d, trace.scale)
    for step in trace.steps:
        if step.line is not None and step.line.at(step.lam) != step.point:
            raise VerificationFailed(f"step for node {step.node} does not lie on its recorded line")
        t = stellar_subdivide(t, step.facet, step.point)
    return t


def rooted_tree_from_trace(trace: BuildTrace) -> RootedPlan:
    """Subdivision tree: a step's parent inserted the newest vertex of the facet it subdivides."""
    node_of_vertex = {trace.d + k: step.node for k, step in enumerate(trace.steps)}
    children: Dict[int, List[PlanChild]] = {step.node: [] for step in trace.steps}
    root = None
    for step in trace.steps:
        inserted = [v for v in step.facet if v >= trace.d]
        if not inserted:
            root = step.node
            continue
        children[node_of_vertex[max(inserted)]].append(PlanChild(node=step.node))
    return RootedPlan(root=root, children={k: tuple(v) for k, v in children.items()})


def _support_simplex_ridges(t: Triangulation) -> List[Face]:
    boundary = t.boundary_ridges()
    hull = sorted({v for r in boundary for v in r})
    if len(hull) != t.dim + 1 or boundary != sorted(combinations(hull, t.dim)):
        raise SupportNotSimplex(f"the boundary has {len(boundary)} ridges on {len(hull)} vertices, not a simplex")
    if orientation(t.points(hull)) == 0:
        raise SupportNotSimplex("the support vertices are affinely dependent")
    return boundary


def lift_to_inscribed(t: Triangulation) -> InscribedPolytope:
    report = check_delaunay(t, DelaunayMode.FACETS_EMPTY)
    if not report.ok:
        face, witness = report.violations[0]
        raise NotDelaunay(f"facet {face} has vertex {witness} on or inside its circumsphere")
    boundary = _support_simplex_ridges(t)
    d = t.dim + 1
    north = len(t.vertices)
    vertices = tuple(inverse_stereographic(v) for v in t.vertices) + (north_pole(d),)
    facets = tuple(sorted(list(t.facets) + [r + (north,) for r in boundary]))
    return InscribedPolytope(d=d, vertices=vertices, facets=facets, north=north)


def verify_inscribed(p: InscribedPolytope) -> InscribedReport:
    violations: List[InscribedViolation] = []
    for i, v in enumerate(p.vertices):
        if norm_sq(sub(v, p.sphere.center)) != p.sphere.radius_sq:
            violations.append(InscribedViolation("on_sphere", (i,), i))

    for facet in p.facets:
        try:
            plane = hyperplane_through(p.points(facet))
        except (DegenerateSimplex, ValueError):
            violations.append(InscribedViolation("supporting", tuple(facet), None, "facet does not span a hyperplane"))
            continue
        first_side = None
        for j, q in enumerate(p.vertices):
            if j in facet:
                continue
            side = hyperplane_side(plane, q)
            if first_side is None and side is not HyperSide.ON:
                first_side = side
            if side is HyperSide.ON or side is not first_side:
                violations.append(InscribedViolation("supporting", tuple(facet), j))
                break

    counts: Dict[Face, int] = {}
    for facet in p.facets:
        for ridge in combinations(facet, p.d - 1):
            counts[ridge] = counts.get(ridge, 0) + 1
    for ridge, count in sorted(counts.items()):
        if count != 2:
            violations.append(InscribedViolation("ridge", ridge, None, f"in {count} facets"))
    return InscribedReport(violations=tuple(violations))


def polytope_edges(p: InscribedPolytope) -> List[Tuple[int, int]]:
    return sorted({e for f in p.facets for e in combinations(f, 2)})


def polytope_degrees(p: InscribedPolytope) -> List[int]:
    degrees = [0] * len(p.vertices)
    for a, b in polytope_edges(p):
        degrees[a] += 1
        degrees[b] += 1
    return degrees


def inscribed_polygon(n_vertices: int) -> InscribedPolytope:
    """Rational points on the unit circle in cyclic order, the last one the north pole."""
    if n_vertices < 3:
        raise BadDimension(f"a polygon needs at least 3 vertices, got {n_vertices}")
    shift = Fraction(n_vertices - 2, 2)
    vertices = tuple(inverse_stereographic((Fraction(i) - shift,)) for i in range(n_vertices - 1))
    vertices += (north_pole(2),)
    facets = tuple(sorted(tuple(sorted((i, (i + 1) % n_vertices))) for i in range(n_vertices)))
    return InscribedPolytope(d=2, vertices=vertices, facets=facets, north=n_vertices - 1)


def _north_first(p: InscribedPolytope) -> InscribedPolytope:
    order = [p.north] + [i for i in range(len(p.vertices)) if i != p.north]
    position = {old: new for new, old in enumerate(order)}
    facets = tuple(sorted(tuple(sorted(position[i] for i in f)) for f in p.facets))
    return InscribedPolytope(d=p.d, vertices=tuple(p.vertices[i] for i in order), facets=facets, north=0, sphere=p.sphere)


def chain_plan(length: int, face: Optional[int] = None) -> RootedPlan:
    return RootedPlan(root=0, children={k: (PlanChild(node=k + 1, face=face),) for k in range(length - 1)})


def build_bounded_degree(d: int, n: int, scale_factor=1, *, halving_cap: int = DEFAULT_HALVING_CAP) -> InscribedPolytope:
    """Stack vertex d+1+k onto facet {k+1, ..., k+d}; vertex i of the result carries label i+1.

    In triangulation terms the north pole is label 1 and every expansion
    subdivides the created facet that drops the oldest vertex.
    """
    if d == 2:
        return inscribed_polygon(n + 3)
    if d < 2 or n < 0:
        raise BadDimension(f"bounded-degree family needs d >= 2 and n >= 0, got d={d}, n={n}")
    if n == 0:
        t = initial_simplex(d, scale_factor)
    else:
        t = build_from_plan(chain_plan(n, face=0), d, scale_factor, halving_cap=halving_cap).triangulation
    return _north_first(lift_to_inscribed(t))
