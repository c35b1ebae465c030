"""Evidence that a simplex split three times around one vertex is never Delaunay.

Everything decisive here is exact. The only floating-point values are the
angle sums reported by angle_obstruction_2d, which are diagnostics.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from inscriber.builder import expand_at
from inscriber.complex import (
    DelaunayMode,
    Face,
    Triangulation,
    build_triangulation,
    check_delaunay,
    is_interior_vertex,
    stellar_subdivide,
)
from inscriber.errors import (
    BadInput,
    DegenerateSimplex,
    HypothesisFailed,
    InscriberError,
    InversionCenterHit,
    VerificationFailed,
    WrongCombinatorialType,
)
from inscriber.kernel import (
    Line,
    Point,
    Side,
    Sphere,
    add,
    affine_intersection_line,
    barycentric_coordinates,
    circumsphere,
    face_circumsphere,
    invert_in_sphere,
    line_sphere_second_root,
    norm_sq,
    project_onto_affine,
    rank,
    scale,
    solve,
    sphere_side,
    sub,
)
from inscriber.sampling import instance_generator, random_interior_point, random_simplex

logger = logging.getLogger(__name__)

EDGES = ("Ax", "Bx", "Cx")


# split geometry

@dataclass(frozen=True)
class SplitGeometry:
    """The line through c where the spans of c with V_F and with V_G meet.

    params holds the line parameters of x, x_bar, y_bar and y; c sits at 0 and
    the direction is oriented so that y_bar has a positive parameter.
    """

    k: int
    c: int
    vertices: Tuple[int, ...]
    E_F: Tuple[Point, ...]
    E_G: Tuple[Point, ...]
    ell: Line
    C_F: Sphere
    C_G: Sphere
    x: Point
    y: Point
    x_bar: Point
    y_bar: Point
    params: Tuple[Fraction, Fraction, Fraction, Fraction]

    @property
    def d(self) -> int:
        return len(self.vertices)

    def facet(self, i: int) -> Face:
        """F_i: the facet at c missing the i-th vertex (1-based)."""
        return tuple(sorted((self.c,) + self.vertices[: i - 1] + self.vertices[i:]))


def _single_split(delta: Triangulation) -> Tuple[int, Tuple[int, ...]]:
    d = delta.dim + 1
    if len(delta.vertices) != d + 1 or len(delta.facets) != d:
        raise BadInput("expected one simplex subdivided at a single interior point")
    interior = [v for v in range(len(delta.vertices)) if is_interior_vertex(delta, v)]
    if len(interior) != 1:
        raise BadInput(f"expected exactly one interior vertex, found {interior}")
    c = interior[0]
    return c, tuple(v for v in range(len(delta.vertices)) if v != c)


def _meet_hull(line: Line, points: Sequence[Point]) -> Fraction:
    """Parameter where line crosses the affine hull of points (one point or a flat)."""
    p0 = points[0]
    columns = [line.direction] + [scale(Fraction(-1), sub(p, p0)) for p in points[1:]]
    matrix = [[col[r] for col in columns] for r in range(len(p0))]
    result = solve(matrix, list(sub(p0, line.base)))
    if result is None:
        raise VerificationFailed("the split line misses the affine hull of its face")
    return result[0]


def _ordering_holds(k: int, d: int, lam_x, lam_x_bar, lam_y_bar, lam_y) -> bool:
    left = lam_x == lam_x_bar if k == 1 else lam_x < lam_x_bar
    right = lam_y == lam_y_bar if d - k == 1 else lam_y_bar < lam_y
    return left and right and lam_x_bar < 0 < lam_y_bar


def split_geometry(delta: Triangulation, k: int) -> SplitGeometry:
    c, others = _single_split(delta)
    d = len(others)
    if not 1 <= k < d:
        raise BadInput(f"split size k={k} must satisfy 1 <= k < {d}")
    center = delta.vertices[c]
    v_f = delta.points(others[:k])
    v_g = delta.points(others[k:])
    e_f = (center,) + v_f
    e_g = (center,) + v_g
    line = affine_intersection_line(e_f, e_g)
    c_f = face_circumsphere(e_f)
    c_g = face_circumsphere(e_g)
    lam_x = line_sphere_second_root(line, c_f, Fraction(0))
    lam_y = line_sphere_second_root(line, c_g, Fraction(0))
    lam_x_bar = _meet_hull(line, v_f)
    lam_y_bar = _meet_hull(line, v_g)
    if lam_y_bar < 0:
        line = Line(base=line.base, direction=scale(Fraction(-1), line.direction))
        lam_x, lam_y, lam_x_bar, lam_y_bar = -lam_x, -lam_y, -lam_x_bar, -lam_y_bar
    if not _ordering_holds(k, d, lam_x, lam_x_bar, lam_y_bar, lam_y):
        raise VerificationFailed(
            f"points along the split line are out of order: {lam_x}, {lam_x_bar}, 0, {lam_y_bar}, {lam_y}"
        )
    for hull, lam in ((v_f, lam_x_bar), (v_g, lam_y_bar)):
        coords = barycentric_coordinates(hull, line.at(lam))
        if coords is None or any(w < 0 for w in coords):
            raise VerificationFailed("the split line crosses the face outside its convex hull")
    return SplitGeometry(
        k=k,
        c=c,
        vertices=others,
        E_F=e_f,
        E_G=e_g,
        ell=line,
        C_F=c_f,
        C_G=c_g,
        x=line.at(lam_x),
        y=line.at(lam_y),
        x_bar=line.at(lam_x_bar),
        y_bar=line.at(lam_y_bar),
        params=(lam_x, lam_x_bar, lam_y_bar, lam_y),
    )


@dataclass(frozen=True)
class SideCheck:
    facet: Face
    expected: Side
    actual: Side


@dataclass(frozen=True)
class SplitPointReport:
    checks: Tuple[SideCheck, ...]

    @property
    def violations(self) -> Tuple[SideCheck, ...]:
        return tuple(ch for ch in self.checks if ch.actual is not ch.expected)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_split_point_sides(g: SplitGeometry, delta: Triangulation) -> SplitPointReport:
    """x is outside circ(F_i) for i <= k and on circ(F_i) for i > k."""
    checks = []
    for i in range(1, g.d + 1):
        facet = g.facet(i)
        expected = Side.OUTSIDE if i <= g.k else Side.ON
        checks.append(SideCheck(facet, expected, sphere_side(circumsphere(delta.points(facet)), g.x)))
    return SplitPointReport(checks=tuple(checks))


@dataclass(frozen=True)
class NewFacetCheck:
    facet: Face
    missing: int
    case: str
    side: Side


@dataclass(frozen=True)
class NewFacetReport:
    which: int
    checks: Tuple[NewFacetCheck, ...]

    @property
    def ok(self) -> bool:
        return all(ch.side is Side.OUTSIDE for ch in self.checks)

    @property
    def cases(self) -> Tuple[str, ...]:
        return tuple(sorted({ch.case for ch in self.checks}))


def _case_of(g: SplitGeometry, missing: int) -> str:
    if missing == g.c:
        return "I"
    return "II" if g.vertices.index(missing) < g.k else "III"


def verify_new_facets_exclude_split_point(
    delta: Triangulation, g: SplitGeometry, r: Sequence[Fraction], which: int = 1
) -> NewFacetReport:
    """Subdivide F_which at r; x must then be outside every newly created circumsphere.

    Raises HypothesisFailed when the subdivided complex is not Delaunay, since
    the property is only claimed under that hypothesis.
    """
    if not 1 <= which <= g.k:
        raise BadInput(f"facet index {which} must lie in 1..{g.k}")
    source = g.facet(which)
    subdivided = stellar_subdivide(delta, source, r)
    if not check_delaunay(subdivided, DelaunayMode.FACETS_EMPTY).ok:
        raise HypothesisFailed(f"subdividing {source} at {tuple(r)} does not give a Delaunay triangulation")
    new = len(delta.vertices)
    checks = []
    for facet in subdivided.facets_at(new):
        missing = next(v for v in source if v not in facet)
        side = sphere_side(circumsphere(subdivided.points(facet)), g.x)
        checks.append(NewFacetCheck(facet, missing, _case_of(g, missing), side))
    return NewFacetReport(which=which, checks=tuple(checks))


def random_split_instance(rng: np.random.Generator, d: int) -> Triangulation:
    simplex = random_simplex(rng, d - 1)
    base = build_triangulation(d - 1, simplex, [tuple(range(d))])
    return stellar_subdivide(base, base.facets[0], random_interior_point(rng, simplex))


def delaunay_subdivision_point(
    rng: np.random.Generator, delta: Triangulation, g: SplitGeometry, which: int = 1, attempts: int = 32
) -> Point:
    """A point of F_which whose subdivision keeps delta Delaunay.

    Random interior points are tried first; the tangent-line construction of
    the builder is the fallback and always succeeds.
    """
    facet = g.facet(which)
    for _ in range(attempts):
        r = random_interior_point(rng, delta.points(facet))
        if check_delaunay(stellar_subdivide(delta, facet, r), DelaunayMode.FACETS_EMPTY).ok:
            return r
    return expand_at(delta, g.c, [facet]).points[0]


# the planar obstruction

@dataclass(frozen=True)
class TriangleConfig:
    """Triangle ABC split at x, with a, b, c splitting BCx, CAx and ABx."""

    A: Point
    B: Point
    C: Point
    x: Point
    a: Point
    b: Point
    c: Point


@dataclass(frozen=True)
class AngleObstruction:
    failing: Tuple[str, ...]
    opposite_angle_sums: Dict[str, float]
    total_angle: float


def _strictly_within(triangle: Sequence[Point], p: Point) -> bool:
    try:
        coords = barycentric_coordinates(triangle, p)
    except DegenerateSimplex:
        return False
    return coords is not None and all(w > 0 for w in coords)


def _check_type(cfg: TriangleConfig) -> None:
    if len(cfg.A) < 2:
        raise WrongCombinatorialType("the configuration must live in at least two dimensions")
    placements = (
        ("x", (cfg.A, cfg.B, cfg.C), cfg.x),
        ("a", (cfg.B, cfg.C, cfg.x), cfg.a),
        ("b", (cfg.C, cfg.A, cfg.x), cfg.b),
        ("c", (cfg.A, cfg.B, cfg.x), cfg.c),
    )
    for name, triangle, p in placements:
        if not _strictly_within(triangle, p):
            raise WrongCombinatorialType(f"point {name} is not strictly inside its triangle")


def _angle(apex: Point, p: Point, q: Point) -> float:
    u = np.array([float(v) for v in sub(p, apex)])
    w = np.array([float(v) for v in sub(q, apex)])
    cos = np.dot(u, w) / (np.linalg.norm(u) * np.linalg.norm(w))
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))


def angle_obstruction_2d(cfg: TriangleConfig) -> AngleObstruction:
    _check_type(cfg)
    # edge -> (triangle on one side, opposite vertex on the other side)
    tests = {
        "Ax": ((cfg.A, cfg.x, cfg.b), cfg.c),
        "Bx": ((cfg.B, cfg.x, cfg.c), cfg.a),
        "Cx": ((cfg.C, cfg.x, cfg.a), cfg.b),
    }
    failing = tuple(
        edge
        for edge, (triangle, opposite) in tests.items()
        if sphere_side(face_circumsphere(triangle), opposite) is not Side.OUTSIDE
    )
    sums = {
        "Ax": _angle(cfg.b, cfg.A, cfg.x) + _angle(cfg.c, cfg.x, cfg.A),
        "Bx": _angle(cfg.c, cfg.B, cfg.x) + _angle(cfg.a, cfg.x, cfg.B),
        "Cx": _angle(cfg.a, cfg.C, cfg.x) + _angle(cfg.b, cfg.x, cfg.C),
    }
    stars = (
        (cfg.a, (cfg.B, cfg.C, cfg.x)),
        (cfg.b, (cfg.C, cfg.A, cfg.x)),
        (cfg.c, (cfg.A, cfg.B, cfg.x)),
    )
    total = 0.0
    for center, (p, q, s) in stars:
        total += _angle(center, p, q) + _angle(center, q, s) + _angle(center, s, p)
    return AngleObstruction(failing=failing, opposite_angle_sums=sums, total_angle=total)


def obstruction_triangulation(cfg: TriangleConfig) -> Triangulation:
    """Vertices A, B, C, x, a, b, c as indices 0..6, nine triangles."""
    _check_type(cfg)
    if len(cfg.A) != 2:
        raise BadInput("the planar complex needs points in R^2")
    vertices = [cfg.A, cfg.B, cfg.C, cfg.x, cfg.a, cfg.b, cfg.c]
    facets = [
        (1, 2, 4), (2, 3, 4), (3, 1, 4),
        (2, 0, 5), (0, 3, 5), (3, 2, 5),
        (0, 1, 6), (1, 3, 6), (3, 0, 6),
    ]
    return build_triangulation(2, vertices, facets)


# triple subdivisions and the inversion pipeline

@dataclass(frozen=True)
class TripleInstance:
    delta: Triangulation
    points: Tuple[Point, ...]
    triangulation: Triangulation


def triple_subdivision(delta: Triangulation, points: Sequence[Sequence[Fraction]]) -> Triangulation:
    """Subdivide F_1, F_2, ... of a single split at the given points, in order."""
    c, others = _single_split(delta)
    if len(points) > len(others):
        raise BadInput(f"at most {len(others)} facets can be subdivided")
    t = delta
    for i, r in enumerate(points):
        facet = tuple(sorted((c,) + others[:i] + others[i + 1:]))
        t = stellar_subdivide(t, facet, r)
    return t


def _images_inside(delta: Triangulation, points: Sequence[Point]) -> bool:
    g = split_geometry(delta, 3)
    if any(p == g.x for p in delta.vertices + tuple(points)):
        return False
    inverted = [invert_in_sphere(g.x, Fraction(1), p) for p in delta.vertices]
    for i, r in enumerate(points, start=1):
        image = [inverted[v] for v in g.facet(i)]
        if not _strictly_within(image, invert_in_sphere(g.x, Fraction(1), r)):
            return False
    return True


def random_triple_instance(rng: np.random.Generator, d: int, attempts: int = 64) -> TripleInstance:
    """Random simplex split at c with F_1, F_2, F_3 subdivided again.

    For d > 3 the three points are resampled until each one's inverted image
    stays inside the inverted facet; after `attempts` tries the last sample is
    kept and the pipeline reports it as escaped.
    """
    if d < 3:
        raise BadInput(f"three subdivisions need d >= 3, got {d}")
    delta = random_split_instance(rng, d)
    c, others = _single_split(delta)
    facets = [tuple(sorted((c,) + others[:i] + others[i + 1:])) for i in range(3)]
    points: Tuple[Point, ...] = ()
    for _ in range(attempts):
        points = tuple(random_interior_point(rng, delta.points(f)) for f in facets)
        if d == 3 or _images_inside(delta, points):
            break
    return TripleInstance(delta=delta, points=points, triangulation=triple_subdivision(delta, points))


@dataclass(frozen=True)
class SupportDiagnostics:
    sphere: Sphere
    section: Optional[Sphere]
    nearer: int
    projected_outside: Tuple[bool, ...]


@dataclass(frozen=True)
class InversionReduction:
    """status is one of obstructed, escaped, wrong_type or not_coplanar."""

    inverted: Tuple[Point, ...]
    plane: Tuple[Point, Point, Point]
    coplanar: bool
    config: Optional[TriangleConfig]
    weights: Tuple[Tuple[Fraction, Fraction, Fraction], ...]
    status: str
    obstruction: Optional[AngleObstruction] = None
    support: Optional[SupportDiagnostics] = None


def _split_points(t: Triangulation, g: SplitGeometry) -> List[int]:
    """Vertex of t subdividing F_1, F_2, F_3, in that order."""
    found = {}
    for w in range(g.d + 1, len(t.vertices)):
        link = t.link(w)
        for i in range(1, g.d + 1):
            if link == g.facet(i):
                found[i] = w
    if sorted(found) != [1, 2, 3]:
        raise BadInput("expected F_1, F_2 and F_3 each subdivided once")
    return [found[1], found[2], found[3]]


def _support_diagnostics(
    cprime: Point, vprime: Sequence[Point], rprime: Sequence[Point], projected: Sequence[Point]
) -> Optional[SupportDiagnostics]:
    nearer = 0 if norm_sq(sub(rprime[0], cprime)) <= norm_sq(sub(rprime[1], cprime)) else 1
    ridge = [cprime] + list(vprime[2:])
    try:
        sphere = circumsphere(ridge + [rprime[nearer]])
    except DegenerateSimplex:
        return None
    plane = vprime[:3]
    foot = project_onto_affine(plane, sphere.center)
    radius_sq = sphere.radius_sq - norm_sq(sub(sphere.center, foot))
    section = Sphere(center=foot, radius_sq=radius_sq) if radius_sq > 0 else None
    outside = tuple(
        section is not None and sphere_side(section, p) is Side.OUTSIDE for p in projected[:2]
    )
    return SupportDiagnostics(sphere=sphere, section=section, nearer=nearer + 1, projected_outside=outside)


def reduce_by_inversion(t: Triangulation, g: SplitGeometry) -> InversionReduction:
    """Invert at x, project the three split points onto the plane of v'_1, v'_2, v'_3.

    The projection drops the weights of v'_4..v'_d in barycentric coordinates
    over v'_1..v'_d and renormalizes the rest.
    """
    if g.d <= 3 or g.k != 3:
        raise BadInput("the inversion pipeline needs d > 3 and a split with k = 3")
    rs = _split_points(t, g)
    if any(p == g.x for p in t.vertices):
        raise InversionCenterHit(f"a vertex coincides with the inversion center {g.x}")
    inverted = tuple(invert_in_sphere(g.x, Fraction(1), p) for p in t.vertices)
    cprime = inverted[g.c]
    vprime = [inverted[v] for v in g.vertices]
    rprime = [inverted[w] for w in rs]
    plane = (vprime[0], vprime[1], vprime[2])
    coplanar = rank([sub(p, plane[0]) for p in (plane[1], plane[2], cprime)]) == 2
    if not coplanar:
        return InversionReduction(inverted, plane, False, None, (), "not_coplanar")

    escaped = any(
        not _strictly_within([inverted[v] for v in g.facet(i)], r) for i, r in enumerate(rprime, start=1)
    )
    weights = []
    projected = []
    for r in rprime:
        coords = barycentric_coordinates(vprime, r)
        head = sum(coords[:3], Fraction(0))
        if head == 0:
            escaped = True
            continue
        triple = tuple(w / head for w in coords[:3])
        weights.append(triple)
        point = scale(triple[0], plane[0])
        point = add(point, scale(triple[1], plane[1]))
        point = add(point, scale(triple[2], plane[2]))
        projected.append(point)
    if escaped:
        return InversionReduction(inverted, plane, True, None, tuple(weights), "escaped")

    config = TriangleConfig(A=plane[0], B=plane[1], C=plane[2], x=cprime, a=projected[0], b=projected[1], c=projected[2])
    support = _support_diagnostics(cprime, vprime, rprime, projected)
    try:
        obstruction = angle_obstruction_2d(config)
    except WrongCombinatorialType:
        return InversionReduction(inverted, plane, True, config, tuple(weights), "wrong_type", support=support)
    return InversionReduction(inverted, plane, True, config, tuple(weights), "obstructed", obstruction, support)


# sweeps

# draws allowed per requested trial before a sweep gives up on filling its quota
DRAWS_PER_TRIAL = 10


@dataclass(frozen=True)
class TrialResult:
    index: int
    failing_ridges: Tuple[Face, ...]
    failing_edges: Tuple[str, ...]
    status: str
    angle_total: Optional[float] = None

    @property
    def ridge_violations(self) -> int:
        return len(self.failing_ridges)


@dataclass(frozen=True)
class SweepReport:
    """Counted trials plus the escaped draws that were set aside and resampled."""

    d: int
    seed: int
    requested: int
    trials: Tuple[TrialResult, ...]
    resampled: Tuple[TrialResult, ...] = ()

    @property
    def all_violated(self) -> bool:
        return all(trial.ridge_violations > 0 for trial in self.trials)

    @property
    def certified(self) -> bool:
        """Quota filled, and every counted trial has both a bad ridge and a planar obstruction."""
        return (
            len(self.trials) == self.requested
            and self.all_violated
            and all(trial.status == "obstructed" for trial in self.trials)
        )

    def status_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for trial in self.trials:
            counts[trial.status] = counts.get(trial.status, 0) + 1
        return counts


def _direct_config(instance: TripleInstance) -> TriangleConfig:
    c, others = _single_split(instance.delta)
    v = instance.delta.points(others)
    r = instance.points
    return TriangleConfig(A=v[0], B=v[1], C=v[2], x=instance.delta.vertices[c], a=r[0], b=r[1], c=r[2])


def run_obstruction_trial(d: int, seed: int, index: int) -> TrialResult:
    rng = instance_generator(seed, index)
    instance = random_triple_instance(rng, d)
    ridge_report = check_delaunay(instance.triangulation, DelaunayMode.INTERIOR_RIDGES_LOCAL)
    ridges = tuple(face for face, _ in ridge_report.violations)
    if d == 3:
        obstruction = angle_obstruction_2d(_direct_config(instance))
        status = "obstructed" if obstruction.failing else "unobstructed"
        return TrialResult(index, ridges, obstruction.failing, status, obstruction.total_angle)
    try:
        reduction = reduce_by_inversion(instance.triangulation, split_geometry(instance.delta, 3))
    except InscriberError as exc:
        logger.warning("trial %d: pipeline failed: %s", index, exc)
        return TrialResult(index, ridges, (), "error")
    obstruction = reduction.obstruction
    return TrialResult(
        index,
        ridges,
        obstruction.failing if obstruction else (),
        reduction.status,
        obstruction.total_angle if obstruction else None,
    )


def obstruction_sweep(
    d: int, trials: int, seed: int = 0, workers: int = 1, max_draws: Optional[int] = None
) -> SweepReport:
    """Seeded random triple subdivisions; draw i uses its own spawned generator.

    Draws whose inverted points escape the reduced simplex do not meet the
    pipeline's precondition. They are set aside and further draws are taken
    until `trials` draws have been counted or `max_draws` (default
    DRAWS_PER_TRIAL * trials) is spent. Batches depend only on counts, so the
    report does not depend on `workers`.
    """
    if d < 3 or trials < 0:
        raise BadInput(f"sweep needs d >= 3 and a non-negative trial count, got d={d}, trials={trials}")
    limit = DRAWS_PER_TRIAL * trials if max_draws is None else max_draws
    trial = partial(run_obstruction_trial, d, seed)
    counted: List[TrialResult] = []
    resampled: List[TrialResult] = []
    drawn = 0
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while len(counted) < trials and drawn < limit:
            batch = range(drawn, min(limit, drawn + trials - len(counted)))
            drawn = batch.stop
            results = pool.map(trial, batch) if pool else map(trial, batch)
            for result in results:
                (resampled if result.status == "escaped" else counted).append(result)
    finally:
        if pool:
            pool.shutdown()
    report = SweepReport(d=d, seed=seed, requested=trials, trials=tuple(counted), resampled=tuple(resampled))
    logger.info(
        "obstruction sweep d=%d: %d trials from %d draws, %s", d, len(counted), drawn, report.status_counts()
    )
    return report


def sweep_frame(report: SweepReport) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "trial": t.index,
                "ridge_violations": t.ridge_violations,
                "failing_ridges": ";".join("-".join(str(v) for v in ridge) for ridge in t.failing_ridges),
                "failing_edges": ",".join(t.failing_edges),
                "status": t.status,
                "angle_total": t.angle_total,
            }
            for t in report.trials
        ]
    )
