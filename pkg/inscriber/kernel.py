"""Exact rational geometry kernel.

Every coordinate is a ``fractions.Fraction``; no square root is ever taken,
so spheres carry squared radii. Elimination pivots on the first nonzero entry
in row order, which keeps every result reproducible.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple

from inscriber.errors import (
    CenterInversion,
    DegeneratePointSet,
    DegenerateSimplex,
    DimensionMismatch,
    EmptyIntersection,
    InexactScalar,
    NorthPole,
    NotOnSphere,
)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]
Matrix = List[List[Fraction]]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value) -> Fraction:
    """Convert int/Fraction/'p/q' input to Fraction; floats are refused."""
    if isinstance(value, bool):
        raise InexactScalar(f"expected a rational number, got bool {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise InexactScalar(f"expected an exact rational like '3/7', got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InexactScalar(f"expected an exact rational like '3/7', got {value!r}") from None
    raise InexactScalar(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def as_point(coords: Iterable) -> Point:
    return tuple(as_scalar(c) for c in coords)


def sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Point:
    _same_dim(p, q)
    return tuple(a - b for a, b in zip(p, q))


def add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Point:
    _same_dim(p, q)
    return tuple(a + b for a, b in zip(p, q))


def scale(factor: Fraction, p: Sequence[Fraction]) -> Point:
    return tuple(factor * a for a in p)


def dot(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    _same_dim(p, q)
    return sum((a * b for a, b in zip(p, q)), ZERO)


def norm_sq(p: Sequence[Fraction]) -> Fraction:
    return sum((a * a for a in p), ZERO)


def centroid(points: Sequence[Sequence[Fraction]]) -> Point:
    _common_dim(points)
    n = len(points)
    return tuple(sum(coords, ZERO) / n for coords in zip(*points))


def _same_dim(p: Sequence, q: Sequence) -> None:
    if len(p) != len(q):
        raise DimensionMismatch(f"points of dimension {len(p)} and {len(q)} cannot be combined")


def _common_dim(points: Sequence[Sequence]) -> int:
    if not points:
        raise DimensionMismatch("empty point sequence")
    dim = len(points[0])
    for p in points:
        if len(p) != dim:
            raise DimensionMismatch(f"mixed dimensions {dim} and {len(p)}")
    return dim


# linear algebra

def row_reduce(rows: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form plus the pivot columns, first-nonzero pivoting."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    nrows, ncols = len(a), len(a[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = ONE / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return a, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_reduce(rows)[1])


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in matrix]
    n = len(a)
    det = ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] / a[col][col]
                a[i] = [vi - f * vc for vi, vc in zip(a[i], a[col])]
    return det


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[Point]:
    """Kernel basis, one vector per free column in ascending column order."""
    if not rows:
        return [tuple(ONE if i == j else ZERO for i in range(ncols)) for j in range(ncols)]
    reduced, pivots = row_reduce(rows)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [ZERO] * ncols
        v[free] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][free]
        basis.append(tuple(v))
    return basis


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[Point]:
    """One exact solution of matrix·x = rhs (free variables set to 0), or None."""
    ncols = len(matrix[0])
    augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = row_reduce(augmented)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i][ncols]
    return tuple(x)


def strictly_feasible(rows: Sequence[Tuple[Sequence[Fraction], Fraction]]) -> bool:
    """Decide whether {t : a·t > b for every (a, b)} is nonempty.

    Exact Fourier–Motzkin elimination; strict inequalities stay strict under
    positive combinations, so the projection is exact.
    """
    current = {(tuple(a), Fraction(b)) for a, b in rows}
    nvars = len(next(iter(current))[0]) if current else 0
    for j in reversed(range(nvars)):
        pos, neg, nxt = [], [], set()
        for a, b in current:
            if a[j] > 0:
                pos.append((a, b))
            elif a[j] < 0:
                neg.append((a, b))
            else:
                nxt.add((a[:j], b))
        for ap, bp in pos:
            for an, bn in neg:
                sp, sn = ONE / ap[j], ONE / -an[j]
                coeffs = tuple(sp * x + sn * y for x, y in zip(ap[:j], an[:j]))
                nxt.add((coeffs, sp * bp + sn * bn))
        current = nxt
    return all(b < 0 for _, b in current)


# types

class Side(Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


class HyperSide(Enum):
    NEGATIVE = "negative"
    ON = "on"
    POSITIVE = "positive"


@dataclass(frozen=True)
class Sphere:
    center: Point
    radius_sq: Fraction

    def __post_init__(self):
        if self.radius_sq < 0:
            raise ValueError("radius_sq must be non-negative")


@dataclass(frozen=True)
class Hyperplane:
    normal: Point
    offset: Fraction

    def __post_init__(self):
        if all(v == 0 for v in self.normal):
            raise ValueError("hyperplane normal must be nonzero")


@dataclass(frozen=True)
class Line:
    base: Point
    direction: Point

    def __post_init__(self):
        _same_dim(self.base, self.direction)
        if all(v == 0 for v in self.direction):
            raise ValueError("line direction must be nonzero")

    def at(self, lam: Fraction) -> Point:
        return tuple(b + lam * u for b, u in zip(self.base, self.direction))


def unit_sphere(dim: int) -> Sphere:
    return Sphere(center=(ZERO,) * dim, radius_sq=ONE)


def north_pole(dim: int) -> Point:
    return (ZERO,) * (dim - 1) + (ONE,)


# predicates

def orientation(simplex: Sequence[Sequence[Fraction]]) -> int:
    dim = _common_dim(simplex)
    if len(simplex) != dim + 1:
        raise DimensionMismatch(f"orientation needs {dim + 1} points in R^{dim}, got {len(simplex)}")
    p0 = simplex[0]
    det = determinant([sub(p, p0) for p in simplex[1:]])
    return (det > 0) - (det < 0)


def circumsphere(simplex: Sequence[Sequence[Fraction]]) -> Sphere:
    return _circumsphere(tuple(tuple(p) for p in simplex))


@lru_cache(maxsize=1 << 16)
def _circumsphere(simplex: Tuple[Point, ...]) -> Sphere:
    if orientation(simplex) == 0:
        raise DegenerateSimplex("circumsphere of an affinely dependent simplex")
    p0 = simplex[0]
    n0 = norm_sq(p0)
    matrix = [[2 * v for v in sub(p, p0)] for p in simplex[1:]]
    rhs = [norm_sq(p) - n0 for p in simplex[1:]]
    center = solve(matrix, rhs)
    sphere = Sphere(center=center, radius_sq=norm_sq(sub(p0, center)))
    assert all(sphere_side(sphere, p) is Side.ON for p in simplex)
    return sphere


def face_circumsphere(points: Sequence[Sequence[Fraction]]) -> Sphere:
    """Smallest sphere through affinely independent points; center in their affine hull."""
    _common_dim(points)
    p0 = tuple(points[0])
    edges = [sub(p, p0) for p in points[1:]]
    if not edges:
        return Sphere(center=p0, radius_sq=ZERO)
    gram = [[dot(e, f) for f in edges] for e in edges]
    if rank(gram) != len(edges):
        raise DegenerateSimplex("face circumsphere of affinely dependent points")
    coeffs = solve(gram, [dot(e, e) / 2 for e in edges])
    center = p0
    for a, e in zip(coeffs, edges):
        center = add(center, scale(a, e))
    return Sphere(center=center, radius_sq=norm_sq(sub(p0, center)))


def sphere_side(s: Sphere, p: Sequence[Fraction]) -> Side:
    dist = norm_sq(sub(p, s.center))
    if dist < s.radius_sq:
        return Side.INSIDE
    if dist == s.radius_sq:
        return Side.ON
    return Side.OUTSIDE


def insphere_determinant_side(simplex: Sequence[Sequence[Fraction]], p: Sequence[Fraction]) -> Side:
    """Lifted-determinant in-sphere test; needs no circumcenter. The local ridge check uses it."""
    dim = _common_dim(list(simplex) + [p])
    orient = orientation(simplex)
    if orient == 0:
        raise DegenerateSimplex("in-sphere test against an affinely dependent simplex")
    rows = []
    for q in simplex:
        diff = sub(q, p)
        rows.append(list(diff) + [norm_sq(diff)])
    value = determinant(rows) * orient * (-1) ** dim
    if value > 0:
        return Side.INSIDE
    if value == 0:
        return Side.ON
    return Side.OUTSIDE


def hyperplane_side(h: Hyperplane, p: Sequence[Fraction]) -> HyperSide:
    value = dot(h.normal, p) - h.offset
    if value > 0:
        return HyperSide.POSITIVE
    if value == 0:
        return HyperSide.ON
    return HyperSide.NEGATIVE


def hyperplane_through(points: Sequence[Sequence[Fraction]]) -> Hyperplane:
    dim = _common_dim(points)
    if len(points) != dim:
        raise DimensionMismatch(f"a hyperplane in R^{dim} needs {dim} points, got {len(points)}")
    p0 = points[0]
    kernel = nullspace([sub(p, p0) for p in points[1:]], dim)
    if len(kernel) != 1:
        raise DegenerateSimplex("points do not span a hyperplane")
    normal = kernel[0]
    return Hyperplane(normal=normal, offset=dot(normal, p0))


def hull_facets(points: Sequence[Sequence[Fraction]]) -> List[Tuple[int, ...]]:
    """Facets of conv(points) by exhaustive dim-subset testing (simplicial hulls only)."""
    dim = _common_dim(points)
    facets = []
    for subset in combinations(range(len(points)), dim):
        try:
            plane = hyperplane_through([points[i] for i in subset])
        except DegenerateSimplex:
            continue
        sides = {hyperplane_side(plane, points[j]) for j in range(len(points)) if j not in subset}
        if HyperSide.POSITIVE in sides and HyperSide.NEGATIVE in sides:
            continue
        if HyperSide.ON in sides:
            raise DegeneratePointSet(f"{dim + 1} or more points on the supporting hyperplane of {subset}")
        facets.append(subset)
    return facets


def barycentric_coordinates(simplex: Sequence[Sequence[Fraction]], p: Sequence[Fraction]) -> Optional[Point]:
    """Affine coordinates of p with respect to the simplex, None if p is off its affine hull."""
    _common_dim(list(simplex) + [p])
    p0 = simplex[0]
    edges = [sub(q, p0) for q in simplex[1:]]
    if edges and rank(edges) != len(edges):
        raise DegenerateSimplex("barycentric coordinates need affinely independent points")
    target = sub(p, p0)
    if not edges:
        return (ONE,) if all(v == 0 for v in target) else None
    matrix = [[e[r] for e in edges] for r in range(len(p0))]
    coeffs = solve(matrix, list(target))
    if coeffs is None:
        return None
    return (ONE - sum(coeffs, ZERO),) + coeffs


def project_onto_affine(points: Sequence[Sequence[Fraction]], q: Sequence[Fraction]) -> Point:
    p0 = tuple(points[0])
    edges = [sub(p, p0) for p in points[1:]]
    if not edges:
        return p0
    gram = [[dot(e, f) for f in edges] for e in edges]
    coeffs = solve(gram, [dot(e, sub(q, p0)) for e in edges])
    result = p0
    for a, e in zip(coeffs, edges):
        result = add(result, scale(a, e))
    return result


# maps

def invert_in_sphere(center: Sequence[Fraction], radius_sq: Fraction, p: Sequence[Fraction]) -> Point:
    diff = sub(p, center)
    dist = norm_sq(diff)
    if dist == 0:
        raise CenterInversion("the inversion center has no finite image")
    return add(center, scale(radius_sq / dist, diff))


def stereographic_project(p: Sequence[Fraction]) -> Point:
    if norm_sq(p) != 1:
        raise NotOnSphere(f"point {tuple(p)} is not on the unit sphere")
    last = p[-1]
    if last == 1:
        raise NorthPole("the north pole has no stereographic image")
    return tuple(v / (1 - last) for v in p[:-1])


def inverse_stereographic(q: Sequence[Fraction]) -> Point:
    s = norm_sq(q)
    return tuple(2 * v / (s + 1) for v in q) + ((s - 1) / (s + 1),)


def line_sphere_second_root(l: Line, s: Sphere, known: Fraction) -> Fraction:
    offset = sub(l.base, s.center)
    a = norm_sq(l.direction)
    b = 2 * dot(l.direction, offset)
    c = norm_sq(offset) - s.radius_sq
    if a * known * known + b * known + c != 0:
        raise NotOnSphere(f"line parameter {known} is not on the sphere")
    return -b / a - known


def affine_intersection_line(span_a: Sequence[Sequence[Fraction]], span_b: Sequence[Sequence[Fraction]]) -> Line:
    base = tuple(span_a[0])
    if tuple(span_b[0]) != base:
        raise EmptyIntersection("both spans must start with their common point")
    dirs_a = [sub(p, base) for p in span_a[1:]]
    dirs_b = [sub(p, base) for p in span_b[1:]]
    dim = len(base)
    rows = [[u[r] for u in dirs_a] + [-w[r] for w in dirs_b] for r in range(dim)]
    for vector in nullspace(rows, len(dirs_a) + len(dirs_b)):
        direction = (ZERO,) * dim
        for alpha, u in zip(vector, dirs_a):
            direction = add(direction, scale(alpha, u))
        if any(v != 0 for v in direction):
            return Line(base=base, direction=direction)
    raise EmptyIntersection("direction spaces meet only in the origin")
