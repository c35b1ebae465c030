"""Inscribed cyclic polytopes and f-vectors of inscribable 3-polytopes."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Set, Tuple

import pandas as pd

from inscriber.builder import InscribedPolytope
from inscriber.complex import DelaunayMode, Face, Triangulation, build_triangulation, check_delaunay
from inscriber.config import DEFAULT_GROWTH_CAP
from inscriber.errors import (
    BadParameters,
    GrowthCapExceeded,
    NonDistinctParams,
    NotOnSphere,
    OddDimension,
    VerificationFailed,
)
from inscriber.kernel import (
    HyperSide,
    Point,
    Side,
    Sphere,
    as_scalar,
    circumsphere,
    hull_facets,
    hyperplane_side,
    hyperplane_through,
    inverse_stereographic,
    north_pole,
    norm_sq,
    sphere_side,
    sub,
)

logger = logging.getLogger(__name__)


# cyclic polytopes

def _check_cyclic_size(d: int, n: int) -> None:
    if d < 2 or n < d + 1:
        raise BadParameters(f"cyclic polytope needs n >= d + 1 >= 3, got d={d}, n={n}")


def gale_evenness_facets(d: int, n: int) -> Set[Tuple[int, ...]]:
    """d-subsets S of 1..n where every two non-members enclose an even number of members."""
    _check_cyclic_size(d, n)
    facets = set()
    for subset in combinations(range(1, n + 1), d):
        members = set(subset)
        outside = [i for i in range(1, n + 1) if i not in members]
        if all(sum(1 for s in subset if a < s < b) % 2 == 0 for a, b in combinations(outside, 2)):
            facets.add(subset)
    return facets


def cyclic_facet_count(d: int, n: int) -> int:
    _check_cyclic_size(d, n)
    half = d // 2
    if d % 2 == 0:
        return n * comb(n - half, half) // (n - half)
    return 2 * comb(n - half - 1, half)


def _labels(facets, order: Sequence[int]) -> Set[Tuple[int, ...]]:
    """Relabel vertex indices by their 1-based position in order."""
    rank = {v: i + 1 for i, v in enumerate(order)}
    return {tuple(sorted(rank[v] for v in f)) for f in facets}


def _require_gale(facets, order: Sequence[int], d: int) -> None:
    expected = gale_evenness_facets(d, len(order))
    found = _labels(facets, order)
    if found != expected:
        missing = sorted(expected - found)[:3]
        extra = sorted(found - expected)[:3]
        raise VerificationFailed(f"facets differ from Gale evenness (missing {missing}, extra {extra})")


def moment_point(t: Fraction, m: int) -> Point:
    return tuple(t ** j for j in range(1, m + 1))


def _visible_ridges(tri: Triangulation, p: Point) -> List[Face]:
    visible = []
    for ridge in tri.boundary_ridges():
        (owner,) = tri.ridges[ridge]
        apex = next(v for v in owner if v not in ridge)
        plane = hyperplane_through(tri.points(ridge))
        inner = hyperplane_side(plane, tri.vertices[apex])
        side = hyperplane_side(plane, p)
        if side is not HyperSide.ON and side is not inner:
            visible.append(ridge)
    return visible


def cyclic_standard(
    d: int, n: int, *, growth_cap: int = DEFAULT_GROWTH_CAP
) -> Tuple[InscribedPolytope, Tuple[Fraction, ...]]:
    """Moment-curve points at fast-growing parameters, lifted to the sphere.

    The first d parameters are 0..d-1. Each later parameter moves past its
    predecessor by a gap that doubles until the point sees no circumsphere
    from inside and joining it to the visible boundary stays Delaunay.
    """
    if d < 3:
        raise BadParameters(f"the standard moment curve needs d >= 3, got {d}")
    _check_cyclic_size(d, n)
    m = d - 1
    params = [Fraction(i) for i in range(d)]
    tri = build_triangulation(m, [moment_point(t, m) for t in params], [tuple(range(d))])
    while len(params) < n - 1:
        gap = Fraction(1)
        for _ in range(growth_cap):
            t = params[-1] + gap
            p = moment_point(t, m)
            if all(sphere_side(circumsphere(tri.points(f)), p) is Side.OUTSIDE for f in tri.facets):
                new = len(tri.vertices)
                facets = list(tri.facets) + [r + (new,) for r in _visible_ridges(tri, p)]
                grown = build_triangulation(m, tri.vertices + (p,), facets, check_support=False)
                if check_delaunay(grown, DelaunayMode.FACETS_EMPTY).ok:
                    break
            gap *= 2
        else:
            raise GrowthCapExceeded(f"no admissible parameter after {growth_cap} doublings at vertex {len(params) + 1}")
        logger.debug("moment curve vertex %d at t=%s", len(params) + 1, t)
        params.append(t)
        tri = grown

    north = len(tri.vertices)
    vertices = tuple(inverse_stereographic(v) for v in tri.vertices) + (north_pole(d),)
    facets = sorted(list(tri.facets) + [r + (north,) for r in tri.boundary_ridges()])
    _require_gale(facets, range(n), d)
    polytope = InscribedPolytope(d=d, vertices=vertices, facets=tuple(facets), north=north)
    return polytope, tuple(params)


def _check_params(params: Sequence, n: int) -> Tuple[Fraction, ...]:
    values = tuple(as_scalar(p) for p in params)
    if len(values) != n:
        raise BadParameters(f"expected {n} parameters, got {len(values)}")
    if len(set(values)) != len(values):
        raise NonDistinctParams(f"parameters {values} are not distinct")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise BadParameters("parameters must be strictly increasing")
    return values


def spherical_curve_point(t: Fraction, d: int) -> Point:
    """c(t) = (1, t, ..., t^(d-1)) / (1 + t^2 + ... + t^(2(d-1)))."""
    powers = [t ** j for j in range(d)]
    total = sum(p * p for p in powers)
    return tuple(p / total for p in powers)


def cyclic_spherical(d: int, n: int, params: Optional[Sequence] = None) -> InscribedPolytope:
    _check_cyclic_size(d, n)
    values = _check_params(params if params is not None else range(1, n + 1), n)
    if values[0] <= 0:
        raise BadParameters("parameters must be positive")
    half = (Fraction(1, 2),) + (Fraction(0),) * (d - 1)
    vertices = []
    for t in values:
        v = spherical_curve_point(t, d)
        if norm_sq(sub(v, half)) != Fraction(1, 4):
            raise NotOnSphere(f"curve point at t={t} misses the sphere around e1/2")
        vertices.append(tuple(2 * a for a in sub(v, half)))
    facets = sorted(hull_facets(vertices))
    _require_gale(facets, range(n), d)
    return InscribedPolytope(d=d, vertices=tuple(vertices), facets=tuple(facets))


def _half_tangent_powers(s: Fraction, count: int) -> List[Tuple[Fraction, Fraction]]:
    """(cos jt, sin jt) for j = 1..count where tan(t/2) = s, by complex multiplication."""
    denom = 1 + s * s
    cos1, sin1 = (1 - s * s) / denom, 2 * s / denom
    powers = [(cos1, sin1)]
    for _ in range(count - 1):
        c, sn = powers[-1]
        powers.append((c * cos1 - sn * sin1, sn * cos1 + c * sin1))
    return powers


def trig_curve_point(s: Fraction, d: int) -> Point:
    coords: List[Fraction] = []
    for cos_j, sin_j in _half_tangent_powers(s, d // 2):
        coords.extend((sin_j, cos_j))
    return tuple(coords)


def cyclic_trig(d: int, n: int, half_tangents: Optional[Sequence] = None) -> InscribedPolytope:
    if d % 2:
        raise OddDimension(f"the trigonometric moment curve needs even d, got {d}; use cyclic_spherical")
    if d < 4:
        raise BadParameters(f"the trigonometric curve is used for d >= 4, got {d}")
    _check_cyclic_size(d, n)
    if half_tangents is None:
        half_tangents = [Fraction(2 * i - n + 1, 2) for i in range(n)]
    values = _check_params(half_tangents, n)
    radius_sq = Fraction(d, 2)
    vertices = tuple(trig_curve_point(s, d) for s in values)
    for s, v in zip(values, vertices):
        if norm_sq(v) != radius_sq:
            raise NotOnSphere(f"trigonometric point at s={s} has squared norm {norm_sq(v)}")
    facets = sorted(hull_facets(vertices))
    _require_gale(facets, range(n), d)
    sphere = Sphere(center=(Fraction(0),) * d, radius_sq=radius_sq)
    return InscribedPolytope(d=d, vertices=vertices, facets=tuple(facets), sphere=sphere)


# f-vectors of 3-polytopes

@dataclass(frozen=True, order=True)
class FVector3:
    f0: int
    f1: int
    f2: int

    def __post_init__(self):
        if min(self.f0, self.f1, self.f2) <= 0:
            raise BadParameters(f"f-vector entries must be positive: {self}")
        if self.f1 != self.f0 + self.f2 - 2:
            raise BadParameters(f"{self} violates f1 = f0 + f2 - 2")

    @classmethod
    def from_vertices_facets(cls, f0: int, f2: int) -> "FVector3":
        return cls(f0, f0 + f2 - 2, f2)


FAMILIES = ("left", "middle", "right")


def _family_vector(family: str, n: int, k: int) -> FVector3:
    if family == "left":
        return FVector3(2 * n - 2 + k, 3 * n - 3 + 3 * k, n + 1 + 2 * k)
    if family == "middle":
        return FVector3(2 * n - 1 + k, 3 * n - 1 + 3 * k, n + 2 + 2 * k)
    return FVector3(2 * n + k, 3 * n + 1 + 3 * k, n + 3 + 2 * k)


def fvector_families(f0_max: int) -> Dict[FVector3, Tuple[str, ...]]:
    """Stacked wedges over n-gons, keyed by f-vector with the families producing it."""
    if f0_max < 4:
        raise BadParameters(f"f0_max must be at least 4, got {f0_max}")
    found: Dict[FVector3, Set[str]] = {}
    for family in FAMILIES:
        n = 3
        while _family_vector(family, n, 0).f0 <= f0_max:
            k = 0
            while True:
                vector = _family_vector(family, n, k)
                if vector.f0 > f0_max:
                    break
                found.setdefault(vector, set()).add(family)
                k += 1
            n += 1
    return {v: tuple(f for f in FAMILIES if f in tags) for v, tags in sorted(found.items())}


def steinitz_member(f0: int, f2: int) -> bool:
    return f0 >= 4 and f2 >= 4 and f2 <= 2 * f0 - 4 and f0 <= 2 * f2 - 4


def steinitz_set(f0_max: int) -> Set[FVector3]:
    return {
        FVector3.from_vertices_facets(f0, f2)
        for f0 in range(4, f0_max + 1)
        for f2 in range(4, 2 * f0 - 3)
        if steinitz_member(f0, f2)
    }


def fvector_table(f0_max: int) -> pd.DataFrame:
    rows = [
        {"f0": v.f0, "f1": v.f1, "f2": v.f2, "family": "+".join(tags)}
        for v, tags in fvector_families(f0_max).items()
    ]
    return pd.DataFrame(rows, columns=["f0", "f1", "f2", "family"])
