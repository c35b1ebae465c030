from fractions import Fraction as F

import pytest

from inscriber.complex import (
    DelaunayMode,
    brute_force_delaunay,
    build_triangulation,
    check_delaunay,
    covers_convex_hull,
    is_interior_vertex,
    stellar_subdivide,
    undo_stellar,
    vertex_degree,
)
from inscriber.errors import (
    DanglingVertex,
    DegenerateFacet,
    DegeneratePointSet,
    DimensionMismatch,
    NonManifoldRidge,
    NotInterior,
    NotSimpleInterior,
    UnknownFacet,
)
from inscriber.sampling import instance_generator, random_interior_point, random_point_set

SQUARE = [(0, 0), (3, 0), (3, 1), (0, 4)]
ALL_MODES = list(DelaunayMode)


def test_build_triangulation_sorts_facets(triangle):
    t = build_triangulation(2, SQUARE, [(3, 1, 0), (2, 3, 1)])
    assert t.facets == ((0, 1, 3), (1, 2, 3))
    assert t.interior_ridges() == [(1, 3)]
    assert len(t.boundary_ridges()) == 4
    assert triangle.link(0) == (1, 2)


@pytest.mark.parametrize(
    "vertices, facets, error",
    [
        ([(0, 0), (1, 0), (0, 1)], [(0, 1)], DegenerateFacet),
        ([(0, 0), (1, 0), (2, 0)], [(0, 1, 2)], DegenerateFacet),
        ([(0, 0), (1, 0), (0, 1)], [(0, 1, 2), (2, 1, 0)], DegenerateFacet),
        ([(0, 0), (1, 0), (0, 1), (5, 5)], [(0, 1, 2)], DanglingVertex),
        ([(0, 0), (1, 0), (0, 1, 0)], [(0, 1, 2)], DimensionMismatch),
        ([(0, 0), (1, 0), (0, 1), (0, -1), (1, 1)], [(0, 1, 2), (0, 1, 3), (0, 1, 4)], NonManifoldRidge),
    ],
)
def test_build_triangulation_rejects(vertices, facets, error):
    with pytest.raises(error):
        build_triangulation(2, vertices, facets)


def test_check_support_rejects_overlap():
    vertices = [(0, 0), (4, 0), (0, 4), (1, 1)]
    # (0,1,2) already covers the hull; (1,2,3) folds back over it
    with pytest.raises(DegenerateFacet):
        build_triangulation(2, vertices, [(0, 1, 2), (1, 2, 3)])


def test_disjoint_overlapping_triangles_are_rejected():
    vertices = [(0, 0), (4, 0), (0, 4), (1, 1), (5, 1), (1, 5)]
    with pytest.raises(DegenerateFacet):
        build_triangulation(2, vertices, [(0, 1, 2), (3, 4, 5)])


def test_complex_with_a_gap_is_rejected():
    vertices = [(0, 0), (4, 0), (4, 4), (0, 4), (2, 1)]
    with pytest.raises(DegenerateFacet):
        build_triangulation(2, vertices, [(0, 1, 4), (1, 2, 4), (2, 3, 4)])
    assert covers_convex_hull(build_triangulation(2, vertices, [(0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)]))


def test_collinear_boundary_vertices_are_fine():
    t = build_triangulation(2, [(0, 0), (1, 0), (2, 0), (1, 2)], [(0, 1, 3), (1, 2, 3)])
    assert covers_convex_hull(t)


def test_support_check_can_be_skipped():
    vertices = [(0, 0), (4, 0), (0, 4), (1, 1)]
    t = build_triangulation(2, vertices, [(0, 1, 2), (1, 2, 3)], check_support=False)
    assert not covers_convex_hull(t)


def test_stellar_subdivision(triangle, subdivided_triangle):
    t = subdivided_triangle
    assert len(t.vertices) == 4
    assert t.vertices[3] == (F(1, 3), F(1, 3))
    assert t.facets == ((0, 1, 3), (0, 2, 3), (1, 2, 3))
    assert vertex_degree(t, 3) == 3
    assert is_interior_vertex(t, 3)
    assert not is_interior_vertex(t, 0)
    assert covers_convex_hull(t)
    assert undo_stellar(t, 3) == triangle


def test_stellar_subdivision_rejects(triangle):
    with pytest.raises(NotInterior):
        stellar_subdivide(triangle, (0, 1, 2), (F(1, 2), 0))
    with pytest.raises(UnknownFacet):
        stellar_subdivide(triangle, (0, 1, 3), (F(1, 4), F(1, 4)))
    with pytest.raises(DimensionMismatch):
        stellar_subdivide(triangle, (0, 1, 2), (F(1, 4), F(1, 4), 0))


def test_undo_stellar_requires_simple_interior_vertex(subdivided_triangle):
    with pytest.raises(NotSimpleInterior):
        undo_stellar(subdivided_triangle, 0)
    square = build_triangulation(2, SQUARE, [(0, 1, 2), (0, 2, 3)])
    with pytest.raises(NotSimpleInterior):
        undo_stellar(square, 2)


def test_undo_stellar_after_random_subdivisions(rng):
    t = build_triangulation(3, [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])
    history = [t]
    for _ in range(6):
        facet = t.facets[int(rng.integers(len(t.facets)))]
        t = stellar_subdivide(t, facet, random_interior_point(rng, t.points(facet)))
        history.append(t)
    for v in range(len(t.vertices) - 1, 3, -1):
        t = undo_stellar(t, v)
        assert t == history[v - 4]


def test_square_with_bad_diagonal():
    t = build_triangulation(2, SQUARE, [(0, 1, 3), (1, 2, 3)])
    local = check_delaunay(t, DelaunayMode.INTERIOR_RIDGES_LOCAL)
    assert local.violations == (((1, 3), 2),)
    assert check_delaunay(t, 1).violations == (((0, 1, 3), 2), ((1, 2, 3), 0))
    assert not check_delaunay(t, "ridges-supported").ok
    assert not check_delaunay(t, "all_faces_supported").ok


def test_square_with_good_diagonal():
    t = build_triangulation(2, SQUARE, [(0, 1, 2), (0, 2, 3)])
    for mode in ALL_MODES:
        assert check_delaunay(t, mode).ok, mode


def test_brute_force_square():
    assert brute_force_delaunay(SQUARE).facets == ((0, 1, 2), (0, 2, 3))


@pytest.mark.parametrize(
    "points",
    [
        [(0, 0), (1, 0), (0, 1), (1, 1)],
        [(0, 0), (1, 1), (2, 2)],
        [],
    ],
)
def test_brute_force_degenerate_input(points):
    with pytest.raises(DegeneratePointSet):
        brute_force_delaunay(points)


def test_delaunay_modes_agree_on_random_point_sets():
    checked = 0
    for i in range(12):
        rng = instance_generator(7, i)
        dim, n = (2, 7) if i % 2 == 0 else (3, 6)
        try:
            t = brute_force_delaunay(random_point_set(rng, dim, n))
        except DegeneratePointSet:
            continue
        for mode in ALL_MODES:
            assert check_delaunay(t, mode).ok, (i, mode)
        checked += 1
    assert checked > 0


def _random_subdivisions(rng, t, count):
    history = [t]
    for _ in range(count):
        facet = t.facets[int(rng.integers(len(t.facets)))]
        t = stellar_subdivide(t, facet, random_interior_point(rng, t.points(facet)))
        history.append(t)
    return history


def test_delaunay_modes_agree_on_arbitrary_triangulations():
    verdicts = set()
    for i in range(8):
        rng = instance_generator(11, i)
        start = build_triangulation(2, SQUARE, [(0, 1, 3), (1, 2, 3)] if i % 2 else [(0, 1, 2), (0, 2, 3)])
        for t in _random_subdivisions(rng, start, 3):
            answers = {mode: check_delaunay(t, mode).ok for mode in ALL_MODES}
            assert len(set(answers.values())) == 1, (i, answers)
            verdicts.add(answers[DelaunayMode.FACETS_EMPTY])
    assert verdicts == {True, False}


def test_subdividing_never_repairs_a_non_delaunay_triangulation():
    bad = build_triangulation(2, SQUARE, [(0, 1, 3), (1, 2, 3)])
    for i in range(6):
        rng = instance_generator(13, i)
        for t in _random_subdivisions(rng, bad, 3):
            assert not check_delaunay(t, DelaunayMode.FACETS_EMPTY).ok
            assert not check_delaunay(t, DelaunayMode.INTERIOR_RIDGES_LOCAL).ok


def test_delaunay_subdivision_comes_from_a_delaunay_triangulation(subdivided_triangle, triangle):
    assert check_delaunay(subdivided_triangle, DelaunayMode.FACETS_EMPTY).ok
    assert check_delaunay(undo_stellar(subdivided_triangle, 3), DelaunayMode.FACETS_EMPTY).ok
    for i in range(10):
        rng = instance_generator(17, i)
        history = _random_subdivisions(rng, triangle, 4)
        for before, after in zip(history, history[1:]):
            if check_delaunay(after, DelaunayMode.FACETS_EMPTY).ok:
                assert check_delaunay(before, DelaunayMode.FACETS_EMPTY).ok


def test_mode_parse():
    assert DelaunayMode.parse("4") is DelaunayMode.INTERIOR_RIDGES_LOCAL
    assert DelaunayMode.parse("facets-empty") is DelaunayMode.FACETS_EMPTY
    assert DelaunayMode.parse(DelaunayMode.RIDGES_SUPPORTED) is DelaunayMode.RIDGES_SUPPORTED
