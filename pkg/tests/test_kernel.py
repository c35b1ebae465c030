from fractions import Fraction as F

import hypothesis.strategies as s
import pytest
from hypothesis import assume, given, settings

from inscriber.errors import CenterInversion, DegeneratePointSet, DegenerateSimplex, InexactScalar, NorthPole
from inscriber.kernel import (
    HyperSide,
    Hyperplane,
    Line,
    Side,
    Sphere,
    affine_intersection_line,
    as_scalar,
    barycentric_coordinates,
    circumsphere,
    determinant,
    face_circumsphere,
    hull_facets,
    hyperplane_side,
    hyperplane_through,
    insphere_determinant_side,
    inverse_stereographic,
    invert_in_sphere,
    line_sphere_second_root,
    nullspace,
    orientation,
    project_onto_affine,
    rank,
    solve,
    sphere_side,
    stereographic_project,
    strictly_feasible,
    unit_sphere,
)
from inscriber.sampling import random_point, random_simplex


def points(dim):
    return s.tuples(*[s.fractions(min_value=-4, max_value=4, max_denominator=64)] * dim)


def test_as_scalar_accepts_exact_input():
    assert as_scalar(3) == F(3)
    assert as_scalar("3/7") == F(3, 7)
    assert as_scalar(F(1, 2)) == F(1, 2)


@pytest.mark.parametrize("bad", [0.5, True, "0.25", "1e3", "x"])
def test_as_scalar_refuses_inexact_input(bad):
    with pytest.raises(InexactScalar):
        as_scalar(bad)


def test_linear_algebra_basics():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert rank([[1, 2], [2, 4]]) == 1
    assert nullspace([[1, 1, 0]], 3) == [(-1, 1, 0), (0, 0, 1)]
    assert solve([[1, 1], [1, -1]], [3, 1]) == (2, 1)
    assert solve([[1, 1], [1, 1]], [1, 2]) is None


def test_strictly_feasible():
    # t > 0 and -t > -1  (0 < t < 1)
    assert strictly_feasible([((1,), 0), ((-1,), -1)])
    # t > 1 and -t > -1 is empty
    assert not strictly_feasible([((1,), 1), ((-1,), -1)])
    assert strictly_feasible([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])


@pytest.mark.parametrize(
    "simplex, expected",
    [
        ([(0, 0), (1, 0), (0, 1)], 1),
        ([(0, 0), (1, 0), (2, 0)], 0),
        ([(0, 0), (0, 1), (1, 0)], -1),
    ],
)
def test_orientation(simplex, expected):
    assert orientation(simplex) == expected


@pytest.mark.parametrize(
    "simplex, center, radius_sq",
    [
        ([(0, 0), (2, 0), (0, 2)], (1, 1), 2),
        ([(-1, 0), (1, 0), (0, 1)], (0, 0), 1),
        ([(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2)], (1, 1, 1), 3),
    ],
)
def test_circumsphere(simplex, center, radius_sq):
    sphere = circumsphere(simplex)
    assert sphere.center == center
    assert sphere.radius_sq == radius_sq


def test_circumsphere_of_degenerate_simplex():
    with pytest.raises(DegenerateSimplex):
        circumsphere([(0, 0), (1, 1), (2, 2)])


def test_face_circumsphere_stays_in_the_face():
    sphere = face_circumsphere([(0, 0, 0), (2, 0, 0), (0, 2, 0)])
    assert sphere.center == (1, 1, 0)
    assert sphere.radius_sq == 2


@pytest.mark.parametrize("p, side", [((2, 0), Side.OUTSIDE), ((1, 0), Side.ON), ((F(1, 2), F(1, 2)), Side.INSIDE)])
def test_sphere_side(p, side):
    assert sphere_side(unit_sphere(2), p) is side


@settings(deadline=None)
@given(s.sampled_from([2, 3]).flatmap(lambda dim: s.tuples(s.lists(points(dim), min_size=dim + 1, max_size=dim + 1), points(dim))))
def test_insphere_determinant_agrees_with_circumsphere(case):
    simplex, p = case
    assume(orientation(simplex) != 0)
    assert insphere_determinant_side(simplex, p) is sphere_side(circumsphere(simplex), p)
    assert insphere_determinant_side(simplex, simplex[0]) is Side.ON


def test_insphere_determinant_on_the_circle():
    assert insphere_determinant_side([(0, 0), (2, 0), (0, 2)], (2, 2)) is Side.ON


@pytest.mark.parametrize("dim", [2, 3])
def test_inversion_carries_sphere_sides_to_the_image_sphere(rng, dim):
    for _ in range(20):
        simplex = random_simplex(rng, dim)
        sphere = circumsphere(simplex)
        center = random_point(rng, dim)
        if sphere_side(sphere, center) is Side.ON:
            continue
        image = circumsphere([invert_in_sphere(center, F(1), v) for v in simplex])
        # a center inside the sphere turns it inside out
        flip = sphere_side(sphere, center) is Side.INSIDE
        for _ in range(10):
            p = random_point(rng, dim)
            if p == center:
                continue
            side = sphere_side(sphere, p)
            mapped = sphere_side(image, invert_in_sphere(center, F(1), p))
            if side is Side.ON or not flip:
                assert mapped is side
            else:
                assert mapped is {Side.INSIDE: Side.OUTSIDE, Side.OUTSIDE: Side.INSIDE}[side]


@pytest.mark.parametrize("p, side", [((1, 0), HyperSide.POSITIVE), ((0, 5), HyperSide.ON), ((F(-1, 3), 2), HyperSide.NEGATIVE)])
def test_hyperplane_side(p, side):
    assert hyperplane_side(Hyperplane(normal=(1, 0), offset=0), p) is side


def test_hyperplane_through_and_hull():
    plane = hyperplane_through([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert hyperplane_side(plane, (1, 1, 1)) is not hyperplane_side(plane, (0, 0, 0))
    square = [(0, 0), (1, 0), (1, 1), (0, 1), (F(1, 2), F(1, 3))]
    assert sorted(hull_facets(square)) == [(0, 1), (0, 3), (1, 2), (2, 3)]
    with pytest.raises(DegeneratePointSet):
        hull_facets([(0, 0), (1, 0), (2, 0), (0, 1)])


def test_barycentric_and_projection():
    assert barycentric_coordinates([(0, 0), (1, 0), (0, 1)], (F(1, 4), F(1, 2))) == (F(1, 4), F(1, 4), F(1, 2))
    # off the plane of the triangle
    assert barycentric_coordinates([(0, 0, 0), (1, 0, 0), (0, 1, 0)], (0, 0, 1)) is None
    assert project_onto_affine([(0, 0, 0), (1, 0, 0), (0, 1, 0)], (3, 4, 5)) == (3, 4, 0)


@pytest.mark.parametrize(
    "center, radius_sq, p, image",
    [
        ((0, 0), 1, (2, 0), (F(1, 2), 0)),
        ((0, 0), 1, (1, 0), (1, 0)),
        ((0, 1), 2, (0, -1), (0, 0)),
    ],
)
def test_invert_in_sphere(center, radius_sq, p, image):
    assert invert_in_sphere(center, radius_sq, p) == image


def test_invert_at_center():
    with pytest.raises(CenterInversion):
        invert_in_sphere((0, 0), 1, (0, 0))


def test_stereographic_examples():
    assert stereographic_project((0, 0, -1)) == (0, 0)
    assert stereographic_project((1, 0)) == (1,)
    assert stereographic_project((F(3, 5), F(4, 5))) == (3,)
    assert inverse_stereographic((0, 0)) == (0, 0, -1)
    assert inverse_stereographic((1,)) == (1, 0)
    assert inverse_stereographic((3,)) == (F(3, 5), F(4, 5))
    with pytest.raises(NorthPole):
        stereographic_project((0, 1))


@given(s.integers(1, 4).flatmap(points))
def test_stereographic_round_trip(q):
    assert stereographic_project(inverse_stereographic(q)) == q


def test_stereographic_matches_inversion_at_north_pole(rng):
    # inversion centred at N with radius_sq 2 maps the unit sphere to the equator plane
    for _ in range(20):
        p = inverse_stereographic(random_point(rng, 2))
        image = invert_in_sphere((0, 0, 1), 2, p)
        assert image[-1] == 0
        assert image[:-1] == stereographic_project(p)


@pytest.mark.parametrize(
    "line, sphere, root",
    [
        (Line((-1, 0), (1, 0)), unit_sphere(2), 2),
        (Line((0, 1), (1, 0)), unit_sphere(2), 0),
        (Line((0, 0), (1, 1)), Sphere((1, 1), 2), 2),
    ],
)
def test_line_sphere_second_root(line, sphere, root):
    assert line_sphere_second_root(line, sphere, F(0)) == root


def test_affine_intersection_line():
    line = affine_intersection_line([(0, 0, 0), (1, 0, 0), (0, 0, 1)], [(0, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert line.base == (0, 0, 0)
    assert line.direction[0] == 0 and line.direction[1] == 0 and line.direction[2] != 0
    same = affine_intersection_line([(0, 0), (1, 2)], [(0, 0), (2, 4)])
    assert rank([same.direction, (1, 2)]) == 1
