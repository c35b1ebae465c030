from fractions import Fraction as F

import pytest

from inscriber.builder import verify_inscribed
from inscriber.errors import BadParameters, NonDistinctParams, OddDimension
from inscriber.generators import (
    FVector3,
    cyclic_facet_count,
    cyclic_spherical,
    cyclic_standard,
    cyclic_trig,
    fvector_families,
    fvector_table,
    gale_evenness_facets,
    moment_point,
    spherical_curve_point,
    steinitz_member,
    steinitz_set,
    trig_curve_point,
)
from inscriber.kernel import norm_sq


def test_gale_evenness_small_cases():
    assert len(gale_evenness_facets(4, 6)) == 9
    assert gale_evenness_facets(2, 4) == {(1, 2), (2, 3), (3, 4), (1, 4)}
    assert (1, 2, 3, 4) in gale_evenness_facets(4, 6)
    assert (1, 3, 5, 6) not in gale_evenness_facets(4, 6)
    with pytest.raises(BadParameters):
        gale_evenness_facets(4, 4)


@pytest.mark.parametrize("d, n", [(3, 5), (3, 8), (4, 6), (4, 9), (5, 7), (6, 9)])
def test_cyclic_facet_count_matches_gale(d, n):
    assert cyclic_facet_count(d, n) == len(gale_evenness_facets(d, n))


def test_curve_points():
    assert moment_point(F(2), 3) == (2, 4, 8)
    p = spherical_curve_point(F(1), 3)
    assert p == (F(1, 3), F(1, 3), F(1, 3))
    assert norm_sq([a - b for a, b in zip(p, (F(1, 2), 0, 0))]) == F(1, 4)
    q = trig_curve_point(F(1), 4)
    # tan(t/2) = 1 puts t at a right angle
    assert q == (1, 0, 0, -1)


@pytest.mark.parametrize("d, n", [(3, 5), (3, 6), (4, 6)])
def test_cyclic_standard(d, n):
    polytope, params = cyclic_standard(d, n)
    assert params[:d] == tuple(range(d))
    assert len(params) == n - 1
    assert list(params) == sorted(params)
    assert polytope.north == n - 1
    assert len(polytope.facets) == cyclic_facet_count(d, n)
    assert verify_inscribed(polytope).ok


@pytest.mark.parametrize("d, n", [(3, 5), (3, 7), (4, 6), (5, 7)])
def test_cyclic_spherical(d, n):
    polytope = cyclic_spherical(d, n)
    assert polytope.north is None
    assert len(polytope.facets) == cyclic_facet_count(d, n)
    assert verify_inscribed(polytope).ok


def test_cyclic_spherical_custom_params():
    polytope = cyclic_spherical(3, 5, params=["1/2", 1, 2, 3, 5])
    assert verify_inscribed(polytope).ok
    with pytest.raises(NonDistinctParams):
        cyclic_spherical(3, 5, params=[1, 1, 2, 3, 4])
    with pytest.raises(BadParameters):
        cyclic_spherical(3, 5, params=[1, 3, 2, 4, 5])
    with pytest.raises(BadParameters):
        cyclic_spherical(3, 5, params=[0, 1, 2, 3, 4])
    with pytest.raises(BadParameters):
        cyclic_spherical(3, 5, params=[1, 2, 3])


@pytest.mark.parametrize("n", [5, 6, 8])
def test_cyclic_trig(n):
    polytope = cyclic_trig(4, n)
    assert polytope.sphere.radius_sq == 2
    assert len(polytope.facets) == cyclic_facet_count(4, n)
    assert verify_inscribed(polytope).ok


def test_cyclic_trig_dimension_checks():
    with pytest.raises(OddDimension):
        cyclic_trig(5, 7)
    with pytest.raises(BadParameters):
        cyclic_trig(2, 5)


def test_fvector_validation():
    assert FVector3.from_vertices_facets(4, 4) == FVector3(4, 6, 4)
    with pytest.raises(BadParameters):
        FVector3(4, 5, 4)
    with pytest.raises(BadParameters):
        FVector3(0, -2, 0)


@pytest.mark.parametrize(
    "f0, f2, member",
    [(4, 4, True), (5, 5, True), (5, 6, True), (6, 8, True), (4, 5, False), (8, 5, False), (3, 2, False)],
)
def test_steinitz_member(f0, f2, member):
    assert steinitz_member(f0, f2) is member


def test_families_cover_the_steinitz_set():
    families = fvector_families(40)
    assert set(families) == steinitz_set(40)
    assert families[FVector3(4, 6, 4)] == ("left",)
    assert all(tags for tags in families.values())


def test_fvector_table():
    table = fvector_table(8)
    assert list(table.columns) == ["f0", "f1", "f2", "family"]
    assert len(table) == len(steinitz_set(8))
    assert (table["f1"] == table["f0"] + table["f2"] - 2).all()
    order = ["left", "middle", "right"]
    for label in table["family"]:
        names = label.split("+")
        assert names == sorted(names, key=order.index)
    with pytest.raises(BadParameters):
        fvector_table(3)


@pytest.mark.slow
def test_families_cover_the_steinitz_set_up_to_200():
    assert set(fvector_families(200)) == steinitz_set(200)
