import math
from fractions import Fraction as F

import pytest

from inscriber.complex import DelaunayMode, check_delaunay
from inscriber.errors import BadInput, HypothesisFailed, WrongCombinatorialType
from inscriber.kernel import Side, add, centroid, scale, sphere_side
from inscriber.obstruction import (
    EDGES,
    SweepReport,
    TriangleConfig,
    TrialResult,
    angle_obstruction_2d,
    delaunay_subdivision_point,
    obstruction_sweep,
    obstruction_triangulation,
    random_split_instance,
    random_triple_instance,
    reduce_by_inversion,
    run_obstruction_trial,
    split_geometry,
    sweep_frame,
    triple_subdivision,
    verify_new_facets_exclude_split_point,
    verify_split_point_sides,
)
from inscriber.sampling import instance_generator


def _symmetric_config():
    A, B, C = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    x = centroid([A, B, C])
    return TriangleConfig(A=A, B=B, C=C, x=x, a=centroid([B, C, x]), b=centroid([C, A, x]), c=centroid([A, B, x]))


def _planar_config():
    A, B, C = (F(0), F(0)), (F(6), F(0)), (F(0), F(6))
    x = (F(2), F(2))
    return TriangleConfig(A=A, B=B, C=C, x=x, a=centroid([B, C, x]), b=centroid([C, A, x]), c=centroid([A, B, x]))


def test_split_geometry_in_the_plane(subdivided_triangle):
    g = split_geometry(subdivided_triangle, 1)
    assert g.c == 3
    assert g.vertices == (0, 1, 2)
    # with k = 1 the line runs through v_1, which is both x and x_bar
    assert g.x == g.x_bar == (0, 0)
    lam_x, lam_x_bar, lam_y_bar, lam_y = g.params
    assert lam_x == lam_x_bar < 0 < lam_y_bar < lam_y
    assert g.facet(1) == (1, 2, 3)
    report = verify_split_point_sides(g, subdivided_triangle)
    assert report.ok
    assert [ch.expected for ch in report.checks] == [Side.OUTSIDE, Side.ON, Side.ON]


def test_split_geometry_rejects_bad_input(triangle, subdivided_triangle):
    with pytest.raises(BadInput):
        split_geometry(triangle, 1)
    with pytest.raises(BadInput):
        split_geometry(subdivided_triangle, 3)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_split_point_sides_on_random_instances(d):
    for i in range(6):
        delta = random_split_instance(instance_generator(11, i), d)
        for k in range(1, d):
            g = split_geometry(delta, k)
            assert verify_split_point_sides(g, delta).ok, (i, k)
            assert sphere_side(g.C_F, g.x) is Side.ON
            assert sphere_side(g.C_G, g.y) is Side.ON


@pytest.mark.parametrize("d", [3, 4])
def test_new_facets_exclude_split_point(d):
    for i in range(5):
        rng = instance_generator(13, i)
        delta = random_split_instance(rng, d)
        g = split_geometry(delta, d - 1)
        r = delaunay_subdivision_point(rng, delta, g)
        report = verify_new_facets_exclude_split_point(delta, g, r)
        assert report.ok
        assert report.cases == ("I", "II", "III")
        assert len(report.checks) == d


def test_new_facet_index_must_be_on_the_split_side(subdivided_triangle):
    g = split_geometry(subdivided_triangle, 1)
    with pytest.raises(BadInput):
        verify_new_facets_exclude_split_point(subdivided_triangle, g, (F(1, 2), F(1, 4)), which=2)


def test_new_facet_check_needs_a_delaunay_subdivision(subdivided_triangle):
    g = split_geometry(subdivided_triangle, 1)
    assert g.facet(1) == (1, 2, 3)
    # just off the middle of edge (1, 3): the flat new triangle's circle swallows vertex 0
    eps = F(1, 100)
    r = add(scale(eps, subdivided_triangle.vertices[2]), scale(1 - eps, centroid(subdivided_triangle.points((1, 3)))))
    with pytest.raises(HypothesisFailed):
        verify_new_facets_exclude_split_point(subdivided_triangle, g, r)


def test_symmetric_configuration_fails_every_edge():
    result = angle_obstruction_2d(_symmetric_config())
    assert result.failing == EDGES
    assert math.isclose(result.total_angle, 6 * math.pi, rel_tol=1e-9)
    sums = result.opposite_angle_sums
    assert all(sums[edge] >= math.pi - 1e-9 for edge in EDGES)


def test_planar_configuration():
    cfg = _planar_config()
    result = angle_obstruction_2d(cfg)
    assert result.failing
    assert math.isclose(result.total_angle, 6 * math.pi, rel_tol=1e-9)
    t = obstruction_triangulation(cfg)
    assert len(t.vertices) == 7
    assert len(t.facets) == 9
    assert not check_delaunay(t, DelaunayMode.INTERIOR_RIDGES_LOCAL).ok


def test_wrong_combinatorial_type():
    cfg = _planar_config()
    moved = TriangleConfig(A=cfg.A, B=cfg.B, C=cfg.C, x=cfg.x, a=(F(-1), F(-1)), b=cfg.b, c=cfg.c)
    with pytest.raises(WrongCombinatorialType):
        angle_obstruction_2d(moved)
    with pytest.raises(BadInput):
        obstruction_triangulation(_symmetric_config())


def test_triple_subdivision_is_never_delaunay():
    for i in range(10):
        instance = random_triple_instance(instance_generator(17, i), 3)
        t = instance.triangulation
        assert len(t.vertices) == 7
        assert len(t.facets) == 9
        assert not check_delaunay(t, DelaunayMode.INTERIOR_RIDGES_LOCAL).ok
        assert not check_delaunay(t, DelaunayMode.FACETS_EMPTY).ok


def test_triple_subdivision_rejects_too_many_points(subdivided_triangle):
    points = [centroid(subdivided_triangle.points(f)) for f in subdivided_triangle.facets] * 2
    with pytest.raises(BadInput):
        triple_subdivision(subdivided_triangle, points)


def test_inversion_pipeline_in_dimension_four():
    obstructed = 0
    for i in range(12):
        instance = random_triple_instance(instance_generator(19, i), 4)
        g = split_geometry(instance.delta, 3)
        reduction = reduce_by_inversion(instance.triangulation, g)
        assert reduction.coplanar
        assert not check_delaunay(instance.triangulation, DelaunayMode.INTERIOR_RIDGES_LOCAL).ok
        if reduction.status == "escaped":
            assert reduction.obstruction is None
            continue
        assert reduction.status == "obstructed"
        assert reduction.obstruction.failing
        assert len(reduction.weights) == 3
        assert all(sum(w) == 1 for w in reduction.weights)
        obstructed += 1
        if obstructed == 3:
            break
    assert obstructed == 3


def test_inversion_pipeline_needs_dimension_above_three():
    instance = random_triple_instance(instance_generator(0, 0), 3)
    with pytest.raises(BadInput):
        reduce_by_inversion(instance.triangulation, split_geometry(instance.delta, 2))


def test_trial_is_reproducible():
    assert run_obstruction_trial(3, 5, 2) == run_obstruction_trial(3, 5, 2)


def test_small_sweep():
    report = obstruction_sweep(3, 12, seed=3)
    assert len(report.trials) == 12
    assert report.all_violated
    assert report.status_counts() == {"obstructed": 12}
    frame = sweep_frame(report)
    assert list(frame.columns) == ["trial", "ridge_violations", "failing_ridges", "failing_edges", "status", "angle_total"]
    assert (frame["ridge_violations"] > 0).all()
    assert (frame["failing_ridges"].str.count(";") + 1 == frame["ridge_violations"]).all()


def test_sweep_rejects_bad_arguments():
    with pytest.raises(BadInput):
        obstruction_sweep(2, 5)


def test_sweep_in_dimension_four_resamples_escaped_draws():
    report = obstruction_sweep(4, 4, seed=0)
    assert report.certified
    assert len(report.trials) == 4
    assert report.status_counts() == {"obstructed": 4}
    assert all(trial.status == "escaped" for trial in report.resampled)
    drawn = sorted(t.index for t in report.trials + report.resampled)
    assert drawn == list(range(len(drawn)))


def test_sweep_is_not_certified_without_planar_obstructions():
    ridge = ((0, 1, 2),)
    unobstructed = SweepReport(d=4, seed=0, requested=1, trials=(TrialResult(0, ridge, (), "wrong_type"),))
    assert unobstructed.all_violated
    assert not unobstructed.certified
    short = obstruction_sweep(4, 3, seed=0, max_draws=0)
    assert short.trials == ()
    assert not short.certified


@pytest.mark.slow
def test_parallel_sweep_matches_serial():
    serial = obstruction_sweep(4, 6, seed=1)
    parallel = obstruction_sweep(4, 6, seed=1, workers=2)
    assert serial == parallel
    assert serial.certified


@pytest.mark.slow
def test_thousand_planar_configurations():
    report = obstruction_sweep(3, 1000, seed=0)
    assert report.all_violated
    assert all(trial.failing_edges for trial in report.trials)
