"""Full-size acceptance sweeps. Slow: exact arithmetic over thousands of instances.

Usage:
  python scripts/acceptance_sweep.py                 # every criterion
  python scripts/acceptance_sweep.py --only 1 7 8    # a subset
"""

import argparse
import math
import os
import sys
import time

# Add parent directory to path so we can import from root
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pandas as pd

from inscriber.builder import (
    build_bounded_degree,
    build_from_plan,
    lift_to_inscribed,
    polytope_degrees,
    polytope_edges,
    replay_trace,
    verify_inscribed,
)
from inscriber.complex import DelaunayMode, brute_force_delaunay, check_delaunay, stellar_subdivide, undo_stellar
from inscriber.config import load_run_config
from inscriber.errors import DegeneratePointSet
from inscriber.generators import (
    cyclic_spherical,
    cyclic_standard,
    cyclic_trig,
    fvector_families,
    gale_evenness_facets,
    steinitz_set,
)
from inscriber.kernel import inverse_stereographic, stereographic_project
from inscriber.obstruction import (
    angle_obstruction_2d,
    delaunay_subdivision_point,
    obstruction_sweep,
    random_split_instance,
    split_geometry,
    verify_new_facets_exclude_split_point,
    verify_split_point_sides,
)
from inscriber.sampling import instance_generator, random_interior_point, random_point, random_point_set
from inscriber.trees import buildable_root, enumerate_trees, max_degree, root_plan


def criterion_1(seed, workers):
    built = 0
    for n in range(1, 10):
        for tree in enumerate_trees(n):
            if max_degree(tree)[0] > 3:
                continue
            plan = root_plan(tree, buildable_root(tree))
            for d in (3, 4, 5):
                t = build_from_plan(plan, d).triangulation
                assert check_delaunay(t, DelaunayMode.FACETS_EMPTY).ok
                assert check_delaunay(t, DelaunayMode.INTERIOR_RIDGES_LOCAL).ok
                assert verify_inscribed(lift_to_inscribed(t)).ok
                built += 1
    return f"{built} builds verified"


def criterion_2(seed, workers):
    report = obstruction_sweep(3, 1000, seed=seed, workers=workers)
    assert report.certified
    for trial in report.trials:
        assert trial.failing_edges
        assert math.isclose(trial.angle_total, 6 * math.pi, rel_tol=1e-9)
    return "1000 configurations, every one with a failing edge"


def criterion_3(seed, workers):
    count = 0
    for d in (3, 4, 5):
        for k in range(1, d):
            for i in range(100):
                delta = random_split_instance(instance_generator(seed, 1000 * d + 100 * k + i), d)
                g = split_geometry(delta, k)
                assert verify_split_point_sides(g, delta).ok
                count += 1
    return f"{count} split geometries"


def criterion_4(seed, workers):
    cases = set()
    for d in (3, 4):
        for i in range(100):
            rng = instance_generator(seed, 10_000 + 100 * d + i)
            delta = random_split_instance(rng, d)
            g = split_geometry(delta, d - 1)
            r = delaunay_subdivision_point(rng, delta, g)
            report = verify_new_facets_exclude_split_point(delta, g, r)
            assert report.ok
            cases.update(report.cases)
    assert cases == {"I", "II", "III"}
    return "200 instances, cases I, II and III all hit"


def criterion_5(seed, workers):
    report = obstruction_sweep(4, 100, seed=seed, workers=workers)
    assert report.certified, report.status_counts()
    for trial in report.trials:
        assert trial.failing_edges
    return f"100 pipeline obstructions, {len(report.resampled)} escaped draws resampled"


def criterion_6(seed, workers):
    checked = 0
    for i in range(200):
        rng = instance_generator(seed, 20_000 + i)
        m, n = (2, int(rng.integers(4, 10))) if i % 2 == 0 else (3, int(rng.integers(5, 8)))
        try:
            t = brute_force_delaunay(random_point_set(rng, m, n))
        except DegeneratePointSet:
            continue
        modes = [DelaunayMode.FACETS_EMPTY, DelaunayMode.RIDGES_SUPPORTED, DelaunayMode.INTERIOR_RIDGES_LOCAL]
        if checked < 20:
            modes.append(DelaunayMode.ALL_FACES_SUPPORTED)
        assert all(check_delaunay(t, mode).ok for mode in modes)
        checked += 1
    return f"{checked} brute-force triangulations agree"


def criterion_7(seed, workers):
    for d in (3, 4, 5):
        for n in range(0, 11):
            p = build_bounded_degree(d, n)
            assert verify_inscribed(p).ok
            assert all(b - a <= d for a, b in polytope_edges(p))
            assert max(polytope_degrees(p)) <= 2 * d
    return "d in 3..5, n in 0..10"


def criterion_8(seed, workers):
    for d, n in ((3, 5), (3, 6), (3, 7), (4, 6), (4, 7), (5, 7)):
        expected = len(gale_evenness_facets(d, n))
        polytopes = [cyclic_standard(d, n)[0], cyclic_spherical(d, n)]
        if d % 2 == 0:
            polytopes.append(cyclic_trig(d, n))
        for p in polytopes:
            assert verify_inscribed(p).ok and len(p.facets) == expected
    assert len(gale_evenness_facets(4, 6)) == 9
    return "all generators match Gale evenness"


def criterion_9(seed, workers):
    families = set(fvector_families(200))
    assert families == steinitz_set(200)
    return f"{len(families)} f-vectors"


def criterion_10(seed, workers):
    rng = instance_generator(seed, 30_000)
    for _ in range(1000):
        q = random_point(rng, 3)
        assert stereographic_project(inverse_stereographic(q)) == q
    for i in range(500):
        delta = random_split_instance(instance_generator(seed, 40_000 + i), 4)
        facet = delta.facets[0]
        grown = stellar_subdivide(delta, facet, random_interior_point(rng, delta.points(facet)))
        assert undo_stellar(grown, len(delta.vertices)) == delta
    tree = enumerate_trees(6)[0]
    result = build_from_plan(root_plan(tree, buildable_root(tree)), 4)
    assert replay_trace(result.trace) == result.triangulation
    return "projection, subdivision and replay round trips"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def main():
    parser = argparse.ArgumentParser(description="Run the acceptance sweeps.")
    parser.add_argument("--only", type=int, nargs="*", choices=sorted(CRITERIA))
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()
    config = load_run_config(seed=args.seed, workers=args.workers)

    rows = []
    for number in args.only or sorted(CRITERIA):
        start = time.perf_counter()
        try:
            detail = CRITERIA[number](config.seed, config.workers)
            passed = True
        except AssertionError as exc:
            detail = f"FAILED {exc}"
            passed = False
        rows.append({"criterion": number, "passed": passed, "seconds": round(time.perf_counter() - start, 1), "detail": detail})
        print(f"Criterion {number}: {'ok' if passed else 'FAILED'} ({detail})")

    table = pd.DataFrame(rows)
    print("\n--- Summary ---")
    print(table.to_string(index=False))
    return 0 if table["passed"].all() else 1


if __name__ == "__main__":
    sys.exit(main())
