"""Command-line entry: decide, build, verify, generate, certify, export.

Exit codes: 0 success, 1 negative result with evidence, 2 input error,
3 internal verification failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from inscriber.builder import (
    BuildResult,
    InscribedPolytope,
    build_bounded_degree,
    build_from_plan,
    build_path,
    chain_plan,
    inscribed_polygon,
    lift_to_inscribed,
    polytope_degrees,
    polytope_edges,
    replay_trace,
    rooted_tree_from_trace,
    verify_inscribed,
)
from inscriber.complex import DelaunayMode, check_delaunay
from inscriber.config import RunConfig, get_log_level, load_run_config
from inscriber.errors import (
    InscriberError,
    InvalidPlan,
    NotObstructed,
    PlanNotBuildable,
    VerificationFailed,
)
from inscriber.export import DEFAULT_DIGITS, write_off
from inscriber.formats import (
    decision_to_dict,
    delaunay_report_to_dict,
    dumps,
    facets_from_dict,
    format_scalar,
    inscribed_report_to_dict,
    load_json,
    parse_optional_scalar,
    parse_scalar,
    plan_from_dict,
    polytope_from_dict,
    polytope_to_dict,
    trace_from_dict,
    trace_to_dict,
    tree_from_dict,
    triangulation_from_dict,
    triangulation_to_dict,
    write_csv,
    write_json,
)
from inscriber.generators import (
    cyclic_spherical,
    cyclic_standard,
    cyclic_trig,
    fvector_table,
    steinitz_member,
)
from inscriber.obstruction import obstruction_sweep, sweep_frame
from inscriber.trees import (
    RootedPlan,
    buildable_root,
    decide_inscribable,
    extract_dual_tree,
    plan_canonical_form,
    root_plan,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_VERIFICATION = 3


def _emit(args, payload: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        for line in lines:
            print(line)


# decide

def cmd_decide(args, config: RunConfig) -> int:
    data = load_json(args.input)
    if args.facets:
        facets, d = facets_from_dict(data)
        tree, _ = extract_dual_tree(facets, d)
    else:
        tree = tree_from_dict(data)
    decision = decide_inscribable(tree)
    payload = decision_to_dict(decision)
    payload["nodes"] = tree.nodes
    lines = [
        f"Nodes: {tree.nodes}",
        f"Max degree: {decision.max_degree}",
        f"Result: {'Inscribable' if decision.inscribable else 'NotInscribable'}",
    ]
    if decision.witness is not None:
        lines.append(f"Witness node: {decision.witness}")
    _emit(args, payload, lines)
    return EXIT_OK if decision.inscribable else EXIT_NEGATIVE


# build

def _plan_from_args(args) -> tuple:
    """(plan, d) for --plan or --tree input."""
    if args.plan:
        plan, d = plan_from_dict(load_json(args.plan))
        return plan, args.d if args.d is not None else d
    tree = tree_from_dict(load_json(args.tree))
    if args.d is None:
        raise InvalidPlan("--tree needs --d")
    try:
        root = args.root if args.root is not None else buildable_root(tree)
    except InvalidPlan as exc:
        raise PlanNotBuildable(str(exc)) from None
    return root_plan(tree, root), args.d


def _verify_build(result: BuildResult, plan: RootedPlan) -> InscribedPolytope:
    t = result.triangulation
    for mode in (DelaunayMode.FACETS_EMPTY, DelaunayMode.INTERIOR_RIDGES_LOCAL):
        report = check_delaunay(t, mode)
        if not report.ok:
            raise VerificationFailed(f"built triangulation fails {mode.name}: {report.violations[:3]}")
    replayed = replay_trace(result.trace)
    if replayed.vertices != t.vertices or replayed.facets != t.facets:
        raise VerificationFailed("trace replay does not reproduce the triangulation")
    if plan_canonical_form(rooted_tree_from_trace(result.trace)) != plan_canonical_form(plan):
        raise VerificationFailed("the subdivision tree of the build differs from the plan")
    polytope = lift_to_inscribed(t)
    report = verify_inscribed(polytope)
    if not report.ok:
        raise VerificationFailed(f"lifted polytope fails inscription checks: {report.violations[:3]}")
    return polytope


def _check_bounded(polytope: InscribedPolytope) -> None:
    report = verify_inscribed(polytope)
    if not report.ok:
        raise VerificationFailed(f"bounded-degree polytope fails inscription checks: {report.violations[:3]}")
    if polytope.d > 2:
        if any(b - a > polytope.d for a, b in polytope_edges(polytope)):
            raise VerificationFailed("an edge joins vertices more than d apart")
        if max(polytope_degrees(polytope)) > 2 * polytope.d:
            raise VerificationFailed("a vertex degree exceeds 2d")


def cmd_build(args, config: RunConfig) -> int:
    out = config.output_dir
    written: List[Path] = []
    result: Optional[BuildResult] = None

    if args.bounded_degree is not None:
        if args.d is None:
            raise InvalidPlan("--bounded-degree needs --d")
        polytope = build_bounded_degree(args.d, args.bounded_degree, config.scale, halving_cap=config.halving_cap)
        _check_bounded(polytope)
    elif args.path is not None:
        if args.d is None:
            raise InvalidPlan("--path needs --d")
        if args.d == 2:
            polytope = inscribed_polygon(args.path + 3)
        else:
            result = build_path(args.d, args.path, config.scale, halving_cap=config.halving_cap)
            polytope = _verify_build(result, chain_plan(args.path))
    else:
        plan, d = _plan_from_args(args)
        if d == 2:
            polytope = inscribed_polygon(len(plan.nodes()) + 3)
        else:
            result = build_from_plan(plan, d, config.scale, halving_cap=config.halving_cap)
            polytope = _verify_build(result, plan)

    if polytope.d == 2 and args.bounded_degree is None:
        _check_bounded(polytope)
    if result is not None:
        written.append(write_json(out / "triangulation.json", triangulation_to_dict(result.triangulation)))
        written.append(write_json(out / "trace.json", trace_to_dict(result.trace)))
    written.append(write_json(out / "polytope.json", polytope_to_dict(polytope)))

    payload = {
        "d": polytope.d,
        "vertices": len(polytope.vertices),
        "facets": len(polytope.facets),
        "written": [str(p) for p in written],
    }
    lines = [f"Dimension: {polytope.d}", f"Vertices: {len(polytope.vertices)}", f"Facets: {len(polytope.facets)}"]
    if result is not None:
        bits = max(step.denominator_bits for step in result.trace.steps)
        payload["max_denominator_bits"] = bits
        lines.append(f"Max denominator bits: {bits}")
    lines.extend(f"Written: {p}" for p in written)
    _emit(args, payload, lines)
    return EXIT_OK


# verify

def _detect_mode(data) -> str:
    if isinstance(data, dict) and "steps" in data:
        return "replay"
    if isinstance(data, dict) and "dim" in data:
        return "delaunay:1"
    return "inscribed"


def cmd_verify(args, config: RunConfig) -> int:
    data = load_json(args.input)
    mode = args.mode or _detect_mode(data)
    if mode == "inscribed":
        report = verify_inscribed(polytope_from_dict(data))
        payload = inscribed_report_to_dict(report)
        lines = ["Mode: inscribed", f"Violations: {len(report.violations)}"]
        lines.extend(f"  {v.check} {list(v.face)} witness={v.witness} {v.detail}".rstrip() for v in report.violations)
        ok = report.ok
    elif mode.startswith("delaunay"):
        _, _, label = mode.partition(":")
        try:
            delaunay_mode = DelaunayMode.parse(label or "1")
        except (KeyError, ValueError):
            raise InvalidPlan(f"unknown Delaunay mode {label!r}") from None
        report = check_delaunay(triangulation_from_dict(data), delaunay_mode)
        payload = delaunay_report_to_dict(report)
        lines = [f"Mode: delaunay:{delaunay_mode.value}", f"Violations: {len(report.violations)}"]
        lines.extend(f"  face {list(face)} witness={witness}" for face, witness in report.violations)
        ok = report.ok
    elif mode == "replay":
        replayed = replay_trace(trace_from_dict(data))
        ok = True
        if args.against:
            expected = triangulation_from_dict(load_json(args.against))
            ok = replayed.vertices == expected.vertices and replayed.facets == expected.facets
        payload = {"ok": ok, "vertices": len(replayed.vertices), "facets": len(replayed.facets)}
        lines = ["Mode: replay", f"Vertices: {len(replayed.vertices)}", f"Facets: {len(replayed.facets)}"]
        if args.against:
            lines.append(f"Matches {args.against}: {'yes' if ok else 'no'}")
    else:
        raise InvalidPlan(f"unknown verification mode {mode!r}")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_NEGATIVE


# generate

def cmd_generate(args, config: RunConfig) -> int:
    out = config.output_dir
    if args.kind == "fvectors":
        table = fvector_table(args.f0_max)
        bad = [row for row in table.itertuples() if not steinitz_member(row.f0, row.f2)]
        if bad:
            raise VerificationFailed(f"{len(bad)} generated f-vectors violate the Steinitz inequalities")
        path = write_csv(out / "fvectors.csv", table)
        _emit(args, {"rows": len(table), "written": [str(path)]}, [f"Rows: {len(table)}", f"Written: {path}"])
        return EXIT_OK

    if args.d is None or args.n is None:
        raise InvalidPlan("cyclic generation needs --d and --n")
    params = [parse_scalar(p) for p in args.params] if args.params else None
    extra: Dict[str, Any] = {}
    if args.method == "standard":
        polytope, used = cyclic_standard(args.d, args.n, growth_cap=config.growth_cap)
        extra["params"] = [format_scalar(t) for t in used]
    elif args.method == "spherical":
        polytope = cyclic_spherical(args.d, args.n, params)
    else:
        polytope = cyclic_trig(args.d, args.n, params)
    report = verify_inscribed(polytope)
    if not report.ok:
        raise VerificationFailed(f"cyclic polytope fails inscription checks: {report.violations[:3]}")
    path = write_json(out / "polytope.json", polytope_to_dict(polytope))
    payload = {"method": args.method, "d": args.d, "n": args.n, "facets": len(polytope.facets), "written": [str(path)]}
    payload.update(extra)
    _emit(args, payload, [f"Method: {args.method}", f"Facets: {len(polytope.facets)}", f"Written: {path}"])
    return EXIT_OK


# certify

def cmd_certify(args, config: RunConfig) -> int:
    tree = tree_from_dict(load_json(args.input))
    decision = decide_inscribable(tree)
    if decision.inscribable:
        raise NotObstructed(f"max degree {decision.max_degree} <= 3: the tree is inscribable, nothing to certify")
    report = obstruction_sweep(args.d, args.trials, seed=config.seed, workers=config.workers)
    frame = sweep_frame(report)
    payload = {
        "seed": config.seed,
        "d": args.d,
        "witness": decision.witness,
        "trials": len(report.trials),
        "requested": report.requested,
        "resampled": [trial.index for trial in report.resampled],
        "all_violated": report.all_violated,
        "certified": report.certified,
        "status_counts": report.status_counts(),
        "results": frame.astype(object).where(frame.notna(), None).to_dict(orient="records"),
    }
    path = write_json(config.output_dir / "obstruction-report.json", payload)
    payload_summary = {k: v for k, v in payload.items() if k not in ("results", "resampled")}
    payload_summary["resampled"] = len(report.resampled)
    payload_summary["written"] = [str(path)]
    lines = [
        f"Witness node: {decision.witness} (degree {decision.max_degree})",
        f"Trials: {len(report.trials)} of {report.requested} (seed {config.seed}, {len(report.resampled)} escaped draws resampled)",
        f"All trials violated: {'yes' if report.all_violated else 'no'}",
    ]
    lines.extend(f"  {status}: {count}" for status, count in sorted(report.status_counts().items()))
    lines.append(f"Certified: {'yes' if report.certified else 'no'}")
    lines.append(f"Written: {path}")
    _emit(args, payload_summary, lines)
    if not report.certified:
        raise VerificationFailed("the sweep has a trial without both a bad ridge and a planar obstruction")
    return EXIT_OK


# export

def cmd_export(args, config: RunConfig) -> int:
    polytope = polytope_from_dict(load_json(args.input))
    target = Path(args.output) if args.output else config.output_dir / (Path(args.input).stem + ".off")
    path = write_off(target, polytope, args.digits)
    _emit(args, {"written": [str(path)], "digits": args.digits}, [f"Written: {path}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", dest="output_dir", default=None, help="output directory")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--scale", default=None, help="initial simplex scale, 'p/q'")
    common.add_argument("--halving-cap", type=int, default=None)
    common.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(prog="inscriber", description="Inscribable stacked polytopes, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", parents=[common], help="is the stacked polytope of a dual tree inscribable?")
    p.add_argument("input")
    p.add_argument("--facets", action="store_true", help="input lists boundary facets instead of a tree")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("build", parents=[common], help="build an inscribed realization")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--plan")
    source.add_argument("--tree")
    source.add_argument("--path", type=int)
    source.add_argument("--bounded-degree", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--root", type=int)
    p.set_defaults(handler=cmd_build)

    p = sub.add_parser("verify", parents=[common], help="exact verification of an output file")
    p.add_argument("input")
    p.add_argument("--mode", help="inscribed | delaunay:<1..4> | replay")
    p.add_argument("--against", help="triangulation.json to compare a replayed trace with")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("generate", parents=[common], help="cyclic polytopes and f-vector tables")
    p.add_argument("kind", choices=["cyclic", "fvectors"])
    p.add_argument("--method", choices=["standard", "spherical", "trig"], default="spherical")
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--params", nargs="*")
    p.add_argument("--f0-max", type=int, default=20)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("certify", parents=[common], help="obstruction sweep for a tree with a node of degree >= 4")
    p.add_argument("input")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--trials", type=int, default=500)
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("export", parents=[common], help="decimal OFF export")
    p.add_argument("input")
    p.add_argument("--format", choices=["off"], default="off")
    p.add_argument("--digits", type=int, default=DEFAULT_DIGITS)
    p.add_argument("--output")
    p.set_defaults(handler=cmd_export)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else get_log_level(), format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_run_config(
            seed=args.seed,
            scale=parse_optional_scalar(args.scale),
            halving_cap=args.halving_cap,
            workers=args.workers,
            output_dir=args.output_dir,
        )
        return args.handler(args, config)
    except (PlanNotBuildable, NotObstructed) as exc:
        print(f"Negative: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except VerificationFailed as exc:
        print(f"Verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (InscriberError, RuntimeError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INPUT
