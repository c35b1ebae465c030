from inscriber.builder import (
    BuildResult,
    BuildTrace,
    InscribedPolytope,
    build_bounded_degree,
    build_from_plan,
    build_path,
    expand_at,
    init_root,
    inscribed_polygon,
    lift_to_inscribed,
    replay_trace,
    rooted_tree_from_trace,
    verify_inscribed,
)
from inscriber.complex import (
    DelaunayMode,
    Triangulation,
    brute_force_delaunay,
    build_triangulation,
    check_delaunay,
    stellar_subdivide,
    undo_stellar,
)
from inscriber.config import RunConfig, load_run_config
from inscriber.errors import InscriberError
from inscriber.generators import (
    cyclic_spherical,
    cyclic_standard,
    cyclic_trig,
    fvector_families,
    gale_evenness_facets,
    steinitz_member,
)
from inscriber.kernel import Sphere, circumsphere, inverse_stereographic, sphere_side, stereographic_project
from inscriber.obstruction import (
    angle_obstruction_2d,
    obstruction_sweep,
    reduce_by_inversion,
    split_geometry,
    verify_new_facets_exclude_split_point,
    verify_split_point_sides,
)
from inscriber.trees import (
    DualTree,
    RootedPlan,
    decide_inscribable,
    extract_dual_tree,
    plan_is_buildable,
    root_plan,
)

__all__ = [
    "RunConfig",
    "load_run_config",
    "InscriberError",
    "Sphere",
    "circumsphere",
    "sphere_side",
    "stereographic_project",
    "inverse_stereographic",
    "Triangulation",
    "DelaunayMode",
    "build_triangulation",
    "stellar_subdivide",
    "undo_stellar",
    "check_delaunay",
    "brute_force_delaunay",
    "DualTree",
    "RootedPlan",
    "decide_inscribable",
    "root_plan",
    "plan_is_buildable",
    "extract_dual_tree",
    "BuildResult",
    "BuildTrace",
    "InscribedPolytope",
    "init_root",
    "expand_at",
    "build_from_plan",
    "build_path",
    "lift_to_inscribed",
    "verify_inscribed",
    "build_bounded_degree",
    "inscribed_polygon",
    "replay_trace",
    "rooted_tree_from_trace",
    "split_geometry",
    "verify_split_point_sides",
    "verify_new_facets_exclude_split_point",
    "angle_obstruction_2d",
    "reduce_by_inversion",
    "obstruction_sweep",
    "gale_evenness_facets",
    "cyclic_standard",
    "cyclic_spherical",
    "cyclic_trig",
    "fvector_families",
    "steinitz_member",
]
