"""Min/max families of polytopes for piecewise-smooth directional
derivatives, with exact checkers for the induced optimality conditions."""

from .conditions import (
    AtomKind,
    ConditionID,
    RegionAtom,
    RegionExpr,
    Verdict,
    atom_membership,
    build_condition,
    check_unconstrained,
    evaluate_condition,
    inclusion_check,
    necessary_condition_oracle,
    region_membership,
    regularity_check,
)
from .deriv import (
    AtomExpr,
    Leaf,
    Max,
    MaxNode,
    Min,
    MinNode,
    Scale,
    SmoothAtom,
    Sum,
    directional_derivative_tree,
    eval_expr,
    eval_minmax,
    expr_from_json,
    expr_to_json,
    fd_directional_derivative,
)
from .errors import (
    CapExceededError,
    DimensionMismatchError,
    ExhausterKindError,
    IterationCapError,
)
from .exhauster import (
    Exhauster,
    eval_exhauster,
    exhauster_from_tree,
    polytope_families_equal,
    polytopes_equal,
    reduce_exhauster,
)
from .geometry import (
    TOL,
    ArcSet,
    FeasibilityResult,
    LinearConstraint,
    Polytope,
    Sense,
    arcset_subset,
    conjugate_membership,
    contains_origin,
    hull_contains,
    linear_feasibility,
    sample_unit_directions,
    support_value,
)
from .report import AnalysisReport, Canvas, render_report, render_svg

__version__ = "0.1.0"
