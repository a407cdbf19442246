"""Optimal covariate adjustment sets for policy evaluation in causal DAGs with hidden variables."""

__version__ = "0.1.0"

from .adjustment import (
    AdjustmentChecker,
    Clause,
    Comparison,
    Query,
    ValidityCertificate,
    canonical_adjustment,
    causal_nodes,
    exists_adjustment,
    forbidden_set,
    graphical_compare,
    is_adjustment_set,
    proper_backdoor_graph,
)
from .cuts import (
    CutKind,
    CutResult,
    PathBundle,
    cut_meet,
    cut_partial_order,
    disjoint_paths,
    find_opt,
    find_opt_minimal,
    find_opt_minimum,
    global_optimality_guaranteed,
    is_in_minimum,
    min_cut_size,
)
from .efficiency import EfficiencyGraph, build_h0, build_h1, h1_preserves_separation
from .errors import *  # noqa: F403
from .graph import (
    Dag,
    UGraph,
    ancestors,
    boundary,
    connected_component,
    d_separated,
    descendants,
    induced_subgraph,
    moralize,
    separated,
    u_separated,
)
from .oracle import (
    DiscreteBN,
    EnumerationMode,
    Policy,
    VarianceReport,
    adjustment_value,
    deletion_identity,
    enumerate_adjustment_sets,
    gformula_value,
    influence_variance,
    joint_distribution,
    random_bn,
    supplementation_identity,
)
