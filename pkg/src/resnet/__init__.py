"""resnet: resistance calculus on finite networks, random walks, and
scaling-limit experiment harnesses."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    NotAResistanceMetric,
    RejectionBudgetError,
    ResnetError,
    ValidationError,
)
from .network import (
    Network,
    ResistanceMatrix,
    VertexMeasure,
    contract_vertices,
    effective_resistance,
    energy,
    harmonic_potential,
    is_resistance_metric,
    laplacian_apply,
    network_from_resistance,
    resistance_matrix,
    resistance_to_set,
    shorted_resistance,
)
from .rng import check_seed, stream
from .engine import MAX_JUMPS, BatchResult, WalkDynamics, batch_walk
from .walk import (
    LocalTimeField,
    Trajectory,
    csrw_measure,
    hitting_time,
    jump_chain_matrix,
    local_times,
    simulate,
    vsrw_measure,
)
from .kernels import (
    MCEstimate,
    estimate_from_samples,
    mc_local_time,
    mc_resolvent,
    resolvent_apply,
    resolvent_kernel,
    shorted_kernel,
)
from .netio import (
    load_measure,
    load_network,
    network_to_text,
    parse_measure,
    parse_network,
    read_resistance_csv,
    save_measure,
    save_network,
    write_coords_csv,
    write_measure,
    write_network,
    write_resistance_csv,
    write_trajectory_csv,
)
from .spaces import (
    FiniteMMSpace,
    GasketGraph,
    OffspringDistribution,
    TreeGraph,
    alpha_interval_space,
    as_mm_space,
    er_giant_component,
    gasket_graph,
    gw_tree,
    heavy_tailed_conductances,
    path_graph,
    sample_progeny_sequence,
    tree_from_progeny,
)
from .compare import (
    ExitProbReport,
    covering_number,
    exit_time_bound,
    ghp_distance,
    hausdorff_distance,
    mc_exit_prob,
    mc_exit_prob_by_start,
    min_ball_measure,
    min_exit_time_bound,
    prohorov_distance,
)
from .experiments import (
    ExperimentResult,
    exit_bound_report,
    load_criteria,
    result_to_csv,
    result_to_gnuplot,
    result_to_json,
    run_crg,
    run_fin,
    run_gasket_scaling,
    run_ghp_check,
    run_tree_scaling,
    run_vsrw_clock,
)

__all__ = [
    "CapacityError",
    "NotAResistanceMetric",
    "RejectionBudgetError",
    "ResnetError",
    "ValidationError",
    "Network",
    "ResistanceMatrix",
    "VertexMeasure",
    "contract_vertices",
    "effective_resistance",
    "energy",
    "harmonic_potential",
    "is_resistance_metric",
    "laplacian_apply",
    "network_from_resistance",
    "resistance_matrix",
    "resistance_to_set",
    "shorted_resistance",
    "check_seed",
    "stream",
    "MAX_JUMPS",
    "BatchResult",
    "WalkDynamics",
    "batch_walk",
    "LocalTimeField",
    "Trajectory",
    "csrw_measure",
    "hitting_time",
    "jump_chain_matrix",
    "local_times",
    "simulate",
    "vsrw_measure",
    "MCEstimate",
    "estimate_from_samples",
    "mc_local_time",
    "mc_resolvent",
    "resolvent_apply",
    "resolvent_kernel",
    "shorted_kernel",
    "load_measure",
    "load_network",
    "network_to_text",
    "parse_measure",
    "parse_network",
    "read_resistance_csv",
    "save_measure",
    "save_network",
    "write_coords_csv",
    "write_measure",
    "write_network",
    "write_resistance_csv",
    "write_trajectory_csv",
    "FiniteMMSpace",
    "GasketGraph",
    "OffspringDistribution",
    "TreeGraph",
    "alpha_interval_space",
    "as_mm_space",
    "er_giant_component",
    "gasket_graph",
    "gw_tree",
    "heavy_tailed_conductances",
    "path_graph",
    "sample_progeny_sequence",
    "tree_from_progeny",
    "ExitProbReport",
    "covering_number",
    "exit_time_bound",
    "ghp_distance",
    "hausdorff_distance",
    "mc_exit_prob",
    "mc_exit_prob_by_start",
    "min_ball_measure",
    "min_exit_time_bound",
    "prohorov_distance",
    "ExperimentResult",
    "exit_bound_report",
    "load_criteria",
    "result_to_csv",
    "result_to_gnuplot",
    "result_to_json",
    "run_crg",
    "run_fin",
    "run_gasket_scaling",
    "run_ghp_check",
    "run_tree_scaling",
    "run_vsrw_clock",
]
