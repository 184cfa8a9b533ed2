"""Maximize structural balance of signed networks via budgeted edge deletion.

A signed graph is balanced when its nodes split into two camps with
positive edges inside camps and negative edges across. Given a target
subgraph and a deletion budget, this package selects edges whose removal
grows the largest connected balanced subgraph, using spectral scores from
the signed Laplacian and greedy optimizers with computable approximation
bounds, all validated against exhaustive small-instance oracles.
"""

from .balance import (
    BalancedState,
    Bipartition,
    FrustrationReport,
    OracleLimitError,
    apply_switching,
    check_balance,
    current_balance_exact,
    expand_state,
    frustration_exact,
    max_balanced_heuristic,
    negative_cycle_witness,
)
from .graph import (
    GraphError,
    LoadReport,
    SignedGraph,
    connected_component_count,
    connected_components,
    delete_edges,
    dump_edge_list,
    export_dot,
    induced_subgraph,
    k_core,
    largest_connected_component,
    load_edge_list,
)
from .harness import (
    ExperimentConfig,
    RunRecord,
    compute_ib,
    records_to_csv,
    run_experiment,
    run_experiment_on_graph,
    sweep,
)
from .optimize import (
    ConflictCounters,
    ConflictIndex,
    brute_force_opt,
    build_cep_index,
    cascade_state,
    gamma_bounds,
    greedy,
    marginal_gain,
    min_cep,
    peripheral_edges,
    pseudo_submodularity_check,
    random_baseline,
    randomized_greedy,
)
from .reports import BoundReport, SolutionReport
from .spectral import (
    EigenPair,
    EigensolveError,
    LaplacianView,
    balance_upper_bound,
    edge_score,
    iterative_spectral,
    perturbation_predict,
    quadratic_form,
    smallest_eigenpair,
    spectral_top,
    upper_bound_g,
)

__version__ = "0.1.0"
