"""Budget-allocation search for expensive configuration evaluation.

The package splits into value plumbing (:mod:`uvp.core`), cover-based
selection (:mod:`uvp.clustering`), the solvers and baselines
(:mod:`uvp.solvers`, :mod:`uvp.baselines`), instance sources
(:mod:`uvp.instances`) and measurement tools (:mod:`uvp.analysis`).
"""

from .analysis import (
    ClusteringReport,
    EpsilonReport,
    RankTable,
    brute_force_k_center,
    brute_force_opt,
    epsilon_pairwise,
    epsilon_percentiles,
    incumbent_at,
    lipschitz_check,
    mean_rank,
)
from .baselines import BaselineParams, hyperband, random_search, successive_halving
from .clustering import (
    CenterState,
    EnhancedMetric,
    e_k_center,
    enhanced_distance,
    greedy_radius,
    k_center,
)
from .core import (
    BudgetExhausted,
    BudgetLedger,
    CallableOracle,
    Configuration,
    DegenerateEmbedding,
    EmptyCenters,
    EmptyHistory,
    History,
    InsufficientCandidates,
    InvalidBudget,
    InvalidParams,
    MissingTrace,
    MonotoneOracle,
    OutOfDomain,
    ParseError,
    Run,
    SchemaError,
    SearchOutcome,
    SizeOverflow,
    TooLarge,
    UvpError,
    ValueOracle,
    config_matrix,
    enforce_monotone,
    extend,
    learn,
)
from .instances import (
    HardInstanceSpec,
    LandscapeOracle,
    LandscapeSpec,
    TabularBenchmark,
    TabularMeta,
    TabularOracle,
    gen_hard,
    gen_isolated_optimum,
    gen_smooth,
    landscape,
    landscape_eval,
    load_tabular,
    mesh_grid,
    sample_uniform,
    save_tabular,
)
from .solvers import (
    SolverParams,
    ada_cent,
    e_ada_cent,
    e_full_cent,
    full_cent,
    pred,
    tail_fit_pred,
)

__version__ = "0.1.0"

__all__ = [
    "BaselineParams",
    "BudgetExhausted",
    "BudgetLedger",
    "CallableOracle",
    "CenterState",
    "ClusteringReport",
    "Configuration",
    "DegenerateEmbedding",
    "EmptyCenters",
    "EmptyHistory",
    "EnhancedMetric",
    "EpsilonReport",
    "HardInstanceSpec",
    "History",
    "InsufficientCandidates",
    "InvalidBudget",
    "InvalidParams",
    "LandscapeOracle",
    "LandscapeSpec",
    "MissingTrace",
    "MonotoneOracle",
    "OutOfDomain",
    "ParseError",
    "RankTable",
    "Run",
    "SchemaError",
    "SearchOutcome",
    "SizeOverflow",
    "SolverParams",
    "TabularBenchmark",
    "TabularMeta",
    "TabularOracle",
    "TooLarge",
    "UvpError",
    "ValueOracle",
    "ada_cent",
    "brute_force_k_center",
    "brute_force_opt",
    "config_matrix",
    "e_ada_cent",
    "e_full_cent",
    "e_k_center",
    "enforce_monotone",
    "enhanced_distance",
    "epsilon_pairwise",
    "epsilon_percentiles",
    "extend",
    "full_cent",
    "gen_hard",
    "gen_isolated_optimum",
    "gen_smooth",
    "greedy_radius",
    "hyperband",
    "incumbent_at",
    "k_center",
    "landscape",
    "landscape_eval",
    "learn",
    "lipschitz_check",
    "load_tabular",
    "mean_rank",
    "mesh_grid",
    "pred",
    "random_search",
    "sample_uniform",
    "save_tabular",
    "successive_halving",
    "tail_fit_pred",
]
