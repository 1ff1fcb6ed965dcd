"""Equilibrium solver for games whose payoffs couple players bilinearly.

Each player minimizes a linear cost plus a bilinear interaction term
over a mixed-integer linear feasible set. The package ships two
solution paths: an outer-approximation scheme that refines linear
relaxations with cutting planes and spatial branching, and an exact
enumeration fallback for small instances.
"""

from .cutplay import (
    Algorithm,
    Branch,
    Cuts,
    Member,
    OuterApproximation,
    PlayerState,
    SolverOptions,
    cut_and_play,
    refine_region,
    separation_oracle,
    solve_game,
)
from .cuts import cover_cuts, gomory_cuts
from .enumeration import full_enumeration, lattice_points
from .errors import (
    BudgetExhausted,
    DocumentError,
    EmptyUnion,
    InfeasibleGame,
    NumericalFailure,
)
from .game import (
    Deviation,
    EqStatus,
    EquilibriumResult,
    GameModel,
    PlayerStrategy,
    SolveStats,
    StrategyProfile,
    build_nash_lcp,
    deviation_check,
    encode_region,
    opponents_vector,
    profile_payoffs,
    support_from_points,
)
from .generators import (
    canonical_knapsack_game,
    cyclic_matching_game,
    infeasible_game,
    random_knapsack_game,
)
from .ip import PlayerProgram, parametrized_objective, payoff, solve_ip
from .lcp import (
    FIX_FREE,
    FIX_W_ZERO,
    FIX_Z_ZERO,
    LCP,
    LCPMethod,
    LCPSolution,
    NoSolution,
    solve_lcp,
    solve_lcp_with_fixings,
)
from .lp import LinearProgram, LPResult, LPStatus, solve_lp
from .model import (
    Instance,
    dumps_canonical,
    instance_from_document,
    instance_to_document,
    load_instance,
    result_to_document,
    save_instance,
    save_result,
)
from .numerics import DEFAULT_TOLS, SparseMatrix, Tolerances, approx_eq, seeded_rng, spmv
from .poly import ExtendedHull, Polyhedron, convex_hull, decompose, hull_contains

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "Branch",
    "BudgetExhausted",
    "Cuts",
    "DEFAULT_TOLS",
    "Deviation",
    "DocumentError",
    "EmptyUnion",
    "EqStatus",
    "EquilibriumResult",
    "ExtendedHull",
    "GameModel",
    "InfeasibleGame",
    "Instance",
    "FIX_FREE",
    "FIX_W_ZERO",
    "FIX_Z_ZERO",
    "LCP",
    "LCPMethod",
    "LCPSolution",
    "LPResult",
    "LPStatus",
    "LinearProgram",
    "Member",
    "NoSolution",
    "NumericalFailure",
    "OuterApproximation",
    "PlayerProgram",
    "PlayerState",
    "PlayerStrategy",
    "Polyhedron",
    "SolveStats",
    "SolverOptions",
    "SparseMatrix",
    "StrategyProfile",
    "Tolerances",
    "approx_eq",
    "build_nash_lcp",
    "canonical_knapsack_game",
    "convex_hull",
    "cover_cuts",
    "cut_and_play",
    "cyclic_matching_game",
    "decompose",
    "deviation_check",
    "encode_region",
    "full_enumeration",
    "gomory_cuts",
    "hull_contains",
    "infeasible_game",
    "dumps_canonical",
    "instance_from_document",
    "instance_to_document",
    "lattice_points",
    "load_instance",
    "opponents_vector",
    "parametrized_objective",
    "payoff",
    "profile_payoffs",
    "random_knapsack_game",
    "refine_region",
    "result_to_document",
    "save_instance",
    "save_result",
    "seeded_rng",
    "separation_oracle",
    "solve_game",
    "solve_ip",
    "solve_lcp",
    "solve_lcp_with_fixings",
    "solve_lp",
    "spmv",
    "support_from_points",
]
