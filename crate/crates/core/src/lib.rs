//! Solvers for minimum total reward equilibrium transition schedules.
//!
//! A game consists of a payoff matrix pair (R for the single row player, C
//! shared by k symmetric column players). Given two pure equilibria, the
//! crate computes schedules of intermediate states whose total bribing cost
//! is minimal (exact search) or provably close to minimal (rounded variant),
//! plus a faster closed-form variant for single-peaked preferences on a line
//! and generators for the hardness constructions and random instances.

pub mod approx;
pub mod error;
pub mod exact;
pub mod gadgets;
pub mod game;
pub mod io;
pub mod lp;
pub mod single_peaked;
pub mod value;

#[cfg(test)]
pub(crate) mod testkit;

pub use approx::{
    best_alternating_path, build_transformation_path, compute_meta_weights, round_profile,
    solve_approx, solve_approx_routed, weight, weight_lp, AltVertex, AlternatingPath,
    ApproxSolution, EdgeWeight, MatrixNorms, MetaWeights, RoutingMode,
};
pub use error::{Error, Result};
pub use exact::{solve_exact, ExactOutcome, ExactSolution, StateGraphSpec, DEFAULT_STATE_BUDGET};
pub use gadgets::{
    default_epsilon, exact_k_reweight, gen_exact_cover, gen_knapsack, gen_random,
    gen_random_single_peaked, ExactCoverInput, KnapsackInput, ReweightedKnapsack,
    GEN_ATTEMPT_LIMIT,
};
pub use game::{
    assignment_from_counts, column_incentive_cost, counts_from_assignment, edge_cost,
    enumerate_count_profiles, is_equilibrium, path_cost, profile_count, row_incentive_cost,
    validate_path, CountProfile, Instance, PathReport, PayoffMatrices, State, TransformationPath,
};
pub use io::{
    approx_solution_to_json, exact_outcome_to_json, instance_to_json, line_instance_to_json,
    line_solution_to_json, lp_outcome_to_json, parse_cover_input, parse_instance,
    parse_instance_file, parse_knapsack_input, parse_line_instance, parse_lp, parse_path_states,
    states_to_path_json, InstanceFile,
};
pub use lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Relation};
pub use single_peaked::{
    materialize_matrices, median_index, solve_single_peaked, weight_single_peaked, LineInstance,
    LineSolution,
};
pub use value::{format_rat, parse_rat, CostValue, PayoffValue, Rat};
