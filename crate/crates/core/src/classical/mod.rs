//! Classical baselines: exact affine game values, constrained games, local
//! strategies, light cones, random restrictions and the Mod-3 self-reduction.

mod affine;
mod constrained;
mod lightcone;
mod local;
mod restriction;
mod selfreduce;

pub use affine::{affine_optimum, affine_win_prob_exact, best_affine_strategy, AffineStrategy, BEST_AFFINE_MAX_PLAYERS};
pub use constrained::{
    check_constrained_bound, constrained_game_max, constrained_game_value, walsh_hadamard, BoundCheck,
    GameConstraints, ParityGroup, CONSTRAINED_MAX_PLAYERS,
};
pub use lightcone::{independent_inputs, light_cones, FanIn2Circuit, IndependentInputs, InteractionGraph, LightCones};
pub use local::{
    eval_local_strategy, exact_local_success, hill_climb, EvalMode, LocalProblem, LocalStrategy, SuccessEstimate,
    EXHAUSTIVE_MAX_INPUTS, MAX_SUPPORT,
};
pub use restriction::{apply_restriction, sample_restriction, Restriction};
pub use selfreduce::self_reduce_mod3;

/// Exact game values.
pub type Exact = num_rational::Ratio<i64>;
