//! Recurrence engines: syndetic finite sums, brute-force and staged searches,
//! pattern-perturbation local search, the counterexample verifier and the
//! dilation search.

mod brute;
mod counterexample;
mod divisible;
mod modsolve;
mod outcome;
mod perturb;
mod sg;
mod staged;

pub use brute::{
    brute_force_thm_a, brute_force_thm_b, candidate_masks, subset_sums, SearchRequest,
};
pub use counterexample::{verify_counterexample, CounterexampleReport};
pub use divisible::{find_divisible_blocks, DivisibleReport};
pub use outcome::{SearchOutcome, Witness};
pub use perturb::{
    enumerate_moves, insertion_effect, perturbation_search, Insertion, PerturbationConfig,
    PerturbationMove,
};
pub use sg::sg_enumerate;
pub use staged::{staged_nil_search, StagedConfig};

/// binom(d+1, 2): the gap bound for d-step nilmanifolds.
pub fn nil_gap_bound(d: u32) -> u32 {
    d * (d + 1) / 2
}
