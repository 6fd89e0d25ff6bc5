//! Instance builders shared by the criterion benchmarks.
//!
//! Everything here is seeded, so repeated runs measure the same inputs.

use eqt_core::{
    gen_exact_cover, gen_random, gen_random_single_peaked, ExactCoverInput, Instance,
    LineInstance,
};

/// Random all-finite instance with payoffs in [-10, 10].
pub fn random_instance(m: usize, n: usize, k: u64, seed: u64) -> Instance {
    gen_random(m, n, k, seed, 10).expect("seeded generation succeeds")
}

/// Random single-peaked instance with coordinates in [-50, 50].
pub fn line_instance(n: usize, k: u64, seed: u64) -> LineInstance {
    gen_random_single_peaked(n, k, seed, 50).expect("seeded generation succeeds")
}

/// Solvable set-cover reduction: s groups of three consecutive elements plus
/// one overlapping distractor subset.
pub fn cover_instance(s: u64) -> Instance {
    let mut subsets: Vec<Vec<u64>> = (0..s).map(|g| vec![3 * g + 1, 3 * g + 2, 3 * g + 3]).collect();
    if s >= 2 {
        subsets.push(vec![1, 2, 4]);
    }
    let input = ExactCoverInput::new(s, subsets).expect("valid cover input");
    gen_exact_cover(&input).expect("reduction succeeds")
}
