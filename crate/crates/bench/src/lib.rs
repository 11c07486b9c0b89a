//! Inputs shared by the benchmarks in `benches/`.

use procred_core::fixtures::random_nfa;
use procred_core::Sra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lifted random NFAs with `states` states over two letters, folded to one
/// initial and one final state.
pub fn random_corpus(seed: u64, count: usize, states: usize) -> Vec<Sra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let density = rng.gen_range(0.1..0.3);
            let a = random_nfa(&mut rng, states, 2, density).lift();
            if a.terminal_count() > 2 {
                a.normalize_terminals()
            } else {
                a
            }
        })
        .collect()
}
