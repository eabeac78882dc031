//! Shared fixtures for the benchmarks.

use condal_core::{ConditionalAlgebra, EventAlgebra, EventMeasure, KnowledgeBase, Limits};
use condal_core::logic::parse;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Fixture {
    pub alg: EventAlgebra,
    pub calg: ConditionalAlgebra,
    pub measure: EventMeasure,
}

/// An `n`-atom algebra with a seeded random positive measure.
pub fn fixture(n: usize, seed: u64) -> Fixture {
    let alg = EventAlgebra::with_limits(n, None, &Limits { max_atoms: n.max(8) }).expect("valid size");
    let calg = ConditionalAlgebra::new(&alg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
    let measure = EventMeasure::from_integers(&alg, &w).expect("positive weights");
    Fixture { alg, calg, measure }
}

/// Two variables with the one-premise knowledge base `(p <-> q | T)`.
pub fn two_variable_kb() -> (EventAlgebra, ConditionalAlgebra, KnowledgeBase) {
    let alg = EventAlgebra::lindenbaum(&["p".to_string(), "q".to_string()]).expect("two variables");
    let calg = ConditionalAlgebra::new(&alg);
    let kb = KnowledgeBase::new(vec![parse("(p <-> q | T)", &alg).expect("well formed")]);
    (alg, calg, kb)
}
