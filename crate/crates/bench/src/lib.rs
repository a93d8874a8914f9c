//! Inputs shared by the benchmarks.

use lambda_orders::gen::{Gen, GenConfig};
use lambda_orders::lambda_order::{OrderKind, OrderParams};
use lambda_orders::term::Term;

/// A generated signature and `n` pairs of terms of common types, half of
/// them ground.
pub fn corpus(kind: OrderKind, seed: u64, n: usize) -> (OrderParams, Vec<(Term, Term)>) {
    let mut gen = Gen::new(GenConfig { seed, max_depth: 5, ..GenConfig::default() });
    let p = gen.signature(kind);
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        gen.reset_vars();
        let ground = pairs.len() % 2 == 0;
        let ty = gen.sample_type(&p, ground);
        if let (Ok(t), Ok(s)) = (gen.term(&p, &ty, ground), gen.term(&p, &ty, ground)) {
            pairs.push((t, s));
        }
    }
    (p, pairs)
}
