//! Wall time and work counts of the naive and optimized algorithms.

use std::time::{Duration, Instant};

use lambda_orders::gen::{nesting_pair, nesting_signature, Gen, GenConfig};
use lambda_orders::lambda_order::{compare_using, Algorithm, OrderKind, OrderParams, Stats};
use lambda_orders::term::Term;

const ALGORITHMS: [Algorithm; 2] = [Algorithm::Naive, Algorithm::Optimized];

#[derive(Default)]
struct Total {
    time: Duration,
    calls: u64,
    weight_nodes: u64,
}

impl Total {
    fn add(&mut self, time: Duration, s: Stats) {
        self.time += time;
        self.calls += s.calls;
        self.weight_nodes += s.weight_nodes;
    }

    fn columns(&self, algo: Algorithm) -> String {
        format!(
            "{algo}_ms={:.3} {algo}_calls={} {algo}_weight_nodes={}",
            self.time.as_secs_f64() * 1e3,
            self.calls,
            self.weight_nodes
        )
    }
}

fn timed(t: &Term, s: &Term, p: &OrderParams, algo: Algorithm) -> (Duration, Stats) {
    let start = Instant::now();
    let (_, stats) = compare_using(t, s, p, p.kind, algo).expect("generated terms are well typed");
    (start.elapsed(), stats)
}

fn corpus(p: &OrderParams, seed: u64, pairs: u64) -> Vec<(Term, Term)> {
    let mut gen = Gen::new(GenConfig { seed, max_depth: 5, ..GenConfig::default() });
    let mut out = Vec::new();
    for _ in 0..pairs.saturating_mul(20) {
        if out.len() as u64 == pairs {
            break;
        }
        gen.reset_vars();
        let ground = gen.rng_bool(0.5);
        let ty = gen.sample_type(p, ground);
        if let (Ok(t), Ok(s)) = (gen.term(p, &ty, ground), gen.term(p, &ty, ground)) {
            out.push((t, s));
        }
    }
    out
}

pub fn run(sigs: &[OrderParams], seed: u64, pairs: u64, max_depth: usize, naive_limit: f64) {
    for p in sigs {
        let pairs = corpus(p, seed.wrapping_add(1), pairs);
        let mut line = format!("corpus order={} pairs={}", p.kind, pairs.len());
        for algo in ALGORITHMS {
            let mut total = Total::default();
            for (t, s) in &pairs {
                let (time, stats) = timed(t, s, p, algo);
                total.add(time, stats);
            }
            line += &format!(" {}", total.columns(algo));
        }
        println!("{line}");
    }
    let kinds: Vec<OrderKind> = {
        let mut ks: Vec<OrderKind> = sigs.iter().map(|p| p.kind).collect();
        ks.dedup();
        ks
    };
    for kind in kinds {
        let p = nesting_signature(kind);
        let mut naive_done = false;
        for depth in 1..=max_depth {
            let (t, s) = nesting_pair(depth);
            let mut line = format!("nesting order={kind} depth={depth} size={}", t.size() + s.size());
            for algo in ALGORITHMS {
                if algo == Algorithm::Naive && naive_done {
                    line += " naive=skipped";
                    continue;
                }
                let mut total = Total::default();
                let (time, stats) = timed(&t, &s, &p, algo);
                total.add(time, stats);
                if algo == Algorithm::Naive && time.as_secs_f64() > naive_limit {
                    naive_done = true;
                }
                line += &format!(" {}", total.columns(algo));
            }
            println!("{line}");
        }
    }
}
