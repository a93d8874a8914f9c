//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lambda_orders::cmp::Cmp;
use lambda_orders::config::parse_signature;
use lambda_orders::gen::{nesting_pair, nesting_signature, Gen, GenConfig};
use lambda_orders::lambda_order::{compare_using, Algorithm, OrderKind, OrderParams, Stats};
use lambda_orders::oracle::{enum_ground_terms, oracle_compare};
use lambda_orders::props::{check_named, CheckOptions};
use lambda_orders::syntax::{parse_term, parse_type_in};
use lambda_orders::term::{Term, BOT, TOP};

const KINDS: [OrderKind; 2] = [OrderKind::Kbo, OrderKind::Lpo];
const ALGORITHMS: [Algorithm; 2] = [Algorithm::Naive, Algorithm::Optimized];
/// Generated signatures each randomized property is spread over.
const SIGNATURES: u64 = 5;
/// Transitivity triples per order kind; 100,000 in total.
const TRIPLES: u64 = 50_000;
type Criterion = fn() -> Outcome;

const TIME_LIMIT: Duration = Duration::from_secs(120);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn signature(file: &str, kind: OrderKind) -> OrderParams {
    parse_signature(&read(&fixtures().join(file)), Some(kind)).unwrap()
}

fn term(file: &str, p: &OrderParams) -> Term {
    parse_term(&read(&fixtures().join(file)), &p.signature).unwrap()
}

fn compare(t: &Term, s: &Term, p: &OrderParams, alg: Algorithm) -> Cmp {
    compare_using(t, s, p, p.kind, alg).unwrap().0
}

fn stats(t: &Term, s: &Term, p: &OrderParams, alg: Algorithm) -> Stats {
    compare_using(t, s, p, p.kind, alg).unwrap().1
}

/// The result both algorithms give, or a description of their disagreement.
fn agreed(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, String> {
    let naive = compare(t, s, p, Algorithm::Naive);
    let opt = compare(t, s, p, Algorithm::Optimized);
    if naive == opt {
        Ok(naive)
    } else {
        Err(format!("naive gave {naive}, optimized gave {opt}"))
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Outcome {
        Outcome { ok, detail: detail.into() }
    }
}

/// Collects mismatches while checking expected results.
#[derive(Default)]
struct Expect {
    wrong: Vec<String>,
}

impl Expect {
    fn eq(&mut self, what: &str, got: Result<Cmp, String>, want: impl Fn(Cmp) -> bool, shown: &str) {
        match got {
            Ok(c) if want(c) => {}
            Ok(c) => self.wrong.push(format!("{what}: got {c}, want {shown}")),
            Err(e) => self.wrong.push(format!("{what}: {e}")),
        }
    }

    fn outcome(self, ok_detail: &str) -> Outcome {
        if self.wrong.is_empty() {
            Outcome::new(true, ok_detail)
        } else {
            Outcome::new(false, self.wrong.join("; "))
        }
    }
}

fn lambda_literals() -> Outcome {
    let mut ex = Expect::default();
    let mut slowest = Duration::ZERO;
    for kind in KINDS {
        let p = signature("lambda_literals/signature.toml", kind);
        let (t, s) = (term("lambda_literals/left.term", &p), term("lambda_literals/right.term", &p));
        ex.eq(&format!("{kind}"), agreed(&t, &s, &p), |c| c == Cmp::G, "G");
        for alg in ALGORITHMS {
            let best = (0..5)
                .map(|_| {
                    let start = Instant::now();
                    compare(&t, &s, &p, alg);
                    start.elapsed()
                })
                .min()
                .unwrap();
            slowest = slowest.max(best);
        }
    }
    if slowest >= Duration::from_millis(1) {
        ex.wrong.push(format!("slowest comparison took {slowest:?}"));
    }
    ex.outcome(&format!("G for both orders; slowest comparison {slowest:?}"))
}

fn quantified_transitivity() -> Outcome {
    let mut ex = Expect::default();
    let unit = signature("transitivity/signature.toml", OrderKind::Kbo);
    let heavy = signature("transitivity/heavy.toml", OrderKind::Kbo);
    let lpo = signature("transitivity/signature.toml", OrderKind::Lpo);
    for (what, p, want) in [("KBO, unit", &unit, Cmp::L), ("KBO, w(trans) = 5, k(trans, 1) = 3", &heavy, Cmp::G)] {
        let (t, s) = (term("transitivity/left.term", p), term("transitivity/right.term", p));
        ex.eq(what, agreed(&t, &s, p), |c| c == want, &want.to_string());
    }
    let (t, s) = (term("transitivity/left.term", &lpo), term("transitivity/right.term", &lpo));
    ex.eq("LPO", agreed(&t, &s, &lpo), |c| c != Cmp::G, "not G");
    ex.outcome("KBO L under unit parameters, G with the heavier trans; LPO not G")
}

/// `λ a #0` outweighs `λ f (sk(y) #0)` and `λ #0` once `w(a)` exceeds this.
/// The parameter `y` of `sk` adds no weight, so both sides are constants.
fn skolem_threshold(p: &OrderParams) -> i64 {
    let n = |o: lambda_orders::ordinal::Ordinal| o.as_finite().expect("finite parameter");
    let (w_db, k) = (n(p.w_db.clone()), |f: &str| n(p.coeff(f, 1)));
    let lhs_without_a = k("a") * w_db;
    let skolem_side = n(p.weight("f")) + k("f") * (n(p.weight("sk")) + k("sk") * w_db);
    (skolem_side - lhs_without_a).max(w_db - lhs_without_a)
}

fn skolem_parameter() -> Outcome {
    let mut ex = Expect::default();
    let base = signature("skolem_parameter/signature.toml", OrderKind::Kbo).with_weight("a", 1);
    let threshold = skolem_threshold(&base);
    let p = base.with_weight("a", threshold + 1);
    let left = term("skolem_parameter/left.term", &p);
    for right in ["right.term", "identity.term"] {
        let s = term(&format!("skolem_parameter/{right}"), &p);
        ex.eq(&format!("against {s}"), agreed(&left, &s, &p), |c| c == Cmp::G, "G");
    }
    ex.outcome(&format!("w(a) = {} above the threshold {threshold}: G against both", threshold + 1))
}

fn map_recursion() -> Outcome {
    let mut ex = Expect::default();
    for kind in KINDS {
        let p = signature("map_recursion/signature.toml", kind);
        let (t, s) = (term("map_recursion/left.term", &p), term("map_recursion/right.term", &p));
        ex.eq(&format!("{kind}"), agreed(&t, &s, &p), |c| c == Cmp::U, "U");
        ex.eq(&format!("{kind}, reversed"), agreed(&s, &t, &p), |c| c == Cmp::U, "U");
    }
    ex.outcome("U in both orientations for both orders")
}

/// Ground corpora: every term up to size 6 at a few types of each
/// enumeration fixture.
const ENUMERATIONS: [(&str, &[&str]); 2] = [
    ("enumeration/booleans.toml", &["kappa", "o", "(-> kappa kappa)"]),
    ("enumeration/lists.toml", &["kappa", "(list kappa)", "(-> kappa kappa)"]),
];
const ENUM_SIZE: usize = 6;

fn corpora(kind: OrderKind) -> Vec<(OrderParams, Vec<Vec<Term>>)> {
    ENUMERATIONS
        .iter()
        .map(|(file, tys)| {
            let p = signature(file, kind);
            let groups = tys
                .iter()
                .map(|ty| enum_ground_terms(&p, &parse_type_in(ty, &p.signature).unwrap(), ENUM_SIZE))
                .collect();
            (p, groups)
        })
        .collect()
}

fn props_options(seed: u64, iters: u64) -> CheckOptions {
    CheckOptions {
        iters,
        gen: GenConfig { seed: 1000 + seed, ordinal_weights: seed % 2 == 1, ..GenConfig::default() },
        ..CheckOptions::default()
    }
}

fn generated_signature(seed: u64, kind: OrderKind) -> OrderParams {
    Gen::new(GenConfig { seed, ordinal_weights: seed % 2 == 1, ..GenConfig::default() }).signature(kind)
}

/// Runs a property over several generated signatures, in parallel, until
/// `total` instances were checked for each order kind in `kinds`.
fn random_property(name: &str, kinds: &[OrderKind], total: u64) -> Outcome {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for &kind in kinds {
        let mut trials = 0;
        let mut seeds = 0..SIGNATURES;
        while trials < total && seeds.start < 4 * SIGNATURES {
            let share = (total - trials).div_ceil(seeds.end - seeds.start);
            let reports: Vec<_> = std::thread::scope(|scope| {
                let handles: Vec<_> = seeds
                    .clone()
                    .map(|seed| {
                        scope.spawn(move || {
                            let p = generated_signature(seed, kind);
                            (seed, check_named(name, &p, &props_options(seed, share)).expect("known property"))
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            for (seed, r) in reports {
                trials += r.trials;
                if !r.ok() {
                    failures.push(format!("{kind} seed {seed}: {r}"));
                }
            }
            seeds = seeds.end..seeds.end + SIGNATURES;
        }
        if trials < total {
            failures.push(format!("{kind}: only {trials} of {total} instances"));
        }
        counts.push(format!("{trials} {kind}"));
    }
    if failures.is_empty() {
        Outcome::new(true, format!("{name}: {} instances, 0 failures", counts.join(", ")))
    } else {
        Outcome::new(false, failures.join("; "))
    }
}

fn all(outcomes: Vec<Outcome>) -> Outcome {
    let ok = outcomes.iter().all(|o| o.ok);
    Outcome::new(ok, outcomes.into_iter().map(|o| o.detail).collect::<Vec<_>>().join("; "))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0u64;
    let mut wrong = Vec::new();
    for kind in KINDS {
        for (p, groups) in corpora(kind) {
            for terms in &groups {
                for t in terms {
                    for s in terms {
                        pairs += 1;
                        let want = oracle_compare(t, s, &p).unwrap();
                        for alg in ALGORITHMS {
                            let got = compare(t, s, &p, alg);
                            if got != want && wrong.len() < 3 {
                                wrong.push(format!("{kind} {alg}: {t} vs {s} gave {got}, oracle {want}"));
                            }
                        }
                    }
                }
            }
        }
    }
    let random = random_property("oracle_equivalence", &KINDS, 5000);
    let elapsed = start.elapsed();
    let ok = wrong.is_empty() && random.ok && elapsed < TIME_LIMIT;
    Outcome::new(
        ok,
        format!("{pairs} enumerated pairs, {} mismatches; random {}; {elapsed:.1?}", wrong.len(), random.detail)
            + &wrong.iter().map(|w| format!("; {w}")).collect::<String>(),
    )
}

fn ground_trichotomy() -> Outcome {
    let mut pairs = 0u64;
    let mut wrong = Vec::new();
    for kind in KINDS {
        for (p, groups) in corpora(kind) {
            for terms in &groups {
                for t in terms {
                    for s in terms {
                        pairs += 1;
                        let got = compare(t, s, &p, Algorithm::Optimized);
                        if !matches!(got, Cmp::G | Cmp::E | Cmp::L) && wrong.len() < 3 {
                            wrong.push(format!("{kind}: {t} vs {s} gave {got}"));
                        }
                    }
                }
            }
        }
    }
    let random = random_property("ground_totality", &KINDS, 5000);
    Outcome::new(
        wrong.is_empty() && random.ok,
        format!("{pairs} enumerated pairs, {} violations; random {}", wrong.len(), random.detail)
            + &wrong.iter().map(|w| format!("; {w}")).collect::<String>(),
    )
}

fn algorithms_agree() -> Outcome {
    let start = Instant::now();
    let r = random_property("algorithms_agree", &KINDS, 10_000);
    let elapsed = start.elapsed();
    Outcome::new(r.ok && elapsed < TIME_LIMIT, format!("{}; {elapsed:.1?}", r.detail))
}

fn top_bot_minimal() -> Outcome {
    let mut checked = 0u64;
    let mut wrong = Vec::new();
    for kind in KINDS {
        let (p, groups) = corpora(kind).swap_remove(0);
        let (top, bot) = (Term::cst(TOP), Term::cst(BOT));
        if compare(&bot, &top, &p, Algorithm::Optimized) != Cmp::G {
            wrong.push(format!("{kind}: ⊥ does not beat ⊤"));
        }
        for t in groups.iter().flatten().filter(|t| **t != top && **t != bot) {
            checked += 1;
            for low in [&top, &bot] {
                let got = agreed(t, low, &p);
                if got != Ok(Cmp::G) && wrong.len() < 3 {
                    wrong.push(format!("{kind}: {t} vs {low} gave {got:?}"));
                }
            }
        }
    }
    let random = random_property("top_bot_minimal", &KINDS, 1000);
    Outcome::new(
        wrong.is_empty() && random.ok,
        format!("{checked} enumerated terms beat ⊤ and ⊥, ⊥ beats ⊤; random {}", random.detail)
            + &wrong.iter().map(|w| format!("; {w}")).collect::<String>(),
    )
}

/// Ratio of successive values, for a family whose depth grows by one.
fn growth(xs: &[f64]) -> f64 {
    let ratios: Vec<f64> = xs.windows(2).map(|w| w[1] / w[0]).collect();
    ratios.iter().sum::<f64>() / ratios.len() as f64
}

fn performance() -> Outcome {
    let mut wrong = Vec::new();
    let lpo = nesting_signature(OrderKind::Lpo);
    let (t, s) = nesting_pair(14);
    let start = Instant::now();
    let c = compare(&t, &s, &lpo, Algorithm::Optimized);
    let optimized_time = start.elapsed();
    if optimized_time >= Duration::from_secs(1) {
        wrong.push(format!("optimized λLPO took {optimized_time:?} at depth 14"));
    }
    if c != Cmp::L {
        wrong.push(format!("depth-14 nesting compared {c}"));
    }

    let depths: Vec<usize> = (3..=7).collect();
    let mut calls = Vec::new();
    let mut per_call = Duration::ZERO;
    for &d in &depths {
        let (t, s) = nesting_pair(d);
        let start = Instant::now();
        let st = stats(&t, &s, &lpo, Algorithm::Naive);
        per_call = start.elapsed() / st.calls.max(1) as u32;
        calls.push(st.calls as f64);
    }
    let ratio = growth(&calls);
    let last = *depths.last().unwrap();
    let calls_at_20 = calls.last().unwrap() * ratio.powi(20 - last as i32);
    let projected = per_call.as_secs_f64() * calls_at_20;
    if ratio < 2.0 || projected <= 60.0 {
        wrong.push(format!("naive λLPO growth {ratio:.2} per level, projected {projected:.0}s at depth 20"));
    }

    let kbo = nesting_signature(OrderKind::Kbo);
    let sizes: Vec<usize> = [16, 32, 64, 128].to_vec();
    let nodes = |alg| -> Vec<f64> {
        sizes
            .iter()
            .map(|&d| {
                let (t, s) = nesting_pair(d);
                stats(&t, &s, &kbo, alg).weight_nodes as f64
            })
            .collect()
    };
    let (naive, opt) = (nodes(Algorithm::Naive), nodes(Algorithm::Optimized));
    // Doubling the depth doubles a linear count and quadruples a quadratic one.
    let (opt_growth, naive_growth) = (growth(&opt), growth(&naive));
    if !(1.8..2.2).contains(&opt_growth) || !(3.6..4.4).contains(&naive_growth) {
        wrong.push(format!(
            "λKBO weight nodes grow by {opt_growth:.2} (optimized) and {naive_growth:.2} (naive) per doubling"
        ));
    }
    let detail = format!(
        "optimized λLPO depth 14 in {optimized_time:.1?}; naive λLPO calls grow {ratio:.2}x per level \
         ({} calls at depth {last}), projected {projected:.0}s at depth 20; λKBO weight nodes per size doubling: \
         optimized {opt_growth:.2}x, naive {naive_growth:.2}x",
        calls.last().unwrap()
    );
    if wrong.is_empty() {
        Outcome::new(true, detail)
    } else {
        Outcome::new(false, format!("{detail}; {}", wrong.join("; ")))
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 14] = [
        ("λ-literal example", lambda_literals),
        ("transitivity definition", quantified_transitivity),
        ("Skolem parameter weight", skolem_parameter),
        ("map recursion", map_recursion),
        ("oracle equivalence", oracle_equivalence),
        ("ground trichotomy", ground_trichotomy),
        ("naive and optimized agree", algorithms_agree),
        ("stability", || {
            all(vec![
                random_property("grounding_stability", &KINDS, 1000),
                random_property("monomorphizing_stability", &KINDS, 1000),
            ])
        }),
        ("transitivity", || random_property("transitivity", &KINDS, TRIPLES)),
        ("orange contexts", || {
            all(vec![
                random_property("orange_compatibility", &KINDS, 1000),
                random_property("orange_subterm", &KINDS, 1000),
            ])
        }),
        ("diff", || random_property("diff", &KINDS, 500)),
        ("⊤ and ⊥ minimality", top_bot_minimal),
        ("weight lemmas", || {
            all(vec![
                random_property("weight_grounding", &[OrderKind::Kbo], 1000),
                random_property("weight_monomorphizing", &[OrderKind::Kbo], 1000),
            ])
        }),
        ("performance", performance),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {n:2} {verdict} {name} ({:.1?}): {}", start.elapsed(), o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
