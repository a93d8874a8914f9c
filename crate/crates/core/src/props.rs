//! Randomized property checks shared by the command-line `check` command
//! and the test suites. Each check draws its own instances from a seeded
//! generator and reports how many it tried and how many failed.

use std::collections::btree_map::Entry;
use std::fmt;

use crate::cmp::Cmp;
use crate::gen::{Gen, GenConfig, GenError};
use crate::lambda_order::{compare_using, weight_poly, Algorithm, OrderKind, OrderParams};
use crate::oracle::{assignment_from_grounding, oracle_compare, poly_subst_from_monomorphizing};
use crate::term::{
    apply, apply_substitution, orange_positions, orange_replace, subterm_at, truncating_apply, Name, Substitution,
    Term, Type, BOT, DIFF, TOP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: &'static str,
    pub trials: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl Report {
    fn new(name: &'static str) -> Report {
        Report { name, trials: 0, failures: 0, counterexample: None }
    }

    fn pass(&mut self) {
        self.trials += 1;
    }

    fn fail(&mut self, why: impl FnOnce() -> String) {
        self.trials += 1;
        self.failures += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(why());
        }
    }

    fn check(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(why)
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "property={} trials={} failures={}", self.name, self.trials, self.failures)?;
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample={c:?}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Instances per property.
    pub iters: u64,
    pub gen: GenConfig,
    /// Algorithm used by the properties that are not about algorithms.
    pub algorithm: Algorithm,
    /// Reverse the symbol precedence seen by the oracle, so that the oracle
    /// comparison disagrees with the order. Used to test the checker itself.
    pub inject_oracle_fault: bool,
    /// Substitutions tried per stability witness.
    pub substitutions: usize,
}

impl Default for CheckOptions {
    fn default() -> CheckOptions {
        CheckOptions {
            iters: 100,
            gen: GenConfig::default(),
            algorithm: Algorithm::Optimized,
            inject_oracle_fault: false,
            substitutions: 10,
        }
    }
}

/// Gives up on a property after this many draws per requested instance.
const ATTEMPTS_PER_TRIAL: u64 = 50;

pub const PROPERTY_NAMES: [&str; 12] = [
    "oracle_equivalence",
    "algorithms_agree",
    "ground_totality",
    "grounding_stability",
    "monomorphizing_stability",
    "transitivity",
    "orange_compatibility",
    "orange_subterm",
    "diff",
    "top_bot_minimal",
    "weight_grounding",
    "weight_monomorphizing",
];

/// Runs every property that applies to `p`.
pub fn check_all(p: &OrderParams, opts: &CheckOptions) -> Vec<Report> {
    PROPERTY_NAMES.iter().filter_map(|n| check_named(n, p, opts)).collect()
}

/// Runs one property by name; `None` if the name is unknown or the property
/// does not apply to the order kind of `p`.
pub fn check_named(name: &str, p: &OrderParams, opts: &CheckOptions) -> Option<Report> {
    let mut c = Checker::new(p, opts);
    Some(match name {
        "oracle_equivalence" => c.oracle_equivalence(),
        "algorithms_agree" => c.algorithms_agree(),
        "ground_totality" => c.ground_totality(),
        "grounding_stability" => c.grounding_stability(),
        "monomorphizing_stability" => c.monomorphizing_stability(),
        "transitivity" => c.transitivity(),
        "orange_compatibility" => c.orange_compatibility(),
        "orange_subterm" => c.orange_subterm(),
        "diff" => c.diff(),
        "top_bot_minimal" => c.top_bot_minimal(),
        "weight_grounding" if p.kind == OrderKind::Kbo => c.weight_grounding(),
        "weight_monomorphizing" if p.kind == OrderKind::Kbo => c.weight_monomorphizing(),
        _ => return None,
    })
}

pub struct Checker<'a> {
    pub p: &'a OrderParams,
    pub opts: &'a CheckOptions,
    pub gen: Gen,
}

fn pair(t: &Term, s: &Term) -> String {
    format!("t = {t}, s = {s}")
}

fn free_vars(ts: &[&Term]) -> Vec<(Name, Type)> {
    let mut out = Vec::new();
    for t in ts {
        t.free_vars(&mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn type_vars(ts: &[&Term]) -> Vec<Name> {
    let mut out = Vec::new();
    for t in ts {
        t.type_vars(&mut out);
    }
    out.sort();
    out.dedup();
    out
}

impl<'a> Checker<'a> {
    pub fn new(p: &'a OrderParams, opts: &'a CheckOptions) -> Checker<'a> {
        Checker { p, opts, gen: Gen::new(opts.gen.clone()) }
    }

    fn budget(&self) -> u64 {
        self.opts.iters.saturating_mul(ATTEMPTS_PER_TRIAL)
    }

    /// Compares with the configured algorithm. Generated instances are well
    /// typed, so an error here is a bug and panics.
    pub fn compare(&self, t: &Term, s: &Term) -> Cmp {
        self.compare_with(t, s, self.opts.algorithm)
    }

    fn compare_with(&self, t: &Term, s: &Term, a: Algorithm) -> Cmp {
        match compare_using(t, s, self.p, self.p.kind, a) {
            Ok((c, _)) => c,
            Err(e) => panic!("comparing {t} with {s}: {e}"),
        }
    }

    /// Two terms of a common sampled type, sharing one variable pool.
    pub fn pair(&mut self, ground: bool) -> Result<(Term, Term), GenError> {
        self.gen.reset_vars();
        let ty = self.gen.sample_type(self.p, ground);
        let t = self.gen.term(self.p, &ty, ground)?;
        let s = self.gen.term(self.p, &ty, ground)?;
        Ok((t, s))
    }

    fn triple(&mut self, ground: bool) -> Result<(Term, Term, Term), GenError> {
        self.gen.reset_vars();
        let ty = self.gen.sample_type(self.p, ground);
        Ok((
            self.gen.term(self.p, &ty, ground)?,
            self.gen.term(self.p, &ty, ground)?,
            self.gen.term(self.p, &ty, ground)?,
        ))
    }

    /// Draws instances until `iters` were tested or the attempt budget ran
    /// out. `step` returns whether the draw produced an instance.
    fn run(&mut self, name: &'static str, mut step: impl FnMut(&mut Self, &mut Report) -> bool) -> Report {
        let mut r = Report::new(name);
        let mut attempts = 0;
        while r.trials < self.opts.iters && attempts < self.budget() {
            attempts += 1;
            step(self, &mut r);
        }
        r
    }

    pub fn oracle_equivalence(&mut self) -> Report {
        let mut oracle_params = self.p.clone();
        if self.opts.inject_oracle_fault {
            oracle_params.precedence.reverse();
            oracle_params.refresh();
        }
        self.run("oracle_equivalence", |c, r| {
            let Ok((t, s)) = c.pair(true) else { return false };
            let Ok(want) = oracle_compare(&t, &s, &oracle_params) else { return false };
            for a in [Algorithm::Naive, Algorithm::Optimized] {
                let got = c.compare_with(&t, &s, a);
                if got != want {
                    r.fail(|| format!("{}, {a} gave {got}, oracle gave {want}", pair(&t, &s)));
                    return true;
                }
            }
            r.pass();
            true
        })
    }

    pub fn algorithms_agree(&mut self) -> Report {
        self.run("algorithms_agree", |c, r| {
            let ground = c.gen.rng_bool(0.2);
            let Ok((t, s)) = c.pair(ground) else { return false };
            let naive = c.compare_with(&t, &s, Algorithm::Naive);
            let opt = c.compare_with(&t, &s, Algorithm::Optimized);
            r.check(naive == opt, || format!("{}, naive gave {naive}, optimized gave {opt}", pair(&t, &s)));
            true
        })
    }

    pub fn ground_totality(&mut self) -> Report {
        self.run("ground_totality", |c, r| {
            let Ok((t, s)) = c.pair(true) else { return false };
            let got = c.compare(&t, &s);
            r.check(matches!(got, Cmp::G | Cmp::E | Cmp::L), || format!("{}, got {got}", pair(&t, &s)));
            true
        })
    }

    /// A pair with `t ≻ s` or `t ≿ s`, oriented that way, plus the result.
    fn witness(&mut self) -> Option<(Term, Term, Cmp)> {
        let (t, s) = self.pair(false).ok()?;
        match self.compare(&t, &s) {
            c @ (Cmp::G | Cmp::GE) => Some((t, s, c)),
            c @ (Cmp::L | Cmp::LE) => Some((s, t, c.flip())),
            _ => None,
        }
    }

    pub fn grounding_stability(&mut self) -> Report {
        self.run("grounding_stability", |c, r| {
            let Some((t, s, before)) = c.witness() else { return false };
            let vars = free_vars(&[&t, &s]);
            let tyvars = type_vars(&[&t, &s]);
            for _ in 0..c.opts.substitutions {
                let Ok(mut theta) = c.gen.grounding_subst(c.p, &vars) else { continue };
                for v in &tyvars {
                    if !theta.types.contains_key(v) {
                        let ty = c.gen.small_ground_type(&c.p.signature, 2);
                        theta.types.insert(v.clone(), ty);
                    }
                }
                let (Ok(tt), Ok(ss)) =
                    (apply_substitution(&t, &theta, &c.p.signature), apply_substitution(&s, &theta, &c.p.signature))
                else {
                    continue;
                };
                let after = c.compare(&tt, &ss);
                let ok = match before {
                    Cmp::G => after == Cmp::G,
                    _ => matches!(after, Cmp::G | Cmp::E),
                };
                if !ok {
                    r.fail(|| format!("{} gave {before}; instances {tt} and {ss} gave {after}", pair(&t, &s)));
                    return true;
                }
            }
            r.pass();
            true
        })
    }

    /// For λLPO a strict result may only survive through the intermediate
    /// instance without its leading η-λs: `tθ ⪰ tθ? ≻ sθ`.
    pub fn monomorphizing_stability(&mut self) -> Report {
        self.run("monomorphizing_stability", |c, r| {
            let Some((t, s, before)) = c.witness() else { return false };
            let tyvars = type_vars(&[&t, &s]);
            let sig = &c.p.signature;
            for _ in 0..c.opts.substitutions {
                let theta = c.gen.monomorphizing_subst(sig, &tyvars);
                let (Ok(tt), Ok(ss)) = (apply_substitution(&t, &theta, sig), apply_substitution(&s, &theta, sig))
                else {
                    continue;
                };
                let after = c.compare(&tt, &ss);
                let ok = match before {
                    Cmp::G if after == Cmp::G => true,
                    Cmp::G if c.p.kind == OrderKind::Lpo => truncating_apply(&t, &theta, sig).is_ok_and(|mid| {
                        matches!(c.compare(&tt, &mid), Cmp::G | Cmp::E) && c.compare(&mid, &ss) == Cmp::G
                    }),
                    Cmp::G => false,
                    _ => matches!(after, Cmp::G | Cmp::GE | Cmp::E),
                };
                if !ok {
                    r.fail(|| format!("{} gave {before}; instances {tt} and {ss} gave {after}", pair(&t, &s)));
                    return true;
                }
            }
            r.pass();
            true
        })
    }

    /// Every triple counts; those whose first two comparisons chain are
    /// checked.
    pub fn transitivity(&mut self) -> Report {
        self.run("transitivity", |c, r| {
            let ground = c.gen.rng_bool(0.5);
            let Ok((t, s, u)) = c.triple(ground) else { return false };
            let (ts, su) = (c.compare(&t, &s), c.compare(&s, &u));
            let (hi, lo) = match (ts, su) {
                (Cmp::G, Cmp::G) => (&t, &u),
                (Cmp::L, Cmp::L) => (&u, &t),
                _ => {
                    r.pass();
                    return true;
                }
            };
            let got = c.compare(hi, lo);
            r.check(got == Cmp::G, || format!("t = {t}, s = {s}, u = {u}: {ts}, {su}, then {got}"));
            true
        })
    }

    pub fn orange_compatibility(&mut self) -> Report {
        self.run("orange_compatibility", |c, r| {
            c.gen.reset_vars();
            let ty = c.gen.sample_type(c.p, true);
            let Ok(u) = c.gen.term(c.p, &ty, true) else { return false };
            let ctx = c.gen.orange_context(&u);
            let hole = ctx.hole_type(&c.p.signature);
            let (Ok(t), Ok(s)) = (c.gen.term(c.p, &hole, true), c.gen.term(c.p, &hole, true)) else { return false };
            let (t, s) = match c.compare(&t, &s) {
                Cmp::G => (t, s),
                Cmp::L => (s, t),
                _ => return false,
            };
            let (Ok(ut), Ok(us)) = (orange_replace(&ctx, &t, &c.p.signature), orange_replace(&ctx, &s, &c.p.signature))
            else {
                return false;
            };
            let got = c.compare(&ut, &us);
            r.check(got == Cmp::G, || format!("{}, u[t] = {ut}, u[s] = {us}, got {got}", pair(&t, &s)));
            true
        })
    }

    pub fn orange_subterm(&mut self) -> Report {
        self.run("orange_subterm", |c, r| {
            c.gen.reset_vars();
            let ty = c.gen.sample_type(c.p, true);
            let Ok(u) = c.gen.term(c.p, &ty, true) else { return false };
            let positions = orange_positions(&u);
            if positions.len() < 2 {
                return false;
            }
            let i = c.gen.rng_index(positions.len() - 1) + 1;
            let s = subterm_at(&u, &positions[i].0).expect("orange position").clone();
            let got = c.compare(&u, &s);
            r.check(got == Cmp::G, || format!("{}, got {got}", pair(&u, &s)));
            true
        })
    }

    /// `u ≻ u diff⟨τ, υ⟩(s, t)` for ground `u, s, t : τ → υ`.
    pub fn diff(&mut self) -> Report {
        let has_diff = self.p.signature.decl(DIFF).is_some_and(|d| d.tyvars.len() == 2 && d.params.len() == 2);
        self.run("diff", |c, r| {
            if !has_diff {
                return false;
            }
            c.gen.reset_vars();
            let (tau, upsilon) =
                (c.gen.small_ground_type(&c.p.signature, 1), c.gen.small_ground_type(&c.p.signature, 1));
            let fty = Type::arrow(tau.clone(), upsilon.clone());
            let (Ok(u), Ok(s), Ok(t)) =
                (c.gen.term(c.p, &fty, true), c.gen.term(c.p, &fty, true), c.gen.term(c.p, &fty, true))
            else {
                return false;
            };
            let Ok(d) = diff_term(c.p, tau, upsilon, s, t) else { return false };
            let ud = apply(u.clone(), &[d]);
            let got = c.compare(&u, &ud);
            r.check(got == Cmp::G, || format!("u = {u}, u diff = {ud}, got {got}"));
            true
        })
    }

    /// `⊥ ≺ t` and `⊤ ≺ t` for ground `t` of their type, other than them.
    pub fn top_bot_minimal(&mut self) -> Report {
        let sig = &self.p.signature;
        let lows: Vec<Term> = [TOP, BOT]
            .iter()
            .filter(|c| sig.decl(c).is_some_and(|d| d.tyvars.is_empty() && d.params.is_empty() && !d.body.is_arrow()))
            .map(|c| Term::cst(c))
            .collect();
        let top_bot = match (sig.decl(TOP), sig.decl(BOT)) {
            (Some(_), Some(_)) if lows.len() == 2 => Some((lows[0].clone(), lows[1].clone())),
            _ => None,
        };
        self.run("top_bot_minimal", |c, r| {
            let Some((top, bot)) = &top_bot else { return false };
            let ty = top.result_type(&c.p.signature);
            c.gen.reset_vars();
            let Ok(t) = c.gen.term(c.p, &ty, true) else { return false };
            let tb = c.compare(top, bot);
            let ok = tb == Cmp::L
                && (t == *top || c.compare(&t, top) == Cmp::G)
                && (t == *top || t == *bot || c.compare(&t, bot) == Cmp::G);
            r.check(ok, || format!("t = {t}, ⊤ vs ⊥ gave {tb}"));
            true
        })
    }

    /// Evaluating `W(t)` under the assignment a grounding substitution
    /// induces gives `W(tθ)`.
    pub fn weight_grounding(&mut self) -> Report {
        self.run("weight_grounding", |c, r| {
            c.gen.reset_vars();
            let ty = c.gen.sample_type(c.p, false);
            let Ok(t) = c.gen.term(c.p, &ty, false) else { return false };
            let vars = free_vars(&[&t]);
            let Ok(mut theta) = c.gen.grounding_subst(c.p, &vars) else { return false };
            for v in type_vars(&[&t]) {
                if let Entry::Vacant(e) = theta.types.entry(v) {
                    e.insert(c.gen.small_ground_type(&c.p.signature, 2));
                }
            }
            let w = weight_poly(&t, c.p);
            let Ok(tt) = apply_substitution(&t, &theta, &c.p.signature) else { return false };
            let want = weight_poly(&tt, c.p);
            let got = assignment_from_grounding(&theta, w.indeterminates(), c.p)
                .map_err(|e| e.to_string())
                .and_then(|a| w.eval(&a).map_err(|e| e.to_string()));
            r.check(got.as_ref().ok() == want.as_constant().as_ref(), || {
                format!("t = {t}, θ = {}, W(t) = {w}, evaluated {got:?}, W(tθ) = {want}", show_subst(&theta))
            });
            true
        })
    }

    /// Substituting the indeterminates of `W(t)` as a type substitution
    /// induces gives `W(tθ)`.
    pub fn weight_monomorphizing(&mut self) -> Report {
        self.run("weight_monomorphizing", |c, r| {
            c.gen.reset_vars();
            let ty = c.gen.sample_type(c.p, false);
            let Ok(t) = c.gen.term(c.p, &ty, false) else { return false };
            let tyvars = type_vars(&[&t]);
            if tyvars.is_empty() {
                return false;
            }
            let theta = c.gen.monomorphizing_subst(&c.p.signature, &tyvars);
            let w = weight_poly(&t, c.p);
            let Ok(tt) = apply_substitution(&t, &theta, &c.p.signature) else { return false };
            let want = weight_poly(&tt, c.p);
            let got = poly_subst_from_monomorphizing(&theta, w.indeterminates(), c.p).map(|m| w.substitute(&m));
            r.check(got.as_ref() == Ok(&want), || {
                format!("t = {t}, θ = {}, W(t) = {w}, substituted {got:?}, W(tθ) = {want}", show_subst(&theta))
            });
            true
        })
    }
}

/// `diff⟨τ, υ⟩(s, t)`.
pub fn diff_term(p: &OrderParams, tau: Type, upsilon: Type, s: Term, t: Term) -> Result<Term, crate::term::TermError> {
    let d =
        Term::Sym { name: crate::term::name(DIFF), ty_args: vec![tau, upsilon], params: vec![s, t], args: Vec::new() };
    crate::term::type_of(&d, &p.signature)?;
    Ok(d)
}

fn show_subst(theta: &Substitution) -> String {
    let tys = theta.types.iter().map(|(a, t)| format!("'{a} := {t}"));
    let tms = theta.terms.iter().map(|(x, t)| format!("{x} := {t}"));
    format!("{{{}}}", tys.chain(tms).collect::<Vec<_>>().join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::GenConfig;

    fn params(kind: OrderKind) -> OrderParams {
        Gen::new(GenConfig { seed: 3, ..GenConfig::default() }).signature(kind)
    }

    #[test]
    fn every_property_passes_on_a_generated_signature() {
        for kind in [OrderKind::Kbo, OrderKind::Lpo] {
            let opts = CheckOptions { iters: 40, ..CheckOptions::default() };
            for r in check_all(&params(kind), &opts) {
                assert!(r.ok(), "{kind}: {r}");
                assert!(r.trials > 0, "{kind}: {r}");
            }
        }
    }

    #[test]
    fn an_injected_oracle_fault_is_caught() {
        let opts = CheckOptions { iters: 200, inject_oracle_fault: true, ..CheckOptions::default() };
        let r = check_named("oracle_equivalence", &params(OrderKind::Kbo), &opts).unwrap();
        assert!(!r.ok(), "{r}");
        assert!(r.to_string().contains("counterexample="));
    }

    #[test]
    fn weight_lemmas_only_apply_to_kbo() {
        let opts = CheckOptions { iters: 1, ..CheckOptions::default() };
        assert!(check_named("weight_grounding", &params(OrderKind::Lpo), &opts).is_none());
        assert!(check_named("no_such_property", &params(OrderKind::Kbo), &opts).is_none());
    }

    #[test]
    fn zero_iterations_run_nothing() {
        let opts = CheckOptions { iters: 0, ..CheckOptions::default() };
        let r = check_named("transitivity", &params(OrderKind::Lpo), &opts).unwrap();
        assert_eq!(r.to_string(), "property=transitivity trials=0 failures=0");
    }
}
