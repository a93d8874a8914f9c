//! λKBO and λLPO on polymorphic η-long β-normal preterms.
//!
//! Both orders are computed bidirectionally: one call decides `t ≻ s`,
//! `t ≿ s`, `t = s`, `t ≾ s` and `t ≺ s` at once and reports the strongest
//! established fact as a [`Cmp`]. Each order has a naive implementation that
//! follows the rule structure directly and an optimized one that shares work
//! between subcomputations; the two agree on every input.

mod kbo;
mod lpo;
mod params;
mod weight;

use std::cell::Cell;

use thiserror::Error;

pub use params::{Algorithm, OrderKind, OrderParams, ParamError};
pub use weight::weight_poly;

use crate::cmp::Cmp;
use crate::fo_order::{fo_kbo_compare, fo_lpo_compare, type_to_fo};
use crate::poly::Poly;
use crate::term::{type_of, Signature, Term, TermError, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("leaking De Bruijn index #{index} occurs with types {first} and {second}")]
    LeakingTypeConflict { index: usize, first: Type, second: Type },
}

/// Work counters for one comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Invocations of the recursive comparison function.
    pub calls: u64,
    /// Preterm nodes visited while building weight polynomials, including
    /// the nodes the optimized λKBO weighs as part of its combined pass.
    pub weight_nodes: u64,
}

#[derive(Default)]
pub(crate) struct Counters {
    pub calls: Cell<u64>,
    pub weight_nodes: Cell<u64>,
}

impl Counters {
    pub fn call(&self) {
        self.calls.set(self.calls.get() + 1);
    }

    pub fn node(&self) {
        self.weight_nodes.set(self.weight_nodes.get() + 1);
    }

    fn stats(&self) -> Stats {
        Stats { calls: self.calls.get(), weight_nodes: self.weight_nodes.get() }
    }
}

/// Compares `t` with `s` using the order and algorithm selected in `p`.
pub fn compare(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, OrderError> {
    compare_with_stats(t, s, p).map(|(c, _)| c)
}

pub fn compare_with_stats(t: &Term, s: &Term, p: &OrderParams) -> Result<(Cmp, Stats), OrderError> {
    compare_using(t, s, p, p.kind, p.algorithm)
}

pub fn compare_kbo_naive(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, OrderError> {
    compare_using(t, s, p, OrderKind::Kbo, Algorithm::Naive).map(|(c, _)| c)
}

pub fn compare_kbo_optimized(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, OrderError> {
    compare_using(t, s, p, OrderKind::Kbo, Algorithm::Optimized).map(|(c, _)| c)
}

pub fn compare_lpo_naive(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, OrderError> {
    compare_using(t, s, p, OrderKind::Lpo, Algorithm::Naive).map(|(c, _)| c)
}

pub fn compare_lpo_optimized(t: &Term, s: &Term, p: &OrderParams) -> Result<Cmp, OrderError> {
    compare_using(t, s, p, OrderKind::Lpo, Algorithm::Optimized).map(|(c, _)| c)
}

/// Entry point shared by all four algorithms: type checks, the leaking-index
/// consistency check and the equality short-circuit happen here, once.
pub fn compare_using(
    t: &Term,
    s: &Term,
    p: &OrderParams,
    kind: OrderKind,
    algorithm: Algorithm,
) -> Result<(Cmp, Stats), OrderError> {
    type_of(t, &p.signature)?;
    type_of(s, &p.signature)?;
    if let Err(e) = check_leaking_types(t, s) {
        return if p.strict { Err(e) } else { Ok((Cmp::U, Stats::default())) };
    }
    if t == s {
        return Ok((Cmp::E, Stats::default()));
    }
    let counters = Counters::default();
    let c = match (kind, algorithm) {
        (OrderKind::Kbo, Algorithm::Naive) => kbo::naive(t, s, p, &counters),
        (OrderKind::Kbo, Algorithm::Optimized) => kbo::optimized(t, s, p, &counters),
        (OrderKind::Lpo, Algorithm::Naive) => lpo::naive(t, s, p, &counters),
        (OrderKind::Lpo, Algorithm::Optimized) => lpo::optimized(t, s, p, &counters),
    };
    Ok((c, counters.stats()))
}

fn check_leaking_types(t: &Term, s: &Term) -> Result<(), OrderError> {
    let mut seen = Vec::new();
    t.leaking_types(0, &mut seen);
    s.leaking_types(0, &mut seen);
    seen.sort_by_key(|(i, _)| *i);
    for w in seen.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 != w[1].1 {
            return Err(OrderError::LeakingTypeConflict {
                index: w[0].0,
                first: w[0].1.clone(),
                second: w[1].1.clone(),
            });
        }
    }
    Ok(())
}

/// `υ ⊵ τ`: `τ` is not a type variable, or the two types coincide.
pub fn type_relaxed_ge_types(upsilon: &Type, tau: &Type) -> bool {
    !tau.is_var() || upsilon == tau
}

/// `t ⊵ s` on the types of `t` and `s`.
pub fn type_relaxed_ge(t: &Term, s: &Term, sig: &Signature) -> bool {
    // λ-abstractions have arrow types, which are never type variables.
    if s.is_lam() {
        return true;
    }
    let tau = s.result_type(sig);
    if !tau.is_var() {
        return true;
    }
    !t.is_lam() && t.result_type(sig) == tau
}

/// Keeps `G`/`GE` only if `t ⊵ s` and `L`/`LE` only if `s ⊵ t`.
pub(crate) fn consider_poly(t: &Term, s: &Term, sig: &Signature, c: Cmp) -> Cmp {
    match c {
        Cmp::G | Cmp::GE if !type_relaxed_ge(t, s, sig) => Cmp::U,
        Cmp::L | Cmp::LE if !type_relaxed_ge(s, t, sig) => Cmp::U,
        c => c,
    }
}

/// The first-order type order matching the term order in `p`.
pub fn compare_types(upsilon: &Type, tau: &Type, p: &OrderParams) -> Cmp {
    if upsilon == tau {
        return Cmp::E;
    }
    let (a, b) = (type_to_fo(upsilon), type_to_fo(tau));
    let tp = p.type_order();
    match p.kind {
        OrderKind::Kbo => fo_kbo_compare(&a, &b, &tp),
        OrderKind::Lpo => fo_lpo_compare(&a, &b, &tp),
    }
}

/// `W(t) − W(s)` as a polynomial.
pub fn weight_difference(t: &Term, s: &Term, p: &OrderParams) -> Poly {
    weight_poly(t, p).sub(&weight_poly(s, p))
}
