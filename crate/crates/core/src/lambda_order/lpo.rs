//! λLPO: the direct rule-by-rule comparison and a memoized variant that
//! merges the overlapping subterm and argument checks.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::slice;

use crate::cmp::{cw_ext, lex_ext, Cmp};
use crate::lambda_order::kbo::{compare_syms, compare_var_args, db_rank, same_var};
use crate::lambda_order::{compare_types, consider_poly, Counters, OrderParams};
use crate::term::Term;

pub(crate) fn naive(t: &Term, s: &Term, p: &OrderParams, counters: &Counters) -> Cmp {
    Naive { p, counters }.compare_terms(t, s)
}

pub(crate) fn optimized(t: &Term, s: &Term, p: &OrderParams, counters: &Counters) -> Cmp {
    Optimized { p, counters, memo: RefCell::new(HashMap::new()) }.compare_terms(t, s)
}

/// The immediate subterms: arguments, or the body of a λ.
fn subs(t: &Term) -> &[Term] {
    match t {
        Term::Lam { body, .. } => slice::from_ref(body),
        _ => t.args(),
    }
}

fn params_then_args(t: &Term) -> Vec<&Term> {
    match t {
        Term::Sym { params, args, .. } => params.iter().chain(args).collect(),
        _ => t.args().iter().collect(),
    }
}

fn consider_poly_below_ws(g: &str, t: &Term, s: &Term, p: &OrderParams, c: Cmp) -> Cmp {
    if p.above_watershed(g) {
        c
    } else {
        consider_poly(t, s, &p.signature, c)
    }
}

fn sym_types(t: &Term) -> &[crate::term::Type] {
    match t {
        Term::Sym { ty_args, .. } => ty_args,
        _ => &[],
    }
}

struct Naive<'a> {
    p: &'a OrderParams,
    counters: &'a Counters,
}

impl Naive<'_> {
    fn check_subs(&self, ts: &[Term], s: &Term) -> bool {
        ts.iter().any(|ti| self.compare_terms(ti, s).is_ge())
    }

    fn check_args(&self, t: &Term, ss: &[Term]) -> bool {
        ss.iter().all(|si| self.compare_terms(t, si) == Cmp::G)
    }

    fn compare_args(&self, t: &Term, s: &Term) -> Cmp {
        let (l, r) = (params_then_args(t), params_then_args(s));
        match lex_ext(&mut |a: &&Term, b: &&Term| self.compare_terms(a, b), &l, &r) {
            c @ (Cmp::G | Cmp::GE) if self.check_args(t, s.args()) => c,
            c @ (Cmp::L | Cmp::LE) if self.check_args(s, t.args()) => c,
            Cmp::E => Cmp::E,
            _ => Cmp::U,
        }
    }

    fn compare_terms(&self, t: &Term, s: &Term) -> Cmp {
        self.counters.call();
        let p = self.p;
        let poly = |c| consider_poly(t, s, &p.signature, c);
        let (ts, ss) = (subs(t), subs(s));
        if let Term::Var { args: ts, .. } = t {
            return match s {
                Term::Var { args: ss, .. } if same_var(t, s) => {
                    compare_var_args(ts, ss, p, || cw_ext(&mut |a: &Term, b: &Term| self.compare_terms(a, b), ts, ss))
                }
                Term::Var { .. } => Cmp::U,
                _ if self.check_subs(ss, t) => Cmp::L,
                _ => Cmp::U,
            };
        }
        if self.check_subs(ts, s) {
            return Cmp::G;
        }
        if matches!(s, Term::Var { .. }) || self.check_subs(ss, t) {
            return if matches!(s, Term::Var { .. }) { Cmp::U } else { Cmp::L };
        }
        match (t, s) {
            (Term::Sym { name: g, .. }, Term::Sym { name: f, .. }) => {
                let sym = match compare_syms(g, f, p) {
                    Cmp::E => lex_ext(&mut |a: &_, b: &_| compare_types(a, b, p), sym_types(t), sym_types(s)),
                    c => c,
                };
                match sym {
                    Cmp::G if self.check_args(t, ss) => consider_poly_below_ws(g, t, s, p, Cmp::G),
                    Cmp::L if self.check_args(s, ts) => consider_poly_below_ws(f, t, s, p, Cmp::L),
                    Cmp::E if compare_syms(g, f, p) == Cmp::E => self.compare_args(t, s),
                    _ => Cmp::U,
                }
            }
            (Term::Sym { name: g, .. }, Term::Db { .. } | Term::Lam { .. }) => {
                if p.above_watershed(g) {
                    if self.check_args(t, ss) {
                        return Cmp::G;
                    }
                } else if self.check_args(s, ts) {
                    return poly(Cmp::L);
                }
                Cmp::U
            }
            (Term::Db { .. } | Term::Lam { .. }, Term::Sym { name: f, .. }) => {
                if p.above_watershed(f) {
                    if self.check_args(s, ts) {
                        return Cmp::L;
                    }
                } else if self.check_args(t, ss) {
                    return poly(Cmp::G);
                }
                Cmp::U
            }
            (Term::Db { .. }, Term::Db { .. }) => match db_rank(t).cmp(&db_rank(s)) {
                Ordering::Greater if self.check_args(t, ss) => poly(Cmp::G),
                Ordering::Less if self.check_args(s, ts) => poly(Cmp::L),
                Ordering::Equal => self.compare_args(t, s),
                _ => Cmp::U,
            },
            (Term::Db { .. }, Term::Lam { .. }) if self.check_args(t, ss) => Cmp::G,
            (Term::Lam { .. }, Term::Db { .. }) if self.check_args(s, ts) => Cmp::L,
            (Term::Lam { ty: u, body: tb }, Term::Lam { ty: v, body: sb }) => match compare_types(u, v, p) {
                Cmp::G if self.check_args(t, ss) => Cmp::G,
                Cmp::E => self.compare_terms(tb, sb),
                Cmp::L if self.check_args(s, ts) => Cmp::L,
                _ => Cmp::U,
            },
            _ => Cmp::U,
        }
    }
}

/// Results are memoized per pair of subterm addresses. The comparison never
/// builds new terms, so an address identifies one subterm for the whole call.
struct Optimized<'a> {
    p: &'a OrderParams,
    counters: &'a Counters,
    memo: RefCell<HashMap<(*const Term, *const Term), Cmp>>,
}

impl Optimized<'_> {
    fn check_subs(&self, ts: &[Term], s: &Term) -> bool {
        ts.iter().any(|ti| self.compare_terms(ti, s).is_ge())
    }

    fn compare_subs_both_ways(&self, t: &Term, s: &Term) -> Cmp {
        if self.check_subs(subs(t), s) {
            Cmp::G
        } else if self.check_subs(subs(s), t) {
            Cmp::L
        } else {
            Cmp::U
        }
    }

    /// `G` if `t` beats every element of `ss`, `L` if some element is at
    /// least `t`, `U` otherwise.
    fn compare_rest(&self, t: &Term, ss: &[Term]) -> Cmp {
        for (j, sj) in ss.iter().enumerate() {
            match self.compare_terms(t, sj) {
                Cmp::G => {}
                Cmp::E | Cmp::LE | Cmp::L => return Cmp::L,
                Cmp::GE | Cmp::U => return if self.check_subs(&ss[j + 1..], t) { Cmp::L } else { Cmp::U },
            }
        }
        Cmp::G
    }

    /// Settles a comparison whose precedence or type check favours `t`:
    /// `t` must beat the rest `ss` of `s`'s subterms.
    fn win(&self, t: &Term, s: &Term, ss: &[Term], guard: impl FnOnce(Cmp) -> Cmp) -> Cmp {
        match self.compare_rest(t, ss) {
            Cmp::G => match guard(Cmp::G) {
                Cmp::G => Cmp::G,
                _ => self.compare_subs_both_ways(t, s),
            },
            Cmp::L => Cmp::L,
            _ => self.compare_subs_both_ways(t, s),
        }
    }

    fn lose(&self, t: &Term, s: &Term, ts: &[Term], guard: impl FnOnce(Cmp) -> Cmp) -> Cmp {
        match self.compare_rest(s, ts) {
            Cmp::G => match guard(Cmp::L) {
                Cmp::L => Cmp::L,
                _ => self.compare_subs_both_ways(t, s),
            },
            Cmp::L => Cmp::G,
            _ => self.compare_subs_both_ways(t, s),
        }
    }

    /// Turns a result obtained without the subterm checks into the one the
    /// full rule set gives. A subterm of one side can only reach the other
    /// side when the comparison is not already strict the other way.
    fn settle(&self, t: &Term, s: &Term, c: Cmp) -> Cmp {
        match c {
            Cmp::GE if self.check_subs(subs(t), s) => Cmp::G,
            Cmp::LE if self.check_subs(subs(s), t) => Cmp::L,
            Cmp::U => self.compare_subs_both_ways(t, s),
            c => c,
        }
    }

    /// Lexicographic comparison of the parameters and arguments of two terms
    /// with the same head, checking only the arguments not yet known to be
    /// dominated.
    fn compare_args(&self, t: &Term, s: &Term) -> Cmp {
        let (l, r) = (params_then_args(t), params_then_args(s));
        let skip = l.len() - t.args().len();
        let mut acc = Cmp::E;
        for (i, (a, b)) in l.iter().zip(&r).enumerate() {
            let rest = (i + 1).saturating_sub(skip);
            match self.compare_terms(a, b) {
                Cmp::E => {}
                Cmp::GE if acc != Cmp::LE => acc = Cmp::GE,
                Cmp::LE if acc != Cmp::GE => acc = Cmp::LE,
                Cmp::G if acc != Cmp::LE => return self.win(t, s, &s.args()[rest..], |c| c),
                Cmp::L if acc != Cmp::GE => return self.lose(t, s, &t.args()[rest..], |c| c),
                _ => return self.compare_subs_both_ways(t, s),
            }
        }
        self.settle(t, s, acc)
    }

    fn compare_terms(&self, t: &Term, s: &Term) -> Cmp {
        let key = (t as *const Term, s as *const Term);
        if let Some(&c) = self.memo.borrow().get(&key) {
            return c;
        }
        self.counters.call();
        let c = self.compare_uncached(t, s);
        self.memo.borrow_mut().insert(key, c);
        c
    }

    fn compare_uncached(&self, t: &Term, s: &Term) -> Cmp {
        let p = self.p;
        let poly = |c| consider_poly(t, s, &p.signature, c);
        let (ts, ss) = (subs(t), subs(s));
        match (t, s) {
            (Term::Var { args: ts, .. }, Term::Var { args: ss, .. }) => {
                if !same_var(t, s) {
                    return Cmp::U;
                }
                compare_var_args(ts, ss, p, || cw_ext(&mut |a: &Term, b: &Term| self.compare_terms(a, b), ts, ss))
            }
            (Term::Var { .. }, _) => {
                if self.check_subs(ss, t) {
                    Cmp::L
                } else {
                    Cmp::U
                }
            }
            (_, Term::Var { .. }) => {
                if self.check_subs(ts, s) {
                    Cmp::G
                } else {
                    Cmp::U
                }
            }
            (Term::Sym { name: g, .. }, Term::Sym { name: f, .. }) => {
                let sym = match compare_syms(g, f, p) {
                    Cmp::E => lex_ext(&mut |a: &_, b: &_| compare_types(a, b, p), sym_types(t), sym_types(s)),
                    c => c,
                };
                match sym {
                    Cmp::G => self.win(t, s, ss, |c| consider_poly_below_ws(g, t, s, p, c)),
                    Cmp::L => self.lose(t, s, ts, |c| consider_poly_below_ws(f, t, s, p, c)),
                    Cmp::E if compare_syms(g, f, p) == Cmp::E => self.compare_args(t, s),
                    _ => self.compare_subs_both_ways(t, s),
                }
            }
            (Term::Sym { name: g, .. }, Term::Db { .. } | Term::Lam { .. }) => {
                if p.above_watershed(g) {
                    self.win(t, s, ss, |c| c)
                } else {
                    self.lose(t, s, ts, poly)
                }
            }
            (Term::Db { .. } | Term::Lam { .. }, Term::Sym { name: f, .. }) => {
                if p.above_watershed(f) {
                    self.lose(t, s, ts, |c| c)
                } else {
                    self.win(t, s, ss, poly)
                }
            }
            (Term::Db { .. }, Term::Db { .. }) => match db_rank(t).cmp(&db_rank(s)) {
                Ordering::Greater => self.win(t, s, ss, poly),
                Ordering::Less => self.lose(t, s, ts, poly),
                Ordering::Equal => self.compare_args(t, s),
            },
            (Term::Db { .. }, Term::Lam { .. }) => self.win(t, s, ss, |c| c),
            (Term::Lam { .. }, Term::Db { .. }) => self.lose(t, s, ts, |c| c),
            (Term::Lam { ty: u, body: tb }, Term::Lam { ty: v, body: sb }) => match compare_types(u, v, p) {
                Cmp::G => self.win(t, s, ss, |c| c),
                Cmp::E => {
                    let c = self.compare_terms(tb, sb);
                    self.settle(t, s, c)
                }
                Cmp::L => self.lose(t, s, ts, |c| c),
                _ => self.compare_subs_both_ways(t, s),
            },
        }
    }
}
