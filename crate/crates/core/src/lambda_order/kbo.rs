//! λKBO: naive two-pass comparison and the interleaved single pass.

use std::cmp::Ordering;
use std::slice;

use crate::cmp::{cw_ext, lex_ext, Cmp};
use crate::lambda_order::weight::{steady_suffix_start, Weigher};
use crate::lambda_order::{compare_types, consider_poly, Counters, OrderParams};
use crate::ordinal::Ordinal;
use crate::poly::{Indeterminate, Poly, PolyAccumulator};
use crate::term::{is_steady, Term};

pub(crate) fn naive(t: &Term, s: &Term, p: &OrderParams, counters: &Counters) -> Cmp {
    Naive { p, w: Weigher { p, counters }, counters }.compare_terms(t, s)
}

pub(crate) fn optimized(t: &Term, s: &Term, p: &OrderParams, counters: &Counters) -> Cmp {
    Optimized { p, w: Weigher { p, counters }, counters }.process_terms(t, s).1
}

pub(super) fn same_var(t: &Term, s: &Term) -> bool {
    matches!((t, s), (Term::Var { name: y, ty: a, .. }, Term::Var { name: x, ty: b, .. }) if y == x && a == b)
}

pub(super) fn all_steady(args: &[Term], p: &OrderParams) -> bool {
    args.iter().all(|a| !a.is_lam() && is_steady(a, &p.signature))
}

/// Compares two applications of one variable argumentwise, provided every
/// pair of differing arguments is steady. Identical arguments stay identical
/// under substitution, so they need not be; this keeps the nonstrict order
/// reflexive and stable under η-expansion of the spine.
pub(super) fn compare_var_args(ts: &[Term], ss: &[Term], p: &OrderParams, cw: impl FnOnce() -> Cmp) -> Cmp {
    assert_eq!(ts.len(), ss.len(), "internal error: one variable applied to differently many arguments");
    if ts.iter().zip(ss).all(|(a, b)| a == b || all_steady(slice::from_ref(a), p)) {
        cw()
    } else {
        Cmp::U
    }
}

/// De Bruijn heads are ranked by index, then by argument count.
pub(super) fn db_rank(t: &Term) -> (usize, usize) {
    match t {
        Term::Db { index, args, .. } => (*index, args.len()),
        _ => unreachable!(),
    }
}

pub(super) fn compare_syms(g: &str, f: &str, p: &OrderParams) -> Cmp {
    Cmp::from_ordering(p.prec_cmp(g, f))
}

fn weigh_against(w: &Cmp, shapes: impl FnOnce() -> Cmp) -> Cmp {
    match w {
        Cmp::G => Cmp::G,
        Cmp::GE => shapes().merge_with_ge(),
        Cmp::E => shapes(),
        Cmp::LE => shapes().merge_with_le(),
        Cmp::L => Cmp::L,
        Cmp::U => Cmp::U,
    }
}

struct Naive<'a> {
    p: &'a OrderParams,
    w: Weigher<'a>,
    counters: &'a Counters,
}

impl Naive<'_> {
    fn compare_terms(&self, t: &Term, s: &Term) -> Cmp {
        self.counters.call();
        let d = self.w.weight(t).sub(&self.w.weight(s));
        weigh_against(&d.analyze(), || self.compare_shapes(t, s))
    }

    fn compare_shapes(&self, t: &Term, s: &Term) -> Cmp {
        let p = self.p;
        let sig = &p.signature;
        let poly = |c| consider_poly(t, s, sig, c);
        match (t, s) {
            (Term::Var { args: ts, .. }, Term::Var { args: ss, .. }) if same_var(t, s) => {
                compare_var_args(ts, ss, p, || cw_ext(&mut |a: &Term, b: &Term| self.compare_terms(a, b), ts, ss))
            }
            (Term::Var { .. }, _) | (_, Term::Var { .. }) => Cmp::U,
            (Term::Lam { ty: u, body: tb }, Term::Lam { ty: v, body: sb }) => match compare_types(u, v, p) {
                Cmp::E => self.compare_shapes(tb, sb),
                c => c,
            },
            (Term::Lam { .. }, _) => poly(Cmp::G),
            (Term::Db { .. }, Term::Lam { .. }) => poly(Cmp::L),
            (Term::Db { args: ts, .. }, Term::Db { args: ss, .. }) => match db_rank(t).cmp(&db_rank(s)) {
                Ordering::Greater => poly(Cmp::G),
                Ordering::Less => poly(Cmp::L),
                Ordering::Equal => lex_ext(&mut |a: &Term, b: &Term| self.compare_terms(a, b), ts, ss),
            },
            (Term::Db { .. }, Term::Sym { .. }) => poly(Cmp::G),
            (
                Term::Sym { name: g, ty_args: us, params: ws, args: ts },
                Term::Sym { name: f, ty_args: vs, params: vs_p, args: ss },
            ) => match compare_syms(g, f, p) {
                Cmp::E => match lex_ext(&mut |a: &_, b: &_| compare_types(a, b, p), us, vs) {
                    Cmp::E => {
                        let l: Vec<Term> = ws.iter().chain(ts).cloned().collect();
                        let r: Vec<Term> = vs_p.iter().chain(ss).cloned().collect();
                        lex_ext(&mut |a: &Term, b: &Term| self.compare_terms(a, b), &l, &r)
                    }
                    c => poly(c),
                },
                c => poly(c),
            },
            (Term::Sym { .. }, _) => poly(Cmp::L),
        }
    }
}

struct Optimized<'a> {
    p: &'a OrderParams,
    w: Weigher<'a>,
    counters: &'a Counters,
}

type Data = (Poly, Cmp);

fn consider_weight(w: Poly, cmp: Cmp) -> Data {
    let c = weigh_against(&w.analyze(), || cmp);
    (w, c)
}

/// Lexicographic extension that also returns the data of every visited pair.
fn lex_ext_data(op: &mut impl FnMut(&Term, &Term) -> Data, bs: &[Term], as_: &[Term]) -> (Vec<Poly>, Cmp) {
    assert_eq!(bs.len(), as_.len(), "lexicographic extension needs equal lengths");
    let mut ws = Vec::with_capacity(bs.len());
    let c = lex_data_from(op, bs, as_, &mut ws);
    (ws, c)
}

fn lex_data_from(op: &mut impl FnMut(&Term, &Term) -> Data, bs: &[Term], as_: &[Term], ws: &mut Vec<Poly>) -> Cmp {
    let (Some((b, bs)), Some((a, as_))) = (bs.split_first(), as_.split_first()) else {
        return Cmp::E;
    };
    let (w, c) = op(b, a);
    ws.push(w);
    match c {
        Cmp::GE => lex_data_from(op, bs, as_, ws).merge_with_ge(),
        Cmp::E => lex_data_from(op, bs, as_, ws),
        Cmp::LE => lex_data_from(op, bs, as_, ws).merge_with_le(),
        decisive => decisive,
    }
}

impl Optimized<'_> {
    fn diff(&self, t: &Term, s: &Term) -> Poly {
        self.w.weight(t).sub(&self.w.weight(s))
    }

    fn process_terms(&self, t: &Term, s: &Term) -> Data {
        self.counters.call();
        let p = self.p;
        let sig = &p.signature;
        let poly = |c| consider_poly(t, s, sig, c);
        match (t, s) {
            (Term::Var { ty, args: ts, .. }, Term::Var { args: ss, .. }) if same_var(t, s) => {
                assert_eq!(ts.len(), ss.len(), "internal error: one variable applied to differently many arguments");
                if !all_steady(ts, p) {
                    let c = compare_var_args(ts, ss, p, || {
                        cw_ext(&mut |a: &Term, b: &Term| self.process_terms(a, b).1, ts, ss)
                    });
                    return consider_weight(self.diff(t, s), c);
                }
                let (ws, c) = cw_ext_data(&mut |a: &Term, b: &Term| self.process_terms(a, b), ts, ss);
                let spine = ty.apply_n(ts.len()).expect("well-formed term");
                if steady_suffix_start(ts, spine, p) != 0 {
                    // The arguments all belong to the key, so the two keys
                    // differ and the weights share nothing.
                    return consider_weight(self.diff(t, s), c);
                }
                let key = match t {
                    Term::Var { name, ty, .. } => Term::Var { name: name.clone(), ty: ty.clone(), args: Vec::new() },
                    _ => unreachable!(),
                };
                let mut acc = PolyAccumulator::new();
                let n = ws.len();
                for (i, w) in ws.into_iter().chain((n..ts.len()).map(|i| self.diff(&ts[i], &ss[i]))).enumerate() {
                    acc.add_poly(&w.times_var(&Indeterminate::K(key.clone(), i + 1)));
                }
                consider_weight(acc.into_poly(), c)
            }
            (Term::Var { .. }, _) | (_, Term::Var { .. }) => consider_weight(self.diff(t, s), Cmp::U),
            (Term::Lam { ty: u, body: tb }, Term::Lam { ty: v, body: sb }) => match compare_types(u, v, p) {
                Cmp::E => self.process_terms(tb, sb),
                c => consider_weight(self.diff(tb, sb), c),
            },
            (Term::Lam { .. }, _) => consider_weight(self.diff(t, s), poly(Cmp::G)),
            (Term::Db { .. }, Term::Lam { .. }) => consider_weight(self.diff(t, s), poly(Cmp::L)),
            (Term::Db { args: ts, .. }, Term::Db { args: ss, .. }) => match db_rank(t).cmp(&db_rank(s)) {
                Ordering::Greater => consider_weight(self.diff(t, s), poly(Cmp::G)),
                Ordering::Less => consider_weight(self.diff(t, s), poly(Cmp::L)),
                Ordering::Equal => {
                    let ones = vec![Ordinal::one(); ts.len()];
                    self.process_args(ts, ss, &ones)
                }
            },
            (Term::Db { .. }, Term::Sym { .. }) => consider_weight(self.diff(t, s), poly(Cmp::G)),
            (
                Term::Sym { name: g, ty_args: us, params: ws, args: ts },
                Term::Sym { name: f, ty_args: vs, params: vs_p, args: ss },
            ) => match compare_syms(g, f, p) {
                Cmp::E => match lex_ext(&mut |a: &_, b: &_| compare_types(a, b, p), us, vs) {
                    Cmp::E => {
                        let l: Vec<Term> = ws.iter().chain(ts).cloned().collect();
                        let r: Vec<Term> = vs_p.iter().chain(ss).cloned().collect();
                        // Parameters are compared but carry no weight.
                        let coeffs: Vec<Ordinal> = std::iter::repeat_n(Ordinal::zero(), ws.len())
                            .chain((1..=ts.len()).map(|i| p.coeff(g, i)))
                            .collect();
                        self.process_args(&l, &r, &coeffs)
                    }
                    c => consider_weight(self.diff(t, s), poly(c)),
                },
                c => consider_weight(self.diff(t, s), poly(c)),
            },
            (Term::Sym { .. }, _) => consider_weight(self.diff(t, s), poly(Cmp::L)),
        }
    }

    /// Compares argument lists lexicographically and assembles
    /// `Σ kᵢ (W(tᵢ) − W(sᵢ))` from the visited pairs' weights, weighing the
    /// unvisited rest directly.
    fn process_args(&self, ts: &[Term], ss: &[Term], coeffs: &[Ordinal]) -> Data {
        let (ws, c) = lex_ext_data(&mut |a: &Term, b: &Term| self.process_terms(a, b), ts, ss);
        let mut acc = PolyAccumulator::new();
        let m = ws.len();
        for (w, k) in ws.iter().zip(coeffs) {
            add_scaled(&mut acc, w, k);
        }
        for i in m..ts.len() {
            if !coeffs[i].is_zero() {
                add_scaled(&mut acc, &self.diff(&ts[i], &ss[i]), &coeffs[i]);
            }
        }
        consider_weight(acc.into_poly(), c)
    }
}

fn add_scaled(acc: &mut PolyAccumulator, w: &Poly, k: &Ordinal) {
    if k.is_zero() {
    } else if *k == Ordinal::one() {
        acc.add_poly(w);
    } else {
        acc.add_poly(&w.scale(k));
    }
}

fn cw_ext_data(op: &mut impl FnMut(&Term, &Term) -> Data, bs: &[Term], as_: &[Term]) -> (Vec<Poly>, Cmp) {
    lex_ext_data(
        &mut |b: &Term, a: &Term| {
            let (w, c) = op(b, a);
            (w, c.smooth())
        },
        bs,
        as_,
    )
}
