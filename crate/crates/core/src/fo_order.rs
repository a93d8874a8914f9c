//! Untyped first-order KBO (ordinal weights, argument coefficients) and LPO.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::cmp::Cmp;
use crate::ordinal::Ordinal;
use crate::term::{Name, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoTerm<K> {
    Var(Name),
    App(K, Vec<FoTerm<K>>),
}

/// Weights, coefficients and precedence for a first-order signature whose
/// symbols are keys of type `K`.
pub trait FoParams<K> {
    fn weight(&self, f: &K) -> Ordinal;
    /// Coefficient of the `i`th argument, 1-based.
    fn coeff(&self, f: &K, i: usize) -> Ordinal;
    fn prec(&self, f: &K, g: &K) -> Ordering;
}

pub fn fo_kbo_weight<K, P: FoParams<K>>(t: &FoTerm<K>, p: &P) -> Ordinal {
    match t {
        FoTerm::Var(_) => Ordinal::zero(),
        FoTerm::App(f, args) => {
            let mut w = p.weight(f);
            for (i, a) in args.iter().enumerate() {
                w += &(&p.coeff(f, i + 1) * &fo_kbo_weight(a, p));
            }
            w
        }
    }
}

fn count_vars<K>(t: &FoTerm<K>, sign: i64, acc: &mut BTreeMap<Name, i64>) {
    match t {
        FoTerm::Var(x) => *acc.entry(x.clone()).or_insert(0) += sign,
        FoTerm::App(_, args) => args.iter().for_each(|a| count_vars(a, sign, acc)),
    }
}

/// Every variable of `s` occurs at least as often in `t`.
fn var_dominates<K>(t: &FoTerm<K>, s: &FoTerm<K>) -> bool {
    let mut acc = BTreeMap::new();
    count_vars(t, 1, &mut acc);
    count_vars(s, -1, &mut acc);
    acc.values().all(|&n| n >= 0)
}

fn kbo_greater<K: PartialEq, P: FoParams<K>>(t: &FoTerm<K>, s: &FoTerm<K>, p: &P) -> bool {
    if !var_dominates(t, s) {
        return false;
    }
    let (wt, ws) = (fo_kbo_weight(t, p), fo_kbo_weight(s, p));
    match wt.cmp(&ws) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match (t, s) {
            (FoTerm::App(g, ts), FoTerm::App(f, ss)) => match p.prec(g, f) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => lex_greater(ts, ss, &mut |a, b| kbo_greater(a, b, p)),
            },
            _ => false,
        },
    }
}

fn lex_greater<K: PartialEq>(
    ts: &[FoTerm<K>],
    ss: &[FoTerm<K>],
    gt: &mut impl FnMut(&FoTerm<K>, &FoTerm<K>) -> bool,
) -> bool {
    for (a, b) in ts.iter().zip(ss) {
        if a != b {
            return gt(a, b);
        }
    }
    false
}

fn lift<K: PartialEq>(t: &FoTerm<K>, s: &FoTerm<K>, gt: impl Fn(&FoTerm<K>, &FoTerm<K>) -> bool) -> Cmp {
    if t == s {
        Cmp::E
    } else if gt(t, s) {
        Cmp::G
    } else if gt(s, t) {
        Cmp::L
    } else {
        Cmp::U
    }
}

/// Strict first-order KBO wrapped into `G`, `E`, `L` or `U`.
pub fn fo_kbo_compare<K: PartialEq, P: FoParams<K>>(t: &FoTerm<K>, s: &FoTerm<K>, p: &P) -> Cmp {
    lift(t, s, |a, b| kbo_greater(a, b, p))
}

fn lpo_greater<K: PartialEq, P: FoParams<K>>(t: &FoTerm<K>, s: &FoTerm<K>, p: &P) -> bool {
    let FoTerm::App(g, ts) = t else {
        return false;
    };
    if ts.iter().any(|ti| ti == s || lpo_greater(ti, s, p)) {
        return true;
    }
    let FoTerm::App(f, ss) = s else {
        return false;
    };
    let chkargs = || ss.iter().all(|si| lpo_greater(t, si, p));
    match p.prec(g, f) {
        Ordering::Greater => chkargs(),
        Ordering::Less => false,
        Ordering::Equal => lex_greater(ts, ss, &mut |a, b| lpo_greater(a, b, p)) && chkargs(),
    }
}

/// Strict first-order LPO wrapped into `G`, `E`, `L` or `U`.
pub fn fo_lpo_compare<K: PartialEq, P: FoParams<K>>(t: &FoTerm<K>, s: &FoTerm<K>, p: &P) -> Cmp {
    lift(t, s, |a, b| lpo_greater(a, b, p))
}

/// Views a type as a first-order term over its constructors.
pub fn type_to_fo(ty: &Type) -> FoTerm<Name> {
    match ty {
        Type::Var(v) => FoTerm::Var(v.clone()),
        Type::Con(c, args) => FoTerm::App(c.clone(), args.iter().map(type_to_fo).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Unit;

    impl FoParams<&'static str> for Unit {
        fn weight(&self, _: &&'static str) -> Ordinal {
            Ordinal::one()
        }
        fn coeff(&self, f: &&'static str, _: usize) -> Ordinal {
            if *f == "h" {
                Ordinal::nat(2)
            } else {
                Ordinal::one()
            }
        }
        fn prec(&self, f: &&'static str, g: &&'static str) -> Ordering {
            f.cmp(g)
        }
    }

    fn app(f: &'static str, args: Vec<FoTerm<&'static str>>) -> FoTerm<&'static str> {
        FoTerm::App(f, args)
    }

    fn var(x: &str) -> FoTerm<&'static str> {
        FoTerm::Var(crate::term::name(x))
    }

    #[test]
    fn kbo_examples() {
        let a = app("a", vec![]);
        assert_eq!(fo_kbo_weight(&var("x"), &Unit), Ordinal::zero());
        assert_eq!(fo_kbo_weight(&app("f", vec![var("x")]), &Unit), Ordinal::one());
        assert_eq!(fo_kbo_weight(&app("h", vec![a.clone()]), &Unit), Ordinal::nat(3));
        assert_eq!(fo_kbo_compare(&app("f", vec![var("x")]), &var("x"), &Unit), Cmp::G);
        assert_eq!(fo_kbo_compare(&app("g", vec![a.clone()]), &app("f", vec![a.clone()]), &Unit), Cmp::G);
        assert_eq!(fo_kbo_compare(&var("x"), &var("y"), &Unit), Cmp::U);
    }

    #[test]
    fn lpo_examples() {
        let a = app("a", vec![]);
        let ga = app("g", vec![a.clone()]);
        assert_eq!(fo_lpo_compare(&app("f", vec![ga.clone()]), &ga, &Unit), Cmp::G);
        assert_eq!(fo_lpo_compare(&ga, &app("f", vec![a.clone()]), &Unit), Cmp::G);
        assert_eq!(fo_lpo_compare(&var("x"), &a, &Unit), Cmp::U);
    }
}
