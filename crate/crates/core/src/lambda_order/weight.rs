//! The polymorphic weight function.
//!
//! An applied variable `y t̄` contributes `1 + w[key]` plus, for each steady
//! trailing argument `tᵢ`, `k[key, i] · (W(tᵢ) − w_db)`, where `key` is the
//! variable applied to the normalized non-steady prefix. Two refinements keep
//! the weight sound under type instantiation:
//!
//! * When the spine type of `y t̄` is a type variable `α`, every argument goes
//!   into the key and the head gets `w_λ · a[α]` for the λs that
//!   instantiating `α` adds in front of it. Its η-expanded index arguments
//!   either are steady, where they weigh exactly `w_db` and so contribute
//!   nothing, or become part of the instance's key.
//! * Symbol and De Bruijn heads of spine type `α` get `(w_λ + w_db) · h[α]`,
//!   one λ and one index per η-expansion, each with coefficient 1.

use crate::lambda_order::{Counters, OrderParams};
use crate::ordinal::Ordinal;
use crate::poly::{Indeterminate, Monomial, Poly};
use crate::term::{is_steady, norm_key, Term, Type};

/// `W(t)`.
pub fn weight_poly(t: &Term, p: &OrderParams) -> Poly {
    Weigher { p, counters: &Counters::default() }.weight(t)
}

pub(crate) struct Weigher<'a> {
    pub p: &'a OrderParams,
    pub counters: &'a Counters,
}

/// Index of the first argument of the longest steady suffix.
pub(crate) fn steady_suffix_start(args: &[Term], spine_ty: &Type, p: &OrderParams) -> usize {
    if spine_ty.is_var() {
        return args.len();
    }
    let mut j = args.len();
    while j > 0 && !args[j - 1].is_lam() && is_steady(&args[j - 1], &p.signature) {
        j -= 1;
    }
    j
}

/// The key `y NORM(t̄↿)` of an applied variable.
pub(crate) fn var_key(t: &Term, prefix_len: usize, p: &OrderParams) -> Term {
    let Term::Var { name, ty, args } = t else { panic!("not a variable spine: {t}") };
    Term::Var { name: name.clone(), ty: ty.clone(), args: args[..prefix_len].iter().map(|a| norm_key(a, p)).collect() }
}

impl Weigher<'_> {
    pub fn weight(&self, t: &Term) -> Poly {
        self.counters.node();
        let p = self.p;
        match t {
            Term::Lam { body, .. } => {
                let mut w = self.weight(body);
                w.add_term(Monomial::one(), p.w_lambda.clone());
                w
            }
            Term::Sym { name, ty_args, args, .. } => {
                let mut w = Poly::constant(p.weight(name));
                for (i, a) in args.iter().enumerate() {
                    let k = p.coeff(name, i + 1);
                    let wa = self.weight(a);
                    if k == Ordinal::one() {
                        w.add_assign_poly(&wa);
                    } else {
                        w.add_assign_poly(&wa.scale(&k));
                    }
                }
                let head = p.signature.head_type(name, ty_args).expect("well-formed term");
                self.add_eta(&mut w, head.apply_n(args.len()).expect("well-formed term"));
                w
            }
            Term::Db { ty, args, .. } => {
                let mut w = Poly::constant(p.w_db.clone());
                for a in args {
                    w.add_assign_poly(&self.weight(a));
                }
                self.add_eta(&mut w, ty.apply_n(args.len()).expect("well-formed term"));
                w
            }
            Term::Var { ty, args, .. } => {
                let spine = ty.apply_n(args.len()).expect("well-formed term");
                let j = steady_suffix_start(args, spine, p);
                let key = var_key(t, j, p);
                let mut w = Poly::nat(1);
                if let Type::Var(alpha) = spine {
                    w.add_term(Monomial::of(Indeterminate::A(alpha.clone())), p.w_lambda.clone());
                }
                for (i, a) in args[j..].iter().enumerate() {
                    let mut d = self.weight(a);
                    d.add_term(Monomial::one(), -&p.w_db);
                    w.add_assign_poly(&d.times_var(&Indeterminate::K(key.clone(), i + 1)));
                }
                w.add_term(Monomial::of(Indeterminate::W(key)), Ordinal::one());
                w
            }
        }
    }

    fn add_eta(&self, w: &mut Poly, spine: &Type) {
        if let Type::Var(alpha) = spine {
            w.add_term(Monomial::of(Indeterminate::H(alpha.clone())), &self.p.w_lambda + &self.p.w_db);
        }
    }
}
