//! Hand-checked comparisons and weights.

use std::fs;
use std::path::Path;

use lambda_orders::cmp::Cmp;
use lambda_orders::config::parse_signature;
use lambda_orders::lambda_order::{
    compare_using, weight_difference, weight_poly, Algorithm, OrderError, OrderKind, OrderParams,
};
use lambda_orders::poly::{Indeterminate, Monomial, Poly};
use lambda_orders::syntax::{parse_term, parse_type};
use lambda_orders::term::{name, Term, Type};

const SIG: &str = r#"
[types]
kappa = 0
list = 1

[symbols]
a = "kappa"
b = "kappa"
g = "(-> kappa kappa)"
nil = "(list 'a)"
arb = "'a"

[order]
precedence = ["a", "b", "g", "nil", "arb"]
watershed = "b"
"#;

fn params(kind: OrderKind) -> OrderParams {
    parse_signature(SIG, Some(kind)).unwrap()
}

fn term(src: &str, p: &OrderParams) -> Term {
    parse_term(src, &p.signature).unwrap()
}

/// The result of every algorithm of `kind`, which must agree.
fn cmp(t: &str, s: &str, kind: OrderKind) -> Cmp {
    let p = params(kind);
    let (t, s) = (term(t, &p), term(s, &p));
    let naive = compare_using(&t, &s, &p, kind, Algorithm::Naive).unwrap().0;
    let opt = compare_using(&t, &s, &p, kind, Algorithm::Optimized).unwrap().0;
    assert_eq!(naive, opt, "{t} vs {s}");
    naive
}

fn both(t: &str, s: &str) -> [Cmp; 2] {
    [cmp(t, s, OrderKind::Kbo), cmp(t, s, OrderKind::Lpo)]
}

#[test]
fn applied_variable_with_larger_argument_is_nonstrictly_greater() {
    assert_eq!(both("(var y (-> kappa kappa) b)", "(var y (-> kappa kappa) a)"), [Cmp::GE; 2]);
    assert_eq!(both("(var y (-> kappa kappa) a)", "(var y (-> kappa kappa) b)"), [Cmp::LE; 2]);
}

#[test]
fn identical_terms_are_equal() {
    let t = "(sym g () () (var y (-> (-> kappa kappa) kappa) (lam kappa (sym g () () (db 0 kappa)))))";
    assert_eq!(both(t, t), [Cmp::E; 2]);
}

#[test]
fn identical_functional_arguments_do_not_block_the_variable_rule() {
    let y = "(var y (-> (-> kappa kappa) (-> kappa kappa))";
    let t = format!("{y} (lam kappa (sym g () () (db 0 kappa))) b)");
    let s = format!("{y} (lam kappa (sym g () () (db 0 kappa))) a)");
    assert_eq!(both(&t, &s), [Cmp::GE; 2]);
    let inner = format!("(sym g () () {t})");
    let outer = format!("(sym g () () {inner})");
    assert_eq!(both(&outer, &inner), [Cmp::G; 2]);
}

#[test]
fn differing_functional_arguments_are_incomparable() {
    let y = "(var y (-> (-> kappa kappa) kappa)";
    let t = format!("{y} (lam kappa (sym g () () (db 0 kappa))))");
    let s = format!("{y} (lam kappa (db 0 kappa)))");
    assert_eq!(both(&t, &s), [Cmp::U; 2]);
}

#[test]
fn subterms_and_precedence() {
    assert_eq!(both("(sym g () () a)", "a"), [Cmp::G; 2]);
    assert_eq!(both("b", "a"), [Cmp::G; 2]);
    assert_eq!(both("(sym g () () (var x kappa))", "(var x kappa)"), [Cmp::G; 2]);
    assert_eq!(both("(var x kappa)", "(var z kappa)"), [Cmp::U; 2]);
}

#[test]
fn leaking_indices_of_different_types() {
    let mut p = params(OrderKind::Kbo);
    let t = Term::db(0, Type::base("kappa"));
    let s = Term::db(0, parse_type("(list kappa)").unwrap());
    p.strict = false;
    let lenient = compare_using(&t, &s, &p, OrderKind::Kbo, Algorithm::Naive).map(|r| r.0);
    assert_eq!(lenient, Ok(Cmp::U));
    p.strict = true;
    let e = compare_using(&t, &s, &p, OrderKind::Kbo, Algorithm::Naive).unwrap_err();
    assert!(matches!(e, OrderError::LeakingTypeConflict { index: 0, .. }), "{e}");
}

#[test]
fn ill_typed_input_is_an_error() {
    let p = params(OrderKind::Lpo);
    let bad = Term::app("g", vec![Term::cst("nil")]);
    assert!(compare_using(&bad, &Term::cst("a"), &p, OrderKind::Lpo, Algorithm::Optimized).is_err());
}

fn fixture(dir: &str, sig: &str, kind: OrderKind) -> (OrderParams, Term, Term) {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(dir);
    let p = parse_signature(&fs::read_to_string(root.join(sig)).unwrap(), Some(kind)).unwrap();
    let t = term(&fs::read_to_string(root.join("left.term")).unwrap(), &p);
    let s = term(&fs::read_to_string(root.join("right.term")).unwrap(), &p);
    (p, t, s)
}

fn w(src: &str, p: &OrderParams) -> Poly {
    let _ = p;
    let (n, ty) = src.split_once(' ').unwrap();
    Poly::var(Indeterminate::W(Term::var(n, parse_type(ty).unwrap())))
}

#[test]
fn weights_of_the_quantified_transitivity_definition() {
    let r = "r (-> kappa (-> kappa o))";
    let (p, t, s) = fixture("transitivity", "signature.toml", OrderKind::Kbo);
    assert_eq!(weight_poly(&t, &p), w(r, &p).add(&Poly::nat(4)));
    assert_eq!(weight_poly(&s, &p), w(r, &p).scale(&3.into()).add(&Poly::nat(11)));
    let (heavy, t, s) = fixture("transitivity", "heavy.toml", OrderKind::Kbo);
    assert_eq!(weight_difference(&t, &s, &heavy), Poly::nat(3));
}

#[test]
fn weight_difference_of_the_map_equation_has_mixed_signs() {
    let (p, t, s) = fixture("map_recursion", "signature.toml", OrderKind::Kbo);
    let f = Term::var("f", parse_type("(-> kappa kappa)").unwrap());
    let wx = w("x kappa", &p);
    let kf = Poly::var(Indeterminate::K(f.clone(), 1));
    let want = Poly::var(Indeterminate::W(f)).add(&wx.mul(&kf)).sub(&wx);
    let diff = weight_difference(&s, &t, &p);
    assert_eq!(diff, want);
    assert_eq!(diff.analyze(), Cmp::U);
    assert_eq!(diff.neg().analyze(), Cmp::U);
}

#[test]
fn variable_of_type_variable_type() {
    let p = params(OrderKind::Kbo).with_weight("a", 1);
    let x = term("(var x 'a)", &p);
    let mut want = w("x 'a", &p).add(&Poly::nat(1));
    want.add_term(Monomial::of(Indeterminate::A(name("a"))), p.w_lambda.clone());
    assert_eq!(weight_poly(&x, &p), want);
}

#[test]
fn symbol_of_type_variable_type() {
    let p = params(OrderKind::Kbo);
    let arb = Term::Sym { name: name("arb"), ty_args: vec![Type::var("b")], params: vec![], args: vec![] };
    let mut want = Poly::nat(1);
    want.add_term(Monomial::of(Indeterminate::H(name("b"))), &p.w_lambda + &p.w_db);
    assert_eq!(weight_poly(&arb, &p), want);
}
