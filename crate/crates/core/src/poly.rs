//! Weight polynomials with signed ordinal coefficients.
//!
//! Indeterminates stand for the unknown weight and argument multiplicities of
//! an applied variable and for the number of η-expansions a type variable
//! may cause. Polynomials are kept in standard form: an ordered map from
//! monomials (sorted multisets of indeterminates) to nonzero coefficients.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cmp::Cmp;
use crate::ordinal::Ordinal;
use crate::term::{Name, Term};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Indeterminate {
    /// Weight, minus one, of the instance of an applied variable without the
    /// λs of its remaining arguments.
    W(Term),
    /// Number of copies, scaled by coefficients, the instance makes of its
    /// `i`th remaining argument (1-based).
    K(Term, usize),
    /// η-expansions incurred by instantiating a type variable at a symbol or
    /// De Bruijn head.
    H(Name),
    /// Leading arrows of a type variable's instantiation; the η-expansion
    /// count at a variable head.
    A(Name),
}

impl fmt::Display for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indeterminate::W(t) => write!(f, "w[{t}]"),
            Indeterminate::K(t, i) => write!(f, "k[{t},{i}]"),
            Indeterminate::H(a) => write!(f, "h['{a}]"),
            Indeterminate::A(a) => write!(f, "a['{a}]"),
        }
    }
}

impl fmt::Debug for Indeterminate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A sorted multiset of indeterminates; empty for the constant monomial.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Indeterminate>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn of(x: Indeterminate) -> Monomial {
        Monomial(vec![x])
    }

    pub fn factors(&self) -> &[Indeterminate] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend(self.0.iter().cloned());
        v.extend(other.0.iter().cloned());
        v.sort();
        Monomial(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Ordinal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("assignment has no value for {0}")]
    Missing(Indeterminate),
}

pub type Assignment = BTreeMap<Indeterminate, Ordinal>;

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: Ordinal) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn nat(n: i64) -> Poly {
        Poly::constant(Ordinal::nat(n))
    }

    pub fn var(x: Indeterminate) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::of(x), Ordinal::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Ordinal)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant monomial's coefficient, zero when absent.
    pub fn constant_term(&self) -> Ordinal {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn as_constant(&self) -> Option<Ordinal> {
        match self.terms.len() {
            0 => Some(Ordinal::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn indeterminates(&self) -> Vec<Indeterminate> {
        let mut v: Vec<Indeterminate> = self.terms.keys().flat_map(|m| m.0.iter().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: Ordinal) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_poly(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_poly(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_poly(other);
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        r.sub_assign_poly(other);
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Ordinal) -> Poly {
        let mut r = Poly::zero();
        for (m, d) in &self.terms {
            r.add_term(m.clone(), c * d);
        }
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.times(m2), c1 * c2);
            }
        }
        r
    }

    /// Multiplies by a single indeterminate.
    pub fn times_var(&self, x: &Indeterminate) -> Poly {
        let m = Monomial::of(x.clone());
        Poly { terms: self.terms.iter().map(|(k, c)| (k.times(&m), c.clone())).collect() }
    }

    /// Sound but incomplete: every coefficient is nonnegative.
    pub fn surely_nonneg(&self) -> bool {
        self.terms.values().all(Ordinal::is_nonneg)
    }

    /// Sign analysis of a weight difference `W(t) − W(s)`.
    pub fn analyze(&self) -> Cmp {
        analyze_signs(self.surely_nonneg(), self.neg().surely_nonneg(), &self.constant_term())
    }

    pub fn eval(&self, a: &Assignment) -> Result<Ordinal, PolyError> {
        let mut sum = Ordinal::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for x in &m.0 {
                let xv = a.get(x).ok_or_else(|| PolyError::Missing(x.clone()))?;
                v = &v * xv;
            }
            sum += &v;
        }
        Ok(sum)
    }

    /// Replaces indeterminates by polynomials; unmapped ones stay.
    pub fn substitute(&self, map: &BTreeMap<Indeterminate, Poly>) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(c.clone());
            for x in &m.0 {
                prod = match map.get(x) {
                    Some(p) => prod.mul(p),
                    None => prod.times_var(x),
                };
            }
            r.add_assign_poly(&prod);
        }
        r
    }
}

pub(crate) fn analyze_signs(nonneg: bool, nonpos: bool, constant: &Ordinal) -> Cmp {
    match (nonneg, nonpos) {
        (false, false) => Cmp::U,
        (true, false) => {
            if constant.is_positive() {
                Cmp::G
            } else {
                Cmp::GE
            }
        }
        (false, true) => {
            if constant.signum() == std::cmp::Ordering::Less {
                Cmp::L
            } else {
                Cmp::LE
            }
        }
        (true, true) => Cmp::E,
    }
}

impl fmt::Display for Poly {
    /// Monomials in descending key order with the constant last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.signum() == std::cmp::Ordering::Less;
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let one = mag == Ordinal::one();
            let compound = mag.terms().len() > 1;
            match (m.is_constant(), one, compound) {
                (true, _, _) => write!(f, "{mag}")?,
                (false, true, _) => write!(f, "{m}")?,
                (false, false, true) => write!(f, "({mag})*{m}")?,
                (false, false, false) => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial builder that tracks how many monomials are positive and how
/// many negative, so the sign analysis needs no scan.
#[derive(Clone, Default, Debug)]
pub struct PolyAccumulator {
    poly: Poly,
    positive: usize,
    negative: usize,
}

impl PolyAccumulator {
    pub fn new() -> PolyAccumulator {
        PolyAccumulator::default()
    }

    fn classify(c: &Ordinal) -> (usize, usize) {
        match c.signum() {
            std::cmp::Ordering::Greater => (1, 0),
            std::cmp::Ordering::Less => (0, 1),
            std::cmp::Ordering::Equal => (0, 0),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Ordinal) {
        if c.is_zero() {
            return;
        }
        let old = self.poly.terms.get(&m).cloned().unwrap_or_default();
        let (p0, n0) = Self::classify(&old);
        self.poly.add_term(m.clone(), c);
        let new = self.poly.terms.get(&m).cloned().unwrap_or_default();
        let (p1, n1) = Self::classify(&new);
        self.positive = self.positive + p1 - p0;
        self.negative = self.negative + n1 - n0;
    }

    pub fn add_poly(&mut self, p: &Poly) {
        for (m, c) in p.terms() {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_poly(&mut self, p: &Poly) {
        for (m, c) in p.terms() {
            self.add_term(m.clone(), -c);
        }
    }

    pub fn surely_nonneg(&self) -> bool {
        self.negative == 0
    }

    pub fn surely_nonpos(&self) -> bool {
        self.positive == 0
    }

    pub fn analyze(&self) -> Cmp {
        analyze_signs(self.surely_nonneg(), self.surely_nonpos(), &self.poly.constant_term())
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Type;

    fn w(n: &str) -> Indeterminate {
        Indeterminate::W(Term::var(n, Type::base("k")))
    }

    fn k(n: &str, i: usize) -> Indeterminate {
        Indeterminate::K(Term::var(n, Type::base("k")), i)
    }

    #[test]
    fn ring_examples() {
        let wy = Poly::var(w("y"));
        assert_eq!(Poly::nat(1).add(&wy).sub(&wy), Poly::nat(1));
        let two = Ordinal::nat(2);
        let p = wy.add(&Poly::nat(1)).scale(&two);
        assert_eq!(p.constant_term(), two);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn analyze_table() {
        let wy = Poly::var(w("y"));
        let wx = Poly::var(w("x"));
        assert_eq!(Poly::nat(1).analyze(), Cmp::G);
        assert_eq!(Poly::zero().analyze(), Cmp::E);
        assert_eq!(wy.analyze(), Cmp::GE);
        assert_eq!(wy.neg().analyze(), Cmp::LE);
        assert_eq!(wx.sub(&wy).analyze(), Cmp::U);
        assert_eq!(Poly::nat(-2).analyze(), Cmp::L);
    }

    #[test]
    fn negative_coefficient_is_not_surely_nonneg() {
        let wy = Poly::var(w("y"));
        let p = wy.mul(&wy).sub(&wy.scale(&Ordinal::nat(3))).add(&Poly::nat(3));
        assert!(!p.surely_nonneg());
        assert!(wy.add(&Poly::nat(1)).surely_nonneg());
        assert!(!Poly::nat(-1).surely_nonneg());
    }

    #[test]
    fn evaluation() {
        let wy = Poly::var(w("y"));
        let mut a = Assignment::new();
        a.insert(w("y"), Ordinal::nat(2));
        assert_eq!(Poly::nat(1).add(&wy).eval(&a).unwrap(), Ordinal::nat(3));
        let p = Poly::var(k("y", 1)).mul(&Poly::var(w("x")).sub(&Poly::nat(1)));
        let mut a = Assignment::new();
        a.insert(k("y", 1), Ordinal::nat(2));
        a.insert(w("x"), Ordinal::omega());
        assert_eq!(p.eval(&a).unwrap(), "w*2 - 2".parse().unwrap());
        assert!(matches!(p.eval(&Assignment::new()), Err(PolyError::Missing(_))));
    }

    #[test]
    fn substitution() {
        let mut m = BTreeMap::new();
        m.insert(w("y"), Poly::var(w("z")));
        assert_eq!(Poly::var(w("y")).substitute(&m), Poly::var(w("z")));
        assert_eq!(Poly::var(w("x")).substitute(&m), Poly::var(w("x")));
        let h = Indeterminate::H(crate::term::name("a"));
        let mut m = BTreeMap::new();
        m.insert(h.clone(), Poly::nat(2));
        assert_eq!(Poly::var(h).scale(&Ordinal::nat(2)).substitute(&m), Poly::nat(4));
    }

    #[test]
    fn display_is_deterministic() {
        let p = Poly::var(w("y")).scale(&Ordinal::nat(3)).add(&Poly::nat(14));
        assert_eq!(p.to_string(), "3*w[(var y k)] + 14");
        assert_eq!(Poly::var(w("y")).sub(&Poly::nat(4)).to_string(), "w[(var y k)] - 4");
    }
}
