//! Ordinals below ε₀ in Cantor normal form, extended with signed coefficients.
//!
//! A value is a finite sum `ω^e₁·c₁ + … + ω^eₙ·cₙ` with strictly decreasing
//! exponents and nonzero integer coefficients. Exponents are themselves
//! ordinals with positive coefficients. Values whose coefficients are all
//! positive are ordinals proper; the rest form the group completion needed to
//! subtract weights.
//!
//! Addition and multiplication are the Hessenberg natural sum and product:
//! like exponents merge, and `ω^a · ω^b = ω^(a ⊕ b)`. Both are commutative,
//! which turns the signed values into an ordered commutative ring.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    // (exponent, coefficient), exponents strictly decreasing, coefficients nonzero
    terms: Vec<(Ordinal, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid ordinal literal at offset {offset}: {message}")]
pub struct OrdinalParseError {
    pub offset: usize,
    pub message: String,
}

fn checked(c: Option<i64>) -> i64 {
    c.expect("ordinal coefficient overflow")
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    /// A finite value. Negative integers are allowed.
    pub fn nat(n: i64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e`. Panics if `e` is not an ordinal proper.
    pub fn omega_pow(e: Ordinal) -> Self {
        assert!(e.is_cnf(), "exponent must be a nonnegative ordinal");
        Ordinal { terms: vec![(e, 1)] }
    }

    /// Builds a value from arbitrary `(exponent, coefficient)` pairs, merging
    /// like exponents and dropping zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, i64)>) -> Self {
        let mut v: Vec<(Ordinal, i64)> = terms.into_iter().collect();
        for (e, _) in &v {
            assert!(e.is_cnf(), "exponent must be a nonnegative ordinal");
        }
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Ordinal, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = checked(lc.checked_add(c)),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        Ordinal { terms: out }
    }

    pub fn terms(&self) -> &[(Ordinal, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every coefficient is positive, i.e. the value is an ordinal.
    pub fn is_cnf(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c > 0)
    }

    /// True iff the value is `≥ 0`, i.e. its leading coefficient is positive.
    pub fn is_nonneg(&self) -> bool {
        self.terms.first().is_none_or(|(_, c)| *c > 0)
    }

    pub fn is_positive(&self) -> bool {
        self.terms.first().is_some_and(|(_, c)| *c > 0)
    }

    pub fn signum(&self) -> Ordering {
        match self.terms.first() {
            None => Ordering::Equal,
            Some((_, c)) => c.cmp(&0),
        }
    }

    /// The finite part, if the value has no infinite terms.
    pub fn as_finite(&self) -> Option<i64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    /// Nesting depth of exponents; `0` for finite values.
    pub fn height(&self) -> usize {
        self.terms.iter().map(|(e, _)| if e.is_zero() { 0 } else { 1 + e.height() }).max().unwrap_or(0)
    }

    fn scale(&self, k: i64) -> Ordinal {
        if k == 0 {
            return Ordinal::zero();
        }
        Ordinal { terms: self.terms.iter().map(|(e, c)| (e.clone(), checked(c.checked_mul(k)))).collect() }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, c)), None) => return c.cmp(&0),
                (None, Some((_, d))) => return 0.cmp(d),
                (Some((e, c)), Some((f, d))) => match e.cmp(f) {
                    Ordering::Greater => return c.cmp(&0),
                    Ordering::Less => return 0.cmp(d),
                    Ordering::Equal => {
                        if c != d {
                            return c.cmp(d);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some((e, _)), Some((f, _))) => e.cmp(f),
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = checked(a[i].1.checked_add(b[j].1));
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ordinal { terms: out }
    }
}

impl Neg for &Ordinal {
    type Output = Ordinal;
    fn neg(self) -> Ordinal {
        self.scale(-1)
    }
}

impl Sub for &Ordinal {
    type Output = Ordinal;
    fn sub(self, rhs: &Ordinal) -> Ordinal {
        self + &(-rhs)
    }
}

impl Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        if let Some(k) = rhs.as_finite() {
            return self.scale(k);
        }
        if let Some(k) = self.as_finite() {
            return rhs.scale(k);
        }
        let mut parts = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                parts.push((e + f, checked(c.checked_mul(*d))));
            }
        }
        Ordinal::from_terms(parts)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Ordinal> for Ordinal {
            type Output = Ordinal;
            fn $m(self, rhs: Ordinal) -> Ordinal {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Ordinal> for Ordinal {
            type Output = Ordinal;
            fn $m(self, rhs: &Ordinal) -> Ordinal {
                (&self).$m(rhs)
            }
        }
        impl $tr<Ordinal> for &Ordinal {
            type Output = Ordinal;
            fn $m(self, rhs: Ordinal) -> Ordinal {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Ordinal {
    type Output = Ordinal;
    fn neg(self) -> Ordinal {
        -&self
    }
}

impl AddAssign<&Ordinal> for Ordinal {
    fn add_assign(&mut self, rhs: &Ordinal) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Ordinal> for Ordinal {
    fn sub_assign(&mut self, rhs: &Ordinal) {
        *self = &*self - rhs;
    }
}

impl From<i64> for Ordinal {
    fn from(n: i64) -> Self {
        Ordinal::nat(n)
    }
}

impl std::iter::Sum for Ordinal {
    fn sum<I: Iterator<Item = Ordinal>>(iter: I) -> Ordinal {
        iter.fold(Ordinal::zero(), |acc, x| acc + x)
    }
}

pub fn ord_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a + b
}

pub fn ord_mul(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a * b
}

pub fn ord_is_nonneg(a: &Ordinal) -> bool {
    a.is_nonneg()
}

fn fmt_exponent(e: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.as_finite() {
        Some(1) => Ok(()),
        Some(n) => write!(f, "^{n}"),
        None if *e == Ordinal::omega() => write!(f, "^w"),
        None => write!(f, "^({e})"),
    }
}

fn fmt_monomial(e: &Ordinal, c: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "{c}");
    }
    write!(f, "w")?;
    fmt_exponent(e, f)?;
    if c != 1 {
        write!(f, "*{c}")?;
    }
    Ok(())
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, *c < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            fmt_monomial(e, mag, f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, OrdinalParseError> {
        Err(OrdinalParseError { offset: self.pos, message: message.into() })
    }

    fn expect(&mut self, ch: u8) -> Result<(), OrdinalParseError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", ch as char))
        }
    }

    fn int(&mut self) -> Result<i64, OrdinalParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().or_else(|_| self.err("number out of range"))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalParseError> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = Ordinal::zero();
        loop {
            let t = self.term()?;
            acc = if negate { acc - t } else { acc + t };
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalParseError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let mut e = Ordinal::one();
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self.atom()?;
                    if !e.is_cnf() {
                        return self.err("exponent must be nonnegative");
                    }
                }
                let mut c = 1;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    c = self.int()?;
                }
                Ok(Ordinal::from_terms([(e, c)]))
            }
            Some(b'0'..=b'9') => {
                let n = self.int()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let rest = self.term()?;
                    return Ok(rest * Ordinal::nat(n));
                }
                Ok(Ordinal::nat(n))
            }
            _ => self.err("expected 'w' or a number"),
        }
    }

    fn atom(&mut self) -> Result<Ordinal, OrdinalParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            _ => Ok(Ordinal::nat(self.int()?)),
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    /// Parses literals such as `3`, `w`, `w^2*3 + w + 1`, `w^(w+1)`, `w*2 - 2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lx = Lexer { src: s.as_bytes(), pos: 0 };
        let v = lx.sum()?;
        if lx.peek().is_some() {
            return lx.err("unexpected trailing input");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn literals_round_trip() {
        for s in ["0", "3", "w", "w^2*3 + w + 1", "w*2 - 2", "-w + 3", "w^w", "w^(w + 1)*2", "w^(w^2)"] {
            assert_eq!(o(s).to_string(), s);
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(o("w").cmp(&o("3")), Ordering::Greater);
        assert_eq!(o("0").cmp(&o("0")), Ordering::Equal);
        assert_eq!(o("w - 3").cmp(&Ordinal::zero()), Ordering::Greater);
        assert_eq!(o("1") + o("w"), o("w + 1"));
        assert_eq!(o("w*2 + 1") + o("w + 2"), o("w*3 + 3"));
        assert_eq!(o("w") * o("2"), o("w*2"));
        assert_eq!(o("w") * o("w"), o("w^2"));
        assert!(o("w - 3").is_nonneg());
        assert!(!o("3 - w").is_nonneg());
        assert!(Ordinal::zero().is_nonneg());
    }

    #[test]
    fn natural_product_adds_exponents_naturally() {
        // (ω^ω + 1)(ω + 1) = ω^(ω+1) + ω^ω + ω + 1
        assert_eq!(o("w^w + 1") * o("w + 1"), o("w^(w + 1) + w^w + w + 1"));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = "w +".parse::<Ordinal>().unwrap_err();
        assert_eq!(e.offset, 3);
        assert!("w^(3".parse::<Ordinal>().is_err());
        assert!("w^(0-1)".parse::<Ordinal>().is_err());
    }
}
