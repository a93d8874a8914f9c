use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::fo_order::FoParams;
use crate::ordinal::Ordinal;
use crate::term::{is_literal, literal_weight, name, Name, Signature, BOT, DIFF, TOP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Kbo,
    Lpo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Naive,
    Optimized,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Kbo => "kbo",
            OrderKind::Lpo => "lpo",
        })
    }
}

impl FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kbo" => Ok(OrderKind::Kbo),
            "lpo" => Ok(OrderKind::Lpo),
            _ => Err(format!("unknown order '{s}' (expected kbo or lpo)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Naive => "naive",
            Algorithm::Optimized => "optimized",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "optimized" => Ok(Algorithm::Optimized),
            _ => Err(format!("unknown algorithm '{s}' (expected naive or optimized)")),
        }
    }
}

/// A violated parameter constraint. The messages name the constraint.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("'{0}' is not a declared symbol")]
    UnknownSymbol(Name),
    #[error("'{0}' is not a declared type constructor")]
    UnknownTypeCon(Name),
    #[error("'{0}' appears twice in the precedence")]
    DuplicatePrecedence(Name),
    #[error("weights must be positive: {0}")]
    NonPositive(String),
    #[error("condition (K): k({0}, {1}) = 1 is required since {1} exceeds the arity {2} of {0}")]
    CoefficientBeyondArity(Name, usize, usize),
    #[error("diff requirement violated: w(diff) ≤ w_db")]
    DiffWeight,
    #[error("diff requirement violated: k(diff, i) = 1 for every i")]
    DiffCoefficient,
    #[error("diff requirement violated: diff ⪯ ws")]
    DiffAboveWatershed,
    #[error("⊤/⊥ requirement violated: ⊤ ≺ ⊥ ≺ f for every other symbol f")]
    TopBotPrecedence,
    #[error("⊤/⊥ requirement violated: W(⊤) = W(⊥) = 1")]
    TopBotWeight,
    #[error("⊤/⊥ requirement violated: ⊥ ⪯ ws")]
    BotAboveWatershed,
    #[error("λLPO needs a watershed symbol ws")]
    MissingWatershed,
}

/// Everything that parameterizes the two orders.
///
/// Weights and coefficients default to 1. `precedence` lists symbols from
/// smallest to largest; symbols missing from it sit below all listed ones,
/// in declaration order. `type_precedence` works the same way for type
/// constructors.
#[derive(Clone, Debug)]
pub struct OrderParams {
    pub signature: Signature,
    pub kind: OrderKind,
    pub algorithm: Algorithm,
    pub weights: BTreeMap<Name, Ordinal>,
    /// `coeffs[f][i - 1]` is `k(f, i)`.
    pub coeffs: BTreeMap<Name, Vec<Ordinal>>,
    pub w_lambda: Ordinal,
    pub w_db: Ordinal,
    pub type_weights: BTreeMap<Name, Ordinal>,
    pub precedence: Vec<Name>,
    pub type_precedence: Vec<Name>,
    pub watershed: Option<Name>,
    /// Error out, rather than answer `U`, on conflicting leaking-index types.
    pub strict: bool,
    rank: BTreeMap<Name, usize>,
    type_rank: BTreeMap<Name, usize>,
}

fn ranks<'a>(declared: impl Iterator<Item = &'a Name>, listed: &'a [Name]) -> BTreeMap<Name, usize> {
    let mut r = BTreeMap::new();
    for n in declared.filter(|n| !listed.contains(n)).chain(listed.iter()) {
        let k = r.len();
        r.entry(n.clone()).or_insert(k);
    }
    r
}

impl OrderParams {
    /// Unit weights and coefficients, declaration-order precedence.
    pub fn new(signature: Signature, kind: OrderKind) -> OrderParams {
        let mut p = OrderParams {
            signature,
            kind,
            algorithm: Algorithm::Optimized,
            weights: BTreeMap::new(),
            coeffs: BTreeMap::new(),
            w_lambda: Ordinal::one(),
            w_db: Ordinal::one(),
            type_weights: BTreeMap::new(),
            precedence: Vec::new(),
            type_precedence: Vec::new(),
            watershed: None,
            strict: true,
            rank: BTreeMap::new(),
            type_rank: BTreeMap::new(),
        };
        p.refresh();
        p
    }

    /// Recomputes the precedence ranks; call after editing the signature or
    /// either precedence list.
    pub fn refresh(&mut self) {
        self.rank = ranks(self.signature.order.iter(), &self.precedence);
        self.type_rank = ranks(self.signature.type_cons.keys(), &self.type_precedence);
    }

    pub fn with_algorithm(mut self, a: Algorithm) -> OrderParams {
        self.algorithm = a;
        self
    }

    pub fn with_kind(mut self, k: OrderKind) -> OrderParams {
        self.kind = k;
        self
    }

    pub fn with_precedence(mut self, low_to_high: &[&str]) -> OrderParams {
        self.precedence = low_to_high.iter().map(|s| name(s)).collect();
        self.refresh();
        self
    }

    pub fn with_type_precedence(mut self, low_to_high: &[&str]) -> OrderParams {
        self.type_precedence = low_to_high.iter().map(|s| name(s)).collect();
        self.refresh();
        self
    }

    pub fn with_weight(mut self, f: &str, w: impl Into<Ordinal>) -> OrderParams {
        self.weights.insert(name(f), w.into());
        self
    }

    pub fn with_coeffs(mut self, f: &str, ks: &[i64]) -> OrderParams {
        self.coeffs.insert(name(f), ks.iter().map(|&k| Ordinal::nat(k)).collect());
        self
    }

    pub fn with_watershed(mut self, ws: &str) -> OrderParams {
        self.watershed = Some(name(ws));
        self
    }

    pub fn weight(&self, f: &str) -> Ordinal {
        if let Some(w) = literal_weight(f) {
            return w;
        }
        self.weights.get(f).cloned().unwrap_or_else(Ordinal::one)
    }

    /// `k(f, i)`, 1-based.
    pub fn coeff(&self, f: &str, i: usize) -> Ordinal {
        self.coeffs.get(f).and_then(|ks| ks.get(i - 1)).cloned().unwrap_or_else(Ordinal::one)
    }

    pub fn has_unit_coeffs(&self, f: &str) -> bool {
        self.coeffs.get(f).is_none_or(|ks| ks.iter().all(|k| *k == Ordinal::one()))
    }

    /// The weight of `f` when all its argument coefficients are 1.
    pub fn unit_weight(&self, f: &str) -> Option<Ordinal> {
        if is_literal(f) {
            return literal_weight(f);
        }
        self.has_unit_coeffs(f).then(|| self.weight(f))
    }

    pub fn prec_cmp(&self, g: &str, f: &str) -> Ordering {
        let r = |n: &str| self.rank.get(n).copied().unwrap_or(usize::MAX);
        r(g).cmp(&r(f))
    }

    /// `g ≻ ws`; false when no watershed is set.
    pub fn above_watershed(&self, g: &str) -> bool {
        self.watershed.as_ref().is_some_and(|ws| self.prec_cmp(g, ws) == Ordering::Greater)
    }

    pub fn type_weight(&self, c: &str) -> Ordinal {
        self.type_weights.get(c).cloned().unwrap_or_else(Ordinal::one)
    }

    pub fn type_prec_cmp(&self, a: &str, b: &str) -> Ordering {
        let r = |n: &str| self.type_rank.get(n).copied().unwrap_or(usize::MAX);
        r(a).cmp(&r(b))
    }

    pub(crate) fn type_order(&self) -> TypeOrder<'_> {
        TypeOrder(self)
    }

    /// Checks every constraint the order's properties depend on.
    pub fn validate(&self) -> Result<(), ParamError> {
        let sig = &self.signature;
        let declared = |n: &Name| {
            if sig.symbols.contains_key(n) {
                Ok(())
            } else {
                Err(ParamError::UnknownSymbol(n.clone()))
            }
        };
        for n in self.weights.keys().chain(self.coeffs.keys()) {
            declared(n)?;
        }
        let mut seen = Vec::new();
        for n in &self.precedence {
            declared(n)?;
            if seen.contains(&n) {
                return Err(ParamError::DuplicatePrecedence(n.clone()));
            }
            seen.push(n);
        }
        for n in self.type_weights.keys().chain(&self.type_precedence) {
            if !sig.type_cons.contains_key(n) {
                return Err(ParamError::UnknownTypeCon(n.clone()));
            }
        }
        if let Some(ws) = &self.watershed {
            declared(ws)?;
        }
        let positive = |what: String, w: &Ordinal| {
            if w.is_positive() && w.is_cnf() {
                Ok(())
            } else {
                Err(ParamError::NonPositive(format!("{what} = {w}")))
            }
        };
        positive("w_λ".into(), &self.w_lambda)?;
        positive("w_db".into(), &self.w_db)?;
        for (f, w) in &self.weights {
            positive(format!("w({f})"), w)?;
        }
        for (c, w) in &self.type_weights {
            positive(format!("w_ty({c})"), w)?;
        }
        for (f, ks) in &self.coeffs {
            let arity = sig.curried_arity(f);
            for (i, k) in ks.iter().enumerate() {
                positive(format!("k({f}, {})", i + 1), k)?;
                if i + 1 > arity && *k != Ordinal::one() {
                    return Err(ParamError::CoefficientBeyondArity(f.clone(), i + 1, arity));
                }
            }
        }
        let has = |n: &str| sig.symbols.contains_key(n);
        if has(DIFF) {
            match self.kind {
                OrderKind::Kbo => {
                    if !self.has_unit_coeffs(DIFF) {
                        return Err(ParamError::DiffCoefficient);
                    }
                    if self.weight(DIFF) > self.w_db {
                        return Err(ParamError::DiffWeight);
                    }
                }
                OrderKind::Lpo => {
                    if self.above_watershed(DIFF) {
                        return Err(ParamError::DiffAboveWatershed);
                    }
                }
            }
        }
        if self.kind == OrderKind::Lpo && self.watershed.is_none() {
            return Err(ParamError::MissingWatershed);
        }
        if has(TOP) || has(BOT) {
            for f in &sig.order {
                let bad = |low: &str| has(low) && f.as_ref() != low && self.prec_cmp(f, low) != Ordering::Greater;
                if (f.as_ref() != TOP && bad(TOP)) || (f.as_ref() != TOP && f.as_ref() != BOT && bad(BOT)) {
                    return Err(ParamError::TopBotPrecedence);
                }
            }
            match self.kind {
                OrderKind::Kbo => {
                    if [TOP, BOT].iter().any(|c| has(c) && self.weight(c) != Ordinal::one()) {
                        return Err(ParamError::TopBotWeight);
                    }
                }
                OrderKind::Lpo => {
                    if has(BOT) && self.above_watershed(BOT) {
                        return Err(ParamError::BotAboveWatershed);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Weights and precedence on type constructors, for the first-order type
/// orders.
pub(crate) struct TypeOrder<'a>(&'a OrderParams);

impl FoParams<Name> for TypeOrder<'_> {
    fn weight(&self, c: &Name) -> Ordinal {
        self.0.type_weight(c)
    }

    fn coeff(&self, _: &Name, _: usize) -> Ordinal {
        Ordinal::one()
    }

    fn prec(&self, a: &Name, b: &Name) -> Ordering {
        self.0.type_prec_cmp(a, b)
    }
}
