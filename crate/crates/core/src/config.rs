//! TOML signature files.
//!
//! ```toml
//! [types]                  # type constructors and their arities
//! kappa = 0
//! list = 1
//!
//! [symbols]                # a bare string is the symbol's type
//! a = "kappa"
//! f = "(-> kappa kappa)"
//! diff = { params = ["(-> 'a 'b)", "(-> 'a 'b)"], type = "'a" }
//!
//! [order]                  # everything here is optional
//! kind = "kbo"
//! w_lambda = 1
//! w_db = 1
//! precedence = ["a", "f"]  # smallest first
//! watershed = "f"
//!
//! [weights]                # integers or ordinal strings such as "w + 1"
//! f = 2
//!
//! [coeffs]                 # k(f, 1), k(f, 2), ...
//! f = [3]
//! ```
//!
//! A symbol's type variables are those of its parameter and body types, in
//! order of first occurrence, unless listed explicitly under `tyvars`.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::lambda_order::{OrderKind, OrderParams, ParamError};
use crate::ordinal::Ordinal;
use crate::syntax::{parse_type_in, SyntaxError};
use crate::term::{is_literal, name, Signature, TypeDecl, ARROW};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("type of '{symbol}': {source}")]
    Type { symbol: String, source: SyntaxError },
    #[error("'{0}' is not a valid ordinal")]
    Ordinal(String),
    #[error("{0}")]
    Kind(String),
    #[error("'{0}' cannot be declared")]
    Reserved(String),
    #[error("type variable '{1}' of '{0}' does not occur in its type")]
    UnusedTyvar(String, String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrdinalValue {
    Int(i64),
    Text(String),
}

impl OrdinalValue {
    fn get(&self) -> Result<Ordinal, ConfigError> {
        match self {
            OrdinalValue::Int(n) => Ok(Ordinal::nat(*n)),
            OrdinalValue::Text(s) => s.parse().map_err(|_| ConfigError::Ordinal(s.clone())),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SymbolSpec {
    Type(String),
    Full {
        #[serde(default)]
        tyvars: Option<Vec<String>>,
        #[serde(default)]
        params: Vec<String>,
        #[serde(rename = "type")]
        ty: String,
    },
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct OrderSection {
    kind: Option<String>,
    w_lambda: Option<OrdinalValue>,
    w_db: Option<OrdinalValue>,
    #[serde(default)]
    precedence: Vec<String>,
    #[serde(default)]
    type_precedence: Vec<String>,
    watershed: Option<String>,
    strict: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    #[serde(default)]
    types: BTreeMap<String, usize>,
    #[serde(default)]
    symbols: toml::Table,
    #[serde(default)]
    order: OrderSection,
    #[serde(default)]
    weights: BTreeMap<String, OrdinalValue>,
    #[serde(default)]
    coeffs: BTreeMap<String, Vec<OrdinalValue>>,
    #[serde(default)]
    type_weights: BTreeMap<String, OrdinalValue>,
}

/// Parses a signature file and validates the resulting parameters for the
/// given order kind, or for the kind named in the file when `kind` is `None`.
pub fn parse_signature(src: &str, kind: Option<OrderKind>) -> Result<OrderParams, ConfigError> {
    let file: File = toml::from_str(src)?;
    let mut sig = Signature::new();
    for (c, &ar) in &file.types {
        if c == ARROW {
            return Err(ConfigError::Reserved(c.clone()));
        }
        sig.add_type(c, ar);
    }
    for (f, v) in file.symbols {
        if is_literal(&f) {
            return Err(ConfigError::Reserved(f));
        }
        let decl = declaration(&f, SymbolSpec::deserialize(v)?, &sig)?;
        sig.add_symbol(&f, decl);
    }
    let kind = match (kind, &file.order.kind) {
        (Some(k), _) => k,
        (None, Some(k)) => k.parse().map_err(ConfigError::Kind)?,
        (None, None) => OrderKind::Kbo,
    };
    let mut p = OrderParams::new(sig, kind);
    if let Some(w) = &file.order.w_lambda {
        p.w_lambda = w.get()?;
    }
    if let Some(w) = &file.order.w_db {
        p.w_db = w.get()?;
    }
    p.precedence = file.order.precedence.iter().map(|s| name(s)).collect();
    p.type_precedence = file.order.type_precedence.iter().map(|s| name(s)).collect();
    p.watershed = file.order.watershed.as_deref().map(name);
    if let Some(s) = file.order.strict {
        p.strict = s;
    }
    for (f, w) in &file.weights {
        p.weights.insert(name(f), w.get()?);
    }
    for (f, ks) in &file.coeffs {
        p.coeffs.insert(name(f), ks.iter().map(OrdinalValue::get).collect::<Result<_, _>>()?);
    }
    for (c, w) in &file.type_weights {
        p.type_weights.insert(name(c), w.get()?);
    }
    p.refresh();
    p.validate()?;
    Ok(p)
}

fn declaration(f: &str, spec: SymbolSpec, sig: &Signature) -> Result<TypeDecl, ConfigError> {
    let parse = |s: &str| parse_type_in(s, sig).map_err(|source| ConfigError::Type { symbol: f.to_string(), source });
    let (tyvars, params, body) = match spec {
        SymbolSpec::Type(t) => (None, Vec::new(), parse(&t)?),
        SymbolSpec::Full { tyvars, params, ty } => {
            (tyvars, params.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?, parse(&ty)?)
        }
    };
    let mut occurring = Vec::new();
    for t in params.iter().chain([&body]) {
        t.collect_vars(&mut occurring);
    }
    let mut seen: Vec<_> = Vec::new();
    for v in occurring {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    let tyvars = match tyvars {
        None => seen,
        Some(vs) => {
            if let Some(v) = seen.iter().find(|v| !vs.iter().any(|w| w.trim_start_matches('\'') == &***v)) {
                return Err(ConfigError::UnusedTyvar(f.to_string(), v.to_string()));
            }
            vs.iter().map(|v| name(v.trim_start_matches('\''))).collect()
        }
    };
    Ok(TypeDecl { tyvars, params, body })
}
