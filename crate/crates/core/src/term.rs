//! Locally nameless higher-order terms in η-long β-normal spine form.
//!
//! A [`Term`] is a head (variable, symbol or De Bruijn index) applied to a
//! full argument list, or a λ-abstraction. Terms of function type are always
//! λ-abstractions. Raw λ-terms with arbitrary applications are [`Raw`] values
//! and enter the normal world through [`normalize`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ordinal::Ordinal;

pub type Name = Arc<str>;

pub const ARROW: &str = "->";

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(Name),
    Con(Name, Vec<Type>),
}

impl Type {
    pub fn var(n: &str) -> Type {
        Type::Var(name(n))
    }

    pub fn base(n: &str) -> Type {
        Type::Con(name(n), Vec::new())
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Con(name(ARROW), vec![a, b])
    }

    /// `τ₁ → … → τₙ → υ`.
    pub fn arrows(doms: impl IntoIterator<Item = Type>, cod: Type) -> Type {
        let doms: Vec<Type> = doms.into_iter().collect();
        doms.into_iter().rev().fold(cod, |acc, d| Type::arrow(d, acc))
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Con(n, a) if &**n == ARROW => Some((&a[0], &a[1])),
            _ => None,
        }
    }

    pub fn is_arrow(&self) -> bool {
        self.as_arrow().is_some()
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Type::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Con(_, a) => a.iter().all(Type::is_ground),
        }
    }

    /// Argument types and final codomain: `τ̄ → υ` with `υ` not an arrow.
    pub fn split_arrows(&self) -> (Vec<&Type>, &Type) {
        let mut doms = Vec::new();
        let mut t = self;
        while let Some((d, c)) = t.as_arrow() {
            doms.push(d);
            t = c;
        }
        (doms, t)
    }

    pub fn arity(&self) -> usize {
        let mut n = 0;
        let mut t = self;
        while let Some((_, c)) = t.as_arrow() {
            n += 1;
            t = c;
        }
        n
    }

    /// Drops `n` leading arrows.
    pub fn apply_n(&self, n: usize) -> Option<&Type> {
        let mut t = self;
        for _ in 0..n {
            t = t.as_arrow()?.1;
        }
        Some(t)
    }

    pub fn subst(&self, map: &BTreeMap<Name, Type>) -> Type {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Type::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Type::Con(n, a) => Type::Con(n.clone(), a.iter().map(|t| t.subst(map)).collect()),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Type::Con(_, a) => a.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    /// Number of constructor and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Con(_, a) => 1 + a.iter().map(Type::size).sum::<usize>(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "'{v}"),
            Type::Con(n, a) if a.is_empty() => write!(f, "{n}"),
            Type::Con(n, a) => {
                write!(f, "({n}")?;
                for t in a {
                    write!(f, " {t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Πᾱ. τ̄ ⇒ υ`: type variables, parameter types and body type of a symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub tyvars: Vec<Name>,
    pub params: Vec<Type>,
    pub body: Type,
}

impl TypeDecl {
    pub fn simple(body: Type) -> TypeDecl {
        TypeDecl { tyvars: Vec::new(), params: Vec::new(), body }
    }

    fn instantiate(&self, ty_args: &[Type]) -> BTreeMap<Name, Type> {
        self.tyvars.iter().cloned().zip(ty_args.iter().cloned()).collect()
    }
}

pub const TOP: &str = "top";
pub const BOT: &str = "bot";
pub const DIFF: &str = "diff";
pub const FORALL: &str = "forall";
pub const EXISTS: &str = "exists";
pub const EQ: &str = "eq";
pub const NEQ: &str = "neq";

/// Marks the weight-literal symbols produced by [`norm_key`].
const LITERAL_PREFIX: char = '$';

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub type_cons: BTreeMap<Name, usize>,
    pub symbols: BTreeMap<Name, TypeDecl>,
    /// Symbol names in declaration order.
    pub order: Vec<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("type mismatch at argument {index}: expected {expected}, found {found}")]
    TypeMismatch { index: usize, expected: Type, found: Type },
    #[error("too many arguments: head of type {0} applied to {1} arguments")]
    TooManyArgs(Type, usize),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(Name),
    #[error("unknown type constructor '{0}'")]
    UnknownTypeCon(Name),
    #[error("type constructor '{0}' expects {1} arguments, got {2}")]
    TypeArity(Name, usize, usize),
    #[error("symbol '{0}' expects {1} type arguments, got {2}")]
    TyArgCount(Name, usize, usize),
    #[error("symbol '{0}' expects {1} parameters, got {2}")]
    ParamCount(Name, usize, usize),
    #[error("parameter of '{0}' contains a leaking De Bruijn index")]
    LeakingParam(Name),
    #[error("De Bruijn index #{index} annotated {found} but bound by a λ of type {expected}")]
    BinderMismatch { index: usize, expected: Type, found: Type },
    #[error("not in η-long form: spine of functional type {0}")]
    NotEtaLong(Type),
    #[error("substitution for '{0}' has type {1}, variable has type {2}")]
    SubstType(Name, Type, Type),
    #[error("substitution for '{0}' is not a closed term")]
    SubstNotClosed(Name),
    #[error("'{0}' is reserved")]
    Reserved(Name),
}

impl Signature {
    pub fn new() -> Signature {
        let mut s = Signature::default();
        s.type_cons.insert(name(ARROW), 2);
        s
    }

    pub fn add_type(&mut self, n: &str, arity: usize) {
        self.type_cons.insert(name(n), arity);
    }

    pub fn add_symbol(&mut self, n: &str, decl: TypeDecl) {
        let n = name(n);
        if self.symbols.insert(n.clone(), decl).is_none() {
            self.order.push(n);
        }
    }

    pub fn decl(&self, n: &str) -> Option<&TypeDecl> {
        self.symbols.get(n)
    }

    /// Type of `f⟨τ̄⟩(ū)` without its curried arguments.
    pub fn head_type(&self, n: &Name, ty_args: &[Type]) -> Result<Type, TermError> {
        if is_literal(n) {
            return Ok(ty_args[0].clone());
        }
        let d = self.symbols.get(n).ok_or_else(|| TermError::UnknownSymbol(n.clone()))?;
        if d.tyvars.len() != ty_args.len() {
            return Err(TermError::TyArgCount(n.clone(), d.tyvars.len(), ty_args.len()));
        }
        Ok(d.body.subst(&d.instantiate(ty_args)))
    }

    pub fn param_types(&self, n: &Name, ty_args: &[Type]) -> Result<Vec<Type>, TermError> {
        let d = self.symbols.get(n).ok_or_else(|| TermError::UnknownSymbol(n.clone()))?;
        let m = d.instantiate(ty_args);
        Ok(d.params.iter().map(|t| t.subst(&m)).collect())
    }

    pub fn check_type(&self, t: &Type) -> Result<(), TermError> {
        match t {
            Type::Var(_) => Ok(()),
            Type::Con(n, a) => {
                let ar = *self.type_cons.get(n).ok_or_else(|| TermError::UnknownTypeCon(n.clone()))?;
                if ar != a.len() {
                    return Err(TermError::TypeArity(n.clone(), ar, a.len()));
                }
                a.iter().try_for_each(|x| self.check_type(x))
            }
        }
    }

    /// Number of curried arguments a symbol takes according to its declared
    /// body type.
    pub fn curried_arity(&self, n: &str) -> usize {
        self.symbols.get(n).map_or(0, |d| d.body.arity())
    }
}

pub fn is_literal(n: &str) -> bool {
    n.starts_with(LITERAL_PREFIX)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var { name: Name, ty: Type, args: Vec<Term> },
    Sym { name: Name, ty_args: Vec<Type>, params: Vec<Term>, args: Vec<Term> },
    Db { index: usize, ty: Type, args: Vec<Term> },
    Lam { ty: Type, body: Box<Term> },
}

impl Term {
    pub fn var(n: &str, ty: Type) -> Term {
        Term::Var { name: name(n), ty, args: Vec::new() }
    }

    pub fn cst(n: &str) -> Term {
        Term::Sym { name: name(n), ty_args: Vec::new(), params: Vec::new(), args: Vec::new() }
    }

    pub fn app(n: &str, args: Vec<Term>) -> Term {
        Term::Sym { name: name(n), ty_args: Vec::new(), params: Vec::new(), args }
    }

    pub fn db(index: usize, ty: Type) -> Term {
        Term::Db { index, ty, args: Vec::new() }
    }

    pub fn lam(ty: Type, body: Term) -> Term {
        Term::Lam { ty, body: Box::new(body) }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var { args, .. } | Term::Sym { args, .. } | Term::Db { args, .. } => args,
            Term::Lam { .. } => &[],
        }
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Term::Lam { .. })
    }

    /// Type of the head alone: the variable's or index's type, or the
    /// instantiated body type of the symbol.
    pub fn head_type(&self, sig: &Signature) -> Type {
        match self {
            Term::Var { ty, .. } | Term::Db { ty, .. } => ty.clone(),
            Term::Sym { name, ty_args, .. } => sig.head_type(name, ty_args).expect("well-formed term"),
            Term::Lam { .. } => self.result_type(sig),
        }
    }

    /// Type of a term assumed well formed. Use [`type_of`] to check.
    pub fn result_type(&self, sig: &Signature) -> Type {
        match self {
            Term::Lam { ty, body } => Type::arrow(ty.clone(), body.result_type(sig)),
            Term::Var { ty, args, .. } | Term::Db { ty, args, .. } => {
                ty.apply_n(args.len()).expect("well-formed term").clone()
            }
            Term::Sym { name, ty_args, args, .. } => {
                let h = sig.head_type(name, ty_args).expect("well-formed term");
                h.apply_n(args.len()).expect("well-formed term").clone()
            }
        }
    }

    /// Size as in the usual equations: heads and λs count one, parameters
    /// count towards their symbol.
    pub fn size(&self) -> usize {
        match self {
            Term::Var { args, .. } | Term::Db { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Sym { params, args, .. } => {
                1 + params.iter().map(Term::size).sum::<usize>() + args.iter().map(Term::size).sum::<usize>()
            }
            Term::Lam { body, .. } => 1 + body.size(),
        }
    }

    pub fn is_monomorphic(&self) -> bool {
        match self {
            Term::Var { ty, args, .. } | Term::Db { ty, args, .. } => {
                ty.is_ground() && args.iter().all(Term::is_monomorphic)
            }
            Term::Sym { ty_args, params, args, .. } => {
                ty_args.iter().all(Type::is_ground)
                    && params.iter().all(Term::is_monomorphic)
                    && args.iter().all(Term::is_monomorphic)
            }
            Term::Lam { ty, body } => ty.is_ground() && body.is_monomorphic(),
        }
    }

    pub fn has_vars(&self) -> bool {
        match self {
            Term::Var { .. } => true,
            Term::Sym { params, args, .. } => params.iter().any(Term::has_vars) || args.iter().any(Term::has_vars),
            Term::Db { args, .. } => args.iter().any(Term::has_vars),
            Term::Lam { body, .. } => body.has_vars(),
        }
    }

    /// No leaking De Bruijn indices.
    pub fn is_closed(&self) -> bool {
        self.max_leak(0).is_none()
    }

    /// Largest leaking index seen from the root, if any.
    pub fn max_leak(&self, depth: usize) -> Option<usize> {
        match self {
            Term::Var { args, .. } | Term::Sym { args, .. } => args.iter().filter_map(|a| a.max_leak(depth)).max(),
            Term::Db { index, args, .. } => {
                let own = (*index >= depth).then(|| index - depth);
                own.into_iter().chain(args.iter().filter_map(|a| a.max_leak(depth))).max()
            }
            Term::Lam { body, .. } => body.max_leak(depth + 1),
        }
    }

    /// Ground: no term variables, no type variables, no leaking indices.
    pub fn is_ground(&self) -> bool {
        !self.has_vars() && self.is_monomorphic() && self.is_closed()
    }

    /// Collects the types given to leaking indices, keyed by the index as
    /// seen from the root.
    pub fn leaking_types(&self, depth: usize, out: &mut Vec<(usize, Type)>) {
        match self {
            Term::Var { args, .. } | Term::Sym { args, .. } => args.iter().for_each(|a| a.leaking_types(depth, out)),
            Term::Db { index, ty, args } => {
                if *index >= depth {
                    out.push((index - depth, ty.clone()));
                }
                args.iter().for_each(|a| a.leaking_types(depth, out));
            }
            Term::Lam { body, .. } => body.leaking_types(depth + 1, out),
        }
    }

    /// Free term variables as `(name, type)` pairs, in first-occurrence order.
    pub fn free_vars(&self, out: &mut Vec<(Name, Type)>) {
        match self {
            Term::Var { name, ty, args } => {
                if !out.iter().any(|(n, t)| n == name && t == ty) {
                    out.push((name.clone(), ty.clone()));
                }
                args.iter().for_each(|a| a.free_vars(out));
            }
            Term::Sym { params, args, .. } => {
                params.iter().for_each(|a| a.free_vars(out));
                args.iter().for_each(|a| a.free_vars(out));
            }
            Term::Db { args, .. } => args.iter().for_each(|a| a.free_vars(out)),
            Term::Lam { body, .. } => body.free_vars(out),
        }
    }

    pub fn type_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var { ty, args, .. } | Term::Db { ty, args, .. } => {
                ty.collect_vars(out);
                args.iter().for_each(|a| a.type_vars(out));
            }
            Term::Sym { ty_args, params, args, .. } => {
                ty_args.iter().for_each(|t| t.collect_vars(out));
                params.iter().for_each(|a| a.type_vars(out));
                args.iter().for_each(|a| a.type_vars(out));
            }
            Term::Lam { ty, body } => {
                ty.collect_vars(out);
                body.type_vars(out);
            }
        }
    }

    fn with_args(&self, args: Vec<Term>) -> Term {
        match self {
            Term::Var { name, ty, .. } => Term::Var { name: name.clone(), ty: ty.clone(), args },
            Term::Sym { name, ty_args, params, .. } => {
                Term::Sym { name: name.clone(), ty_args: ty_args.clone(), params: params.clone(), args }
            }
            Term::Db { index, ty, .. } => Term::Db { index: *index, ty: ty.clone(), args },
            Term::Lam { .. } => panic!("λ-abstraction has no spine"),
        }
    }
}

fn fmt_args(args: &[Term], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for a in args {
        write!(f, " {a}")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    /// Prints the s-expression syntax accepted by the parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { name, ty, args } => {
                write!(f, "(var {name} {ty}")?;
                fmt_args(args, f)?;
                write!(f, ")")
            }
            Term::Sym { name, ty_args, params, args } => {
                if ty_args.is_empty() && params.is_empty() && args.is_empty() {
                    return write!(f, "{name}");
                }
                write!(f, "(sym {name} (")?;
                for (i, t) in ty_args.iter().enumerate() {
                    write!(f, "{}{t}", if i > 0 { " " } else { "" })?;
                }
                write!(f, ") (")?;
                for (i, p) in params.iter().enumerate() {
                    write!(f, "{}{p}", if i > 0 { " " } else { "" })?;
                }
                write!(f, ")")?;
                fmt_args(args, f)?;
                write!(f, ")")
            }
            Term::Db { index, ty, args } => {
                write!(f, "(db {index} {ty}")?;
                fmt_args(args, f)?;
                write!(f, ")")
            }
            Term::Lam { ty, body } => write!(f, "(lam {ty} {body})"),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A λ-preterm that may contain β-redexes and under-applied heads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Raw {
    Var(Name, Type),
    Sym(Name, Vec<Type>, Vec<Raw>),
    Db(usize, Type),
    Lam(Type, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
}

impl Raw {
    pub fn app(f: Raw, args: impl IntoIterator<Item = Raw>) -> Raw {
        args.into_iter().fold(f, |acc, a| Raw::App(Box::new(acc), Box::new(a)))
    }
}

impl From<&Term> for Raw {
    fn from(t: &Term) -> Raw {
        match t {
            Term::Var { name, ty, args } => Raw::app(Raw::Var(name.clone(), ty.clone()), args.iter().map(Raw::from)),
            Term::Sym { name, ty_args, params, args } => Raw::app(
                Raw::Sym(name.clone(), ty_args.clone(), params.iter().map(Raw::from).collect()),
                args.iter().map(Raw::from),
            ),
            Term::Db { index, ty, args } => Raw::app(Raw::Db(*index, ty.clone()), args.iter().map(Raw::from)),
            Term::Lam { ty, body } => Raw::Lam(ty.clone(), Box::new(Raw::from(&**body))),
        }
    }
}

/// Shifts leaking indices (those `≥ cutoff` below the binders) up by `n`.
pub fn shift(t: &Term, n: usize, cutoff: usize) -> Term {
    if n == 0 {
        return t.clone();
    }
    match t {
        Term::Var { name, ty, args } => {
            Term::Var { name: name.clone(), ty: ty.clone(), args: args.iter().map(|a| shift(a, n, cutoff)).collect() }
        }
        Term::Sym { name, ty_args, params, args } => Term::Sym {
            name: name.clone(),
            ty_args: ty_args.clone(),
            params: params.clone(),
            args: args.iter().map(|a| shift(a, n, cutoff)).collect(),
        },
        Term::Db { index, ty, args } => Term::Db {
            index: if *index >= cutoff { index + n } else { *index },
            ty: ty.clone(),
            args: args.iter().map(|a| shift(a, n, cutoff)).collect(),
        },
        Term::Lam { ty, body } => Term::lam(ty.clone(), shift(body, n, cutoff + 1)),
    }
}

/// Inverse of [`shift`]; `None` if an index in `[cutoff, cutoff + n)` leaks.
pub fn unshift(t: &Term, n: usize, cutoff: usize) -> Option<Term> {
    Some(match t {
        Term::Var { name, ty, args } => Term::Var {
            name: name.clone(),
            ty: ty.clone(),
            args: args.iter().map(|a| unshift(a, n, cutoff)).collect::<Option<_>>()?,
        },
        Term::Sym { name, ty_args, params, args } => Term::Sym {
            name: name.clone(),
            ty_args: ty_args.clone(),
            params: params.clone(),
            args: args.iter().map(|a| unshift(a, n, cutoff)).collect::<Option<_>>()?,
        },
        Term::Db { index, ty, args } => {
            let index = if *index >= cutoff + n {
                index - n
            } else if *index >= cutoff {
                return None;
            } else {
                *index
            };
            Term::Db { index, ty: ty.clone(), args: args.iter().map(|a| unshift(a, n, cutoff)).collect::<Option<_>>()? }
        }
        Term::Lam { ty, body } => Term::lam(ty.clone(), unshift(body, n, cutoff + 1)?),
    })
}

/// η-long form of the index `#i : τ`.
pub fn eta_index(i: usize, ty: &Type) -> Term {
    let (doms, _) = ty.split_arrows();
    let k = doms.len();
    let args = doms.iter().enumerate().map(|(j, d)| eta_index(k - 1 - j, d)).collect();
    let mut t = Term::Db { index: i + k, ty: ty.clone(), args };
    for d in doms.into_iter().rev() {
        t = Term::lam(d.clone(), t);
    }
    t
}

/// Completes a spine whose type `spine_ty` may still be functional by
/// wrapping it in λs and appending η-expanded indices.
fn eta_spine(head: &Term, args: Vec<Term>, spine_ty: &Type) -> Term {
    let (doms, _) = spine_ty.split_arrows();
    let m = doms.len();
    if m == 0 {
        return head.with_args(args);
    }
    let mut full: Vec<Term> = args.iter().map(|a| shift(a, m, 0)).collect();
    for (j, d) in doms.iter().enumerate() {
        full.push(eta_index(m - 1 - j, d));
    }
    // The new λs also sit above an index head.
    let mut t = shift(head, m, 0).with_args(full);
    for d in doms.into_iter().rev() {
        t = Term::lam(d.clone(), t);
    }
    t
}

/// Hereditary β-reduction: applies an η-long term to η-long arguments.
pub fn apply(f: Term, args: &[Term]) -> Term {
    let mut f = f;
    for a in args {
        f = match f {
            Term::Lam { body, .. } => instantiate(&body, a),
            other => panic!("cannot apply non-abstraction {other}"),
        };
    }
    f
}

/// `body[#0 := arg]`, lowering the other leaking indices.
pub fn instantiate(body: &Term, arg: &Term) -> Term {
    subst_db(body, 0, arg)
}

fn subst_db(t: &Term, depth: usize, arg: &Term) -> Term {
    match t {
        Term::Var { name, ty, args } => Term::Var {
            name: name.clone(),
            ty: ty.clone(),
            args: args.iter().map(|a| subst_db(a, depth, arg)).collect(),
        },
        Term::Sym { name, ty_args, params, args } => Term::Sym {
            name: name.clone(),
            ty_args: ty_args.clone(),
            params: params.clone(),
            args: args.iter().map(|a| subst_db(a, depth, arg)).collect(),
        },
        Term::Db { index, ty, args } => {
            let args: Vec<Term> = args.iter().map(|a| subst_db(a, depth, arg)).collect();
            if *index == depth {
                apply(shift(arg, depth, 0), &args)
            } else if *index > depth {
                Term::Db { index: index - 1, ty: ty.clone(), args }
            } else {
                Term::Db { index: *index, ty: ty.clone(), args }
            }
        }
        Term::Lam { ty, body } => Term::lam(ty.clone(), subst_db(body, depth + 1, arg)),
    }
}

fn check_args(head_ty: &Type, args: &[Term], sig: &Signature) -> Result<Type, TermError> {
    let mut t = head_ty;
    for (i, a) in args.iter().enumerate() {
        let Some((d, c)) = t.as_arrow() else {
            return Err(TermError::TooManyArgs(head_ty.clone(), args.len()));
        };
        let at = a.result_type(sig);
        if &at != d {
            return Err(TermError::TypeMismatch { index: i + 1, expected: d.clone(), found: at });
        }
        t = c;
    }
    Ok(t.clone())
}

/// Normalizes a raw λ-preterm to η-long β-normal form, checking types.
pub fn normalize(raw: &Raw, sig: &Signature) -> Result<Term, TermError> {
    norm(raw, sig, &mut Vec::new())
}

fn norm(raw: &Raw, sig: &Signature, ctx: &mut Vec<Type>) -> Result<Term, TermError> {
    let mut head = raw;
    let mut rargs = Vec::new();
    while let Raw::App(f, a) = head {
        rargs.push(&**a);
        head = f;
    }
    rargs.reverse();
    let args = rargs.into_iter().map(|a| norm(a, sig, ctx)).collect::<Result<Vec<_>, _>>()?;
    let (h, hty) = match head {
        Raw::Lam(ty, body) => {
            sig.check_type(ty)?;
            ctx.push(ty.clone());
            let b = norm(body, sig, ctx);
            ctx.pop();
            let lam = Term::lam(ty.clone(), b?);
            check_args(&lam.result_type(sig), &args, sig)?;
            return Ok(apply(lam, &args));
        }
        Raw::Var(n, ty) => {
            sig.check_type(ty)?;
            (Term::Var { name: n.clone(), ty: ty.clone(), args: Vec::new() }, ty.clone())
        }
        Raw::Db(i, ty) => {
            sig.check_type(ty)?;
            if *i < ctx.len() {
                let bound = &ctx[ctx.len() - 1 - i];
                if bound != ty {
                    return Err(TermError::BinderMismatch { index: *i, expected: bound.clone(), found: ty.clone() });
                }
            }
            (Term::Db { index: *i, ty: ty.clone(), args: Vec::new() }, ty.clone())
        }
        Raw::Sym(n, tys, rparams) => {
            if is_literal(n) {
                return Err(TermError::Reserved(n.clone()));
            }
            for t in tys {
                sig.check_type(t)?;
            }
            let hty = sig.head_type(n, tys)?;
            let ptys = sig.param_types(n, tys)?;
            if ptys.len() != rparams.len() {
                return Err(TermError::ParamCount(n.clone(), ptys.len(), rparams.len()));
            }
            let mut params = Vec::with_capacity(rparams.len());
            for (i, (p, pt)) in rparams.iter().zip(&ptys).enumerate() {
                let p = norm(p, sig, &mut Vec::new())?;
                if !p.is_closed() {
                    return Err(TermError::LeakingParam(n.clone()));
                }
                let found = p.result_type(sig);
                if &found != pt {
                    return Err(TermError::TypeMismatch { index: i + 1, expected: pt.clone(), found });
                }
                params.push(p);
            }
            (Term::Sym { name: n.clone(), ty_args: tys.clone(), params, args: Vec::new() }, hty)
        }
        Raw::App(..) => unreachable!(),
    };
    let spine_ty = check_args(&hty, &args, sig)?;
    Ok(eta_spine(&h, args, &spine_ty))
}

/// Checks that `t` is well typed and η-long, returning its type.
pub fn type_of(t: &Term, sig: &Signature) -> Result<Type, TermError> {
    check(t, sig, &mut Vec::new())
}

fn check(t: &Term, sig: &Signature, ctx: &mut Vec<Type>) -> Result<Type, TermError> {
    let (hty, args) = match t {
        Term::Lam { ty, body } => {
            sig.check_type(ty)?;
            ctx.push(ty.clone());
            let b = check(body, sig, ctx);
            ctx.pop();
            return Ok(Type::arrow(ty.clone(), b?));
        }
        Term::Var { ty, args, .. } => {
            sig.check_type(ty)?;
            (ty.clone(), args)
        }
        Term::Db { index, ty, args } => {
            sig.check_type(ty)?;
            if *index < ctx.len() {
                let bound = &ctx[ctx.len() - 1 - index];
                if bound != ty {
                    return Err(TermError::BinderMismatch {
                        index: *index,
                        expected: bound.clone(),
                        found: ty.clone(),
                    });
                }
            }
            (ty.clone(), args)
        }
        Term::Sym { name, ty_args, params, args } => {
            for ty in ty_args {
                sig.check_type(ty)?;
            }
            let hty = sig.head_type(name, ty_args)?;
            if !is_literal(name) {
                let ptys = sig.param_types(name, ty_args)?;
                if ptys.len() != params.len() {
                    return Err(TermError::ParamCount(name.clone(), ptys.len(), params.len()));
                }
                for (i, (p, pt)) in params.iter().zip(&ptys).enumerate() {
                    let found = check(p, sig, &mut Vec::new())?;
                    if !p.is_closed() {
                        return Err(TermError::LeakingParam(name.clone()));
                    }
                    if &found != pt {
                        return Err(TermError::TypeMismatch { index: i + 1, expected: pt.clone(), found });
                    }
                }
            }
            (hty, args)
        }
    };
    let mut cur = &hty;
    for (i, a) in args.iter().enumerate() {
        let Some((d, c)) = cur.as_arrow() else {
            return Err(TermError::TooManyArgs(hty.clone(), args.len()));
        };
        let at = check(a, sig, ctx)?;
        if &at != d {
            return Err(TermError::TypeMismatch { index: i + 1, expected: d.clone(), found: at });
        }
        cur = c;
    }
    if cur.is_arrow() {
        return Err(TermError::NotEtaLong(cur.clone()));
    }
    Ok(cur.clone())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub types: BTreeMap<Name, Type>,
    pub terms: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn types(types: BTreeMap<Name, Type>) -> Substitution {
        Substitution { types, terms: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty() && self.terms.is_empty()
    }

    /// Checks every term binding is a closed, well-typed η-long term.
    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        for (n, t) in &self.terms {
            type_of(t, sig)?;
            if !t.is_closed() {
                return Err(TermError::SubstNotClosed(n.clone()));
            }
        }
        Ok(())
    }
}

/// Instantiates type and term variables and restores η-long β-normal form.
pub fn apply_substitution(t: &Term, s: &Substitution, sig: &Signature) -> Result<Term, TermError> {
    if s.is_empty() {
        return Ok(t.clone());
    }
    Ok(match t {
        Term::Lam { ty, body } => Term::lam(ty.subst(&s.types), apply_substitution(body, s, sig)?),
        Term::Var { name, ty, args } => {
            let ty = ty.subst(&s.types);
            let args = args.iter().map(|a| apply_substitution(a, s, sig)).collect::<Result<Vec<_>, _>>()?;
            if let Some(r) = s.terms.get(name) {
                let rt = r.result_type(sig);
                if rt != ty {
                    return Err(TermError::SubstType(name.clone(), rt, ty));
                }
                apply(r.clone(), &args)
            } else {
                let spine = ty.apply_n(args.len()).expect("well-formed term").clone();
                eta_spine(&Term::Var { name: name.clone(), ty, args: Vec::new() }, args, &spine)
            }
        }
        Term::Db { index, ty, args } => {
            let ty = ty.subst(&s.types);
            let args = args.iter().map(|a| apply_substitution(a, s, sig)).collect::<Result<Vec<_>, _>>()?;
            let spine = ty.apply_n(args.len()).expect("well-formed term").clone();
            eta_spine(&Term::Db { index: *index, ty, args: Vec::new() }, args, &spine)
        }
        Term::Sym { name, ty_args, params, args } => {
            let ty_args: Vec<Type> = ty_args.iter().map(|a| a.subst(&s.types)).collect();
            let params = params.iter().map(|a| apply_substitution(a, s, sig)).collect::<Result<Vec<_>, _>>()?;
            let args = args.iter().map(|a| apply_substitution(a, s, sig)).collect::<Result<Vec<_>, _>>()?;
            let h = Term::Sym { name: name.clone(), ty_args, params, args: Vec::new() };
            let spine = h.head_type(sig).apply_n(args.len()).expect("well-formed term").clone();
            eta_spine(&h, args, &spine)
        }
    })
}

/// Like [`apply_substitution`], but omits the outermost λs that η-expansion
/// of the root spine introduces; the indices they bound are left leaking.
pub fn truncating_apply(t: &Term, s: &Substitution, sig: &Signature) -> Result<Term, TermError> {
    let full = apply_substitution(t, s, sig)?;
    if t.is_lam() {
        return Ok(full);
    }
    let introduced = t.result_type(sig).subst(&s.types).arity();
    Ok(strip_n_lams(full, introduced))
}

fn strip_n_lams(mut t: Term, n: usize) -> Term {
    for _ in 0..n {
        t = match t {
            Term::Lam { body, .. } => *body,
            other => return other,
        };
    }
    t
}

/// Removes all leading λs.
pub fn strip_lams(t: &Term) -> &Term {
    let mut t = t;
    while let Term::Lam { body, .. } = t {
        t = body;
    }
    t
}

pub fn is_steady(t: &Term, sig: &Signature) -> bool {
    matches!(t.result_type(sig), Type::Con(n, _) if &*n != ARROW)
}

pub fn is_steady_type(ty: &Type) -> bool {
    matches!(ty, Type::Con(n, _) if &**n != ARROW)
}

/// Path of child steps: argument index for spines, `0` for a λ body.
pub type Position = Vec<usize>;

/// Orange positions with the number of λs above each, in preorder.
/// Parameters and arguments of variables are not orange.
pub fn orange_positions(t: &Term) -> Vec<(Position, usize)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_orange(t, 0, &mut path, &mut out);
    out
}

fn collect_orange(t: &Term, depth: usize, path: &mut Position, out: &mut Vec<(Position, usize)>) {
    out.push((path.clone(), depth));
    match t {
        Term::Sym { args, .. } | Term::Db { args, .. } => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                collect_orange(a, depth, path, out);
                path.pop();
            }
        }
        Term::Lam { body, .. } => {
            path.push(0);
            collect_orange(body, depth + 1, path, out);
            path.pop();
        }
        Term::Var { .. } => {}
    }
}

pub fn subterm_at<'a>(t: &'a Term, pos: &[usize]) -> Option<&'a Term> {
    let mut t = t;
    for &i in pos {
        t = match t {
            Term::Lam { body, .. } if i == 0 => body,
            Term::Lam { .. } => return None,
            _ => t.args().get(i)?,
        };
    }
    Some(t)
}

/// Binder types above `pos`, innermost last.
pub fn binders_at(t: &Term, pos: &[usize]) -> Option<Vec<Type>> {
    let mut out = Vec::new();
    let mut t = t;
    for &i in pos {
        t = match t {
            Term::Lam { ty, body } if i == 0 => {
                out.push(ty.clone());
                body
            }
            Term::Lam { .. } => return None,
            _ => t.args().get(i)?,
        };
    }
    Some(out)
}

/// Replaces the subterm at `pos` verbatim, without shifting.
pub fn replace_at(t: &Term, pos: &[usize], new: Term) -> Option<Term> {
    let Some((&first, rest)) = pos.split_first() else {
        return Some(new);
    };
    Some(match t {
        Term::Lam { ty, body } if first == 0 => Term::lam(ty.clone(), replace_at(body, rest, new)?),
        Term::Lam { .. } => return None,
        _ => {
            let mut args = t.args().to_vec();
            let slot = args.get_mut(first)?;
            *slot = replace_at(slot, rest, new)?;
            t.with_args(args)
        }
    })
}

/// A term with a hole at an orange position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrangeContext {
    pub term: Term,
    pub position: Position,
    pub depth: usize,
}

impl OrangeContext {
    pub fn new(term: Term, position: Position) -> Option<OrangeContext> {
        let depth = orange_positions(&term).into_iter().find(|(p, _)| *p == position)?.1;
        Some(OrangeContext { term, position, depth })
    }

    pub fn hole_type(&self, sig: &Signature) -> Type {
        subterm_at(&self.term, &self.position).expect("valid position").result_type(sig)
    }
}

/// `u[s↑k]`: plugs `s`, shifted by the context depth, into the hole.
pub fn orange_replace(ctx: &OrangeContext, s: &Term, sig: &Signature) -> Result<Term, TermError> {
    let expected = ctx.hole_type(sig);
    let found = s.result_type(sig);
    if expected != found {
        return Err(TermError::TypeMismatch { index: 1, expected, found });
    }
    Ok(replace_at(&ctx.term, &ctx.position, shift(s, ctx.depth, 0)).expect("valid position"))
}

/// The weight-literal symbol `k⟨τ⟩` used by [`norm_key`].
pub fn literal(weight: &Ordinal, ty: Type, args: Vec<Term>) -> Term {
    Term::Sym { name: name(&format!("{LITERAL_PREFIX}{weight}")), ty_args: vec![ty], params: Vec::new(), args }
}

pub fn literal_weight(n: &str) -> Option<Ordinal> {
    n.strip_prefix(LITERAL_PREFIX).map(|s| s.parse().expect("literal symbol carries an ordinal"))
}

/// Normalization used for indeterminate subscripts: symbols whose argument
/// coefficients are all 1 collapse to the literal of their weight at their
/// head type, and leaking De Bruijn indices collapse to the literal of
/// `w_db`. Indices bound inside `t` are kept, since identifying them with
/// constants of equal weight would merge subscripts whose instances weigh
/// differently.
pub fn norm_key(t: &Term, p: &crate::lambda_order::OrderParams) -> Term {
    norm_at(t, p, 0)
}

fn norm_at(t: &Term, p: &crate::lambda_order::OrderParams, depth: usize) -> Term {
    let sig = &p.signature;
    match t {
        Term::Var { name, ty, args } => {
            Term::Var { name: name.clone(), ty: ty.clone(), args: args.iter().map(|a| norm_at(a, p, depth)).collect() }
        }
        Term::Sym { name, ty_args, params, args } => {
            let args = args.iter().map(|a| norm_at(a, p, depth)).collect();
            match p.unit_weight(name) {
                Some(w) => literal(&w, sig.head_type(name, ty_args).expect("well-formed term"), args),
                None => Term::Sym { name: name.clone(), ty_args: ty_args.clone(), params: params.clone(), args },
            }
        }
        Term::Db { index, ty, args } => {
            let args = args.iter().map(|a| norm_at(a, p, depth)).collect();
            if *index < depth {
                Term::Db { index: *index, ty: ty.clone(), args }
            } else {
                literal(&p.w_db, ty.clone(), args)
            }
        }
        Term::Lam { ty, body } => Term::lam(ty.clone(), norm_at(body, p, depth + 1)),
    }
}

/// Number of λs introduced when a head of type `ty` is η-expanded,
/// counting those of nested η-expanded indices.
pub fn eta_expansion_count(ty: &Type) -> usize {
    let (doms, _) = ty.split_arrows();
    doms.len() + doms.iter().map(|d| eta_expansion_count(d)).sum::<usize>()
}

/// Rewrites `∀(λ t)` to `(λ t) ≈ (λ ⊤)` and `∃(λ t)` to `(λ t) ≉ (λ ⊥)`.
pub fn preprocess_quantifiers(t: &Term, sig: &Signature) -> Term {
    match t {
        Term::Sym { name: n, ty_args, params, args } => {
            let args: Vec<Term> = args.iter().map(|a| preprocess_quantifiers(a, sig)).collect();
            let quant = match &**n {
                FORALL => Some((EQ, TOP)),
                EXISTS => Some((NEQ, BOT)),
                _ => None,
            };
            match (quant, args.as_slice()) {
                (Some((rel, cst)), [lam @ Term::Lam { ty, .. }]) => {
                    let o = Term::cst(cst).result_type(sig);
                    let rhs = Term::lam(ty.clone(), Term::cst(cst));
                    Term::Sym {
                        name: name(rel),
                        ty_args: vec![Type::arrow(ty.clone(), o)],
                        params: Vec::new(),
                        args: vec![lam.clone(), rhs],
                    }
                }
                _ => Term::Sym { name: n.clone(), ty_args: ty_args.clone(), params: params.clone(), args },
            }
        }
        Term::Var { name, ty, args } => Term::Var {
            name: name.clone(),
            ty: ty.clone(),
            args: args.iter().map(|a| preprocess_quantifiers(a, sig)).collect(),
        },
        Term::Db { index, ty, args } => Term::Db {
            index: *index,
            ty: ty.clone(),
            args: args.iter().map(|a| preprocess_quantifiers(a, sig)).collect(),
        },
        Term::Lam { ty, body } => Term::lam(ty.clone(), preprocess_quantifiers(body, sig)),
    }
}
