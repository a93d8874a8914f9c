//! Seeded random signatures, terms, substitutions and orange contexts.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lambda_order::{OrderKind, OrderParams};
use crate::ordinal::Ordinal;
use crate::term::{
    name, orange_positions, Name, OrangeContext, Signature, Substitution, Term, Type, TypeDecl, ARROW, BOT, DIFF, TOP,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Nesting budget for terms and types.
    pub max_depth: usize,
    /// Largest number of curried arguments of a generated symbol.
    pub max_arity: usize,
    /// Type variables `'a0`, `'a1`, ... available to polymorphic terms.
    pub ty_var_count: usize,
    /// Term variables `x0`, `x1`, ... available to nonground terms.
    pub term_var_count: usize,
    /// Occasionally give symbols transfinite weights.
    pub ordinal_weights: bool,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig { seed: 0, max_depth: 4, max_arity: 3, ty_var_count: 2, term_var_count: 4, ordinal_weights: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no term of type {0} within the depth budget")]
    Uninhabited(Type),
}

/// The base types every generated signature has; each has a constant.
pub const BASE_TYPES: [&str; 3] = ["o", "k0", "k1"];
/// The unary type constructor of generated signatures.
pub const BOX: &str = "box";

/// Levels past the depth budget a term may grow when a type has no
/// argument-free inhabitant.
const OVERRUN: i32 = 6;

pub struct Gen {
    pub cfg: GenConfig,
    pub rng: ChaCha8Rng,
    /// Types of the term variables used so far, so that a name always
    /// denotes one variable.
    vars: BTreeMap<Name, Type>,
}

fn base(n: &str) -> Type {
    Type::base(n)
}

impl Gen {
    pub fn new(cfg: GenConfig) -> Gen {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Gen { cfg, rng, vars: BTreeMap::new() }
    }

    /// Forgets the variable types chosen so far.
    pub fn reset_vars(&mut self) {
        self.vars.clear();
    }

    pub fn rng_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn rng_index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn var_types(&self) -> &BTreeMap<Name, Type> {
        &self.vars
    }

    fn weight(&mut self) -> Ordinal {
        if self.cfg.ordinal_weights && self.rng.gen_bool(0.1) {
            &Ordinal::omega() + &Ordinal::nat(self.rng.gen_range(0..3))
        } else {
            Ordinal::nat(self.rng.gen_range(1..=3))
        }
    }

    /// A signature with `⊤`, `⊥`, `diff`, a watershed and parameters
    /// satisfying all constraints, for the given order kind.
    pub fn signature(&mut self, kind: OrderKind) -> OrderParams {
        let mut sig = Signature::new();
        for b in BASE_TYPES {
            sig.add_type(b, 0);
        }
        sig.add_type(BOX, 1);
        let o = base("o");
        sig.add_symbol(TOP, TypeDecl::simple(o.clone()));
        sig.add_symbol(BOT, TypeDecl::simple(o.clone()));
        let (a, b) = (Type::var("a"), Type::var("b"));
        let ab = Type::arrow(a.clone(), b.clone());
        sig.add_symbol(
            DIFF,
            TypeDecl { tyvars: vec![name("a"), name("b")], params: vec![ab.clone(), ab], body: a.clone() },
        );
        sig.add_symbol("c0", TypeDecl::simple(base("k0")));
        sig.add_symbol("c1", TypeDecl::simple(base("k1")));
        sig.add_symbol(
            "nil",
            TypeDecl { tyvars: vec![name("a")], params: Vec::new(), body: Type::Con(name(BOX), vec![a.clone()]) },
        );
        sig.add_symbol(
            "pick",
            TypeDecl {
                tyvars: vec![name("a")],
                params: Vec::new(),
                body: Type::arrows([a.clone(), a.clone()], a.clone()),
            },
        );
        sig.add_symbol(
            "wrap",
            TypeDecl {
                tyvars: vec![name("a")],
                params: Vec::new(),
                body: Type::arrows([a.clone()], Type::Con(name(BOX), vec![a.clone()])),
            },
        );
        let extra = self.rng.gen_range(3..=5);
        for i in 0..extra {
            let arity = self.rng.gen_range(1..=self.cfg.max_arity.max(1));
            let doms: Vec<Type> = (0..arity).map(|_| self.small_ground_type(&sig, 1)).collect();
            let cod = base(BASE_TYPES.choose(&mut self.rng).expect("nonempty"));
            sig.add_symbol(&format!("f{i}"), TypeDecl::simple(Type::arrows(doms, cod)));
        }
        // One symbol with a parameter, as Skolem symbols have.
        sig.add_symbol(
            "sk",
            TypeDecl { tyvars: Vec::new(), params: vec![base("k0")], body: Type::arrows([base("k1")], base("k0")) },
        );

        let mut p = OrderParams::new(sig.clone(), kind);
        p.w_lambda = Ordinal::nat(self.rng.gen_range(1..=2));
        p.w_db = Ordinal::one();
        let mut rest: Vec<Name> = sig.order.iter().filter(|n| ![TOP, BOT, DIFF].contains(&&***n)).cloned().collect();
        rest.shuffle(&mut self.rng);
        for f in &rest {
            let w = self.weight();
            p.weights.insert(f.clone(), w);
            let arity = sig.curried_arity(f);
            if arity > 0 && self.rng.gen_bool(0.5) {
                let ks = (0..arity).map(|_| Ordinal::nat(self.rng.gen_range(1..=3))).collect();
                p.coeffs.insert(f.clone(), ks);
            }
        }
        p.weights.insert(name(DIFF), Ordinal::one());
        let mut prec = vec![name(TOP), name(BOT), name(DIFF)];
        prec.extend(rest.iter().cloned());
        let ws = self.rng.gen_range(2..prec.len());
        p.watershed = Some(prec[ws].clone());
        p.precedence = prec;
        p.type_precedence = vec![name("o"), name("k0"), name("k1"), name(BOX)];
        p.refresh();
        p.validate().expect("generated parameters satisfy the constraints");
        p
    }

    /// A ground type over the type constructors of `sig`; `depth` bounds
    /// nesting.
    pub fn small_ground_type(&mut self, sig: &Signature, depth: usize) -> Type {
        self.type_over(sig, depth, false)
    }

    /// Like [`Gen::small_ground_type`], but may contain the configured type
    /// variables `a0`, `a1`, ...
    pub fn small_type(&mut self, sig: &Signature, depth: usize) -> Type {
        self.type_over(sig, depth, true)
    }

    fn type_over(&mut self, sig: &Signature, depth: usize, vars: bool) -> Type {
        if vars && self.cfg.ty_var_count > 0 && self.rng.gen_bool(0.3) {
            return Type::var(&format!("a{}", self.rng.gen_range(0..self.cfg.ty_var_count)));
        }
        let r = self.rng.gen_range(0..10);
        let nullary: Vec<&Name> = sig.type_cons.iter().filter(|(_, &a)| a == 0).map(|(c, _)| c).collect();
        let compound: Vec<(&Name, usize)> =
            sig.type_cons.iter().filter(|(c, &a)| a > 0 && &***c != ARROW).map(|(c, &a)| (c, a)).collect();
        if depth == 0 || r < 6 || (r < 8 && compound.is_empty()) {
            match nullary.choose(&mut self.rng) {
                Some(c) => Type::base(c),
                // Only reachable for signatures without base types.
                None => Type::var("a0"),
            }
        } else if r < 8 {
            let &(c, a) = compound.choose(&mut self.rng).expect("nonempty");
            Type::Con(c.clone(), (0..a).map(|_| self.type_over(sig, depth - 1, vars)).collect())
        } else {
            Type::arrow(self.type_over(sig, depth - 1, vars), self.type_over(sig, depth - 1, vars))
        }
    }

    /// A type worth comparing terms at: the result type or an argument type
    /// of a random symbol, instantiated with random types.
    pub fn sample_type(&mut self, p: &OrderParams, ground: bool) -> Type {
        let sig = &p.signature;
        let Some(f) = sig.order.choose(&mut self.rng).cloned() else {
            return self.type_over(sig, 1, !ground);
        };
        let decl = sig.decl(&f).expect("declared").clone();
        let inst: BTreeMap<Name, Type> =
            decl.tyvars.iter().map(|v| (v.clone(), self.type_over(sig, 1, !ground))).collect();
        let (doms, res) = decl.body.split_arrows();
        let pick = self.rng.gen_range(0..=doms.len());
        let ty = if pick == doms.len() { res } else { doms[pick] };
        ty.subst(&inst)
    }

    /// An η-long β-normal term of type `ty`; ground if `ground` is set.
    pub fn term(&mut self, p: &OrderParams, ty: &Type, ground: bool) -> Result<Term, GenError> {
        let depth = self.cfg.max_depth as i32;
        self.term_in(p, &mut Vec::new(), ty, ground, depth)
    }

    /// Like [`Gen::term`], under binders of the given types (innermost last).
    /// Once `depth` reaches zero only argument-free heads are chosen where
    /// possible; a few levels further the attempt is abandoned.
    pub fn term_in(
        &mut self,
        p: &OrderParams,
        ctx: &mut Vec<Type>,
        ty: &Type,
        ground: bool,
        depth: i32,
    ) -> Result<Term, GenError> {
        if depth < -OVERRUN {
            return Err(GenError::Uninhabited(ty.clone()));
        }
        if let Some((dom, cod)) = ty.as_arrow() {
            ctx.push(dom.clone());
            let body = self.term_in(p, ctx, cod, ground, depth - 1);
            ctx.pop();
            return Ok(Term::lam(dom.clone(), body?));
        }
        let heads = self.heads(p, ctx, ty, ground, depth);
        let Candidate { mut head, params, args: arg_tys } =
            heads.choose(&mut self.rng).cloned().ok_or_else(|| GenError::Uninhabited(ty.clone()))?;
        if let Term::Sym { params: filled, .. } = &mut head {
            // Parameters are closed and kept small.
            for pt in &params {
                filled.push(self.term_in(p, &mut Vec::new(), pt, true, depth.min(0) - 1)?);
            }
        }
        let mut args = Vec::with_capacity(arg_tys.len());
        for a in &arg_tys {
            args.push(self.term_in(p, ctx, a, ground, depth - 1)?);
        }
        Ok(with_args(head, args))
    }

    /// Candidate heads of result type `ty`. At depth zero only heads
    /// without arguments qualify, unless there are none.
    fn heads(&mut self, p: &OrderParams, ctx: &[Type], ty: &Type, ground: bool, depth: i32) -> Vec<Candidate> {
        let sig = &p.signature;
        let mut out = Vec::new();
        for f in sig.order.clone() {
            let decl = sig.decl(&f).expect("declared").clone();
            let (doms, res) = decl.body.split_arrows();
            let mut inst = BTreeMap::new();
            if !match_type(res, ty, &mut inst) {
                continue;
            }
            for v in &decl.tyvars {
                if !inst.contains_key(v) {
                    let t = self.type_over(sig, 1, !ground);
                    inst.insert(v.clone(), t);
                }
            }
            let ty_args: Vec<Type> = decl.tyvars.iter().map(|v| inst[v].clone()).collect();
            out.push(Candidate {
                head: Term::Sym { name: f.clone(), ty_args, params: Vec::new(), args: Vec::new() },
                params: decl.params.iter().map(|t| t.subst(&inst)).collect(),
                args: doms.iter().map(|d| d.subst(&inst)).collect(),
            });
        }
        for (i, bty) in ctx.iter().rev().enumerate() {
            let (doms, res) = bty.split_arrows();
            if res == ty {
                out.push(Candidate::new(Term::Db { index: i, ty: bty.clone(), args: Vec::new() }, doms));
            }
        }
        if !ground {
            out.extend(self.var_heads(sig, ty));
        }
        if depth <= 0 {
            let leaves: Vec<_> = out.iter().filter(|c| c.args.is_empty()).cloned().collect();
            if !leaves.is_empty() {
                return leaves;
            }
        }
        out
    }

    fn var_heads(&mut self, sig: &Signature, ty: &Type) -> Vec<Candidate> {
        let mut out = Vec::new();
        for (n, vty) in &self.vars {
            let (doms, res) = vty.split_arrows();
            if res == ty {
                out.push(Candidate::new(Term::Var { name: n.clone(), ty: vty.clone(), args: Vec::new() }, doms));
            }
        }
        if self.vars.len() < self.cfg.term_var_count {
            let n = name(&format!("x{}", self.vars.len()));
            let arity = if self.rng.gen_bool(0.5) { 0 } else { self.rng.gen_range(1..=2) };
            let doms: Vec<Type> = (0..arity).map(|_| self.small_type(sig, 1)).collect();
            let vty = Type::arrows(doms.clone(), ty.clone());
            self.vars.insert(n.clone(), vty.clone());
            out.push(Candidate {
                head: Term::Var { name: n, ty: vty, args: Vec::new() },
                params: Vec::new(),
                args: doms,
            });
        }
        out
    }

    /// Maps each given type variable to a random ground type.
    pub fn monomorphizing_subst(&mut self, sig: &Signature, tyvars: &[Name]) -> Substitution {
        let types = tyvars.iter().map(|v| (v.clone(), self.small_ground_type(sig, 2))).collect();
        Substitution::types(types)
    }

    /// Maps each given variable to a closed ground term of its type, first
    /// instantiating any type variables in those types.
    pub fn grounding_subst(&mut self, p: &OrderParams, vars: &[(Name, Type)]) -> Result<Substitution, GenError> {
        let mut tyvars = Vec::new();
        for (_, t) in vars {
            t.collect_vars(&mut tyvars);
        }
        tyvars.sort();
        tyvars.dedup();
        let mut s = self.monomorphizing_subst(&p.signature, &tyvars);
        let depth = self.cfg.max_depth.min(3) as i32;
        for (y, t) in vars {
            let ty = t.subst(&s.types);
            let term = self.term_in(p, &mut Vec::new(), &ty, true, depth)?;
            s.terms.insert(y.clone(), term);
        }
        Ok(s)
    }

    /// A uniformly chosen orange position of `t`.
    pub fn orange_context(&mut self, t: &Term) -> OrangeContext {
        let positions = orange_positions(t);
        let (pos, depth) = positions.choose(&mut self.rng).expect("the root is always orange").clone();
        OrangeContext { term: t.clone(), position: pos, depth }
    }
}

/// Signature of the same-head nesting family: `a ≺ b ≺ f` with
/// `f : κ → κ → κ`, unit weights, and `b` as the watershed.
pub fn nesting_signature(kind: OrderKind) -> OrderParams {
    let mut sig = Signature::new();
    sig.add_type("kappa", 0);
    let k = base("kappa");
    sig.add_symbol("a", TypeDecl::simple(k.clone()));
    sig.add_symbol("b", TypeDecl::simple(k.clone()));
    sig.add_symbol("f", TypeDecl::simple(Type::arrows([k.clone(), k.clone()], k)));
    let p = OrderParams::new(sig, kind).with_precedence(&["a", "b", "f"]).with_watershed("b");
    p.validate().expect("valid nesting signature");
    p
}

/// `f(…f(a, a)…, a)` against `f(…f(b, b)…, b)`, with `depth` nested `f`s.
/// Every level has the same head on both sides, so a direct recursive
/// comparison revisits the same pairs of subterms many times.
pub fn nesting_pair(depth: usize) -> (Term, Term) {
    let nest = |leaf: &str| (0..depth).fold(Term::cst(leaf), |t, _| Term::app("f", vec![t, Term::cst(leaf)]));
    (nest("a"), nest("b"))
}

/// A head without its parameters and arguments, and their types.
#[derive(Clone)]
struct Candidate {
    head: Term,
    params: Vec<Type>,
    args: Vec<Type>,
}

impl Candidate {
    fn new(head: Term, args: Vec<&Type>) -> Candidate {
        Candidate { head, params: Vec::new(), args: args.into_iter().cloned().collect() }
    }
}

fn with_args(head: Term, args: Vec<Term>) -> Term {
    match head {
        Term::Sym { name, ty_args, params, .. } => Term::Sym { name, ty_args, params, args },
        Term::Db { index, ty, .. } => Term::Db { index, ty, args },
        Term::Var { name, ty, .. } => Term::Var { name, ty, args },
        Term::Lam { .. } => unreachable!("heads are never λs"),
    }
}

/// One-sided matching of a declared type against a target type.
pub(crate) fn match_type(pat: &Type, ty: &Type, inst: &mut BTreeMap<Name, Type>) -> bool {
    match (pat, ty) {
        (Type::Var(v), _) => match inst.get(v) {
            Some(t) => t == ty,
            None => {
                inst.insert(v.clone(), ty.clone());
                true
            }
        },
        (Type::Con(c, ps), Type::Con(d, ts)) => {
            c == d && ps.len() == ts.len() && ps.iter().zip(ts).all(|(a, b)| match_type(a, b, inst))
        }
        _ => false,
    }
}
