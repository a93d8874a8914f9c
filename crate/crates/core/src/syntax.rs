//! S-expression syntax for types and terms.
//!
//! ```text
//! TY ::= NAME | 'NAME | (NAME TY*) | (-> TY TY)
//! T  ::= NAME | (lam TY T T*) | (db N TY T*) | (sym NAME (TY*) (T*) T*) | (var NAME TY T*)
//! ```
//!
//! A bare `NAME` abbreviates `(sym NAME () ())`. Extra arguments after a λ
//! form β-redexes; all input is normalized to η-long β-normal form. Text
//! after `;` up to the end of the line is a comment.

use std::fmt;

use thiserror::Error;

use crate::term::{name, normalize, Raw, Signature, Term, TermError, Type, ARROW};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub msg: String,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, msg: msg.into() })
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn new(src: &str) -> Reader<'_> {
        Reader { chars: src.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SyntaxError> {
        self.skip_blank();
        let start = self.pos;
        match self.chars.peek() {
            None => err(start, "unexpected end of input"),
            Some(')') => err(start, "unexpected ')'"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.chars.peek() {
                        None => return err(start, "unclosed '('"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }

    fn read_only(mut self) -> Result<Sexp, SyntaxError> {
        let e = self.read()?;
        self.skip_blank();
        if self.chars.peek().is_some() {
            return err(self.pos, "trailing input after expression");
        }
        Ok(e)
    }
}

fn type_from(e: &Sexp, sig: Option<&Signature>) -> Result<Type, SyntaxError> {
    let ty = match e {
        Sexp::Atom(a, p) => match a.strip_prefix('\'') {
            Some("") => return err(*p, "empty type variable name"),
            Some(v) => Type::var(v),
            None => Type::base(a),
        },
        Sexp::List(items, p) => match items.split_first() {
            Some((Sexp::Atom(c, _), rest)) => {
                let args = rest.iter().map(|t| type_from(t, sig)).collect::<Result<Vec<_>, _>>()?;
                if c == ARROW && args.len() != 2 {
                    return err(*p, "'->' takes exactly two types");
                }
                Type::Con(name(c), args)
            }
            _ => return err(*p, "expected a type constructor"),
        },
    };
    if let Some(sig) = sig {
        if let Err(te) = sig.check_type(&ty) {
            return err(e.pos(), te.to_string());
        }
    }
    Ok(ty)
}

fn atom(e: &Sexp, what: &str) -> Result<String, SyntaxError> {
    match e {
        Sexp::Atom(a, _) => Ok(a.clone()),
        Sexp::List(_, p) => err(*p, format!("expected {what}")),
    }
}

fn raw_from(e: &Sexp, sig: &Signature) -> Result<Raw, SyntaxError> {
    let (items, p) = match e {
        Sexp::Atom(a, p) => {
            if sig.decl(a).is_none() {
                return err(*p, format!("unknown symbol '{a}'"));
            }
            return Ok(Raw::Sym(name(a), Vec::new(), Vec::new()));
        }
        Sexp::List(items, p) => (items, *p),
    };
    let Some((Sexp::Atom(kw, _), rest)) = items.split_first() else {
        return err(p, "expected one of lam, db, sym, var");
    };
    let need = |n: usize, form: &str| if rest.len() < n { err(p, format!("malformed {form}")) } else { Ok(()) };
    let args = |from: usize| rest[from..].iter().map(|a| raw_from(a, sig)).collect::<Result<Vec<_>, _>>();
    match kw.as_str() {
        "lam" => {
            need(2, "lam: expected (lam TY T)")?;
            let ty = type_from(&rest[0], Some(sig))?;
            let body = raw_from(&rest[1], sig)?;
            Ok(Raw::app(Raw::Lam(ty, Box::new(body)), args(2)?))
        }
        "db" => {
            need(2, "db: expected (db N TY)")?;
            let n = atom(&rest[0], "an index")?;
            let Ok(i) = n.parse::<usize>() else {
                return err(rest[0].pos(), format!("'{n}' is not a De Bruijn index"));
            };
            let ty = type_from(&rest[1], Some(sig))?;
            Ok(Raw::app(Raw::Db(i, ty), args(2)?))
        }
        "var" => {
            need(2, "var: expected (var NAME TY)")?;
            let n = atom(&rest[0], "a variable name")?;
            let ty = type_from(&rest[1], Some(sig))?;
            Ok(Raw::app(Raw::Var(name(&n), ty), args(2)?))
        }
        "sym" => {
            need(3, "sym: expected (sym NAME (TY*) (T*))")?;
            let n = atom(&rest[0], "a symbol name")?;
            if sig.decl(&n).is_none() {
                return err(rest[0].pos(), format!("unknown symbol '{n}'"));
            }
            let Sexp::List(tys, _) = &rest[1] else {
                return err(rest[1].pos(), "expected a list of type arguments");
            };
            let Sexp::List(params, _) = &rest[2] else {
                return err(rest[2].pos(), "expected a list of parameters");
            };
            let tys = tys.iter().map(|t| type_from(t, Some(sig))).collect::<Result<Vec<_>, _>>()?;
            let params = params.iter().map(|t| raw_from(t, sig)).collect::<Result<Vec<_>, _>>()?;
            Ok(Raw::app(Raw::Sym(name(&n), tys, params), args(3)?))
        }
        other => err(p, format!("unknown form '{other}'; expected lam, db, sym or var")),
    }
}

/// Parses a type without checking constructor arities.
pub fn parse_type(src: &str) -> Result<Type, SyntaxError> {
    type_from(&Reader::new(src).read_only()?, None)
}

/// Parses a type and checks it against the type constructors of `sig`.
pub fn parse_type_in(src: &str, sig: &Signature) -> Result<Type, SyntaxError> {
    type_from(&Reader::new(src).read_only()?, Some(sig))
}

/// Parses a preterm without normalizing it.
pub fn parse_raw(src: &str, sig: &Signature) -> Result<Raw, SyntaxError> {
    raw_from(&Reader::new(src).read_only()?, sig)
}

/// Parses and normalizes a term. Type errors found during normalization are
/// reported at the start of the term.
pub fn parse_term(src: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let e = Reader::new(src).read_only()?;
    let raw = raw_from(&e, sig)?;
    normalize(&raw, sig).map_err(|te: TermError| SyntaxError { pos: e.pos(), msg: te.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::TypeDecl;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_type("kappa", 0);
        s.add_type("list", 1);
        s.add_symbol("a", TypeDecl::simple(Type::base("kappa")));
        s.add_symbol("f", TypeDecl::simple(Type::arrow(Type::base("kappa"), Type::base("kappa"))));
        s
    }

    #[test]
    fn types() {
        assert_eq!(parse_type("'a").unwrap(), Type::var("a"));
        assert_eq!(parse_type("(-> kappa 'b)").unwrap(), Type::arrow(Type::base("kappa"), Type::var("b")));
        assert_eq!(parse_type("(list kappa)").unwrap(), Type::Con(name("list"), vec![Type::base("kappa")]));
        assert!(parse_type("(-> kappa)").is_err());
        assert!(parse_type_in("(list)", &sig()).is_err());
    }

    #[test]
    fn identity_abstraction() {
        let t = parse_term("(lam kappa (db 0 kappa))", &sig()).unwrap();
        assert_eq!(t, Term::lam(Type::base("kappa"), Term::db(0, Type::base("kappa"))));
    }

    #[test]
    fn eta_expands_and_beta_reduces() {
        let s = sig();
        let f = parse_term("f", &s).unwrap();
        assert_eq!(f.to_string(), "(lam kappa (sym f () () (db 0 kappa)))");
        let t = parse_term("(lam kappa (sym f () () (db 0 kappa)) a)", &s).unwrap();
        assert_eq!(t, parse_term("(sym f () () a)", &s).unwrap());
    }

    #[test]
    fn display_round_trips() {
        let s = sig();
        for src in
            ["(sym f () () (var x kappa))", "(lam kappa (sym f () () (db 0 kappa)))", "(var y (-> kappa kappa) a)"]
        {
            let t = parse_term(src, &s).unwrap();
            assert_eq!(parse_term(&t.to_string(), &s).unwrap(), t);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let s = sig();
        let e = parse_term("(sym f () ()\n   b)", &s).unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 4 });
        assert!(e.msg.contains("unknown symbol"));
        let e = parse_term("(sym f () () a", &s).unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 1 });
        let e = parse_term("  (sym f () () (lam kappa a))", &s).unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 3 });
        assert!(parse_term("(sym f () () a) a", &s).is_err());
    }
}
