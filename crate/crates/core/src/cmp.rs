//! Six-valued comparison results and the extension combinators built on them.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    G,
    GE,
    E,
    LE,
    L,
    U,
}

impl Cmp {
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::G => Cmp::L,
            Cmp::GE => Cmp::LE,
            Cmp::E => Cmp::E,
            Cmp::LE => Cmp::GE,
            Cmp::L => Cmp::G,
            Cmp::U => Cmp::U,
        }
    }

    pub fn merge_with_ge(self) -> Cmp {
        match self {
            Cmp::L | Cmp::LE => Cmp::U,
            Cmp::E => Cmp::GE,
            c => c,
        }
    }

    pub fn merge_with_le(self) -> Cmp {
        match self {
            Cmp::G | Cmp::GE => Cmp::U,
            Cmp::E => Cmp::LE,
            c => c,
        }
    }

    /// Weakens strict results to their nonstrict counterparts.
    pub fn smooth(self) -> Cmp {
        match self {
            Cmp::G => Cmp::GE,
            Cmp::L => Cmp::LE,
            c => c,
        }
    }

    pub fn from_ordering(o: std::cmp::Ordering) -> Cmp {
        match o {
            std::cmp::Ordering::Greater => Cmp::G,
            std::cmp::Ordering::Equal => Cmp::E,
            std::cmp::Ordering::Less => Cmp::L,
        }
    }

    /// `t ≿ s` is established.
    pub fn is_ge(self) -> bool {
        matches!(self, Cmp::G | Cmp::GE | Cmp::E)
    }

    pub fn is_le(self) -> bool {
        matches!(self, Cmp::L | Cmp::LE | Cmp::E)
    }

    pub const ALL: [Cmp; 6] = [Cmp::G, Cmp::GE, Cmp::E, Cmp::LE, Cmp::L, Cmp::U];
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cmp::G => "G",
            Cmp::GE => "GE",
            Cmp::E => "E",
            Cmp::LE => "LE",
            Cmp::L => "L",
            Cmp::U => "U",
        };
        f.write_str(s)
    }
}

impl FromStr for Cmp {
    type Err = String;

    fn from_str(s: &str) -> Result<Cmp, String> {
        Cmp::ALL.into_iter().find(|c| c.to_string() == s).ok_or_else(|| format!("not a comparison result: {s}"))
    }
}

/// Left-to-right lexicographic extension over same-length lists.
pub fn lex_ext<T>(op: &mut impl FnMut(&T, &T) -> Cmp, bs: &[T], as_: &[T]) -> Cmp {
    assert_eq!(bs.len(), as_.len(), "lexicographic extension needs equal lengths");
    lex_from(op, bs, as_, 0)
}

fn lex_from<T>(op: &mut impl FnMut(&T, &T) -> Cmp, bs: &[T], as_: &[T], i: usize) -> Cmp {
    if i == bs.len() {
        return Cmp::E;
    }
    match op(&bs[i], &as_[i]) {
        Cmp::G => Cmp::G,
        Cmp::GE => lex_from(op, bs, as_, i + 1).merge_with_ge(),
        Cmp::E => lex_from(op, bs, as_, i + 1),
        Cmp::LE => lex_from(op, bs, as_, i + 1).merge_with_le(),
        Cmp::L => Cmp::L,
        Cmp::U => Cmp::U,
    }
}

/// Componentwise extension: lexicographic extension of the smoothed operator.
pub fn cw_ext<T>(op: &mut impl FnMut(&T, &T) -> Cmp, bs: &[T], as_: &[T]) -> Cmp {
    lex_ext(&mut |b: &T, a: &T| op(b, a).smooth(), bs, as_)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(results: &[Cmp]) -> impl FnMut(&usize, &usize) -> Cmp + '_ {
        move |i: &usize, _: &usize| results[*i]
    }

    #[test]
    fn lex_ext_cases() {
        let idx = [0usize, 1, 2];
        assert_eq!(lex_ext(&mut table(&[]), &idx[..0], &idx[..0]), Cmp::E);
        assert_eq!(lex_ext(&mut table(&[Cmp::G, Cmp::L]), &idx[..2], &idx[..2]), Cmp::G);
        assert_eq!(lex_ext(&mut table(&[Cmp::GE, Cmp::E]), &idx[..2], &idx[..2]), Cmp::GE);
        assert_eq!(lex_ext(&mut table(&[Cmp::GE, Cmp::L]), &idx[..2], &idx[..2]), Cmp::U);
        assert_eq!(lex_ext(&mut table(&[Cmp::LE, Cmp::LE, Cmp::L]), &idx, &idx), Cmp::L);
        assert_eq!(lex_ext(&mut table(&[Cmp::E, Cmp::U, Cmp::G]), &idx, &idx), Cmp::U);
    }

    #[test]
    fn cw_ext_cases() {
        let idx = [0usize, 1];
        assert_eq!(cw_ext(&mut table(&[Cmp::G, Cmp::L]), &idx, &idx), Cmp::U);
        assert_eq!(cw_ext(&mut table(&[Cmp::G, Cmp::E]), &idx, &idx), Cmp::GE);
        assert_eq!(cw_ext(&mut table(&[Cmp::E, Cmp::E]), &idx, &idx), Cmp::E);
        assert_eq!(cw_ext(&mut table(&[Cmp::L, Cmp::LE]), &idx, &idx), Cmp::LE);
    }

    #[test]
    fn flip_is_involutive() {
        for c in Cmp::ALL {
            assert_eq!(c.flip().flip(), c);
            assert_eq!(c.to_string().parse::<Cmp>().unwrap(), c);
        }
    }
}
