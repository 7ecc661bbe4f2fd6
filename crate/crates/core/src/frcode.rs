//! fr-codes: sums of intersections of monomials in the letters `f` and `r`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! code         := intersection ('+' intersection)*
//! intersection := mono (('∩' | '&') mono)*
//! mono         := item+
//! item         := ('f' | 'r') ('^' positive-int)?
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    R,
    F,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::R => 'r',
            Letter::F => 'f',
        }
    }
}

/// A nonempty product of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<Letter>);

impl Monomial {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Malformed("empty monomial".into()));
        }
        Ok(Monomial(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn r_power(n: usize) -> Self {
        Monomial(vec![Letter::R; n.max(1)])
    }

    /// Sound containment test: the ideal of `self` lies in the ideal of `other`
    /// when `other` embeds as a subsequence of `self` with every `r` of `other`
    /// landing on an `r`.
    pub fn dominated_by(&self, other: &Monomial) -> bool {
        let mut it = self.0.iter();
        other.0.iter().all(|&w| {
            it.by_ref()
                .any(|&v| w == Letter::F || v == Letter::R)
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// A nonempty intersection of monomials, kept sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Intersection(Vec<Monomial>);

impl Intersection {
    pub fn new(monos: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let set: BTreeSet<Monomial> = monos.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Malformed("empty intersection".into()));
        }
        Ok(Intersection(set.into_iter().collect()))
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.0
    }

    /// Sound containment of intersections.
    pub fn dominated_by(&self, other: &Intersection) -> bool {
        other
            .0
            .iter()
            .all(|w| self.0.iter().any(|v| v.dominated_by(w)))
    }

    fn prune(&self) -> Intersection {
        let keep: Vec<Monomial> = self
            .0
            .iter()
            .filter(|w| !self.0.iter().any(|v| v != *w && v.dominated_by(w)))
            .cloned()
            .collect();
        Intersection(keep)
    }

    pub fn max_len(&self) -> usize {
        self.0.iter().map(Monomial::len).max().unwrap_or(0)
    }
}

impl fmt::Display for Intersection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join("∩"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrCode(Vec<Intersection>);

impl FrCode {
    pub fn new(terms: impl IntoIterator<Item = Intersection>) -> Result<Self> {
        let set: BTreeSet<Intersection> = terms.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Malformed("empty code".into()));
        }
        Ok(FrCode(set.into_iter().collect()))
    }

    pub fn terms(&self) -> &[Intersection] {
        &self.0
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.0.iter().flat_map(|t| t.0.iter())
    }

    pub fn max_len(&self) -> usize {
        self.monomials().map(Monomial::len).max().unwrap_or(0)
    }

    /// Least `n` such that `r^n` is certified to lie in the code.
    pub fn min_r_power(&self) -> usize {
        self.0.iter().map(Intersection::max_len).min().unwrap_or(1)
    }

    /// Smallest truncation depth at which evaluating the code in `Z[F]/r^N`
    /// computes `c/r^N` exactly: beyond `min_r_power`, every monomial that is
    /// intersected with another must itself contain `r^N`.
    pub fn faithful_depth(&self) -> usize {
        let inter = self
            .0
            .iter()
            .filter(|t| t.0.len() > 1)
            .map(Intersection::max_len)
            .max()
            .unwrap_or(0);
        self.min_r_power().max(inter)
    }

    pub fn normalize(&self) -> FrCode {
        let terms: Vec<Intersection> = self.0.iter().map(Intersection::prune).collect();
        let mut removed = vec![false; terms.len()];
        for i in 0..terms.len() {
            removed[i] = (0..terms.len())
                .any(|j| j != i && !removed[j] && terms[i].dominated_by(&terms[j]));
        }
        let kept = terms
            .into_iter()
            .zip(removed)
            .filter(|(_, r)| !r)
            .map(|(t, _)| t);
        FrCode::new(kept).expect("normalization keeps at least one term")
    }
}

impl fmt::Display for FrCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for FrCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<FrCode> {
    Parser { src: text, pos: 0 }.code()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn unexpected(&self) -> Error {
        match self.peek() {
            Some(c) => Error::syntax(self.pos, format!("unexpected character {c:?}")),
            None => Error::syntax(self.pos, "unexpected end of input"),
        }
    }

    fn code(&mut self) -> Result<FrCode> {
        self.skip_ws();
        if self.peek().is_none() {
            return Err(Error::syntax(self.pos, "empty input"));
        }
        let mut terms = vec![self.intersection()?];
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => {
                    self.bump();
                    terms.push(self.intersection()?);
                }
                Some(_) => return Err(self.unexpected()),
            }
        }
        FrCode::new(terms)
    }

    fn intersection(&mut self) -> Result<Intersection> {
        let mut monos = vec![self.mono()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some('∩') | Some('&') => {
                    self.bump();
                    monos.push(self.mono()?);
                }
                _ => break,
            }
        }
        Intersection::new(monos)
    }

    fn mono(&mut self) -> Result<Monomial> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            let letter = match self.peek() {
                Some('f') => Letter::F,
                Some('r') => Letter::R,
                _ => break,
            };
            self.bump();
            self.skip_ws();
            let mut reps = 1usize;
            if self.peek() == Some('^') {
                self.bump();
                self.skip_ws();
                let start = self.pos;
                let mut digits = String::new();
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    digits.push(c);
                    self.bump();
                }
                if digits.is_empty() {
                    return Err(Error::syntax(start, "expected exponent"));
                }
                reps = digits
                    .parse()
                    .map_err(|_| Error::syntax(start, "exponent too large"))?;
                if reps == 0 {
                    return Err(Error::syntax(start, "exponent must be positive"));
                }
                if reps > 64 {
                    return Err(Error::syntax(start, "exponent too large"));
                }
            }
            letters.extend(std::iter::repeat(letter).take(reps));
        }
        if letters.is_empty() {
            return Err(self.unexpected());
        }
        Monomial::new(letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> FrCode {
        parse(s).unwrap()
    }

    #[test]
    fn parses_sums_and_intersections() {
        assert_eq!(p("rr+frf").to_string(), "rr+frf");
        assert_eq!(p("r^2∩f^3").to_string(), "rr∩fff");
        assert_eq!(p("r^2 & f^3"), p("r^2∩f^3"));
        assert_eq!(p("fr+rf").to_string(), "rf+fr");
        assert_eq!(p(" f r ^2 "), p("frr"));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let off = |s: &str| match parse(s) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("expected syntax error, got {other:?}"),
        };
        assert_eq!(off("rq+f"), 1);
        assert_eq!(off(""), 0);
        assert_eq!(off("   "), 3);
        assert_eq!(off("r^0"), 2);
        assert_eq!(off("r+"), 2);
        assert_eq!(off("r∩"), 4);
    }

    #[test]
    fn normalization() {
        assert_eq!(p("rf+rff").normalize().to_string(), "rf");
        assert_eq!(p("fr+rf+ff").normalize().to_string(), "ff");
        assert_eq!(p("rr+frf+rff").normalize(), p("rr+frf+rff"));
        assert_eq!(p("rr∩r").normalize().to_string(), "rr");
    }

    #[test]
    fn r_powers() {
        assert_eq!(p("fr+rf").min_r_power(), 2);
        assert_eq!(p("rr+fff").min_r_power(), 2);
        assert_eq!(p("rrr").min_r_power(), 3);
        assert_eq!(p("r^2∩f^3").faithful_depth(), 3);
    }
}
