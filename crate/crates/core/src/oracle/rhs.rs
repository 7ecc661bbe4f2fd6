//! Symbolic right-hand sides of the dictionary and their evaluation.
//!
//! ```text
//! rhs     := ext ('⊕' ext)*
//! ext     := tensor ('/' (tensor | '~' | '≈'))?
//! tensor  := atom (('⊗_{Z[G]}' | '⊗') atom)*
//! atom    := '0' | 'Z' | 'Z[G]' | 'g' ('^' k)? | 'G_ab'
//!          | 'H_' n '(G' (',' rhs)? ')' | 'Tor(' rhs ',' rhs ')'
//!          | 'ker{' tensor '→' tensor '}' | '(' rhs ')' ('_G')?
//! ```
//!
//! A sum with several summands denotes an iterated extension whose pieces
//! are listed from the bottom of the filtration.

use crate::error::{Error, Result};
use crate::intlin::abgroup::{AbMap, FinPresAb, Invariants};
use crate::intlin::gmodule::{augmentation_quotient, tensor_maps, GModule};
use crate::intlin::Int;

use super::{approx_quotient, sim_quotient, Oracle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rhs {
    Zero,
    Integers,
    GroupRing,
    Aug(usize),
    Gab,
    Homology(usize, Option<Box<Rhs>>),
    Tor(Box<Rhs>, Box<Rhs>),
    Kernel(Vec<Rhs>, Vec<Rhs>),
    Coinvariants(Box<Rhs>),
    Tensor(Box<Rhs>, Box<Rhs>),
    TensorOverGroup(Box<Rhs>, Box<Rhs>),
    AugQuotient(usize, usize),
    SimQuotient,
    ApproxQuotient,
    Extension(Vec<Rhs>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhsValue {
    Exact(Invariants),
    /// Extension of the listed pieces: known rank, and torsion order either
    /// exact or bounded by divisibility `lower | order | upper`.
    Order {
        rank: usize,
        lower: Int,
        upper: Int,
    },
}

impl RhsValue {
    pub fn matches(&self, computed: &Invariants) -> bool {
        match self {
            RhsValue::Exact(inv) => inv == computed,
            RhsValue::Order { rank, lower, upper } => {
                let t = computed.torsion_order();
                computed.rank == *rank && lower.divides(&t) && t.divides(upper)
            }
        }
    }
}

impl std::fmt::Display for RhsValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RhsValue::Exact(inv) => write!(f, "{inv}"),
            RhsValue::Order { rank, lower, upper } if lower == upper => {
                write!(f, "rank {rank}, torsion order {lower}")
            }
            RhsValue::Order { rank, lower, upper } => {
                write!(f, "rank {rank}, torsion order between {lower} and {upper}")
            }
        }
    }
}

impl Rhs {
    pub fn parse(text: &str) -> Result<Rhs> {
        let mut p = Parser { src: text, pos: 0 };
        let r = p.rhs()?;
        p.ws();
        if p.pos != text.len() {
            return Err(Error::syntax(p.pos, "trailing input"));
        }
        Ok(r)
    }

    /// Resolution depth needed to evaluate the expression.
    pub fn homology_depth(&self) -> usize {
        match self {
            Rhs::Homology(n, m) => (n + 1).max(m.as_ref().map_or(0, |m| m.homology_depth())),
            Rhs::Tor(a, b) | Rhs::Tensor(a, b) | Rhs::TensorOverGroup(a, b) => {
                a.homology_depth().max(b.homology_depth())
            }
            Rhs::Coinvariants(a) => a.homology_depth(),
            Rhs::Kernel(a, b) => a.iter().chain(b).map(Rhs::homology_depth).max().unwrap_or(0),
            Rhs::Extension(v) => v.iter().map(Rhs::homology_depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn evaluate(&self, o: &Oracle) -> Result<RhsValue> {
        match self {
            Rhs::Extension(parts) => {
                let invs = parts
                    .iter()
                    .map(|p| Ok(self::module(p, o)?.module().invariants().clone()))
                    .collect::<Result<Vec<_>>>()?;
                let rank = invs.iter().map(|i| i.rank).sum();
                let upper: Int = invs.iter().map(Invariants::torsion_order).product();
                let exact = invs[..invs.len() - 1].iter().all(Invariants::is_finite);
                let lower = if exact { upper.clone() } else { invs[0].torsion_order() };
                Ok(RhsValue::Order { rank, lower, upper })
            }
            Rhs::AugQuotient(a, b) => Ok(RhsValue::Exact(
                augmentation_quotient(o.group(), *a, *b)?.invariants().clone(),
            )),
            Rhs::SimQuotient => Ok(RhsValue::Exact(sim_quotient(o.group(), o.rank_cap)?)),
            Rhs::ApproxQuotient => Ok(RhsValue::Exact(approx_quotient(o.group(), o.rank_cap)?)),
            Rhs::Kernel(src, dst) => Ok(RhsValue::Exact(kernel(src, dst, o)?.invariants().clone())),
            Rhs::Coinvariants(a) => Ok(RhsValue::Exact(module(a, o)?.coinvariants().invariants().clone())),
            other => Ok(RhsValue::Exact(module(other, o)?.module().invariants().clone())),
        }
    }
}

fn trivial_from(inv: &Invariants, o: &Oracle) -> GModule {
    o.trivial(FinPresAb::from_invariants(inv))
}

fn module(r: &Rhs, o: &Oracle) -> Result<GModule> {
    Ok(match r {
        Rhs::Zero => o.trivial(FinPresAb::zero()),
        Rhs::Integers => o.trivial(FinPresAb::free(1)),
        Rhs::GroupRing => GModule::ideal_power(o.group().clone(), 0),
        Rhs::Aug(k) => GModule::ideal_power(o.group().clone(), *k),
        Rhs::Gab => o.trivial(o.gab().clone()),
        Rhs::Homology(n, m) => {
            let coeff = match m {
                Some(m) => module(m, o)?,
                None => o.trivial(FinPresAb::free(1)),
            };
            trivial_from(o.homology(*n, &coeff)?.invariants(), o)
        }
        Rhs::Tor(a, b) => {
            let a = module(a, o)?.module().invariants().clone();
            let b = module(b, o)?.module().invariants().clone();
            trivial_from(&a.tor(&b), o)
        }
        Rhs::Tensor(a, b) => module(a, o)?.tensor(&module(b, o)?),
        Rhs::TensorOverGroup(a, b) => module(a, o)?.tensor_over_group(&module(b, o)?),
        Rhs::Coinvariants(a) => o.trivial(module(a, o)?.coinvariants()),
        Rhs::Kernel(src, dst) => o.trivial(kernel(src, dst, o)?),
        Rhs::AugQuotient(..) | Rhs::SimQuotient | Rhs::ApproxQuotient | Rhs::Extension(_) => {
            let value = r.evaluate(o)?;
            match value {
                RhsValue::Exact(inv) => trivial_from(&inv, o),
                RhsValue::Order { .. } => {
                    return Err(Error::Precondition("an extension cannot be used as a factor".into()))
                }
            }
        }
    })
}

/// Kernel of a factorwise map of `Z`-tensor products, each factor either the
/// identity or the projection `g → G_ab`.
fn kernel(src: &[Rhs], dst: &[Rhs], o: &Oracle) -> Result<FinPresAb> {
    if src.len() != dst.len() {
        return Err(Error::Malformed("kernel factors do not match".into()));
    }
    let mut acc: Option<AbMap> = None;
    for (a, b) in src.iter().zip(dst) {
        let f = match (a, b) {
            (Rhs::Aug(1), Rhs::Gab) => o.gab_projection().clone(),
            (x, y) if x == y => AbMap::identity(module(x, o)?.module().clone()),
            _ => return Err(Error::Malformed("unsupported factor map in kernel".into())),
        };
        acc = Some(match acc {
            None => f,
            Some(prev) => tensor_maps(&prev, &f)?,
        });
    }
    let map = acc.ok_or_else(|| Error::Malformed("empty kernel".into()))?;
    Ok(map.kernel().group().clone())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected {tok:?}")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.ws();
        let digits: String = self.src[self.pos..].chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(Error::syntax(self.pos, "expected a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| Error::syntax(self.pos, "number too large"))
    }

    fn rhs(&mut self) -> Result<Rhs> {
        let mut parts = vec![self.ext()?];
        while self.eat("⊕") {
            parts.push(self.ext()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Rhs::Extension(parts) })
    }

    fn ext(&mut self) -> Result<Rhs> {
        let at = self.pos;
        let t = self.tensor()?;
        if !self.eat("/") {
            return Ok(t);
        }
        let g2g2 = Rhs::TensorOverGroup(Box::new(Rhs::Aug(2)), Box::new(Rhs::Aug(2)));
        if self.eat("~") {
            return if t == g2g2 { Ok(Rhs::SimQuotient) } else { Err(Error::syntax(at, "'/~' applies to g^2⊗_{Z[G]}g^2")) };
        }
        if self.eat("≈") {
            return if t == g2g2 { Ok(Rhs::ApproxQuotient) } else { Err(Error::syntax(at, "'/≈' applies to g^2⊗_{Z[G]}g^2")) };
        }
        let below = self.tensor()?;
        match (t, below) {
            (Rhs::Aug(a), Rhs::Aug(b)) => Ok(Rhs::AugQuotient(a, b)),
            _ => Err(Error::syntax(at, "quotients are supported between powers of g")),
        }
    }

    fn tensor(&mut self) -> Result<Rhs> {
        let mut acc = self.atom()?;
        loop {
            if self.eat("⊗_{Z[G]}") {
                acc = Rhs::TensorOverGroup(Box::new(acc), Box::new(self.atom()?));
            } else if self.eat("⊗") {
                acc = Rhs::Tensor(Box::new(acc), Box::new(self.atom()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factors(&mut self) -> Result<Vec<Rhs>> {
        let mut v = vec![self.atom()?];
        while self.eat("⊗") {
            v.push(self.atom()?);
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<Rhs> {
        self.ws();
        if self.eat("Z[G]") {
            return Ok(Rhs::GroupRing);
        }
        if self.eat("G_ab") {
            return Ok(Rhs::Gab);
        }
        if self.eat("H_") {
            let n = self.number()?;
            self.expect("(G")?;
            let coeff = if self.eat(",") { Some(Box::new(self.rhs()?)) } else { None };
            self.expect(")")?;
            return Ok(Rhs::Homology(n, coeff));
        }
        if self.eat("Tor(") {
            let a = self.rhs()?;
            self.expect(",")?;
            let b = self.rhs()?;
            self.expect(")")?;
            return Ok(Rhs::Tor(Box::new(a), Box::new(b)));
        }
        if self.eat("ker{") {
            let src = self.factors()?;
            self.expect("→")?;
            let dst = self.factors()?;
            self.expect("}")?;
            return Ok(Rhs::Kernel(src, dst));
        }
        if self.eat("(") {
            let inner = self.rhs()?;
            self.expect(")")?;
            return Ok(if self.eat("_G") { Rhs::Coinvariants(Box::new(inner)) } else { inner });
        }
        if self.eat("g") {
            let k = if self.eat("^") { self.number()? } else { 1 };
            return Ok(Rhs::Aug(k));
        }
        if self.eat("Z") {
            return Ok(Rhs::Integers);
        }
        if self.eat("0") {
            return Ok(Rhs::Zero);
        }
        Err(Error::syntax(self.pos, "expected a term"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dictionary_forms() {
        assert_eq!(Rhs::parse("g/g^3").unwrap(), Rhs::AugQuotient(1, 3));
        assert_eq!(Rhs::parse("g^2⊗_{Z[G]}g^2/~").unwrap(), Rhs::SimQuotient);
        assert_eq!(
            Rhs::parse("(g⊗g⊗g)_G").unwrap(),
            Rhs::Coinvariants(Box::new(Rhs::Tensor(
                Box::new(Rhs::Tensor(Box::new(Rhs::Aug(1)), Box::new(Rhs::Aug(1)))),
                Box::new(Rhs::Aug(1))
            )))
        );
        assert!(matches!(
            Rhs::parse("H_2(G,H_2(G)) ⊕ Tor(G_ab,H_2(G))").unwrap(),
            Rhs::Extension(v) if v.len() == 2
        ));
        assert!(matches!(Rhs::parse("ker{g⊗G_ab→G_ab⊗G_ab}").unwrap(), Rhs::Kernel(..)));
        assert!(Rhs::parse("g⊗").is_err());
        assert!(Rhs::parse("G_ab/~").is_err());
    }
}
