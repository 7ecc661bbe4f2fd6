//! Free products of copies of a free group, reduced words, and the
//! homomorphisms making up the standard cosimplicial complex.

use std::fmt;

use crate::error::{Error, Result};

/// One syllable `x_gen^exp` in copy `copy` of the free product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub copy: usize,
    pub gen: usize,
    pub exp: i64,
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord(Vec<Syllable>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn gen(copy: usize, gen: usize) -> Self {
        FreeWord(vec![Syllable { copy, gen, exp: 1 }])
    }

    pub fn from_syllables(s: impl IntoIterator<Item = Syllable>) -> Self {
        let mut w = FreeWord::empty();
        for x in s {
            w.push(x);
        }
        w
    }

    /// Word from `(copy, gen, exp)` triples, reduced.
    pub fn from_triples(t: &[(usize, usize, i64)]) -> Self {
        Self::from_syllables(t.iter().map(|&(copy, gen, exp)| Syllable { copy, gen, exp }))
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length as a word in letters `x^{±1}`.
    pub fn len(&self) -> usize {
        self.0.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    /// Expand into letters with exponent ±1.
    pub fn letters(&self) -> impl Iterator<Item = Syllable> + '_ {
        self.0.iter().flat_map(|s| {
            let unit = Syllable {
                exp: s.exp.signum(),
                ..*s
            };
            std::iter::repeat(unit).take(s.exp.unsigned_abs() as usize)
        })
    }

    fn push(&mut self, s: Syllable) {
        if s.exp == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.copy == s.copy && last.gen == s.gen {
                last.exp += s.exp;
                if last.exp == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push(s);
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for &s in &other.0 {
            out.push(s);
        }
        out
    }

    pub fn inv(&self) -> FreeWord {
        FreeWord(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable { exp: -s.exp, ..*s })
                .collect(),
        )
    }

    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = FreeWord::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Free reduction; words built through this API are always reduced, so
    /// this only matters for raw syllable lists.
    pub fn reduce(&self) -> FreeWord {
        FreeWord::from_syllables(self.0.iter().copied())
    }

    /// Check every syllable fits an alphabet of `copies` copies of rank `rank`.
    pub fn check_alphabet(&self, copies: usize, rank: usize) -> Result<()> {
        for s in &self.0 {
            if s.copy >= copies || s.gen >= rank {
                return Err(Error::AlphabetMismatch(format!(
                    "syllable ({}, {}) outside {} copies of rank {}",
                    s.copy, s.gen, copies, rank
                )));
            }
        }
        Ok(())
    }

    /// Render with the given generator names, e.g. `x@1*y^-2@0`.
    pub fn render(&self, names: &[String], show_copies: bool) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                let name = names
                    .get(s.gen)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", s.gen));
                let mut t = name;
                if s.exp != 1 {
                    t.push_str(&format!("^{}", s.exp));
                }
                if show_copies {
                    t.push_str(&format!("@{}", s.copy));
                }
                t
            })
            .collect();
        parts.join("*")
    }

    /// Parse the rendering produced by [`FreeWord::render`]; copies default to 0.
    pub fn parse(text: &str, names: &[String]) -> Result<FreeWord> {
        let t = text.trim();
        if t.is_empty() || t == "1" {
            return Ok(FreeWord::empty());
        }
        let mut w = FreeWord::empty();
        for part in t.split('*') {
            let part = part.trim();
            let (body, copy) = match part.split_once('@') {
                Some((b, c)) => (
                    b,
                    c.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Malformed(format!("bad copy index in {part:?}")))?,
                ),
                None => (part, 0),
            };
            let (name, exp) = match body.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Malformed(format!("bad exponent in {part:?}")))?,
                ),
                None => (body.trim(), 1),
            };
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Malformed(format!("unknown generator {name:?}")))?;
            w.push(Syllable { copy, gen, exp });
        }
        Ok(w)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[], true))
    }
}

/// Homomorphism between free products of equal-rank copies, given by the
/// image of each generator `(copy, gen)` at index `copy * rank + gen`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeHom {
    pub src_copies: usize,
    pub src_rank: usize,
    pub dst_copies: usize,
    pub dst_rank: usize,
    images: Vec<FreeWord>,
}

impl FreeHom {
    pub fn new(
        src_copies: usize,
        src_rank: usize,
        dst_copies: usize,
        dst_rank: usize,
        images: Vec<FreeWord>,
    ) -> Result<Self> {
        if images.len() != src_copies * src_rank {
            return Err(Error::RankMismatch(format!(
                "{} images for {} generators",
                images.len(),
                src_copies * src_rank
            )));
        }
        for w in &images {
            w.check_alphabet(dst_copies, dst_rank)?;
        }
        Ok(FreeHom {
            src_copies,
            src_rank,
            dst_copies,
            dst_rank,
            images,
        })
    }

    pub fn identity(copies: usize, rank: usize) -> Self {
        let images = (0..copies)
            .flat_map(|c| (0..rank).map(move |g| FreeWord::gen(c, g)))
            .collect();
        FreeHom {
            src_copies: copies,
            src_rank: rank,
            dst_copies: copies,
            dst_rank: rank,
            images,
        }
    }

    pub fn image(&self, copy: usize, gen: usize) -> &FreeWord {
        &self.images[copy * self.src_rank + gen]
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::empty();
        for s in w.syllables() {
            out = out.mul(&self.image(s.copy, s.gen).pow(s.exp));
        }
        out
    }

    /// `then ∘ self`
    pub fn then(&self, then: &FreeHom) -> Result<FreeHom> {
        if self.dst_copies != then.src_copies || self.dst_rank != then.src_rank {
            return Err(Error::RankMismatch("composition of incompatible homomorphisms".into()));
        }
        Ok(FreeHom {
            src_copies: self.src_copies,
            src_rank: self.src_rank,
            dst_copies: then.dst_copies,
            dst_rank: then.dst_rank,
            images: self.images.iter().map(|w| then.apply(w)).collect(),
        })
    }

    /// The map `(g_0, …, g_n)` out of a free product: copy `t` goes through `maps[t]`.
    /// Each `maps[t]` must have a single source copy.
    pub fn copair(maps: &[FreeHom]) -> Result<FreeHom> {
        let first = maps
            .first()
            .ok_or_else(|| Error::RankMismatch("copairing of no maps".into()))?;
        let (rank, dc, dr) = (first.src_rank, first.dst_copies, first.dst_rank);
        let mut images = Vec::new();
        for m in maps {
            if m.src_copies != 1 || m.src_rank != rank || m.dst_copies != dc || m.dst_rank != dr {
                return Err(Error::RankMismatch("copairing of incompatible maps".into()));
            }
            images.extend(m.images.iter().cloned());
        }
        FreeHom::new(maps.len(), rank, dc, dr, images)
    }

    /// `f ⊔ g ⊔ …`: copy `t` is mapped by `maps[t]` into copy `t` of the target.
    pub fn coproduct(maps: &[&FreeHom]) -> Result<FreeHom> {
        let n = maps.len();
        let mut images = Vec::new();
        let (rank, dr) = match maps.first() {
            Some(m) => (m.src_rank, m.dst_rank),
            None => return Err(Error::RankMismatch("coproduct of no maps".into())),
        };
        for (t, m) in maps.iter().enumerate() {
            if m.src_copies != 1 || m.dst_copies != 1 || m.src_rank != rank || m.dst_rank != dr {
                return Err(Error::RankMismatch("coproduct of incompatible maps".into()));
            }
            for w in &m.images {
                images.push(FreeWord::from_syllables(
                    w.syllables().iter().map(|s| Syllable { copy: t, ..*s }),
                ));
            }
        }
        FreeHom::new(n, rank, n, dr, images)
    }

    /// Canonical inclusion of the single copy as copy `j` of `copies`.
    pub fn inclusion(j: usize, copies: usize, rank: usize) -> Result<FreeHom> {
        if j >= copies {
            return Err(Error::IndexOutOfRange(format!("inclusion {j} into {copies} copies")));
        }
        Ok(Self::copy_map(1, copies, rank, |_| j))
    }

    fn copy_map(src: usize, dst: usize, rank: usize, f: impl Fn(usize) -> usize) -> FreeHom {
        let images = (0..src)
            .flat_map(|c| {
                let t = f(c);
                (0..rank).map(move |g| FreeWord::gen(t, g))
            })
            .collect();
        FreeHom {
            src_copies: src,
            src_rank: rank,
            dst_copies: dst,
            dst_rank: rank,
            images,
        }
    }
}

/// `d^j : F^{*(n+1)} → F^{*(n+2)}`, skipping copy `j` of the target.
pub fn coface(n: usize, j: usize, rank: usize) -> Result<FreeHom> {
    if j > n + 1 {
        return Err(Error::IndexOutOfRange(format!("coface d^{j} at level {n}")));
    }
    if cfg!(feature = "inject-fault") && n >= 1 && j == n + 1 {
        return Ok(FreeHom::copy_map(n + 1, n + 2, rank, |t| match t {
            0 => 1,
            1 => 0,
            t => t,
        }));
    }
    Ok(FreeHom::copy_map(n + 1, n + 2, rank, |t| if t < j { t } else { t + 1 }))
}

/// `s^j : F^{*(n+2)} → F^{*(n+1)}`, merging copies `j` and `j+1`.
pub fn codegeneracy(n: usize, j: usize, rank: usize) -> Result<FreeHom> {
    if j > n {
        return Err(Error::IndexOutOfRange(format!("codegeneracy s^{j} at level {n}")));
    }
    Ok(FreeHom::copy_map(n + 2, n + 1, rank, |t| if t <= j { t } else { t - 1 }))
}

/// The maps `k^0..k^n : F^{*(n+2)} → F'^{*(n+1)}` with `k^i = s^i α^i`, where
/// `α^i` applies `f` on copies `0..=i` and `g` on the remaining ones.
pub fn homotopy_maps(f: &FreeHom, g: &FreeHom, n: usize) -> Result<Vec<FreeHom>> {
    if f.src_copies != 1 || g.src_copies != 1 || f.dst_copies != 1 || g.dst_copies != 1 {
        return Err(Error::RankMismatch("homotopy needs single-copy maps".into()));
    }
    if f.src_rank != g.src_rank || f.dst_rank != g.dst_rank {
        return Err(Error::RankMismatch("f and g have different ranks".into()));
    }
    (0..=n)
        .map(|i| {
            let parts: Vec<&FreeHom> = (0..n + 2).map(|t| if t <= i { f } else { g }).collect();
            FreeHom::coproduct(&parts)?.then(&codegeneracy(n, i, f.dst_rank)?)
        })
        .collect()
}

/// `B(h)^n = h ⊔ … ⊔ h` on `n + 1` copies.
pub fn standard_map(h: &FreeHom, n: usize) -> Result<FreeHom> {
    FreeHom::coproduct(&vec![h; n + 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t: &[(usize, usize, i64)]) -> FreeWord {
        FreeWord::from_triples(t)
    }

    #[test]
    fn reduction() {
        let x = FreeWord::gen(0, 0);
        let y = FreeWord::gen(0, 1);
        assert!(x.mul(&x.inv()).is_empty());
        assert_eq!(x.mul(&y).mul(&y.inv().mul(&x)), x.pow(2));
        let raw = w(&[(0, 0, 1), (0, 1, 1), (0, 1, -1), (0, 0, -1), (0, 2, 1)]);
        assert_eq!(raw, FreeWord::gen(0, 2));
        assert_eq!(raw.reduce(), raw);
    }

    #[test]
    fn coface_examples() {
        assert_eq!(coface(0, 0, 1).unwrap().image(0, 0), &FreeWord::gen(1, 0));
        assert_eq!(coface(0, 1, 1).unwrap().image(0, 0), &FreeWord::gen(0, 0));
        let d = coface(1, 1, 1).unwrap();
        assert_eq!(d.image(0, 0), &FreeWord::gen(0, 0));
        assert_eq!(d.image(1, 0), &FreeWord::gen(2, 0));
        assert!(coface(1, 3, 1).is_err());
    }

    #[test]
    fn codegeneracy_examples() {
        let s = codegeneracy(0, 0, 1).unwrap();
        assert_eq!(s.image(1, 0), &FreeWord::gen(0, 0));
        let s = codegeneracy(1, 0, 1).unwrap();
        let copies: Vec<usize> = (0..3).map(|t| s.image(t, 0).syllables()[0].copy).collect();
        assert_eq!(copies, vec![0, 0, 1]);
        let s = codegeneracy(1, 1, 1).unwrap();
        let copies: Vec<usize> = (0..3).map(|t| s.image(t, 0).syllables()[0].copy).collect();
        assert_eq!(copies, vec![0, 1, 1]);
    }

    #[test]
    fn homotopy_with_identity_is_fold() {
        let id = FreeHom::identity(1, 2);
        let k = homotopy_maps(&id, &id, 0).unwrap();
        assert_eq!(k[0], codegeneracy(0, 0, 2).unwrap());
    }

    #[test]
    fn render_round_trip() {
        let names = vec!["x".to_string(), "y".to_string()];
        let v = w(&[(0, 0, 2), (1, 1, -1), (2, 0, 1)]);
        let s = v.render(&names, true);
        assert_eq!(s, "x^2@0*y^-1@1*x@2");
        assert_eq!(FreeWord::parse(&s, &names).unwrap(), v);
    }
}
