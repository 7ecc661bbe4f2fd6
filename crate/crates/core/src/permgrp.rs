//! Finite groups given by permutations, and the Schreier machinery for the
//! relation subgroup of each level of the standard complex.
//!
//! Permutations act on the right, so the product `g * h` applies `g` first.

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegrp::{FreeHom, FreeWord, Syllable};

pub const DEFAULT_ELEMENT_CAP: usize = 5000;

/// On-disk group description; images are one-line permutations of `1..=degree`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub generators: Vec<String>,
    pub images: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<String>>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGroup(format!("group spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}

/// Group specs bundled with the crate, addressable by file stem.
pub const BUILTIN_GROUPS: &[(&str, &str)] = &[
    ("trivial", include_str!("../data/groups/trivial.json")),
    ("z2", include_str!("../data/groups/z2.json")),
    ("z3", include_str!("../data/groups/z3.json")),
    ("z4", include_str!("../data/groups/z4.json")),
    ("z2xz2", include_str!("../data/groups/z2xz2.json")),
    ("s3", include_str!("../data/groups/s3.json")),
    ("z2_rank2", include_str!("../data/groups/z2_rank2.json")),
];

pub fn builtin_group(name: &str, cap: usize) -> Option<Result<GroupData>> {
    let key = name.trim_end_matches(".json").to_ascii_lowercase();
    BUILTIN_GROUPS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| GroupData::from_spec(&GroupSpec::from_json(text)?, cap))
}

/// A group from a spec file path, or a bundled group name such as `z4`.
pub fn resolve_group(arg: &str, cap: usize) -> Result<GroupData> {
    let path = Path::new(arg);
    if path.exists() {
        return GroupData::load(path, cap);
    }
    let stem = path.file_name().and_then(|s| s.to_str()).unwrap_or(arg);
    builtin_group(stem, cap).unwrap_or_else(|| {
        Err(Error::InvalidGroup(format!("no group file or bundled group named {arg:?}")))
    })
}

type Perm = Vec<u32>;

/// A finite permutation group with a fixed generating list.
#[derive(Clone, Debug)]
pub struct GroupData {
    name: String,
    gen_names: Vec<String>,
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Vec<u32>,
    inverse: Vec<usize>,
    gen_elems: Vec<usize>,
}

impl GroupData {
    pub fn from_spec(spec: &GroupSpec, cap: usize) -> Result<Self> {
        let g = Self::close(&spec.name, &spec.generators, &spec.images, cap)?;
        if let Some(o) = spec.order {
            if o != g.order() {
                return Err(Error::InvalidGroup(format!(
                    "declared order {o} but the generated group has {} elements",
                    g.order()
                )));
            }
        }
        for rel in spec.relators.iter().flatten() {
            let w = FreeWord::parse(rel, &spec.generators)
                .map_err(|e| Error::InvalidGroup(format!("relator {rel:?}: {e}")))?;
            if w.syllables().iter().any(|s| s.copy != 0) {
                return Err(Error::InvalidGroup(format!("relator {rel:?} uses copies")));
            }
            if g.eval_base(&w) != 0 {
                return Err(Error::InvalidGroup(format!("relator {rel:?} is not trivial")));
            }
        }
        Ok(g)
    }

    pub fn load(path: &Path, cap: usize) -> Result<Self> {
        Self::from_spec(&GroupSpec::load(path)?, cap)
    }

    /// BFS closure of the generated group, in generator order.
    pub fn close(name: &str, gen_names: &[String], images: &[Vec<usize>], cap: usize) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidGroup("at least one generator is required".into()));
        }
        if gen_names.len() != images.len() {
            return Err(Error::InvalidGroup(format!(
                "{} generator names for {} images",
                gen_names.len(),
                images.len()
            )));
        }
        let degree = images[0].len();
        let mut gens: Vec<Perm> = Vec::new();
        for img in images {
            if img.len() != degree {
                return Err(Error::InvalidGroup("images have different degrees".into()));
            }
            let mut seen = vec![false; degree];
            for &p in img {
                if p == 0 || p > degree || seen[p - 1] {
                    return Err(Error::InvalidGroup(format!("{img:?} is not a bijection")));
                }
                seen[p - 1] = true;
            }
            gens.push(img.iter().map(|&p| (p - 1) as u32).collect());
        }
        let id: Perm = (0..degree as u32).collect();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let p = compose(&elements[e], g);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded(format!(
                            "group closure exceeds {cap} elements"
                        )));
                    }
                    index.insert(p.clone(), elements.len());
                    elements.push(p);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let q = elements.len();
        let mut table = vec![0u32; q * q];
        for a in 0..q {
            for b in 0..q {
                table[a * q + b] = index[&compose(&elements[a], &elements[b])] as u32;
            }
        }
        let inverse = (0..q)
            .map(|a| (0..q).find(|&b| table[a * q + b] == 0).expect("inverse"))
            .collect();
        let gen_elems = gens.iter().map(|g| index[g]).collect();
        Ok(GroupData {
            name: name.to_string(),
            gen_names: gen_names.to_vec(),
            degree,
            elements,
            index,
            table,
            inverse,
            gen_elems,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.gen_elems.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn gen_element(&self, i: usize) -> usize {
        self.gen_elems[i]
    }

    /// One-line image of element `a` on `1..=degree`.
    pub fn permutation(&self, a: usize) -> Vec<usize> {
        self.elements[a].iter().map(|&p| p as usize + 1).collect()
    }

    pub fn element_of(&self, perm: &[usize]) -> Option<usize> {
        let p: Perm = perm.iter().map(|&x| (x as u32).wrapping_sub(1)).collect();
        self.index.get(&p).copied()
    }

    /// Value of a word over the base generators, ignoring copy indices.
    pub fn eval_base(&self, w: &FreeWord) -> usize {
        let mut g = 0;
        for s in w.letters() {
            let x = self.gen_elems[s.gen];
            g = self.mul(g, if s.exp > 0 { x } else { self.inv(x) });
        }
        g
    }

    /// Spot check of associativity on a deterministic sample of triples.
    pub fn check_associative(&self, samples: usize) -> bool {
        let q = self.order();
        (0..samples).all(|k| {
            let (a, b, c) = (k % q, (k * 7 + 3) % q, (k * 13 + 5) % q);
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        })
    }
}

fn compose(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&p| b[p as usize]).collect()
}

/// A letter `x^{±1}` of the free product, indexed as
/// `2 * (copy * rank + gen) + (exp < 0)`.
pub fn letter_index(rank: usize, s: &Syllable) -> usize {
    2 * (s.copy * rank + s.gen) + usize::from(s.exp < 0)
}

/// Level `p` of the standard complex: the free product of `p + 1` copies of the
/// base free group mapping onto `G`, with a Schreier transversal and the
/// induced free basis of the relation subgroup.
#[derive(Clone, Debug)]
pub struct LevelPresentation {
    level: usize,
    rank: usize,
    order: usize,
    /// `act[g * nletters + l]` is `g` times letter `l`.
    act: Vec<usize>,
    transversal: Vec<FreeWord>,
    schreier: Vec<FreeWord>,
    /// `gamma[g * ngens + i]`: Schreier generator for the edge `(g, x_i)`.
    gamma: Vec<Option<usize>>,
}

impl LevelPresentation {
    pub fn new(group: &GroupData, p: usize) -> Self {
        let rank = group.rank();
        let copies = p + 1;
        let ngens = copies * rank;
        let nletters = 2 * ngens;
        let q = group.order();
        let mut act = vec![0usize; q * nletters];
        for g in 0..q {
            for i in 0..ngens {
                let x = group.gen_element(i % rank);
                act[g * nletters + 2 * i] = group.mul(g, x);
                act[g * nletters + 2 * i + 1] = group.mul(g, group.inv(x));
            }
        }
        let letter = |l: usize| Syllable {
            copy: (l / 2) / rank,
            gen: (l / 2) % rank,
            exp: if l % 2 == 0 { 1 } else { -1 },
        };
        let mut transversal = vec![None; q];
        transversal[0] = Some(FreeWord::empty());
        let mut tree = vec![false; q * nletters];
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for l in 0..nletters {
                let h = act[g * nletters + l];
                if transversal[h].is_none() {
                    let w = transversal[g]
                        .as_ref()
                        .expect("visited")
                        .mul(&FreeWord::from_syllables([letter(l)]));
                    transversal[h] = Some(w);
                    tree[g * nletters + l] = true;
                    queue.push_back(h);
                }
            }
        }
        let transversal: Vec<FreeWord> = transversal
            .into_iter()
            .map(|w| w.expect("generators act transitively on G"))
            .collect();
        let mut schreier = Vec::new();
        let mut gamma = vec![None; q * ngens];
        for g in 0..q {
            for i in 0..ngens {
                let h = act[g * nletters + 2 * i];
                if tree[g * nletters + 2 * i] || tree[h * nletters + 2 * i + 1] {
                    continue;
                }
                let w = transversal[g]
                    .mul(&FreeWord::from_syllables([letter(2 * i)]))
                    .mul(&transversal[h].inv());
                gamma[g * ngens + i] = Some(schreier.len());
                schreier.push(w);
            }
        }
        LevelPresentation {
            level: p,
            rank,
            order: q,
            act,
            transversal,
            schreier,
            gamma,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn copies(&self) -> usize {
        self.level + 1
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn total_rank(&self) -> usize {
        self.copies() * self.rank
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn transversal(&self, g: usize) -> &FreeWord {
        &self.transversal[g]
    }

    pub fn schreier_gens(&self) -> &[FreeWord] {
        &self.schreier
    }

    pub fn num_schreier(&self) -> usize {
        self.schreier.len()
    }

    /// Element `g` acted on by a single letter.
    #[inline]
    pub fn step(&self, g: usize, s: &Syllable) -> usize {
        self.act[g * 2 * self.total_rank() + letter_index(self.rank, s)]
    }

    pub fn eval(&self, w: &FreeWord) -> usize {
        w.letters().fold(0, |g, s| self.step(g, &s))
    }

    /// Reidemeister–Schreier rewriting of a word of the relation subgroup as a
    /// freely reduced word in the Schreier generators, `(index, ±1)` per letter.
    pub fn rewrite_in_r(&self, w: &FreeWord) -> Result<Vec<(usize, i8)>> {
        self.rewrite_from(0, w, 0)
    }

    /// Rewrite starting from coset `start`, requiring to end at coset `end`.
    /// The result is the relation-subgroup element `s(start) · w · s(end)^{-1}`.
    pub fn rewrite_from(&self, start: usize, w: &FreeWord, end: usize) -> Result<Vec<(usize, i8)>> {
        let ngens = self.total_rank();
        let mut out: Vec<(usize, i8)> = Vec::new();
        let mut push = |x: (usize, i8)| {
            if let Some(&(j, e)) = out.last() {
                if j == x.0 && e == -x.1 {
                    out.pop();
                    return;
                }
            }
            out.push(x);
        };
        let mut g = start;
        for s in w.letters() {
            let i = s.copy * self.rank + s.gen;
            if s.copy >= self.copies() || s.gen >= self.rank {
                return Err(Error::AlphabetMismatch(format!(
                    "letter ({}, {}) outside level {}",
                    s.copy, s.gen, self.level
                )));
            }
            if s.exp > 0 {
                if let Some(k) = self.gamma[g * ngens + i] {
                    push((k, 1));
                }
                g = self.step(g, &s);
            } else {
                let h = self.step(g, &s);
                if let Some(k) = self.gamma[h * ngens + i] {
                    push((k, -1));
                }
                g = h;
            }
        }
        if g != end {
            return Err(Error::NotInRelationSubgroup(format!(
                "word ends at element {g}, expected {end}"
            )));
        }
        Ok(out)
    }

    /// Substitute Schreier generators back into a rewritten word.
    pub fn expand(&self, r: &[(usize, i8)]) -> FreeWord {
        r.iter().fold(FreeWord::empty(), |acc, &(k, e)| {
            let w = &self.schreier[k];
            acc.mul(&if e > 0 { w.clone() } else { w.inv() })
        })
    }

    /// Whether a homomorphism out of this level commutes with the projections to `G`.
    pub fn commutes(&self, h: &FreeHom, target: &LevelPresentation, group: &GroupData) -> bool {
        (0..self.copies()).all(|c| {
            (0..self.rank).all(|i| target.eval(h.image(c, i)) == group.gen_element(i))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_groups_load() {
        for (name, order) in [("trivial", 1), ("z2", 2), ("z3", 3), ("z4", 4), ("z2xz2", 4), ("s3", 6), ("z2_rank2", 2)] {
            let g = builtin_group(name, DEFAULT_ELEMENT_CAP).unwrap().unwrap();
            assert_eq!(g.order(), order, "{name}");
        }
        assert!(resolve_group("nonesuch", 10).is_err());
        assert!(resolve_group("groups/S3.json", 10).is_ok());
    }

    fn cyclic(n: usize) -> GroupData {
        let img: Vec<usize> = (2..=n).chain([1]).collect();
        GroupData::close("Z", &["x".into()], &[img], DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn closures() {
        assert_eq!(cyclic(4).order(), 4);
        let s3 = GroupData::close(
            "S3",
            &["x".into(), "y".into()],
            &[vec![2, 1, 3], vec![2, 3, 1]],
            DEFAULT_ELEMENT_CAP,
        )
        .unwrap();
        assert_eq!(s3.order(), 6);
        let xy = s3.mul(s3.gen_element(0), s3.gen_element(1));
        let yx = s3.mul(s3.gen_element(1), s3.gen_element(0));
        let yy = s3.mul(s3.gen_element(1), s3.gen_element(1));
        assert_eq!((xy, yx, yy), (3, 4, 5));
        let triv = GroupData::close("1", &["x".into()], &[vec![1]], 10).unwrap();
        assert_eq!(triv.order(), 1);
    }

    #[test]
    fn bad_specs() {
        assert!(GroupData::close("bad", &["x".into()], &[vec![1, 1]], 10).is_err());
        let big = GroupData::close("Z5", &["x".into()], &[vec![2, 3, 4, 5, 1]], 3);
        assert!(big.unwrap_err().is_cap());
    }

    #[test]
    fn z2_levels() {
        let g = cyclic(2);
        let l0 = LevelPresentation::new(&g, 0);
        assert_eq!(l0.schreier_gens(), &[FreeWord::from_triples(&[(0, 0, 2)])]);
        let l1 = LevelPresentation::new(&g, 1);
        let expect = vec![
            FreeWord::from_triples(&[(1, 0, 1), (0, 0, -1)]),
            FreeWord::from_triples(&[(0, 0, 2)]),
            FreeWord::from_triples(&[(0, 0, 1), (1, 0, 1)]),
        ];
        assert_eq!(l1.schreier_gens(), expect.as_slice());
    }

    #[test]
    fn z2_rewriting() {
        let l0 = LevelPresentation::new(&cyclic(2), 0);
        let x = FreeWord::gen(0, 0);
        assert_eq!(l0.rewrite_in_r(&x.pow(2)).unwrap(), vec![(0, 1)]);
        assert_eq!(l0.rewrite_in_r(&x.pow(4)).unwrap(), vec![(0, 1), (0, 1)]);
        assert!(l0.rewrite_in_r(&FreeWord::empty()).unwrap().is_empty());
        assert!(matches!(
            l0.rewrite_in_r(&x),
            Err(Error::NotInRelationSubgroup(_))
        ));
    }
}
