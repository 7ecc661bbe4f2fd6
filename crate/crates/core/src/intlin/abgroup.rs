//! Finitely presented abelian groups, maps between them, and homology.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::hnf::{dense_from_sparse, sparse_add_mul, sparse_from_dense, Echelon, Lattice, SparseVec};
use super::int::Int;
use super::snf::{smith_diagonal, Matrix};

/// Isomorphism type of a finitely generated abelian group: `Z^rank + Z/d1 + ...`
/// with `d1 | d2 | ...` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl Invariants {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Invariants {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Normalize an arbitrary list of cyclic orders (0 meaning `Z`).
    pub fn from_cyclic(orders: &[Int]) -> Self {
        let n = orders.len();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            m[(i, i)] = d.abs();
        }
        let diag = smith_diagonal(&m);
        let rank = n - diag.len();
        Invariants {
            rank,
            torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().cloned().product()
    }

    /// Cyclic pieces with `Z` encoded as 0.
    pub fn cyclic(&self) -> Vec<Int> {
        let mut v = vec![Int::ZERO; self.rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn direct_sum(&self, other: &Invariants) -> Invariants {
        let mut c = self.cyclic();
        c.extend(other.cyclic());
        Invariants::from_cyclic(&c)
    }

    pub fn tensor(&self, other: &Invariants) -> Invariants {
        let mut out = Vec::new();
        for a in self.cyclic() {
            for b in other.cyclic() {
                out.push(a.gcd(&b));
            }
        }
        Invariants::from_cyclic(&out)
    }

    pub fn tor(&self, other: &Invariants) -> Invariants {
        let mut out = Vec::new();
        for a in &self.torsion {
            for b in &other.torsion {
                out.push(a.gcd(b));
            }
        }
        Invariants::from_cyclic(&out)
    }

    /// Parse the report notation, e.g. `"Z^2 + Z/2 + Z/6"` or `"0"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Invariants::zero());
        }
        let mut orders = Vec::new();
        for part in s.split('+') {
            let p = part.trim();
            if let Some(d) = p.strip_prefix("Z/") {
                let d: i64 = d
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad cyclic order in {p:?}")))?;
                orders.push(Int::from(d));
            } else if let Some(e) = p.strip_prefix("Z^") {
                let e: usize = e
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad exponent in {p:?}")))?;
                orders.extend(std::iter::repeat(Int::ZERO).take(e));
            } else if p == "Z" {
                orders.push(Int::ZERO);
            } else {
                return Err(Error::Malformed(format!("unrecognized summand {p:?}")));
            }
        }
        Ok(Invariants::from_cyclic(&orders))
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^ngens / rels`.
#[derive(Clone, Debug)]
pub struct FinPresAb {
    ngens: usize,
    rels: Lattice,
    inv: OnceLock<Invariants>,
}

impl PartialEq for FinPresAb {
    /// Equality of presentations, not isomorphism.
    fn eq(&self, other: &Self) -> bool {
        self.ngens == other.ngens && self.rels == other.rels
    }
}

impl Eq for FinPresAb {}

impl FinPresAb {
    pub fn new(ngens: usize, rels: Lattice) -> Self {
        assert_eq!(rels.dim(), ngens, "relation lattice dimension");
        FinPresAb {
            ngens,
            rels,
            inv: OnceLock::new(),
        }
    }

    pub fn free(ngens: usize) -> Self {
        FinPresAb::new(ngens, Lattice::zero(ngens))
    }

    pub fn zero() -> Self {
        FinPresAb::free(0)
    }

    pub fn from_relations(ngens: usize, rels: &[SparseVec]) -> Self {
        FinPresAb::new(ngens, Lattice::from_sparse(ngens, rels))
    }

    pub fn from_invariants(inv: &Invariants) -> Self {
        let c = inv.cyclic();
        let rels: Vec<SparseVec> = c
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| vec![(i, d.clone())])
            .collect();
        FinPresAb::from_relations(c.len(), &rels)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &Lattice {
        &self.rels
    }

    pub fn invariants(&self) -> &Invariants {
        self.inv.get_or_init(|| {
            let unit: Vec<bool> = {
                let mut u = vec![false; self.ngens];
                for r in self.rels.rows() {
                    if r[0].1.is_one() {
                        u[r[0].0] = true;
                    }
                }
                u
            };
            let kept: Vec<usize> = (0..self.ngens).filter(|&c| !unit[c]).collect();
            let mut pos = vec![usize::MAX; self.ngens];
            for (k, &c) in kept.iter().enumerate() {
                pos[c] = k;
            }
            let rows: Vec<Vec<Int>> = self
                .rels
                .rows()
                .iter()
                .filter(|r| !r[0].1.is_one())
                .map(|r| {
                    let mut v = vec![Int::ZERO; kept.len()];
                    for (c, x) in r {
                        debug_assert!(pos[*c] != usize::MAX);
                        v[pos[*c]] = x.clone();
                    }
                    v
                })
                .collect();
            let nrel = rows.len();
            let diag = smith_diagonal(&Matrix::from_rows(rows, kept.len()));
            debug_assert_eq!(diag.len(), nrel);
            Invariants {
                rank: kept.len() - nrel,
                torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.invariants().is_zero()
    }

    pub fn is_trivial_element(&self, v: &SparseVec) -> bool {
        self.rels.contains(v)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.rels.reduce(v)
    }

    pub fn direct_sum(&self, other: &FinPresAb) -> FinPresAb {
        let n = self.ngens;
        let mut rels: Vec<SparseVec> = self.rels.rows().to_vec();
        rels.extend(
            other
                .rels
                .rows()
                .iter()
                .map(|r| r.iter().map(|(c, x)| (c + n, x.clone())).collect()),
        );
        FinPresAb::from_relations(n + other.ngens, &rels)
    }

    /// Quotient by the subgroup generated by `extra`.
    pub fn quotient(&self, extra: &[SparseVec]) -> FinPresAb {
        let mut e = Echelon::new(self.ngens);
        for r in self.rels.rows().iter().chain(extra.iter()) {
            e.insert(r);
        }
        FinPresAb::new(self.ngens, e.finish())
    }
}

impl fmt::Display for FinPresAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariants())
    }
}

/// Homomorphism of presented groups given by the image of each generator.
#[derive(Clone, Debug)]
pub struct AbMap {
    src: FinPresAb,
    dst: FinPresAb,
    images: Vec<SparseVec>,
}

impl AbMap {
    pub fn new(src: FinPresAb, dst: FinPresAb, images: Vec<SparseVec>) -> Result<Self> {
        if images.len() != src.ngens {
            return Err(Error::RankMismatch(format!(
                "{} images for {} generators",
                images.len(),
                src.ngens
            )));
        }
        let m = AbMap { src, dst, images };
        for r in m.src.rels.rows() {
            if !m.dst.rels.contains(&m.apply(r)) {
                return Err(Error::Precondition(
                    "map does not send relations to relations".into(),
                ));
            }
        }
        Ok(m)
    }

    pub fn zero(src: FinPresAb, dst: FinPresAb) -> Self {
        let n = src.ngens;
        AbMap {
            src,
            dst,
            images: vec![Vec::new(); n],
        }
    }

    pub fn identity(a: FinPresAb) -> Self {
        let images = (0..a.ngens).map(|i| vec![(i, Int::ONE)]).collect();
        AbMap {
            src: a.clone(),
            dst: a,
            images,
        }
    }

    pub fn src(&self) -> &FinPresAb {
        &self.src
    }

    pub fn dst(&self) -> &FinPresAb {
        &self.dst
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![Int::ZERO; self.dst.ngens];
        for (i, x) in v {
            for (j, y) in &self.images[*i] {
                acc[*j].add_mul(x, y);
            }
        }
        sparse_from_dense(&acc)
    }

    pub fn compose(&self, then: &AbMap) -> Result<AbMap> {
        if self.dst != then.src {
            return Err(Error::RankMismatch("composition of incompatible maps".into()));
        }
        let images = self.images.iter().map(|v| then.apply(v)).collect();
        Ok(AbMap {
            src: self.src.clone(),
            dst: then.dst.clone(),
            images,
        })
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: &Int, other: &AbMap) -> Result<AbMap> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::RankMismatch("sum of incompatible maps".into()));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| sparse_add_mul(a, k, b))
            .collect();
        Ok(AbMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            images,
        })
    }

    /// Zero as a map of presented groups.
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| self.dst.rels.contains(v))
    }

    /// Equality as maps of presented groups.
    pub fn same_map(&self, other: &AbMap) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && self
                .images
                .iter()
                .zip(&other.images)
                .all(|(a, b)| self.dst.rels.contains(&sparse_add_mul(a, &Int::from(-1), b)))
    }

    /// Kernel as a lattice of generator coordinates in `Z^{src.ngens}`.
    pub fn kernel_lattice(&self) -> Lattice {
        let (nb, nc) = (self.src.ngens, self.dst.ngens);
        let mut e = Echelon::new(nc + nb);
        for i in 0..nb {
            let mut v = self.images[i].clone();
            v.push((nc + i, Int::ONE));
            e.insert(&v);
        }
        for r in self.dst.rels.rows() {
            e.insert(r);
        }
        let lat = e.finish();
        let gens: Vec<SparseVec> = lat
            .rows()
            .iter()
            .filter(|r| r[0].0 >= nc)
            .map(|r| r.iter().map(|(c, x)| (c - nc, x.clone())).collect())
            .collect();
        Lattice::from_sparse(nb, &gens)
    }

    /// Image as a lattice of generator coordinates in `Z^{dst.ngens}` (relations included).
    pub fn image_lattice(&self) -> Lattice {
        let mut e = Echelon::new(self.dst.ngens);
        for v in self.images.iter().chain(self.dst.rels.rows()) {
            e.insert(v);
        }
        e.finish()
    }

    pub fn cokernel(&self) -> FinPresAb {
        FinPresAb::new(self.dst.ngens, self.image_lattice())
    }

    pub fn kernel(&self) -> SubQuotient {
        SubQuotient::new(&self.kernel_lattice(), self.src.relations())
            .expect("relations lie in the kernel")
    }
}

/// The homology `ker(g) / im(f)` at the middle of `A --f--> B --g--> C`.
pub fn homology_at(f: &AbMap, g: &AbMap) -> Result<FinPresAb> {
    Ok(homology_subquotient(f, g)?.group().clone())
}

/// As [`homology_at`], keeping the subquotient so classes can be lifted.
pub fn homology_subquotient(f: &AbMap, g: &AbMap) -> Result<SubQuotient> {
    if f.dst != g.src {
        return Err(Error::RankMismatch("maps are not composable".into()));
    }
    for v in &f.images {
        if !g.dst.rels.contains(&g.apply(v)) {
            return Err(Error::NotAComplex("g . f is nonzero".into()));
        }
    }
    SubQuotient::new(&g.kernel_lattice(), &f.image_lattice())
}

/// The quotient `L/M` of two lattices in a common ambient `Z^dim`, presented on
/// the columns of `L`'s basis that survive reduction modulo `M`.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    outer: Lattice,
    inner: Lattice,
    kept: Vec<usize>,
    group: FinPresAb,
}

impl SubQuotient {
    pub fn new(outer: &Lattice, inner: &Lattice) -> Result<Self> {
        let coords: Vec<SparseVec> = inner
            .rows()
            .iter()
            .map(|r| {
                outer
                    .coords(r)
                    .map(|c| sparse_from_dense(&c))
                    .ok_or_else(|| Error::Precondition("inner lattice not contained in outer".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Self::from_coords(outer.clone(), Lattice::from_sparse(outer.rank(), &coords)))
    }

    /// `inner` already expressed in the coordinates of `outer`'s basis.
    pub fn from_coords(outer: Lattice, inner: Lattice) -> Self {
        let n = outer.rank();
        let mut unit = vec![false; n];
        for r in inner.rows() {
            if r[0].1.is_one() {
                unit[r[0].0] = true;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&c| !unit[c]).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &c) in kept.iter().enumerate() {
            pos[c] = k;
        }
        let rels: Vec<SparseVec> = inner
            .rows()
            .iter()
            .filter(|r| !r[0].1.is_one())
            .map(|r| r.iter().map(|(c, x)| (pos[*c], x.clone())).collect())
            .collect();
        let group = FinPresAb::from_relations(kept.len(), &rels);
        SubQuotient {
            outer,
            inner,
            kept,
            group,
        }
    }

    pub fn group(&self) -> &FinPresAb {
        &self.group
    }

    pub fn outer(&self) -> &Lattice {
        &self.outer
    }

    pub fn inner_coords(&self) -> &Lattice {
        &self.inner
    }

    pub fn ngens(&self) -> usize {
        self.kept.len()
    }

    /// Ambient vector representing generator `k`.
    pub fn lift(&self, k: usize) -> &SparseVec {
        &self.outer.rows()[self.kept[k]]
    }

    /// Class of an ambient vector of the outer lattice, in generator coordinates.
    pub fn project(&self, v: &SparseVec) -> Result<SparseVec> {
        let c = self
            .outer
            .coords(v)
            .ok_or_else(|| Error::Precondition("vector outside the outer lattice".into()))?;
        Ok(self.project_coords(c))
    }

    /// Class of a vector given in outer-basis coordinates.
    pub fn project_coords(&self, mut c: Vec<Int>) -> SparseVec {
        self.inner.reduce_dense(&mut c);
        self.kept
            .iter()
            .enumerate()
            .filter(|(_, &col)| !c[col].is_zero())
            .map(|(k, &col)| (k, c[col].clone()))
            .collect()
    }

    /// Ambient vector for a class given in generator coordinates.
    pub fn lift_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![Int::ZERO; self.outer.dim()];
        for (k, x) in v {
            for (c, y) in self.lift(*k) {
                acc[*c].add_mul(x, y);
            }
        }
        sparse_from_dense(&acc)
    }
}

/// Bounded cochain complex `C^0 -> C^1 -> ...`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub groups: Vec<FinPresAb>,
    pub diffs: Vec<AbMap>,
}

impl CochainComplex {
    pub fn new(groups: Vec<FinPresAb>, diffs: Vec<AbMap>) -> Result<Self> {
        if diffs.len() + 1 != groups.len() && !(groups.is_empty() && diffs.is_empty()) {
            return Err(Error::RankMismatch("differential count".into()));
        }
        for w in diffs.windows(2) {
            if !w[0].compose(&w[1])?.is_zero() {
                return Err(Error::NotAComplex("d . d is nonzero".into()));
            }
        }
        Ok(CochainComplex { groups, diffs })
    }

    /// `H^n`; the last degree is treated as having a zero outgoing map.
    pub fn cohomology(&self, n: usize) -> Result<FinPresAb> {
        let incoming = if n == 0 {
            AbMap::zero(FinPresAb::zero(), self.groups[0].clone())
        } else {
            self.diffs[n - 1].clone()
        };
        let outgoing = if n < self.diffs.len() {
            self.diffs[n].clone()
        } else {
            AbMap::zero(self.groups[n].clone(), FinPresAb::zero())
        };
        homology_at(&incoming, &outgoing)
    }
}

/// Dense image of a sparse vector under an integer matrix given by rows of generator images.
pub fn apply_images(images: &[SparseVec], v: &SparseVec, dim: usize) -> SparseVec {
    let mut acc = vec![Int::ZERO; dim];
    for (i, x) in v {
        for (j, y) in &images[*i] {
            acc[*j].add_mul(x, y);
        }
    }
    sparse_from_dense(&acc)
}

pub fn unit(i: usize) -> SparseVec {
    vec![(i, Int::ONE)]
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vec<Int> {
    dense_from_sparse(v, dim)
}
