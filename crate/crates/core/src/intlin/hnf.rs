//! Integer lattices in canonical Hermite normal form.
//!
//! Vectors are sparse (`(column, value)` pairs sorted by column, no zeros).
//! Generators are fed one at a time into an [`Echelon`] builder which keeps a
//! row per pivot column; [`Echelon::finish`] then reduces every entry sitting
//! above a pivot into `[0, pivot)`. The resulting form is unique, so two
//! lattices are equal exactly when their row lists are equal.

use rayon::prelude::*;

use super::int::Int;

pub type SparseVec = Vec<(usize, Int)>;

pub fn sparse_from_dense(v: &[Int]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, dim: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + k*b`
pub fn sparse_add_mul(a: &SparseVec, k: &Int, b: &SparseVec) -> SparseVec {
    if k.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ci = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(a[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, k * &b[j].1));
            j += 1;
        } else {
            let mut x = a[i].1.clone();
            x.add_mul(k, &b[j].1);
            if !x.is_zero() {
                out.push((ci, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(a: &SparseVec, k: &Int) -> SparseVec {
    if k.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, x * k)).collect()
}

/// Incremental row-echelon builder over `Z`.
pub struct Echelon {
    dim: usize,
    rows: Vec<Option<SparseVec>>,
    work: Vec<Int>,
    rank: usize,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: vec![None; dim],
            work: vec![Int::ZERO; dim],
            rank: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn insert(&mut self, v: &SparseVec) {
        let Some(&(start, _)) = v.first() else {
            return;
        };
        for (i, x) in v {
            debug_assert!(*i < self.dim, "column out of range");
            self.work[*i] = x.clone();
        }
        self.absorb(start);
    }

    pub fn insert_dense(&mut self, v: &[Int]) {
        assert_eq!(v.len(), self.dim);
        let Some(start) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        self.work[start..].clone_from_slice(&v[start..]);
        self.absorb(start);
    }

    fn absorb(&mut self, mut c: usize) {
        let dim = self.dim;
        loop {
            while c < dim && self.work[c].is_zero() {
                c += 1;
            }
            if c == dim {
                return;
            }
            match self.rows[c].take() {
                None => {
                    let neg = self.work[c].is_negative();
                    let mut row = Vec::new();
                    for j in c..dim {
                        let x = std::mem::take(&mut self.work[j]);
                        if !x.is_zero() {
                            row.push((j, if neg { -x } else { x }));
                        }
                    }
                    self.rows[c] = Some(row);
                    self.rank += 1;
                    return;
                }
                Some(p) => {
                    let piv = p[0].1.clone();
                    let a = self.work[c].clone();
                    if piv.divides(&a) {
                        let q = -a.div_exact(&piv);
                        for (j, x) in &p {
                            self.work[*j].add_mul(&q, x);
                        }
                        self.rows[c] = Some(p);
                    } else {
                        let (g, s, t) = piv.extended_gcd(&a);
                        let ag = a.div_exact(&g);
                        let pg = -piv.div_exact(&g);
                        let mut pd = vec![Int::ZERO; dim - c];
                        for (j, x) in &p {
                            pd[*j - c] = x.clone();
                        }
                        let mut newp = Vec::new();
                        for j in c..dim {
                            let pj = &pd[j - c];
                            let wj = std::mem::take(&mut self.work[j]);
                            let mut np = pj * &s;
                            np.add_mul(&t, &wj);
                            let mut nw = pj * &ag;
                            nw.add_mul(&pg, &wj);
                            if !np.is_zero() {
                                newp.push((j, np));
                            }
                            self.work[j] = nw;
                        }
                        debug_assert!(self.work[c].is_zero());
                        self.rows[c] = Some(newp);
                    }
                }
            }
            c += 1;
        }
    }

    pub fn finish(self) -> Lattice {
        let dim = self.dim;
        let rows: Vec<SparseVec> = self.rows.into_iter().flatten().collect();
        Lattice::canonicalize(dim, rows)
    }
}

/// A sublattice of `Z^dim` stored in canonical Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<SparseVec>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            rows: (0..dim).map(|i| vec![(i, Int::ONE)]).collect(),
        }
    }

    pub fn from_sparse<'a, I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut e = Echelon::new(dim);
        for v in gens {
            e.insert(v);
        }
        e.finish()
    }

    pub fn from_dense<'a, I>(dim: usize, gens: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<Int>>,
    {
        let mut e = Echelon::new(dim);
        for v in gens {
            e.insert_dense(v);
        }
        e.finish()
    }

    /// Reduce entries above each pivot into `[0, pivot)`; input rows must be
    /// in echelon form with positive pivots and strictly increasing pivot columns.
    fn canonicalize(dim: usize, rows: Vec<SparseVec>) -> Self {
        let pivots: Vec<(usize, Int)> = rows.iter().map(|r| r[0].clone()).collect();
        let reduced: Vec<SparseVec> = (0..rows.len())
            .into_par_iter()
            .map(|j| {
                let needs = pivots[j + 1..].iter().any(|(pc, pv)| {
                    row_entry(&rows[j], *pc).is_some_and(|e| e.is_negative() || e >= *pv)
                });
                if !needs {
                    return rows[j].clone();
                }
                let mut w = dense_from_sparse(&rows[j], dim);
                for (i, (pc, pv)) in pivots.iter().enumerate().skip(j + 1) {
                    let e = &w[*pc];
                    if e.is_zero() || (!e.is_negative() && e < pv) {
                        continue;
                    }
                    let q = -e.div_floor(pv);
                    for (c, x) in &rows[i] {
                        w[*c].add_mul(&q, x);
                    }
                }
                sparse_from_dense(&w)
            })
            .collect();
        Lattice { dim, rows: reduced }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot(&self, i: usize) -> (usize, &Int) {
        let (c, v) = &self.rows[i][0];
        (*c, v)
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    /// Reduce `w` in place to its canonical representative modulo the lattice.
    pub fn reduce_dense(&self, w: &mut [Int]) {
        for row in &self.rows {
            let (pc, pv) = &row[0];
            let e = &w[*pc];
            if e.is_zero() || (!e.is_negative() && e < pv) {
                continue;
            }
            let q = -e.div_floor(pv);
            for (c, x) in row {
                w[*c].add_mul(&q, x);
            }
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut w = dense_from_sparse(v, self.dim);
        self.reduce_dense(&mut w);
        sparse_from_dense(&w)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_dense(&self, v: &[Int]) -> bool {
        let mut w = v.to_vec();
        self.reduce_dense(&mut w);
        w.iter().all(Int::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        assert_eq!(self.dim, other.dim);
        other.rows.par_iter().all(|r| self.contains(r))
    }

    /// Coordinates of `v` in the row basis, or `None` when `v` is not in the lattice.
    pub fn coords(&self, v: &SparseVec) -> Option<Vec<Int>> {
        let mut w = dense_from_sparse(v, self.dim);
        let mut out = vec![Int::ZERO; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let (pc, pv) = &row[0];
            let e = &w[*pc];
            if e.is_zero() {
                continue;
            }
            if !pv.divides(e) {
                return None;
            }
            let q = e.div_exact(pv);
            let nq = -&q;
            for (c, x) in row {
                w[*c].add_mul(&nq, x);
            }
            out[i] = q;
        }
        if w.iter().all(Int::is_zero) {
            Some(out)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if self.contains_lattice(other) {
            return self.clone();
        }
        let mut e = Echelon::new(self.dim);
        for r in self.rows.iter().chain(other.rows.iter()) {
            e.insert(r);
        }
        e.finish()
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        if self.contains_lattice(other) {
            return other.clone();
        }
        if other.contains_lattice(self) {
            return self.clone();
        }
        let mut e = Echelon::new(2 * n);
        for a in &self.rows {
            let mut v = a.clone();
            v.extend(a.iter().map(|(c, x)| (c + n, x.clone())));
            e.insert(&v);
        }
        for b in &other.rows {
            e.insert(b);
        }
        let gens: Vec<SparseVec> = e
            .rows
            .into_iter()
            .skip(n)
            .flatten()
            .map(|r| r.into_iter().map(|(c, x)| (c - n, x)).collect())
            .collect();
        Lattice::from_sparse(n, &gens)
    }

    /// Lattice spanned by the images of the rows under a linear map.
    pub fn map<F>(&self, dim: usize, f: F) -> Lattice
    where
        F: Fn(&SparseVec) -> SparseVec + Sync + Send,
    {
        let imgs: Vec<SparseVec> = self.rows.par_iter().map(f).collect();
        Lattice::from_sparse(dim, &imgs)
    }

    /// Product of the pivots, i.e. the index in the saturation when full rank.
    pub fn pivot_product(&self) -> Int {
        self.rows.iter().map(|r| r[0].1.clone()).product()
    }
}

fn row_entry(row: &SparseVec, col: usize) -> Option<Int> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|i| row[i].1.clone())
}
