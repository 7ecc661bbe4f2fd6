//! Exact arithmetic in `Z[F]/r^N` for a level presentation `F ↠ G`.
//!
//! With `R = ker(F ↠ G)` free on the Schreier generators `ρ_1..ρ_m` and
//! `X_j = ρ_j − 1`, the quotient `Z[F]/r^N` is free abelian on the words
//! `s(g)·X_J` with `g ∈ G`, `s(g)` the transversal representative and `J` a
//! tuple of length `< N`. Elements are sparse vectors in these coordinates.
//!
//! Products use `s(g)a · s(h)b = s(gh) · C(g,h) · ψ_h(a) · b`, where
//! `ψ_h(a) = s(h)^{-1} a s(h)` and `C(g,h)` expands `s(gh)^{-1}s(g)s(h) ∈ R`.
//! All conjugation and cocycle data is tabulated when the ambient is built,
//! so an ambient is immutable and freely shared between threads.
//!
//! Column order is (degree, group element, tuple) ascending, except that the
//! unit `s(e)` is placed last; the augmentation ideal then has the identity
//! matrix on every other column.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frcode::{FrCode, Intersection, Letter, Monomial};
use crate::freegrp::{FreeHom, FreeWord};
use crate::intlin::abgroup::{AbMap, SubQuotient};
use crate::intlin::hnf::{sparse_from_dense, Echelon, Lattice, SparseVec};
use crate::intlin::Int;
use crate::permgrp::{GroupData, LevelPresentation};

/// Element of the truncated free algebra `Z<X_1..X_m>/(deg ≥ N)`, as sorted
/// `(monomial index, coefficient)` pairs.
pub type AElem = Vec<(usize, Int)>;

/// Monomial indexing for the truncated free algebra.
#[derive(Clone, Debug)]
pub struct Magnus {
    m: usize,
    n: usize,
    offset: Vec<usize>,
    pow: Vec<usize>,
    deg: Vec<u8>,
}

impl Magnus {
    pub fn new(m: usize, n: usize) -> Self {
        let mut pow = vec![1usize];
        for k in 1..=n {
            pow.push(pow[k - 1] * m);
        }
        let mut offset = vec![0usize];
        for k in 0..n {
            offset.push(offset[k] + pow[k]);
        }
        let mut deg = Vec::with_capacity(offset[n]);
        for k in 0..n {
            deg.extend(std::iter::repeat(k as u8).take(pow[k]));
        }
        Magnus {
            m,
            n,
            offset,
            pow,
            deg,
        }
    }

    pub fn num_monomials(&self) -> usize {
        self.offset[self.n]
    }

    pub fn degree(&self, mono: usize) -> usize {
        self.deg[mono] as usize
    }

    pub fn index(&self, letters: &[usize]) -> Option<usize> {
        if letters.len() >= self.n {
            return None;
        }
        let local = letters.iter().fold(0usize, |a, &j| a * self.m + j);
        Some(self.offset[letters.len()] + local)
    }

    pub fn letters(&self, mono: usize) -> Vec<usize> {
        let k = self.degree(mono);
        let mut local = mono - self.offset[k];
        let mut out = vec![0; k];
        for i in (0..k).rev() {
            out[i] = local % self.m;
            local /= self.m;
        }
        out
    }

    #[inline]
    pub fn concat(&self, a: usize, b: usize) -> Option<usize> {
        let (da, db) = (self.degree(a), self.degree(b));
        if da + db >= self.n {
            return None;
        }
        let (la, lb) = (a - self.offset[da], b - self.offset[db]);
        Some(self.offset[da + db] + la * self.pow[db] + lb)
    }

    pub fn one(&self) -> AElem {
        if self.n == 0 {
            Vec::new()
        } else {
            vec![(0, Int::ONE)]
        }
    }

    pub fn x(&self, j: usize) -> AElem {
        if self.n <= 1 {
            Vec::new()
        } else {
            vec![(self.offset[1] + j, Int::ONE)]
        }
    }

    pub fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let mut acc: HashMap<usize, Int> = HashMap::new();
        for (u, x) in a {
            for (v, y) in b {
                if let Some(w) = self.concat(*u, *v) {
                    acc.entry(w).or_default().add_mul(x, y);
                }
            }
        }
        finish_map(acc)
    }

    pub fn add(&self, a: &AElem, k: &Int, b: &AElem) -> AElem {
        crate::intlin::hnf::sparse_add_mul(a, k, b)
    }

    /// Expansion of a word `ρ_{j1}^{±1}⋯` with `ρ = 1 + X`, `ρ^{-1} = Σ (−X)^k`.
    pub fn expand(&self, word: &[(usize, i8)]) -> AElem {
        let mut acc = self.one();
        for &(j, e) in word {
            let factor = if e > 0 {
                self.add(&self.one(), &Int::ONE, &self.x(j))
            } else {
                self.inverse_factor(j)
            };
            acc = self.mul(&acc, &factor);
        }
        acc
    }

    fn inverse_factor(&self, j: usize) -> AElem {
        let mut out = Vec::new();
        let mut mono = 0usize;
        for k in 0..self.n {
            out.push((mono, Int::from(if k % 2 == 0 { 1 } else { -1 })));
            if k + 1 < self.n {
                mono = self.concat(mono, self.offset[1] + j).expect("degree below N");
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }
}

fn finish_map(acc: HashMap<usize, Int>) -> AElem {
    let mut v: AElem = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    v.sort_by_key(|e| e.0);
    v
}

/// `Z[F_p]/r^N` for one level presentation.
#[derive(Debug)]
pub struct Ambient {
    group: Arc<GroupData>,
    lp: Arc<LevelPresentation>,
    alg: Magnus,
    q: usize,
    dim: usize,
    col_of: Vec<usize>,
    basis_of: Vec<(usize, usize)>,
    /// `psi_mono[h * nmono + J] = ψ_h(X_J)`
    psi_mono: Vec<AElem>,
    /// `cocycle[g * q + h] = C(g, h)`
    cocycle: Vec<AElem>,
    /// `gen_left[i * q + h] = (x_i·h, D)` with `x_i s(h) = s(x_i h) D`.
    gen_left: Vec<(usize, AElem)>,
    cache: Mutex<HashMap<String, Arc<Lattice>>>,
}

impl Ambient {
    pub fn new(group: Arc<GroupData>, lp: Arc<LevelPresentation>, n: usize, rank_cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("truncation depth must be positive".into()));
        }
        let m = lp.num_schreier();
        let q = group.order();
        let alg = Magnus::new(m, n);
        let nmono = alg.num_monomials();
        let dim = q
            .checked_mul(nmono)
            .filter(|&d| d <= rank_cap)
            .ok_or_else(|| {
                Error::CapExceeded(format!(
                    "ring rank {q}·{nmono} at level {} exceeds the cap {rank_cap}",
                    lp.level()
                ))
            })?;
        let mut col_of = vec![usize::MAX; dim];
        let mut basis_of = Vec::with_capacity(dim);
        for k in 0..n {
            for g in 0..q {
                if k == 0 && g == 0 {
                    continue;
                }
                let start = alg.offset[k];
                for mono in start..start + alg.pow[k] {
                    col_of[g * nmono + mono] = basis_of.len();
                    basis_of.push((g, mono));
                }
            }
        }
        if n > 0 {
            col_of[0] = basis_of.len();
            basis_of.push((0, 0));
        }

        let psi: Vec<AElem> = (0..q * m)
            .into_par_iter()
            .map(|idx| {
                let (h, j) = (idx / m, idx % m);
                let s = lp.transversal(h);
                let w = s.inv().mul(&lp.schreier_gens()[j]).mul(s);
                let r = lp.rewrite_in_r(&w).expect("conjugate of a relator is a relator");
                let e = alg.expand(&r);
                alg.add(&e, &Int::from(-1), &alg.one())
            })
            .collect();
        let mut psi_mono = vec![Vec::new(); q * nmono];
        for h in 0..q {
            if n > 0 {
                psi_mono[h * nmono] = alg.one();
            }
            for mono in 1..nmono {
                let letters = alg.letters(mono);
                let rest = alg.index(&letters[1..]).expect("shorter tuple");
                psi_mono[h * nmono + mono] =
                    alg.mul(&psi[h * m + letters[0]], &psi_mono[h * nmono + rest]);
            }
        }
        let cocycle: Vec<AElem> = (0..q * q)
            .into_par_iter()
            .map(|idx| {
                let (g, h) = (idx / q, idx % q);
                let gh = group.mul(g, h);
                let w = lp.transversal(gh).inv().mul(lp.transversal(g)).mul(lp.transversal(h));
                alg.expand(&lp.rewrite_in_r(&w).expect("cocycle word is a relator"))
            })
            .collect();
        let ngen = lp.total_rank();
        let mut gen_left = Vec::with_capacity(ngen * q);
        for i in 0..ngen {
            let x = FreeWord::gen(i / lp.rank(), i % lp.rank());
            let g0 = lp.eval(&x);
            let a0 = alg.expand(
                &lp.rewrite_in_r(&lp.transversal(g0).inv().mul(&x))
                    .expect("normal form factor is a relator"),
            );
            for h in 0..q {
                let psi_a0 = apply_psi(&psi_mono, nmono, h, &a0);
                let d = alg.mul(&cocycle[g0 * q + h], &psi_a0);
                gen_left.push((group.mul(g0, h), d));
            }
        }
        Ok(Ambient {
            group,
            lp,
            alg,
            q,
            dim,
            col_of,
            basis_of,
            psi_mono,
            cocycle,
            gen_left,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn level(&self) -> &Arc<LevelPresentation> {
        &self.lp
    }

    pub fn truncation(&self) -> usize {
        self.alg.n
    }

    pub fn algebra(&self) -> &Magnus {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_schreier(&self) -> usize {
        self.alg.m
    }

    /// Column of the basis word `s(g)·X_J`.
    #[inline]
    pub fn col(&self, g: usize, mono: usize) -> usize {
        self.col_of[g * self.alg.num_monomials() + mono]
    }

    pub fn basis_word(&self, col: usize) -> (usize, usize) {
        self.basis_of[col]
    }

    pub fn unit_col(&self) -> usize {
        self.dim - 1
    }

    pub fn one(&self) -> SparseVec {
        if self.dim == 0 {
            Vec::new()
        } else {
            vec![(self.unit_col(), Int::ONE)]
        }
    }

    /// Embed `s(g)·a` for `a` in the truncated free algebra.
    pub fn embed(&self, g: usize, a: &AElem) -> SparseVec {
        let mut v: SparseVec = a.iter().map(|(mono, x)| (self.col(g, *mono), x.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    /// The class of a group word.
    pub fn normal_form(&self, w: &FreeWord) -> Result<SparseVec> {
        w.check_alphabet(self.lp.copies(), self.lp.rank())?;
        let g = self.lp.eval(w);
        let u = self.lp.transversal(g).inv().mul(w);
        let r = self.lp.rewrite_in_r(&u)?;
        Ok(self.embed(g, &self.alg.expand(&r)))
    }

    pub fn multiply(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = vec![Int::ZERO; self.dim];
        for (ca, xa) in a {
            let (g, u) = self.basis_of[*ca];
            let du = self.alg.degree(u);
            for (cb, xb) in b {
                let (h, v) = self.basis_of[*cb];
                if du + self.alg.degree(v) >= self.alg.n {
                    continue;
                }
                let coeff = xa * xb;
                let t = self
                    .alg
                    .mul(&self.cocycle[g * self.q + h], &self.psi_mono[h * self.alg.num_monomials() + u]);
                let gh = self.group.mul(g, h);
                for (w, x) in &t {
                    if let Some(k) = self.alg.concat(*w, v) {
                        acc[self.col(gh, k)].add_mul(&coeff, x);
                    }
                }
            }
        }
        sparse_from_dense(&acc)
    }

    /// `X_j · y`
    pub fn left_mul_x(&self, j: usize, y: &SparseVec, acc: &mut [Int]) {
        let nmono = self.alg.num_monomials();
        let xj = self.alg.offset[1] + j;
        for (c, coeff) in y {
            let (h, v) = self.basis_of[*c];
            for (w, x) in &self.psi_mono[h * nmono + xj] {
                if let Some(k) = self.alg.concat(*w, v) {
                    acc[self.col(h, k)].add_mul(coeff, x);
                }
            }
        }
    }

    /// `x_i · y` for the `i`-th free generator (copy-major numbering).
    pub fn left_mul_gen(&self, i: usize, y: &SparseVec, acc: &mut [Int]) {
        for (c, coeff) in y {
            let (h, v) = self.basis_of[*c];
            let (gh, d) = &self.gen_left[i * self.q + h];
            for (w, x) in d {
                if let Some(k) = self.alg.concat(*w, v) {
                    acc[self.col(*gh, k)].add_mul(coeff, x);
                }
            }
        }
    }

    /// Sum of the coefficients of the group-element words.
    pub fn augmentation(&self, v: &SparseVec) -> Int {
        v.iter()
            .filter(|(c, _)| self.alg.degree(self.basis_of[*c].1) == 0)
            .map(|(_, x)| x.clone())
            .sum()
    }

    /// The augmentation ideal `f`.
    pub fn ideal_f(&self) -> Lattice {
        let unit = self.unit_col();
        let rows: Vec<SparseVec> = (0..self.dim.saturating_sub(1))
            .map(|c| {
                if self.alg.degree(self.basis_of[c].1) == 0 {
                    vec![(c, Int::ONE), (unit, Int::from(-1))]
                } else {
                    vec![(c, Int::ONE)]
                }
            })
            .collect();
        Lattice::from_sparse(self.dim, &rows)
    }

    /// The relation ideal `r`.
    pub fn ideal_r(&self) -> Lattice {
        self.r_power(1)
    }

    /// `r^k`: every basis word of filtration degree at least `k`.
    pub fn r_power(&self, k: usize) -> Lattice {
        let rows: Vec<SparseVec> = (0..self.dim)
            .filter(|&c| self.alg.degree(self.basis_of[c].1) >= k)
            .map(|c| vec![(c, Int::ONE)])
            .collect();
        Lattice::from_sparse(self.dim, &rows)
    }

    /// `ideal · L` for a two-sided ideal lattice `L`.
    pub fn left_ideal_product(&self, letter: Letter, l: &Lattice) -> Lattice {
        if letter == Letter::R && self.alg.n <= 1 {
            return Lattice::zero(self.dim);
        }
        let ops: Vec<usize> = match letter {
            Letter::F => (0..self.lp.total_rank()).collect(),
            Letter::R => (0..self.alg.m).collect(),
        };
        let jobs: Vec<(usize, usize)> = ops
            .iter()
            .flat_map(|&o| (0..l.rank()).map(move |r| (o, r)))
            .collect();
        let mut e = Echelon::new(self.dim);
        for chunk in jobs.chunks(256) {
            let vecs: Vec<SparseVec> = chunk
                .par_iter()
                .map(|&(o, r)| {
                    let y = &l.rows()[r];
                    let mut acc = vec![Int::ZERO; self.dim];
                    match letter {
                        Letter::R => self.left_mul_x(o, y, &mut acc),
                        Letter::F => {
                            self.left_mul_gen(o, y, &mut acc);
                            for (c, x) in y {
                                acc[*c] -= x;
                            }
                        }
                    }
                    sparse_from_dense(&acc)
                })
                .collect();
            for v in &vecs {
                e.insert(v);
            }
        }
        e.finish()
    }

    fn cached(&self, key: &str, make: impl FnOnce() -> Lattice) -> Arc<Lattice> {
        if let Some(l) = self.cache.lock().expect("cache lock").get(key) {
            return l.clone();
        }
        let l = Arc::new(make());
        self.cache
            .lock()
            .expect("cache lock")
            .entry(key.to_string())
            .or_insert(l)
            .clone()
    }

    pub fn eval_monomial(&self, m: &Monomial) -> Arc<Lattice> {
        self.eval_letters(m.letters())
    }

    fn eval_letters(&self, letters: &[Letter]) -> Arc<Lattice> {
        let key: String = letters.iter().map(|l| l.as_char()).collect();
        if letters.iter().all(|&l| l == Letter::R) {
            return self.cached(&key, || self.r_power(letters.len()));
        }
        self.cached(&key, || match letters.len() {
            1 => match letters[0] {
                Letter::F => self.ideal_f(),
                Letter::R => self.ideal_r(),
            },
            _ => {
                let rest = self.eval_letters(&letters[1..]);
                self.left_ideal_product(letters[0], &rest)
            }
        })
    }

    pub fn eval_intersection(&self, t: &Intersection) -> Arc<Lattice> {
        let monos = t.monomials();
        if monos.len() == 1 {
            return self.eval_monomial(&monos[0]);
        }
        self.cached(&t.to_string(), || {
            let mut acc = (*self.eval_monomial(&monos[0])).clone();
            for m in &monos[1..] {
                acc = acc.intersect(&self.eval_monomial(m));
            }
            acc
        })
    }

    /// The lattice of `c/r^N`. Requires `N ≥ code.faithful_depth()`.
    pub fn eval_code(&self, code: &FrCode) -> Result<Arc<Lattice>> {
        let need = code.faithful_depth();
        if self.alg.n < need {
            return Err(Error::Precondition(format!(
                "truncation {} is below the faithful depth {need} of {code}",
                self.alg.n
            )));
        }
        Ok(self.eval_code_unchecked(code))
    }

    /// As [`Ambient::eval_code`] but without the faithfulness check.
    pub fn eval_code_unchecked(&self, code: &FrCode) -> Arc<Lattice> {
        let terms = code.terms();
        if terms.len() == 1 {
            return self.eval_intersection(&terms[0]);
        }
        self.cached(&code.to_string(), || {
            let mut e = Echelon::new(self.dim);
            for t in terms {
                for r in self.eval_intersection(t).rows() {
                    e.insert(r);
                }
            }
            e.finish()
        })
    }

    /// `f/c` with its projection and lifts.
    pub fn quotient_f_mod(&self, code: &FrCode) -> Result<SubQuotient> {
        let c = self.eval_code(code)?;
        SubQuotient::new(&self.eval_letters(&[Letter::F]), &c)
    }

    /// Debug rendering, one `±k·[g | ρ_j,…]` line per term, sorted.
    pub fn dump(&self, v: &SparseVec) -> String {
        let mut lines: Vec<(usize, usize, String)> = v
            .iter()
            .map(|(c, x)| {
                let (g, mono) = self.basis_of[*c];
                let js: Vec<String> = self
                    .alg
                    .letters(mono)
                    .iter()
                    .map(|j| format!("ρ_{j}"))
                    .collect();
                let sign = if x.is_negative() { '-' } else { '+' };
                (g, mono, format!("{sign}{}·[{g} | {}]", x.abs(), js.join(",")))
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for (_, _, l) in lines {
            let _ = writeln!(out, "{l}");
        }
        out
    }
}

fn apply_psi(psi_mono: &[AElem], nmono: usize, h: usize, a: &AElem) -> AElem {
    let mut acc: HashMap<usize, Int> = HashMap::new();
    for (mono, x) in a {
        for (w, y) in &psi_mono[h * nmono + mono] {
            acc.entry(*w).or_default().add_mul(x, y);
        }
    }
    finish_map(acc)
}

/// Ring homomorphism `Z[F_p]/r^N → Z[F_p']/r^N` induced by a homomorphism
/// of free groups over `G`.
pub struct RingMap<'a> {
    src: &'a Ambient,
    dst: &'a Ambient,
    /// Image of `s(g)` as `s(g)·a_g`.
    section: Vec<AElem>,
    /// Image of `X_J` in the target free algebra.
    mono: Vec<AElem>,
}

impl<'a> RingMap<'a> {
    pub fn new(src: &'a Ambient, dst: &'a Ambient, h: &FreeHom) -> Result<Self> {
        if src.truncation() != dst.truncation() {
            return Err(Error::AmbientMismatch("truncation depths differ".into()));
        }
        if h.src_copies != src.lp.copies()
            || h.dst_copies != dst.lp.copies()
            || h.src_rank != src.lp.rank()
            || h.dst_rank != dst.lp.rank()
        {
            return Err(Error::RankMismatch("homomorphism does not match the ambients".into()));
        }
        if !src.lp.commutes(h, &dst.lp, &src.group) {
            return Err(Error::NonCommuting(
                "generator images do not map to the same elements of G".into(),
            ));
        }
        let q = src.q;
        let section: Vec<AElem> = (0..q)
            .map(|g| {
                let w = h.apply(src.lp.transversal(g));
                let v = dst.normal_form(&w)?;
                let mut a = Vec::new();
                for (c, x) in v {
                    let (gg, mono) = dst.basis_of[c];
                    if gg != g {
                        return Err(Error::NonCommuting(format!(
                            "transversal element {g} maps to element {gg}"
                        )));
                    }
                    a.push((mono, x));
                }
                a.sort_by_key(|e| e.0);
                Ok(a)
            })
            .collect::<Result<_>>()?;
        let alg = &dst.alg;
        let phi: Vec<AElem> = src
            .lp
            .schreier_gens()
            .iter()
            .map(|rho| {
                let w = h.apply(rho);
                let r = dst.lp.rewrite_in_r(&w)?;
                Ok(alg.add(&alg.expand(&r), &Int::from(-1), &alg.one()))
            })
            .collect::<Result<_>>()?;
        let nmono = src.alg.num_monomials();
        let mut mono = vec![Vec::new(); nmono];
        if nmono > 0 {
            mono[0] = alg.one();
        }
        for u in 1..nmono {
            let letters = src.alg.letters(u);
            let rest = src.alg.index(&letters[1..]).expect("shorter tuple");
            mono[u] = alg.mul(&phi[letters[0]], &mono[rest]);
        }
        Ok(RingMap {
            src,
            dst,
            section,
            mono,
        })
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![Int::ZERO; self.dst.dim];
        let alg = &self.dst.alg;
        for (c, x) in v {
            let (g, u) = self.src.basis_of[*c];
            let img = alg.mul(&self.section[g], &self.mono[u]);
            for (w, y) in &img {
                acc[self.dst.col(g, *w)].add_mul(x, y);
            }
        }
        sparse_from_dense(&acc)
    }

    /// Matrix of the induced map between two quotients, on their generators.
    pub fn induced(&self, src: &SubQuotient, dst: &SubQuotient) -> Result<AbMap> {
        let images: Vec<SparseVec> = (0..src.ngens())
            .into_par_iter()
            .map(|k| dst.project(&self.apply(src.lift(k))))
            .collect::<Result<_>>()?;
        AbMap::new(src.group().clone(), dst.group().clone(), images)
    }
}
