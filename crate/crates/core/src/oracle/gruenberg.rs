//! The Gruenberg resolution of `Z` over `Z[G]`, realized inside `Z[F]/r^N`
//! for the base presentation:
//!
//! ```text
//! … → r²/r³ → rf/r²f → r/r² → f/rf → Z[F]/r = Z[G] → Z
//! ```
//!
//! `r^j/r^{j+1}` is free on the words `X_J` with `|J| = j`, and
//! `r^j f/r^{j+1} f` is free on `X_J (x_i − 1)`. Every differential is an
//! inclusion, expressed here as a matrix over `Z[G]`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frcode::{Letter, Monomial};
use crate::freegrp::FreeWord;
use crate::intlin::abgroup::{AbMap, FinPresAb};
use crate::intlin::gmodule::{group_ring_mul, GModule};
use crate::intlin::hnf::{sparse_add_mul, Lattice, SparseVec};
use crate::intlin::Int;
use crate::permgrp::{GroupData, LevelPresentation};
use crate::truncring::Ambient;

/// Matrix over `Z[G]`: `entries[t][u]` is the coefficient of basis element `u`
/// of the target in the image of basis element `t` of the source, as a sparse
/// vector indexed by group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZgMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<SparseVec>>,
}

impl ZgMatrix {
    /// `other ∘ self` for left modules: entry `Σ_u a_{tu} b_{uv}`.
    pub fn then(&self, other: &ZgMatrix, group: &GroupData) -> ZgMatrix {
        let entries = (0..self.rows)
            .map(|t| {
                (0..other.cols)
                    .map(|v| {
                        let mut acc: SparseVec = Vec::new();
                        for u in 0..self.cols {
                            let p = group_ring_mul(group, &self.entries[t][u], &other.entries[u][v]);
                            acc = sparse_add_mul(&acc, &Int::ONE, &p);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        ZgMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Vec::is_empty)
    }
}

pub struct GruenbergResolution {
    group: Arc<GroupData>,
    ambient: Ambient,
    /// Ambient vectors of the free `Z[G]`-basis of each term.
    bases: Vec<Vec<SparseVec>>,
    /// `diffs[k - 1] = d_k : P_k → P_{k-1}`.
    diffs: Vec<ZgMatrix>,
}

/// One term `num/den` with its chosen basis, able to solve for `Z[G]`-coordinates.
struct Term {
    dim: usize,
    q: usize,
    rank: usize,
    solver: Lattice,
}

impl Term {
    fn new(amb: &Ambient, num: &Lattice, den: &Lattice, basis: &[SparseVec]) -> Result<Term> {
        let (dim, q) = (amb.dim(), amb.group().order());
        let k = basis.len() * q;
        let mut rows: Vec<SparseVec> = Vec::with_capacity(k + den.rank());
        for (t, b) in basis.iter().enumerate() {
            for g in 0..q {
                let mut v = amb.multiply(&amb.embed(g, &amb.algebra().one()), b);
                v.push((dim + t * q + g, Int::ONE));
                rows.push(v);
            }
        }
        rows.extend(den.rows().iter().cloned());
        let solver = Lattice::from_sparse(dim + k, &rows);
        if solver.rank() != k + den.rank() {
            return Err(Error::Internal("resolution basis is not independent".into()));
        }
        let term = Term {
            dim,
            q,
            rank: basis.len(),
            solver,
        };
        for r in num.rows() {
            term.coords(r)?;
        }
        Ok(term)
    }

    /// `Z[G]`-coordinates of an ambient vector of the numerator.
    fn coords(&self, v: &SparseVec) -> Result<Vec<SparseVec>> {
        let rem = self.solver.reduce(v);
        if rem.iter().any(|(c, _)| *c < self.dim) {
            return Err(Error::Internal("vector outside the resolution term".into()));
        }
        let mut out = vec![Vec::new(); self.rank];
        for (c, x) in rem {
            let idx = c - self.dim;
            out[idx / self.q].push((idx % self.q, -x));
        }
        Ok(out)
    }
}

fn monomial(letters: Vec<Letter>) -> Monomial {
    Monomial::new(letters).expect("nonempty")
}

impl GruenbergResolution {
    /// Terms `P_0..P_depth` for the base presentation of `group`.
    pub fn new(group: &Arc<GroupData>, depth: usize, rank_cap: usize) -> Result<Self> {
        if depth > 5 {
            return Err(Error::Precondition("resolution depth is limited to 5".into()));
        }
        let n = (depth + 1).div_ceil(2) + 1;
        let lp = Arc::new(LevelPresentation::new(group, 0));
        let amb = Ambient::new(group.clone(), lp.clone(), n, rank_cap)?;
        let alg = amb.algebra();
        let m = amb.num_schreier();
        let tuples = |j: usize| -> Vec<usize> {
            let start = alg.index(&vec![0; j]).expect("tuple fits");
            (start..start + m.pow(j as u32)).collect()
        };
        let gen_minus_one: Vec<SparseVec> = (0..group.rank())
            .map(|i| {
                let x = amb.normal_form(&FreeWord::gen(0, i))?;
                Ok(sparse_add_mul(&x, &Int::from(-1), &amb.one()))
            })
            .collect::<Result<_>>()?;
        let r_pow = |j: usize| -> Lattice {
            if j == 0 {
                Lattice::full(amb.dim())
            } else {
                (*amb.eval_monomial(&monomial(vec![Letter::R; j]))).clone()
            }
        };
        let r_pow_f = |j: usize| -> Lattice {
            let mut l = vec![Letter::R; j];
            l.push(Letter::F);
            (*amb.eval_monomial(&monomial(l))).clone()
        };
        let mut bases = Vec::new();
        let mut terms = Vec::new();
        for k in 0..=depth {
            let j = k / 2;
            let (num, den, basis) = if k % 2 == 0 {
                let basis = tuples(j).into_iter().map(|mono| amb.embed(0, &vec![(mono, Int::ONE)])).collect();
                (r_pow(j), r_pow(j + 1), basis)
            } else {
                let mut basis = Vec::new();
                for mono in tuples(j) {
                    let x = amb.embed(0, &vec![(mono, Int::ONE)]);
                    basis.extend(gen_minus_one.iter().map(|y| amb.multiply(&x, y)));
                }
                (r_pow_f(j), r_pow_f(j + 1), basis)
            };
            terms.push(Term::new(&amb, &num, &den, &basis)?);
            bases.push(basis);
        }
        let diffs = (1..=depth)
            .into_par_iter()
            .map(|k| {
                let entries = bases[k]
                    .iter()
                    .map(|b| terms[k - 1].coords(b))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ZgMatrix {
                    rows: bases[k].len(),
                    cols: bases[k - 1].len(),
                    entries,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GruenbergResolution {
            group: group.clone(),
            ambient: amb,
            bases,
            diffs,
        })
    }

    pub fn depth(&self) -> usize {
        self.diffs.len()
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// `Z[G]`-rank of `P_k`.
    pub fn rank(&self, k: usize) -> usize {
        self.bases[k].len()
    }

    pub fn basis(&self, k: usize) -> &[SparseVec] {
        &self.bases[k]
    }

    /// `d_k : P_k → P_{k-1}` for `1 ≤ k ≤ depth`.
    pub fn differential(&self, k: usize) -> &ZgMatrix {
        &self.diffs[k - 1]
    }

    pub fn is_complex(&self) -> bool {
        self.diffs
            .windows(2)
            .all(|w| w[1].then(&w[0], &self.group).is_zero())
    }

    /// `M ⊗_{Z[G]} P_k` and its differentials, for the right action of `M`.
    pub fn tensor_complex(&self, m: &GModule) -> Result<(Vec<FinPresAb>, Vec<AbMap>)> {
        let act = m.right_action_all();
        let nm = m.ngens();
        let groups: Vec<FinPresAb> = (0..=self.depth())
            .map(|k| {
                let mut g = FinPresAb::zero();
                for _ in 0..self.rank(k) {
                    g = g.direct_sum(m.module());
                }
                g
            })
            .collect();
        let maps = (1..=self.depth())
            .map(|k| {
                let d = self.differential(k);
                let mut images = Vec::with_capacity(d.rows * nm);
                for t in 0..d.rows {
                    for i in 0..nm {
                        let mut acc: SparseVec = Vec::new();
                        for u in 0..d.cols {
                            for (g, c) in &d.entries[t][u] {
                                let shifted: SparseVec = act[*g][i].iter().map(|(j, y)| (u * nm + j, y.clone())).collect();
                                acc = sparse_add_mul(&acc, c, &shifted);
                            }
                        }
                        images.push(acc);
                    }
                }
                AbMap::new(groups[k].clone(), groups[k - 1].clone(), images)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((groups, maps))
    }

    /// `H_n(G, M)` for `n < depth`.
    pub fn homology(&self, n: usize, m: &GModule) -> Result<FinPresAb> {
        if n >= self.depth() {
            return Err(Error::DepthInsufficient(format!(
                "H_{n} needs a resolution of depth {}, have {}",
                n + 1,
                self.depth()
            )));
        }
        let (groups, maps) = self.tensor_complex(m)?;
        let outgoing = if n == 0 {
            AbMap::zero(groups[0].clone(), FinPresAb::zero())
        } else {
            maps[n - 1].clone()
        };
        crate::intlin::homology_at(&maps[n], &outgoing)
    }
}
