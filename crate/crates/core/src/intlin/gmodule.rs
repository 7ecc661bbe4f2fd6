//! Finitely presented `Z[G]`-bimodules for a finite permutation group `G`,
//! with the augmentation-ideal functors used by the dictionary.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::permgrp::GroupData;

use super::abgroup::{AbMap, FinPresAb, SubQuotient};
use super::hnf::{sparse_from_dense, Echelon, Lattice, SparseVec};
use super::int::Int;

/// An abelian group with left and right actions of the generators of `G`,
/// each stored as the images of the module generators.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<GroupData>,
    module: FinPresAb,
    left: Vec<Vec<SparseVec>>,
    right: Vec<Vec<SparseVec>>,
}

fn unit(i: usize) -> SparseVec {
    vec![(i, Int::ONE)]
}

impl GModule {
    pub fn new(
        group: Arc<GroupData>,
        module: FinPresAb,
        left: Vec<Vec<SparseVec>>,
        right: Vec<Vec<SparseVec>>,
    ) -> Result<Self> {
        if left.len() != group.rank() || right.len() != group.rank() {
            return Err(Error::RankMismatch("one action matrix per group generator".into()));
        }
        for images in left.iter().chain(&right) {
            AbMap::new(module.clone(), module.clone(), images.clone())?;
        }
        Ok(GModule {
            group,
            module,
            left,
            right,
        })
    }

    /// `A` with trivial actions on both sides.
    pub fn trivial(group: Arc<GroupData>, module: FinPresAb) -> Self {
        let id: Vec<SparseVec> = (0..module.ngens()).map(unit).collect();
        let k = group.rank();
        GModule {
            group,
            module,
            left: vec![id.clone(); k],
            right: vec![id; k],
        }
    }

    /// The sublattice `g^k` of `Z[G] = Z^{|G|}` as a bimodule; `k = 0` gives `Z[G]`.
    pub fn ideal_power(group: Arc<GroupData>, k: usize) -> Self {
        let lat = ideal_lattice(&group, k);
        let act = |on_left: bool| -> Vec<Vec<SparseVec>> {
            (0..group.rank())
                .map(|s| {
                    let s = group.gen_element(s);
                    lat.rows()
                        .iter()
                        .map(|row| {
                            let moved: SparseVec = row
                                .iter()
                                .map(|(h, c)| {
                                    let t = if on_left { group.mul(s, *h) } else { group.mul(*h, s) };
                                    (t, c.clone())
                                })
                                .collect();
                            let coords = lat.coords(&sort(moved)).expect("ideals are two-sided");
                            sparse_from_dense(&coords)
                        })
                        .collect()
                })
                .collect()
        };
        let (left, right) = (act(true), act(false));
        GModule {
            module: FinPresAb::free(lat.rank()),
            group,
            left,
            right,
        }
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn module(&self) -> &FinPresAb {
        &self.module
    }

    pub fn ngens(&self) -> usize {
        self.module.ngens()
    }

    /// Right action of every group element, indexed like the group's elements.
    pub fn right_action_all(&self) -> Vec<Vec<SparseVec>> {
        let g = &self.group;
        let n = self.ngens();
        let mut act: Vec<Option<Vec<SparseVec>>> = vec![None; g.order()];
        act[g.identity()] = Some((0..n).map(unit).collect());
        let mut queue = vec![g.identity()];
        while let Some(x) = queue.pop() {
            for (s, images) in self.right.iter().enumerate() {
                let y = g.mul(x, g.gen_element(s));
                if act[y].is_none() {
                    let prev = act[x].as_ref().unwrap();
                    act[y] = Some(prev.iter().map(|v| apply(images, v, n)).collect());
                    queue.push(y);
                }
            }
        }
        act.into_iter().map(|a| a.expect("generators generate")).collect()
    }

    /// `A ⊗_{Z[G]} B`, using the right action of `self` and the left action of
    /// `other`; keeps the left action of `self` and the right action of `other`.
    pub fn tensor_over_group(&self, other: &GModule) -> GModule {
        let nb = other.ngens();
        let mut extra = Vec::new();
        for (ra, lb) in self.right.iter().zip(&other.left) {
            for i in 0..self.ngens() {
                for j in 0..nb {
                    let mut v = outer(&ra[i], &unit(j), nb);
                    for (c, x) in outer(&unit(i), &lb[j], nb) {
                        v.push((c, -x));
                    }
                    extra.push(sort(v));
                }
            }
        }
        let module = tensor_presentations(&self.module, &other.module).quotient(&extra);
        let left = self.left.iter().map(|l| kron(l, &identity(nb), nb)).collect();
        let right = other.right.iter().map(|r| kron(&identity(self.ngens()), r, nb)).collect();
        GModule {
            group: self.group.clone(),
            module,
            left,
            right,
        }
    }

    /// `A ⊗ B` over `Z` with the diagonal actions.
    pub fn tensor(&self, other: &GModule) -> GModule {
        let nb = other.ngens();
        let module = tensor_presentations(&self.module, &other.module);
        let left = self.left.iter().zip(&other.left).map(|(a, b)| kron(a, b, nb)).collect();
        let right = self.right.iter().zip(&other.right).map(|(a, b)| kron(a, b, nb)).collect();
        GModule {
            group: self.group.clone(),
            module,
            left,
            right,
        }
    }

    /// `A_G = A / (s·a − a)` for the left action.
    pub fn coinvariants(&self) -> FinPresAb {
        let extra: Vec<SparseVec> = self
            .left
            .iter()
            .flat_map(|images| {
                images.iter().enumerate().map(|(i, v)| {
                    let mut w = v.clone();
                    w.push((i, Int::from(-1)));
                    sort(w)
                })
            })
            .collect();
        self.module.quotient(&extra)
    }
}

fn sort(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(c, _)| *c);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (c, x) in v {
        match out.last_mut() {
            Some((d, y)) if *d == c => *y += x,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

fn apply(images: &[SparseVec], v: &SparseVec, dim: usize) -> SparseVec {
    super::abgroup::apply_images(images, v, dim)
}

fn identity(n: usize) -> Vec<SparseVec> {
    (0..n).map(unit).collect()
}

/// `a ⊗ b` in `Z^{na} ⊗ Z^{nb}` with index `i * nb + j`.
fn outer(a: &SparseVec, b: &SparseVec, nb: usize) -> SparseVec {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a {
        for (j, y) in b {
            v.push((i * nb + j, x * y));
        }
    }
    sort(v)
}

fn kron(a: &[SparseVec], b: &[SparseVec], nb: usize) -> Vec<SparseVec> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| outer(x, y, nb)))
        .collect()
}

/// `A ⊗ B` of presentations: generators `a_i ⊗ b_j`, relations `R_A ⊗ b_j` and `a_i ⊗ R_B`.
pub fn tensor_presentations(a: &FinPresAb, b: &FinPresAb) -> FinPresAb {
    let (na, nb) = (a.ngens(), b.ngens());
    let mut e = Echelon::new(na * nb);
    for r in a.relations().rows() {
        for j in 0..nb {
            e.insert(&outer(r, &unit(j), nb));
        }
    }
    for r in b.relations().rows() {
        for i in 0..na {
            e.insert(&outer(&unit(i), r, nb));
        }
    }
    FinPresAb::new(na * nb, e.finish())
}

/// `f ⊗ g` on tensor presentations.
pub fn tensor_maps(f: &AbMap, g: &AbMap) -> Result<AbMap> {
    let nb = g.dst().ngens();
    let images = kron(f.images(), g.images(), nb);
    AbMap::new(
        tensor_presentations(f.src(), g.src()),
        tensor_presentations(f.dst(), g.dst()),
        images,
    )
}

/// Product in `Z[G]` of dense-indexed sparse elements.
pub fn group_ring_mul(group: &GroupData, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut v = Vec::with_capacity(a.len() * b.len());
    for (g, x) in a {
        for (h, y) in b {
            v.push((group.mul(*g, *h), x * y));
        }
    }
    sort(v)
}

/// `g^k ⊆ Z^{|G|}`.
pub fn ideal_lattice(group: &GroupData, k: usize) -> Lattice {
    let n = group.order();
    let e = group.identity();
    let gens: Vec<SparseVec> = (0..n)
        .filter(|&h| h != e)
        .map(|h| sort(vec![(h, Int::ONE), (e, Int::from(-1))]))
        .collect();
    let mut lat = Lattice::full(n);
    for _ in 0..k {
        let mut ech = Echelon::new(n);
        for row in lat.rows() {
            for x in &gens {
                ech.insert(&group_ring_mul(group, row, x));
            }
        }
        lat = ech.finish();
    }
    lat
}

/// `g^a / g^b` for `a ≤ b`.
pub fn augmentation_quotient(group: &GroupData, a: usize, b: usize) -> Result<FinPresAb> {
    if a > b {
        return Err(Error::Precondition(format!("g^{a}/g^{b} needs a <= b")));
    }
    Ok(SubQuotient::new(&ideal_lattice(group, a), &ideal_lattice(group, b))?
        .group()
        .clone())
}

/// `G_ab = g/g^2` together with the projection from `g`, both on the basis of
/// `g` used by [`GModule::ideal_power`].
pub fn abelianization(group: &GroupData) -> Result<AbMap> {
    let sq = SubQuotient::new(&ideal_lattice(group, 1), &ideal_lattice(group, 2))?;
    let n = sq.outer().rank();
    let images = (0..n)
        .map(|i| {
            let mut c = vec![Int::ZERO; n];
            c[i] = Int::ONE;
            sq.project_coords(c)
        })
        .collect();
    AbMap::new(FinPresAb::free(n), sq.group().clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::abgroup::Invariants;

    fn cyclic(n: usize) -> Arc<GroupData> {
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n + 1).collect();
        Arc::new(GroupData::close(&format!("Z{n}"), &["x".into()], &[perm], 100).unwrap())
    }

    fn klein() -> Arc<GroupData> {
        Arc::new(
            GroupData::close(
                "Z2xZ2",
                &["a".into(), "b".into()],
                &[vec![2, 1, 3, 4], vec![1, 2, 4, 3]],
                100,
            )
            .unwrap(),
        )
    }

    #[test]
    fn ideal_ranks_and_abelianization() {
        let g = cyclic(4);
        assert_eq!(ideal_lattice(&g, 0).rank(), 4);
        assert_eq!(ideal_lattice(&g, 1).rank(), 3);
        assert_eq!(ideal_lattice(&g, 2).rank(), 3);
        assert_eq!(abelianization(&g).unwrap().dst().invariants(), &Invariants::from_cyclic(&[Int::from(4)]));
        let k = klein();
        let gab = abelianization(&k).unwrap();
        assert_eq!(gab.dst().invariants().to_string(), "Z/2 + Z/2");
    }

    #[test]
    fn tensor_over_group_ring() {
        let g = cyclic(2);
        let aug = GModule::ideal_power(g.clone(), 1);
        assert_eq!(aug.tensor_over_group(&aug).module().invariants(), &Invariants::free(1));
        let zg = GModule::ideal_power(g.clone(), 0);
        assert_eq!(zg.tensor_over_group(&aug).module().invariants(), &Invariants::free(1));
        let z = GModule::trivial(g, FinPresAb::free(1));
        // Z ⊗_{Z[G]} Z[G] = Z and the coinvariants of g for Z/2 are Z/2.
        assert_eq!(z.tensor_over_group(&zg).module().invariants(), &Invariants::free(1));
        assert_eq!(aug.coinvariants().invariants().to_string(), "Z/2");
    }

    #[test]
    fn right_action_of_all_elements() {
        let g = cyclic(3);
        let zg = GModule::ideal_power(g.clone(), 0);
        let all = zg.right_action_all();
        assert_eq!(all.len(), 3);
        for (x, images) in all.iter().enumerate() {
            for h in 0..3 {
                let moved = zg.module.relations().reduce(&images[h]);
                let expect = sparse_from_dense(
                    &ideal_lattice(&g, 0)
                        .coords(&vec![(g.mul(h, x), Int::ONE)])
                        .unwrap(),
                );
                assert_eq!(moved, expect);
            }
        }
    }
}
