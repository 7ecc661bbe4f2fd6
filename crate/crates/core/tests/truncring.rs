use std::sync::Arc;

use frlim::frcode::parse;
use frlim::freegrp::{codegeneracy, FreeHom, FreeWord, Syllable};
use frlim::intlin::hnf::sparse_add_mul;
use frlim::intlin::{Int, Invariants};
use frlim::permgrp::{builtin_group, GroupData, LevelPresentation, DEFAULT_ELEMENT_CAP};
use frlim::truncring::{Ambient, RingMap};
use proptest::prelude::*;

fn group(name: &str) -> Arc<GroupData> {
    Arc::new(builtin_group(name, DEFAULT_ELEMENT_CAP).unwrap().unwrap())
}

fn ambient(name: &str, p: usize, n: usize) -> Ambient {
    let g = group(name);
    let lp = Arc::new(LevelPresentation::new(&g, p));
    Ambient::new(g, lp, n, 1 << 20).unwrap()
}

fn quotient(name: &str, n: usize, code: &str) -> Invariants {
    let a = ambient(name, 0, n);
    a.quotient_f_mod(&parse(code).unwrap()).unwrap().group().invariants().clone()
}

#[test]
fn rank_formula() {
    for name in ["trivial", "z2", "z3", "z4", "z2xz2", "s3"] {
        let g = group(name);
        for p in 0..3 {
            for n in 1..=3 {
                if g.order() >= 4 && g.rank() == 2 && p + n > 4 {
                    continue;
                }
                let a = ambient(name, p, n);
                let m = g.order() * (g.rank() * (p + 1) - 1) + 1;
                let expect: usize = (0..n).map(|k| g.order() * m.pow(k as u32)).sum();
                assert_eq!(a.dim(), expect, "{name} level {p} N={n}");
            }
        }
    }
}

#[test]
fn z2_ideals() {
    let a = ambient("z2", 0, 2);
    assert_eq!(a.dim(), 4);
    assert_eq!(a.ideal_f().rank(), 3);
    assert_eq!(a.ideal_r().rank(), 2);
    assert!(a.ideal_f().contains_lattice(&a.ideal_r()));
    let t = ambient("trivial", 0, 1);
    assert_eq!(t.dim(), 1);
    assert!(t.ideal_f().is_zero() && t.ideal_r().is_zero());
    assert!(a.eval_code(&parse("rr").unwrap()).unwrap().is_zero());
    assert!(ambient("z2", 0, 1).eval_code(&parse("r").unwrap()).unwrap().is_zero());
}

#[test]
fn z2_normal_forms() {
    let a = ambient("z2", 0, 2);
    let x = FreeWord::gen(0, 0);
    let alg = a.algebra();
    let one_x = a.embed(1, &alg.one());
    let rho = a.embed(0, &alg.x(0));
    let x_rho = a.embed(1, &alg.x(0));
    assert_eq!(a.normal_form(&x).unwrap(), one_x);
    assert_eq!(a.normal_form(&x.pow(2)).unwrap(), sparse_add_mul(&a.one(), &Int::ONE, &rho));
    assert_eq!(a.normal_form(&x.inv()).unwrap(), sparse_add_mul(&one_x, &Int::from(-1), &x_rho));
    assert_eq!(a.multiply(&rho, &one_x), x_rho);
}

#[test]
fn quotients_of_f() {
    for (name, rank) in [("z2", 1), ("z3", 2), ("z4", 3), ("s3", 5)] {
        assert_eq!(quotient(name, 2, "r"), Invariants::free(rank), "{name}");
    }
    assert_eq!(quotient("z4", 2, "r+ff"), Invariants::parse("Z/4").unwrap());
    assert!(quotient("z3", 2, "f").is_zero());
    // In Z[F]/r² for Z/2 with ρ = x², both fr and rf are spanned by x(ρ−1) − (ρ−1),
    // so f = ⟨x−1, ρ−1, x(ρ−1)⟩ modulo that vector is free of rank 2.
    assert_eq!(quotient("z2", 2, "fr+rf"), Invariants::free(2));
}

#[test]
fn identity_and_fold_maps() {
    let g = group("z3");
    let a0 = ambient("z3", 0, 2);
    let a1 = ambient("z3", 1, 2);
    let r = parse("r").unwrap();
    let q0 = a0.quotient_f_mod(&r).unwrap();
    let q1 = a1.quotient_f_mod(&r).unwrap();
    let id = RingMap::new(&a0, &a0, &FreeHom::identity(1, 1)).unwrap().induced(&q0, &q0).unwrap();
    assert!(id.same_map(&frlim::intlin::AbMap::identity(q0.group().clone())));
    // Both levels present f/r as g, and the fold is the identity of g.
    let fold = RingMap::new(&a1, &a0, &codegeneracy(0, 0, g.rank()).unwrap()).unwrap().induced(&q1, &q0).unwrap();
    assert!(fold.kernel_lattice().is_zero());
    assert!(fold.cokernel().is_zero());
}

fn arb_word(copies: usize, rank: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..copies, 0..rank, prop::bool::ANY), 0..10).prop_map(|v| {
        FreeWord::from_syllables(v.into_iter().map(|(copy, gen, pos)| Syllable { copy, gen, exp: if pos { 1 } else { -1 } }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The normal form is a ring homomorphism out of `Z[F]`, its degree-zero part
    /// is the image in `Z[G]`, and multiplication is associative.
    #[test]
    fn multiplicative_and_associative(gi in 0usize..4, n in 1usize..=3, u in arb_word(2, 2), v in arb_word(2, 2), w in arb_word(2, 2)) {
        let name = ["z2", "z3", "s3", "z2xz2"][gi];
        let a = ambient(name, 1, if gi >= 2 { n.min(2) } else { n });
        let rank = a.group().rank();
        let keep = |w: &FreeWord| FreeWord::from_syllables(w.syllables().iter().filter(|s| s.gen < rank).copied());
        let (u, v, w) = (keep(&u), keep(&v), keep(&w));
        let (nu, nv, nw) = (a.normal_form(&u).unwrap(), a.normal_form(&v).unwrap(), a.normal_form(&w).unwrap());
        prop_assert_eq!(a.normal_form(&u.mul(&v)).unwrap(), a.multiply(&nu, &nv));
        prop_assert_eq!(a.multiply(&a.multiply(&nu, &nv), &nw), a.multiply(&nu, &a.multiply(&nv, &nw)));
        prop_assert_eq!(a.multiply(&a.one(), &nu), nu.clone());
        prop_assert_eq!(a.augmentation(&nu), Int::ONE);
        let g = a.level().eval(&u);
        let unit_part: Vec<_> = nu.iter().filter(|(c, _)| a.algebra().degree(a.basis_word(*c).1) == 0).collect();
        prop_assert_eq!(unit_part.len(), 1);
        prop_assert_eq!(a.basis_word(unit_part[0].0).0, g);
        prop_assert!(unit_part[0].1.is_one());
    }
}
