mod common;

use frlim::intlin::hnf::{sparse_from_dense, Lattice};
use frlim::intlin::snf::{smith_diagonal, snf, Matrix};
use frlim::intlin::{homology_at, AbMap, FinPresAb, Int, Invariants};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inv(s: &str) -> Invariants {
    Invariants::parse(s).unwrap()
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[test]
fn smith_examples() {
    assert_eq!(smith_diagonal(&Matrix::from_i64(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
    assert!(smith_diagonal(&Matrix::zeros(3, 2)).is_empty());
    assert_eq!(smith_diagonal(&Matrix::identity(3)), ints(&[1, 1, 1]));
}

#[test]
fn homology_examples() {
    let z2 = FinPresAb::free(2);
    let zero = AbMap::zero(z2.clone(), z2.clone());
    assert_eq!(homology_at(&zero, &zero).unwrap().invariants(), &Invariants::free(2));

    let z = FinPresAb::free(1);
    let two = AbMap::new(z.clone(), z.clone(), vec![vec![(0, Int::from(2))]]).unwrap();
    let out = AbMap::zero(z.clone(), FinPresAb::zero());
    assert_eq!(homology_at(&two, &out).unwrap().invariants(), &inv("Z/2"));
    assert!(homology_at(&two, &two).is_err());
}

#[test]
fn tor_and_tensor() {
    assert_eq!(inv("Z + Z/4").tor(&inv("Z/6")), inv("Z/2"));
    assert_eq!(inv("Z/2").tensor(&inv("Z/2")), inv("Z/2"));
    assert!(inv("Z^3").tor(&inv("Z/4 + Z/5")).is_zero());
    assert_eq!(inv("Z/4 + Z").tensor(&inv("Z/6 + Z")), inv("Z/2 + Z/4 + Z/6 + Z"));
    assert_eq!(inv("Z/2 + Z/3"), inv("Z/6"));
    assert_eq!(inv("Z^2 + Z/6 + Z/4").to_string(), "Z^2 + Z/2 + Z/12");
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_rows((0..rows).map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-9i64..=9))).collect()).collect(), cols)
}

proptest! {
    #[test]
    fn smith_factorization(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let m = random_matrix(&mut ChaCha8Rng::seed_from_u64(seed), r, c);
        let s = snf(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let d = s.diagonal();
        prop_assert!(d.windows(2).all(|w| w[0].divides(&w[1])));
        prop_assert!(smith_diagonal(&s.u).iter().all(Int::is_one));
        prop_assert!(smith_diagonal(&s.v).iter().all(Int::is_one));
        prop_assert_eq!(smith_diagonal(&m), d);
    }

    /// Sum and intersection against membership of random integer combinations.
    #[test]
    fn lattice_operations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.gen_range(1..5);
        let gens = |rng: &mut ChaCha8Rng| -> Vec<Vec<Int>> {
            (0..rng.gen_range(1..4)).map(|_| (0..dim).map(|_| Int::from(rng.gen_range(-6i64..=6))).collect()).collect()
        };
        let (ga, gb) = (gens(&mut rng), gens(&mut rng));
        let a = Lattice::from_dense(dim, ga.iter());
        let b = Lattice::from_dense(dim, gb.iter());
        let s = a.sum(&b);
        let i = a.intersect(&b);
        prop_assert!(s.contains_lattice(&a) && s.contains_lattice(&b));
        prop_assert!(a.contains_lattice(&i) && b.contains_lattice(&i));
        for g in ga.iter().chain(&gb) {
            prop_assert!(s.contains_dense(g));
        }
        // Any vector in both lattices, found by a small search, lies in the intersection.
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let v: Vec<Int> = (0..dim).map(|k| Int::from(x) * &ga[0][k] + Int::from(y) * &ga[ga.len() - 1][k]).collect();
                prop_assert_eq!(i.contains_dense(&v), b.contains_dense(&v));
            }
        }
        let doubled = a.sum(&a);
        prop_assert_eq!(doubled.rows(), a.rows());
        let v = sparse_from_dense(&ga[0]);
        prop_assert!(a.reduce(&v).is_empty());
    }
}

#[test]
fn homology_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        common::homology_trial(&mut rng).unwrap();
    }
}
