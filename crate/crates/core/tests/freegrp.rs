use frlim::freegrp::{codegeneracy, coface, homotopy_maps, standard_map, FreeHom, FreeWord, Syllable};
use proptest::prelude::*;

fn copies_of(h: &FreeHom) -> Vec<usize> {
    (0..h.src_copies).map(|t| h.image(t, 0).syllables()[0].copy).collect()
}

#[test]
fn reduced_words() {
    let x = FreeWord::gen(0, 0);
    let y = FreeWord::gen(0, 1);
    let z = FreeWord::gen(0, 2);
    assert!(x.mul(&x.inv()).is_empty());
    assert_eq!(x.mul(&y).mul(&y.inv().mul(&x)), x.pow(2));
    assert_eq!(x.mul(&y).mul(&y.inv()).mul(&x.inv()).mul(&z), z);
}

#[test]
fn cofaces_and_codegeneracies() {
    assert_eq!(copies_of(&coface(0, 0, 1).unwrap()), vec![1]);
    assert_eq!(copies_of(&coface(0, 1, 1).unwrap()), vec![0]);
    assert_eq!(copies_of(&coface(1, 1, 1).unwrap()), vec![0, 2]);
    assert_eq!(copies_of(&codegeneracy(0, 0, 1).unwrap()), vec![0, 0]);
    assert_eq!(copies_of(&codegeneracy(1, 0, 1).unwrap()), vec![0, 0, 1]);
    assert_eq!(copies_of(&codegeneracy(1, 1, 1).unwrap()), vec![0, 1, 1]);
    assert!(coface(2, 4, 1).is_err());
    assert!(codegeneracy(2, 3, 1).is_err());
}

#[test]
fn homotopy_with_equal_maps_is_the_fold() {
    let id = FreeHom::identity(1, 2);
    let k = homotopy_maps(&id, &id, 0).unwrap();
    assert_eq!(k[0], codegeneracy(0, 0, 2).unwrap());
}

#[test]
fn homotopy_boundaries() {
    let f = FreeHom::new(1, 2, 1, 2, vec![FreeWord::from_triples(&[(0, 1, 2)]), FreeWord::from_triples(&[(0, 0, -1), (0, 1, 1)])]).unwrap();
    let g = FreeHom::new(1, 2, 1, 2, vec![FreeWord::from_triples(&[(0, 0, 3)]), FreeWord::empty()]).unwrap();
    for n in 0..4 {
        let k = homotopy_maps(&f, &g, n).unwrap();
        assert_eq!(coface(n, 0, 2).unwrap().then(&k[0]).unwrap(), standard_map(&g, n).unwrap());
        assert_eq!(coface(n, n + 1, 2).unwrap().then(&k[n]).unwrap(), standard_map(&f, n).unwrap());
    }
}

fn arb_word(copies: usize, rank: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..copies, 0..rank, prop::bool::ANY), 0..12).prop_map(|v| {
        FreeWord::from_syllables(v.into_iter().map(|(copy, gen, pos)| Syllable { copy, gen, exp: if pos { 1 } else { -1 } }))
    })
}

proptest! {
    #[test]
    fn group_axioms(a in arb_word(2, 2), b in arb_word(2, 2), c in arb_word(2, 2)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_empty());
        prop_assert_eq!(a.reduce(), a.clone());
        prop_assert_eq!(a.pow(3), a.mul(&a).mul(&a));
        prop_assert_eq!(a.pow(-2), a.inv().pow(2));
    }

    #[test]
    fn homomorphisms_respect_products(a in arb_word(3, 2), b in arb_word(3, 2), j in 0usize..3) {
        let s = codegeneracy(1, j.min(1), 2).unwrap();
        prop_assert_eq!(s.apply(&a.mul(&b)), s.apply(&a).mul(&s.apply(&b)));
        prop_assert_eq!(s.apply(&a.inv()), s.apply(&a).inv());
        let d = coface(2, j, 2).unwrap();
        prop_assert_eq!(d.then(&codegeneracy(2, j.min(2), 2).unwrap()).unwrap().apply(&a), a.clone());
    }

    #[test]
    fn render_parse_round_trip(a in arb_word(1, 3)) {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(FreeWord::parse(&a.render(&names, false), &names).unwrap(), a);
    }
}
