use frlim::freegrp::{FreeWord, Syllable};
use frlim::permgrp::{builtin_group, resolve_group, GroupData, GroupSpec, LevelPresentation, DEFAULT_ELEMENT_CAP};
use proptest::prelude::*;

fn group(name: &str) -> GroupData {
    builtin_group(name, DEFAULT_ELEMENT_CAP).unwrap().unwrap()
}

#[test]
fn closure_orders() {
    let z4 = GroupData::close("Z4", &["x".into()], &[vec![2, 3, 4, 1]], DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(z4.order(), 4);
    let s3 = GroupData::close("S3", &["x".into(), "y".into()], &[vec![2, 1, 3], vec![2, 3, 1]], DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(s3.order(), 6);
    let one = GroupData::close("1", &["x".into()], &[vec![1]], DEFAULT_ELEMENT_CAP).unwrap();
    assert_eq!(one.order(), 1);
    assert!(s3.check_associative(200));
}

#[test]
fn spec_files_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    std::fs::write(&path, r#"{"name":"Z3","generators":["x"],"images":[[2,3,1]],"order":3,"relators":["x^3"]}"#).unwrap();
    assert_eq!(resolve_group(path.to_str().unwrap(), DEFAULT_ELEMENT_CAP).unwrap().order(), 3);

    std::fs::write(&path, r#"{"name":"Z3","generators":["x"],"images":[[2,3,1]],"order":4}"#).unwrap();
    assert!(GroupData::load(&path, DEFAULT_ELEMENT_CAP).is_err());
    std::fs::write(&path, "{not json").unwrap();
    assert!(GroupData::load(&path, DEFAULT_ELEMENT_CAP).is_err());
    assert!(GroupSpec::from_json(r#"{"name":"x"}"#).is_err());
}

#[test]
fn relators_hold_in_bundled_groups() {
    for (name, _) in frlim::permgrp::BUILTIN_GROUPS {
        let g = group(name);
        assert!(g.check_associative(100), "{name}");
    }
}

#[test]
fn schreier_examples() {
    let z2 = group("z2");
    let l0 = LevelPresentation::new(&z2, 0);
    assert_eq!(l0.transversal(0), &FreeWord::empty());
    assert_eq!(l0.schreier_gens(), &[FreeWord::gen(0, 0).pow(2)]);
    assert_eq!(LevelPresentation::new(&z2, 1).num_schreier(), 3);
    let triv = group("trivial");
    assert_eq!(LevelPresentation::new(&triv, 0).schreier_gens(), &[FreeWord::gen(0, 0)]);
}

fn arb_word(copies: usize, rank: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0..copies, 0..rank, prop::bool::ANY), 0..14).prop_map(|v| {
        FreeWord::from_syllables(v.into_iter().map(|(copy, gen, pos)| Syllable { copy, gen, exp: if pos { 1 } else { -1 } }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Nielsen–Schreier count, prefix-closed transversal, and a faithful rewrite
    /// of relators in the Schreier basis.
    #[test]
    fn schreier_structure(gi in 0usize..6, p in 0usize..3, w in arb_word(3, 2)) {
        let name = ["trivial", "z2", "z3", "z4", "z2xz2", "s3"][gi];
        let g = group(name);
        let lp = LevelPresentation::new(&g, p);
        let n = g.rank() * (p + 1);
        prop_assert_eq!(lp.num_schreier(), g.order() * (n - 1) + 1);
        for h in 0..g.order() {
            let t = lp.transversal(h);
            prop_assert_eq!(lp.eval(t), h);
            if !t.is_empty() {
                let prefix = FreeWord::from_syllables(t.syllables()[..t.len() - 1].iter().copied());
                prop_assert!((0..g.order()).any(|k| lp.transversal(k) == &prefix));
            }
        }
        let w = FreeWord::from_syllables(w.syllables().iter().filter(|s| s.copy <= p && s.gen < g.rank()).copied());
        let h = lp.eval(&w);
        let rel = w.mul(&lp.transversal(h).inv());
        let r = lp.rewrite_in_r(&rel).unwrap();
        prop_assert_eq!(lp.expand(&r), rel);
    }
}
