use std::sync::Arc;

use frlim::error::Error;
use frlim::frcode::{parse, FrCode, Letter, Monomial};
use frlim::permgrp::{builtin_group, LevelPresentation, DEFAULT_ELEMENT_CAP};
use frlim::truncring::Ambient;
use proptest::prelude::*;

fn mono(s: &str) -> Monomial {
    Monomial::new(s.chars().map(|c| if c == 'r' { Letter::R } else { Letter::F }).collect()).unwrap()
}

#[test]
fn parses_sums_and_intersections() {
    let c = parse("rr+frf").unwrap();
    assert_eq!(c.terms().len(), 2);
    assert_eq!(c.to_string(), "rr+frf");

    let c = parse("r^2∩f^3").unwrap();
    assert_eq!(c.terms().len(), 1);
    assert_eq!(c.terms()[0].monomials(), &[mono("rr"), mono("fff")]);
    assert_eq!(parse("rr & fff").unwrap(), c);
    assert_eq!(parse(" r r + f ").unwrap(), parse("rr+f").unwrap());
}

#[test]
fn syntax_errors_carry_offsets() {
    match parse("rq+f") {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 1),
        other => panic!("expected syntax error, got {other:?}"),
    }
    for bad in ["", "+r", "r+", "r^0", "r^", "r∩", "(r)"] {
        assert!(matches!(parse(bad), Err(Error::Syntax { .. })), "{bad:?}");
    }
}

#[test]
fn normalization_drops_dominated_terms() {
    assert_eq!(parse("rf+rff").unwrap().normalize().to_string(), "rf");
    assert_eq!(parse("fr+rf+ff").unwrap().normalize().to_string(), "ff");
    let c = parse("rr+frf+rff").unwrap();
    assert_eq!(c.normalize(), c);
}

#[test]
fn faithful_depths() {
    assert_eq!(parse("fr+rf").unwrap().faithful_depth(), 2);
    // r^2 lies in rr, so the sum with fff is already faithful at depth 2.
    assert_eq!(parse("rr+fff").unwrap().faithful_depth(), 2);
    assert_eq!(parse("rrr").unwrap().faithful_depth(), 3);
    assert_eq!(parse("r∩ff").unwrap().faithful_depth(), 2);
}

fn arb_mono(max: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(prop::bool::ANY, 1..=max)
        .prop_map(|v| Monomial::new(v.into_iter().map(|b| if b { Letter::R } else { Letter::F }).collect()).unwrap())
}

fn arb_code() -> impl Strategy<Value = FrCode> {
    prop::collection::vec(prop::collection::vec(arb_mono(4), 1..=2), 1..=4).prop_map(|terms| {
        FrCode::new(terms.into_iter().map(|t| frlim::frcode::Intersection::new(t).unwrap())).unwrap()
    })
}

fn z3_ambient() -> Ambient {
    let g = Arc::new(builtin_group("z3", DEFAULT_ELEMENT_CAP).unwrap().unwrap());
    let lp = Arc::new(LevelPresentation::new(&g, 0));
    Ambient::new(g, lp, 3, 1 << 20).unwrap()
}

proptest! {
    #[test]
    fn display_round_trips(c in arb_code()) {
        prop_assert_eq!(parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn normalization_is_idempotent(c in arb_code()) {
        let n = c.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(n.terms().len() <= c.terms().len());
    }

    #[test]
    fn min_r_power_is_contained(c in arb_code()) {
        let k = c.min_r_power();
        prop_assert!(c.terms().iter().any(|t| t.monomials().iter().all(|m| Monomial::r_power(k).dominated_by(m))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Dominance is a sound containment certificate in an actual truncated ring.
    #[test]
    fn dominance_implies_lattice_containment(a in arb_mono(3), b in arb_mono(3)) {
        let amb = z3_ambient();
        if a.dominated_by(&b) {
            prop_assert!(amb.eval_monomial(&b).contains_lattice(&amb.eval_monomial(&a)));
        }
    }

    /// Normalizing never changes the ideal.
    #[test]
    fn normalization_preserves_the_ideal(c in arb_code()) {
        let amb = z3_ambient();
        let a = amb.eval_code_unchecked(&c);
        let b = amb.eval_code_unchecked(&c.normalize());
        prop_assert_eq!(a.rows(), b.rows());
    }
}
