use std::sync::Arc;

use frlim::frcode::parse;
use frlim::intlin::{FinPresAb, Invariants};
use frlim::limits::{assemble, cocycle_spotcheck, higher_limits, Budget, Caps, CheckStatus, CosimplicialAb, LimitOptions};
use frlim::permgrp::{builtin_group, GroupData, DEFAULT_ELEMENT_CAP};

fn group(name: &str) -> Arc<GroupData> {
    Arc::new(builtin_group(name, DEFAULT_ELEMENT_CAP).unwrap().unwrap())
}

fn lims(code: &str, g: &str, top: usize) -> Vec<String> {
    let opts = LimitOptions { top_degree: Some(top), checks: true, ..Default::default() };
    let r = higher_limits(&parse(code).unwrap(), &group(g), &opts).unwrap();
    assert!(r.checks.values().all(|s| *s == CheckStatus::Pass), "{code} over {g}: {:?}", r.checks);
    (0..=top).map(|d| r.lim(d).unwrap().to_string()).collect()
}

#[test]
fn constant_object() {
    let a = FinPresAb::from_invariants(&Invariants::parse("Z + Z/6").unwrap());
    let x = CosimplicialAb::constant(a.clone(), 4);
    x.check_identities().unwrap();
    let q = x.moore_complex().unwrap();
    let c = x.alternate_sum_complex().unwrap();
    assert_eq!(q.cohomology(0).unwrap().invariants(), a.invariants());
    assert_eq!(c.cohomology(0).unwrap().invariants(), a.invariants());
    for n in 1..4 {
        assert!(q.groups[n].is_zero());
        assert!(q.cohomology(n).unwrap().is_zero());
        assert!(c.cohomology(n).unwrap().is_zero());
    }
    assert!(x.decalage_identity_holds().unwrap());
    assert_eq!(x.equalizer().unwrap().invariants(), a.invariants());

    let z = CosimplicialAb::constant(FinPresAb::zero(), 3);
    assert!(z.moore_complex().unwrap().groups.iter().all(FinPresAb::is_zero));
}

#[test]
fn dictionary_spot_values() {
    assert_eq!(lims("r", "z2", 2), ["0", "Z", "0"]);
    assert_eq!(lims("rr", "z2", 3), ["0", "0", "Z", "0"]);
    assert_eq!(lims("rr+fff", "z2", 3), ["0", "Z/2", "Z/2", "0"]);
    assert_eq!(lims("r", "z3", 2), ["0", "Z^2", "0"]);
    assert_eq!(lims("rr+frf", "z3", 3), ["0", "Z/3", "Z^2", "0"]);
}

#[test]
fn trivial_group_vanishes() {
    for code in ["r", "rr+fff", "rrr", "rf+ffr"] {
        assert!(lims(code, "trivial", 3).iter().all(|s| s == "0"), "{code}");
    }
}

#[test]
fn level_zero_of_r_is_g() {
    let caps = Caps::default();
    let asm = assemble(&parse("r").unwrap(), &group("z2"), 2, 1, &caps, &Budget::new(60)).unwrap();
    assert_eq!(asm.object.levels[0].invariants(), &Invariants::free(1));
    assert_eq!(asm.object.equalizer().unwrap().invariants(), &Invariants::free(1));
    asm.object.check_identities().unwrap();
    for n in 0..2 {
        assert!(cocycle_spotcheck(&asm, n, 8, 11).unwrap());
    }
}

#[test]
fn truncation_override() {
    let g = group("z2");
    let code = parse("rr+fff").unwrap();
    let deeper = LimitOptions { top_degree: Some(2), truncation: Some(3), ..Default::default() };
    let r = higher_limits(&code, &g, &deeper).unwrap();
    assert_eq!(r.truncation, 3);
    assert_eq!(r.lim(1).unwrap().to_string(), "Z/2");
    let shallow = LimitOptions { truncation: Some(1), ..Default::default() };
    assert!(higher_limits(&code, &g, &shallow).is_err());
}

#[test]
fn caps_are_enforced() {
    let tiny = LimitOptions { caps: Caps { rank: 50, ..Caps::default() }, ..Default::default() };
    let err = higher_limits(&parse("rrr").unwrap(), &group("s3"), &tiny).unwrap_err();
    assert!(err.is_cap());
}

#[test]
fn reports_are_deterministic() {
    let opts = LimitOptions { top_degree: Some(2), checks: true, seed: 9, ..Default::default() };
    let code = parse("fr+rf").unwrap();
    let a = serde_json::to_string(&higher_limits(&code, &group("z3"), &opts).unwrap()).unwrap();
    let b = serde_json::to_string(&higher_limits(&code, &group("z3"), &opts).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["N"], 2);
    assert_eq!(v["lims"][1]["group"], "Z^2");
}
