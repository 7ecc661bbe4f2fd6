//! Seeded property suites over the whole pipeline.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::frcode::{FrCode, Intersection, Letter, Monomial};
use crate::freegrp::{codegeneracy, coface, homotopy_maps, standard_map, FreeHom, FreeWord, Syllable};
use crate::intlin::snf::{smith_diagonal, snf, Matrix};
use crate::intlin::Int;
use crate::limits::{
    assemble, cocycle_spotcheck, homotopy_check, moore_matches_alternate, random_hom_over_g, Budget, Caps,
};
use crate::permgrp::{builtin_group, GroupData, LevelPresentation};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("selftest seed {} trials {}\n", self.seed, self.trials);
        for s in &self.suites {
            out.push_str(&format!(
                "{:<28} {:>5}  {}\n",
                s.name,
                s.trials,
                if s.passed { "pass".to_string() } else { format!("FAIL: {}", s.failure.as_deref().unwrap_or("")) }
            ));
        }
        out
    }
}

fn outcome(name: &str, trials: usize, failure: Option<String>) -> SuiteOutcome {
    SuiteOutcome {
        name: name.to_string(),
        trials,
        passed: failure.is_none(),
        failure,
    }
}

pub fn run(seed: u64, trials: usize) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = vec![
        cosimplicial_words(&mut rng, trials),
        homotopy_words(&mut rng, trials),
        snf_factorizations(&mut rng, trials),
    ];
    suites.extend(complex_suites(&mut rng, trials)?);
    suites.push(presentation_independence(&mut rng, trials)?);
    Ok(SelftestReport { seed, trials, suites })
}

pub fn random_word(rng: &mut ChaCha8Rng, copies: usize, rank: usize, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    FreeWord::from_syllables((0..len).map(|_| Syllable {
        copy: rng.gen_range(0..copies),
        gen: rng.gen_range(0..rank),
        exp: if rng.gen_bool(0.5) { 1 } else { -1 },
    }))
}

fn random_endo(rng: &mut ChaCha8Rng, src_rank: usize, dst_rank: usize) -> FreeHom {
    let images = (0..src_rank).map(|_| random_word(rng, 1, dst_rank, 4)).collect();
    FreeHom::new(1, src_rank, 1, dst_rank, images).expect("single copy")
}

/// Two homomorphisms agree on the generators and on a random word.
fn agree(rng: &mut ChaCha8Rng, a: &FreeHom, b: &FreeHom) -> bool {
    let w = random_word(rng, a.src_copies, a.src_rank, 8);
    a == b && a.apply(&w) == b.apply(&w)
}

/// Cosimplicial identities between cofaces and codegeneracies of `B(F)`.
pub fn cosimplicial_words(rng: &mut ChaCha8Rng, trials: usize) -> SuiteOutcome {
    let d = |n, i, r| coface(n, i, r).expect("index in range");
    let s = |n, j, r| codegeneracy(n, j, r).expect("index in range");
    for _ in 0..trials {
        let rank = rng.gen_range(1..=3);
        let n = rng.gen_range(0..=2usize);
        // d^j d^i = d^i d^{j-1}, i < j, from level n to n + 2
        let j = rng.gen_range(1..=n + 2);
        let i = rng.gen_range(0..j);
        if !agree(rng, &d(n, i, rank).then(&d(n + 1, j, rank)).unwrap(), &d(n, j - 1, rank).then(&d(n + 1, i, rank)).unwrap()) {
            return outcome("cosimplicial identities", trials, Some(format!("d^{j} d^{i} at level {n}")));
        }
        // s^j s^i = s^i s^{j+1}, i ≤ j, from level n + 2 to n
        let j = rng.gen_range(0..=n);
        let i = rng.gen_range(0..=j);
        if !agree(rng, &s(n + 1, i, rank).then(&s(n, j, rank)).unwrap(), &s(n + 1, j + 1, rank).then(&s(n, i, rank)).unwrap()) {
            return outcome("cosimplicial identities", trials, Some(format!("s^{j} s^{i} at level {}", n + 2)));
        }
        // s^j d^i on level n + 1
        let m = n + 1;
        let j = rng.gen_range(0..=m);
        let i = rng.gen_range(0..=m + 1);
        let lhs = d(m, i, rank).then(&s(m, j, rank)).unwrap();
        let rhs = if i < j {
            s(m - 1, j - 1, rank).then(&d(m - 1, i, rank)).unwrap()
        } else if i == j || i == j + 1 {
            FreeHom::identity(m + 1, rank)
        } else {
            s(m - 1, j, rank).then(&d(m - 1, i - 1, rank)).unwrap()
        };
        if !agree(rng, &lhs, &rhs) {
            return outcome("cosimplicial identities", trials, Some(format!("s^{j} d^{i} at level {m}")));
        }
    }
    outcome("cosimplicial identities", trials, None)
}

/// Identities of the maps `k^j = s^j α^j` for random `f, g`.
pub fn homotopy_words(rng: &mut ChaCha8Rng, trials: usize) -> SuiteOutcome {
    let name = "homotopy identities";
    for _ in 0..trials {
        let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (f, g) = (random_endo(rng, a, b), random_endo(rng, a, b));
        let n = rng.gen_range(1..=3usize);
        let k = homotopy_maps(&f, &g, n).unwrap();
        let km = homotopy_maps(&f, &g, n - 1).unwrap();
        let kp = homotopy_maps(&f, &g, n + 1).unwrap();
        let d = |lvl, i, r| coface(lvl, i, r).unwrap();
        let s = |lvl, j, r| codegeneracy(lvl, j, r).unwrap();
        if !agree(rng, &d(n, 0, a).then(&k[0]).unwrap(), &standard_map(&g, n).unwrap()) {
            return outcome(name, trials, Some(format!("k^0 d^0 = B(g) at level {n}")));
        }
        if !agree(rng, &d(n, n + 1, a).then(&k[n]).unwrap(), &standard_map(&f, n).unwrap()) {
            return outcome(name, trials, Some(format!("k^n d^(n+1) = B(f) at level {n}")));
        }
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = d(n, i, a).then(&k[j]).unwrap();
                let rhs = if i < j {
                    km[j - 1].then(&d(n - 1, i, b)).unwrap()
                } else if i == j && j > 0 {
                    d(n, j, a).then(&k[j - 1]).unwrap()
                } else if i > j + 1 {
                    km[j].then(&d(n - 1, i - 1, b)).unwrap()
                } else {
                    continue;
                };
                if !agree(rng, &lhs, &rhs) {
                    return outcome(name, trials, Some(format!("k^{j} d^{i} at level {n}")));
                }
            }
            for i in 0..=n + 1 {
                let lhs = s(n + 1, i, a).then(&k[j]).unwrap();
                let rhs = if i <= j {
                    kp[j + 1].then(&s(n, i, b)).unwrap()
                } else {
                    kp[j].then(&s(n, i - 1, b)).unwrap()
                };
                if !agree(rng, &lhs, &rhs) {
                    return outcome(name, trials, Some(format!("k^{j} s^{i} at level {n}")));
                }
            }
        }
    }
    outcome(name, trials, None)
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` a divisibility chain.
pub fn snf_factorizations(rng: &mut ChaCha8Rng, trials: usize) -> SuiteOutcome {
    let name = "smith normal form";
    for t in 0..trials {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = random_matrix(rng, r, c, 12);
        if let Some(why) = check_snf(&m) {
            return outcome(name, trials, Some(format!("trial {t}: {why}")));
        }
    }
    outcome(name, trials, None)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data: Vec<Vec<Int>> = (0..rows)
        .map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect())
        .collect();
    Matrix::from_rows(data, cols)
}

/// `None` when the factorization of `m` is valid.
pub fn check_snf(m: &Matrix) -> Option<String> {
    let s = snf(m);
    if s.u.mul(m).mul(&s.v) != s.d {
        return Some("U·M·V differs from D".into());
    }
    for (i, j) in (0..s.d.nrows()).flat_map(|i| (0..s.d.ncols()).map(move |j| (i, j))) {
        if i != j && !s.d[(i, j)].is_zero() {
            return Some("D is not diagonal".into());
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        if !w[0].divides(&w[1]) {
            return Some("diagonal is not a divisibility chain".into());
        }
    }
    if diag.iter().any(Int::is_negative) {
        return Some("negative invariant factor".into());
    }
    for u in [&s.u, &s.v] {
        if smith_diagonal(u).iter().any(|x| !x.is_one()) {
            return Some("transform is not unimodular".into());
        }
    }
    None
}

fn group(name: &str) -> Arc<GroupData> {
    Arc::new(
        builtin_group(name, crate::permgrp::DEFAULT_ELEMENT_CAP)
            .expect("bundled group")
            .expect("bundled group is valid"),
    )
}

/// A random code whose monomials have length at most `max_len`.
pub fn random_code(rng: &mut ChaCha8Rng, max_len: usize) -> FrCode {
    let mono = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=max_len);
        Monomial::new((0..len).map(|_| if rng.gen_bool(0.5) { Letter::R } else { Letter::F }).collect())
            .expect("nonempty")
    };
    let terms: Vec<Intersection> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut ms = vec![mono(rng)];
            if rng.gen_bool(0.15) {
                ms.push(mono(rng));
            }
            Intersection::new(ms).expect("nonempty")
        })
        .collect();
    FrCode::new(terms).expect("nonempty")
}

/// Complex-level suites on random (code, group) pairs: structure-map identities,
/// Moore vs alternate sums, décalage, equalizer, homotopy invariance and cocycles.
pub fn complex_suites(rng: &mut ChaCha8Rng, trials: usize) -> Result<Vec<SuiteOutcome>> {
    let small = ["trivial", "z2", "z3", "z4"].map(group);
    let wide = ["z2xz2", "s3"].map(group);
    let caps = Caps::default();
    let budget = Budget::new(caps.seconds);
    let names = [
        "assembled identities",
        "moore vs alternate sum",
        "decalage",
        "equalizer",
        "homotopy invariance",
        "cocycle relation",
    ];
    let mut failures: Vec<Option<String>> = vec![None; names.len()];
    for t in 0..trials {
        let (g, depth, max_len) = if rng.gen_bool(0.75) {
            (small.choose(rng).unwrap().clone(), 3, 3)
        } else {
            (wide.choose(rng).unwrap().clone(), 2, 2)
        };
        let code = loop {
            let c = random_code(rng, max_len);
            if c.faithful_depth() <= max_len {
                break c;
            }
        };
        let asm = assemble(&code, &g, depth, code.faithful_depth(), &caps, &budget)?;
        let x = &asm.object;
        let tag = format!("trial {t}: {code} over {}", g.name());
        let mut record = |k: usize, res: Result<bool>| -> Result<()> {
            let why = match res {
                Ok(true) => return Ok(()),
                Ok(false) => "check failed".to_string(),
                Err(e) if e.is_cap() => return Err(e),
                Err(e) => e.to_string(),
            };
            if failures[k].is_none() {
                failures[k] = Some(format!("{tag}: {why}"));
            }
            Ok(())
        };
        record(0, x.check_identities().map(|_| true))?;
        record(1, moore_matches_alternate(x, depth))?;
        record(2, x.decalage_identity_holds())?;
        record(
            3,
            x.moore_complex()
                .and_then(|q| q.cohomology(0))
                .and_then(|h0| Ok(x.equalizer()?.invariants() == h0.invariants())),
        )?;
        let base = LevelPresentation::new(&g, 0);
        let f = random_hom_over_g(rng, &g, &base, 3);
        let h = random_hom_over_g(rng, &g, &base, 3);
        record(4, homotopy_check(&asm, &f, &h))?;
        record(5, cocycle_spotcheck(&asm, rng.gen_range(0..depth.min(2)), 1, rng.gen()))?;
    }
    Ok(names
        .iter()
        .zip(failures)
        .map(|(n, f)| outcome(n, trials, f))
        .collect())
}

/// All `lim^i` agree for the rank-1 and rank-2 presentations of `Z/2`.
pub fn presentation_independence(rng: &mut ChaCha8Rng, trials: usize) -> Result<SuiteOutcome> {
    let name = "presentation independence";
    let (a, b) = (group("z2"), group("z2_rank2"));
    let opts = crate::limits::LimitOptions {
        top_degree: Some(3),
        ..Default::default()
    };
    for t in 0..trials {
        let code = random_code(rng, 3);
        let ra = crate::limits::higher_limits(&code, &a, &opts)?;
        let rb = crate::limits::higher_limits(&code, &b, &opts)?;
        for d in 0..=3 {
            if ra.lim(d) != rb.lim(d) {
                return Ok(outcome(name, trials, Some(format!("trial {t}: lim^{d} of {code}"))));
            }
        }
    }
    Ok(outcome(name, trials, None))
}
