//! The cosimplicial abelian group `(f/c)∘B(c)`, its Moore and alternate-sum
//! complexes, and the higher limits `lim^i c = π^{i-1}((f/c)∘B(c))`.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frcode::FrCode;
use crate::freegrp::{codegeneracy, coface, homotopy_maps, standard_map, FreeHom, FreeWord, Syllable};
use crate::intlin::abgroup::{homology_subquotient, AbMap, CochainComplex, FinPresAb, Invariants, SubQuotient};
use crate::intlin::hnf::{sparse_add_mul, SparseVec};
use crate::intlin::Int;
use crate::permgrp::{GroupData, LevelPresentation};
use crate::truncring::{Ambient, RingMap};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub elements: usize,
    pub rank: usize,
    pub seconds: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: crate::permgrp::DEFAULT_ELEMENT_CAP,
            rank: 200_000,
            seconds: 3600,
        }
    }
}

/// Wall-clock budget shared by one computation.
#[derive(Clone, Debug)]
pub struct Budget {
    start: Instant,
    limit: Duration,
}

impl Budget {
    pub fn new(seconds: u64) -> Self {
        Budget {
            start: Instant::now(),
            limit: Duration::from_secs(seconds),
        }
    }

    pub fn check(&self, phase: &str) -> Result<()> {
        if self.start.elapsed() > self.limit {
            return Err(Error::CapExceeded(format!(
                "time budget of {}s exhausted during {phase}",
                self.limit.as_secs()
            )));
        }
        Ok(())
    }
}

/// Cosimplicial abelian group truncated at level `depth`.
/// `cofaces[n][i] : A^n → A^{n+1}` and `codegens[n][j] : A^{n+1} → A^n`.
#[derive(Clone, Debug)]
pub struct CosimplicialAb {
    pub levels: Vec<FinPresAb>,
    pub cofaces: Vec<Vec<AbMap>>,
    pub codegens: Vec<Vec<AbMap>>,
}

impl CosimplicialAb {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// The constant object with value `a`.
    pub fn constant(a: FinPresAb, depth: usize) -> Self {
        let id = AbMap::identity(a.clone());
        CosimplicialAb {
            levels: vec![a; depth + 1],
            cofaces: (0..depth).map(|n| vec![id.clone(); n + 2]).collect(),
            codegens: (0..depth).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    fn d(&self, n: usize, i: usize) -> &AbMap {
        &self.cofaces[n][i]
    }

    fn s(&self, n: usize, j: usize) -> &AbMap {
        &self.codegens[n][j]
    }

    /// All cosimplicial identities that fit in the truncation; returns the
    /// first failing identity as an error.
    pub fn check_identities(&self) -> Result<()> {
        let depth = self.depth();
        let fail = |what: String| Err(Error::Internal(format!("cosimplicial identity fails: {what}")));
        for n in 0..depth.saturating_sub(1) {
            for j in 0..=n + 2 {
                for i in 0..j {
                    // d^j d^i = d^i d^{j-1} on A^n
                    let lhs = self.d(n, i).compose(self.d(n + 1, j))?;
                    let rhs = self.d(n, j - 1).compose(self.d(n + 1, i))?;
                    if !lhs.same_map(&rhs) {
                        return fail(format!("d^{j} d^{i} at level {n}"));
                    }
                }
            }
            for j in 0..=n {
                for i in 0..=j {
                    // s^j s^i = s^i s^{j+1} : A^{n+2} → A^n
                    let lhs = self.s(n + 1, i).compose(self.s(n, j))?;
                    let rhs = self.s(n + 1, j + 1).compose(self.s(n, i))?;
                    if !lhs.same_map(&rhs) {
                        return fail(format!("s^{j} s^{i} at level {}", n + 2));
                    }
                }
            }
        }
        for n in 1..depth {
            // s^j d^i : A^n → A^{n+1} → A^n
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.d(n, i).compose(self.s(n, j))?;
                    let rhs = if i < j {
                        self.s(n - 1, j - 1).compose(self.d(n - 1, i))?
                    } else if i == j || i == j + 1 {
                        AbMap::identity(self.levels[n].clone())
                    } else {
                        self.s(n - 1, j).compose(self.d(n - 1, i - 1))?
                    };
                    if !lhs.same_map(&rhs) {
                        return fail(format!("s^{j} d^{i} at level {n}"));
                    }
                }
            }
        }
        if depth >= 1 {
            for i in 0..=1 {
                let lhs = self.d(0, i).compose(self.s(0, 0))?;
                if !lhs.same_map(&AbMap::identity(self.levels[0].clone())) {
                    return fail(format!("s^0 d^{i} at level 0"));
                }
            }
        }
        Ok(())
    }

    /// `C^n = A^n` with `d = Σ (−1)^i d^i`.
    pub fn alternate_sum_complex(&self) -> Result<CochainComplex> {
        let diffs = (0..self.depth())
            .map(|n| {
                let mut acc = AbMap::zero(self.levels[n].clone(), self.levels[n + 1].clone());
                for (i, d) in self.cofaces[n].iter().enumerate() {
                    let sign = Int::from(if i % 2 == 0 { 1 } else { -1 });
                    acc = acc.add_scaled(&sign, d)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        CochainComplex::new(self.levels.clone(), diffs).map_err(|e| match e {
            Error::NotAComplex(m) => Error::Internal(format!("alternate-sum differential: {m}")),
            other => other,
        })
    }

    /// `(QA)^n = A^n / Σ_{i=1..n} im d^i`, with the differential induced by `d^0`.
    pub fn moore_groups(&self) -> Vec<FinPresAb> {
        (0..=self.depth())
            .map(|n| {
                if n == 0 {
                    return self.levels[0].clone();
                }
                let extra: Vec<SparseVec> = (1..=n)
                    .flat_map(|i| self.d(n - 1, i).images().iter().cloned())
                    .collect();
                self.levels[n].quotient(&extra)
            })
            .collect()
    }

    pub fn moore_complex(&self) -> Result<CochainComplex> {
        let groups = self.moore_groups();
        let diffs = (0..self.depth())
            .map(|n| {
                AbMap::new(
                    groups[n].clone(),
                    groups[n + 1].clone(),
                    self.d(n, 0).images().to_vec(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        CochainComplex::new(groups, diffs)
    }

    /// `(Dec A)^n = A^{n+1}`, `d^i ↦ d^{i+1}`, `s^j ↦ s^{j+1}`.
    pub fn decalage(&self) -> CosimplicialAb {
        let depth = self.depth();
        CosimplicialAb {
            levels: self.levels[1..].to_vec(),
            cofaces: (1..depth).map(|n| self.cofaces[n][1..].to_vec()).collect(),
            codegens: (1..depth).map(|n| self.codegens[n][1..].to_vec()).collect(),
        }
    }

    /// Checks `(QA)^n = coker{(QA)^{n-1} --d^1--> (Q Dec A)^{n-1}}` for `1 ≤ n ≤ depth`,
    /// as equality of presentations.
    pub fn decalage_identity_holds(&self) -> Result<bool> {
        let q = self.moore_groups();
        let qdec = self.decalage().moore_groups();
        for n in 1..=self.depth() {
            let d1 = AbMap::new(q[n - 1].clone(), qdec[n - 1].clone(), self.d(n - 1, 1).images().to_vec())?;
            let coker = d1.cokernel();
            if coker != q[n] || coker.invariants() != q[n].invariants() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `eq(d^0, d^1 : A^0 ⇉ A^1)`.
    pub fn equalizer(&self) -> Result<FinPresAb> {
        let diff = self.d(0, 0).add_scaled(&Int::from(-1), self.d(0, 1))?;
        Ok(diff.kernel().group().clone())
    }
}

/// Everything computed for one (code, group) pair up to a given level.
pub struct Assembled {
    pub code: FrCode,
    pub group: Arc<GroupData>,
    pub truncation: usize,
    pub ambients: Vec<Arc<Ambient>>,
    pub quotients: Vec<SubQuotient>,
    pub object: CosimplicialAb,
}

pub fn level_ambient(group: &Arc<GroupData>, p: usize, n: usize, caps: &Caps) -> Result<Arc<Ambient>> {
    let lp = Arc::new(LevelPresentation::new(group, p));
    Ok(Arc::new(Ambient::new(group.clone(), lp, n, caps.rank)?))
}

/// Levels `0..=depth` of `(f/c)∘B(c)` with all structure maps.
pub fn assemble(
    code: &FrCode,
    group: &Arc<GroupData>,
    depth: usize,
    truncation: usize,
    caps: &Caps,
    budget: &Budget,
) -> Result<Assembled> {
    if depth < 1 {
        return Err(Error::Precondition("assembly depth must be at least 1".into()));
    }
    if truncation < code.faithful_depth() {
        return Err(Error::Precondition(format!(
            "truncation {truncation} is below the faithful depth {} of {code}",
            code.faithful_depth()
        )));
    }
    let ambients = (0..=depth)
        .into_par_iter()
        .map(|p| level_ambient(group, p, truncation, caps))
        .collect::<Result<Vec<_>>>()?;
    budget.check("ring construction")?;
    let quotients = ambients
        .par_iter()
        .map(|a| a.quotient_f_mod(code))
        .collect::<Result<Vec<_>>>()?;
    budget.check("code evaluation")?;
    let rank = group.rank();
    let induced = |from: usize, to: usize, h: &FreeHom| -> Result<AbMap> {
        RingMap::new(&ambients[from], &ambients[to], h)?.induced(&quotients[from], &quotients[to])
    };
    let cofaces = (0..depth)
        .into_par_iter()
        .map(|n| {
            (0..=n + 1)
                .into_par_iter()
                .map(|j| induced(n, n + 1, &coface(n, j, rank)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    budget.check("coface maps")?;
    let codegens = (0..depth)
        .into_par_iter()
        .map(|n| {
            (0..=n)
                .into_par_iter()
                .map(|j| induced(n + 1, n, &codegeneracy(n, j, rank)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    budget.check("codegeneracy maps")?;
    let levels = quotients.iter().map(|q| q.group().clone()).collect();
    Ok(Assembled {
        code: code.clone(),
        group: group.clone(),
        truncation,
        ambients,
        quotients,
        object: CosimplicialAb {
            levels,
            cofaces,
            codegens,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub schreier_rank: usize,
    pub ring_rank: usize,
    pub value: String,
    pub moore: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimEntry {
    pub degree: usize,
    pub group: String,
    #[serde(skip)]
    pub invariants: Invariants,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitsReport {
    pub code: String,
    pub group: String,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub levels: Vec<LevelSummary>,
    pub lims: Vec<LimEntry>,
    /// Levels `k ≥ 1` at which the Moore complex vanishes, among those computed.
    pub moore_vanishing: Vec<usize>,
    pub checks: BTreeMap<String, CheckStatus>,
}

impl LimitsReport {
    pub fn lim(&self, degree: usize) -> Option<&Invariants> {
        self.lims.iter().find(|l| l.degree == degree).map(|l| &l.invariants)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "code {}  group {}  N = {}\n",
            self.code, self.group, self.truncation
        );
        out.push_str("level  schreier  ring-rank  f/c  Moore\n");
        for l in &self.levels {
            out.push_str(&format!(
                "{:>5}  {:>8}  {:>9}  {}  {}\n",
                l.level, l.schreier_rank, l.ring_rank, l.value, l.moore
            ));
        }
        for l in &self.lims {
            out.push_str(&format!("lim^{} = {}\n", l.degree, l.group));
        }
        for (k, v) in &self.checks {
            out.push_str(&format!("check {k}: {v:?}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct LimitOptions {
    pub top_degree: Option<usize>,
    pub truncation: Option<usize>,
    pub caps: Caps,
    pub checks: bool,
    pub seed: u64,
    pub trials: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        LimitOptions {
            top_degree: None,
            truncation: None,
            caps: Caps::default(),
            checks: false,
            seed: DEFAULT_SEED,
            trials: 4,
        }
    }
}

/// `lim^0..lim^T` of the code over presentations of `group`.
pub fn higher_limits(code: &FrCode, group: &Arc<GroupData>, opts: &LimitOptions) -> Result<LimitsReport> {
    let budget = Budget::new(opts.caps.seconds);
    let top = opts.top_degree.unwrap_or_else(|| code.max_len()).max(1);
    let n = match opts.truncation {
        Some(t) if t < code.faithful_depth() => {
            return Err(Error::Precondition(format!(
                "truncation {t} is below the faithful depth {} of {code}",
                code.faithful_depth()
            )))
        }
        Some(t) => t,
        None => code.faithful_depth(),
    };
    let asm = assemble(code, group, top, n, &opts.caps, &budget)?;
    let moore = asm.object.moore_complex()?;
    let pis = (0..top)
        .into_par_iter()
        .map(|k| moore.cohomology(k).map(|h| h.invariants().clone()))
        .collect::<Result<Vec<_>>>()?;
    budget.check("cohomology")?;
    let mut lims = vec![LimEntry {
        degree: 0,
        group: "0".into(),
        invariants: Invariants::zero(),
    }];
    for (k, inv) in pis.into_iter().enumerate() {
        lims.push(LimEntry {
            degree: k + 1,
            group: inv.to_string(),
            invariants: inv,
        });
    }
    let levels = asm
        .ambients
        .iter()
        .zip(&asm.object.levels)
        .zip(&moore.groups)
        .enumerate()
        .map(|(p, ((a, v), m))| LevelSummary {
            level: p,
            schreier_rank: a.num_schreier(),
            ring_rank: a.dim(),
            value: v.to_string(),
            moore: m.to_string(),
        })
        .collect();
    let moore_vanishing = (1..moore.groups.len())
        .filter(|&k| moore.groups[k].is_zero())
        .collect();
    let mut checks = BTreeMap::new();
    if opts.checks {
        let status = |ok: bool| if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        checks.insert(
            "cosimplicial_identities".into(),
            status(asm.object.check_identities().is_ok()),
        );
        checks.insert(
            "moore_vs_alternate_sum".into(),
            status(moore_matches_alternate(&asm.object, 3.min(top))?),
        );
        checks.insert(
            "decalage".into(),
            status(asm.object.decalage_identity_holds()?),
        );
        checks.insert(
            "equalizer".into(),
            status(asm.object.equalizer()?.invariants() == moore.cohomology(0)?.invariants()),
        );
        checks.insert(
            "cocycles".into(),
            status(cocycle_spotcheck(&asm, 0, opts.trials, opts.seed)?),
        );
        budget.check("checks")?;
    }
    Ok(LimitsReport {
        code: code.to_string(),
        group: group.name().to_string(),
        truncation: n,
        levels,
        lims,
        moore_vanishing,
        checks,
    })
}

/// Degreewise agreement of Moore and alternate-sum cohomology below `upto`.
pub fn moore_matches_alternate(x: &CosimplicialAb, upto: usize) -> Result<bool> {
    let q = x.moore_complex()?;
    let c = x.alternate_sum_complex()?;
    for k in 0..upto.min(x.depth()) {
        if q.cohomology(k)?.invariants() != c.cohomology(k)?.invariants() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random word of length `len` in the letters of `lp`.
fn random_word(rng: &mut ChaCha8Rng, lp: &LevelPresentation, len: usize) -> FreeWord {
    FreeWord::from_syllables((0..len).map(|_| Syllable {
        copy: rng.gen_range(0..lp.copies()),
        gen: rng.gen_range(0..lp.rank()),
        exp: if rng.gen_bool(0.5) { 1 } else { -1 },
    }))
}

/// A random homomorphism from the single-copy base free group into level `lp`
/// commuting with the projections to `G`: generator `x_i` goes to `u·s(ū^{-1}x̄_i)`.
pub fn random_hom_over_g(
    rng: &mut ChaCha8Rng,
    group: &GroupData,
    lp: &LevelPresentation,
    max_len: usize,
) -> FreeHom {
    let images = (0..group.rank())
        .map(|i| {
            let len = rng.gen_range(0..=max_len);
            let u = random_word(rng, lp, len);
            let target = group.mul(group.inv(lp.eval(&u)), group.gen_element(i));
            u.mul(lp.transversal(target))
        })
        .collect();
    FreeHom::new(1, group.rank(), lp.copies(), lp.rank(), images).expect("images fit the level")
}

/// For random `φ_0..φ_{n+1}` into a random level, every `n`-cocycle `x` of the
/// alternate-sum complex satisfies `Σ_j (−1)^j F((φ_0,…,φ̂_j,…,φ_{n+1}))(x) = 0`.
pub fn cocycle_spotcheck(asm: &Assembled, n: usize, trials: usize, seed: u64) -> Result<bool> {
    let x = &asm.object;
    if n >= x.depth() {
        return Err(Error::Precondition(format!("cocycle degree {n} needs level {}", n + 1)));
    }
    let c = x.alternate_sum_complex()?;
    let cocycles = c.diffs[n].kernel_lattice();
    let src_q = &asm.quotients[n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9));
    for _ in 0..trials {
        let target = rng.gen_range(0..asm.ambients.len());
        let (ta, tq) = (&asm.ambients[target], &asm.quotients[target]);
        let phis: Vec<FreeHom> = (0..n + 2)
            .map(|_| random_hom_over_g(&mut rng, &asm.group, ta.level(), 3))
            .collect();
        let maps = (0..n + 2)
            .map(|j| {
                let parts: Vec<FreeHom> = phis
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != j)
                    .map(|(_, p)| p.clone())
                    .collect();
                let h = FreeHom::copair(&parts)?;
                RingMap::new(&asm.ambients[n], ta, &h)
            })
            .collect::<Result<Vec<_>>>()?;
        for z in cocycles.rows() {
            let lift = src_q.lift_vec(z);
            let mut acc: SparseVec = Vec::new();
            for (j, m) in maps.iter().enumerate() {
                let sign = Int::from(if j % 2 == 0 { 1 } else { -1 });
                acc = sparse_add_mul(&acc, &sign, &m.apply(&lift));
            }
            if !tq.group().is_trivial_element(&tq.project(&acc)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Maps `C(B(h))` induced by a base endomorphism `h` over `G` on levels `0..=depth`.
pub fn standard_chain_map(asm: &Assembled, h: &FreeHom) -> Result<Vec<AbMap>> {
    (0..asm.ambients.len())
        .into_par_iter()
        .map(|n| {
            let b = standard_map(h, n)?;
            RingMap::new(&asm.ambients[n], &asm.ambients[n], &b)?
                .induced(&asm.quotients[n], &asm.quotients[n])
        })
        .collect()
}

/// The chain homotopy `Σ (−1)^i k^i : C^{n+1} → C^n` from the explicit
/// cosimplicial homotopy between `B(f)` and `B(g)`.
pub fn chain_homotopy(asm: &Assembled, f: &FreeHom, g: &FreeHom) -> Result<Vec<AbMap>> {
    (0..asm.ambients.len() - 1)
        .into_par_iter()
        .map(|n| {
            let ks = homotopy_maps(f, g, n)?;
            let (src, dst) = (&asm.quotients[n + 1], &asm.quotients[n]);
            let mut acc = AbMap::zero(src.group().clone(), dst.group().clone());
            for (i, k) in ks.iter().enumerate() {
                let m = RingMap::new(&asm.ambients[n + 1], &asm.ambients[n], k)?.induced(src, dst)?;
                acc = acc.add_scaled(&Int::from(if i % 2 == 0 { 1 } else { -1 }), &m)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Verifies `C(B(g)) − C(B(f)) = d k + k d` degreewise, and that the two chain
/// maps agree on cohomology below the top level.
pub fn homotopy_check(asm: &Assembled, f: &FreeHom, g: &FreeHom) -> Result<bool> {
    let c = asm.object.alternate_sum_complex()?;
    let bf = standard_chain_map(asm, f)?;
    let bg = standard_chain_map(asm, g)?;
    let k = chain_homotopy(asm, f, g)?;
    let top = asm.ambients.len() - 1;
    for n in 0..top {
        let diff = bg[n].add_scaled(&Int::from(-1), &bf[n])?;
        let mut rhs = c.diffs[n].compose(&k[n])?;
        if n > 0 {
            rhs = rhs.add_scaled(&Int::ONE, &k[n - 1].compose(&c.diffs[n - 1])?)?;
        }
        if !diff.same_map(&rhs) {
            return Ok(false);
        }
        let incoming = if n == 0 {
            AbMap::zero(FinPresAb::zero(), c.groups[0].clone())
        } else {
            c.diffs[n - 1].clone()
        };
        let h = homology_subquotient(&incoming, &c.diffs[n])?;
        let image = incoming.image_lattice();
        for i in 0..h.ngens() {
            let z = h.lift(i);
            if !image.contains(&diff.apply(z)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
