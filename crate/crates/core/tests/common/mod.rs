//! Brute-force homology of short complexes of finite abelian groups.

use std::collections::HashSet;

use frlim::intlin::hnf::sparse_from_dense;
use frlim::intlin::{homology_at, AbMap, FinPresAb, Int};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A finite abelian group `⊕ Z/m_i` enumerated by brute force.
pub struct Finite {
    pub moduli: Vec<i64>,
}

impl Finite {
    fn size(&self) -> usize {
        self.moduli.iter().product::<i64>() as usize
    }

    fn element(&self, mut idx: usize) -> Vec<i64> {
        self.moduli
            .iter()
            .map(|&m| {
                let x = idx % m as usize;
                idx /= m as usize;
                x as i64
            })
            .collect()
    }

    fn normalize(&self, v: &[i64]) -> Vec<i64> {
        v.iter().zip(&self.moduli).map(|(x, m)| x.rem_euclid(*m)).collect()
    }

    fn presentation(&self) -> FinPresAb {
        let rels: Vec<_> = self.moduli.iter().enumerate().map(|(i, m)| vec![(i, Int::from(*m))]).collect();
        FinPresAb::from_relations(self.moduli.len(), &rels)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Images `maps[i]` of generator `i` of `src`, each killed by the source modulus.
fn random_map(rng: &mut ChaCha8Rng, src: &Finite, dst: &Finite) -> Vec<Vec<i64>> {
    src.moduli
        .iter()
        .map(|&a| dst.moduli.iter().map(|&b| rng.gen_range(0..12) * (b / gcd(a, b))).collect())
        .collect()
}

fn apply(images: &[Vec<i64>], x: &[i64], dst: &Finite) -> Vec<i64> {
    let mut out = vec![0; dst.moduli.len()];
    for (xi, img) in x.iter().zip(images) {
        for (o, y) in out.iter_mut().zip(img) {
            *o += xi * y;
        }
    }
    dst.normalize(&out)
}

fn to_abmap(images: &[Vec<i64>], src: &Finite, dst: &Finite) -> AbMap {
    let imgs = images.iter().map(|v| sparse_from_dense(&v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>())).collect();
    AbMap::new(src.presentation(), dst.presentation(), imgs).unwrap()
}

pub fn random_finite(rng: &mut ChaCha8Rng, max_gens: usize, max_size: usize) -> Finite {
    loop {
        let n = rng.gen_range(1..=max_gens);
        let f = Finite { moduli: (0..n).map(|_| rng.gen_range(2..=12)).collect() };
        if f.size() <= max_size {
            return f;
        }
    }
}

/// One random complex `A → B → C` with at most four cyclic generators per group
/// and moduli up to 12; compares `homology_at` with enumeration through the
/// counts `|H[d]|` of `d`-torsion elements, which determine a finite abelian group.
pub fn homology_trial(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let a = random_finite(rng, 2, 144);
    let b = random_finite(rng, 4, 6000);
    let c = random_finite(rng, 3, 1728);
    let g = random_map(rng, &b, &c);
    let kernel: Vec<Vec<i64>> = (0..b.size()).map(|i| b.element(i)).filter(|x| apply(&g, x, &c).iter().all(|&y| y == 0)).collect();
    let f: Vec<Vec<i64>> = a
        .moduli
        .iter()
        .map(|&m| {
            let torsion: Vec<&Vec<i64>> = kernel.iter().filter(|x| b.normalize(&x.iter().map(|v| v * m).collect::<Vec<_>>()).iter().all(|&y| y == 0)).collect();
            torsion[rng.gen_range(0..torsion.len())].clone()
        })
        .collect();
    let image: HashSet<Vec<i64>> = (0..a.size()).map(|i| apply(&f, &a.element(i), &b)).collect();
    let h = homology_at(&to_abmap(&f, &a, &b), &to_abmap(&g, &b, &c)).map_err(|e| e.to_string())?;
    let h = h.invariants();
    let tag = format!("A {:?} B {:?} C {:?}", a.moduli, b.moduli, c.moduli);
    if h.rank != 0 {
        return Err(format!("{tag}: infinite homology"));
    }
    let exponent = b.moduli.iter().fold(1, |l, &m| l / gcd(l, m) * m);
    for d in (1..=exponent).filter(|d| exponent % d == 0) {
        let count = kernel
            .iter()
            .filter(|x| image.contains(&b.normalize(&x.iter().map(|v| v * d).collect::<Vec<_>>())))
            .count()
            / image.len();
        let expect: i64 = h.torsion.iter().map(|t| gcd(d, t.to_i64().unwrap())).product();
        if count as i64 != expect {
            return Err(format!("{tag}: {count} elements killed by {d}, homology {h}"));
        }
    }
    Ok(())
}
