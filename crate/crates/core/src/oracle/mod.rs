//! Independent evaluation of the closed-form right-hand sides: group homology
//! through the Gruenberg resolution, augmentation-ideal functors, `Tor`, and
//! the machine-readable dictionary.

pub mod dictionary;
pub mod gruenberg;
pub mod rhs;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::frcode::parse;
use crate::intlin::abgroup::{AbMap, FinPresAb, Invariants, SubQuotient};
use crate::intlin::gmodule::{abelianization, GModule};
use crate::permgrp::{GroupData, LevelPresentation};
use crate::truncring::Ambient;

pub use dictionary::{verify, Dictionary, DictionaryRow, Tier, VerificationCell, VerificationMatrix};
pub use gruenberg::{GruenbergResolution, ZgMatrix};
pub use rhs::{Rhs, RhsValue};

/// Per-group cache of resolutions and the small modules the dictionary uses.
pub struct Oracle {
    group: Arc<GroupData>,
    rank_cap: usize,
    resolutions: Mutex<HashMap<usize, Arc<GruenbergResolution>>>,
    projection: AbMap,
}

impl Oracle {
    pub fn new(group: Arc<GroupData>, rank_cap: usize) -> Result<Self> {
        let projection = abelianization(&group)?;
        Ok(Oracle {
            group,
            rank_cap,
            resolutions: Mutex::new(HashMap::new()),
            projection,
        })
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    /// A resolution of depth at least `depth` (and at least 3).
    pub fn resolution(&self, depth: usize) -> Result<Arc<GruenbergResolution>> {
        let depth = depth.max(3);
        if let Some(r) = self
            .resolutions
            .lock()
            .expect("resolution cache")
            .iter()
            .filter(|(d, _)| **d >= depth)
            .min_by_key(|(d, _)| **d)
        {
            return Ok(r.1.clone());
        }
        let res = Arc::new(GruenbergResolution::new(&self.group, depth, self.rank_cap)?);
        self.resolutions
            .lock()
            .expect("resolution cache")
            .insert(depth, res.clone());
        Ok(res)
    }

    /// `G_ab = g/g^2`.
    pub fn gab(&self) -> &FinPresAb {
        self.projection.dst()
    }

    /// The projection `g → G_ab` on the basis of `g`.
    pub fn gab_projection(&self) -> &AbMap {
        &self.projection
    }

    pub fn trivial(&self, a: FinPresAb) -> GModule {
        GModule::trivial(self.group.clone(), a)
    }

    /// `H_n(G, M)`.
    pub fn homology(&self, n: usize, m: &GModule) -> Result<FinPresAb> {
        self.resolution(n + 1)?.homology(n, m)
    }

    /// `H_n(G) = H_n(G, Z)`.
    pub fn integral_homology(&self, n: usize) -> Result<FinPresAb> {
        self.homology(n, &self.trivial(FinPresAb::free(1)))
    }
}

fn base_ambient(group: &Arc<GroupData>, n: usize, rank_cap: usize) -> Result<Ambient> {
    let lp = Arc::new(LevelPresentation::new(group, 0));
    Ambient::new(group.clone(), lp, n, rank_cap)
}

/// `(r∩ff)/(fr+rf)` for the base presentation, which is `H_2(G)` by Hopf's formula.
pub fn hopf_multiplier(group: &Arc<GroupData>, rank_cap: usize) -> Result<Invariants> {
    let amb = base_ambient(group, 2, rank_cap)?;
    let outer = amb.eval_code(&parse("r∩ff")?)?;
    let inner = amb.eval_code(&parse("fr+rf")?)?;
    Ok(SubQuotient::new(&outer, &inner)?.group().invariants().clone())
}

/// `(ffff + c)/c` for `c = ffr+rff`, isomorphic to `ffff/(c ∩ ffff)`.
pub fn sim_quotient(group: &Arc<GroupData>, rank_cap: usize) -> Result<Invariants> {
    lattice_quotient(group, 3, "ffff+ffr+rff", "ffr+rff", rank_cap)
}

/// `(r+ff)^2/(rr+rff+ffr)`.
pub fn approx_quotient(group: &Arc<GroupData>, rank_cap: usize) -> Result<Invariants> {
    lattice_quotient(group, 2, "ffff+rr+rff+ffr", "rr+rff+ffr", rank_cap)
}

fn lattice_quotient(group: &Arc<GroupData>, n: usize, outer: &str, inner: &str, rank_cap: usize) -> Result<Invariants> {
    let amb = base_ambient(group, n, rank_cap)?;
    let outer = amb.eval_code(&parse(outer)?)?;
    let inner = amb.eval_code(&parse(inner)?)?;
    Ok(SubQuotient::new(&outer, &inner)?.group().invariants().clone())
}
