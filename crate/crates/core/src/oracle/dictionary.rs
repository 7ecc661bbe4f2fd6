//! The dictionary of closed forms and the verification matrix comparing it
//! against the standard-complex computation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frcode::{parse, FrCode};
use crate::limits::{higher_limits, LimitOptions};
use crate::permgrp::GroupData;

use super::rhs::Rhs;
use super::Oracle;

const BUILTIN: &str = include_str!("../../data/dictionary.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    #[serde(rename = "FULL")]
    Full,
    #[serde(rename = "ORDER")]
    Order,
    #[serde(rename = "SKIP")]
    Skip,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DictionaryRow {
    pub code: String,
    pub rhs: BTreeMap<String, String>,
    pub tier: BTreeMap<String, Tier>,
    pub quote: String,
}

impl DictionaryRow {
    pub fn parsed_code(&self) -> Result<FrCode> {
        parse(&self.code)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.tier.keys().filter_map(|k| k.parse().ok()).collect();
        d.sort_unstable();
        d
    }

    pub fn tier_at(&self, degree: usize) -> Option<Tier> {
        self.tier.get(&degree.to_string()).copied()
    }

    pub fn rhs_at(&self, degree: usize) -> Option<&str> {
        self.rhs.get(&degree.to_string()).map(String::as_str)
    }
}

#[derive(Clone, Debug)]
pub struct Dictionary {
    rows: Vec<DictionaryRow>,
}

impl Dictionary {
    pub fn builtin() -> Self {
        Dictionary::from_json(BUILTIN).expect("bundled dictionary is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rows: Vec<DictionaryRow> = serde_json::from_str(text)?;
        for r in &rows {
            r.parsed_code()?;
            for d in r.degrees() {
                if r.rhs_at(d).is_none() {
                    return Err(Error::Malformed(format!("row {} has no value in degree {d}", r.code)));
                }
                if r.tier_at(d) != Some(Tier::Skip) {
                    Rhs::parse(r.rhs_at(d).unwrap())?;
                }
            }
        }
        Ok(Dictionary { rows })
    }

    pub fn rows(&self) -> &[DictionaryRow] {
        &self.rows
    }

    /// Row whose code equals `code` after parsing.
    pub fn row(&self, code: &FrCode) -> Option<&DictionaryRow> {
        self.rows
            .iter()
            .find(|r| r.parsed_code().map(|c| &c == code).unwrap_or(false))
    }

    /// Rows selected by code text; `None` selects all.
    pub fn select(&self, codes: Option<&[String]>) -> Result<Vec<&DictionaryRow>> {
        match codes {
            None => Ok(self.rows.iter().collect()),
            Some(codes) => codes
                .iter()
                .map(|c| {
                    let code = parse(c)?;
                    self.row(&code)
                        .ok_or_else(|| Error::Malformed(format!("no dictionary row for {c}")))
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Pass,
    Fail,
    Skip,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationCell {
    pub code: String,
    pub group: String,
    pub degree: usize,
    pub tier: Tier,
    pub status: CellStatus,
    pub computed: String,
    pub expected: String,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationMatrix {
    pub cells: Vec<VerificationCell>,
}

impl VerificationMatrix {
    pub fn all_ok(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.status, CellStatus::Pass | CellStatus::Skip))
    }

    pub fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:<8} {:>3}  {:<5}  {:<6}  {:<24}  expected",
            "code", "group", "deg", "tier", "status", "computed"
        );
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{:<16} {:<8} {:>3}  {:<5}  {:<6}  {:<24}  {}",
                c.code,
                c.group,
                c.degree,
                format!("{:?}", c.tier).to_uppercase(),
                format!("{:?}", c.status).to_lowercase(),
                c.computed,
                c.expected
            );
        }
        let _ = writeln!(
            out,
            "pass {}  fail {}  skip {}  error {}",
            self.count(CellStatus::Pass),
            self.count(CellStatus::Fail),
            self.count(CellStatus::Skip),
            self.count(CellStatus::Error)
        );
        out
    }
}

/// Compares every (row, group, degree) cell; each (row, group) pair is independent.
pub fn verify(
    rows: &[&DictionaryRow],
    groups: &[Arc<GroupData>],
    opts: &LimitOptions,
) -> Result<VerificationMatrix> {
    let oracles = groups
        .iter()
        .map(|g| Oracle::new(g.clone(), opts.caps.rank).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(&DictionaryRow, &Arc<Oracle>)> = rows
        .iter()
        .flat_map(|r| oracles.iter().map(move |o| (*r, o)))
        .collect();
    let cells = pairs
        .par_iter()
        .map(|(row, oracle)| verify_pair(row, oracle, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationMatrix {
        cells: cells.into_iter().flatten().collect(),
    })
}

fn verify_pair(row: &DictionaryRow, oracle: &Oracle, opts: &LimitOptions) -> Result<Vec<VerificationCell>> {
    let start = Instant::now();
    let code = row.parsed_code()?;
    let degrees = row.degrees();
    let needs_limits = degrees.iter().any(|&d| row.tier_at(d) != Some(Tier::Skip));
    let top = degrees.iter().copied().max().unwrap_or(1);
    let report = if needs_limits {
        let mut o = opts.clone();
        o.top_degree = Some(top);
        o.checks = false;
        Some(higher_limits(&code, oracle.group(), &o))
    } else {
        None
    };
    let report = match report {
        Some(Err(e)) if e.is_cap() => return Err(e),
        other => other,
    };
    let mut cells = Vec::new();
    for d in degrees {
        let tier = row.tier_at(d).expect("degree listed");
        let text = row.rhs_at(d).expect("validated").to_string();
        let mut cell = VerificationCell {
            code: row.code.clone(),
            group: oracle.group().name().to_string(),
            degree: d,
            tier,
            status: CellStatus::Skip,
            computed: String::new(),
            expected: text.clone(),
            seconds: 0.0,
        };
        if tier != Tier::Skip {
            match report.as_ref().expect("computed for non-skip rows") {
                Err(e) => {
                    cell.status = CellStatus::Error;
                    cell.computed = e.to_string();
                }
                Ok(rep) => {
                    let computed = rep.lim(d).expect("degree within the report").clone();
                    cell.computed = computed.to_string();
                    match Rhs::parse(&text).and_then(|r| r.evaluate(oracle)) {
                        Ok(v) => {
                            cell.expected = v.to_string();
                            cell.status = if v.matches(&computed) { CellStatus::Pass } else { CellStatus::Fail };
                        }
                        Err(e) => {
                            cell.status = CellStatus::Error;
                            cell.expected = e.to_string();
                        }
                    }
                }
            }
        }
        cells.push(cell);
    }
    let secs = start.elapsed().as_secs_f64();
    for c in &mut cells {
        c.seconds = secs;
    }
    Ok(cells)
}
