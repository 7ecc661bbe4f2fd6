//! Command-line front end: `limits`, `verify` and `selftest`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frcode::parse;
use crate::limits::{higher_limits, Caps, LimitOptions, DEFAULT_SEED};
use crate::oracle::{dictionary::CellStatus, verify, Dictionary, Tier};
use crate::permgrp::resolve_group;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub const DEFAULT_VERIFY_GROUPS: &str = "trivial,z2,z3,z4";

#[derive(Parser, Debug)]
#[command(name = "frlim", version, about = "Higher limits of fr-codes over free presentations of finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute lim^0..lim^T of one code over one group.
    Limits(LimitsArgs),
    /// Compare dictionary rows against the computation on a set of groups.
    Verify(VerifyArgs),
    /// Run the seeded property suites.
    Selftest(SelftestArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Seed for all randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum group order, and maximum coset count at any level.
    #[arg(long, default_value_t = Caps::default().elements, value_parser = positive)]
    pub cap_elements: usize,
    /// Maximum lattice rank of a truncated ring.
    #[arg(long, default_value_t = Caps::default().rank, value_parser = positive)]
    pub cap_rank: usize,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = Caps::default().seconds, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_seconds: u64,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            elements: self.cap_elements,
            rank: self.cap_rank,
            seconds: self.cap_seconds,
        }
    }
}

#[derive(Args, Debug)]
pub struct LimitsArgs {
    #[arg(long)]
    pub code: String,
    /// Group spec file, or a bundled group name (trivial, z2, z3, z4, z2xz2, s3, z2_rank2).
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_parser = positive)]
    pub top_degree: Option<usize>,
    /// Truncation depth N of the group ring; defaults to the faithful depth of the code.
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Random cocycle spot checks; 0 disables all structural checks.
    #[arg(long, default_value_t = 4)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated dictionary codes; all rows by default.
    #[arg(long)]
    pub rows: Option<String>,
    /// Comma-separated group files or bundled names.
    #[arg(long, default_value = DEFAULT_VERIFY_GROUPS)]
    pub groups: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 100, value_parser = positive)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

fn render<T: Serialize>(value: &T, text: impl FnOnce() -> String, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    })
}

fn emit(common: &Common, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn cmd_limits(args: &LimitsArgs, stdout: &mut dyn Write) -> Result<i32> {
    let code = parse(&args.code)?;
    let caps = args.common.caps();
    let group = args
        .group
        .as_deref()
        .ok_or_else(|| Error::Malformed("--group is required".into()))?;
    let group = Arc::new(resolve_group(group, caps.elements)?);
    let opts = LimitOptions {
        top_degree: args.top_degree,
        truncation: args.truncation,
        caps,
        checks: args.trials > 0,
        seed: args.common.seed,
        trials: args.trials,
    };
    let report = higher_limits(&code, &group, &opts)?;
    let body = render(&report, || report.to_text(), args.common.format)?;
    emit(&args.common, &body, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let caps = args.common.caps();
    let dict = Dictionary::builtin();
    let codes = args.rows.as_deref().map(split_list);
    let rows = dict.select(codes.as_deref())?;
    let groups = split_list(&args.groups)
        .iter()
        .map(|g| resolve_group(g, caps.elements).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    if groups.is_empty() {
        return Err(Error::Malformed("no groups given".into()));
    }
    let opts = LimitOptions {
        caps,
        seed: args.common.seed,
        ..Default::default()
    };
    let matrix = verify(&rows, &groups, &opts)?;
    let body = render(&matrix, || matrix.to_text(), args.common.format)?;
    emit(&args.common, &body, stdout)?;
    let full_failed = matrix
        .cells
        .iter()
        .any(|c| c.tier == Tier::Full && matches!(c.status, CellStatus::Fail | CellStatus::Error));
    Ok(if full_failed { EXIT_VERIFY } else { EXIT_OK })
}

fn cmd_selftest(args: &SelftestArgs, stdout: &mut dyn Write) -> Result<i32> {
    let report = crate::selftest::run(args.common.seed, args.trials)?;
    let body = render(&report, || report.to_text(), args.common.format)?;
    emit(&args.common, &body, stdout)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Limits(a) => cmd_limits(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Selftest(a) => cmd_selftest(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_cap() {
                EXIT_CAP
            } else {
                EXIT_INPUT
            }
        }
    }
}
