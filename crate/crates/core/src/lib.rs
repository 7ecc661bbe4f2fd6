//! Higher limits of fr-codes over the category of free presentations of a
//! finite group, computed through the standard cosimplicial complex, with an
//! independent homological oracle for the closed-form dictionary.

pub mod cli;
pub mod error;
pub mod frcode;
pub mod freegrp;
pub mod intlin;
pub mod limits;
pub mod oracle;
pub mod permgrp;
pub mod selftest;
pub mod truncring;

pub use error::{Error, Result};
