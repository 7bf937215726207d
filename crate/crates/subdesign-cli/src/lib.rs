//! Command-line driver: constructions, certifications, reports and the file formats.

pub mod commands;
pub mod formats;
pub mod repro;

use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

/// Settings shared by every verb.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub enumeration_cap: u64,
    /// Worker threads for chunked sweeps; `None` uses all cores.
    pub threads: Option<usize>,
    /// Seed for sampling modes.
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { enumeration_cap: subdesign::subspace::DEFAULT_ENUMERATION_CAP, threads: None, seed: 7, output: None }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
    #[error("{module}: {message}")]
    Module { module: &'static str, kind: String, message: String },
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    /// 1 for failed checks and module errors, 2 for usage, i/o and format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Module { .. } | CliError::Check(_) => 1,
            CliError::Usage(_) | CliError::Io(_) | CliError::Format(_) => 2,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (kind, module) = match self {
            CliError::Usage(_) => ("Usage".to_string(), "cli"),
            CliError::Io(_) => ("Io".to_string(), "cli"),
            CliError::Format(_) => ("Format".to_string(), "cli"),
            CliError::Module { module, kind, .. } => (kind.clone(), *module),
            CliError::Check(_) => ("CheckFailed".to_string(), "cli"),
        };
        json!({ "error": { "module": module, "kind": kind, "message": self.to_string(), "exit_code": self.exit_code() } })
    }
}

/// Variant name of a `Debug`-printed error enum.
fn variant_name<E: std::fmt::Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    let end = text.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(text.len());
    text[..end].to_string()
}

macro_rules! module_error {
    ($($ty:ty => $name:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Module { module: $name, kind: variant_name(&e), message: e.to_string() }
            }
        })*
    };
}

module_error! {
    subdesign::gf::GfError => "gf",
    subdesign::subspace::SubspaceError => "subspace",
    subdesign::skewpoly::SkewError => "skewpoly",
    subdesign::design::DesignError => "design",
    subdesign::sumrank::SumRankError => "sumrank",
    subdesign::hamming::HammingError => "hamming",
    subdesign::strongbridge::StrongError => "strongbridge",
    subdesign::expander::ExpanderError => "expander",
}
