//! Experiment runner and interop surface behind the `modsearch` binary.

pub mod experiment;
pub mod protocol;
pub mod random;
pub mod replay;
pub mod table;

use std::fmt;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

pub use experiment::{run_experiment, write_rows, ExperimentConfig, ResultRow};
pub use protocol::serve;
pub use random::{generate_random_tournament, splitmix64};
pub use table::{bound_rows, emit_bound_table, BoundRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmName {
    ZeroIndegree,
    ModExhaustive,
    ModCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    StaticRandom,
    StaticFile,
    Adversary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Query order for `mod-certified`; `random` is seeded per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, ValueEnum)]
pub enum OrderKind {
    #[default]
    Lex,
    RoundRobin,
    Random,
}

fn kebab(v: &impl ValueEnum) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

impl fmt::Display for AlgorithmName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&kebab(self))
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&kebab(self))
    }
}
