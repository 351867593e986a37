use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::random::{generate_random_tournament, splitmix64};
use super::{AlgorithmName, Format, OracleKind, OrderKind};
use crate::adversary::{mod_lower_bound, Adversary};
use crate::algorithms::{find_mod_certified, find_mod_exhaustive, find_zero_indegree, QueryOrder};
use crate::error::{Error, Result};
use crate::oracle::OracleSession;
use crate::tournament::{pair_count, Tournament, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub algorithm: AlgorithmName,
    pub oracle: OracleKind,
    /// Fixture for `static-file` oracles.
    pub file: Option<PathBuf>,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
    pub order: OrderKind,
}

impl ExperimentConfig {
    pub fn new(n: usize, algorithm: AlgorithmName, oracle: OracleKind) -> Self {
        ExperimentConfig {
            n,
            algorithm,
            oracle,
            file: None,
            seed: 0,
            trials: 1,
            format: Format::Csv,
            order: OrderKind::Lex,
        }
    }
}

/// One trial. CSV columns follow the field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultRow {
    pub n: usize,
    pub algorithm: AlgorithmName,
    pub oracle: OracleKind,
    pub seed: u64,
    pub q: usize,
    pub bound: usize,
    pub claimed: Option<VertexId>,
    pub correct: bool,
}

/// Seed of trial `t`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    splitmix64(seed.wrapping_add(t as u64))
}

/// Runs every trial; rows come back in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if cfg.n == 0 {
        return Err(Error::InvalidOrder {
            n: 0,
            reason: "experiments need n >= 1",
        });
    }
    if cfg.trials == 0 {
        return Err(Error::parse(0, "trials must be at least 1"));
    }
    let fixture = match cfg.oracle {
        OracleKind::StaticFile => {
            let path = cfg
                .file
                .as_ref()
                .ok_or_else(|| Error::parse(0, "static-file oracle needs --file"))?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))?;
            let t: Tournament = text.parse()?;
            if t.n() != cfg.n {
                return Err(Error::parse(
                    0,
                    format!("fixture has n = {} but --n is {}", t.n(), cfg.n),
                ));
            }
            Some(t)
        }
        _ => None,
    };
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, fixture.as_ref(), trial_seed(cfg.seed, t)))
        .collect()
}

fn run_trial(cfg: &ExperimentConfig, fixture: Option<&Tournament>, seed: u64) -> Result<ResultRow> {
    let mut session = match cfg.oracle {
        OracleKind::StaticRandom => {
            OracleSession::open_static(generate_random_tournament(cfg.n, seed), None)?
        }
        OracleKind::StaticFile => {
            OracleSession::open_static(fixture.expect("loaded").clone(), None)?
        }
        OracleKind::Adversary => OracleSession::open_adversary(Adversary::new(cfg.n)?, None)?,
    };
    let order = match cfg.order {
        OrderKind::Lex => QueryOrder::Lexicographic,
        OrderKind::RoundRobin => QueryOrder::RoundRobin,
        OrderKind::Random => QueryOrder::Random(seed),
    };
    let run = match cfg.algorithm {
        AlgorithmName::ZeroIndegree => find_zero_indegree(&mut session)?,
        AlgorithmName::ModExhaustive => find_mod_exhaustive(&mut session)?,
        AlgorithmName::ModCertified => find_mod_certified(&mut session, &order)?,
    };
    let truth = session.hidden();
    let correct = match cfg.algorithm {
        AlgorithmName::ZeroIndegree => run.claimed == truth.zero_indegree_vertex(),
        _ => run
            .claimed
            .is_some_and(|x| truth.mod_vertices().contains(&x)),
    };
    debug_assert!(run.q() <= pair_count(cfg.n));
    Ok(ResultRow {
        n: cfg.n,
        algorithm: cfg.algorithm,
        oracle: cfg.oracle,
        seed,
        q: run.q(),
        bound: mod_lower_bound(cfg.n),
        claimed: run.claimed,
        correct,
    })
}

/// CSV with a header row, or a JSON array.
pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: impl Write) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
