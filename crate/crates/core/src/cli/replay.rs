//! Re-running stored transcripts and strategy trees.

use crate::error::Result;
use crate::exact::StrategyTree;
use crate::oracle::{EdgeQuery, OracleSession, Transcript};
use crate::tournament::{Arc, Tournament};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptReplay {
    pub q: usize,
    /// Query, recorded answer, fresh answer.
    pub mismatches: Vec<(EdgeQuery, Arc, Arc)>,
}

/// Re-asks every recorded query of `transcript` on `session`.
pub fn replay_transcript(transcript: &Transcript, session: &mut OracleSession) -> Result<TranscriptReplay> {
    let mut mismatches = Vec::new();
    for &(e, recorded) in transcript.records() {
        let fresh = session.query(e)?;
        if fresh != recorded {
            mismatches.push((e, recorded, fresh));
        }
    }
    Ok(TranscriptReplay {
        q: session.q(),
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyReplay {
    pub tournaments: usize,
    pub worst_q: usize,
    /// Codes of tournaments that received a wrong answer.
    pub failures: Vec<u64>,
}

/// Runs `tree` against every tournament on `n` vertices.
pub fn replay_strategy(tree: &StrategyTree, n: usize) -> Result<StrategyReplay> {
    let mut report = StrategyReplay {
        tournaments: 0,
        worst_q: 0,
        failures: Vec::new(),
    };
    for t in Tournament::all(n)? {
        let (answer, q) = tree.run(&t);
        report.tournaments += 1;
        report.worst_q = report.worst_q.max(q);
        if !answer.is_correct_for(&t) {
            report.failures.push(t.code());
        }
    }
    Ok(report)
}
