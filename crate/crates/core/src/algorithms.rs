//! Query algorithms that run against an [`OracleSession`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::{EdgeQuery, KnowledgeState, OracleSession, Transcript};
use crate::tournament::{pairs, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Found,
    NotFound,
    CertifiedMod,
}

/// Result of running an algorithm to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmRun {
    pub claimed: Option<VertexId>,
    pub transcript: Transcript,
    pub outcome: Outcome,
}

impl AlgorithmRun {
    pub fn q(&self) -> usize {
        self.transcript.q()
    }

    fn finish(session: &OracleSession, claimed: Option<VertexId>, outcome: Outcome) -> Self {
        AlgorithmRun {
            claimed,
            transcript: session.transcript().clone(),
            outcome,
        }
    }
}

/// The order in which the certified MOD search asks about pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum QueryOrder {
    #[default]
    Lexicographic,
    /// Round by round, each round a maximum matching (circle method).
    RoundRobin,
    /// A uniformly shuffled lexicographic order.
    Random(u64),
    /// Caller-supplied; pairs it omits are appended lexicographically.
    Custom(Vec<EdgeQuery>),
}

impl QueryOrder {
    pub fn sequence(&self, n: usize) -> Vec<EdgeQuery> {
        let lex = || pairs(n).map(|(u, v)| EdgeQuery { u, v });
        match self {
            QueryOrder::Lexicographic => lex().collect(),
            QueryOrder::RoundRobin => round_robin(n),
            QueryOrder::Random(seed) => {
                let mut order: Vec<_> = lex().collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
                order
            }
            QueryOrder::Custom(given) => {
                let mut seen = std::collections::HashSet::new();
                let mut order: Vec<_> = given
                    .iter()
                    .copied()
                    .filter(|e| e.v < n && seen.insert(*e))
                    .collect();
                order.extend(lex().filter(|e| !seen.contains(e)));
                order
            }
        }
    }
}

fn round_robin(n: usize) -> Vec<EdgeQuery> {
    // Circle method on an even number of seats; seat `n` is a bye when n is odd.
    let seats = n + n % 2;
    let mut order = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    if seats < 2 {
        return order;
    }
    let ring = seats - 1;
    for round in 0..ring {
        let mut push = |a: usize, b: usize| {
            if a < n && b < n {
                order.push(EdgeQuery::between(a, b));
            }
        };
        push(round, seats - 1);
        for i in 1..seats / 2 {
            push((round + i) % ring, (round + ring - i) % ring);
        }
    }
    order
}

/// Single-elimination rounds: survivors are paired in ascending order, an
/// odd survivor gets a bye, and each loser is dropped. Uses exactly `n - 1`
/// inquiries and returns the last survivor.
pub fn knockout(session: &mut OracleSession) -> Result<Option<VertexId>> {
    let mut alive: Vec<VertexId> = (0..session.n()).collect();
    while alive.len() > 1 {
        let mut next = Vec::with_capacity(alive.len().div_ceil(2));
        for pair in alive.chunks(2) {
            match *pair {
                [a, b] => next.push(session.query(EdgeQuery::between(a, b))?.from),
                [a] => next.push(a),
                _ => unreachable!(),
            }
        }
        alive = next;
    }
    Ok(alive.first().copied())
}

/// Decides whether the tournament has a vertex of in-degree zero with fewer
/// than `2n` inquiries: a knockout leaves one candidate `z`, then every pair
/// at `z` not already known is asked.
pub fn find_zero_indegree(session: &mut OracleSession) -> Result<AlgorithmRun> {
    let Some(z) = knockout(session)? else {
        return Ok(AlgorithmRun::finish(session, None, Outcome::NotFound));
    };
    for w in (0..session.n()).filter(|&w| w != z) {
        let e = EdgeQuery::between(z, w);
        if !session.knowledge().is_known(e) {
            session.query(e)?;
        }
    }
    Ok(if session.knowledge().d_minus(z) == 0 {
        AlgorithmRun::finish(session, Some(z), Outcome::Found)
    } else {
        AlgorithmRun::finish(session, None, Outcome::NotFound)
    })
}

/// Asks every pair in lexicographic order and claims the lowest-index
/// vertex of maximum out-degree.
pub fn find_mod_exhaustive(session: &mut OracleSession) -> Result<AlgorithmRun> {
    let n = session.n();
    for (u, v) in pairs(n) {
        session.query(EdgeQuery { u, v })?;
    }
    let k = session.knowledge();
    let best = k.d_plus_all().iter().max().copied();
    let claimed = (0..n).find(|&v| Some(k.d_plus(v)) == best);
    Ok(AlgorithmRun::finish(session, claimed, Outcome::Found))
}

/// Asks pairs in `order` and stops as soon as some vertex is an MOD vertex
/// of every completion of what is known.
pub fn find_mod_certified(session: &mut OracleSession, order: &QueryOrder) -> Result<AlgorithmRun> {
    let n = session.n();
    for e in std::iter::once(None).chain(order.sequence(n).into_iter().map(Some)) {
        if let Some(e) = e {
            if session.knowledge().is_known(e) {
                continue;
            }
            session.query(e)?;
        }
        if let Some(x) = certified_mod_vertex(session.knowledge()) {
            return Ok(AlgorithmRun::finish(session, Some(x), Outcome::CertifiedMod));
        }
    }
    Ok(AlgorithmRun::finish(session, None, Outcome::NotFound))
}

/// The lowest-index vertex that is an MOD vertex of every completion.
///
/// A rival `y` can reach at most `n - 1 - d_minus(y)` out-arcs while `x`
/// can be held to `d_plus(x)`, and both extremes are realised by a single
/// completion, so the test `d_plus(x) + d_minus(y) >= n - 1` for all
/// `y != x` is exact.
pub fn certified_mod_vertex(k: &KnowledgeState) -> Option<VertexId> {
    certify_from_degrees(k.d_plus_all(), k.d_minus_all())
}

/// [`certified_mod_vertex`] on bare known-degree vectors.
pub fn certify_from_degrees(d_plus: &[usize], d_minus: &[usize]) -> Option<VertexId> {
    let n = d_plus.len();
    if n == 0 {
        return None;
    }
    // Two smallest known in-degrees, with the argmin of the first.
    let (mut lo, mut lo_at, mut second) = (usize::MAX, usize::MAX, usize::MAX);
    for (v, &d) in d_minus.iter().enumerate() {
        if d < lo {
            second = lo;
            lo = d;
            lo_at = v;
        } else if d < second {
            second = d;
        }
    }
    (0..n).find(|&x| {
        let weakest_rival = if x == lo_at { second } else { lo };
        weakest_rival == usize::MAX || d_plus[x] + weakest_rival >= n - 1
    })
}

fn certifies(k: &KnowledgeState, x: VertexId) -> bool {
    let n = k.n();
    (0..n).all(|y| y == x || k.d_plus(x) + k.d_minus(y) >= n - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// MOD in every completion.
    Sound,
    Refutable,
}

/// Judges a claim from known degrees alone.
pub fn verify_claim(k: &KnowledgeState, claimed: VertexId) -> Verdict {
    if certifies(k, claimed) {
        Verdict::Sound
    } else {
        Verdict::Refutable
    }
}

/// Judges a claim by enumerating every completion.
pub fn verify_claim_exhaustive(
    k: &KnowledgeState,
    claimed: VertexId,
    threshold: usize,
) -> Result<Verdict> {
    let mut completions = k.completions_within(threshold)?;
    Ok(if completions.all(|t| t.mod_vertices().contains(&claimed)) {
        Verdict::Sound
    } else {
        Verdict::Refutable
    })
}
