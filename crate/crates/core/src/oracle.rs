//! The binary-inquiry protocol.
//!
//! An [`OracleSession`] answers edge-orientation questions either from a
//! fixed tournament or through an [`Adversary`], counts fresh inquiries,
//! records the [`Transcript`] and keeps a [`KnowledgeState`] with the known
//! out/in-degree tallies of every vertex.

use std::fmt;
use std::str::FromStr;

use crate::adversary::{self, Adversary, Refutation};
use crate::error::{Error, Result};
use crate::tournament::{pair_at, pair_count, pair_index, parse_arc, Arc, Tournament, VertexId};

/// Completions are enumerated only up to this many unknown pairs.
pub const DEFAULT_ENUMERATION_THRESHOLD: usize = 20;

/// A question about the canonical pair `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeQuery {
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeQuery {
    /// Accepts only canonically ordered pairs.
    pub fn new(u: VertexId, v: VertexId) -> Result<Self> {
        if u < v {
            Ok(EdgeQuery { u, v })
        } else {
            Err(Error::NonCanonicalPair { u, v })
        }
    }

    /// The query for the pair `{a, b}`, whichever order it is given in.
    pub fn between(a: VertexId, b: VertexId) -> Self {
        debug_assert_ne!(a, b);
        EdgeQuery {
            u: a.min(b),
            v: a.max(b),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.u >= self.v {
            return Err(Error::NonCanonicalPair {
                u: self.u,
                v: self.v,
            });
        }
        if self.v >= n {
            return Err(Error::VertexOutOfRange { vertex: self.v, n });
        }
        Ok(())
    }
}

/// What is known about one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PairState {
    #[default]
    Unknown,
    /// `u -> v` for the canonical pair `(u, v)`.
    Forward,
    /// `v -> u`.
    Backward,
}

/// The per-pair tri-state view of a partially revealed tournament, with
/// cached known out-degree `d_plus`, known in-degree `d_minus` and the
/// number of revealed pairs `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KnowledgeState {
    n: usize,
    pairs: Vec<PairState>,
    d_plus: Vec<usize>,
    d_minus: Vec<usize>,
    q: usize,
}

impl KnowledgeState {
    pub fn new(n: usize) -> Self {
        KnowledgeState {
            n,
            pairs: vec![PairState::Unknown; pair_count(n)],
            d_plus: vec![0; n],
            d_minus: vec![0; n],
            q: 0,
        }
    }

    /// Knowledge of exactly the given arcs.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut k = KnowledgeState::new(n);
        for arc in arcs {
            k.record(arc)?;
        }
        Ok(k)
    }

    /// Knowledge of `t` restricted to the given pairs.
    pub fn revealed(t: &Tournament, pairs: impl IntoIterator<Item = EdgeQuery>) -> Self {
        let mut k = KnowledgeState::new(t.n());
        for e in pairs {
            k.record(t.arc_between(e.u, e.v))
                .expect("revealing a tournament cannot conflict");
        }
        k
    }

    /// Full knowledge of `t`.
    pub fn of_tournament(t: &Tournament) -> Self {
        KnowledgeState::revealed(
            t,
            (0..pair_count(t.n())).map(|k| {
                let (u, v) = pair_at(t.n(), k);
                EdgeQuery { u, v }
            }),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of revealed pairs.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn d_plus(&self, v: VertexId) -> usize {
        self.d_plus[v]
    }

    pub fn d_minus(&self, v: VertexId) -> usize {
        self.d_minus[v]
    }

    pub fn d_plus_all(&self) -> &[usize] {
        &self.d_plus
    }

    pub fn d_minus_all(&self) -> &[usize] {
        &self.d_minus
    }

    /// Unknown pairs incident with `v`.
    pub fn unknown_at(&self, v: VertexId) -> usize {
        self.n - 1 - self.d_plus[v] - self.d_minus[v]
    }

    pub fn num_unknown(&self) -> usize {
        self.pairs.len() - self.q
    }

    pub fn state(&self, e: EdgeQuery) -> PairState {
        self.pairs[pair_index(self.n, e.u, e.v)]
    }

    /// The known arc on `{a, b}`, if revealed.
    pub fn arc(&self, a: VertexId, b: VertexId) -> Option<Arc> {
        let e = EdgeQuery::between(a, b);
        match self.state(e) {
            PairState::Unknown => None,
            PairState::Forward => Some(Arc::new(e.u, e.v)),
            PairState::Backward => Some(Arc::new(e.v, e.u)),
        }
    }

    pub fn is_known(&self, e: EdgeQuery) -> bool {
        self.state(e) != PairState::Unknown
    }

    /// Records an arc. Returns `true` if the pair was previously unknown;
    /// re-recording the same arc is a no-op and an opposite arc is rejected.
    pub fn record(&mut self, arc: Arc) -> Result<bool> {
        for v in [arc.from, arc.to] {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if arc.from == arc.to {
            return Err(Error::NonCanonicalPair {
                u: arc.from,
                v: arc.to,
            });
        }
        let (u, v) = arc.pair();
        let new = if arc.is_forward() {
            PairState::Forward
        } else {
            PairState::Backward
        };
        let slot = &mut self.pairs[pair_index(self.n, u, v)];
        match *slot {
            PairState::Unknown => {
                *slot = new;
                self.d_plus[arc.from] += 1;
                self.d_minus[arc.to] += 1;
                self.q += 1;
                Ok(true)
            }
            s if s == new => Ok(false),
            _ => Err(Error::Conflict { u, v }),
        }
    }

    pub fn unknown_pairs(&self) -> impl Iterator<Item = EdgeQuery> + '_ {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == PairState::Unknown)
            .map(|(k, _)| {
                let (u, v) = pair_at(self.n, k);
                EdgeQuery { u, v }
            })
    }

    pub fn known_arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.pairs.iter().enumerate().filter_map(|(k, s)| {
            let (u, v) = pair_at(self.n, k);
            match s {
                PairState::Unknown => None,
                PairState::Forward => Some(Arc::new(u, v)),
                PairState::Backward => Some(Arc::new(v, u)),
            }
        })
    }

    /// Completes the state: known pairs keep their orientation and every
    /// unknown pair `(u, v)` is oriented `u -> v` iff `forward(u, v)`.
    pub fn complete_with(&self, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Tournament {
        Tournament::from_fn(self.n, |u, v| match self.pairs[pair_index(self.n, u, v)] {
            PairState::Forward => true,
            PairState::Backward => false,
            PairState::Unknown => forward(u, v),
        })
    }

    /// True iff `t` agrees with every revealed pair.
    pub fn is_extended_by(&self, t: &Tournament) -> bool {
        t.n() == self.n && self.known_arcs().all(|a| t.beats(a.from, a.to))
    }

    /// All completions, using the default enumeration threshold.
    pub fn completions(&self) -> Result<Completions<'_>> {
        self.completions_within(DEFAULT_ENUMERATION_THRESHOLD)
    }

    /// All `2^u` completions, where `u` is the number of unknown pairs.
    pub fn completions_within(&self, threshold: usize) -> Result<Completions<'_>> {
        let unknown: Vec<usize> = (0..self.pairs.len())
            .filter(|&k| self.pairs[k] == PairState::Unknown)
            .collect();
        if unknown.len() > threshold || unknown.len() >= 64 {
            return Err(Error::ThresholdExceeded {
                unknown: unknown.len(),
                threshold,
            });
        }
        Ok(Completions {
            base: self,
            total: 1u64 << unknown.len(),
            unknown,
            next: 0,
        })
    }
}

/// Iterator over the completions of a [`KnowledgeState`]. Bit `i` of the
/// running mask orients the `i`-th unknown pair forward.
#[derive(Debug, Clone)]
pub struct Completions<'a> {
    base: &'a KnowledgeState,
    unknown: Vec<usize>,
    next: u64,
    total: u64,
}

impl Iterator for Completions<'_> {
    type Item = Tournament;

    fn next(&mut self) -> Option<Tournament> {
        if self.next >= self.total {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let n = self.base.n;
        let unknown = &self.unknown;
        Some(self.base.complete_with(|u, v| {
            let k = pair_index(n, u, v);
            let i = unknown.binary_search(&k).expect("unknown pair");
            mask >> i & 1 == 1
        }))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Completions<'_> {}

/// The ordered record of fresh inquiries and their answers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    records: Vec<(EdgeQuery, Arc)>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn q(&self) -> usize {
        self.records.len()
    }

    pub fn records(&self) -> &[(EdgeQuery, Arc)] {
        &self.records
    }

    pub fn queries(&self) -> impl Iterator<Item = EdgeQuery> + '_ {
        self.records.iter().map(|(e, _)| *e)
    }

    fn push(&mut self, e: EdgeQuery, a: Arc) {
        self.records.push((e, a));
    }

    /// Knowledge implied by the transcript.
    pub fn knowledge(&self, n: usize) -> Result<KnowledgeState> {
        KnowledgeState::from_arcs(n, self.records.iter().map(|(_, a)| *a))
    }
}

/// One line `u v -> a b` per record, then `q=<count>`.
impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, a) in &self.records {
            writeln!(f, "{} {} -> {}", e.u, e.v, a)?;
        }
        writeln!(f, "q={}", self.q())
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut transcript = Transcript::new();
        let mut seen = std::collections::HashSet::new();
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        for (line, text) in lines.by_ref() {
            if text.is_empty() {
                continue;
            }
            if let Some(count) = text.strip_prefix("q=") {
                let q: usize = count
                    .parse()
                    .map_err(|_| Error::parse(line, "bad inquiry count"))?;
                if q != transcript.q() {
                    return Err(Error::parse(
                        line,
                        format!("count q={q} but {} records", transcript.q()),
                    ));
                }
                if let Some((line, _)) = lines.find(|(_, l)| !l.is_empty()) {
                    return Err(Error::parse(line, "content after terminator"));
                }
                return Ok(transcript);
            }
            let (query, answer) = text
                .split_once("->")
                .ok_or_else(|| Error::parse(line, "expected `u v -> a b`"))?;
            let qa = parse_arc(query).ok_or_else(|| Error::parse(line, "bad query pair"))?;
            let e = EdgeQuery::new(qa.from, qa.to).map_err(|e| Error::parse(line, e.to_string()))?;
            let a = parse_arc(answer).ok_or_else(|| Error::parse(line, "bad answer arc"))?;
            if a.pair() != (e.u, e.v) {
                return Err(Error::parse(line, "answer does not match the query"));
            }
            if !seen.insert(e) {
                return Err(Error::parse(line, "pair queried twice"));
            }
            transcript.push(e, a);
        }
        Err(Error::parse(0, "missing `q=<count>` terminator"))
    }
}

/// Where a session's answers come from.
#[derive(Debug, Clone)]
pub enum Backing {
    Static(Tournament),
    Adversary(Adversary),
}

/// The answering side of the inquiry protocol.
///
/// Fresh pairs are answered, recorded and counted. A repeated pair is
/// answered identically, is not counted and is flagged in
/// [`OracleSession::repeats`].
#[derive(Debug, Clone)]
pub struct OracleSession {
    backing: Backing,
    knowledge: KnowledgeState,
    transcript: Transcript,
    budget: Option<usize>,
    repeats: Vec<EdgeQuery>,
}

impl OracleSession {
    /// A session answering every inquiry according to `t`.
    pub fn open_static(t: Tournament, budget: Option<usize>) -> Result<Self> {
        Self::open(Backing::Static(t), budget)
    }

    /// A session answered by `adv`.
    pub fn open_adversary(adv: Adversary, budget: Option<usize>) -> Result<Self> {
        Self::open(Backing::Adversary(adv), budget)
    }

    pub fn open(backing: Backing, budget: Option<usize>) -> Result<Self> {
        let n = match &backing {
            Backing::Static(t) => t.n(),
            Backing::Adversary(a) => a.n(),
        };
        if let Some(b) = budget {
            if b > pair_count(n) {
                return Err(Error::InvalidBudget {
                    budget: b,
                    pairs: pair_count(n),
                });
            }
        }
        Ok(OracleSession {
            backing,
            knowledge: KnowledgeState::new(n),
            transcript: Transcript::new(),
            budget,
            repeats: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.knowledge.n()
    }

    pub fn q(&self) -> usize {
        self.transcript.q()
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    pub fn knowledge(&self) -> &KnowledgeState {
        &self.knowledge
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// Repeated inquiries, in the order they were asked.
    pub fn repeats(&self) -> &[EdgeQuery] {
        &self.repeats
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    /// The tournament the session answers from.
    pub fn hidden(&self) -> &Tournament {
        match &self.backing {
            Backing::Static(t) => t,
            Backing::Adversary(a) => a.hidden(),
        }
    }

    pub fn query(&mut self, e: EdgeQuery) -> Result<Arc> {
        e.check(self.n())?;
        if let Some(arc) = self.knowledge.arc(e.u, e.v) {
            self.repeats.push(e);
            return Ok(arc);
        }
        if let Some(budget) = self.budget {
            if self.q() >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        let arc = match &mut self.backing {
            Backing::Static(t) => t.arc_between(e.u, e.v),
            Backing::Adversary(a) => a.answer(e),
        };
        self.knowledge.record(arc)?;
        self.transcript.push(e, arc);
        Ok(arc)
    }

    /// Tries to complete the unrevealed pairs so that `claimed` is not an
    /// MOD vertex. `None` means the claim is sound.
    pub fn refute(&self, claimed: VertexId) -> Result<Option<Refutation>> {
        if claimed >= self.n() {
            return Err(Error::VertexOutOfRange {
                vertex: claimed,
                n: self.n(),
            });
        }
        Ok(adversary::refute(&self.knowledge, self.hidden(), claimed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle() -> Tournament {
        Tournament::rotational_regular(3).unwrap()
    }

    fn q(u: usize, v: usize) -> EdgeQuery {
        EdgeQuery::new(u, v).unwrap()
    }

    #[test]
    fn static_session_answers_from_tournament() {
        let mut s = OracleSession::open_static(cycle(), None).unwrap();
        assert_eq!(s.query(q(0, 1)).unwrap(), Arc::new(0, 1));
        s.query(q(0, 2)).unwrap();
        s.query(q(1, 2)).unwrap();
        assert_eq!(s.q(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let mut s = OracleSession::open_static(cycle(), Some(2)).unwrap();
        s.query(q(0, 1)).unwrap();
        s.query(q(0, 2)).unwrap();
        assert_eq!(s.query(q(1, 2)), Err(Error::BudgetExhausted { budget: 2 }));
        // repeats stay free
        assert_eq!(s.query(q(0, 1)).unwrap(), Arc::new(0, 1));
        assert!(OracleSession::open_static(cycle(), Some(4)).is_err());
    }

    #[test]
    fn repeated_pair_is_flagged_not_counted() {
        let mut s = OracleSession::open_static(cycle(), None).unwrap();
        let a = s.query(q(0, 2)).unwrap();
        assert_eq!(s.q(), 1);
        assert_eq!(s.query(q(0, 2)).unwrap(), a);
        assert_eq!(s.q(), 1);
        assert_eq!(s.repeats(), &[q(0, 2)]);
        assert_eq!(s.transcript().q(), 1);
    }

    #[test]
    fn malformed_queries_are_rejected() {
        let mut s = OracleSession::open_static(cycle(), None).unwrap();
        assert!(EdgeQuery::new(2, 1).is_err());
        assert!(s.query(EdgeQuery { u: 1, v: 1 }).is_err());
        assert!(s.query(EdgeQuery { u: 1, v: 3 }).is_err());
        assert_eq!(s.q(), 0);
    }

    #[test]
    fn adversary_session_answers_match_construction() {
        let t = Tournament::rotational_regular(5).unwrap();
        let mut s = OracleSession::open_adversary(Adversary::new(5).unwrap(), None).unwrap();
        for (u, v) in crate::tournament::pairs(5) {
            assert_eq!(s.query(q(u, v)).unwrap(), t.arc_between(u, v));
        }
    }

    #[test]
    fn knowledge_tallies() {
        let s = OracleSession::open_static(cycle(), None).unwrap();
        assert_eq!(s.knowledge().q(), 0);
        assert_eq!(s.knowledge().unknown_pairs().count(), 3);

        let mut s = OracleSession::open_static(cycle(), None).unwrap();
        s.query(q(0, 1)).unwrap();
        let k = s.knowledge();
        assert_eq!((k.d_plus(0), k.d_minus(1), k.q()), (1, 1, 1));

        let mut s = OracleSession::open_static(Tournament::transitive(4), None).unwrap();
        for (u, v) in crate::tournament::pairs(4) {
            s.query(q(u, v)).unwrap();
        }
        assert_eq!(s.knowledge().d_plus_all(), &[3, 2, 1, 0]);
    }

    #[test]
    fn record_rejects_conflicts() {
        let mut k = KnowledgeState::new(3);
        assert!(k.record(Arc::new(0, 1)).unwrap());
        assert!(!k.record(Arc::new(0, 1)).unwrap());
        assert_eq!(k.record(Arc::new(1, 0)), Err(Error::Conflict { u: 0, v: 1 }));
        assert_eq!(k.q(), 1);
    }

    #[test]
    fn completion_counts() {
        let full = KnowledgeState::of_tournament(&cycle());
        assert_eq!(full.completions().unwrap().count(), 1);

        let k = KnowledgeState::from_arcs(3, [Arc::new(0, 1)]).unwrap();
        let all: Vec<_> = k.completions().unwrap().collect();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|t| k.is_extended_by(t)));
        let with_two = all
            .iter()
            .filter(|t| t.out_degrees().contains(&2))
            .count();
        assert_eq!(with_two, 3);
    }

    #[test]
    fn completion_threshold() {
        let k = KnowledgeState::new(7);
        assert_eq!(
            k.completions().unwrap_err(),
            Error::ThresholdExceeded {
                unknown: 21,
                threshold: DEFAULT_ENUMERATION_THRESHOLD
            }
        );
        assert_eq!(KnowledgeState::new(6).completions().unwrap().len(), 1 << 15);
    }

    #[test]
    fn transcript_text_format() {
        let mut s = OracleSession::open_static(cycle(), None).unwrap();
        s.query(q(0, 2)).unwrap();
        s.query(q(0, 1)).unwrap();
        let text = s.transcript().to_string();
        assert_eq!(text, "0 2 -> 2 0\n0 1 -> 0 1\nq=2\n");
        assert_eq!(text.parse::<Transcript>().unwrap(), *s.transcript());
    }

    #[test]
    fn transcript_parse_errors() {
        assert!("0 1 -> 0 1\n".parse::<Transcript>().is_err());
        assert!("0 1 -> 0 1\nq=2\n".parse::<Transcript>().is_err());
        assert!("0 1 -> 0 2\nq=1\n".parse::<Transcript>().is_err());
        assert!("1 0 -> 0 1\nq=1\n".parse::<Transcript>().is_err());
        assert!("0 1 -> 0 1\n0 1 -> 0 1\nq=2\n".parse::<Transcript>().is_err());
        assert!("q=0\n0 1 -> 0 1\n".parse::<Transcript>().is_err());
        assert_eq!("q=0\n".parse::<Transcript>().unwrap().q(), 0);
    }
}
