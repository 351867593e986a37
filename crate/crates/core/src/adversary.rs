//! The lower-bound adversary for MOD search.
//!
//! During play the adversary answers every inquiry from a hidden regular
//! (odd `n`) or almost regular (even `n`) tournament. Once the querier
//! commits to a vertex, [`refute`] tries to complete the unrevealed pairs so
//! that the claimed vertex is strictly out-dominated:
//!
//! 1. if the claim has too few known out-arcs, every unknown pair at the
//!    claim is turned against it;
//! 2. otherwise, for each `y` with too few known in-arcs (ascending), every
//!    unknown pair at `y` is turned away from `y`;
//! 3. failing both, all completions are searched when few enough pairs are
//!    unknown, and above that the joint completion of (1) and (2) is tried.
//!
//! All remaining pairs follow the hidden tournament. A claim that survives
//! has known out-degree at least the threshold and every other vertex has
//! known in-degree at least its threshold, so the revealed pair count is at
//! least [`mod_lower_bound`].

use crate::error::{Error, Result};
use crate::oracle::{EdgeQuery, KnowledgeState, DEFAULT_ENUMERATION_THRESHOLD};
use crate::tournament::{Arc, Tournament, VertexId};

/// Minimum number of inquiries any sound MOD-finding algorithm spends in
/// the worst case: `(n-1)^2/2` for odd `n`, `(n-1)(n-2)/2` for even `n`.
pub fn mod_lower_bound(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    if n % 2 == 1 {
        (n - 1) * (n - 1) / 2
    } else {
        (n - 1) * (n - 2) / 2
    }
}

/// The known out-degree a claimed vertex needs to be unrefutable by the
/// sink completion: `(n-1)/2` for odd `n`, `n/2` for even `n`.
pub fn out_threshold(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        n / 2
    }
}

/// The known in-degree every other vertex needs: `(n-1)/2` for odd `n`,
/// `n/2 - 1` for even `n`.
pub fn in_threshold(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        (n / 2).saturating_sub(1)
    }
}

/// How a refuting completion was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefutationStrategy {
    /// Unknown pairs at the claim all point into it.
    SinkClaimed,
    /// Unknown pairs at this vertex all point away from it.
    LiftVertex(VertexId),
    /// Found by enumerating completions.
    Exhaustive,
    /// Both of the above at once, for the given vertex.
    Joint(VertexId),
}

/// A completion in which the claimed vertex is not an MOD vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub completion: Tournament,
    /// Lowest-index vertex whose out-degree exceeds the claim's.
    pub witness: VertexId,
    pub strategy: RefutationStrategy,
}

impl Refutation {
    /// Recomputes every property a refutation promises.
    pub fn is_valid_for(&self, knowledge: &KnowledgeState, claimed: VertexId) -> bool {
        knowledge.is_extended_by(&self.completion)
            && self.witness != claimed
            && self.completion.out_degree(self.witness) > self.completion.out_degree(claimed)
    }
}

/// Lowest-index vertex that strictly out-dominates `claimed` in `t`.
fn dominator(t: &Tournament, claimed: VertexId) -> Option<VertexId> {
    let bar = t.out_degree(claimed);
    (0..t.n()).find(|&y| t.out_degree(y) > bar)
}

fn refutation(
    completion: Tournament,
    claimed: VertexId,
    strategy: RefutationStrategy,
) -> Option<Refutation> {
    dominator(&completion, claimed).map(|witness| Refutation {
        completion,
        witness,
        strategy,
    })
}

/// Completion with unknown pairs at `sink` pointing into it, unknown pairs
/// at `source` pointing away from it, and everything else as in `hidden`.
fn steer(
    knowledge: &KnowledgeState,
    hidden: &Tournament,
    sink: Option<VertexId>,
    source: Option<VertexId>,
) -> Tournament {
    knowledge.complete_with(|u, v| {
        if Some(u) == sink || Some(v) == source {
            false
        } else if Some(v) == sink || Some(u) == source {
            true
        } else {
            hidden.beats(u, v)
        }
    })
}

/// Tries to complete `knowledge` so that `claimed` is not an MOD vertex.
/// Unsteered pairs follow `hidden`. Returns `None` iff `claimed` is an MOD
/// vertex of every completion.
pub fn refute(
    knowledge: &KnowledgeState,
    hidden: &Tournament,
    claimed: VertexId,
) -> Option<Refutation> {
    let n = knowledge.n();
    if knowledge.d_plus(claimed) < out_threshold(n) {
        let t = steer(knowledge, hidden, Some(claimed), None);
        if let Some(r) = refutation(t, claimed, RefutationStrategy::SinkClaimed) {
            return Some(r);
        }
    }
    let low = in_threshold(n);
    for y in (0..n).filter(|&y| y != claimed && knowledge.d_minus(y) < low) {
        let t = steer(knowledge, hidden, None, Some(y));
        if let Some(r) = refutation(t, claimed, RefutationStrategy::LiftVertex(y)) {
            return Some(r);
        }
    }
    if let Ok(found) = refute_exhaustive(knowledge, claimed, DEFAULT_ENUMERATION_THRESHOLD) {
        return found;
    }
    (0..n).filter(|&y| y != claimed).find_map(|y| {
        let t = steer(knowledge, hidden, Some(claimed), Some(y));
        refutation(t, claimed, RefutationStrategy::Joint(y))
    })
}

/// The first completion, in enumeration order, in which `claimed` is not
/// an MOD vertex.
pub fn refute_exhaustive(
    knowledge: &KnowledgeState,
    claimed: VertexId,
    threshold: usize,
) -> Result<Option<Refutation>> {
    Ok(knowledge
        .completions_within(threshold)?
        .find_map(|t| refutation(t, claimed, RefutationStrategy::Exhaustive)))
}

/// Per-vertex comparison of known degrees against the thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficitAudit {
    pub claimed: VertexId,
    pub out_threshold: usize,
    pub claimed_d_plus: usize,
    pub claimed_deficient: bool,
    pub in_threshold: usize,
    /// Every vertex other than the claim, ascending.
    pub others: Vec<InDegreeEntry>,
    /// Sum of known in-degrees over the other vertices; a lower bound on
    /// the revealed pair count.
    pub in_degree_sum: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InDegreeEntry {
    pub vertex: VertexId,
    pub d_minus: usize,
    pub deficient: bool,
}

impl DeficitAudit {
    /// No deficit anywhere: neither constructive completion applies.
    pub fn is_clean(&self) -> bool {
        !self.claimed_deficient && self.others.iter().all(|e| !e.deficient)
    }

    pub fn deficient_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.others.iter().filter(|e| e.deficient).map(|e| e.vertex)
    }
}

pub fn audit_deficits(knowledge: &KnowledgeState, claimed: VertexId) -> DeficitAudit {
    let n = knowledge.n();
    let low = in_threshold(n);
    let others: Vec<_> = (0..n)
        .filter(|&z| z != claimed)
        .map(|z| InDegreeEntry {
            vertex: z,
            d_minus: knowledge.d_minus(z),
            deficient: knowledge.d_minus(z) < low,
        })
        .collect();
    DeficitAudit {
        claimed,
        out_threshold: out_threshold(n),
        claimed_d_plus: knowledge.d_plus(claimed),
        claimed_deficient: knowledge.d_plus(claimed) < out_threshold(n),
        in_threshold: low,
        in_degree_sum: others.iter().map(|e| e.d_minus).sum(),
        others,
    }
}

/// The answering side of the lower-bound game.
#[derive(Debug, Clone)]
pub struct Adversary {
    hidden: Tournament,
    knowledge: KnowledgeState,
}

impl Adversary {
    /// Hides the rotational regular tournament for odd `n` and the almost
    /// regular one for even `n`.
    pub fn new(n: usize) -> Result<Self> {
        let hidden = if n % 2 == 1 {
            Tournament::rotational_regular(n)?
        } else if n > 0 {
            Tournament::almost_regular(n)?
        } else {
            return Err(Error::InvalidOrder {
                n,
                reason: "the adversary needs n >= 1",
            });
        };
        Ok(Self::with_hidden(hidden))
    }

    /// An adversary hiding an arbitrary tournament.
    pub fn with_hidden(hidden: Tournament) -> Self {
        Adversary {
            knowledge: KnowledgeState::new(hidden.n()),
            hidden,
        }
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn hidden(&self) -> &Tournament {
        &self.hidden
    }

    /// What has been revealed so far.
    pub fn knowledge(&self) -> &KnowledgeState {
        &self.knowledge
    }

    pub fn answer(&mut self, e: EdgeQuery) -> Arc {
        let arc = self.hidden.arc_between(e.u, e.v);
        self.knowledge
            .record(arc)
            .expect("hidden tournament answers are consistent");
        arc
    }

    pub fn refute(&self, claimed: VertexId) -> Option<Refutation> {
        refute(&self.knowledge, &self.hidden, claimed)
    }

    pub fn audit(&self, claimed: VertexId) -> DeficitAudit {
        audit_deficits(&self.knowledge, claimed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tournament::{pair_count, pairs};

    fn all_queries(n: usize) -> Vec<EdgeQuery> {
        pairs(n).map(|(u, v)| EdgeQuery { u, v }).collect()
    }

    /// Knowledge states revealed from `hidden` on every subset of pairs.
    fn prefixes(hidden: &Tournament) -> impl Iterator<Item = KnowledgeState> + '_ {
        let qs = all_queries(hidden.n());
        (0u64..1 << qs.len()).map(move |mask| {
            KnowledgeState::revealed(
                hidden,
                qs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e),
            )
        })
    }

    #[test]
    fn bound_values() {
        assert_eq!(mod_lower_bound(5), 8);
        assert_eq!(mod_lower_bound(4), 3);
        assert_eq!(mod_lower_bound(3), 2);
        assert_eq!(mod_lower_bound(2), 0);
        assert_eq!(mod_lower_bound(1), 0);
    }

    #[test]
    fn hidden_tournaments() {
        assert_eq!(
            *Adversary::new(3).unwrap().hidden(),
            Tournament::rotational_regular(3).unwrap()
        );
        assert_eq!(Adversary::new(4).unwrap().hidden().out_degrees(), vec![2, 2, 1, 1]);
        assert_eq!(Adversary::new(5).unwrap().hidden().out_degrees(), vec![2; 5]);
        assert!(Adversary::new(0).is_err());
    }

    #[test]
    fn answers_follow_hidden() {
        let mut a = Adversary::new(3).unwrap();
        assert_eq!(a.answer(EdgeQuery { u: 0, v: 1 }), Arc::new(0, 1));
        assert_eq!(a.answer(EdgeQuery { u: 0, v: 1 }), Arc::new(0, 1));
        assert_eq!(a.knowledge().q(), 1);
        let mut a = Adversary::new(5).unwrap();
        assert_eq!(a.answer(EdgeQuery { u: 0, v: 3 }), Arc::new(3, 0));
    }

    #[test]
    fn refutes_single_arc_claim() {
        let mut a = Adversary::new(3).unwrap();
        a.answer(EdgeQuery { u: 0, v: 1 });
        let r = a.refute(0).expect("claim of 0 is refutable");
        assert_eq!(
            r.completion.arcs().collect::<Vec<_>>(),
            vec![Arc::new(0, 1), Arc::new(2, 0), Arc::new(2, 1)]
        );
        assert_eq!(r.witness, 2);
        assert_eq!(r.strategy, RefutationStrategy::LiftVertex(2));
        assert!(r.is_valid_for(a.knowledge(), 0));
    }

    #[test]
    fn full_knowledge_of_regular_is_safe() {
        for n in [3, 5] {
            let mut a = Adversary::new(n).unwrap();
            for e in all_queries(n) {
                a.answer(e);
            }
            for x in 0..n {
                assert!(a.refute(x).is_none());
            }
        }
    }

    #[test]
    fn audit_examples() {
        let k = KnowledgeState::new(5);
        let audit = audit_deficits(&k, 0);
        assert_eq!(audit.in_degree_sum, 0);
        assert!(audit.claimed_deficient);
        assert_eq!(audit.deficient_vertices().count(), 4);

        let full = KnowledgeState::of_tournament(&Tournament::rotational_regular(5).unwrap());
        let audit = audit_deficits(&full, 3);
        assert!(audit.is_clean());
        assert!(audit.others.iter().all(|e| e.d_minus == 2));
        assert_eq!(audit.in_degree_sum, 8);
    }

    #[test]
    fn clean_audit_certifies_the_bound() {
        for n in 2..=5 {
            let hidden = Adversary::new(n).unwrap().hidden().clone();
            for k in prefixes(&hidden) {
                for x in 0..n {
                    let audit = audit_deficits(&k, x);
                    if audit.is_clean() {
                        assert!(audit.in_degree_sum >= mod_lower_bound(n));
                        assert!(k.q() >= audit.in_degree_sum);
                    }
                }
            }
        }
    }

    #[test]
    fn constructive_completions_refute_whenever_they_apply() {
        for n in [3, 4, 5] {
            let hidden = Adversary::new(n).unwrap().hidden().clone();
            for k in prefixes(&hidden) {
                for x in 0..n {
                    if k.d_plus(x) < out_threshold(n) {
                        let t = steer(&k, &hidden, Some(x), None);
                        assert!(dominator(&t, x).is_some(), "sink n={n} x={x}");
                    }
                    for y in (0..n).filter(|&y| y != x && k.d_minus(y) < in_threshold(n)) {
                        let t = steer(&k, &hidden, None, Some(y));
                        assert!(dominator(&t, x).is_some(), "lift n={n} x={x} y={y}");
                    }
                }
            }
        }
    }

    #[test]
    fn refute_is_exact_against_enumeration() {
        for n in [3, 4, 5] {
            let hidden = Adversary::new(n).unwrap().hidden().clone();
            for k in prefixes(&hidden) {
                for x in 0..n {
                    let fast = refute(&k, &hidden, x);
                    let slow = refute_exhaustive(&k, x, 32).unwrap();
                    assert_eq!(fast.is_some(), slow.is_some());
                    if let Some(r) = fast {
                        assert!(r.is_valid_for(&k, x));
                    }
                    if k.q() < mod_lower_bound(n) {
                        assert!(slow.is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn joint_completion_covers_large_states() {
        // 40 vertices: far too many unknown pairs to enumerate.
        let hidden = Tournament::transitive(40);
        let k = KnowledgeState::revealed(&hidden, (1..40).map(|v| EdgeQuery { u: 0, v }));
        assert!(refute(&k, &hidden, 0).is_none());
        let r = refute(&k, &hidden, 1).unwrap();
        assert!(r.is_valid_for(&k, 1));
        let empty = KnowledgeState::new(40);
        assert!(refute(&empty, &hidden, 0).is_some());
        assert_eq!(pair_count(40) - k.q(), 741);
    }
}
