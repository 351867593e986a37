//! Tournaments on labeled vertices and the structural predicates used
//! throughout the crate: degrees, kings, maximum out-degree (MOD) vertices
//! and the in-degree-zero vertex.
//!
//! Unordered pairs are always stored canonically as `(u, v)` with `u < v`,
//! and a pair's orientation bit is `true` when the arc goes `u -> v`. Pairs
//! are numbered lexicographically: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Index of a vertex in `0..n`.
pub type VertexId = usize;

/// A directed arc `from -> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub from: VertexId,
    pub to: VertexId,
}

impl Arc {
    pub fn new(from: VertexId, to: VertexId) -> Self {
        debug_assert_ne!(from, to);
        Arc { from, to }
    }

    /// The canonical pair `(min, max)` this arc orients.
    pub fn pair(&self) -> (VertexId, VertexId) {
        (self.from.min(self.to), self.from.max(self.to))
    }

    /// True when the arc runs from the smaller to the larger endpoint.
    pub fn is_forward(&self) -> bool {
        self.from < self.to
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.from == v || self.to == v
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.from, self.to)
    }
}

/// Number of unordered pairs on `n` vertices, `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the canonical pair `(u, v)`, `u < v < n`.
pub fn pair_index(n: usize, u: VertexId, v: VertexId) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, mut k: usize) -> (VertexId, VertexId) {
    let mut u = 0;
    loop {
        let row = n - u - 1;
        if k < row {
            return (u, u + 1 + k);
        }
        k -= row;
        u += 1;
    }
}

/// All canonical pairs in lexicographic order.
pub fn pairs(n: usize) -> impl Iterator<Item = (VertexId, VertexId)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// A complete orientation of the edges of `K_n`.
///
/// Stored as one out-neighbourhood bit row per vertex, so arc lookup is a
/// single bit test and degrees are popcounts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl Tournament {
    /// Builds a tournament from a pair rule: `forward(u, v)` is called once
    /// for every canonical pair `u < v` and returns `true` for `u -> v`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut t = Tournament {
            n,
            words,
            rows: vec![0; n * words],
        };
        for (u, v) in pairs(n) {
            if forward(u, v) {
                t.set(u, v);
            } else {
                t.set(v, u);
            }
        }
        t
    }

    /// Decodes a tournament whose pair `k` is oriented forward iff bit `k`
    /// of `code` is set.
    pub fn from_code(n: usize, code: u64) -> Self {
        debug_assert!(pair_count(n) <= 64);
        Tournament::from_fn(n, |u, v| (code >> pair_index(n, u, v)) & 1 == 1)
    }

    /// Builds a tournament from a full arc list; every pair must appear
    /// exactly once.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut seen: Vec<Option<bool>> = vec![None; pair_count(n)];
        for arc in arcs {
            check_vertex(n, arc.from)?;
            check_vertex(n, arc.to)?;
            if arc.from == arc.to {
                return Err(Error::NonCanonicalPair {
                    u: arc.from,
                    v: arc.to,
                });
            }
            let (u, v) = arc.pair();
            let slot = &mut seen[pair_index(n, u, v)];
            if slot.is_some() {
                return Err(Error::Conflict { u, v });
            }
            *slot = Some(arc.is_forward());
        }
        if let Some(k) = seen.iter().position(Option::is_none) {
            let (u, v) = pair_at(n, k);
            return Err(Error::parse(0, format!("pair ({u}, {v}) has no arc")));
        }
        Ok(Tournament::from_fn(n, |u, v| {
            seen[pair_index(n, u, v)].unwrap_or_default()
        }))
    }

    /// The transitive tournament in which `i -> j` whenever `i < j`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    /// The rotational regular tournament on odd `n`: vertex `i` beats
    /// `i+1, ..., i+(n-1)/2` modulo `n`.
    pub fn rotational_regular(n: usize) -> Result<Self> {
        if n == 0 || n.is_multiple_of(2) {
            return Err(Error::InvalidOrder {
                n,
                reason: "regular tournaments need odd n >= 1",
            });
        }
        let half = (n - 1) / 2;
        Ok(Tournament::from_fn(n, |u, v| v - u <= half))
    }

    /// The almost regular tournament on even `n`: vertex `i` beats
    /// `i+1, ..., i+n/2-1` modulo `n`, and each diametral pair is oriented
    /// `i -> i+n/2` for `i < n/2`.
    pub fn almost_regular(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidOrder {
                n,
                reason: "almost regular tournaments need even n >= 2",
            });
        }
        let half = n / 2;
        // u < v, so the diametral case always has u < n/2 and u -> v.
        Ok(Tournament::from_fn(n, |u, v| v - u <= half))
    }

    /// Every tournament on `n` vertices, in code order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = Tournament>> {
        let m = pair_count(n);
        if m > 32 {
            return Err(Error::InvalidOrder {
                n,
                reason: "exhaustive enumeration is limited to n <= 8",
            });
        }
        Ok((0..1u64 << m).map(move |code| Tournament::from_code(n, code)))
    }

    fn set(&mut self, from: VertexId, to: VertexId) {
        self.rows[from * self.words + to / 64] |= 1 << (to % 64);
    }

    fn row(&self, v: VertexId) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// True iff `u -> v` is an arc.
    pub fn beats(&self, u: VertexId, v: VertexId) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    /// The arc between two distinct vertices.
    pub fn arc_between(&self, a: VertexId, b: VertexId) -> Arc {
        if self.beats(a, b) {
            Arc::new(a, b)
        } else {
            Arc::new(b, a)
        }
    }

    /// All arcs, one per pair, in lexicographic pair order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        pairs(self.n).map(|(u, v)| self.arc_between(u, v))
    }

    /// The code understood by [`Tournament::from_code`].
    pub fn code(&self) -> u64 {
        pairs(self.n)
            .enumerate()
            .filter(|&(_, (u, v))| self.beats(u, v))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.n - 1 - self.out_degree(v)
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.out_degree(v)).collect()
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n).filter(move |&w| self.beats(v, w))
    }

    /// True iff every other vertex is reachable from `x` along a directed
    /// path of length at most two.
    pub fn is_king(&self, x: VertexId) -> bool {
        let mut reach = self.row(x).to_vec();
        reach[x / 64] |= 1 << (x % 64);
        for z in self.out_neighbors(x) {
            for (r, w) in reach.iter_mut().zip(self.row(z)) {
                *r |= w;
            }
        }
        let covered: usize = reach.iter().map(|w| w.count_ones() as usize).sum();
        covered == self.n
    }

    pub fn kings(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&x| self.is_king(x)).collect()
    }

    /// Every vertex attaining the maximum out-degree, ascending. Empty only
    /// for the empty tournament.
    pub fn mod_vertices(&self) -> Vec<VertexId> {
        let degrees = self.out_degrees();
        let Some(&max) = degrees.iter().max() else {
            return Vec::new();
        };
        (0..self.n).filter(|&v| degrees[v] == max).collect()
    }

    /// The unique vertex with in-degree zero, if there is one.
    pub fn zero_indegree_vertex(&self) -> Option<VertexId> {
        (0..self.n).find(|&v| self.out_degree(v) == self.n - 1)
    }
}

fn check_vertex(n: usize, v: VertexId) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n })
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tournament")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// Fixture format: a header `n <N>` then one `u v` line per arc (`u -> v`),
/// pairs in lexicographic order.
impl fmt::Display for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for arc in self.arcs() {
            writeln!(f, "{arc}")?;
        }
        Ok(())
    }
}

impl FromStr for Tournament {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let n = header
            .strip_prefix("n ")
            .and_then(|rest| rest.trim().parse::<usize>().ok())
            .ok_or_else(|| Error::parse(line, "expected header `n <N>`"))?;
        let mut arcs = Vec::with_capacity(pair_count(n));
        for (line, text) in lines {
            let arc = parse_arc(text).ok_or_else(|| Error::parse(line, "expected `u v`"))?;
            arcs.push(arc);
        }
        Tournament::from_arcs(n, arcs)
    }
}

/// Parses `"a b"` into the arc `a -> b`.
pub(crate) fn parse_arc(text: &str) -> Option<Arc> {
    let mut it = text.split_whitespace();
    let from = it.next()?.parse().ok()?;
    let to = it.next()?.parse().ok()?;
    if it.next().is_some() || from == to {
        return None;
    }
    Some(Arc { from, to })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Tournament {
        Tournament::rotational_regular(3).unwrap()
    }

    #[test]
    fn pair_indexing_round_trips() {
        for n in 2..12 {
            for (k, (u, v)) in pairs(n).enumerate() {
                assert_eq!(pair_index(n, u, v), k);
                assert_eq!(pair_at(n, k), (u, v));
            }
            assert_eq!(pairs(n).count(), pair_count(n));
        }
    }

    #[test]
    fn rotational_three_is_the_cycle() {
        let arcs: Vec<_> = three_cycle().arcs().collect();
        assert_eq!(arcs, vec![Arc::new(0, 1), Arc::new(2, 0), Arc::new(1, 2)]);
    }

    #[test]
    fn rotational_degrees() {
        let t = Tournament::rotational_regular(5).unwrap();
        assert!(t.out_degrees().iter().all(|&d| d == 2));
        let t = Tournament::rotational_regular(7).unwrap();
        assert!((0..7).all(|v| t.in_degree(v) == 3));
        let t = Tournament::rotational_regular(9).unwrap();
        assert!((0..9).all(|v| t.out_degree(v) == 4));
    }

    #[test]
    fn rotational_rejects_even_and_zero() {
        assert!(Tournament::rotational_regular(0).is_err());
        assert!(Tournament::rotational_regular(4).is_err());
    }

    #[test]
    fn almost_regular_profiles() {
        let t = Tournament::almost_regular(4).unwrap();
        assert_eq!(t.out_degrees(), vec![2, 2, 1, 1]);
        assert_eq!(t.mod_vertices(), vec![0, 1]);

        let t = Tournament::almost_regular(2).unwrap();
        assert_eq!(t.arcs().collect::<Vec<_>>(), vec![Arc::new(0, 1)]);
        assert_eq!(t.out_degrees(), vec![1, 0]);

        let t = Tournament::almost_regular(6).unwrap();
        let d = t.out_degrees();
        assert_eq!(d.iter().filter(|&&x| x == 3).count(), 3);
        assert_eq!(d.iter().filter(|&&x| x == 2).count(), 3);

        assert!(Tournament::almost_regular(5).is_err());
        assert!(Tournament::almost_regular(0).is_err());
    }

    #[test]
    fn constructions_hold_for_large_n() {
        for n in (1..=1001).step_by(2) {
            let t = Tournament::rotational_regular(n).unwrap();
            assert!(t.out_degrees().iter().all(|&d| d == (n - 1) / 2), "n={n}");
        }
        for n in (2..=1000).step_by(2) {
            let d = Tournament::almost_regular(n).unwrap().out_degrees();
            assert_eq!(d.iter().filter(|&&x| x == n / 2).count(), n / 2, "n={n}");
            assert_eq!(d.iter().filter(|&&x| x == n / 2 - 1).count(), n / 2, "n={n}");
        }
    }

    #[test]
    fn degrees_of_small_tournaments() {
        let c = three_cycle();
        assert_eq!((c.out_degree(0), c.in_degree(0)), (1, 1));
        let t = Tournament::transitive(4);
        assert_eq!((t.out_degree(0), t.in_degree(0)), (3, 0));
    }

    #[test]
    fn kings() {
        let c = three_cycle();
        assert!((0..3).all(|v| c.is_king(v)));
        let t = Tournament::transitive(3);
        assert!(t.is_king(0));
        assert!(!t.is_king(2));
    }

    #[test]
    fn mod_and_zero_indegree() {
        assert_eq!(three_cycle().mod_vertices(), vec![0, 1, 2]);
        assert_eq!(Tournament::transitive(4).mod_vertices(), vec![0]);
        assert_eq!(Tournament::transitive(5).zero_indegree_vertex(), Some(0));
        assert_eq!(three_cycle().zero_indegree_vertex(), None);
        let r5 = Tournament::rotational_regular(5).unwrap();
        assert_eq!(r5.zero_indegree_vertex(), None);
    }

    #[test]
    fn wide_rows_span_words() {
        let t = Tournament::transitive(130);
        assert_eq!(t.out_degree(0), 129);
        assert_eq!(t.out_degree(129), 0);
        assert!(t.beats(3, 127) && !t.beats(127, 3));
        assert!(t.is_king(0) && !t.is_king(1));
    }

    #[test]
    fn fixture_format() {
        let text = three_cycle().to_string();
        assert_eq!(text, "n 3\n0 1\n2 0\n1 2\n");
        assert_eq!(text.parse::<Tournament>().unwrap(), three_cycle());
    }

    #[test]
    fn fixture_rejects_bad_input() {
        assert!("".parse::<Tournament>().is_err());
        assert!("n 3\n0 1\n2 0\n".parse::<Tournament>().is_err());
        assert!("n 3\n0 1\n1 0\n2 0\n1 2\n".parse::<Tournament>().is_err());
        assert!("n 3\n0 1\n2 0\n1 5\n".parse::<Tournament>().is_err());
        assert!("x 3\n".parse::<Tournament>().is_err());
    }

    #[test]
    fn code_round_trips() {
        for t in Tournament::all(4).unwrap() {
            assert_eq!(Tournament::from_code(4, t.code()), t);
        }
    }
}
