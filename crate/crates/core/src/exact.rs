//! Exact worst-case inquiry counts for tiny tournaments.
//!
//! The querier and the answerer play a game over partial orientations: the
//! querier picks an undecided pair, the answerer picks its orientation, and
//! play stops once the task's terminal test fires. The minimax value of the
//! empty state is the deterministic query complexity of the task.
//!
//! States are keyed by a base-3 number over the lexicographically ordered
//! pairs (digit 0 unknown, 1 for `u -> v`, 2 for `v -> u`). No symmetry
//! reduction is applied.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::certify_from_degrees;
use crate::error::{Error, Result};
use crate::oracle::{EdgeQuery, KnowledgeState, PairState};
use crate::tournament::{pair_at, pair_count, pairs, Tournament, VertexId};

/// Largest `n` solved without opting in.
pub const DEFAULT_MAX_N: usize = 5;
/// Largest `n` the solver accepts at all.
pub const HARD_MAX_N: usize = 6;
/// Largest `n` whose state keys fit in 64 bits.
const MAX_KEYED_N: usize = 9;

const EMPTY: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    /// Name a vertex that is of maximum out-degree in every completion.
    ModFound,
    /// Decide whether some vertex has in-degree zero.
    ZeroIndegreeDecided,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::ModFound => "mod-found",
            Task::ZeroIndegreeDecided => "zero-indegree-decided",
        })
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mod-found" | "mod" => Ok(Task::ModFound),
            "zero-indegree-decided" | "zero-indegree" => Ok(Task::ZeroIndegreeDecided),
            other => Err(Error::parse(0, format!("unknown task `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskAnswer {
    Mod(VertexId),
    ZeroIndegree(bool),
}

impl TaskAnswer {
    /// Whether the answer is right for the fully known tournament `t`.
    pub fn is_correct_for(&self, t: &Tournament) -> bool {
        match *self {
            TaskAnswer::Mod(x) => t.mod_vertices().contains(&x),
            TaskAnswer::ZeroIndegree(b) => t.zero_indegree_vertex().is_some() == b,
        }
    }
}

/// A partial orientation identified by its base-3 key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameState {
    n: usize,
    key: u64,
}

impl GameState {
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_key(n, 0)
    }

    pub fn from_key(n: usize, key: u64) -> Result<Self> {
        if n > MAX_KEYED_N {
            return Err(Error::BeyondCapability { n, max: MAX_KEYED_N });
        }
        if key >= 3u64.pow(pair_count(n) as u32) {
            return Err(Error::parse(0, format!("key {key} out of range for n = {n}")));
        }
        Ok(GameState { n, key })
    }

    pub fn from_knowledge(k: &KnowledgeState) -> Result<Self> {
        let n = k.n();
        if n > MAX_KEYED_N {
            return Err(Error::BeyondCapability { n, max: MAX_KEYED_N });
        }
        let key = (0..pair_count(n)).rev().fold(0u64, |acc, idx| {
            let (u, v) = pair_at(n, idx);
            acc * 3
                + match k.state(EdgeQuery { u, v }) {
                    PairState::Unknown => 0,
                    PairState::Forward => 1,
                    PairState::Backward => 2,
                }
        });
        Ok(GameState { n, key })
    }

    pub fn to_knowledge(&self) -> KnowledgeState {
        let mut k = KnowledgeState::new(self.n);
        let mut rest = self.key;
        for (u, v) in pairs(self.n) {
            let arc = match rest % 3 {
                1 => Some(crate::tournament::Arc::new(u, v)),
                2 => Some(crate::tournament::Arc::new(v, u)),
                _ => None,
            };
            if let Some(arc) = arc {
                k.record(arc).expect("fresh pair");
            }
            rest /= 3;
        }
        k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    /// Number of decided pairs.
    pub fn q(&self) -> usize {
        let mut rest = self.key;
        let mut q = 0;
        while rest > 0 {
            q += usize::from(!rest.is_multiple_of(3));
            rest /= 3;
        }
        q
    }
}

/// The lowest-index vertex that is an MOD vertex of every completion.
pub fn terminal_mod(state: &GameState) -> Option<VertexId> {
    let k = state.to_knowledge();
    certify_from_degrees(k.d_plus_all(), k.d_minus_all())
}

/// Whether every completion agrees on having an in-degree-zero vertex.
pub fn terminal_zero_indegree(state: &GameState) -> Option<bool> {
    let k = state.to_knowledge();
    zero_indegree_from_degrees(k.d_plus_all(), k.d_minus_all())
}

/// Candidates are vertices without a known in-arc; two candidates never
/// share a known pair. Absent candidates settle the answer as `false`. A
/// fully known candidate, or exactly two candidates whose only open pair is
/// the one between them, settles it as `true`. Otherwise some completion
/// gives every candidate an in-arc and another leaves one a source.
pub fn zero_indegree_from_degrees(d_plus: &[usize], d_minus: &[usize]) -> Option<bool> {
    let n = d_plus.len();
    let open = |v: usize| n - 1 - d_plus[v] - d_minus[v];
    let candidates: Vec<_> = (0..n).filter(|&v| d_minus[v] == 0).collect();
    match candidates.as_slice() {
        [] => Some(false),
        c if c.iter().any(|&v| open(v) == 0) => Some(true),
        &[a, b] if open(a) == 1 && open(b) == 1 => Some(true),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub memo: bool,
    pub parallel: bool,
    /// Permit `n = 6` (3^15 states).
    pub allow_n6: bool,
    pub with_tree: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            memo: true,
            parallel: false,
            allow_n6: false,
            with_tree: true,
        }
    }
}

/// Optimal worst-case inquiry count, with an optimal strategy if requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameValue {
    pub n: usize,
    pub task: Task,
    pub value: usize,
    pub tree: Option<StrategyTree>,
}

pub fn exact_complexity(n: usize, task: Task, opts: &SolverOptions) -> Result<GameValue> {
    let max = if opts.allow_n6 { HARD_MAX_N } else { DEFAULT_MAX_N };
    if n > max {
        return Err(Error::BeyondCapability { n, max });
    }
    if n == 0 {
        return Err(Error::InvalidOrder {
            n,
            reason: "the solver needs n >= 1",
        });
    }
    let solver = Solver::new(n, task, opts.memo || opts.with_tree);
    let root = Board::empty();
    let value = if opts.parallel {
        solver.value_parallel(root)
    } else {
        solver.value(root)
    };
    let tree = opts.with_tree.then(|| solver.tree(root, None));
    Ok(GameValue {
        n,
        task,
        value: usize::from(value),
        tree,
    })
}

#[derive(Debug, Clone, Copy)]
struct Board {
    key: u32,
    d_plus: [usize; HARD_MAX_N],
    d_minus: [usize; HARD_MAX_N],
}

impl Board {
    fn empty() -> Self {
        Board {
            key: 0,
            d_plus: [0; HARD_MAX_N],
            d_minus: [0; HARD_MAX_N],
        }
    }
}

struct Solver {
    n: usize,
    task: Task,
    pairs: Vec<(usize, usize)>,
    pow3: Vec<u32>,
    memo: Option<Vec<AtomicU8>>,
}

impl Solver {
    fn new(n: usize, task: Task, memo: bool) -> Self {
        let m = pair_count(n);
        let pow3: Vec<u32> = (0..=m as u32).map(|k| 3u32.pow(k)).collect();
        let memo = memo.then(|| (0..pow3[m]).map(|_| AtomicU8::new(EMPTY)).collect());
        Solver {
            n,
            task,
            pairs: (0..m).map(|k| pair_at(n, k)).collect(),
            pow3,
            memo,
        }
    }

    fn answer(&self, b: &Board) -> Option<TaskAnswer> {
        let (dp, dm) = (&b.d_plus[..self.n], &b.d_minus[..self.n]);
        match self.task {
            Task::ModFound => certify_from_degrees(dp, dm).map(TaskAnswer::Mod),
            Task::ZeroIndegreeDecided => {
                zero_indegree_from_degrees(dp, dm).map(TaskAnswer::ZeroIndegree)
            }
        }
    }

    fn is_open(&self, b: &Board, k: usize) -> bool {
        (b.key / self.pow3[k]).is_multiple_of(3)
    }

    fn play(&self, b: &Board, k: usize, forward: bool) -> Board {
        let (u, v) = self.pairs[k];
        let (from, to, digit) = if forward { (u, v, 1) } else { (v, u, 2) };
        let mut next = *b;
        next.key += digit * self.pow3[k];
        next.d_plus[from] += 1;
        next.d_minus[to] += 1;
        next
    }

    fn value(&self, b: Board) -> u8 {
        if self.answer(&b).is_some() {
            return 0;
        }
        if let Some(memo) = &self.memo {
            let hit = memo[b.key as usize].load(Ordering::Relaxed);
            if hit != EMPTY {
                return hit;
            }
        }
        let mut best = u8::MAX;
        for k in (0..self.pairs.len()).filter(|&k| self.is_open(&b, k)) {
            let f = self.value(self.play(&b, k, true));
            if f + 1 >= best {
                continue;
            }
            let g = self.value(self.play(&b, k, false));
            best = best.min(1 + f.max(g));
            if best == 1 {
                break;
            }
        }
        if let Some(memo) = &self.memo {
            memo[b.key as usize].store(best, Ordering::Relaxed);
        }
        best
    }

    /// Root-level split across threads; subtrees share the memo, whose
    /// writes are idempotent.
    fn value_parallel(&self, b: Board) -> u8 {
        if self.answer(&b).is_some() {
            return 0;
        }
        (0..self.pairs.len())
            .into_par_iter()
            .filter(|&k| self.is_open(&b, k))
            .map(|k| {
                let f = self.value(self.play(&b, k, true));
                let g = self.value(self.play(&b, k, false));
                1 + f.max(g)
            })
            .min()
            .unwrap_or(u8::MAX)
    }

    fn tree(&self, b: Board, branch: Option<(usize, usize)>) -> StrategyTree {
        if let Some(answer) = self.answer(&b) {
            return StrategyTree::Leaf {
                key: u64::from(b.key),
                branch,
                answer,
            };
        }
        let target = self.value(b);
        for k in (0..self.pairs.len()).filter(|&k| self.is_open(&b, k)) {
            let fb = self.play(&b, k, true);
            let bb = self.play(&b, k, false);
            if 1 + self.value(fb).max(self.value(bb)) == target {
                let (u, v) = self.pairs[k];
                return StrategyTree::Query {
                    key: u64::from(b.key),
                    branch,
                    query: EdgeQuery { u, v },
                    forward: Box::new(self.tree(fb, Some((u, v)))),
                    backward: Box::new(self.tree(bb, Some((v, u)))),
                };
            }
        }
        unreachable!("a non-terminal state has an optimal pair")
    }
}

/// An optimal decision tree. `branch` is the arc answered by the parent's
/// query, `None` at the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyTree {
    Leaf {
        key: u64,
        branch: Option<(VertexId, VertexId)>,
        answer: TaskAnswer,
    },
    Query {
        key: u64,
        branch: Option<(VertexId, VertexId)>,
        query: EdgeQuery,
        /// Child after `u -> v`.
        forward: Box<StrategyTree>,
        /// Child after `v -> u`.
        backward: Box<StrategyTree>,
    },
}

impl StrategyTree {
    /// Follows the tree against `t`; returns the answer and inquiry count.
    pub fn run(&self, t: &Tournament) -> (TaskAnswer, usize) {
        let mut node = self;
        let mut q = 0;
        loop {
            match node {
                StrategyTree::Leaf { answer, .. } => return (*answer, q),
                StrategyTree::Query {
                    query,
                    forward,
                    backward,
                    ..
                } => {
                    q += 1;
                    node = if t.beats(query.u, query.v) {
                        forward
                    } else {
                        backward
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            StrategyTree::Leaf { .. } => 0,
            StrategyTree::Query {
                forward, backward, ..
            } => 1 + forward.depth().max(backward.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            StrategyTree::Leaf { .. } => 1,
            StrategyTree::Query {
                forward, backward, ..
            } => 1 + forward.node_count() + backward.node_count(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let indent = "  ".repeat(depth);
        let (key, branch) = match self {
            StrategyTree::Leaf { key, branch, .. } | StrategyTree::Query { key, branch, .. } => {
                (key, branch)
            }
        };
        let branch = match branch {
            Some((a, b)) => format!("{a} {b}"),
            None => "root".to_string(),
        };
        match self {
            StrategyTree::Leaf { answer, .. } => {
                let action = match answer {
                    TaskAnswer::Mod(x) => format!("claim {x}"),
                    TaskAnswer::ZeroIndegree(true) => "decide yes".to_string(),
                    TaskAnswer::ZeroIndegree(false) => "decide no".to_string(),
                };
                writeln!(f, "{indent}{key} : {action} | {branch}")
            }
            StrategyTree::Query {
                query,
                forward,
                backward,
                ..
            } => {
                writeln!(f, "{indent}{key} : query {} {} | {branch}", query.u, query.v)?;
                forward.write(f, depth + 1)?;
                backward.write(f, depth + 1)
            }
        }
    }
}

/// Indented text, one node per line: `key : query u v | branch`,
/// `key : claim x | branch` or `key : decide yes|no | branch`, where
/// `branch` is `root` or the arc `a b` that led to the node.
impl fmt::Display for StrategyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl FromStr for StrategyTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = s
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l))
            .collect();
        let mut pos = 0;
        let tree = parse_node(&lines, &mut pos, 0, None)?;
        if let Some((line, _)) = lines.get(pos) {
            return Err(Error::parse(*line, "trailing lines after the tree"));
        }
        Ok(tree)
    }
}

fn parse_node(
    lines: &[(usize, &str)],
    pos: &mut usize,
    depth: usize,
    expected: Option<(usize, usize)>,
) -> Result<StrategyTree> {
    let &(line, raw) = lines
        .get(*pos)
        .ok_or_else(|| Error::parse(0, "tree ends early"))?;
    *pos += 1;
    let body = raw.trim_start_matches(' ');
    if raw.len() - body.len() != 2 * depth {
        return Err(Error::parse(line, format!("expected indent of depth {depth}")));
    }
    let bad = |m: &str| Error::parse(line, m.to_string());
    let (key, rest) = body.split_once(" : ").ok_or_else(|| bad("missing ` : `"))?;
    let key: u64 = key.trim().parse().map_err(|_| bad("bad state key"))?;
    let (action, branch) = rest.split_once(" | ").ok_or_else(|| bad("missing ` | `"))?;
    let branch = match branch.trim() {
        "root" => None,
        arc => {
            let a = crate::tournament::parse_arc(arc).ok_or_else(|| bad("bad branch arc"))?;
            Some((a.from, a.to))
        }
    };
    if branch != expected {
        return Err(bad("branch does not match the parent query"));
    }
    let words: Vec<&str> = action.split_whitespace().collect();
    match words.as_slice() {
        ["query", u, v] => {
            let u: usize = u.parse().map_err(|_| bad("bad vertex"))?;
            let v: usize = v.parse().map_err(|_| bad("bad vertex"))?;
            let query = EdgeQuery::new(u, v).map_err(|e| bad(&e.to_string()))?;
            let forward = parse_node(lines, pos, depth + 1, Some((u, v)))?;
            let backward = parse_node(lines, pos, depth + 1, Some((v, u)))?;
            Ok(StrategyTree::Query {
                key,
                branch,
                query,
                forward: Box::new(forward),
                backward: Box::new(backward),
            })
        }
        ["claim", x] => Ok(StrategyTree::Leaf {
            key,
            branch,
            answer: TaskAnswer::Mod(x.parse().map_err(|_| bad("bad vertex"))?),
        }),
        ["decide", "yes"] => Ok(StrategyTree::Leaf {
            key,
            branch,
            answer: TaskAnswer::ZeroIndegree(true),
        }),
        ["decide", "no"] => Ok(StrategyTree::Leaf {
            key,
            branch,
            answer: TaskAnswer::ZeroIndegree(false),
        }),
        _ => Err(bad("unknown action")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::mod_lower_bound;
    use crate::tournament::Arc;

    fn state(n: usize, arcs: &[(usize, usize)]) -> GameState {
        let k = KnowledgeState::from_arcs(n, arcs.iter().map(|&(a, b)| Arc::new(a, b))).unwrap();
        GameState::from_knowledge(&k).unwrap()
    }

    fn all_states(n: usize) -> impl Iterator<Item = GameState> {
        (0..3u64.pow(pair_count(n) as u32)).map(move |key| GameState::from_key(n, key).unwrap())
    }

    /// Brute-force terminal tests over every completion.
    fn brute_mod(s: &GameState) -> Option<VertexId> {
        let k = s.to_knowledge();
        let all: Vec<_> = k.completions_within(32).unwrap().collect();
        (0..s.n()).find(|&x| all.iter().all(|t| t.mod_vertices().contains(&x)))
    }

    fn brute_zero(s: &GameState) -> Option<bool> {
        let k = s.to_knowledge();
        let mut seen = k
            .completions_within(32)
            .unwrap()
            .map(|t| t.zero_indegree_vertex().is_some());
        let first = seen.next().unwrap();
        seen.all(|b| b == first).then_some(first)
    }

    #[test]
    fn key_round_trips() {
        for s in all_states(4) {
            let k = s.to_knowledge();
            assert_eq!(GameState::from_knowledge(&k).unwrap(), s);
            assert_eq!(k.q(), s.q());
        }
        assert!(GameState::from_key(3, 27).is_err());
    }

    #[test]
    fn terminal_mod_examples() {
        assert_eq!(terminal_mod(&state(3, &[(0, 1), (0, 2), (1, 2)])), Some(0));
        assert_eq!(terminal_mod(&state(3, &[(0, 1), (1, 2)])), Some(0));
        for n in 2..6 {
            assert_eq!(terminal_mod(&GameState::empty(n).unwrap()), None);
        }
    }

    #[test]
    fn terminal_zero_examples() {
        assert_eq!(terminal_zero_indegree(&state(3, &[(0, 1), (1, 2), (2, 0)])), Some(false));
        assert_eq!(terminal_zero_indegree(&state(3, &[(0, 1), (0, 2), (1, 2)])), Some(true));
        assert_eq!(terminal_zero_indegree(&GameState::empty(2).unwrap()), Some(true));
        assert_eq!(terminal_zero_indegree(&GameState::empty(3).unwrap()), None);
    }

    #[test]
    fn terminal_tests_match_enumeration() {
        for n in 1..=5 {
            for s in all_states(n) {
                assert_eq!(terminal_mod(&s), brute_mod(&s), "mod n={n} key={}", s.key());
                assert_eq!(terminal_zero_indegree(&s), brute_zero(&s), "zero n={n} key={}", s.key());
            }
        }
    }

    #[test]
    fn small_values() {
        let opts = SolverOptions::default();
        let v = exact_complexity(1, Task::ModFound, &opts).unwrap();
        assert_eq!(v.value, 0);
        let v = exact_complexity(2, Task::ModFound, &opts).unwrap();
        assert_eq!(v.value, 1);
        let v = exact_complexity(3, Task::ModFound, &opts).unwrap();
        assert!((2..=3).contains(&v.value));
        let v = exact_complexity(3, Task::ZeroIndegreeDecided, &opts).unwrap();
        assert!(v.value <= 5);
    }

    #[test]
    fn capability_limits() {
        let opts = SolverOptions::default();
        assert!(exact_complexity(6, Task::ModFound, &opts).is_err());
        assert!(exact_complexity(0, Task::ModFound, &opts).is_err());
        let big = SolverOptions {
            allow_n6: true,
            ..opts
        };
        assert!(exact_complexity(7, Task::ModFound, &big).is_err());
    }

    #[test]
    fn memo_is_transparent() {
        for n in 1..=4 {
            for task in [Task::ModFound, Task::ZeroIndegreeDecided] {
                let with = exact_complexity(n, task, &SolverOptions::default()).unwrap();
                let without = exact_complexity(
                    n,
                    task,
                    &SolverOptions {
                        memo: false,
                        with_tree: false,
                        ..SolverOptions::default()
                    },
                )
                .unwrap();
                assert_eq!(with.value, without.value, "n={n} {task}");
            }
        }
    }

    #[test]
    fn parallel_matches_serial() {
        for n in 1..=5 {
            for task in [Task::ModFound, Task::ZeroIndegreeDecided] {
                let serial = exact_complexity(n, task, &SolverOptions::default()).unwrap();
                let par = exact_complexity(
                    n,
                    task,
                    &SolverOptions {
                        parallel: true,
                        ..SolverOptions::default()
                    },
                )
                .unwrap();
                assert_eq!(serial, par);
            }
        }
    }

    #[test]
    fn trees_replay_and_bound_holds() {
        for n in 1..=5 {
            let v = exact_complexity(n, Task::ModFound, &SolverOptions::default()).unwrap();
            assert!(mod_lower_bound(n) <= v.value && v.value <= pair_count(n));
            let tree = v.tree.unwrap();
            assert_eq!(tree.depth(), v.value);
            for t in Tournament::all(n).unwrap() {
                let (answer, q) = tree.run(&t);
                assert!(q <= v.value);
                assert!(answer.is_correct_for(&t));
            }
        }
    }

    #[test]
    fn tree_text_round_trips() {
        for task in [Task::ModFound, Task::ZeroIndegreeDecided] {
            let tree = exact_complexity(4, task, &SolverOptions::default())
                .unwrap()
                .tree
                .unwrap();
            let text = tree.to_string();
            assert!(text.starts_with("0 : query "));
            assert_eq!(text.parse::<StrategyTree>().unwrap(), tree);
        }
    }

    #[test]
    fn tree_parse_rejects_mismatched_branches() {
        let good = "0 : query 0 1 | root\n  1 : claim 0 | 0 1\n  2 : claim 1 | 1 0\n";
        assert!(good.parse::<StrategyTree>().is_ok());
        let swapped = "0 : query 0 1 | root\n  1 : claim 0 | 1 0\n  2 : claim 1 | 0 1\n";
        assert!(swapped.parse::<StrategyTree>().is_err());
        let short = "0 : query 0 1 | root\n  1 : claim 0 | 0 1\n";
        assert!(short.parse::<StrategyTree>().is_err());
        let indent = "0 : query 0 1 | root\n1 : claim 0 | 0 1\n  2 : claim 1 | 1 0\n";
        assert!(indent.parse::<StrategyTree>().is_err());
    }

    #[test]
    #[ignore = "3^15 states; run with --ignored"]
    fn six_vertices() {
        let opts = SolverOptions {
            allow_n6: true,
            parallel: true,
            with_tree: false,
            ..SolverOptions::default()
        };
        let v = exact_complexity(6, Task::ModFound, &opts).unwrap();
        assert!(mod_lower_bound(6) <= v.value && v.value <= 15);
    }
}
