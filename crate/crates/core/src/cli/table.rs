use serde::Serialize;

use super::experiment::write_rows;
use super::Format;
use crate::adversary::mod_lower_bound;
use crate::tournament::pair_count;

/// Total pairs, the MOD lower bound, and the slack between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub pairs: usize,
    pub bound: usize,
    pub gap: usize,
}

pub fn bound_rows(n_max: usize) -> Vec<BoundRow> {
    (1..=n_max)
        .map(|n| {
            let (pairs, bound) = (pair_count(n), mod_lower_bound(n));
            BoundRow {
                n,
                pairs,
                bound,
                gap: pairs - bound,
            }
        })
        .collect()
}

pub fn emit_bound_table(n_max: usize, format: Format) -> String {
    let mut buf = Vec::new();
    write_rows(&bound_rows(n_max), format, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8")
}
