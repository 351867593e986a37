//! Binary-inquiry search for kings and maximum out-degree vertices in
//! tournaments.
//!
//! - [`tournament`]: tournaments, constructions and structural predicates.
//! - [`oracle`]: inquiry sessions, transcripts and knowledge states.
//! - [`adversary`]: the regular-tournament adversary and its refutations.
//! - [`algorithms`]: knockout, exhaustive and certified MOD search.
//! - [`exact`]: memoized minimax over partial orientations for tiny `n`.
//! - [`cli`]: experiments, bound tables and the stdio oracle protocol.

pub mod adversary;
pub mod algorithms;
pub mod cli;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod tournament;

pub use error::{Error, Result};
pub use tournament::{Arc, Tournament, VertexId};
