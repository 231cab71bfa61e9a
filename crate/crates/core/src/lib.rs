//! Fault-tolerant approximate minimum selection and retrieval under
//! unreliable comparisons and queries, plus a Monte Carlo harness that
//! validates success probabilities and operation counts against ground
//! truth.
//!
//! The problem model: a hidden total order over `n` elements, observable
//! only through pairwise comparisons (or yes/no relevance queries) that are
//! independently wrong with probability `p < 1/2`. The solvers here return
//! one of the `k` smallest (or one relevant) element with quantified success
//! probability while counting every oracle call exactly.
//!
//! Module map:
//! - [`oracle`]: element handles, hidden order, the two fault-injecting
//!   oracles, and majority-vote boosting.
//! - [`findmin`]: exact-minimum selection with failure budget `q`.
//! - [`tournament`]: knockout tournament for dense instances (three quarters
//!   of the elements acceptable), full and truncated.
//! - [`reduction`]: turns any dense-instance solver into a general-`k`
//!   solver by sampling candidate sets.
//! - [`retrieval`]: multi-phase testing process for query-only retrieval.
//! - [`ftmin_fast`]: expected-time-optimal pipeline (pre-selection, weak
//!   comparison-built oracles, modified multi-phase process).
//! - [`harness`]: experiment configs, trial runner, sweeps, exactness gate,
//!   CSV/JSON reports.

pub mod error;
pub mod findmin;
pub mod ftmin_fast;
pub mod harness;
pub mod oracle;
pub mod reduction;
pub mod retrieval;
pub mod stats;
pub mod tournament;
mod util;

pub use error::{Error, Result};
pub use oracle::{
    derive_cp, majority_compare, majority_query, sample_with_replacement, Comparer, CopyTagger,
    ElementHandle, FaultProfile, GroundTruth, NoisyComparator, NoisyRelevanceOracle, Order,
    ProfileKind, Relevance,
};
