//! Query-only retrieval: return one relevant element out of `n` using an
//! unreliable yes/no oracle.
//!
//! The dense solver scans elements in order and subjects each to a gauntlet
//! of `1 + log2 n` majority tests whose lengths double per phase
//! (`2^(i-1) * 6 * c_p + 1` queries for test `i`). An element is discarded
//! at its first failed test; the first element to clear every phase is
//! returned. Non-relevant elements die in an expected constant number of
//! phases while a relevant element clears the gauntlet with probability
//! bounded away from zero, so on a dense instance (at least three quarters
//! relevant) the process answers correctly in `O(n)` queries with
//! probability exponentially close to one. A hard budget of `61 * c_p * n`
//! queries caps the worst case: the budget is checked before each test
//! starts (a test in progress always completes), and on budget exhaustion
//! or after the last element is discarded the scan falls back to the first
//! input element.
//!
//! General targets go through the candidate-set reduction with simulated
//! comparisons, then the dense solver.

use crate::error::{Error, Result};
use crate::oracle::{
    majority_query, ElementHandle, FaultProfile, NoisyRelevanceOracle, Relevance,
};
use crate::reduction::{build_candidate_set_findone, ReductionParams};

/// Test lengths and query budget of the dense multi-phase process for an
/// input of `n` elements (a power of two).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSchedule {
    phases: u32,
    cap: u64,
    cp: u64,
    profile: FaultProfile,
}

impl PhaseSchedule {
    pub fn new(n: usize, profile: &FaultProfile) -> Self {
        debug_assert!(n.is_power_of_two());
        let cp = profile.cp();
        PhaseSchedule {
            phases: 1 + n.trailing_zeros(),
            cap: profile.scale_budget(61 * cp * n as u64),
            cp,
            profile: *profile,
        }
    }

    /// Number of tests an element must pass: `1 + log2 n`.
    pub fn phases(&self) -> u32 {
        self.phases
    }

    /// Hard query budget: `61 * c_p * n`, scaled under the practical
    /// profile together with the test lengths it bounds.
    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Length of test `i` (1-based): `2^(i-1) * 6 * c_p + 1` queries.
    pub fn test_len(&self, i: u32) -> u64 {
        debug_assert!(i >= 1 && i <= self.phases);
        self.profile.scale_odd((1u64 << (i - 1)) * 6 * self.cp + 1)
    }

    /// Queries consumed by an element that passes every test.
    pub fn pass_all_queries(&self) -> u64 {
        (1..=self.phases).map(|i| self.test_len(i)).sum()
    }

    /// Queries consumed by an element discarded at test `i`.
    pub fn fail_at_queries(&self, i: u32) -> u64 {
        (1..=i).map(|j| self.test_len(j)).sum()
    }
}

/// Dense retrieval: first element to clear every phase, with the hard query
/// budget and first-element fallback described in the module docs.
///
/// Inputs whose length is not a power of two are padded with extra
/// elements sampled with replacement (original order is preserved as the
/// scan prefix).
pub fn find_one_dense(
    oracle: &mut NoisyRelevanceOracle,
    s: &[ElementHandle],
) -> Result<ElementHandle> {
    find_one_dense_with_cap(oracle, s, None)
}

/// Dense retrieval with an explicit query-budget override. The default
/// budget (`61 * c_p * n`) binds only on exponentially rare noise
/// trajectories; the override exists so that the stop-and-fall-back path
/// stays testable.
pub fn find_one_dense_with_cap(
    oracle: &mut NoisyRelevanceOracle,
    s: &[ElementHandle],
    cap_override: Option<u64>,
) -> Result<ElementHandle> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let fallback = s[0];
    let target = s.len().next_power_of_two();
    let mut scan: Vec<ElementHandle> = s.to_vec();
    if target > s.len() {
        scan.extend(oracle.sample(s, target - s.len())?);
    }

    let schedule = PhaseSchedule::new(target, oracle.profile());
    let cap = cap_override.unwrap_or_else(|| schedule.cap());
    let start = oracle.queries_used();

    for &x in &scan {
        let mut passed_all = true;
        for i in 1..=schedule.phases() {
            if oracle.queries_used() - start > cap {
                return Ok(fallback);
            }
            if majority_query(oracle, x, schedule.test_len(i)) == Relevance::NotRelevant {
                passed_all = false;
                break;
            }
        }
        if passed_all {
            return Ok(x);
        }
    }
    Ok(fallback)
}

/// General retrieval: build a dense candidate set via simulated
/// comparisons, then run the dense solver on it.
pub fn find_one(
    oracle: &mut NoisyRelevanceOracle,
    s: &[ElementHandle],
    k: usize,
    params: &ReductionParams,
) -> Result<ElementHandle> {
    let candidates = build_candidate_set_findone(oracle, s, k, params)?;
    find_one_dense(oracle, &candidates)
}
