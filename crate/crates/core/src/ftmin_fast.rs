//! Expected-time-optimal selection pipeline for dense instances, and the
//! full general-`k` solver built on top of it.
//!
//! Stages:
//! 1. **Pre-selection**: run the knockout tournament with growth base
//!    `2^0.9`, truncated after `ceil(log2 log2 N)` rounds. This keeps about
//!    `N / log2 N` survivors in `O(N log log N)` comparisons, most of them
//!    from the acceptable band.
//! 2. **Weak oracles**: a relevance query on a survivor `x` is answered by
//!    comparing `x` against randomly sampled survivors. `O1` samples two
//!    elements and reports relevant iff neither compares smaller than `x`;
//!    `O2` samples one and reports relevant iff it compares larger. Both
//!    give guarantees only on the extreme rank bands of the survivor set
//!    (error at most `p1 = 5/11` resp. `p2 = 2/5` there), and each raw
//!    comparison is boosted to an effective error of at most `1/200`
//!    whenever the fault rate exceeds that.
//! 3. **Modified multi-phase process**: per survivor, a preliminary
//!    majority test of `8 * c_p1 * ceil(ln N) + 1` `O1` queries prunes the
//!    elements the weak oracles are unreliable for; survivors then face
//!    tests of `2 * ceil(2^i * ln N) * c_p2 + 1` `O2` queries for
//!    `i = 1 .. 1 + ceil(log2(N / log2 N))`. The first element passing
//!    everything is returned. `N` is the entry-pool size of stage 1, not
//!    the survivor count.
//!
//! The process's expected query count is linear in `N`; a configurable
//! safety budget (default ten times a full preliminary sweep plus one full
//! test suite) guards the tail, falling back to the full tournament on the
//! original input if ever hit.

use crate::error::{Error, Result};
use crate::oracle::{
    Comparer, ElementHandle, FaultProfile, NoisyComparator, Order, Relevance,
};
use crate::reduction::{reduce_ftmin, ReductionParams};
use crate::tournament::{build_entry_pool, play_rounds, run_tournament, DEFAULT_ALPHA};
use crate::util::ceil_snapped_f64;

/// Growth base of the pre-selection tournament.
pub fn preselect_alpha() -> f64 {
    (0.9f64).exp2()
}

/// Failure-probability base of the dense pipeline (success is
/// `1 - 2^(-n/21)`), used to size the reduction's candidate set.
pub fn expected_core_base() -> f64 {
    (1.0f64 / 21.0).exp2()
}

/// Number of truncated rounds for a pool of `pool_len` slots:
/// `ceil(log2 log2 N)`, clamped to the playable range.
pub fn preselect_rounds(pool_len: usize) -> u32 {
    let total = pool_len.trailing_zeros();
    if total == 0 {
        return 0;
    }
    let raw = ceil_snapped_f64((total as f64).log2()) as u32;
    raw.clamp(1, total)
}

/// Survivors of the truncated pre-selection tournament.
#[derive(Debug, Clone)]
pub struct PreselectedSet {
    /// Surviving elements, in bracket order.
    pub members: Vec<ElementHandle>,
    /// Entry-pool size `N`; the modified process sizes its schedule by it.
    pub parent_size: usize,
}

/// Pre-select about `N / log2 N` mostly-acceptable elements in
/// `O(N log log N)` worst-case comparisons.
pub fn preselect(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
) -> Result<PreselectedSet> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let pool = build_entry_pool(cmp, s)?;
    let parent_size = pool.len();
    let i_max = preselect_rounds(parent_size);
    let members = if i_max == 0 {
        pool
    } else {
        play_rounds(cmp, pool, 1, i_max, preselect_alpha())
    };
    Ok(PreselectedSet {
        members,
        parent_size,
    })
}

/// Error ceiling for raw comparisons feeding the weak oracles.
pub const WEAK_ORACLE_FAULT_CEILING: f64 = 1.0 / 200.0;

/// Constants of the two weak oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakOracleParams {
    pub p1: f64,
    pub p2: f64,
    pub cp1: u64,
    pub cp2: u64,
    /// Comparisons per boosted comparison: `2 * c_p * ceil(ln 200) + 1`
    /// when the raw fault rate exceeds 1/200, else 1.
    pub boost_reps: u64,
}

impl WeakOracleParams {
    pub fn new(profile: &FaultProfile) -> Self {
        let boost_reps = if profile.p() > WEAK_ORACLE_FAULT_CEILING {
            let t = ceil_snapped_f64((1.0 / WEAK_ORACLE_FAULT_CEILING).ln()) as u32;
            profile.boost_repetitions(t)
        } else {
            1
        };
        WeakOracleParams {
            p1: 5.0 / 11.0,
            p2: 2.0 / 5.0,
            cp1: crate::oracle::derive_cp(5.0 / 11.0).expect("constant in range"),
            cp2: crate::oracle::derive_cp(2.0 / 5.0).expect("constant in range"),
            boost_reps,
        }
    }
}

/// Sample one survivor as a fresh copy, guaranteed distinct from `x`.
/// Same-source ties resolve in `x`'s favor because the fresh copy always
/// carries a later ordinal.
fn sample_distinct(
    cmp: &mut NoisyComparator<'_>,
    s_prime: &[ElementHandle],
    x: ElementHandle,
) -> Result<ElementHandle> {
    let drawn = cmp.sample(s_prime, 1)?[0];
    if drawn == x {
        // Only possible when x was not issued by this comparator's tagger;
        // a second copy of the same source is strictly later.
        return Ok(cmp.fresh_copy(drawn));
    }
    Ok(drawn)
}

fn boosted_compare(
    cmp: &mut NoisyComparator<'_>,
    x: ElementHandle,
    y: ElementHandle,
    reps: u64,
) -> Order {
    let mut less = 0u64;
    for _ in 0..reps {
        if cmp.compare(x, y) == Order::Less {
            less += 1;
        }
    }
    if less * 2 > reps {
        Order::Less
    } else {
        Order::Greater
    }
}

/// Weak oracle `O1`: relevant iff neither of two sampled survivors compares
/// smaller than `x`. Costs exactly `2 * boost_reps` comparisons.
pub fn oracle_o1(
    cmp: &mut NoisyComparator<'_>,
    s_prime: &[ElementHandle],
    x: ElementHandle,
    params: &WeakOracleParams,
) -> Result<Relevance> {
    let first = sample_distinct(cmp, s_prime, x)?;
    let second = sample_distinct(cmp, s_prime, x)?;
    let r1 = boosted_compare(cmp, first, x, params.boost_reps);
    let r2 = boosted_compare(cmp, second, x, params.boost_reps);
    Ok(if r1 == Order::Less || r2 == Order::Less {
        Relevance::NotRelevant
    } else {
        Relevance::Relevant
    })
}

/// Weak oracle `O2`: relevant iff one sampled survivor compares larger than
/// `x`. Costs exactly `boost_reps` comparisons.
pub fn oracle_o2(
    cmp: &mut NoisyComparator<'_>,
    s_prime: &[ElementHandle],
    x: ElementHandle,
    params: &WeakOracleParams,
) -> Result<Relevance> {
    let sample = sample_distinct(cmp, s_prime, x)?;
    Ok(match boosted_compare(cmp, sample, x, params.boost_reps) {
        Order::Greater => Relevance::Relevant,
        Order::Less => Relevance::NotRelevant,
    })
}

/// Test lengths of the modified multi-phase process for entry-pool size `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedSchedule {
    preliminary: u64,
    eta: u32,
    ln_n: f64,
    cp2: u64,
    profile: FaultProfile,
}

impl ModifiedSchedule {
    pub fn new(schedule_n: usize, profile: &FaultProfile) -> Self {
        let params = WeakOracleParams::new(profile);
        let n = schedule_n.max(2) as f64;
        let ln_ceil = ceil_snapped_f64(n.ln());
        let eta = 1 + ceil_snapped_f64((n / n.log2()).log2()) as u32;
        ModifiedSchedule {
            preliminary: profile.scale_odd(8 * params.cp1 * ln_ceil + 1),
            eta,
            ln_n: n.ln(),
            cp2: params.cp2,
            profile: *profile,
        }
    }

    /// `O1` queries in the preliminary test: `8 * c_p1 * ceil(ln N) + 1`.
    pub fn preliminary_len(&self) -> u64 {
        self.preliminary
    }

    /// Number of `O2` test phases: `1 + ceil(log2(N / log2 N))`.
    pub fn eta(&self) -> u32 {
        self.eta
    }

    /// `O2` queries in test `i`: `2 * ceil(2^i * ln N) * c_p2 + 1`.
    pub fn test_len(&self, i: u32) -> u64 {
        debug_assert!(i >= 1 && i <= self.eta);
        let grown = ceil_snapped_f64((1u64 << i) as f64 * self.ln_n);
        self.profile.scale_odd(2 * grown * self.cp2 + 1)
    }

    /// Queries over all `O2` tests for one element passing everything.
    pub fn full_suite_queries(&self) -> u64 {
        (1..=self.eta).map(|i| self.test_len(i)).sum()
    }

    /// Default safety budget for a survivor set of the given size, in
    /// oracle invocations: ten times a full preliminary sweep plus one full
    /// test suite.
    pub fn default_query_budget(&self, survivors: usize) -> u64 {
        10 * (survivors as u64 * self.preliminary + self.full_suite_queries())
    }
}

/// Result of one modified multi-phase run.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiphaseOutcome {
    /// First element to pass the preliminary test and every phase.
    Selected(ElementHandle),
    /// Every element was discarded.
    Exhausted,
    /// The safety budget engaged before any element passed.
    BudgetExceeded,
}

/// Counted run of the modified multi-phase process.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiphaseRun {
    pub outcome: MultiphaseOutcome,
    pub o1_queries: u64,
    pub o2_queries: u64,
}

/// Run the modified multi-phase process over the survivor set, with an
/// optional override of the safety budget (oracle invocations).
pub fn modified_multiphase_run(
    cmp: &mut NoisyComparator<'_>,
    s_prime: &[ElementHandle],
    schedule_n: usize,
    budget_override: Option<u64>,
) -> Result<MultiphaseRun> {
    if s_prime.is_empty() {
        return Err(Error::EmptyInput);
    }
    let params = WeakOracleParams::new(cmp.profile());
    let schedule = ModifiedSchedule::new(schedule_n, cmp.profile());
    let budget = budget_override.unwrap_or_else(|| schedule.default_query_budget(s_prime.len()));

    let mut o1_queries = 0u64;
    let mut o2_queries = 0u64;
    let finish = |outcome, o1_queries, o2_queries| {
        Ok(MultiphaseRun {
            outcome,
            o1_queries,
            o2_queries,
        })
    };

    for &x in s_prime {
        if o1_queries + o2_queries > budget {
            return finish(MultiphaseOutcome::BudgetExceeded, o1_queries, o2_queries);
        }
        let mut relevant_votes = 0u64;
        for _ in 0..schedule.preliminary_len() {
            if oracle_o1(cmp, s_prime, x, &params)? == Relevance::Relevant {
                relevant_votes += 1;
            }
        }
        o1_queries += schedule.preliminary_len();
        if relevant_votes * 2 <= schedule.preliminary_len() {
            continue;
        }

        let mut passed_all = true;
        for i in 1..=schedule.eta() {
            if o1_queries + o2_queries > budget {
                return finish(MultiphaseOutcome::BudgetExceeded, o1_queries, o2_queries);
            }
            let len = schedule.test_len(i);
            let mut votes = 0u64;
            for _ in 0..len {
                if oracle_o2(cmp, s_prime, x, &params)? == Relevance::Relevant {
                    votes += 1;
                }
            }
            o2_queries += len;
            if votes * 2 <= len {
                passed_all = false;
                break;
            }
        }
        if passed_all {
            return finish(MultiphaseOutcome::Selected(x), o1_queries, o2_queries);
        }
    }
    finish(MultiphaseOutcome::Exhausted, o1_queries, o2_queries)
}

/// Modified multi-phase process with the first-element fallback on
/// exhaustion or budget stop.
pub fn modified_multiphase(
    cmp: &mut NoisyComparator<'_>,
    s_prime: &[ElementHandle],
    schedule_n: usize,
) -> Result<ElementHandle> {
    let run = modified_multiphase_run(cmp, s_prime, schedule_n, None)?;
    Ok(match run.outcome {
        MultiphaseOutcome::Selected(x) => x,
        _ => s_prime[0],
    })
}

/// Dense-instance solver: pre-selection plus the modified multi-phase
/// process, falling back to the full tournament if the safety budget ever
/// engages.
pub fn ftmin_fast_dense(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
) -> Result<ElementHandle> {
    ftmin_fast_dense_with_budget(cmp, s, None)
}

/// Dense solver with an explicit multi-phase safety budget.
pub fn ftmin_fast_dense_with_budget(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
    budget_override: Option<u64>,
) -> Result<ElementHandle> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if s.len() == 1 {
        return Ok(s[0]);
    }
    let pre = preselect(cmp, s)?;
    let run = modified_multiphase_run(cmp, &pre.members, pre.parent_size, budget_override)?;
    match run.outcome {
        MultiphaseOutcome::Selected(x) => Ok(x),
        MultiphaseOutcome::Exhausted => Ok(pre.members[0]),
        MultiphaseOutcome::BudgetExceeded => run_tournament(cmp, s, DEFAULT_ALPHA),
    }
}

/// Which dense core the general solver uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreMode {
    /// Knockout tournament: `O(n log n)` worst-case comparisons.
    WorstCase,
    /// Pre-selection + modified multi-phase: `O(n log log n)` expected.
    Expected,
}

/// General-`k` selection: candidate-set reduction with the chosen dense
/// core. Returns a handle resolving into `s`.
pub fn ftmin(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
    k: usize,
    mode: CoreMode,
) -> Result<ElementHandle> {
    let core_base = match mode {
        CoreMode::WorstCase => 2.0,
        CoreMode::Expected => expected_core_base(),
    };
    let params = ReductionParams::ftmin_with_core_base(s.len(), k, cmp.profile(), core_base)?;
    match mode {
        CoreMode::WorstCase => reduce_ftmin(cmp, s, k, &params, |c, set| {
            run_tournament(c, set, DEFAULT_ALPHA)
        }),
        CoreMode::Expected => reduce_ftmin(cmp, s, k, &params, ftmin_fast_dense),
    }
}
