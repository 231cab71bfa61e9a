//! Reduction from general target rank `k` to dense instances.
//!
//! A dense-instance solver only needs to return an element from the smallest
//! three quarters of its input. To solve the general problem, build a
//! candidate set `S*` of `m` elements (the smallest power of two at least
//! `gamma * log2 n`), where each candidate is the minimum-finder's answer on
//! an independent sample of `ceil(3n/k)` elements drawn with replacement.
//! Each sampled set misses the target band with probability at most `e^-3`
//! and the minimum-finder errs with probability at most its budget, so each
//! candidate lands in the target band independently with probability at
//! least `5/6`; a Chernoff bound then makes `S*` dense (at least `3m/4`
//! good) with probability exponentially high in `m`.
//!
//! The retrieval variant runs the same construction against a yes/no
//! relevance oracle by simulating every pairwise comparison with
//! `6 * c_p + 1` majority-voted queries per side: if the two majorities
//! differ, the side voted relevant is reported smaller; coinciding
//! majorities fall back to the consistent lexicographic handle order. A
//! simulated comparison is wrong with probability at most `2 * e^-3`, which
//! is what the minimum-finder's own boosting has to overcome (hence the
//! simulated source reports the multiplier for that error rate, not for the
//! raw query fault rate).

use crate::error::{Error, Result};
use crate::findmin::find_min;
use crate::oracle::{
    majority_query, Comparer, ElementHandle, FaultProfile, NoisyComparator, NoisyRelevanceOracle,
    Order, Relevance,
};
use crate::util::next_pow2_at_least;

/// Majority multiplier for simulated comparisons, i.e. `derive_cp` of the
/// simulated error ceiling `2 * e^-3`.
pub const SIM_COMPARISON_CP: u64 = 6;

/// Failure budget of the per-set minimum search (rank path).
pub const FTMIN_INNER_Q: f64 = 0.1;
/// Failure budget of the per-set minimum search (retrieval path).
pub const FINDONE_INNER_Q: f64 = 1.0 / 15.0;

/// Sizing of the candidate-set construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionParams {
    /// Candidate-set multiplier.
    pub gamma: f64,
    /// Number of candidate sets: smallest power of two >= `gamma * log2 n`.
    pub m: usize,
    /// Elements sampled per set: `ceil(3n/k)`.
    pub sample_size: usize,
    /// Failure budget handed to the per-set minimum search.
    pub q_inner: f64,
}

impl ReductionParams {
    fn new(n: usize, k: usize, gamma: f64, q_inner: f64) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        let m = next_pow2_at_least(gamma * (n as f64).log2()) as usize;
        Ok(ReductionParams {
            gamma,
            m,
            sample_size: (3 * n).div_ceil(k),
            q_inner,
        })
    }

    /// Parameters for the rank path, with the dense core's failure base
    /// (the `c` in a `c^-n` success guarantee) fixing gamma under the
    /// paper-faithful profile.
    pub fn ftmin_with_core_base(
        n: usize,
        k: usize,
        profile: &FaultProfile,
        core_base: f64,
    ) -> Result<Self> {
        Self::new(n, k, profile.gamma(core_base), FTMIN_INNER_Q)
    }

    /// Rank path with the knockout tournament's failure base (2).
    pub fn ftmin(n: usize, k: usize, profile: &FaultProfile) -> Result<Self> {
        Self::ftmin_with_core_base(n, k, profile, 2.0)
    }

    /// Retrieval path.
    pub fn findone(n: usize, k: usize, profile: &FaultProfile) -> Result<Self> {
        Self::new(n, k, profile.gamma(2.0), FINDONE_INNER_Q)
    }
}

/// Build the candidate set for the rank path: `m` winners of the
/// minimum-search over independent samples of `sample_size` elements.
pub fn build_candidate_set_ftmin(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
    k: usize,
    params: &ReductionParams,
) -> Result<Vec<ElementHandle>> {
    if k < 1 || k >= s.len() {
        return Err(Error::InvalidK { k, n: s.len() });
    }
    let mut candidates = Vec::with_capacity(params.m);
    for _ in 0..params.m {
        let set = cmp.sample(s, params.sample_size)?;
        candidates.push(find_min(cmp, &set, params.q_inner)?);
    }
    Ok(candidates)
}

/// Solve the general-`k` problem by handing the candidate set to a
/// dense-instance core solver.
pub fn reduce_ftmin<F>(
    cmp: &mut NoisyComparator<'_>,
    s: &[ElementHandle],
    k: usize,
    params: &ReductionParams,
    mut core: F,
) -> Result<ElementHandle>
where
    F: FnMut(&mut NoisyComparator<'_>, &[ElementHandle]) -> Result<ElementHandle>,
{
    let candidates = build_candidate_set_ftmin(cmp, s, k, params)?;
    core(cmp, &candidates)
}

/// Comparison source built from relevance queries: `6 * c_p + 1`
/// majority-voted queries per side, relevant-majority side reported smaller,
/// coinciding majorities broken by the consistent handle order.
pub struct QuerySimComparator<'a> {
    oracle: &'a mut NoisyRelevanceOracle,
    votes_per_side: u64,
}

impl<'a> QuerySimComparator<'a> {
    pub fn new(oracle: &'a mut NoisyRelevanceOracle) -> Self {
        let votes_per_side = oracle
            .profile()
            .scale_odd(6 * oracle.profile().cp() + 1);
        QuerySimComparator {
            oracle,
            votes_per_side,
        }
    }

    /// Queries consumed by one simulated comparison.
    pub fn queries_per_comparison(&self) -> u64 {
        2 * self.votes_per_side
    }
}

impl Comparer for QuerySimComparator<'_> {
    fn compare(&mut self, x: ElementHandle, y: ElementHandle) -> Order {
        let for_x = majority_query(self.oracle, x, self.votes_per_side);
        let for_y = majority_query(self.oracle, y, self.votes_per_side);
        match (for_x, for_y) {
            (Relevance::Relevant, Relevance::NotRelevant) => Order::Less,
            (Relevance::NotRelevant, Relevance::Relevant) => Order::Greater,
            _ => {
                if x < y {
                    Order::Less
                } else {
                    Order::Greater
                }
            }
        }
    }

    fn boost_cp(&self) -> u64 {
        SIM_COMPARISON_CP
    }

    fn profile(&self) -> &FaultProfile {
        self.oracle.profile()
    }
}

/// Build the candidate set for the retrieval path by simulating the
/// minimum-search over query-built comparisons.
pub fn build_candidate_set_findone(
    oracle: &mut NoisyRelevanceOracle,
    s: &[ElementHandle],
    k: usize,
    params: &ReductionParams,
) -> Result<Vec<ElementHandle>> {
    if k < 1 || k >= s.len() {
        return Err(Error::InvalidK { k, n: s.len() });
    }
    let mut candidates = Vec::with_capacity(params.m);
    for _ in 0..params.m {
        let set = oracle.sample(s, params.sample_size)?;
        let mut sim = QuerySimComparator::new(oracle);
        candidates.push(find_min(&mut sim, &set, params.q_inner)?);
    }
    Ok(candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findmin::find_min_comparisons;
    use crate::oracle::{derive_cp, GroundTruth, ProfileKind};
    use crate::tournament::{run_tournament, DEFAULT_ALPHA};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn profile(kind: ProfileKind, p: f64) -> FaultProfile {
        FaultProfile::new(kind, p).unwrap()
    }

    #[test]
    fn sim_cp_matches_derived_constant() {
        let sim_error = 2.0 * (-3.0f64).exp();
        assert_eq!(SIM_COMPARISON_CP, derive_cp(sim_error).unwrap());
    }

    #[test]
    fn params_sizing() {
        let paper = profile(ProfileKind::PaperFaithful, 0.1);
        let p = ReductionParams::ftmin(1024, 128, &paper).unwrap();
        assert_eq!(p.gamma, 600.0);
        assert_eq!(p.m, 8192);
        assert_eq!(p.sample_size, 24);
        assert_eq!(p.q_inner, 0.1);

        let practical = profile(ProfileKind::Practical, 0.1);
        let p = ReductionParams::ftmin(4096, 512, &practical).unwrap();
        assert_eq!(p.m, 128);
        assert_eq!(p.sample_size, 24);

        let p = ReductionParams::findone(4096, 512, &practical).unwrap();
        assert_eq!(p.sample_size, 24);
        assert!((p.q_inner - 1.0 / 15.0).abs() < 1e-15);

        // Non-integer 3n/k rounds up.
        let p = ReductionParams::ftmin(1000, 300, &practical).unwrap();
        assert_eq!(p.sample_size, 10);

        assert!(ReductionParams::ftmin(16, 16, &practical).is_err());
        assert!(ReductionParams::ftmin(16, 0, &practical).is_err());
    }

    #[test]
    fn m_is_power_of_two_and_large_enough() {
        let practical = profile(ProfileKind::Practical, 0.1);
        for n in [4usize, 10, 100, 1000, 4096] {
            for gamma in [1.0, 8.0, 37.5, 600.0] {
                let prof = practical.with_gamma(gamma).unwrap();
                let p = ReductionParams::ftmin(n, 1, &prof).unwrap();
                assert!(p.m.is_power_of_two());
                assert!(p.m as f64 >= gamma * (n as f64).log2());
            }
        }
    }

    #[test]
    fn candidates_resolve_to_input_sources_and_are_small_at_p_zero() {
        let n = 32;
        let k = 31;
        let gt = GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let handles = gt.base_handles();
        let prof = profile(ProfileKind::Practical, 0.0);
        let params = ReductionParams::ftmin(n, k, &prof).unwrap();
        let mut cmp = NoisyComparator::new(&gt, prof, ChaCha8Rng::seed_from_u64(10));
        let cands = build_candidate_set_ftmin(&mut cmp, &handles, k, &params).unwrap();
        assert_eq!(cands.len(), params.m);
        for c in &cands {
            assert!((c.source as usize) < n);
            assert!(gt.is_small(*c), "exact minimum of a sampled set is small");
        }
    }

    #[test]
    fn candidate_build_cost_is_deterministic() {
        let n = 256;
        let k = 64;
        let gt = GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let prof = profile(ProfileKind::Practical, 0.1);
        let params = ReductionParams::ftmin(n, k, &prof).unwrap();
        let expected = params.m as u64
            * find_min_comparisons(params.sample_size, params.q_inner, prof.cp(), &prof).unwrap();
        for seed in [1u64, 2, 3] {
            let mut cmp = NoisyComparator::new(&gt, prof, ChaCha8Rng::seed_from_u64(seed));
            build_candidate_set_ftmin(&mut cmp, &gt.base_handles(), k, &params).unwrap();
            assert_eq!(cmp.comparisons_used(), expected);
        }
    }

    #[test]
    fn candidate_sets_are_mostly_small() {
        // Monte Carlo for the dense-candidate guarantee.
        let n = 4096;
        let k = 512;
        let trials = 500u64;
        let prof = profile(ProfileKind::Practical, 0.1);
        let params = ReductionParams::ftmin(n, k, &prof).unwrap();
        let mut dense_trials = 0u64;
        for seed in 0..trials {
            let gt =
                GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(40_000 + seed)).unwrap();
            let mut cmp = NoisyComparator::new(&gt, prof, ChaCha8Rng::seed_from_u64(seed));
            let cands = build_candidate_set_ftmin(&mut cmp, &gt.base_handles(), k, &params)
                .unwrap();
            let small = cands.iter().filter(|&&c| gt.is_small(c)).count();
            if 4 * small >= 3 * params.m {
                dense_trials += 1;
            }
        }
        let rate = dense_trials as f64 / trials as f64;
        assert!(rate >= 0.99, "dense-candidate rate {rate}");
    }

    #[test]
    fn reduce_with_tournament_core_succeeds() {
        let n = 4096;
        let k = 512;
        let trials = 500u64;
        let prof = profile(ProfileKind::Practical, 0.1);
        let params = ReductionParams::ftmin(n, k, &prof).unwrap();
        let mut successes = 0u64;
        for seed in 0..trials {
            let gt =
                GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(50_000 + seed)).unwrap();
            let mut cmp = NoisyComparator::new(&gt, prof, ChaCha8Rng::seed_from_u64(seed));
            let got = reduce_ftmin(&mut cmp, &gt.base_handles(), k, &params, |c, s| {
                run_tournament(c, s, DEFAULT_ALPHA)
            })
            .unwrap();
            assert!((got.source as usize) < n);
            if gt.is_small(got) {
                successes += 1;
            }
        }
        let rate = successes as f64 / trials as f64;
        assert!(rate >= 0.95, "success rate {rate}");
    }

    #[test]
    fn reduce_with_broken_core_degrades_to_single_candidate_rate() {
        // A core that ignores its input beyond the first element succeeds
        // exactly as often as one candidate is small: clearly above 5/6 but
        // no longer with high probability, demonstrating that the reduction
        // relies on its core.
        let n = 1024;
        let k = 128;
        let trials = 500u64;
        let prof = profile(ProfileKind::Practical, 0.1);
        let params = ReductionParams::ftmin(n, k, &prof).unwrap();
        let mut successes = 0u64;
        for seed in 0..trials {
            let gt =
                GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(60_000 + seed)).unwrap();
            let mut cmp = NoisyComparator::new(&gt, prof, ChaCha8Rng::seed_from_u64(seed));
            let got =
                reduce_ftmin(&mut cmp, &gt.base_handles(), k, &params, |_, s| Ok(s[0])).unwrap();
            if gt.is_small(got) {
                successes += 1;
            }
        }
        let rate = successes as f64 / trials as f64;
        let sigma = (5.0 / 6.0 * (1.0 / 6.0) / trials as f64).sqrt();
        assert!(rate >= 5.0 / 6.0 - 3.0 * sigma, "rate {rate}");
        assert!(rate < 1.0, "a broken core should visibly fail sometimes");
    }

    #[test]
    fn simulated_comparison_costs_exactly_two_vote_batches() {
        let gt = GroundTruth::identity(16, 8).unwrap();
        let prof = profile(ProfileKind::PaperFaithful, 0.1);
        let mut oracle =
            NoisyRelevanceOracle::from_ground_truth(&gt, prof, ChaCha8Rng::seed_from_u64(1));
        let mut sim = QuerySimComparator::new(&mut oracle);
        assert_eq!(sim.queries_per_comparison(), 2 * (6 * 6 + 1));
        sim.compare(ElementHandle::base(0), ElementHandle::base(9));
        assert_eq!(oracle.queries_used(), 2 * (6 * 6 + 1));
    }

    #[test]
    fn simulated_comparison_orders_by_relevance_at_p_zero() {
        let gt = GroundTruth::identity(16, 8).unwrap();
        let prof = profile(ProfileKind::PaperFaithful, 0.0);
        let mut oracle =
            NoisyRelevanceOracle::from_ground_truth(&gt, prof, ChaCha8Rng::seed_from_u64(1));
        let mut sim = QuerySimComparator::new(&mut oracle);
        // relevant vs non-relevant: relevant side is smaller.
        assert_eq!(
            sim.compare(ElementHandle::base(2), ElementHandle::base(12)),
            Order::Less
        );
        assert_eq!(
            sim.compare(ElementHandle::base(12), ElementHandle::base(2)),
            Order::Greater
        );
        // Coinciding majorities: consistent lexicographic order.
        assert_eq!(
            sim.compare(ElementHandle::base(3), ElementHandle::base(5)),
            Order::Less
        );
        assert_eq!(
            sim.compare(ElementHandle::base(5), ElementHandle::base(3)),
            Order::Greater
        );
    }

    #[test]
    fn findone_candidates_are_mostly_relevant() {
        let n = 1024;
        let k = 512;
        let trials = 300u64;
        let prof = profile(ProfileKind::Practical, 0.1);
        let params = ReductionParams::findone(n, k, &prof).unwrap();
        let mut dense_trials = 0u64;
        for seed in 0..trials {
            let gt =
                GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(70_000 + seed)).unwrap();
            let mut oracle = NoisyRelevanceOracle::from_ground_truth(
                &gt,
                prof,
                ChaCha8Rng::seed_from_u64(seed),
            );
            let cands =
                build_candidate_set_findone(&mut oracle, &gt.base_handles(), k, &params).unwrap();
            assert_eq!(cands.len(), params.m);
            let relevant = cands.iter().filter(|&&c| gt.is_small(c)).count();
            if 4 * relevant >= 3 * params.m {
                dense_trials += 1;
            }
        }
        let rate = dense_trials as f64 / trials as f64;
        assert!(rate >= 0.99, "dense-candidate rate {rate}");
    }

    #[test]
    fn findone_candidates_relevant_at_p_zero() {
        let n = 64;
        let k = 32;
        let gt = GroundTruth::random(n, k, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let prof = profile(ProfileKind::Practical, 0.0);
        let params = ReductionParams::findone(n, k, &prof).unwrap();
        let mut oracle =
            NoisyRelevanceOracle::from_ground_truth(&gt, prof, ChaCha8Rng::seed_from_u64(2));
        let cands =
            build_candidate_set_findone(&mut oracle, &gt.base_handles(), k, &params).unwrap();
        // Without faults, any sampled set containing a relevant element
        // yields a relevant candidate; with k = n/2 and 6 draws per set a
        // relevant-free set is a 1.6% event per set, so spot-check the bulk.
        let relevant = cands.iter().filter(|&&c| gt.is_small(c)).count();
        assert!(4 * relevant >= 3 * params.m);
    }
}
