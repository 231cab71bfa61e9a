//! Unreliable comparison and relevance oracles over a hidden total order.
//!
//! Every selection algorithm in this crate sees the input only through the
//! two oracle types defined here: [`NoisyComparator`] answers "is x smaller
//! than y?" and [`NoisyRelevanceOracle`] answers "is x relevant?", each
//! independently wrong with probability exactly `p < 1/2` per call. The true
//! order lives in [`GroundTruth`] and is readable only by the harness that
//! grades results; algorithms receive oracles and element handles, nothing
//! else.
//!
//! Repeating an unreliable comparison `2 * c_p * t + 1` times and taking the
//! strict majority is wrong with probability at most `e^-t`, where
//! `c_p = ceil(4(1-p) / (1-2p)^2)`. That single boosting fact, exposed as
//! [`majority_compare`] / [`majority_query`], is what every higher-level
//! schedule in this crate is built from.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome of a pairwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Less,
    Greater,
}

impl Order {
    pub fn flipped(self) -> Self {
        match self {
            Order::Less => Order::Greater,
            Order::Greater => Order::Less,
        }
    }
}

/// Outcome of a relevance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relevance {
    Relevant,
    NotRelevant,
}

/// Opaque reference to an input element or to a sampled copy of one.
///
/// `source` identifies the underlying element; `copy` distinguishes copies
/// produced by sampling with replacement. Handles carry no rank information.
/// The derived lexicographic order on `(source, copy)` is the consistent
/// tie-break used whenever two copies of the same source are compared.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct ElementHandle {
    pub source: u32,
    pub copy: u32,
}

impl ElementHandle {
    /// Handle for an original (uncopied) input element.
    pub fn base(source: u32) -> Self {
        ElementHandle { source, copy: 0 }
    }
}

/// Hidden total order over `n` elements plus the target rank threshold `k`.
///
/// Only the harness may consult ranks; algorithms never see this type.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    rank_by_source: Vec<u32>,
    k: usize,
}

impl GroundTruth {
    /// Build from an explicit rank permutation: `ranks[id]` is the true rank
    /// of element `id` in `[0, n)`.
    pub fn from_permutation(ranks: Vec<u32>, k: usize) -> Result<Self> {
        let n = ranks.len();
        if k < 1 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        let mut seen = vec![false; n];
        for &r in &ranks {
            if (r as usize) >= n || seen[r as usize] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[r as usize] = true;
        }
        Ok(GroundTruth {
            rank_by_source: ranks,
            k,
        })
    }

    /// Identity order: element `id` has rank `id`.
    pub fn identity(n: usize, k: usize) -> Result<Self> {
        Self::from_permutation((0..n as u32).collect(), k)
    }

    /// Uniformly random hidden order (Fisher-Yates over the rank map).
    pub fn random(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let mut ranks: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            ranks.swap(i, j);
        }
        Self::from_permutation(ranks, k)
    }

    pub fn n(&self) -> usize {
        self.rank_by_source.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True rank of the element behind a handle. Harness-only.
    pub fn rank(&self, h: ElementHandle) -> u32 {
        self.rank_by_source[h.source as usize]
    }

    /// Is the element one of the `k` smallest?
    pub fn is_small(&self, h: ElementHandle) -> bool {
        (self.rank(h) as usize) < self.k
    }

    /// Handles for the original input set, in id order.
    pub fn base_handles(&self) -> Vec<ElementHandle> {
        (0..self.n() as u32).map(ElementHandle::base).collect()
    }

    /// Source ids of the `k` smallest elements (the relevant set for
    /// retrieval instances).
    pub fn relevant_sources(&self) -> Vec<bool> {
        self.rank_by_source
            .iter()
            .map(|&r| (r as usize) < self.k)
            .collect()
    }
}

/// Repetition multiplier for majority boosting:
/// `c_p = ceil(4(1-p) / (1-2p)^2)`.
///
/// With this constant, a majority vote over `2 * c_p * t + 1` unreliable
/// answers is wrong with probability at most `e^-t`.
pub fn derive_cp(p: f64) -> Result<u64> {
    if !(0.0..0.5).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    let v = 4.0 * (1.0 - p) / ((1.0 - 2.0 * p) * (1.0 - 2.0 * p));
    Ok(crate::util::ceil_snapped_f64(v))
}

/// Constants regime for repetition schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// Published formulas verbatim (gamma = max(600, 2/log2 c), unscaled
    /// repetition counts). Structurally exact but astronomically conservative
    /// at desk scale.
    PaperFaithful,
    /// Same schedule structure with a small candidate-set multiplier
    /// (`gamma`, default 8) and an optional repetition down-scaling, making
    /// statistical validation feasible on small instances.
    Practical,
}

/// Fault probability `p`, its derived boosting constant `c_p`, and the
/// constants profile governing schedule sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultProfile {
    p: f64,
    c_p: u64,
    kind: ProfileKind,
    gamma_override: Option<f64>,
    repetition_scale: Option<f64>,
}

pub const PRACTICAL_DEFAULT_GAMMA: f64 = 8.0;

impl FaultProfile {
    pub fn paper_faithful(p: f64) -> Result<Self> {
        Ok(FaultProfile {
            p,
            c_p: derive_cp(p)?,
            kind: ProfileKind::PaperFaithful,
            gamma_override: None,
            repetition_scale: None,
        })
    }

    pub fn practical(p: f64) -> Result<Self> {
        Ok(FaultProfile {
            p,
            c_p: derive_cp(p)?,
            kind: ProfileKind::Practical,
            gamma_override: None,
            repetition_scale: None,
        })
    }

    pub fn new(kind: ProfileKind, p: f64) -> Result<Self> {
        match kind {
            ProfileKind::PaperFaithful => Self::paper_faithful(p),
            ProfileKind::Practical => Self::practical(p),
        }
    }

    /// Practical-profile override for the candidate-set multiplier gamma.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if self.kind != ProfileKind::Practical {
            return Err(Error::InvalidConfig(
                "gamma override is only available under the practical profile".into(),
            ));
        }
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        self.gamma_override = Some(gamma);
        Ok(self)
    }

    /// Practical-profile multiplier applied to every repetition count
    /// (result rounded up to the next odd integer >= 1).
    pub fn with_repetition_scale(mut self, scale: f64) -> Result<Self> {
        if self.kind != ProfileKind::Practical {
            return Err(Error::InvalidConfig(
                "repetition scale is only available under the practical profile".into(),
            ));
        }
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "repetition scale must lie in (0, 1], got {scale}"
            )));
        }
        self.repetition_scale = Some(scale);
        Ok(self)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn cp(&self) -> u64 {
        self.c_p
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Candidate-set multiplier gamma for a dense-core solver whose failure
    /// probability decays like `c^-n`.
    pub fn gamma(&self, core_base: f64) -> f64 {
        match self.kind {
            ProfileKind::PaperFaithful => 600f64.max(2.0 / core_base.log2()),
            ProfileKind::Practical => self.gamma_override.unwrap_or(PRACTICAL_DEFAULT_GAMMA),
        }
    }

    fn scale(&self) -> f64 {
        match self.kind {
            ProfileKind::PaperFaithful => 1.0,
            ProfileKind::Practical => self.repetition_scale.unwrap_or(1.0),
        }
    }

    /// Apply the profile's repetition scaling to a vote count, keeping the
    /// result odd and at least 1 so strict majorities stay tie-free.
    pub fn scale_odd(&self, count: u64) -> u64 {
        let s = self.scale();
        if s >= 1.0 {
            return count.max(1) | 1;
        }
        let scaled = crate::util::ceil_snapped_f64(count as f64 * s).max(1);
        scaled | 1
    }

    /// Apply the profile's repetition scaling to a query budget (caps are
    /// not vote counts, so no odd rounding).
    pub fn scale_budget(&self, budget: u64) -> u64 {
        let s = self.scale();
        if s >= 1.0 {
            return budget;
        }
        crate::util::ceil_snapped_f64(budget as f64 * s).max(1)
    }

    /// Majority-vote length for boosting parameter `t`: `2 * c_p * t + 1`,
    /// scaled under the practical profile.
    pub fn boost_repetitions(&self, t: u32) -> u64 {
        self.scale_odd(2 * self.c_p * t as u64 + 1)
    }
}

/// Allocator for copy ordinals: each source id hands out 0, 1, 2, ... so
/// copies produced later always rank after copies produced earlier under the
/// lexicographic tie order.
#[derive(Debug, Clone, Default)]
pub struct CopyTagger {
    next_ordinal: HashMap<u32, u32>,
}

impl CopyTagger {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh copy handle of the given source.
    pub fn fresh_copy(&mut self, source: u32) -> ElementHandle {
        let slot = self.next_ordinal.entry(source).or_insert(0);
        let copy = *slot;
        *slot += 1;
        ElementHandle { source, copy }
    }
}

/// Draw `count` elements uniformly and independently from `source`, with
/// replacement. Repeated draws of the same source id become distinct copy
/// handles via `tagger`.
pub fn sample_with_replacement(
    rng: &mut ChaCha8Rng,
    tagger: &mut CopyTagger,
    source: &[ElementHandle],
    count: usize,
) -> Result<Vec<ElementHandle>> {
    if source.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let idx = rng.random_range(0..source.len());
        out.push(tagger.fresh_copy(source[idx].source));
    }
    Ok(out)
}

/// Anything that can answer unreliable pairwise comparisons.
///
/// The second implementor besides [`NoisyComparator`] simulates comparisons
/// out of relevance queries; `boost_cp` reports the majority multiplier
/// appropriate for the error rate of *this* comparison source.
pub trait Comparer {
    fn compare(&mut self, x: ElementHandle, y: ElementHandle) -> Order;
    fn boost_cp(&self) -> u64;
    fn profile(&self) -> &FaultProfile;
}

/// Stateful comparison oracle: reports the true order with probability
/// `1 - p`, the flipped order with probability `p`, independently per call.
///
/// Copies of the same source element are ordered deterministically by the
/// lexicographic `(source, copy)` tie-break and consume no randomness.
/// Single-use, single-threaded: one instance per trial.
#[derive(Debug, Clone)]
pub struct NoisyComparator<'a> {
    ground_truth: &'a GroundTruth,
    profile: FaultProfile,
    rng: ChaCha8Rng,
    comparisons_used: u64,
    tagger: CopyTagger,
}

impl<'a> NoisyComparator<'a> {
    pub fn new(ground_truth: &'a GroundTruth, profile: FaultProfile, rng: ChaCha8Rng) -> Self {
        NoisyComparator {
            ground_truth,
            profile,
            rng,
            comparisons_used: 0,
            tagger: CopyTagger::new(),
        }
    }

    pub fn comparisons_used(&self) -> u64 {
        self.comparisons_used
    }

    pub fn profile(&self) -> &FaultProfile {
        &self.profile
    }

    /// Sample `count` handles with replacement using this trial's stream.
    pub fn sample(&mut self, source: &[ElementHandle], count: usize) -> Result<Vec<ElementHandle>> {
        sample_with_replacement(&mut self.rng, &mut self.tagger, source, count)
    }

    /// A fresh copy handle, ordered after every previously issued copy of
    /// the same source.
    pub fn fresh_copy(&mut self, of: ElementHandle) -> ElementHandle {
        self.tagger.fresh_copy(of.source)
    }

    fn check_handle(&self, h: ElementHandle) {
        assert!(
            (h.source as usize) < self.ground_truth.n(),
            "handle source {} out of range for n = {}",
            h.source,
            self.ground_truth.n()
        );
    }
}

impl Comparer for NoisyComparator<'_> {
    fn compare(&mut self, x: ElementHandle, y: ElementHandle) -> Order {
        self.check_handle(x);
        self.check_handle(y);
        assert!(x != y, "comparing a handle with itself");
        self.comparisons_used += 1;
        if x.source == y.source {
            // Tie between copies: consistent order, no randomness.
            return if x < y { Order::Less } else { Order::Greater };
        }
        let truth = if self.ground_truth.rank(x) < self.ground_truth.rank(y) {
            Order::Less
        } else {
            Order::Greater
        };
        if self.rng.random::<f64>() < self.profile.p {
            truth.flipped()
        } else {
            truth
        }
    }

    fn boost_cp(&self) -> u64 {
        self.profile.c_p
    }

    fn profile(&self) -> &FaultProfile {
        &self.profile
    }
}

/// Stateful yes/no oracle over a hidden relevant set; answers are correct
/// with probability `1 - p`, independently per call.
#[derive(Debug, Clone)]
pub struct NoisyRelevanceOracle {
    relevant: Vec<bool>,
    profile: FaultProfile,
    rng: ChaCha8Rng,
    queries_used: u64,
    tagger: CopyTagger,
}

impl NoisyRelevanceOracle {
    pub fn new(relevant: Vec<bool>, profile: FaultProfile, rng: ChaCha8Rng) -> Self {
        NoisyRelevanceOracle {
            relevant,
            profile,
            rng,
            queries_used: 0,
            tagger: CopyTagger::new(),
        }
    }

    /// Relevant set = the `k` smallest elements of the hidden order.
    pub fn from_ground_truth(gt: &GroundTruth, profile: FaultProfile, rng: ChaCha8Rng) -> Self {
        Self::new(gt.relevant_sources(), profile, rng)
    }

    pub fn queries_used(&self) -> u64 {
        self.queries_used
    }

    pub fn profile(&self) -> &FaultProfile {
        &self.profile
    }

    pub fn sample(&mut self, source: &[ElementHandle], count: usize) -> Result<Vec<ElementHandle>> {
        sample_with_replacement(&mut self.rng, &mut self.tagger, source, count)
    }

    /// One unreliable relevance query.
    pub fn query(&mut self, x: ElementHandle) -> Relevance {
        assert!(
            (x.source as usize) < self.relevant.len(),
            "handle source {} out of range",
            x.source
        );
        self.queries_used += 1;
        let truth = if self.relevant[x.source as usize] {
            Relevance::Relevant
        } else {
            Relevance::NotRelevant
        };
        let flip = self.rng.random::<f64>() < self.profile.p;
        match (truth, flip) {
            (t, false) => t,
            (Relevance::Relevant, true) => Relevance::NotRelevant,
            (Relevance::NotRelevant, true) => Relevance::Relevant,
        }
    }
}

/// Majority vote over `2 * c_p * t + 1` comparisons (scaled under the
/// practical profile); wrong with probability at most `e^-t`.
pub fn majority_compare<C: Comparer>(
    cmp: &mut C,
    x: ElementHandle,
    y: ElementHandle,
    t: u32,
) -> Order {
    debug_assert!(t >= 1);
    let reps = cmp
        .profile()
        .scale_odd(2 * cmp.boost_cp() * t as u64 + 1);
    majority_compare_reps(cmp, x, y, reps)
}

/// Majority vote over an explicit odd repetition count.
pub fn majority_compare_reps<C: Comparer>(
    cmp: &mut C,
    x: ElementHandle,
    y: ElementHandle,
    reps: u64,
) -> Order {
    debug_assert!(reps % 2 == 1, "majority vote needs an odd count");
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

/// Strict-majority answer over `repetitions` independent queries.
pub fn majority_query(
    oracle: &mut NoisyRelevanceOracle,
    x: ElementHandle,
    repetitions: u64,
) -> Relevance {
    assert!(repetitions % 2 == 1, "majority vote needs an odd count");
    let mut relevant = 0u64;
    for _ in 0..repetitions {
        if oracle.query(x) == Relevance::Relevant {
            relevant += 1;
        }
    }
    if relevant * 2 > repetitions {
        Relevance::Relevant
    } else {
        Relevance::NotRelevant
    }
}
