//! Exact-minimum selection under unreliable comparisons with a caller-chosen
//! failure probability `q`.
//!
//! The algorithm is a single-elimination bracket over the input, padded to a
//! power of two with byes. A round-`i` match is decided by a majority vote
//! with boosting parameter `t_i = i + ceil(log2(1/q))`, i.e.
//! `2 * c_p * t_i + 1` comparisons, which errs with probability at most
//! `e^-t_i`. The true minimum is eliminated only by losing one of its at
//! most `log2(pool)` matches, so by the union bound its elimination
//! probability is at most
//!
//! ```text
//! sum_{i>=1} e^-(i + ceil(log2(1/q)))
//!   <= e^-log2(1/q) * sum_{i>=1} e^-i
//!    = q^(1/ln 2) / (e - 1)  <  q          for q < 1/2.
//! ```
//!
//! The comparison count is deterministic given `(|S|, q, p)`: byes occupy
//! fixed trailing slots and cost nothing, so round `i` plays exactly
//! `floor(r_{i-1} / 2)` real matches where `r_0 = |S|` and
//! `r_i = ceil(r_{i-1} / 2)`. Summing the schedule bounds the total by
//! `(4 * c_p + 1) * P * (1 + b)` where `P <= 2|S|` is the padded bracket
//! size and `b = ceil(log2(1/q))`, i.e. `O(|S| log(1/q))` comparisons.

use crate::error::{Error, Result};
use crate::oracle::{majority_compare, Comparer, ElementHandle, FaultProfile, Order};

/// Per-round boosting schedule for a failure budget `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindMinSchedule {
    q: f64,
    base_t: u32,
}

impl FindMinSchedule {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 0.5) {
            return Err(Error::InvalidFailureProbability(q));
        }
        let base = (1.0 / q).log2();
        let base_t = crate::util::ceil_snapped_f64(base) as u32;
        Ok(FindMinSchedule { q, base_t })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `ceil(log2(1/q))`, the additive boosting term shared by all rounds.
    pub fn base_t(&self) -> u32 {
        self.base_t
    }

    /// Boosting parameter for round `i` (1-based): strictly increasing.
    pub fn round_t(&self, round: u32) -> u32 {
        round + self.base_t
    }

    /// Majority length for round `i` under the given comparison source.
    pub fn repetitions(&self, round: u32, boost_cp: u64, profile: &FaultProfile) -> u64 {
        profile.scale_odd(2 * boost_cp * self.round_t(round) as u64 + 1)
    }
}

/// Closed-form total comparison count of [`find_min`] on an input of
/// `s_len` elements. Exact, not a bound.
pub fn find_min_comparisons(
    s_len: usize,
    q: f64,
    boost_cp: u64,
    profile: &FaultProfile,
) -> Result<u64> {
    let schedule = FindMinSchedule::new(q)?;
    let pool = s_len.next_power_of_two();
    let rounds = pool.trailing_zeros();
    let mut real = s_len as u64;
    let mut total = 0u64;
    for i in 1..=rounds {
        let matches = real / 2;
        total += matches * schedule.repetitions(i, boost_cp, profile);
        real = real.div_ceil(2);
    }
    Ok(total)
}

/// Return an element of `s` that is the true minimum with probability at
/// least `1 - q`, using `O(|s| log(1/q))` comparisons.
pub fn find_min<C: Comparer>(cmp: &mut C, s: &[ElementHandle], q: f64) -> Result<ElementHandle> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let schedule = FindMinSchedule::new(q)?;
    if s.len() == 1 {
        return Ok(s[0]);
    }

    // Byes are trailing `None` slots: they lose automatically and consume
    // no comparisons.
    let mut slots: Vec<Option<ElementHandle>> = s.iter().copied().map(Some).collect();
    slots.resize(s.len().next_power_of_two(), None);

    let mut round = 1u32;
    while slots.len() > 1 {
        let t = schedule.round_t(round);
        let mut next = Vec::with_capacity(slots.len() / 2);
        for pair in slots.chunks_exact(2) {
            let winner = match (pair[0], pair[1]) {
                (Some(x), Some(y)) => Some(match majority_compare(cmp, x, y, t) {
                    Order::Less => x,
                    Order::Greater => y,
                }),
                (Some(x), None) => Some(x),
                (None, y) => y,
            };
            next.push(winner);
        }
        slots = next;
        round += 1;
    }
    Ok(slots[0].expect("non-empty input always yields a real winner"))
}
