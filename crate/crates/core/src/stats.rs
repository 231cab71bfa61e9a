//! Exact tail probabilities and confidence intervals for validating the
//! repetition schedules analytically (no sampling).

use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

fn ln_binomial_pmf(n: u64, p: f64, k: u64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0)
        + kf * p.ln()
        + (nf - kf) * (1.0 - p).ln()
}

/// Exact upper tail `P(Binomial(n, p) >= k)`.
///
/// Always sums the smaller of the two tails with a pmf recurrence whose
/// terms decrease away from the boundary (upward above the mean, downward
/// below), so the result stays accurate and monotone in `k` even when the
/// boundary pmf sits hundreds of orders of magnitude below the mode.
pub fn binomial_tail_ge(n: u64, p: f64, k: u64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "p out of range: {p}");
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    if (k as f64) > n as f64 * p {
        // Upper tail is the small side: sum upward from k.
        let mut pmf = ln_binomial_pmf(n, p, k).exp();
        let mut total = 0.0;
        for i in k..=n {
            total += pmf;
            pmf *= (n - i) as f64 / (i + 1) as f64 * p / (1.0 - p);
        }
        total.min(1.0)
    } else {
        // Lower tail P(X <= k-1) is the small side: sum downward from k-1.
        let j = k - 1;
        let mut pmf = ln_binomial_pmf(n, p, j).exp();
        let mut total = 0.0;
        let mut i = j;
        loop {
            total += pmf;
            if i == 0 {
                break;
            }
            pmf *= i as f64 / (n - i + 1) as f64 * (1.0 - p) / p;
            i -= 1;
        }
        (1.0 - total.min(1.0)).max(0.0)
    }
}

/// Probability that a strict-majority vote over `reps` answers, each wrong
/// independently with probability `p`, returns the wrong result. Even split
/// counts as wrong (possible only for even `reps`).
pub fn majority_error(reps: u64, p: f64) -> f64 {
    binomial_tail_ge(reps, p, reps / 2 + 1)
        + if reps.is_multiple_of(2) {
            // Exact ties are resolved deterministically; count them against
            // the vote for a conservative bound.
            binomial_tail_ge(reps, p, reps / 2) - binomial_tail_ge(reps, p, reps / 2 + 1)
        } else {
            0.0
        }
}

/// Exact Clopper-Pearson bounds for a binomial success probability at the
/// given confidence level (e.g. 0.95).
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(successes <= trials);
    assert!((0.0..1.0).contains(&confidence));
    let alpha = 1.0 - confidence;
    let (x, n) = (successes as f64, trials as f64);
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0)
            .expect("valid beta parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x)
            .expect("valid beta parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}
