//! Small numeric helpers shared across schedule computations.

/// Ceiling that snaps values within 1e-9 relative distance of an integer to
/// that integer first, so float noise around exact schedule constants never
/// bumps a count.
pub(crate) fn ceil_snapped_f64(v: f64) -> u64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        v.ceil() as u64
    }
}

/// Smallest power of two >= `v` for a positive real `v`.
pub(crate) fn next_pow2_at_least(v: f64) -> u64 {
    assert!(v > 0.0);
    let mut m = 1u64;
    while (m as f64) < v {
        m *= 2;
    }
    m
}
