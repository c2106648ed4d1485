//! Classical semantics of the reciprocal stage: a power-of-two seed
//! `x₀ = 2^{−p}` and one Newton–Raphson step `x₁ = 2x₀ − k·x₀²`.

/// Exponent `p` of the seed reciprocal for register value `k`.
///
/// Reads `k` from the most significant bit down and stops at the first set
/// bit `q`. If the next bit is also set (a `11` block) the seed is rounded
/// off to `p = q + 1`, otherwise `p = q`. Returns `None` for `k < 2`.
pub fn x0_exponent(k: u64) -> Option<u32> {
    if k < 2 {
        return None;
    }
    let q = 63 - k.leading_zeros();
    if (k >> (q - 1)) & 1 == 1 {
        Some(q + 1)
    } else {
        Some(q)
    }
}

/// `x₁ = 2^{1−p} − k·2^{−2p}`.
pub fn newton_x1(k: u64, p: u32) -> f64 {
    let x0 = 0.5f64.powi(p as i32);
    2.0 * x0 - k as f64 * x0 * x0
}
