//! The few special-function values the energy formulas need: Riemann zeta at
//! integers, gamma at integer and half-integer points, zeta at negative odd
//! integers (Bernoulli form), and the dilogarithm near zero.

use crate::math;
use core::f64::consts::PI;

/// ζ(s) for integer s >= 2: direct series with an Euler–Maclaurin tail.
pub fn zeta_int(s: u32) -> f64 {
    debug_assert!(s >= 2);
    let n = 40u32;
    let mut sum = 0.0;
    for k in 1..n {
        sum += math::powi(k as f64, s).recip();
    }
    let nf = n as f64;
    let sf = s as f64;
    // tail: N^{1-s}/(s-1) + N^{-s}/2 + B2 s N^{-s-1}/2! - B4 s(s+1)(s+2) N^{-s-3}/4! ...
    let n_pow_s = math::powi(nf, s);
    let mut tail = nf / (n_pow_s * (sf - 1.0)) + 0.5 / n_pow_s;
    tail += sf / (12.0 * n_pow_s * nf);
    tail -= sf * (sf + 1.0) * (sf + 2.0) / (720.0 * n_pow_s * math::powi(nf, 3));
    tail += sf * (sf + 1.0) * (sf + 2.0) * (sf + 3.0) * (sf + 4.0)
        / (30240.0 * n_pow_s * math::powi(nf, 5));
    sum + tail
}

/// ζ(1-d) for even d in {2, 4, 6, 8}: -B_d / d.
pub fn zeta_one_minus(d: u32) -> f64 {
    match d {
        2 => -1.0 / 12.0,
        4 => 1.0 / 120.0,
        6 => -1.0 / 252.0,
        8 => 1.0 / 240.0,
        _ => f64::NAN,
    }
}

/// ζ(s, 1/2) = (2^s - 1) ζ(s) specialized to s = 1-d.
pub fn half_shift_factor(d: u32) -> f64 {
    libm::exp2(1.0 - d as f64) - 1.0
}

/// Γ(half/2) for odd `half` (positive or negative) and even positive `half`.
/// Built by recursion from Γ(1/2) = √π and Γ(1) = 1; even `half` <= 0 is a
/// pole and returns NaN.
pub fn gamma_half(half: i64) -> f64 {
    if half > 0 && half % 2 == 0 {
        // Γ(n) = (n-1)!
        let n = half / 2;
        let mut acc = 1.0;
        for k in 2..n {
            acc *= k as f64;
        }
        return acc;
    }
    if half % 2 == 0 {
        return f64::NAN;
    }
    // odd: climb from Γ(1/2)
    let mut value = math::sqrt(PI);
    let mut x = 1i64; // current argument in halves
    while x + 2 <= half {
        value *= x as f64 / 2.0;
        x += 2;
    }
    while x > half {
        x -= 2;
        value /= x as f64 / 2.0;
    }
    value
}

/// Li₂(x) by its defining series; converges fast for |x| <= 1/2.
pub fn dilog(x: f64) -> f64 {
    debug_assert!(x.abs() <= 0.5 + 1e-12);
    let mut sum = 0.0;
    let mut pow = x;
    let mut k = 1u32;
    loop {
        let term = pow / (k as f64 * k as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) || k > 200 {
            break;
        }
        pow *= x;
        k += 1;
    }
    sum
}
