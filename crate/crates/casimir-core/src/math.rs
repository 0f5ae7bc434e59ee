//! Float math routed through `libm` so the crate builds without `std`.

pub(crate) use libm::{cos, exp, expm1, log as ln, sin, sqrt, tanh};

pub(crate) fn cot(x: f64) -> f64 {
    cos(x) / sin(x)
}

pub(crate) fn tan(x: f64) -> f64 {
    sin(x) / cos(x)
}

pub(crate) fn coth(x: f64) -> f64 {
    1.0 / tanh(x)
}

/// csch²(x) = 1/sinh²(x), overflow-free for any x > 0 (saturates to 0 for
/// large x, to +inf only below x ~ 1e-150 which no quadrature node reaches).
pub(crate) fn csch2(x: f64) -> f64 {
    let s = libm::sinh(x);
    1.0 / (s * s)
}

pub(crate) fn sech2(x: f64) -> f64 {
    let c = libm::cosh(x);
    1.0 / (c * c)
}

/// x^n for small integer n >= 0.
pub(crate) fn powi(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    let mut base = x;
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            acc *= base;
        }
        base *= base;
        m >>= 1;
    }
    acc
}
