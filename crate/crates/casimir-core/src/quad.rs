//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule with the embedded 7-point Gauss rule supplies the
//! per-panel error estimate; panels are split worst-first until the summed
//! error meets the requested absolute tolerance. Semi-infinite frequency
//! integrals are mapped onto (0, 1) by ω = t / (s·(1−t)) with s the shortest
//! edge length, which equidistributes resolution across the e^{−2·s·ω} decay.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];

/// Weights of the embedded 7-point Gauss rule (odd-index abscissae).
const WG: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadError {
    /// The error target was not reached within the panel budget.
    NonConvergent { value: f64, abs_error: f64 },
    /// The integrand produced a non-finite value.
    NonFinite { at: f64 },
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::NonConvergent { value, abs_error } => write!(
                f,
                "quadrature did not converge: value {value:e}, residual error {abs_error:e}"
            ),
            QuadError::NonFinite { at } => {
                write!(f, "integrand evaluated to a non-finite value at {at:e}")
            }
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// QUADPACK-style error rescaling from the raw |K15 - G7| difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = libm::pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv = [0.0f64; 15];
    for (j, &x) in XGK.iter().enumerate() {
        let lo = center - half * x;
        let hi = center + half * x;
        let flo = f(lo);
        if !flo.is_finite() {
            return Err(QuadError::NonFinite { at: lo });
        }
        fv[j] = flo;
        if j < 7 {
            let fhi = f(hi);
            if !fhi.is_finite() {
                return Err(QuadError::NonFinite { at: hi });
            }
            fv[14 - j] = fhi;
        }
    }
    let mut res_kronrod = 0.0;
    let mut res_abs = 0.0;
    for (j, &w) in WGK.iter().enumerate() {
        let pair = if j < 7 { fv[j] + fv[14 - j] } else { fv[7] };
        let pair_abs = if j < 7 {
            fv[j].abs() + fv[14 - j].abs()
        } else {
            fv[7].abs()
        };
        res_kronrod += w * pair;
        res_abs += w * pair_abs;
    }
    let mut res_gauss = 0.0;
    for (i, &w) in WG.iter().enumerate() {
        let j = 2 * i + 1;
        let pair = if j < 7 { fv[j] + fv[14 - j] } else { fv[7] };
        res_gauss += w * pair;
    }
    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (fv[7] - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let raw_err = (res_kronrod - res_gauss) * half;
    Ok(Panel {
        a,
        b,
        value: res_kronrod * half,
        error: rescale_error(raw_err, res_abs * half.abs(), res_asc * half.abs()),
    })
}

/// Adaptive integration of `f` over the finite interval [a, b] to the given
/// absolute tolerance. Endpoints are never evaluated.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Quadrature, QuadError> {
    let mut heap = BinaryHeap::new();
    let first = gk15(f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    let mut panels = 1usize;
    while total_err > abs_tol && panels < max_panels {
        let worst = heap.pop().expect("heap non-empty while error > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at f64 resolution; put it back and stop
            heap.push(worst);
            break;
        }
        let left = gk15(f, worst.a, mid)?;
        let right = gk15(f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
    let result = Quadrature {
        value: total,
        abs_error: total_err,
    };
    if total_err > abs_tol * 8.0 {
        return Err(QuadError::NonConvergent {
            value: total,
            abs_error: total_err,
        });
    }
    Ok(result)
}

/// ∫₀^∞ f(ω) dω via the map ω = t / (scale·(1−t)). `t_max = 1.0` covers the
/// whole half-line; a smaller `t_max` truncates at ω = t_max/(scale·(1−t_max))
/// (the caller adds its own tail bound).
pub fn semi_infinite<F: Fn(f64) -> f64>(
    f: &F,
    scale: f64,
    abs_tol: f64,
    t_max: f64,
    max_panels: usize,
) -> Result<Quadrature, QuadError> {
    debug_assert!(scale > 0.0 && t_max > 0.0 && t_max <= 1.0);
    let g = |t: f64| {
        let u = 1.0 - t;
        let omega = t / (scale * u);
        f(omega) / (scale * u * u)
    };
    adaptive(&g, 0.0, t_max, abs_tol, max_panels)
}

pub(crate) const DEFAULT_MAX_PANELS: usize = 6000;
