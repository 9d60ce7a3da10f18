#![allow(clippy::excessive_precision)]

//! Complementary error function and its scaled form `erfcx(x) = e^{x²} erfc(x)`.
//!
//! Rational Chebyshev approximations of W. J. Cody (1969), with the three
//! ranges `|x| ≤ 0.46875`, `0.46875 < |x| ≤ 4` and `|x| > 4`.

use crate::error::{domain, Result};

const A: [f64; 5] = [
    3.1611237438705656,
    113.864154151050156,
    377.485237685302021,
    3209.37758913846947,
    0.185777706184603153,
];
const B: [f64; 4] = [
    23.6012909523441209,
    244.024637934444173,
    1282.61652607737228,
    2844.23683343917062,
];
const C: [f64; 9] = [
    0.564188496988670089,
    8.88314979438837594,
    66.1191906371416295,
    298.635138197400131,
    881.95222124176909,
    1712.04761263407058,
    2051.07837782607147,
    1230.33935479799725,
    2.15311535474403846e-8,
];
const D: [f64; 8] = [
    15.7449261107098347,
    117.693950891312499,
    537.181101862009858,
    1621.38957456669019,
    3290.79923573345963,
    4362.61909014324716,
    3439.36767414372164,
    1230.33935480374942,
];
const P: [f64; 6] = [
    0.305326634961232344,
    0.360344899949804439,
    0.125781726111229246,
    0.0160837851487422766,
    6.58749161529837803e-4,
    0.0163153871373020978,
];
const Q: [f64; 5] = [
    2.56852019228982242,
    1.87295284992346047,
    0.527905102951428412,
    0.0605183413124413191,
    0.00233520497626869185,
];

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const THRESHOLD: f64 = 0.46875;
/// Beyond this erfc underflows to zero.
const XBIG: f64 = 26.543;

/// `erf(x)/x` on `|x| ≤ 0.46875`, as a function of `z = x²`.
fn small_ratio(z: f64) -> f64 {
    ((((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3])
        / ((((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3])
}

/// `erfcx(y)` for `0.46875 < y ≤ 4`.
fn mid_scaled(y: f64) -> f64 {
    let mut num = C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + C[i]) * y;
        den = (den + D[i]) * y;
    }
    (num + C[7]) / (den + D[7])
}

/// `erfcx(y)` for `y > 4`.
fn large_scaled(y: f64) -> f64 {
    let z = 1.0 / (y * y);
    let mut num = P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + P[i]) * z;
        den = (den + Q[i]) * z;
    }
    let r = z * (num + P[4]) / (den + Q[4]);
    (FRAC_1_SQRT_PI - r) / y
}

/// `e^{-y²}` evaluated as a product of a coarse and a fine factor, which
/// keeps full relative precision for large `y`.
fn exp_neg_square(y: f64) -> f64 {
    let coarse = (y * 16.0).trunc() / 16.0;
    (-coarse * coarse).exp() * (-(y - coarse) * (y + coarse)).exp()
}

fn exp_pos_square(y: f64) -> f64 {
    let coarse = (y * 16.0).trunc() / 16.0;
    (coarse * coarse).exp() * ((y - coarse) * (y + coarse)).exp()
}

/// erfc(|x|) for |x| > 0.46875.
fn erfc_abs(y: f64) -> f64 {
    if y >= XBIG {
        0.0
    } else if y <= 4.0 {
        mid_scaled(y) * exp_neg_square(y)
    } else {
        large_scaled(y) * exp_neg_square(y)
    }
}

/// Complementary error function. NaN propagates.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - x * small_ratio(y * y);
    }
    let e = erfc_abs(y);
    if x < 0.0 {
        2.0 - e
    } else {
        e
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return x * small_ratio(y * y);
    }
    let e = erfc_abs(y);
    if x < 0.0 {
        e - 1.0
    } else {
        1.0 - e
    }
}

/// Scaled complementary error function `e^{x²} erfc(x)`; overflows to
/// `+∞` for `x < -26.6`.
pub fn erfcx(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        let z = y * y;
        return z.exp() * (1.0 - x * small_ratio(z));
    }
    if x < -26.628_735_713_751_4 {
        return f64::INFINITY;
    }
    let r = if y <= 4.0 { mid_scaled(y) } else { large_scaled(y) };
    if x < 0.0 {
        2.0 * exp_pos_square(y) - r
    } else {
        r
    }
}

/// `erfc` with a domain check on NaN input.
pub fn erfc_eval(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("erfc of NaN"));
    }
    Ok(erfc(x))
}
