//! Adaptive Gauss–Kronrod quadrature.
//!
//! Globally adaptive bisection driven by the 21-point Kronrod rule with the
//! embedded 10-point Gauss rule as error estimator, using the QUADPACK error
//! rescaling. The subdivision sequence depends only on the integrand values,
//! so results are reproducible.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Values that can be integrated: reals, and complex numbers component-wise.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        // max-norm keeps the two components' tolerances independent
        self.re.abs().max(self.im.abs())
    }
}

/// Settings for the improper integrals over heat time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Split point `T`: quadrature on `(0, T]`, closed-form tails on `[T, ∞)`.
    pub split_t: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            split_t: 1.0,
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 500,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_t > 0.0 && self.split_t.is_finite()) {
            return Err(domain(format!("split_T must be positive, got {}", self.split_t)));
        }
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(domain("tolerances must be positive"));
        }
        if self.max_subdivisions < 8 {
            return Err(domain("max_subdivisions must be at least 8"));
        }
        Ok(())
    }

    pub(crate) fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_subdivisions: 500,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
}

// Kronrod abscissae (positive half) and weights; Gauss weights for the odd nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208625180584,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    resabs: f64,
}

fn gauss_kronrod_21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Segment<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = T::zero();
    let mut resabs = WGK[10] * f_center.magnitude();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut resasc = WGK[10] * (f_center - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let scale = half.abs();
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = ((res_k - res_g) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value: res_k * half,
        error: err,
        resabs,
    }
}

/// Integrates `f` over `[a, b]` to `max(tol.abs, tol.rel · |I|)`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral {
            value: T::zero(),
            error: 0.0,
            intervals: 0,
        });
    }
    let mut segments = vec![gauss_kronrod_21(&f, a, b)];
    loop {
        let (total, error, resabs) = totals(&segments);
        let target = tol.abs.max(tol.rel * total.magnitude());
        if error <= target || error <= 50.0 * f64::EPSILON * resabs {
            return Ok(Integral {
                value: total,
                error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= tol.max_subdivisions {
            return Err(Error::QuadratureFailure {
                partial: total.magnitude(),
                est_error: error,
                subdivisions: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, s)| {
                if s.error > best.1 {
                    (i, s.error)
                } else {
                    best
                }
            })
            .0;
        let seg = &segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if !(mid > seg.a && mid < seg.b) || (seg.b - seg.a).abs() <= 4.0 * f64::EPSILON * mid.abs() {
            // interval exhausted at machine resolution; the estimate stands
            return Ok(Integral {
                value: total,
                error,
                intervals: segments.len(),
            });
        }
        let (lo, hi) = (seg.a, seg.b);
        let left = gauss_kronrod_21(&f, lo, mid);
        let right = gauss_kronrod_21(&f, mid, hi);
        segments[worst] = left;
        segments.insert(worst + 1, right);
    }
}

fn totals<T: QuadValue>(segments: &[Segment<T>]) -> (T, f64, f64) {
    segments.iter().fold((T::zero(), 0.0, 0.0), |(v, e, r), s| {
        (v + s.value, e + s.error, r + s.resabs)
    })
}

/// Integrates `f` over `[a, ∞)` through `x = a + scale·(1 − u)/u`; `scale`
/// should be comparable to the decay length of `f`.
pub fn integrate_to_infinity<T, F>(f: F, a: f64, scale: f64, tol: Tolerance) -> Result<Integral<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if !(scale > 0.0) {
        return Err(domain("scale must be positive"));
    }
    integrate(
        |u: f64| {
            let x = a + scale * (1.0 - u) / u;
            f(x) * (scale / (u * u))
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(7) - 3.0 * x * x, 0.0, 2.0, Tolerance::absolute(1e-14)).unwrap();
        assert_relative_eq!(r.value, 32.0 - 8.0, epsilon = 1e-13);
    }

    #[test]
    fn endpoint_singularity_is_resolved() {
        // ∫_0^1 x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, Tolerance::absolute(1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn gaussian_on_half_line() {
        let r = integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0, 1.0, Tolerance::absolute(1e-13)).unwrap();
        assert_relative_eq!(r.value, 0.5 * std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn complex_integrand_is_componentwise() {
        let r = integrate(
            |x: f64| Complex64::new(x.cos(), x.sin()),
            0.0,
            std::f64::consts::PI,
            Tolerance::absolute(1e-14),
        )
        .unwrap();
        assert!(r.value.re.abs() < 1e-14);
        assert_relative_eq!(r.value.im, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn subdivision_limit_reports_failure() {
        let tol = Tolerance {
            abs: 1e-15,
            rel: 0.0,
            max_subdivisions: 8,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { subdivisions: 8, .. }));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let bad = QuadratureConfig {
            max_subdivisions: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
