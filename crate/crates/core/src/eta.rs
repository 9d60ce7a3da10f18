//! The delocalised η-invariant
//!
//! ```text
//! η_g = (1/√π) ∫₀^∞ Tr(g e^{-sD²} D) s^{-1/2} ds
//! ```
//!
//! split at `T`: the head is integrated numerically after `s = u²`, and the
//! tail is summed exactly using `(1/√π)∫_T^∞ λe^{-λ²s}s^{-1/2} ds = sgn(λ) erfc(|λ|√T)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mode_kernels::erfc;
use crate::par;
pub use crate::quadrature::QuadratureConfig;
use crate::quadrature::integrate;
use crate::spectral_model::{smallest_time_within, tail_bound, BoundarySpectrum, Truncation};

/// Roundoff allowance per unit of trace mass in a spectral sum.
pub(crate) const ROUNDOFF_PER_MODE: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaResult {
    pub value: Complex64,
    pub quadrature_part: Complex64,
    pub tail_part: Complex64,
    pub est_error: f64,
    pub truncation_error: f64,
}

/// `Σ_j a_j λ_j e^{-sλ_j²}`
pub fn heat_trace(spectrum: &BoundarySpectrum, s: f64) -> Complex64 {
    par::sum_complex(spectrum.data(), |d| d.trace_g * (d.lambda * (-s * d.lambda * d.lambda).exp()))
}

/// Lower end of the head integral for a truncated spectrum.
///
/// Below `s_min` the omitted eigenvalues would dominate; above it the Weyl
/// bound certifies that their total effect stays under `target`.
pub(crate) fn head_start(
    spectrum: &BoundarySpectrum,
    split_t: f64,
    target: f64,
    error_at: impl Fn(f64) -> f64,
) -> f64 {
    match spectrum.truncation() {
        Truncation::Complete => 0.0,
        Truncation::Cutoff(_) => smallest_time_within(error_at, target, split_t),
    }
}

pub fn eta_invariant(spectrum: &BoundarySpectrum, config: &QuadratureConfig) -> Result<EtaResult> {
    config.validate()?;
    let t = config.split_t;
    let data = spectrum.data();

    let tail_part = par::sum_complex(data, |d| d.trace_g * (d.sign() * erfc(d.lambda.abs() * t.sqrt())));

    let bound = |s: f64| tail_bound(spectrum, s, 0.0).map_or(f64::INFINITY, |b| b.bound);
    let omitted = |s: f64| bound(s) * 2.0 * t.sqrt() / PI.sqrt();
    let s_min = head_start(spectrum, t, 0.1 * config.abs_tol, omitted);

    let u_min = s_min.sqrt();
    let head = integrate(
        |u: f64| heat_trace(spectrum, u * u) * (2.0 / PI.sqrt()),
        u_min,
        t.sqrt(),
        config.tolerance(),
    )?;

    let truncation_error = if s_min > 0.0 {
        // the dropped window [0, s_min) is estimated from the integrand at its edge
        let window = heat_trace(spectrum, s_min).norm() * 2.0 / PI.sqrt() * u_min;
        omitted(s_min) + bound(t) + window
    } else {
        0.0
    };

    let roundoff = ROUNDOFF_PER_MODE * spectrum.total_trace_mass();
    Ok(EtaResult {
        value: head.value + tail_part,
        quadrature_part: head.value,
        tail_part,
        est_error: head.error + roundoff,
        truncation_error,
    })
}

/// η of `{n + twist : n ∈ ℤ}` with `g = 1`, namely `1 − 2·twist`.
pub fn eta_circle_oracle(twist: f64) -> Result<f64> {
    if !(twist > 0.0 && twist < 1.0) {
        return Err(domain(format!("twist must lie in (0, 1), got {twist}")));
    }
    Ok(1.0 - 2.0 * twist)
}
