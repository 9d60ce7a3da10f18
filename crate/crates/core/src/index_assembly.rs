//! Index assembly: `ind = ∫AS + A(a′)`, its APS form `ind = ∫AS − η/2`, and
//! the relative index cancellation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eta::eta_invariant;
use crate::infinity_contribution::{contribution, ContributionReport};
use crate::quadrature::QuadratureConfig;
use crate::spectral_model::BoundarySpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub as_term: Complex64,
    pub contribution: Complex64,
    pub index_value: Complex64,
    pub eta_half: Complex64,
    /// Distance of `index_value` to the nearest Gaussian integer; only
    /// meaningful, and only filled in, for `g = 1`.
    pub integrality_residual: Option<f64>,
    pub est_error: f64,
}

fn residual(z: Complex64) -> f64 {
    (z - Complex64::new(z.re.round(), z.im.round())).norm()
}

/// `ind = as_term + A_g(D_C, a′)`.
pub fn assemble_index(as_term: Complex64, report: &ContributionReport, identity: bool) -> IndexReport {
    let index_value = as_term + report.direct_value;
    IndexReport {
        as_term,
        contribution: report.direct_value,
        index_value,
        eta_half: report.eta_reference * 0.5,
        integrality_residual: identity.then(|| residual(index_value)),
        est_error: report.est_error,
    }
}

/// `ind = as_term − η/2`, without the heat-time integral at `a′`.
pub fn aps_index(spectrum: &BoundarySpectrum, as_term: Complex64, config: &QuadratureConfig) -> Result<IndexReport> {
    let eta = eta_invariant(spectrum, config)?;
    let eta_half = eta.value * 0.5;
    let index_value = as_term - eta_half;
    Ok(IndexReport {
        as_term,
        contribution: -eta_half,
        index_value,
        eta_half,
        integrality_residual: spectrum.is_identity().then(|| residual(index_value)),
        est_error: 0.5 * (eta.est_error + eta.truncation_error),
    })
}

/// `(ind₁ − ind₂) − (as₁ − as₂)`, which is `A₁(a′) − A₂(a′)` and vanishes
/// when the two operators agree at infinity.
pub fn relative_index_check(
    spec1: &BoundarySpectrum,
    as1: Complex64,
    spec2: &BoundarySpectrum,
    as2: Complex64,
    a_prime: f64,
    config: &QuadratureConfig,
) -> Result<Complex64> {
    let first = assemble_index(as1, &contribution(spec1, a_prime, 1.0, config)?, false);
    let second = assemble_index(as2, &contribution(spec2, a_prime, 1.0, config)?, false);
    Ok((first.index_value - second.index_value) - (as1 - as2))
}
