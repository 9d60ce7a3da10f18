//! The contribution from infinity `A_g(D_C, a′)` on a product cylinder.
//!
//! Summed over boundary modes, the kernel of `e_P^{-sD_C^-D_C^+}D_C^-` at
//! `y = y′ = a′` is
//!
//! ```text
//! Σ_j a_j e^{-λ_j²s} (4πs)^{-1/2} [λ_j + sgn(λ_j) e^{-a′²/s} (a′/s − |λ_j|)]
//! ```
//!
//! and `A_g = −f₁(a′) ∫₀^∞ (…) ds`. The first bracket term integrates to
//! `η/2`, the second to a multiple of the vanishing integral `V(a′)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::eta::{eta_invariant, head_start, ROUNDOFF_PER_MODE};
use crate::mode_kernels::{erfc, erfcx};
use crate::par;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::spectral_model::{tail_bound, BoundarySpectrum, SpectralDatum};
use crate::vanishing_verifier::vanishing_estimate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContributionReport {
    pub a_prime: f64,
    pub f1_at_aprime: f64,
    pub direct_value: Complex64,
    pub decomposed_value: Complex64,
    pub vanishing_residual: Complex64,
    pub eta_reference: Complex64,
    pub est_error: f64,
}

/// A value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub est_error: f64,
}

/// Which boundary condition the heat operator on the cylinder carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    Aps,
    Dirichlet,
}

impl Boundary {
    /// Coefficient of `e^{-a′²/s}` in the per-mode bracket.
    fn edge_factor(self, lambda: f64, a_prime: f64, s: f64) -> f64 {
        match self {
            Boundary::Aps => lambda.signum() * (a_prime / s - lambda.abs()),
            Boundary::Dirichlet => a_prime / s - lambda,
        }
    }

    /// `∫_T^∞` of one mode's integrand, in closed form.
    fn mode_tail(self, lambda: f64, a_prime: f64, t: f64) -> f64 {
        let p = lambda.abs();
        let rt = t.sqrt();
        let sign = lambda.signum();
        let eta_part = 0.5 * sign * erfc(p * rt);
        let damp = (-p * p * t - a_prime * a_prime / t).exp();
        match (self, lambda > 0.0) {
            // ∫_T^∞ e^{-p²s-q²/s}s^{-1/2}(q/s − p) ds = −√π e^{-p²T-q²/T} erfcx(p√T + q/√T)
            (Boundary::Aps, _) | (Boundary::Dirichlet, true) => {
                eta_part - 0.5 * sign * damp * erfcx(p * rt + a_prime / rt)
            }
            // ∫_T^∞ e^{-p²s-q²/s}s^{-1/2}(q/s + p) ds = √π e^{-2pq} erfc(p√T − q/√T)
            (Boundary::Dirichlet, false) => {
                let b = p * rt - a_prime / rt;
                let reflected = if b >= 0.0 {
                    damp * erfcx(b)
                } else {
                    (-2.0 * p * a_prime).exp() * erfc(b)
                };
                eta_part + 0.5 * reflected
            }
        }
    }
}

fn check_a_prime(a_prime: f64) -> Result<()> {
    if a_prime > 0.0 && a_prime.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("a′ must be positive, got {a_prime}")))
    }
}

fn mode_integrand(b: Boundary, d: &SpectralDatum, a_prime: f64, s: f64) -> Complex64 {
    let l = d.lambda;
    let edge = (-a_prime * a_prime / s).exp();
    let bracket = l + if edge > 0.0 { edge * b.edge_factor(l, a_prime, s) } else { 0.0 };
    d.trace_g * ((-l * l * s).exp() / (4.0 * PI * s).sqrt() * bracket)
}

/// The spectral sum of the per-mode kernel at `y = y′ = a′`.
pub fn contribution_integrand(spectrum: &BoundarySpectrum, a_prime: f64, s: f64) -> Result<Complex64> {
    check_a_prime(a_prime)?;
    if !(s > 0.0) {
        return Err(domain(format!("heat time must be positive, got {s}")));
    }
    Ok(par::sum_complex(spectrum.data(), |d| mode_integrand(Boundary::Aps, d, a_prime, s)))
}

/// `∫₀^∞` of the integrand, with its error estimate.
fn integrate_heat_time(
    b: Boundary,
    spectrum: &BoundarySpectrum,
    a_prime: f64,
    config: &QuadratureConfig,
) -> Result<Estimate> {
    config.validate()?;
    check_a_prime(a_prime)?;
    let t = config.split_t;
    let data = spectrum.data();

    let tail = par::sum_complex(data, |d| d.trace_g * b.mode_tail(d.lambda, a_prime, t));

    let bound = |s: f64| tail_bound(spectrum, s, a_prime).map_or(f64::INFINITY, |x| x.bound);
    let omitted = |s: f64| bound(s) * t;
    let s_min = head_start(spectrum, t, 0.1 * config.abs_tol, omitted);

    // s = u², ds = 2u du
    let integrand = |u: f64| {
        let s = u * u;
        par::sum_complex(data, |d| mode_integrand(b, d, a_prime, s)) * (2.0 * u)
    };
    let u_min = s_min.sqrt();
    let head = integrate(integrand, u_min, t.sqrt(), config.tolerance())?;

    let truncation = if s_min > 0.0 {
        let window = integrand(u_min).norm() * u_min;
        omitted(s_min) + bound(t) + window
    } else {
        0.0
    };
    let roundoff = ROUNDOFF_PER_MODE * spectrum.total_trace_mass();
    Ok(Estimate {
        value: head.value + tail,
        est_error: head.error + truncation + roundoff,
    })
}

/// `A_g(D_C, a′)` computed directly and through `−f₁(η/2 + V/(2√π))`.
pub fn contribution(
    spectrum: &BoundarySpectrum,
    a_prime: f64,
    f1_at_aprime: f64,
    config: &QuadratureConfig,
) -> Result<ContributionReport> {
    if !f1_at_aprime.is_finite() {
        return Err(domain("f₁(a′) must be finite"));
    }
    let direct = integrate_heat_time(Boundary::Aps, spectrum, a_prime, config)?;
    let eta = eta_invariant(spectrum, config)?;
    let v = vanishing_estimate(spectrum, a_prime, config)?;

    let vanishing_residual = v.value * (-f1_at_aprime / (2.0 * PI.sqrt()));
    let f1 = f1_at_aprime.abs();
    let est_error = f1
        * (direct.est_error
            + 0.5 * (eta.est_error + eta.truncation_error)
            + v.est_error / (2.0 * PI.sqrt()));
    Ok(ContributionReport {
        a_prime,
        f1_at_aprime,
        direct_value: direct.value * -f1_at_aprime,
        decomposed_value: eta.value * (-0.5 * f1_at_aprime) + vanishing_residual,
        vanishing_residual,
        eta_reference: eta.value,
        est_error,
    })
}

/// The analogue of `A_g(D_C, a′)` built from the Dirichlet heat operator
/// instead of the APS one, with its error estimate.
pub fn dirichlet_variant_estimate(
    spectrum: &BoundarySpectrum,
    a_prime: f64,
    config: &QuadratureConfig,
) -> Result<Estimate> {
    let r = integrate_heat_time(Boundary::Dirichlet, spectrum, a_prime, config)?;
    Ok(Estimate {
        value: -r.value,
        est_error: r.est_error,
    })
}

pub fn dirichlet_variant_contribution(
    spectrum: &BoundarySpectrum,
    a_prime: f64,
    config: &QuadratureConfig,
) -> Result<Complex64> {
    dirichlet_variant_estimate(spectrum, a_prime, config).map(|e| e.value)
}
