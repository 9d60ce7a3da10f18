//! Per-mode heat kernels on the half-line `[0, ∞)`.
//!
//! On the cylinder `N × (0, ∞)` every kernel decomposes over the eigenmodes
//! of the boundary operator. For a mode with eigenvalue `λ` the operators act
//! on functions of the normal coordinate `y`, with `D_C^± = ±d/dy + λ`; the
//! functions here return the scalar coefficient of `φ_λ ⊗ φ_λ`.
//!
//! Modes with `λ > 0` lie in the image of the APS projection, modes with
//! `λ < 0` in its complement.

mod erfc;

pub use erfc::{erf, erfc, erfc_eval, erfcx};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// A point `(λ, s, y, y′)` at which a mode kernel is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePoint {
    pub lambda: f64,
    /// Heat time.
    pub s: f64,
    pub y: f64,
    pub y_prime: f64,
}

impl ModePoint {
    pub fn new(lambda: f64, s: f64, y: f64, y_prime: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(domain(format!("heat time must be positive and finite, got {s}")));
        }
        if !(y >= 0.0 && y_prime >= 0.0) || !y.is_finite() || !y_prime.is_finite() {
            return Err(domain(format!("coordinates must be nonnegative, got ({y}, {y_prime})")));
        }
        if !lambda.is_finite() {
            return Err(domain("eigenvalue must be finite"));
        }
        Ok(Self {
            lambda,
            s,
            y,
            y_prime,
        })
    }

    /// `e^{-λ²s} / √(4πs)`
    fn prefactor(&self) -> f64 {
        (-self.lambda * self.lambda * self.s).exp() / (4.0 * PI * self.s).sqrt()
    }

    /// Direct Gaussian `e^{-(y−y′)²/4s}`.
    fn direct(&self) -> f64 {
        let d = self.y - self.y_prime;
        (-d * d / (4.0 * self.s)).exp()
    }

    /// Reflected Gaussian `e^{-(y+y′)²/4s}`.
    fn reflected(&self) -> f64 {
        let d = self.y + self.y_prime;
        (-d * d / (4.0 * self.s)).exp()
    }

    fn require_invertible(&self) -> Result<()> {
        if self.lambda == 0.0 {
            Err(domain("mode with λ = 0 is not invertible"))
        } else {
            Ok(())
        }
    }
}

/// Free heat kernel of `−d²/dy² + λ²` on the whole line.
pub fn full_line_mode_kernel(p: ModePoint) -> f64 {
    p.prefactor() * p.direct()
}

/// Heat kernel of `−d²/dy² + λ²` on `(0, ∞)` with a Dirichlet condition at 0.
pub fn dirichlet_mode_kernel(p: ModePoint) -> f64 {
    p.prefactor() * (p.direct() - p.reflected())
}

/// The reflected (image) part of the Dirichlet kernel, so that
/// `dirichlet = full_line − image`.
pub fn dirichlet_image_term(p: ModePoint) -> f64 {
    p.prefactor() * p.reflected()
}

/// Per-mode kernel of the heat operator of `D_C^- D_C^+` with APS boundary
/// conditions.
pub fn aps_mode_kernel(p: ModePoint) -> Result<f64> {
    p.require_invertible()?;
    let lambda = p.lambda;
    if lambda > 0.0 {
        return Ok(p.prefactor() * (p.direct() - p.reflected()));
    }
    let gaussians = p.prefactor() * (p.direct() + p.reflected());
    // λ e^{-λ(y+y′)} erfc(x) with x = (y+y′)/(2√s) − λ√s > 0; the growing
    // exponential is folded into the scaled erfc.
    let sum = p.y + p.y_prime;
    let x = sum / (2.0 * p.s.sqrt()) - lambda * p.s.sqrt();
    let boundary = lambda * (-lambda * sum - x * x).exp() * erfcx(x);
    Ok(gaussians + boundary)
}

/// Per-mode coefficient of the kernel of `e_P^{-s D_C^- D_C^+} D_C^-`.
pub fn lambda_mode_kernel(p: ModePoint) -> Result<f64> {
    p.require_invertible()?;
    let lambda = p.lambda;
    let s = p.s;
    let diff = p.y - p.y_prime;
    let sum = p.y + p.y_prime;
    if lambda > 0.0 {
        let bracket = p.direct() * (diff / (2.0 * s) + lambda)
            + p.reflected() * (sum / (2.0 * s) - lambda);
        return Ok(p.prefactor() * bracket);
    }
    let bracket = p.direct() * (diff / (2.0 * s) + lambda)
        + p.reflected() * (-sum / (2.0 * s) + lambda);
    let w = sum / (2.0 * s.sqrt()) - lambda * s.sqrt();
    let boundary = -lambda / (PI * s).sqrt() * (-lambda * sum - w * w).exp();
    Ok(p.prefactor() * bracket + boundary)
}

/// Right-hand side of the APS/Dirichlet decomposition, mode by mode:
/// `(∂/∂y′ + λ)` applied to the Dirichlet kernel for `λ > 0`, and
/// `(−∂/∂y + λ)` applied to it for `λ < 0`.
pub fn dirichlet_lambda_combination(p: ModePoint) -> Result<f64> {
    p.require_invertible()?;
    let s = p.s;
    let pref = p.prefactor();
    let g_direct = p.direct();
    let g_reflected = p.reflected();
    let kernel = pref * (g_direct - g_reflected);
    // derivatives of the two Gaussians
    let dy = pref
        * (-(p.y - p.y_prime) / (2.0 * s) * g_direct + (p.y + p.y_prime) / (2.0 * s) * g_reflected);
    let dy_prime = pref
        * ((p.y - p.y_prime) / (2.0 * s) * g_direct + (p.y + p.y_prime) / (2.0 * s) * g_reflected);
    Ok(if p.lambda > 0.0 {
        dy_prime + p.lambda * kernel
    } else {
        -dy + p.lambda * kernel
    })
}
