//! Grid checks of the per-mode kernel identities.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::mode_kernels::{
    dirichlet_image_term, dirichlet_lambda_combination, dirichlet_mode_kernel, full_line_mode_kernel,
    lambda_mode_kernel, ModePoint,
};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    pub lambdas: Vec<f64>,
    pub times: Vec<f64>,
    pub coords: Vec<f64>,
}

impl KernelGrid {
    /// `λ ∈ {±0.25, ±1, ±3}`, `s ∈ {0.05, 0.5, 5}`, `y, y′ ∈ {0, 0.3, 1, 2}`.
    pub fn decomposition_default() -> Self {
        Self {
            lambdas: vec![-3.0, -1.0, -0.25, 0.25, 1.0, 3.0],
            times: vec![0.05, 0.5, 5.0],
            coords: vec![0.0, 0.3, 1.0, 2.0],
        }
    }

    /// `λ ∈ {±0.5, ±1, ±2.5}`, `s ∈ {0.1, 1, 10}` at `y = y′ = 0`.
    pub fn boundary_default() -> Self {
        Self {
            lambdas: vec![-2.5, -1.0, -0.5, 0.5, 1.0, 2.5],
            times: vec![0.1, 1.0, 10.0],
            coords: vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.times.is_empty() || self.coords.is_empty() {
            return Err(domain("kernel grid has an empty axis"));
        }
        if self.lambdas.iter().any(|&l| l == 0.0 || !l.is_finite()) {
            return Err(domain("grid eigenvalues must be nonzero"));
        }
        if self.times.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(domain("grid times must be positive"));
        }
        if self.coords.iter().any(|&y| !(y >= 0.0 && y.is_finite())) {
            return Err(domain("grid coordinates must be nonnegative"));
        }
        Ok(())
    }

    fn points(&self) -> Vec<ModePoint> {
        let mut pts = Vec::with_capacity(self.lambdas.len() * self.times.len() * self.coords.len().pow(2));
        for &lambda in &self.lambdas {
            for &s in &self.times {
                for &y in &self.coords {
                    for &y_prime in &self.coords {
                        pts.push(ModePoint {
                            lambda,
                            s,
                            y,
                            y_prime,
                        });
                    }
                }
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub max_abs: f64,
    /// `[λ, s, y, y′]` where the maximum is attained.
    pub argmax: [f64; 4],
    pub samples: usize,
}

fn max_deviation(points: &[ModePoint], f: impl Fn(ModePoint) -> Result<f64> + Sync + Send) -> Result<DeviationReport> {
    let values = par::map(points, |p| f(*p));
    let mut report = DeviationReport {
        max_abs: 0.0,
        argmax: [points[0].lambda, points[0].s, points[0].y, points[0].y_prime],
        samples: 0,
    };
    for (p, v) in points.iter().zip(values) {
        let v = v?.abs();
        report.samples += 1;
        // NaN must not hide behind a comparison
        if v > report.max_abs || v.is_nan() {
            report.max_abs = v;
            report.argmax = [p.lambda, p.s, p.y, p.y_prime];
            if v.is_nan() {
                break;
            }
        }
    }
    Ok(report)
}

/// `max |λ-kernel − Dirichlet combination|` over the grid.
pub fn verify_decomposition(grid: &KernelGrid) -> Result<DeviationReport> {
    grid.validate()?;
    max_deviation(&grid.points(), |p| {
        Ok(lambda_mode_kernel(p)? - dirichlet_lambda_combination(p)?)
    })
}

/// `max |λ-kernel(λ, s, 0, 0)|` over the grid's `(λ, s)` pairs.
pub fn verify_boundary_vanish(grid: &KernelGrid) -> Result<DeviationReport> {
    grid.validate()?;
    let boundary = KernelGrid {
        coords: vec![0.0],
        ..grid.clone()
    };
    max_deviation(&boundary.points(), lambda_mode_kernel)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub s: f64,
    /// `log |κ^F − κ^free|` at `y = y′`.
    pub log_deviation: f64,
    /// `log_deviation + y²/s`
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDecay {
    pub lambda: f64,
    pub y: f64,
    pub samples: Vec<DecaySample>,
    /// Largest relative gap between the computed image term and
    /// `e^{-λ²s}(4πs)^{-1/2}e^{-y²/s}`.
    pub identity_rel_error: f64,
    /// Largest `|κ^free − κ^F − image|` in units of `ε·κ^free`.
    pub subtraction_ulps: f64,
    /// `−½ log(4π s_min)`, the a priori bound on every `excess`.
    pub excess_bound: f64,
    pub bounded: bool,
}

/// Decay of the distance between the Dirichlet and free kernels at an
/// interior point, along a sequence of heat times.
pub fn verify_not_feel_boundary(lambda: f64, y: f64, times: &[f64]) -> Result<BoundaryDecay> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(domain(format!("interior point must have y > 0, got {y}")));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("eigenvalue must be nonzero"));
    }
    if times.is_empty() {
        return Err(domain("no heat times given"));
    }
    let mut samples = Vec::with_capacity(times.len());
    let mut identity_rel_error: f64 = 0.0;
    let mut subtraction_ulps: f64 = 0.0;
    let mut s_min = f64::INFINITY;
    for &s in times {
        let p = ModePoint::new(lambda, s, y, y)?;
        let image = dirichlet_image_term(p);
        let log_closed = -lambda * lambda * s - 0.5 * (4.0 * std::f64::consts::PI * s).ln() - y * y / s;
        let log_deviation = image.ln();
        let closed = (-lambda * lambda * s).exp() / (4.0 * std::f64::consts::PI * s).sqrt() * (-y * y / s).exp();
        if closed > 0.0 {
            identity_rel_error = identity_rel_error.max((image - closed).abs() / closed);
        } else {
            identity_rel_error = identity_rel_error.max((log_deviation - log_closed).abs());
        }
        let free = full_line_mode_kernel(p);
        let gap = free - dirichlet_mode_kernel(p) - image;
        subtraction_ulps = subtraction_ulps.max(gap.abs() / (f64::EPSILON * free));
        s_min = s_min.min(s);
        samples.push(DecaySample {
            s,
            log_deviation,
            excess: log_deviation + y * y / s,
        });
    }
    let excess_bound = -0.5 * (4.0 * std::f64::consts::PI * s_min).ln();
    let bounded = samples.iter().all(|x| x.excess <= excess_bound + 1e-12);
    Ok(BoundaryDecay {
        lambda,
        y,
        samples,
        identity_rel_error,
        subtraction_ulps,
        excess_bound,
        bounded,
    })
}
