//! The vanishing integral
//!
//! ```text
//! V(a′) = ∫₀^∞ Σ_j sgn(λ_j) a_j e^{-λ_j²s} e^{-a′²/s} s^{-1/2} (a′/s − |λ_j|) ds = 0
//! ```
//!
//! Each mode is handled through the substitution `s ↦ a′²/(λ²s)`, which maps
//! `(0, a′²/(λ²t))` onto `(t, ∞)`. Cutting the heat-time integral at `t` then
//! leaves, per mode, `λ_j a_j d(t, λ_j)` with
//!
//! ```text
//! d(t, λ) = ∫₀^{a′²/(λ²t)} k − ∫_t^∞ k,    k(s) = e^{-λ²s − a′²/s} s^{-1/2},
//! ```
//!
//! which tends to 0 as `t → 0`, dominated by `f(t, |λ|) e^{-a′|λ|/2}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::infinity_contribution::Estimate;
use crate::par;
use crate::quadrature::{integrate, Integral, QuadratureConfig, Tolerance};
use crate::spectral_model::BoundarySpectrum;

/// Fixed absolute tolerance for the inner integrals of the dominator.
const DOMINATOR_TOL: f64 = 1e-10;

/// The `∫_t^∞ k` integral stops this many decay lengths `1/λ²` past `t`.
const DECAY_LENGTHS: f64 = 40.0;

fn k(p: f64, a_prime: f64, s: f64) -> f64 {
    (-p * p * s - a_prime * a_prime / s).exp() / s.sqrt()
}

fn inner_tolerance() -> Tolerance {
    Tolerance {
        abs: 1e-300,
        rel: 1e-12,
        max_subdivisions: 1000,
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {x}")))
    }
}

fn difference(p: f64, a_prime: f64, t: f64) -> Result<Integral<f64>> {
    let tol = inner_tolerance();
    if t <= a_prime / p {
        // mirrored form: ∫₀^t k(s)(1 − a′/(|λ|s)) ds, one-signed on (0, t)
        return integrate(|s: f64| if s > 0.0 { k(p, a_prime, s) * (1.0 - a_prime / (p * s)) } else { 0.0 }, 0.0, t, tol);
    }
    let mirror = a_prime * a_prime / (p * p * t);
    let near = integrate(|s: f64| if s > 0.0 { k(p, a_prime, s) } else { 0.0 }, 0.0, mirror, tol)?;
    let end = t + DECAY_LENGTHS / (p * p);
    let far = integrate(|s: f64| k(p, a_prime, s), t, end, tol)?;
    // ∫_X^∞ k ≤ e^{-λ²X} / (λ²√X)
    let cut = (-p * p * end).exp() / (p * p * end.sqrt());
    Ok(Integral {
        value: near.value - far.value,
        error: near.error + far.error + cut,
        intervals: near.intervals + far.intervals,
    })
}

/// `d(t, λ)` for one mode.
pub fn per_mode_difference(lambda: f64, a_prime: f64, t: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(domain("mode with λ = 0 is not invertible"));
    }
    check_positive("a′", a_prime)?;
    check_positive("t", t)?;
    difference(lambda.abs(), a_prime, t).map(|r| r.value)
}

/// `f(t, |λ|) = max(f₁, f₂ + f₃)`, so that `|d(t, λ)| ≤ f(t, |λ|) e^{-a′|λ|/2}`
/// with `f` bounded for `t ∈ (0, 1]`.
pub fn dominator(t: f64, abs_lambda: f64, a_prime: f64) -> Result<f64> {
    check_positive("t", t)?;
    check_positive("|λ|", abs_lambda)?;
    check_positive("a′", a_prime)?;
    let p = abs_lambda;
    let q2 = a_prime * a_prime;
    let tol = Tolerance::absolute(DOMINATOR_TOL);

    let squared = integrate(
        |s: f64| {
            if s > 0.0 {
                let r = 1.0 - a_prime / (p * s);
                (-q2 / s).exp() / s * r * r
            } else {
                0.0
            }
        },
        0.0,
        t,
        tol,
    )?;
    let f1 = (a_prime / p).sqrt() * (squared.value + squared.error).sqrt();

    // e^{-a′²/(2s)} s^{-1/2} increases up to s = a′² and decreases after
    let h = |s: f64| (-q2 / (2.0 * s)).exp() / s.sqrt();
    let f2 = a_prime / p * h((q2 / (p * p * t)).min(q2));

    let near = integrate(|s: f64| if s > 0.0 { (-q2 / s).exp() / s.sqrt() } else { 0.0 }, 0.0, 1.0, tol)?;
    let f3 = near.value + near.error + 2.0 * (-p * p / 2.0).exp() / (p * p);

    Ok(f1.max(f2 + f3))
}

/// Auxiliary times at which the truncated sums are formed, and how many
/// modes (by rank) enter them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingTermConfig {
    pub a_prime: f64,
    pub t_sequence: Vec<f64>,
    pub cutoff_rank: usize,
}

impl VanishingTermConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("a′", self.a_prime)?;
        if self.t_sequence.is_empty() {
            return Err(domain("t sequence is empty"));
        }
        if self.t_sequence.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
            return Err(domain("t values must lie in (0, 1]"));
        }
        if self.t_sequence.windows(2).any(|w| w[1] >= w[0]) {
            return Err(domain("t sequence must be strictly decreasing"));
        }
        if self.cutoff_rank == 0 {
            return Err(domain("cutoff rank must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingSample {
    pub t: f64,
    pub partial_sum: Complex64,
}

/// A grid point where the domination inequality failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub t: f64,
    pub lambda: f64,
    pub a_prime: f64,
    pub difference: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationCertificate {
    pub checked: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Mass of the dominating series `Σ |λ_j a_j| f e^{-a′|λ_j|/2}` over the
    /// last tenth of the ranks in use and everything listed beyond them.
    pub tail_mass: f64,
    pub summable: bool,
}

impl DominationCertificate {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty() && self.summable
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub sequence: Vec<VanishingSample>,
    pub certificate: DominationCertificate,
}

/// Summability threshold for the dominating series at the cutoff.
pub const CAUCHY_TOL: f64 = 1e-12;

/// Checks `|d(t, λ)| ≤ f(t, |λ|) e^{-a′|λ|/2}` at one point.
pub fn check_domination(lambda: f64, a_prime: f64, t: f64) -> Result<(f64, f64, Option<Counterexample>)> {
    let d = per_mode_difference(lambda, a_prime, t)?;
    let bound = dominator(t, lambda.abs(), a_prime)? * (-a_prime * lambda.abs() / 2.0).exp();
    let failure = (d.abs() > bound).then_some(Counterexample {
        t,
        lambda,
        a_prime,
        difference: d,
        bound,
    });
    Ok((d, bound, failure))
}

/// Partial sums `Σ_j λ_j a_j d(t, λ_j)` along `cfg.t_sequence`, with the
/// dominated-convergence certificate.
pub fn verify_vanishing(spectrum: &BoundarySpectrum, cfg: &VanishingTermConfig) -> Result<VanishingReport> {
    cfg.validate()?;
    let data = spectrum.data();
    let used = cfg.cutoff_rank.min(data.len());
    let a_prime = cfg.a_prime;

    struct Row {
        differences: Vec<f64>,
        dominating: f64,
        failures: Vec<Counterexample>,
    }
    let rows = par::map(data, |d| -> Result<Row> {
        let mut row = Row {
            differences: Vec::with_capacity(cfg.t_sequence.len()),
            dominating: 0.0,
            failures: Vec::new(),
        };
        for &t in &cfg.t_sequence {
            let (diff, bound, failure) = check_domination(d.lambda, a_prime, t)?;
            row.differences.push(diff);
            row.dominating = row.dominating.max((d.lambda * d.trace_g.norm()).abs() * bound);
            row.failures.extend(failure);
        }
        Ok(row)
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let sequence = cfg
        .t_sequence
        .iter()
        .enumerate()
        .map(|(i, &t)| VanishingSample {
            t,
            partial_sum: data[..used]
                .iter()
                .zip(&rows)
                .fold(Complex64::new(0.0, 0.0), |acc, (d, r)| acc + d.trace_g * (d.lambda * r.differences[i])),
        })
        .collect();

    let finite = spectrum.is_complete() && used == data.len();
    let tail_mass = if finite {
        0.0
    } else {
        rows[used * 9 / 10..].iter().map(|r| r.dominating).sum()
    };
    let counterexamples: Vec<_> = rows[..used].iter().flat_map(|r| r.failures.iter().copied()).collect();
    Ok(VanishingReport {
        sequence,
        certificate: DominationCertificate {
            checked: used * cfg.t_sequence.len(),
            counterexamples,
            tail_mass,
            summable: tail_mass <= CAUCHY_TOL,
        },
    })
}

/// `V(a′)`, extrapolated to `t → 0` from `t ∈ {4, 2, 1}·t_final`, with its
/// error estimate.
pub fn vanishing_estimate(spectrum: &BoundarySpectrum, a_prime: f64, config: &QuadratureConfig) -> Result<Estimate> {
    config.validate()?;
    check_positive("a′", a_prime)?;
    // d(t) decays like e^{-a′²/t}; stop where that is far below abs_tol
    let t_final = a_prime * a_prime / (1e3 / config.abs_tol).ln().max(1.0);
    let times = [4.0 * t_final, 2.0 * t_final, t_final];

    let rows = par::map(spectrum.data(), |d| -> Result<([f64; 3], f64)> {
        let mut values = [0.0; 3];
        let mut error = 0.0;
        for (v, &t) in values.iter_mut().zip(&times) {
            let r = difference(d.lambda.abs(), a_prime, t)?;
            *v = r.value;
            error += r.error;
        }
        Ok((values, error))
    });

    let mut sums = [Complex64::new(0.0, 0.0); 3];
    let mut quad_error = 0.0;
    let mut magnitude = 0.0;
    for (d, row) in spectrum.data().iter().zip(rows) {
        let (values, error) = row?;
        for (sum, v) in sums.iter_mut().zip(values) {
            *sum += d.trace_g * (d.lambda * v);
        }
        let weight = (d.lambda * d.trace_g.norm()).abs();
        quad_error += weight * error;
        magnitude += weight * values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let guard = 1e6 * spectrum.total_trace_mass();
    if sums.iter().any(|s| !(s.norm() <= guard)) {
        return Err(Error::Instability(format!(
            "vanishing-term partial sums exceed {guard:e}"
        )));
    }

    // Between consecutive halvings the remainder shrinks by about
    // e^{-a′²/(2t)}; a slower observed contraction takes precedence.
    let [s4, s2, s1] = sums;
    let model = (-a_prime * a_prime / (2.0 * t_final)).exp();
    let observed = if (s2 - s4).norm() > 0.0 { (s1 - s2).norm() / (s2 - s4).norm() } else { 0.0 };
    let ratio = model.max(observed).min(0.5);
    let correction = (s1 - s2) * (ratio / (1.0 - ratio));
    let value = s1 + correction;
    let est_error = correction.norm() + ratio * (s1 - s2).norm() + quad_error + 100.0 * f64::EPSILON * magnitude;
    Ok(Estimate { value, est_error })
}

pub fn vanishing_term(spectrum: &BoundarySpectrum, a_prime: f64, config: &QuadratureConfig) -> Result<Complex64> {
    vanishing_estimate(spectrum, a_prime, config).map(|e| e.value)
}
