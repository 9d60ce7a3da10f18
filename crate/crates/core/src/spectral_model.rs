//! Equivariant spectral data of the boundary Dirac operator `D_N⁺`.
//!
//! A [`BoundarySpectrum`] is a finite list of eigenvalues with multiplicities
//! and traces `tr(g|ker(D_N⁺ − λ))`, sorted by `|λ|`, together with Weyl-type
//! growth constants
//!
//! ```text
//! |λ_j| ≥ c1 · j^{c2},    |a_j| ≤ c3 · j^{c4}
//! ```
//!
//! used to bound whatever lies beyond the listed eigenvalues. The APS
//! projection is always onto the strictly positive eigenvalues.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_to_infinity, Tolerance};

/// Eigenvalues closer than this are merged by [`direct_sum`].
pub const COALESCE_TOL: f64 = 1e-12;

/// Slack allowed when checking stored invariants against floating-point data.
const INVARIANT_SLACK: f64 = 1e-12;

/// Explicit tail-bound terms summed before giving up with `+∞`.
const MAX_EXPLICIT_TERMS: usize = 1_000_000;

/// Tail bounds larger than this are reported as `+∞`.
pub const OVERFLOW_THRESHOLD: f64 = 1e300;

/// One eigenvalue of `D_N⁺`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDatum {
    pub lambda: f64,
    pub multiplicity: u32,
    /// `tr(g|ker(D_N⁺ − λ))`
    pub trace_g: Complex64,
}

impl SpectralDatum {
    pub fn sign(&self) -> f64 {
        self.lambda.signum()
    }
}

/// Growth constants `|λ_j| ≥ c1 j^{c2}` and `|a_j| ≤ c3 j^{c4}` (1-based rank `j`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
}

impl WeylConstants {
    fn lower_eigenvalue(&self, rank: f64) -> f64 {
        self.c1 * rank.powf(self.c2)
    }

    fn upper_trace(&self, rank: f64) -> f64 {
        self.c3 * rank.powf(self.c4)
    }
}

/// Whether eigenvalues beyond the listed ones exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// The data is the whole spectrum.
    Complete,
    /// Every eigenvalue with `|λ| ≤ Λ` is listed; larger ones may be omitted.
    Cutoff(f64),
}

/// Sorted, validated finite piece of `spec(D_N⁺)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpectrum {
    data: Vec<SpectralDatum>,
    gap: f64,
    weyl: WeylConstants,
    truncation: Truncation,
}

fn by_abs_then_sign(a: &SpectralDatum, b: &SpectralDatum) -> Ordering {
    a.lambda
        .abs()
        .total_cmp(&b.lambda.abs())
        .then_with(|| a.lambda.total_cmp(&b.lambda))
}

fn check_datum(index: usize, d: &SpectralDatum) -> Result<()> {
    if !d.lambda.is_finite() {
        return Err(Error::InvalidSpectrum {
            index: Some(index),
            reason: format!("eigenvalue {} is not finite", d.lambda),
        });
    }
    if d.lambda == 0.0 {
        return Err(Error::InvalidSpectrum {
            index: Some(index),
            reason: "zero eigenvalue: the boundary operator must be invertible".into(),
        });
    }
    if d.multiplicity == 0 {
        return Err(Error::InvalidSpectrum {
            index: Some(index),
            reason: "multiplicity must be positive".into(),
        });
    }
    if !(d.trace_g.re.is_finite() && d.trace_g.im.is_finite()) {
        return Err(Error::InvalidSpectrum {
            index: Some(index),
            reason: "trace is not finite".into(),
        });
    }
    let m = f64::from(d.multiplicity);
    if d.trace_g.norm() > m * (1.0 + INVARIANT_SLACK) {
        return Err(Error::InvalidTrace {
            index,
            trace_abs: d.trace_g.norm(),
            multiplicity: d.multiplicity,
        });
    }
    Ok(())
}

/// Largest `c1` with `|λ_j| ≥ c1 j^{c2}` on the data.
fn fitted_c1(data: &[SpectralDatum], c2: f64) -> f64 {
    data.iter()
        .enumerate()
        .map(|(i, d)| d.lambda.abs() / ((i + 1) as f64).powf(c2))
        .fold(f64::INFINITY, f64::min)
}

fn fitted_c3(data: &[SpectralDatum], c4: f64) -> f64 {
    data.iter()
        .enumerate()
        .map(|(i, d)| d.trace_g.norm() / ((i + 1) as f64).powf(c4))
        .fold(0.0, f64::max)
}

fn fit_weyl(data: &[SpectralDatum]) -> WeylConstants {
    let next_rank = (data.len() + 1) as f64;
    let (c1, c2) = [1.0, 0.5, 1.0 / 3.0, 0.25]
        .into_iter()
        .map(|c2| (fitted_c1(data, c2), c2))
        .fold((0.0, 1.0), |best, (c1, c2)| {
            if c1 * next_rank.powf(c2) > best.0 * next_rank.powf(best.1) {
                (c1, c2)
            } else {
                best
            }
        });
    let c3 = data
        .iter()
        .map(|d| f64::from(d.multiplicity))
        .fold(0.0, f64::max);
    WeylConstants { c1, c2, c3, c4: 0.0 }
}

impl BoundarySpectrum {
    /// Validates and sorts `data`. Weyl constants are fitted when `weyl` is `None`.
    pub fn new(
        mut data: Vec<SpectralDatum>,
        weyl: Option<WeylConstants>,
        truncation: Truncation,
    ) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidSpectrum {
                index: None,
                reason: "spectrum has no eigenvalues".into(),
            });
        }
        for (i, d) in data.iter().enumerate() {
            check_datum(i, d)?;
        }
        data.sort_by(by_abs_then_sign);
        let gap = data[0].lambda.abs();
        let weyl = match weyl {
            Some(w) => {
                if !(w.c1 > 0.0 && w.c2 > 0.0 && w.c3 > 0.0 && w.c4 >= 0.0)
                    || ![w.c1, w.c2, w.c3, w.c4].iter().all(|c| c.is_finite())
                {
                    return Err(Error::InvalidSpectrum {
                        index: None,
                        reason: "Weyl constants must be positive and finite".into(),
                    });
                }
                w
            }
            None => fit_weyl(&data),
        };
        if let Truncation::Cutoff(cutoff) = truncation {
            if !(cutoff > 0.0 && cutoff.is_finite()) {
                return Err(Error::InvalidSpectrum {
                    index: None,
                    reason: format!("truncation cutoff must be positive, got {cutoff}"),
                });
            }
        }
        let spectrum = Self {
            data,
            gap,
            weyl,
            truncation,
        };
        spectrum.check_weyl()?;
        Ok(spectrum)
    }

    /// Verifies the rank-indexed growth inequalities on every datum.
    pub fn check_weyl(&self) -> Result<()> {
        for (i, d) in self.data.iter().enumerate() {
            let rank = (i + 1) as f64;
            let lower = self.weyl.lower_eigenvalue(rank);
            if d.lambda.abs() < lower * (1.0 - INVARIANT_SLACK) {
                return Err(Error::InvalidSpectrum {
                    index: Some(i),
                    reason: format!("|λ| = {} violates the Weyl lower bound {lower}", d.lambda.abs()),
                });
            }
            let upper = self.weyl.upper_trace(rank);
            if d.trace_g.norm() > upper * (1.0 + INVARIANT_SLACK) {
                return Err(Error::InvalidSpectrum {
                    index: Some(i),
                    reason: format!("|trace| = {} violates the growth bound {upper}", d.trace_g.norm()),
                });
            }
        }
        Ok(())
    }

    pub fn data(&self) -> &[SpectralDatum] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Spectral gap `b = min |λ|`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn weyl(&self) -> WeylConstants {
        self.weyl
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// `Λ`: every eigenvalue with `|λ| ≤ Λ` is listed.
    pub fn truncated_at(&self) -> f64 {
        match self.truncation {
            Truncation::Cutoff(c) => c,
            Truncation::Complete => self.data.last().map_or(0.0, |d| d.lambda.abs()),
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.truncation, Truncation::Complete)
    }

    /// Number of listed eigenvalues with `|λ| ≤ cutoff`.
    pub fn rank_at(&self, cutoff: f64) -> usize {
        self.data.partition_point(|d| d.lambda.abs() <= cutoff)
    }

    /// True when every trace equals its multiplicity, i.e. `g` acts trivially.
    pub fn is_identity(&self) -> bool {
        self.data.iter().all(|d| {
            (d.trace_g - Complex64::new(f64::from(d.multiplicity), 0.0)).norm() <= INVARIANT_SLACK
        })
    }

    /// `Σ |a_j|` over the listed modes.
    pub fn total_trace_mass(&self) -> f64 {
        self.data.iter().map(|d| d.trace_g.norm()).sum()
    }

    /// The spectrum of `−D_N⁺`.
    pub fn negated(&self) -> Self {
        let mut data: Vec<_> = self
            .data
            .iter()
            .map(|d| SpectralDatum {
                lambda: -d.lambda,
                ..*d
            })
            .collect();
        data.sort_by(by_abs_then_sign);
        Self {
            data,
            gap: self.gap,
            weyl: self.weyl,
            truncation: self.truncation,
        }
    }

    /// The spectrum of `c · D_N⁺` for `c > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(domain(format!("scale factor must be positive, got {factor}")));
        }
        let data = self
            .data
            .iter()
            .map(|d| SpectralDatum {
                lambda: d.lambda * factor,
                ..*d
            })
            .collect();
        let weyl = WeylConstants {
            c1: self.weyl.c1 * factor,
            ..self.weyl
        };
        let truncation = match self.truncation {
            Truncation::Cutoff(c) => Truncation::Cutoff(c * factor),
            Truncation::Complete => Truncation::Complete,
        };
        Self::new(data, Some(weyl), truncation)
    }
}

/// Spectrum `{n + twist : |n| ≤ n_max}` of `−i d/dθ + twist` on the circle,
/// with `g` acting by rotation through `rotation_angle`.
pub fn circle_spectrum(twist: f64, rotation_angle: f64, n_max: u32) -> Result<BoundarySpectrum> {
    if !(twist > 0.0 && twist < 1.0) {
        return Err(Error::InvalidSpectrum {
            index: None,
            reason: format!("twist must lie in (0, 1), got {twist}"),
        });
    }
    if n_max == 0 {
        return Err(domain("n_max must be at least 1"));
    }
    if !rotation_angle.is_finite() {
        return Err(domain("rotation angle must be finite"));
    }
    let n_max = i64::from(n_max);
    let data = (-n_max..=n_max)
        .map(|n| {
            let phase = -(n as f64) * rotation_angle;
            SpectralDatum {
                lambda: n as f64 + twist,
                multiplicity: 1,
                trace_g: Complex64::new(phase.cos(), phase.sin()),
            }
        })
        .collect();
    let gap = twist.min(1.0 - twist);
    // The infinite sequence of |λ| reads gap, 1 − gap, 1 + gap, 2 − gap, ...,
    // which dominates min(gap, 1/4)·j for every rank j.
    let weyl = WeylConstants {
        c1: gap.min(0.25),
        c2: 1.0,
        c3: 1.0,
        c4: 0.0,
    };
    BoundarySpectrum::new(data, Some(weyl), Truncation::Cutoff(n_max as f64))
}

/// Builds a complete spectrum from `(λ, multiplicity, Re trace, Im trace)` records.
pub fn from_records(records: &[(f64, u32, f64, f64)]) -> Result<BoundarySpectrum> {
    let data = records
        .iter()
        .map(|&(lambda, multiplicity, re, im)| SpectralDatum {
            lambda,
            multiplicity,
            trace_g: Complex64::new(re, im),
        })
        .collect();
    BoundarySpectrum::new(data, None, Truncation::Complete)
}

/// Spectrum of the direct sum of two boundary operators.
pub fn direct_sum(a: &BoundarySpectrum, b: &BoundarySpectrum) -> BoundarySpectrum {
    let mut all: Vec<SpectralDatum> = a.data.iter().chain(b.data.iter()).copied().collect();
    all.sort_by(by_abs_then_sign);
    let mut merged: Vec<SpectralDatum> = Vec::with_capacity(all.len());
    for d in all {
        match merged.iter_mut().rev().take_while(|m| (m.lambda.abs() - d.lambda.abs()).abs() <= COALESCE_TOL).find(|m| {
            m.lambda.signum() == d.lambda.signum() && (m.lambda - d.lambda).abs() <= COALESCE_TOL
        }) {
            Some(m) => {
                m.multiplicity += d.multiplicity;
                m.trace_g += d.trace_g;
            }
            None => merged.push(d),
        }
    }

    // Among the first j merged eigenvalues at least ⌈j/2⌉ come from one
    // summand, which gives the halved-rank bound below.
    let c2 = a.weyl.c2.min(b.weyl.c2);
    let c4 = a.weyl.c4.max(b.weyl.c4);
    let c1 = (a.weyl.c1.min(b.weyl.c1) * 0.5f64.powf(c2)).min(fitted_c1(&merged, c2));
    let c3 = (a.weyl.c3 + b.weyl.c3).max(fitted_c3(&merged, c4));
    let truncation = match (a.truncation, b.truncation) {
        (Truncation::Complete, Truncation::Complete) => Truncation::Complete,
        (Truncation::Cutoff(x), Truncation::Complete) | (Truncation::Complete, Truncation::Cutoff(x)) => {
            Truncation::Cutoff(x)
        }
        (Truncation::Cutoff(x), Truncation::Cutoff(y)) => Truncation::Cutoff(x.min(y)),
    };
    let gap = merged[0].lambda.abs();
    BoundarySpectrum {
        data: merged,
        gap,
        weyl: WeylConstants { c1, c2, c3, c4 },
        truncation,
    }
}

/// Guaranteed upper bound on what the eigenvalues above the cutoff can add
/// to any per-mode integrand at heat times `s ≥ s_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationBound {
    pub cutoff: f64,
    pub s_min: f64,
    pub bound: f64,
}

/// Weyl majorant of the omitted tail.
///
/// Each omitted mode of rank `j` has `|λ| ≥ x_j = c1 j^{c2}` and
/// `|a| ≤ c3 j^{c4}`. All per-mode integrands used by the eta and
/// contribution computations are bounded by
/// `|a| (1 + (4πs)^{-1/2}) (2|λ| + a′/s + 1) e^{-λ²s}`, so the bound sums
/// the supremum of that expression over `|λ| ≥ x_j`.
pub fn tail_bound(spectrum: &BoundarySpectrum, s_min: f64, a_prime: f64) -> Result<TruncationBound> {
    if !(s_min > 0.0) || s_min.is_nan() {
        return Err(domain(format!("s_min must be positive, got {s_min}")));
    }
    if !(a_prime >= 0.0) {
        return Err(domain(format!("a′ must be nonnegative, got {a_prime}")));
    }
    let cutoff = spectrum.truncated_at();
    let bound = match spectrum.truncation {
        Truncation::Complete => 0.0,
        Truncation::Cutoff(_) => weyl_tail_sum(&spectrum.weyl, spectrum.rank_at(cutoff) + 1, s_min, a_prime),
    };
    Ok(TruncationBound {
        cutoff,
        s_min,
        bound,
    })
}

struct TailTerm {
    w: WeylConstants,
    s: f64,
    shift: f64,
    scale: f64,
    peak: f64,
}

impl TailTerm {
    fn new(w: WeylConstants, s: f64, a_prime: f64) -> Self {
        let shift = a_prime / s + 1.0;
        let scale = 1.0 + 1.0 / (4.0 * PI * s).sqrt();
        // x* where (2x + shift) e^{-x²s} starts decreasing: 2s x² + s·shift·x − 1 = 0
        let peak = (-s * shift + (s * s * shift * shift + 8.0 * s).sqrt()) / (4.0 * s);
        Self {
            w,
            s,
            shift,
            scale,
            peak,
        }
    }

    fn profile(&self, x: f64) -> f64 {
        let x = x.max(self.peak);
        (2.0 * x + self.shift) * (-x * x * self.s).exp()
    }

    fn at(&self, rank: f64) -> f64 {
        self.w.upper_trace(rank) * self.scale * self.profile(self.w.lower_eigenvalue(rank))
    }

    /// Once `x ≥ x*`, `d log t / d log j = c4 + c2 x (2/(2x + shift) − 2xs)`,
    /// which is decreasing in `x`; the returned rank starts the monotone regime.
    fn monotone_from(&self) -> f64 {
        let slope = |x: f64| self.w.c4 + self.w.c2 * x * (2.0 / (2.0 * x + self.shift) - 2.0 * x * self.s);
        let mut lo = self.peak;
        if slope(lo) > 0.0 {
            let mut hi = lo.max(1.0) * 2.0;
            while slope(hi) > 0.0 {
                hi *= 2.0;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo = hi;
        }
        (lo / self.w.c1).powf(1.0 / self.w.c2)
    }
}

fn weyl_tail_sum(w: &WeylConstants, first_rank: usize, s: f64, a_prime: f64) -> f64 {
    let term = TailTerm::new(*w, s, a_prime);
    let mono = term.monotone_from().ceil().max(first_rank as f64);
    if mono - first_rank as f64 > MAX_EXPLICIT_TERMS as f64 {
        return f64::INFINITY;
    }
    let mono = mono as usize;
    let explicit: f64 = (first_rank..mono).map(|j| term.at(j as f64)).sum();
    // decreasing from `mono` on: Σ_{k≥mono} t(k) ≤ t(mono) + ∫_mono^∞ t
    let head = term.at(mono as f64);
    // e-folding length in rank of e^{-(c1 j^{c2})² s} at j = mono
    let decay_len = (1.0 / (2.0 * w.c1 * w.c1 * w.c2 * s * (mono as f64).powf(2.0 * w.c2 - 1.0))).max(1.0);
    let tol = Tolerance {
        abs: 1e-300,
        rel: 1e-8,
        max_subdivisions: 2000,
    };
    let remainder = match integrate_to_infinity(|y: f64| term.at(y), mono as f64, decay_len, tol) {
        Ok(r) => r.value + r.error,
        Err(_) => return f64::INFINITY,
    };
    let total = explicit + head + remainder * (1.0 + 1e-6);
    if total.is_finite() && total <= OVERFLOW_THRESHOLD {
        total
    } else {
        f64::INFINITY
    }
}

/// Smallest heat time `s ∈ [s_floor, s_max]` at which `error(s) ≤ target`,
/// for a non-increasing `error`; `s_max` if even that fails.
pub(crate) fn smallest_time_within(
    error: impl Fn(f64) -> f64,
    target: f64,
    s_max: f64,
) -> f64 {
    if error(s_max) > target {
        return s_max;
    }
    let mut hi = s_max.ln();
    let mut lo = (s_max * 1e-30).ln();
    if error(lo.exp()) <= target {
        return lo.exp();
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if error(mid.exp()) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi.exp()
}

/// On-disk spectrum format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub data: Vec<RecordFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylConstants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated_at: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordFile {
    pub lambda: f64,
    pub multiplicity: u32,
    pub trace: [f64; 2],
}

impl From<&BoundarySpectrum> for SpectrumFile {
    fn from(s: &BoundarySpectrum) -> Self {
        Self {
            data: s
                .data
                .iter()
                .map(|d| RecordFile {
                    lambda: d.lambda,
                    multiplicity: d.multiplicity,
                    trace: [d.trace_g.re, d.trace_g.im],
                })
                .collect(),
            weyl: Some(s.weyl),
            truncated_at: match s.truncation {
                Truncation::Cutoff(c) => Some(c),
                Truncation::Complete => None,
            },
        }
    }
}

impl TryFrom<SpectrumFile> for BoundarySpectrum {
    type Error = Error;

    fn try_from(file: SpectrumFile) -> Result<Self> {
        let data = file
            .data
            .iter()
            .map(|r| SpectralDatum {
                lambda: r.lambda,
                multiplicity: r.multiplicity,
                trace_g: Complex64::new(r.trace[0], r.trace[1]),
            })
            .collect();
        let truncation = file.truncated_at.map_or(Truncation::Complete, Truncation::Cutoff);
        BoundarySpectrum::new(data, file.weyl, truncation)
    }
}

impl BoundarySpectrum {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpectrumFile = serde_json::from_str(text).map_err(|e| Error::InvalidSpectrum {
            index: None,
            reason: format!("malformed spectrum file: {e}"),
        })?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpectrumFile::from(self)).expect("spectrum serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambdas(s: &BoundarySpectrum) -> Vec<f64> {
        s.data().iter().map(|d| d.lambda).collect()
    }

    #[test]
    fn circle_enumeration() {
        let s = circle_spectrum(0.25, 0.0, 2).unwrap();
        let mut l = lambdas(&s);
        l.sort_by(f64::total_cmp);
        assert_eq!(l, vec![-1.75, -0.75, 0.25, 1.25, 2.25]);
        assert!(s.data().iter().all(|d| d.trace_g == Complex64::new(1.0, 0.0)));
        assert!(s.is_identity());

        let s = circle_spectrum(0.5, 0.0, 1).unwrap();
        assert_eq!(s.gap(), 0.5);
        assert_eq!(lambdas(&s), vec![-0.5, 0.5, 1.5]);
    }

    #[test]
    fn circle_rotation_traces() {
        let s = circle_spectrum(0.25, PI, 1).unwrap();
        for d in s.data() {
            let n = (d.lambda - 0.25).round();
            let want = if n == 0.0 { 1.0 } else { -1.0 };
            assert!((d.trace_g.re - want).abs() < 1e-15 && d.trace_g.im.abs() < 1e-15);
        }
        assert!(!s.is_identity());
    }

    #[test]
    fn circle_rejects_integer_twist() {
        for t in [0.0, 1.0, -0.2, 1.3] {
            assert!(matches!(circle_spectrum(t, 0.0, 3), Err(Error::InvalidSpectrum { .. })));
        }
    }

    #[test]
    fn circle_weyl_holds_for_every_twist() {
        for t in [0.01, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.6, 0.9, 0.99] {
            let s = circle_spectrum(t, 0.3, 300).unwrap();
            s.check_weyl().unwrap();
        }
    }

    #[test]
    fn records_sorting_and_gap() {
        let s = from_records(&[(2.0, 1, 1.0, 0.0)]).unwrap();
        assert_eq!(s.gap(), 2.0);
        let s = from_records(&[(1.0, 1, 1.0, 0.0), (-1.0, 1, 1.0, 0.0)]).unwrap();
        assert_eq!(lambdas(&s), vec![-1.0, 1.0]);
        assert_eq!(s.gap(), 1.0);
        let s = from_records(&[(0.5, 2, 2.0, 0.0), (-1.5, 1, 0.5, 0.0)]).unwrap();
        assert_eq!(lambdas(&s), vec![0.5, -1.5]);
        assert_eq!(s.gap(), 0.5);
    }

    #[test]
    fn records_errors_name_the_record() {
        let err = from_records(&[(1.0, 1, 1.0, 0.0), (0.0, 1, 1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidSpectrum { index: Some(1), .. }));
        let err = from_records(&[(1.0, 1, 1.5, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidTrace { index: 0, .. }));
        assert!(from_records(&[]).is_err());
        assert!(from_records(&[(1.0, 0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn fitted_weyl_constants_hold() {
        let s = from_records(&[(0.3, 1, 1.0, 0.0), (-0.4, 3, 0.0, 2.0), (1.0, 2, -1.0, 1.0), (5.0, 1, 0.0, 0.0)]).unwrap();
        s.check_weyl().unwrap();
        assert!(s.weyl().c1 > 0.0);
    }

    #[test]
    fn direct_sum_coalesces_and_orders() {
        let a = from_records(&[(1.0, 1, 1.0, 0.0)]).unwrap();
        let b = from_records(&[(-1.0, 1, 1.0, 0.0)]).unwrap();
        assert_eq!(lambdas(&direct_sum(&a, &b)), vec![-1.0, 1.0]);

        let aa = direct_sum(&a, &a);
        assert_eq!(aa.len(), 1);
        assert_eq!(aa.data()[0].multiplicity, 2);
        assert_eq!(aa.data()[0].trace_g, Complex64::new(2.0, 0.0));

        let c = circle_spectrum(0.25, 0.0, 1).unwrap();
        let three = from_records(&[(3.0, 1, 1.0, 0.0)]).unwrap();
        let sum = direct_sum(&c, &three);
        assert_eq!(lambdas(&sum), vec![0.25, -0.75, 1.25, 3.0]);
        assert_eq!(sum.truncation(), Truncation::Cutoff(1.0));
        sum.check_weyl().unwrap();
    }

    #[test]
    fn tail_bound_limits() {
        let s = circle_spectrum(0.25, 0.0, 400).unwrap();
        let tb = tail_bound(&s, 1.0, 0.5).unwrap();
        assert!(tb.bound < 1e-15, "{}", tb.bound);
        let mut last = tb.bound;
        for s_min in [1e-1, 1e-2, 1e-4, 1e-8, 1e-14] {
            let b = tail_bound(&s, s_min, 0.5).unwrap().bound;
            assert!(b >= last);
            last = b;
        }
        assert_eq!(tail_bound(&s, 1e-14, 0.0).unwrap().bound, f64::INFINITY);
        assert_eq!(tail_bound(&s, 1e-250, 0.5).unwrap().bound, f64::INFINITY);
        assert!(tail_bound(&s, 0.0, 0.5).is_err());
        assert!(tail_bound(&s, -1.0, 0.5).is_err());
    }

    #[test]
    fn json_round_trip_keeps_truncation() {
        let s = circle_spectrum(0.3, 0.7, 5).unwrap();
        let back = BoundarySpectrum::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let plain = r#"{"data":[{"lambda":2.0,"multiplicity":1,"trace":[1.0,0.0]}]}"#;
        let s = BoundarySpectrum::from_json(plain).unwrap();
        assert!(s.is_complete());
        assert!(BoundarySpectrum::from_json("{\"data\": [").is_err());
    }
}
