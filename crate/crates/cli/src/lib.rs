//! `aps-eta` command-line reports.
//!
//! Every invocation writes one JSON document
//! `{"request": …, "result": …, "errors": […], "version": …}` and exits with
//! 0 on success, 1 on bad input and 2 when a verification fails or a
//! computation cannot be certified.

// Failure checks are written `!(x <= tol)` so that NaN fails.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};

use aps_eta::kernel_identities::{verify_not_feel_boundary, KernelGrid};
use aps_eta::{
    aps_index, assemble_index, circle_spectrum, contribution, dirichlet_variant_estimate, eta_invariant,
    relative_index_check, verify_boundary_vanish, verify_decomposition, verify_vanishing, BoundarySpectrum,
    QuadratureConfig, VanishingTermConfig,
};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

pub const DECOMPOSITION_TOL: f64 = 1e-11;
pub const BOUNDARY_TOL: f64 = 1e-12;
const DECAY_TIMES: [f64; 5] = [1.0, 0.5, 0.1, 0.05, 0.01];

#[derive(Debug, Parser)]
#[command(name = "aps-eta", version, about = "Eta invariants and contributions from infinity on cylindrical ends")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Eta,
    Contribution,
    DirichletVariant,
    VerifyIdentities,
    VerifyVanishing,
    Index,
    Relative,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delocalised eta invariant of a boundary spectrum
    Eta(Flags),
    /// Contribution from infinity A(a′), directly and via −η/2 + V
    Contribution(Flags),
    /// The Dirichlet-boundary analogue of A(a′)
    DirichletVariant(Flags),
    /// Kernel identities on the default grids
    VerifyIdentities(Flags),
    /// Partial sums of the vanishing integral with the domination certificate
    VerifyVanishing(Flags),
    /// Index from the APS formula and from the contribution at each a′
    Index(Flags),
    /// Relative index check between two spectra
    Relative(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Eta(f) => (CommandKind::Eta, f),
            Command::Contribution(f) => (CommandKind::Contribution, f),
            Command::DirichletVariant(f) => (CommandKind::DirichletVariant, f),
            Command::VerifyIdentities(f) => (CommandKind::VerifyIdentities, f),
            Command::VerifyVanishing(f) => (CommandKind::VerifyVanishing, f),
            Command::Index(f) => (CommandKind::Index, f),
            Command::Relative(f) => (CommandKind::Relative, f),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Flags {
    /// Spectrum file (JSON); repeat for `relative`
    #[arg(long = "spectrum", value_name = "PATH")]
    pub spectrum: Vec<PathBuf>,
    /// Circle spectrum {n + twist}; repeat for `relative`
    #[arg(long = "twist", value_name = "R")]
    pub twist: Vec<f64>,
    /// Rotation angle of g on the circle
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rotation_angle: f64,
    /// Circle modes n with |n| ≤ n_max
    #[arg(long, default_value_t = 2000)]
    pub n_max: u32,
    /// Distance a′ into the cylinder (repeatable)
    #[arg(long = "a-prime", value_name = "R")]
    pub a_prime: Vec<f64>,
    /// Interior term as RE,IM (repeat for `relative`)
    #[arg(long = "as-term", value_name = "RE,IM", value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(serialize_with = "complex_list")]
    pub as_term: Vec<Complex64>,
    /// Split point T of the heat-time integrals
    #[arg(long = "split-T", default_value_t = QuadratureConfig::default().split_t)]
    pub split_t: f64,
    #[arg(long, default_value_t = QuadratureConfig::default().abs_tol)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = QuadratureConfig::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = QuadratureConfig::default().max_subdivisions)]
    pub max_subdivisions: usize,
    /// Warp factor f₁(a′)
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub f1: f64,
    /// Auxiliary times for `verify-vanishing` (repeatable, decreasing)
    #[arg(long = "t", value_name = "R")]
    pub t: Vec<f64>,
    /// Write the report here instead of standard output
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

fn complex_list<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(format!("expected RE,IM, got {text:?}")),
    }
}

impl Flags {
    pub fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            split_t: self.split_t,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn as_term(&self, i: usize) -> Complex64 {
        self.as_term.get(i).copied().unwrap_or_default()
    }
}

/// Why a run did not succeed.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Input,
    Verification,
    Numerical,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            kind: FailureKind::Input,
            message: message.into(),
            report: None,
        }
    }

    fn verification(message: impl Into<String>, report: Value) -> Self {
        Self {
            kind: FailureKind::Verification,
            message: message.into(),
            report: Some(report),
        }
    }
}

impl From<aps_eta::Error> for Failure {
    fn from(e: aps_eta::Error) -> Self {
        use aps_eta::Error::*;
        let kind = match e {
            InvalidSpectrum { .. } | InvalidTrace { .. } | Domain(_) => FailureKind::Input,
            QuadratureFailure { .. } | Instability(_) => FailureKind::Numerical,
        };
        Self {
            kind,
            message: e.to_string(),
            report: None,
        }
    }
}

#[derive(Debug, Serialize)]
struct Request<'a> {
    command: CommandKind,
    #[serde(flatten)]
    flags: &'a Flags,
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    request: Request<'a>,
    result: Value,
    errors: Vec<Failure>,
    version: &'static str,
}

/// A finished run: the JSON text and the process exit status.
#[derive(Debug)]
pub struct Outcome {
    pub document: String,
    pub exit_code: i32,
    pub messages: Vec<String>,
}

pub fn run(kind: CommandKind, flags: &Flags) -> Outcome {
    let (result, errors) = match dispatch(kind, flags) {
        Ok((result, errors)) => (result, errors),
        Err(e) => (Value::Null, vec![e]),
    };
    let exit_code = exit_code(&errors);
    let messages = errors.iter().map(|e| e.message.clone()).collect();
    let doc = Document {
        request: Request { command: kind, flags },
        result,
        errors,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut document = serde_json::to_string_pretty(&doc).expect("report serializes");
    document.push('\n');
    Outcome {
        document,
        exit_code,
        messages,
    }
}

fn exit_code(errors: &[Failure]) -> i32 {
    if errors.iter().any(|e| e.kind == FailureKind::Input) {
        1
    } else if errors.is_empty() {
        0
    } else {
        2
    }
}

/// Writes through a temporary sibling file so readers never see a partial report.
pub fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn load_spectra(flags: &Flags) -> Result<Vec<BoundarySpectrum>, Failure> {
    let mut out = Vec::new();
    for path in &flags.spectrum {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
        let s = BoundarySpectrum::from_json(&text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        out.push(s);
    }
    for &twist in &flags.twist {
        out.push(circle_spectrum(twist, flags.rotation_angle, flags.n_max)?);
    }
    if out.is_empty() {
        return Err(Failure::input("no spectrum given: use --spectrum PATH or --twist R"));
    }
    Ok(out)
}

fn one_spectrum(flags: &Flags) -> Result<BoundarySpectrum, Failure> {
    let mut all = load_spectra(flags)?;
    if all.len() > 1 {
        return Err(Failure::input("this command takes exactly one spectrum"));
    }
    Ok(all.remove(0))
}

fn a_primes(flags: &Flags) -> Result<&[f64], Failure> {
    if flags.a_prime.is_empty() {
        return Err(Failure::input("at least one --a-prime is required"));
    }
    Ok(&flags.a_prime)
}

/// One value per `a′` is reported as an object, several as an array.
fn per_a_prime(mut values: Vec<Value>) -> Value {
    if values.len() == 1 {
        values.remove(0)
    } else {
        Value::Array(values)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

type Dispatched = Result<(Value, Vec<Failure>), Failure>;

fn dispatch(kind: CommandKind, flags: &Flags) -> Dispatched {
    let config = flags.config();
    config.validate()?;
    match kind {
        CommandKind::Eta => {
            let s = one_spectrum(flags)?;
            Ok((to_value(&eta_invariant(&s, &config)?), vec![]))
        }
        CommandKind::Contribution => {
            let s = one_spectrum(flags)?;
            let reports = a_primes(flags)?
                .iter()
                .map(|&a| contribution(&s, a, flags.f1, &config).map(|r| to_value(&r)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((per_a_prime(reports), vec![]))
        }
        CommandKind::DirichletVariant => dirichlet_variant(flags, &config),
        CommandKind::VerifyIdentities => verify_identities(),
        CommandKind::VerifyVanishing => vanishing(flags),
        CommandKind::Index => index(flags, &config),
        CommandKind::Relative => relative(flags, &config),
    }
}

fn dirichlet_variant(flags: &Flags, config: &QuadratureConfig) -> Dispatched {
    let s = one_spectrum(flags)?;
    let eta = eta_invariant(&s, config)?;
    let mut out = Vec::new();
    for &a in a_primes(flags)? {
        let e = dirichlet_variant_estimate(&s, a, config)?;
        out.push(json!({
            "a_prime": a,
            "value": e.value,
            "est_error": e.est_error,
            "minus_half_eta": eta.value * -0.5,
            "deviation_from_minus_half_eta": (e.value + eta.value * 0.5).norm(),
        }));
    }
    Ok((per_a_prime(out), vec![]))
}

fn verify_identities() -> Dispatched {
    let decomposition = verify_decomposition(&KernelGrid::decomposition_default())?;
    let boundary = verify_boundary_vanish(&KernelGrid::boundary_default())?;
    let decay = verify_not_feel_boundary(1.0, 1.0, &DECAY_TIMES)?;
    let mut errors = Vec::new();
    if !(decomposition.max_abs <= DECOMPOSITION_TOL) {
        errors.push(Failure::verification(
            format!("kernel decomposition deviates by {:e} > {DECOMPOSITION_TOL:e}", decomposition.max_abs),
            to_value(&decomposition),
        ));
    }
    if !(boundary.max_abs <= BOUNDARY_TOL) {
        errors.push(Failure::verification(
            format!("boundary value {:e} > {BOUNDARY_TOL:e}", boundary.max_abs),
            to_value(&boundary),
        ));
    }
    if !decay.bounded {
        errors.push(Failure::verification("interior deviation is not O(e^{-y²/s})", to_value(&decay)));
    }
    let result = json!({
        "decomposition": decomposition,
        "boundary_vanish": boundary,
        "not_feel_boundary": decay,
    });
    Ok((result, errors))
}

fn vanishing(flags: &Flags) -> Dispatched {
    let s = one_spectrum(flags)?;
    let a_prime = match flags.a_prime.as_slice() {
        [] => return Err(Failure::input("verify-vanishing needs --a-prime")),
        [a] => *a,
        _ => return Err(Failure::input("verify-vanishing takes a single --a-prime")),
    };
    let t_sequence = if flags.t.is_empty() { vec![0.5, 0.1, 0.02] } else { flags.t.clone() };
    let cfg = VanishingTermConfig {
        a_prime,
        t_sequence,
        cutoff_rank: s.len(),
    };
    let report = verify_vanishing(&s, &cfg)?;
    let mut errors = Vec::new();
    if !report.certificate.holds() {
        errors.push(Failure::verification(
            "dominated-convergence certificate failed",
            to_value(&report.certificate),
        ));
    }
    let result = json!({
        "sequence": report.sequence,
        "certificate": report.certificate,
    });
    Ok((result, errors))
}

fn index(flags: &Flags, config: &QuadratureConfig) -> Dispatched {
    let s = one_spectrum(flags)?;
    let as_term = flags.as_term(0);
    let aps = aps_index(&s, as_term, config)?;
    let mut assembled = Vec::new();
    let mut errors = Vec::new();
    for &a in &flags.a_prime {
        let r = assemble_index(as_term, &contribution(&s, a, flags.f1, config)?, s.is_identity());
        let gap = (r.index_value - aps.index_value).norm();
        if flags.f1 == 1.0 && !(gap <= r.est_error + aps.est_error) {
            errors.push(Failure::verification(
                format!("index routes differ by {gap:e} at a′ = {a}"),
                to_value(&r),
            ));
        }
        assembled.push(json!({ "a_prime": a, "report": r }));
    }
    Ok((json!({ "aps": aps, "assembled": assembled }), errors))
}

fn relative(flags: &Flags, config: &QuadratureConfig) -> Dispatched {
    let spectra = load_spectra(flags)?;
    let [first, second] = spectra.as_slice() else {
        return Err(Failure::input(format!("relative needs exactly two spectra, got {}", spectra.len())));
    };
    let mut out = Vec::new();
    for &a in a_primes(flags)? {
        let value = relative_index_check(first, flags.as_term(0), second, flags.as_term(1), a, config)?;
        out.push(json!({ "a_prime": a, "value": value }));
    }
    Ok((per_a_prime(out), vec![]))
}
