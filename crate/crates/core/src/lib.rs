//! Heat kernels, delocalised η-invariants and contributions from infinity for
//! Dirac operators on manifolds with cylindrical ends, in the product
//! cylinder model `N × (0, ∞)` described by the spectrum of the boundary
//! operator.
//!
//! The modules follow the computation from the bottom up:
//! [`spectral_model`] holds boundary spectra, [`mode_kernels`] the per-mode
//! half-line kernels, [`eta`] the η-invariant, [`infinity_contribution`] the
//! end term of the index formula, [`vanishing_verifier`] the integral that
//! makes the end term equal to `−η/2`, and [`index_assembly`] puts the pieces
//! together. [`kernel_identities`] checks the kernel identities on grids.

// `!(x > 0.0)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod eta;
pub mod index_assembly;
pub mod infinity_contribution;
pub mod kernel_identities;
pub mod mode_kernels;
pub mod par;
pub mod quadrature;
pub mod spectral_model;
pub mod vanishing_verifier;

pub use error::{Error, Result};
pub use eta::{eta_circle_oracle, eta_invariant, heat_trace, EtaResult};
pub use index_assembly::{aps_index, assemble_index, relative_index_check, IndexReport};
pub use infinity_contribution::{
    contribution, contribution_integrand, dirichlet_variant_contribution, dirichlet_variant_estimate,
    ContributionReport, Estimate,
};
pub use kernel_identities::{
    verify_boundary_vanish, verify_decomposition, verify_not_feel_boundary, BoundaryDecay, DeviationReport,
    KernelGrid,
};
pub use quadrature::QuadratureConfig;
pub use spectral_model::{
    circle_spectrum, direct_sum, from_records, tail_bound, BoundarySpectrum, SpectralDatum, Truncation,
    TruncationBound, WeylConstants,
};
pub use vanishing_verifier::{
    dominator, per_mode_difference, vanishing_estimate, vanishing_term, verify_vanishing, VanishingReport,
    VanishingTermConfig,
};
