//! Exact statistics of displaced-squeezed thermal states evolving under a
//! degenerate parametric amplifier.
//!
//! * [`closed_form`]: A(τ), χ(η), quadrature and photon-number moments,
//!   Mandel Q and the two-time coherence g²(τ) with its τ → ∞ limit.
//! * [`criteria`]: the nonclassicality tests built on those quantities.
//! * [`solvers`]: bracketing root finders for the classical/nonclassical
//!   transition points.
//! * [`fock`] and [`oracle`]: an independent truncated-Fock-space evaluator
//!   used to check every closed form.
//!
//! All delays are the dimensionless product Ωτ.
//!
//! ```
//! use dpa_core::{closed_form, GaussianParams};
//!
//! let params = GaussianParams::figure(0.1, 0.1, 5.0).unwrap();
//! let g2_zero = closed_form::g2(&params, 0.0).unwrap();
//! assert!((g2_zero - 0.9993).abs() < 1e-4);
//! ```

// `!(x > 0.0)` is used on purpose so NaN falls into the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod criteria;
pub mod error;
pub mod fock;
pub mod oracle;
pub mod params;
pub mod solvers;

pub use closed_form::{PhotonStats, QuadratureStats, SqueezeKernel, TwoTimeKernels};
pub use criteria::{ChiCriterion, CriteriaReport, G2Criteria};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, FockOperator, HamiltonianCoeffs};
pub use oracle::FockOracle;
pub use params::{coth_half, stable_exp_pair, ComplexAmplitude, GaussianParams, ProbePoint};
pub use solvers::RootResult;
