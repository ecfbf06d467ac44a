//! Momentum-parametrized little-group algebra, the even spin operator of the
//! free Dirac field, and the observables built from it: spin spectra,
//! Pauli-Lubanski limits, even-operator forms of the Hamiltonian, the
//! massless ring radius and two-electron Bell correlations.
//!
//! Natural units (`hbar = c = 1`) throughout.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod cli;
pub mod dirac;
pub mod error;
pub mod even_spin;
pub mod extended;
pub mod little_algebra;
pub mod numkernel;
pub mod output;
pub mod report;
pub mod suite;
pub mod vec3;

pub use dirac::{build_dirac_set, even_part, DiracOperatorSet, FourMomentum};
pub use error::{Error, Result};
pub use numkernel::{CMatrix, SpinSpectrum, Tolerance, C64};
pub use report::{Check, Report};
pub use vec3::Vec3;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
