//! Periodic Jacobi-elliptic waves of the φ⁴ equation
//! `∂ₜ²φ − ∂ₓ²φ = φ − |φ|²φ` on the torus `ℝ/Lℤ`.
//!
//! The crate is organised bottom-up:
//!
//! - [`elliptic`]: complete elliptic integrals and `sn`, `cn`, `dn` by the
//!   arithmetic-geometric mean.
//! - [`wave_families`]: the four explicit wave branches (dnoidal and cnoidal
//!   superluminal, snoidal sub-luminal, complex snoidal standing), solved on a
//!   prescribed period.
//! - [`spectral`]: Fourier discretisation of the linearised (Hill/Lamé)
//!   operators, eigenvalue counts and the exactly known Lamé eigenpairs.
//! - [`stability`]: the scalar function `d(c)`, its derivatives, the closed-form
//!   momentum and charge integrals, and the resulting classification.
//! - [`evolve`]: split-step pseudospectral time integration, conserved
//!   quantities and orbital-distance experiments.
//! - [`acceptance`]: the end-to-end verification checks used by the
//!   `verify-all` command and the acceptance test target.
//!
//! [`fft`], [`grid`], [`linalg`] and [`quadrature`] are the numerical
//! plumbing underneath.

// Range checks are written `!(x > 0.0)` so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod elliptic;
pub mod error;
pub mod evolve;
pub mod fft;
pub mod grid;
pub mod linalg;
pub mod quadrature;
pub mod spectral;
pub mod stability;
pub mod wave_families;

pub use error::{Error, Result};
pub use evolve::{EvolveConfig, FieldState, OrbitalTrace, Parity, PerturbTarget, Perturbation};
pub use spectral::{HillLabel, HillSpec, SpectrumReport};
pub use stability::{StabilityReport, Verdict};
pub use wave_families::{Family, SpeedInterval, WaveParams};
