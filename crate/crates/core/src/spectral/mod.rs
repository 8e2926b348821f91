//! Spectra of the linearised operators around each wave.
//!
//! All operators have the Hill form `−a∂ₓ² − b + V(x)` on the torus and are
//! discretised with the dense Fourier differentiation matrix. Under `x ↦ ℓx`
//! they reduce to Lamé operators `−∂ᵤ² + n(n+1)κ²sn²(u)` with `n = 1` or `2`,
//! whose band-edge eigenpairs are known in closed form; those pairs are the
//! oracles in [`verify`].

mod blocks;
mod hill;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, SymMatrix};

pub use blocks::{block_operator, odd_basis, odd_projection, BlockKind};
pub use hill::{build_hill, HillLabel, HillSpec};
pub use verify::{
    lambda_sigma_map, sigma_lambda_map, superluminal_spectrum, vector_eigenvalue_from_scalar, verify_complex_spectra,
    verify_sn_real_spectrum, ComplexSpectra,
};

/// Eigenvalues below `−ZERO_TOL` count as negative; `|λ| ≤ ZERO_TOL` is a zero mode.
pub const ZERO_TOL: f64 = 1e-6;

/// Residual bound `‖Mv − λv‖ ≤ RESIDUAL_TOL·‖v‖` enforced on returned pairs.
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroMode {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub label: String,
    #[serde(rename = "N")]
    pub n: usize,
    /// The `m` lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub negative_count: usize,
    pub zero_tol: f64,
    pub oracle_errors: BTreeMap<String, f64>,
    #[serde(skip)]
    pub zero_modes: Vec<ZeroMode>,
    /// Unit eigenvectors for `eigenvalues`, largest-magnitude entry positive.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectrumReport {
    pub fn zero_count(&self) -> usize {
        self.zero_modes.len()
    }

    pub(crate) fn fail(self, reason: impl Into<String>) -> Error {
        Error::Verification { reason: reason.into(), report: Box::new(self) }
    }
}

/// Flips `v` so its largest-magnitude entry is positive.
pub fn canonical_sign(v: &mut [f64]) {
    let pivot = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Full diagonalisation, reporting the `m` lowest eigenpairs.
pub fn eigensolve(matrix: &SymMatrix, m: usize, label: impl Into<String>) -> Result<SpectrumReport> {
    let n = matrix.dim();
    if m == 0 || m > n {
        return Err(Error::domain(format!("requested {m} eigenpairs of a {n}×{n} matrix")));
    }
    let eig = symmetric_eigen(matrix)?;
    let mut vectors = eig.vectors;
    for v in vectors.iter_mut() {
        canonical_sign(v);
    }
    for (lam, v) in eig.values.iter().zip(&vectors).take(m) {
        let mv = matrix.matvec(v);
        let res = mv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
        if res > RESIDUAL_TOL {
            return Err(Error::Convergence(format!("eigenpair residual {res:e} at λ = {lam}")));
        }
    }
    let zero_modes = eig
        .values
        .iter()
        .zip(&vectors)
        .filter(|(l, _)| l.abs() <= ZERO_TOL)
        .map(|(&eigenvalue, v)| ZeroMode { eigenvalue, vector: v.clone() })
        .collect();
    Ok(SpectrumReport {
        label: label.into(),
        n,
        negative_count: eig.values.iter().filter(|&&l| l < -ZERO_TOL).count(),
        eigenvalues: eig.values[..m].to_vec(),
        zero_tol: ZERO_TOL,
        oracle_errors: BTreeMap::new(),
        zero_modes,
        eigenvectors: vectors.into_iter().take(m).collect(),
    })
}
