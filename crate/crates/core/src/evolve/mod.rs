//! Pseudospectral integration of `∂ₜ²φ − ∂ₓ²φ = φ − |φ|²φ` on the torus and
//! the orbital-stability experiments built on it.
//!
//! The scheme is Strang splitting: a half kick `φ₂ ← φ₂ − (dt/2)|φ₁|²φ₁`, the
//! linear flow `∂ₜ²φ = ∂ₓ²φ + φ` solved exactly per Fourier mode, and a second
//! half kick. Each linear step is averaged with its mirror image under
//! `x ↦ −x`, which makes the step commute with reflection bit for bit, so odd
//! data stays exactly odd.

mod experiment;
mod orbital;
mod stepper;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::wave_families::WaveParams;

pub use experiment::{perturb, run_experiment, OrbitalTrace};
pub use orbital::orbital_distance;
pub use stepper::{step, Stepper};

/// Largest admissible time step for `N` points on period `L`.
pub fn dt_max(n: usize, period: f64) -> f64 {
    0.01f64.min(0.5 * period / n as f64)
}

/// Field and velocity samples on `x_j = jL/N` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub period: f64,
    pub phi1: Vec<Complex64>,
    pub phi2: Vec<Complex64>,
    pub real_field: bool,
}

impl FieldState {
    pub fn new(t: f64, period: f64, phi1: Vec<Complex64>, phi2: Vec<Complex64>, real_field: bool) -> Result<Self> {
        let n = phi1.len();
        if n < 2 || !n.is_power_of_two() || phi2.len() != n {
            return Err(Error::domain(format!(
                "field arrays must share a power-of-two length (got {} and {})",
                n,
                phi2.len()
            )));
        }
        if !(period > 0.0) {
            return Err(Error::domain(format!("period L = {period} must be positive")));
        }
        let mut s = Self { t, period, phi1, phi2, real_field };
        if real_field {
            s.clear_imaginary();
        }
        Ok(s)
    }

    /// The exact wave sampled at `t = 0`.
    pub fn from_wave(params: &WaveParams, n: usize) -> Result<Self> {
        let (phi1, phi2) = params.sample(n);
        Self::new(0.0, params.period, phi1, phi2, !params.family.is_complex())
    }

    pub fn n(&self) -> usize {
        self.phi1.len()
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.n(), self.period)
    }

    pub(crate) fn clear_imaginary(&mut self) {
        for z in self.phi1.iter_mut().chain(self.phi2.iter_mut()) {
            z.im = 0.0;
        }
    }

    /// `max |f(x) + f(−x)|` over both fields.
    pub fn odd_parity_defect(&self) -> f64 {
        let n = self.n();
        [&self.phi1, &self.phi2]
            .iter()
            .flat_map(|f| (0..n).map(move |j| (f[j] + f[(n - j) % n]).norm()))
            .fold(0.0, f64::max)
    }

    /// `(−φ₁, −φ₂)`.
    pub fn negated(&self) -> Self {
        let neg = |v: &Vec<Complex64>| v.iter().map(|z| -z).collect();
        Self { phi1: neg(&self.phi1), phi2: neg(&self.phi2), ..self.clone() }
    }

    pub fn max_difference(&self, other: &FieldState) -> f64 {
        self.phi1
            .iter()
            .zip(&other.phi1)
            .chain(self.phi2.iter().zip(&other.phi2))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `½∫(|φ₂|² + |∂ₓφ₁|² + ½(1−|φ₁|²)²)`.
pub fn energy(state: &FieldState) -> Result<f64> {
    let grid = state.grid()?;
    let d = grid.derivative(&state.phi1);
    let dens: Vec<f64> = state
        .phi1
        .iter()
        .zip(&state.phi2)
        .zip(&d)
        .map(|((p1, p2), dx)| 0.5 * (p2.norm_sqr() + dx.norm_sqr() + 0.5 * (1.0 - p1.norm_sqr()).powi(2)))
        .collect();
    Ok(grid.integrate(&dens))
}

/// `∫φ₂∂ₓφ₁`, defined for real fields only.
pub fn momentum(state: &FieldState) -> Result<f64> {
    if !state.real_field {
        return Err(Error::UnsupportedField);
    }
    let grid = state.grid()?;
    let d = grid.derivative(&state.phi1);
    let dens: Vec<f64> = state.phi2.iter().zip(&d).map(|(p2, dx)| p2.re * dx.re).collect();
    Ok(grid.integrate(&dens))
}

/// `Im ∫ conj(φ₁)φ₂`; exactly zero for real fields.
pub fn charge(state: &FieldState) -> Result<f64> {
    if state.real_field {
        return Ok(0.0);
    }
    let grid = state.grid()?;
    let dens: Vec<f64> = state.phi1.iter().zip(&state.phi2).map(|(a, b)| (a.conj() * b).im).collect();
    Ok(grid.integrate(&dens))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbTarget {
    Phi1,
    Phi2,
    Both,
}

/// A perturbation of energy-space size `amplitude`, built from Fourier mode
/// `mode` (odd/even) or from a seeded random mix of modes `1..=mode` (generic).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub mode: usize,
    pub amplitude: f64,
    pub parity: Parity,
    pub target: PerturbTarget,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub perturbation: Option<Perturbation>,
    pub seed: u64,
}

impl EvolveConfig {
    pub fn validate(&self, period: f64) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::domain(format!("time step dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::domain(format!("t_end = {} must be non-negative", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::domain("record_every must be at least 1"));
        }
        let cap = dt_max(self.n, period);
        if self.dt > cap * (1.0 + 1e-12) {
            return Err(Error::domain(format!("dt = {} exceeds dt_max = {cap} for N = {}", self.dt, self.n)));
        }
        if let Some(p) = self.perturbation {
            if p.mode == 0 || p.mode >= self.n / 2 {
                return Err(Error::domain(format!("perturbation mode {} must lie in 1..{}", p.mode, self.n / 2)));
            }
            if !(p.amplitude >= 0.0) {
                return Err(Error::domain(format!("perturbation amplitude {} must be non-negative", p.amplitude)));
            }
        }
        Ok(())
    }
}
