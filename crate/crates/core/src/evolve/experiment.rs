use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::wave_families::WaveParams;

use super::{
    charge, energy, momentum, orbital_distance, EvolveConfig, FieldState, Parity, PerturbTarget, Perturbation, Stepper,
};

/// Unit-free perturbation shape on the grid.
fn shape(grid: &PeriodicGrid, p: &Perturbation, seed: u64) -> Vec<f64> {
    let omega = 2.0 * PI / grid.period();
    let xs = grid.points();
    let n = xs.len();
    match p.parity {
        Parity::Odd | Parity::Even => {
            // Fill half the grid and mirror, so the symmetry holds exactly on the samples.
            let odd = p.parity == Parity::Odd;
            let mut v = vec![0.0; n];
            for j in 0..=n / 2 {
                let arg = p.mode as f64 * omega * xs[j];
                v[j] = if odd { arg.sin() } else { arg.cos() };
            }
            if odd {
                v[0] = 0.0;
                v[n / 2] = 0.0;
            }
            for j in 1..n / 2 {
                v[n - j] = if odd { -v[j] } else { v[j] };
            }
            v
        }
        Parity::Generic => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs: Vec<(f64, f64)> =
                (1..=p.mode).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            xs.iter()
                .map(|x| {
                    coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, b))| {
                            let arg = (i + 1) as f64 * omega * x;
                            a * arg.cos() + b * arg.sin()
                        })
                        .sum()
                })
                .collect()
        }
    }
}

/// Adds `perturbation` to `state`, scaled to the requested `H¹ × L²` size.
pub fn perturb(state: &mut FieldState, perturbation: &Perturbation, seed: u64) -> Result<()> {
    if perturbation.amplitude == 0.0 {
        return Ok(());
    }
    let grid = state.grid()?;
    let rot = if state.real_field { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, PI / 4.0) };
    let base: Vec<Complex64> = shape(&grid, perturbation, seed).iter().map(|&v| rot * v).collect();
    let (on1, on2) = match perturbation.target {
        PerturbTarget::Phi1 => (true, false),
        PerturbTarget::Phi2 => (false, true),
        PerturbTarget::Both => (true, true),
    };
    let mut size_sq = 0.0;
    if on1 {
        size_sq += grid.h1_norm_sq(&base);
    }
    if on2 {
        size_sq += grid.l2_norm_sq(&base);
    }
    if !(size_sq > 0.0) {
        return Err(Error::domain("perturbation shape vanishes on this grid"));
    }
    let scale = perturbation.amplitude / size_sq.sqrt();
    for (j, b) in base.iter().enumerate() {
        if on1 {
            state.phi1[j] += scale * b;
        }
        if on2 {
            state.phi2[j] += scale * b;
        }
    }
    Ok(())
}

/// 17 significant digits.
fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Time series recorded by [`run_experiment`]. Momentum is `None` for the
/// complex family, where it is not tracked.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitalTrace {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub momentum: Vec<Option<f64>>,
    pub charge: Vec<f64>,
    pub orbital_distance: Vec<f64>,
    /// Largest `|f(x) + f(−x)|` seen, recorded only for odd perturbations.
    pub max_parity_defect: Option<f64>,
}

impl OrbitalTrace {
    pub const CSV_HEADER: &'static str = "t,energy,momentum,charge,orbital_distance";

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn initial_distance(&self) -> f64 {
        self.orbital_distance.first().copied().unwrap_or(0.0)
    }

    pub fn max_distance(&self) -> f64 {
        self.orbital_distance.iter().copied().fold(0.0, f64::max)
    }

    /// First recorded time at which the distance exceeds `factor` times its initial value.
    pub fn escape_time(&self, factor: f64) -> Option<f64> {
        let bound = factor * self.initial_distance();
        self.times.iter().zip(&self.orbital_distance).find(|(_, &d)| d > bound).map(|(&t, _)| t)
    }

    fn drift(series: impl Iterator<Item = f64> + Clone) -> f64 {
        let Some(first) = series.clone().next() else { return 0.0 };
        let scale = first.abs().max(1.0);
        series.map(|q| (q - first).abs() / scale).fold(0.0, f64::max)
    }

    pub fn energy_drift(&self) -> f64 {
        Self::drift(self.energy.iter().copied())
    }

    pub fn momentum_drift(&self) -> f64 {
        Self::drift(self.momentum.iter().flatten().copied())
    }

    pub fn charge_drift(&self) -> f64 {
        Self::drift(self.charge.iter().copied())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for i in 0..self.len() {
            let mom = self.momentum[i].map(sci).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                sci(self.times[i]),
                sci(self.energy[i]),
                mom,
                sci(self.charge[i]),
                sci(self.orbital_distance[i])
            );
        }
        out
    }
}

/// Evolves the (optionally perturbed) wave and records conserved quantities and
/// the orbital distance every `record_every` steps and at the final time.
pub fn run_experiment(params: &WaveParams, config: &EvolveConfig) -> Result<OrbitalTrace> {
    config.validate(params.period)?;
    let mut state = FieldState::from_wave(params, config.n)?;
    if let Some(p) = &config.perturbation {
        perturb(&mut state, p, config.seed)?;
    }
    let track_parity = matches!(config.perturbation, Some(Perturbation { parity: Parity::Odd, .. }));
    let steps = (config.t_end / config.dt).round() as usize;
    let mut stepper = Stepper::new(config.n, params.period, config.dt)?;
    let mut trace = OrbitalTrace {
        times: Vec::new(),
        energy: Vec::new(),
        momentum: Vec::new(),
        charge: Vec::new(),
        orbital_distance: Vec::new(),
        max_parity_defect: track_parity.then_some(0.0),
    };
    let record = |s: &FieldState, trace: &mut OrbitalTrace| -> Result<()> {
        trace.times.push(s.t);
        trace.energy.push(energy(s)?);
        trace.momentum.push(if s.real_field { Some(momentum(s)?) } else { None });
        trace.charge.push(charge(s)?);
        trace.orbital_distance.push(orbital_distance(s, params)?);
        if let Some(m) = trace.max_parity_defect.as_mut() {
            *m = m.max(s.odd_parity_defect());
        }
        Ok(())
    };
    record(&state, &mut trace)?;
    for i in 1..=steps {
        stepper.step(&mut state);
        if i % config.record_every == 0 || i == steps {
            record(&state, &mut trace)?;
        }
    }
    Ok(trace)
}
