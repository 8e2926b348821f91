use num_complex::Complex64;

use crate::error::Result;
use crate::grid::PeriodicGrid;

use super::FieldState;

/// Per-mode coefficients of the exact linear flow over one step.
#[derive(Clone, Debug)]
struct Propagator {
    cos_part: Vec<f64>,
    sin_part: Vec<f64>,
    /// `s·S` with `s = 1 − ξ²`.
    back_part: Vec<f64>,
}

impl Propagator {
    fn new(grid: &PeriodicGrid, dt: f64) -> Self {
        let n = grid.len();
        let mut p =
            Self { cos_part: Vec::with_capacity(n), sin_part: Vec::with_capacity(n), back_part: Vec::with_capacity(n) };
        for &k2 in grid.wavenumbers_sq() {
            let s = 1.0 - k2;
            let z = s * dt * dt;
            let (c, sn) = if z.abs() < 1e-10 {
                (1.0 + z / 2.0 + z * z / 24.0, dt * (1.0 + z / 6.0 + z * z / 120.0))
            } else if s > 0.0 {
                let r = s.sqrt();
                ((r * dt).cosh(), (r * dt).sinh() / r)
            } else {
                let r = (-s).sqrt();
                ((r * dt).cos(), (r * dt).sin() / r)
            };
            p.cos_part.push(c);
            p.sin_part.push(sn);
            p.back_part.push(s * sn);
        }
        p
    }

    fn apply(&self, grid: &PeriodicGrid, a: &mut [Complex64], b: &mut [Complex64]) {
        let fft = grid.fft();
        fft.forward(a);
        fft.forward(b);
        for k in 0..a.len() {
            let (x, y) = (a[k], b[k]);
            a[k] = self.cos_part[k] * x + self.sin_part[k] * y;
            b[k] = self.back_part[k] * x + self.cos_part[k] * y;
        }
        fft.inverse(a);
        fft.inverse(b);
    }
}

/// Strang-split stepper with the linear propagator precomputed for one `dt`.
#[derive(Clone, Debug)]
pub struct Stepper {
    grid: PeriodicGrid,
    dt: f64,
    prop: Propagator,
    mirror: [Vec<Complex64>; 2],
}

impl Stepper {
    pub fn new(n: usize, period: f64, dt: f64) -> Result<Self> {
        let grid = PeriodicGrid::new(n, period)?;
        let prop = Propagator::new(&grid, dt);
        let zero = vec![Complex64::default(); n];
        Ok(Self { grid, dt, prop, mirror: [zero.clone(), zero] })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    fn kick(state: &mut FieldState, tau: f64) {
        for (p1, p2) in state.phi1.iter().zip(state.phi2.iter_mut()) {
            *p2 -= tau * p1.norm_sqr() * p1;
        }
    }

    /// `½(P f + R P R f)` where `R` is the reflection `j ↦ −j mod N`.
    fn linear(&mut self, state: &mut FieldState) {
        let n = state.n();
        let [ra, rb] = &mut self.mirror;
        for j in 0..n {
            ra[j] = state.phi1[(n - j) % n];
            rb[j] = state.phi2[(n - j) % n];
        }
        self.prop.apply(&self.grid, ra, rb);
        self.prop.apply(&self.grid, &mut state.phi1, &mut state.phi2);
        for j in 0..n {
            let m = (n - j) % n;
            state.phi1[j] = 0.5 * (state.phi1[j] + ra[m]);
            state.phi2[j] = 0.5 * (state.phi2[j] + rb[m]);
        }
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&mut self, state: &mut FieldState) {
        debug_assert_eq!(state.n(), self.grid.len());
        Self::kick(state, 0.5 * self.dt);
        self.linear(state);
        Self::kick(state, 0.5 * self.dt);
        if state.real_field {
            state.clear_imaginary();
        }
        state.t += self.dt;
    }

    pub fn advance(&mut self, state: &mut FieldState, steps: usize) {
        for _ in 0..steps {
            self.step(state);
        }
    }
}

/// One step of size `dt`. Builds a fresh [`Stepper`]; reuse one for long runs.
pub fn step(state: &FieldState, dt: f64) -> Result<FieldState> {
    let mut stepper = Stepper::new(state.n(), state.period, dt)?;
    let mut next = state.clone();
    stepper.step(&mut next);
    Ok(next)
}
