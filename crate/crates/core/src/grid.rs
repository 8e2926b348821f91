//! Uniform periodic grid with Fourier spectral differentiation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft;

#[derive(Clone, Debug)]
pub struct PeriodicGrid {
    n: usize,
    period: f64,
    fft: Fft,
    /// Wavenumbers for first derivatives; the Nyquist entry is zero.
    xi: Vec<f64>,
    /// Symbol of `−∂ₓ²`; the Nyquist entry is `(πN/L)²`.
    xi2: Vec<f64>,
}

impl PeriodicGrid {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::domain(format!("period L = {period} must be positive")));
        }
        if n < 2 {
            return Err(Error::domain(format!("grid size N = {n} is too small")));
        }
        let fft = Fft::new(n)?;
        let base = 2.0 * PI / period;
        let mut xi = vec![0.0; n];
        let mut xi2 = vec![0.0; n];
        for j in 0..n {
            let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            xi2[j] = (base * m).powi(2);
            if j != n / 2 {
                xi[j] = base * m;
            }
        }
        Ok(Self { n, period, fft, xi, xi2 })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    pub fn wavenumbers_sq(&self) -> &[f64] {
        &self.xi2
    }

    /// Grid points `x_j = jL/N`.
    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|j| j as f64 * h).collect()
    }

    pub fn derivative(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut buf = f.to_vec();
        self.fft.forward(&mut buf);
        for (z, &k) in buf.iter_mut().zip(&self.xi) {
            *z *= Complex64::new(0.0, k);
        }
        self.fft.inverse(&mut buf);
        buf
    }

    pub fn derivative_real(&self, f: &[f64]) -> Vec<f64> {
        let buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.derivative(&buf).into_iter().map(|z| z.re).collect()
    }

    /// Rectangle rule, exact for trigonometric polynomials of degree below `N`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.spacing() * f.iter().sum::<f64>()
    }

    /// Discrete `‖f‖²_{H¹} = ∫ |f|² + |f_x|²`.
    pub fn h1_norm_sq(&self, f: &[Complex64]) -> f64 {
        let df = self.derivative(f);
        self.spacing() * f.iter().zip(&df).map(|(a, b)| a.norm_sqr() + b.norm_sqr()).sum::<f64>()
    }

    pub fn l2_norm_sq(&self, f: &[Complex64]) -> f64 {
        self.spacing() * f.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_trig_polynomials_exactly() {
        let grid = PeriodicGrid::new(64, 3.0).unwrap();
        let w = 2.0 * PI / 3.0;
        let f: Vec<f64> = grid.points().iter().map(|&x| (5.0 * w * x).sin() + (w * x).cos()).collect();
        let df = grid.derivative_real(&f);
        for (x, d) in grid.points().iter().zip(df) {
            let exact = 5.0 * w * (5.0 * w * x).cos() - w * (w * x).sin();
            assert!((d - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn nyquist_mode_has_zero_derivative() {
        let grid = PeriodicGrid::new(8, 1.0).unwrap();
        let f: Vec<f64> = (0..8).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(grid.derivative_real(&f).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn rectangle_rule_and_norms() {
        let grid = PeriodicGrid::new(32, 2.0 * PI).unwrap();
        let f: Vec<Complex64> = grid.points().iter().map(|&x| Complex64::new(x.sin(), 0.0)).collect();
        assert!((grid.l2_norm_sq(&f) - PI).abs() < 1e-13);
        assert!((grid.h1_norm_sq(&f) - 2.0 * PI).abs() < 1e-13);
        let ones = vec![1.0; 32];
        assert!((grid.integrate(&ones) - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(PeriodicGrid::new(100, 1.0).is_err());
        assert!(PeriodicGrid::new(64, 0.0).is_err());
    }
}
