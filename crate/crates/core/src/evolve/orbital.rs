use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::wave_families::WaveParams;

use super::FieldState;

/// Samples `(w(x − ρ), ∂ₜw(x − ρ))` of the wave at `t = 0`.
fn shifted_wave(params: &WaveParams, grid: &PeriodicGrid, rho: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    grid.points().iter().map(|&x| (params.profile(x - rho, 0.0), params.profile_dt(x - rho, 0.0))).unzip()
}

fn energy_distance(grid: &PeriodicGrid, state: &FieldState, w1: &[Complex64], w2: &[Complex64], rot: Complex64) -> f64 {
    let d1: Vec<Complex64> = state.phi1.iter().zip(w1).map(|(a, b)| a - rot * b).collect();
    let d2: Vec<Complex64> = state.phi2.iter().zip(w2).map(|(a, b)| a - rot * b).collect();
    (grid.h1_norm_sq(&d1) + grid.l2_norm_sq(&d2)).sqrt()
}

/// Weighted spectral cross products `Σ_k w_k F_k conj(G_k)`, with `H¹`
/// weights on the field and `L²` weights on the velocity.
fn spectral_products(grid: &PeriodicGrid, state: &FieldState, w1: &[Complex64], w2: &[Complex64]) -> Vec<Complex64> {
    let fft = grid.fft();
    let mut f1 = state.phi1.clone();
    let mut f2 = state.phi2.clone();
    let mut g1 = w1.to_vec();
    let mut g2 = w2.to_vec();
    for v in [&mut f1, &mut f2, &mut g1, &mut g2] {
        fft.forward(v);
    }
    let k = grid.wavenumbers();
    (0..grid.len()).map(|i| (1.0 + k[i] * k[i]) * f1[i] * g1[i].conj() + f2[i] * g2[i].conj()).collect()
}

/// `C(ρ) = (h/N) Re Σ_k P_k e^{iξ_kρ}` together with its first two derivatives.
fn correlation_derivatives(grid: &PeriodicGrid, prods: &[Complex64], rho: f64) -> (f64, f64, f64) {
    let scale = grid.spacing() / grid.len() as f64;
    let (mut c0, mut c1, mut c2) = (0.0, 0.0, 0.0);
    for (p, &k) in prods.iter().zip(grid.wavenumbers()) {
        let z = p * Complex64::from_polar(1.0, k * rho);
        c0 += z.re;
        c1 -= k * z.im;
        c2 -= k * k * z.re;
    }
    (scale * c0, scale * c1, scale * c2)
}

/// Distance in `H¹ × L²` from `state` to the orbit of the wave: translates
/// for the real families, phase rotations for the standing complex wave.
pub fn orbital_distance(state: &FieldState, params: &WaveParams) -> Result<f64> {
    if (state.period - params.period).abs() > 1e-12 * params.period {
        return Err(Error::domain(format!(
            "state period {} does not match the wave period {}",
            state.period, params.period
        )));
    }
    let grid = state.grid()?;
    if params.family.is_complex() {
        let (w1, w2) = shifted_wave(params, &grid, 0.0);
        let z: Complex64 = spectral_products(&grid, state, &w1, &w2).iter().sum();
        let rot = if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) };
        return Ok(energy_distance(&grid, state, &w1, &w2, rot));
    }

    let (w1, w2) = shifted_wave(params, &grid, 0.0);
    let prods = spectral_products(&grid, state, &w1, &w2);
    let n = grid.len();
    let h = grid.spacing();
    let mut corr = prods.clone();
    grid.fft().inverse(&mut corr);
    let best = (0..n).max_by(|&a, &b| corr[a].re.total_cmp(&corr[b].re)).unwrap_or(0);
    let (cm, c0, cp) = (corr[(best + n - 1) % n].re, corr[best].re, corr[(best + 1) % n].re);
    let curv = cm - 2.0 * c0 + cp;
    let mut rho = best as f64 * h;
    if curv < 0.0 {
        rho += 0.5 * h * (cm - cp) / curv;
    }
    for _ in 0..8 {
        let (_, d1, d2) = correlation_derivatives(&grid, &prods, rho);
        if d2 >= 0.0 {
            break;
        }
        let delta = -d1 / d2;
        rho += delta.clamp(-h, h);
        if delta.abs() < 1e-14 * params.period {
            break;
        }
    }
    let (s1, s2) = shifted_wave(params, &grid, rho);
    Ok(energy_distance(&grid, state, &s1, &s2, Complex64::new(1.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave_families::{solve_family, Family};
    use std::f64::consts::PI;

    #[test]
    fn unperturbed_wave_has_zero_distance() {
        for (f, l, c) in [(Family::SnSubluminal, 4.0 * PI, 0.5), (Family::SnComplexStanding, 2.0 * PI, 1.0)] {
            let p = solve_family(f, l, c).unwrap();
            let s = FieldState::from_wave(&p, 256).unwrap();
            assert!(orbital_distance(&s, &p).unwrap() < 1e-12);
        }
    }

    #[test]
    fn translated_wave_has_zero_distance() {
        let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.5).unwrap();
        for shift in [p.period / 4.0, 0.123_456_7] {
            let (phi1, phi2): (Vec<_>, Vec<_>) = (0..256)
                .map(|j| {
                    let x = j as f64 * p.period / 256.0 - shift;
                    (p.profile(x, 0.0), p.profile_dt(x, 0.0))
                })
                .unzip();
            let s = FieldState::new(0.0, p.period, phi1, phi2, true).unwrap();
            let d = orbital_distance(&s, &p).unwrap();
            assert!(d < 1e-8, "shift {shift}: d = {d:e}");
        }
    }

    #[test]
    fn rotated_complex_wave_has_zero_distance() {
        let p = solve_family(Family::SnComplexStanding, 2.0 * PI, 1.0).unwrap();
        let mut s = FieldState::from_wave(&p, 128).unwrap();
        let rot = Complex64::from_polar(1.0, PI / 3.0);
        for z in s.phi1.iter_mut().chain(s.phi2.iter_mut()) {
            *z *= rot;
        }
        assert!(orbital_distance(&s, &p).unwrap() < 1e-12);
    }

    #[test]
    fn distance_is_bounded_by_the_perturbation_norm() {
        let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.5).unwrap();
        let mut s = FieldState::from_wave(&p, 256).unwrap();
        let g = s.grid().unwrap();
        let bump: Vec<Complex64> = g.points().iter().map(|x| Complex64::new(1e-3 * (3.0 * x).cos(), 0.0)).collect();
        for (a, b) in s.phi1.iter_mut().zip(&bump) {
            *a += b;
        }
        let norm = g.h1_norm_sq(&bump).sqrt();
        let d = orbital_distance(&s, &p).unwrap();
        assert!(d <= norm * (1.0 + 1e-12) && d > 0.5 * norm, "d = {d}, |bump| = {norm}");
    }

    #[test]
    fn mismatched_period_is_rejected() {
        let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.5).unwrap();
        let q = solve_family(Family::SnSubluminal, 5.0 * PI, 0.5).unwrap();
        let s = FieldState::from_wave(&q, 64).unwrap();
        assert!(orbital_distance(&s, &p).is_err());
    }
}
