use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::linalg::SymMatrix;
use crate::wave_families::{Family, WaveParams};

/// Which linearised operator a [`HillSpec`] discretises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HillLabel {
    /// `−(1−c²)∂ₓ² − 1 + 3φ²` around the sub-luminal snoidal wave.
    #[serde(rename = "L_sn_real")]
    SnReal,
    /// `−∂ₓ² − (1+c²) + 3ψ²`, the real-part block of the standing wave.
    #[serde(rename = "L_sn_R")]
    SnR,
    /// `−∂ₓ² − (1+c²) + ψ²`, the imaginary-part block of the standing wave.
    #[serde(rename = "L_sn_I")]
    SnI,
    /// `−(c²−1)∂ₓ² + 1 − 3φ²` around the dnoidal wave.
    #[serde(rename = "L_dn")]
    Dn,
    /// Same form as [`HillLabel::Dn`] around the cnoidal wave.
    #[serde(rename = "L_cn")]
    Cn,
    /// Constant potential, for checking the discretisation.
    #[serde(rename = "flat")]
    Flat,
}

impl HillLabel {
    pub fn name(self) -> &'static str {
        match self {
            HillLabel::SnReal => "L_sn_real",
            HillLabel::SnR => "L_sn_R",
            HillLabel::SnI => "L_sn_I",
            HillLabel::Dn => "L_dn",
            HillLabel::Cn => "L_cn",
            HillLabel::Flat => "flat",
        }
    }

    pub fn family(self) -> Option<Family> {
        match self {
            HillLabel::SnReal => Some(Family::SnSubluminal),
            HillLabel::SnR | HillLabel::SnI => Some(Family::SnComplexStanding),
            HillLabel::Dn => Some(Family::DnSuperluminal),
            HillLabel::Cn => Some(Family::CnSuperluminal),
            HillLabel::Flat => None,
        }
    }
}

impl fmt::Display for HillLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HillLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [HillLabel::SnReal, HillLabel::SnR, HillLabel::SnI, HillLabel::Dn, HillLabel::Cn, HillLabel::Flat]
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown operator label '{s}'")))
    }
}

/// `−a∂ₓ² − shift + V(x)` with `V` sampled on `x_j = jL/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct HillSpec {
    pub label: HillLabel,
    pub a: f64,
    pub shift: f64,
    pub potential: Vec<f64>,
    pub period: f64,
}

fn check_size(n: usize) -> Result<()> {
    if n < 64 || !n.is_power_of_two() {
        return Err(Error::domain(format!("operator size N = {n} must be a power of two ≥ 64")));
    }
    Ok(())
}

pub fn build_hill(params: &WaveParams, label: HillLabel, n: usize) -> Result<HillSpec> {
    check_size(n)?;
    if label.family() != Some(params.family) {
        return Err(Error::domain(format!("operator {label} does not apply to the {} family", params.family)));
    }
    let h = params.period / n as f64;
    let sq: Vec<f64> = (0..n).map(|j| params.real_profile(j as f64 * h).powi(2)).collect();
    let c2 = params.c * params.c;
    let (a, shift, scale) = match label {
        HillLabel::SnReal => (1.0 - c2, 1.0, 3.0),
        HillLabel::SnR => (1.0, 1.0 + c2, 3.0),
        HillLabel::SnI => (1.0, 1.0 + c2, 1.0),
        HillLabel::Dn | HillLabel::Cn => (c2 - 1.0, -1.0, -3.0),
        HillLabel::Flat => unreachable!("flat operators have no family"),
    };
    Ok(HillSpec { label, a, shift, potential: sq.into_iter().map(|v| scale * v).collect(), period: params.period })
}

impl HillSpec {
    pub fn flat(v0: f64, period: f64, n: usize) -> Result<Self> {
        check_size(n)?;
        if !(period > 0.0) {
            return Err(Error::domain(format!("period L = {period} must be positive")));
        }
        Ok(Self { label: HillLabel::Flat, a: 1.0, shift: 0.0, potential: vec![v0; n], period })
    }

    pub fn n(&self) -> usize {
        self.potential.len()
    }

    /// Dense symmetric matrix: `a·D` with `D` the circulant of `ξ²`, plus the diagonal.
    pub fn matrix(&self) -> Result<SymMatrix> {
        let n = self.n();
        let grid = PeriodicGrid::new(n, self.period)?;
        let mut col: Vec<Complex64> = grid.wavenumbers_sq().iter().map(|&k| Complex64::new(k, 0.0)).collect();
        grid.fft().inverse(&mut col);
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.a * col[(i + n - j) % n].re;
            }
            m[(i, i)] += self.potential[i] - self.shift;
        }
        m.symmetrize();
        Ok(m)
    }

    /// `M·f` by FFT, agreeing with [`HillSpec::matrix`] to rounding.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        let grid = PeriodicGrid::new(self.n(), self.period)?;
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.fft().forward(&mut buf);
        for (z, &k2) in buf.iter_mut().zip(grid.wavenumbers_sq()) {
            *z *= k2;
        }
        grid.fft().inverse(&mut buf);
        Ok(buf.iter().zip(f).zip(&self.potential).map(|((z, &fv), &v)| self.a * z.re + (v - self.shift) * fv).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigensolve;
    use crate::wave_families::solve_family;
    use std::f64::consts::PI;

    #[test]
    fn flat_potential_spectrum() {
        let (l, n, v0) = (3.0, 64, 0.7);
        let m = HillSpec::flat(v0, l, n).unwrap().matrix().unwrap();
        let r = eigensolve(&m, n, "flat").unwrap();
        let mut expect: Vec<f64> = (0..n)
            .map(|j| {
                let k = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                (2.0 * PI * k / l).powi(2) + v0
            })
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in r.eigenvalues.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn matrix_is_symmetric_and_matches_fft_apply() {
        let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.3).unwrap();
        let spec = build_hill(&p, HillLabel::SnReal, 64).unwrap();
        let m = spec.matrix().unwrap();
        assert!(m.asymmetry() <= 1e-12);
        let f: Vec<f64> = (0..64).map(|j| (0.3 * j as f64).sin() + 0.1).collect();
        let dense = m.matvec(&f);
        let fast = spec.apply(&f).unwrap();
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn label_family_mismatch() {
        let p = solve_family(Family::SnSubluminal, 4.0 * PI, 0.3).unwrap();
        assert!(build_hill(&p, HillLabel::SnR, 64).is_err());
        assert!(build_hill(&p, HillLabel::SnReal, 100).is_err());
        assert!(build_hill(&p, HillLabel::SnReal, 32).is_err());
    }

    #[test]
    fn label_names_round_trip() {
        for l in [HillLabel::SnReal, HillLabel::SnR, HillLabel::SnI, HillLabel::Dn, HillLabel::Cn, HillLabel::Flat] {
            assert_eq!(l.name().parse::<HillLabel>().unwrap(), l);
        }
    }
}
