use crate::error::{Error, Result};
use crate::linalg::{dot, SymMatrix};
use crate::wave_families::{Family, WaveParams};

use super::{build_hill, canonical_sign, eigensolve, HillLabel, SpectrumReport, ZERO_TOL};

const VALUE_TOL: f64 = 1e-5;
const VECTOR_TOL: f64 = 1e-5;
const CORRELATION_FLOOR: f64 = 0.9999;
const REPORTED_MODES: usize = 8;

/// Eigenvalue `λ` of the labelled operator for Lamé eigenvalue `σ`.
///
/// Sub-luminal: `λ = ωℓ²σ − 1`; standing: `λ = ℓ²σ − (1+c²)`;
/// superluminal (sign-flipped form): `λ = ωℓ²σ + 1 − 3·peak²`.
pub fn sigma_lambda_map(params: &WaveParams, label: HillLabel, sigma: f64) -> f64 {
    let (scale, offset) = affine(params, label);
    scale * sigma + offset
}

/// Inverse of [`sigma_lambda_map`].
pub fn lambda_sigma_map(params: &WaveParams, label: HillLabel, lambda: f64) -> f64 {
    let (scale, offset) = affine(params, label);
    (lambda - offset) / scale
}

fn affine(p: &WaveParams, label: HillLabel) -> (f64, f64) {
    let l2 = p.ell * p.ell;
    match label {
        HillLabel::SnReal => (p.omega * l2, -1.0),
        HillLabel::SnR | HillLabel::SnI => (l2, -(1.0 + p.c * p.c)),
        HillLabel::Dn | HillLabel::Cn => (p.omega * l2, 1.0 - 3.0 * p.peak().powi(2)),
        HillLabel::Flat => (1.0, 0.0),
    }
}

/// Positive root `λ²` of `s² + (1+c²−μ²)s − μ² = 0`.
pub fn vector_eigenvalue_from_scalar(mu_sq: f64, c: f64) -> Result<f64> {
    if !(mu_sq > 0.0) {
        return Err(Error::domain(format!("μ² = {mu_sq} must be positive")));
    }
    let b = 1.0 + c * c - mu_sq;
    let disc = (b * b + 4.0 * mu_sq).sqrt();
    Ok(if b > 0.0 { 2.0 * mu_sq / (b + disc) } else { 0.5 * (disc - b) })
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    canonical_sign(&mut v);
    v
}

/// Max-norm distance between `a` and `±b`, whichever sign is closer.
fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    let plus = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let minus = a.iter().zip(b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
    plus.min(minus)
}

/// Sign changes of a periodic sequence, ignoring entries at rounding level.
pub(crate) fn sign_changes(v: &[f64]) -> usize {
    let floor = 1e-8 * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let signs: Vec<f64> = v.iter().filter(|x| x.abs() > floor).map(|x| x.signum()).collect();
    if signs.is_empty() {
        return 0;
    }
    (0..signs.len()).filter(|&i| signs[i] != signs[(i + 1) % signs.len()]).count()
}

fn samples(params: &WaveParams, n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let h = params.period / n as f64;
    (0..n).map(|j| f(j as f64 * h)).collect()
}

fn lame_n2_ground(kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    2.0 * (1.0 + k2) - 2.0 * (1.0 - k2 + k2 * k2).sqrt()
}

fn require_family(params: &WaveParams, family: Family) -> Result<()> {
    if params.family != family {
        return Err(Error::domain(format!("expected a {family} wave, got {}", params.family)));
    }
    Ok(())
}

/// Spectrum of the sub-luminal snoidal linearisation, checked against the
/// Lamé band edges `σ₀ < 1+κ² < 1+4κ²`.
pub fn verify_sn_real_spectrum(params: &WaveParams, n: usize) -> Result<SpectrumReport> {
    require_family(params, Family::SnSubluminal)?;
    let spec = build_hill(params, HillLabel::SnReal, n)?;
    let mut r = eigensolve(&spec.matrix()?, REPORTED_MODES.min(n), HillLabel::SnReal.name())?;
    let lab = HillLabel::SnReal;
    let k2 = params.kappa * params.kappa;

    let lam0 = sigma_lambda_map(params, lab, lame_n2_ground(params.kappa));
    let lam2 = 3.0 * (1.0 - 0.5 * params.beta1 * params.beta1);
    let kernel = unit(samples(params, n, |y| params.real_profile_dx(y)));
    let y1 = unit(samples(params, n, |y| {
        let s = params.elliptic_at(y);
        s.cn * s.dn
    }));
    let corr = dot(&y1, &r.eigenvectors[1]).abs();

    let e = &mut r.oracle_errors;
    e.insert("lambda0_lame".into(), (r.eigenvalues[0] - lam0).abs());
    e.insert("lambda1_zero".into(), r.eigenvalues[1].abs());
    e.insert("lambda1_sigma".into(), sigma_lambda_map(params, lab, 1.0 + k2).abs());
    e.insert("lambda2_third".into(), (r.eigenvalues[2] - lam2).abs());
    e.insert("kernel_vector".into(), max_diff(&kernel, &r.eigenvectors[1]));
    e.insert("y1_correlation_defect".into(), 1.0 - corr);

    if r.negative_count != 1 {
        let k = r.negative_count;
        return Err(r.fail(format!("expected exactly 1 negative eigenvalue, found {k}")));
    }
    if r.eigenvalues[1].abs() > ZERO_TOL {
        let v = r.eigenvalues[1];
        return Err(r.fail(format!("second eigenvalue {v} is not a zero mode")));
    }
    if r.oracle_errors["kernel_vector"] > VECTOR_TOL {
        return Err(r.fail("zero-mode eigenvector does not match the wave derivative"));
    }
    if r.oracle_errors["lambda2_third"] > VALUE_TOL {
        let v = r.eigenvalues[2];
        return Err(r.fail(format!("third eigenvalue {v} differs from 3(1−β₁²/2) = {lam2}")));
    }
    if corr < CORRELATION_FLOOR {
        return Err(r.fail(format!("zero mode correlates with cn·dn only to {corr}")));
    }
    if sign_changes(&r.eigenvectors[0]) != 0 {
        return Err(r.fail("ground state changes sign"));
    }
    for j in [1, 2] {
        if sign_changes(&r.eigenvectors[j]) != 2 {
            return Err(r.fail(format!("eigenfunction {j} does not have two sign changes")));
        }
    }
    Ok(r)
}

/// Spectra of the real-part and imaginary-part operators of the standing wave.
#[derive(Clone, Debug)]
pub struct ComplexSpectra {
    pub real_block: SpectrumReport,
    pub imag_block: SpectrumReport,
}

pub fn verify_complex_spectra(params: &WaveParams, n: usize) -> Result<ComplexSpectra> {
    require_family(params, Family::SnComplexStanding)?;
    let (b1, b2, c) = (params.beta1, params.beta2, params.c);
    let omega = 1.0 + c * c;

    let spec_r = build_hill(params, HillLabel::SnR, n)?;
    let mut r = eigensolve(&spec_r.matrix()?, REPORTED_MODES.min(n), HillLabel::SnR.name())?;
    let lam0_r = sigma_lambda_map(params, HillLabel::SnR, lame_n2_ground(params.kappa));
    let lam2_r = 3.0 * omega - 1.5 * b1 * b1;
    let kernel_r = unit(samples(params, n, |y| params.real_profile_dx(y)));
    r.oracle_errors.insert("lambda0_lame".into(), (r.eigenvalues[0] - lam0_r).abs());
    r.oracle_errors.insert("lambda1_zero".into(), r.eigenvalues[1].abs());
    r.oracle_errors.insert("lambda2_third".into(), (r.eigenvalues[2] - lam2_r).abs());
    r.oracle_errors.insert("kernel_vector".into(), max_diff(&kernel_r, &r.eigenvectors[1]));

    let spec_i = build_hill(params, HillLabel::SnI, n)?;
    let mut im = eigensolve(&spec_i.matrix()?, REPORTED_MODES.min(n), HillLabel::SnI.name())?;
    let dn = unit(samples(params, n, |y| params.elliptic_at(y).dn));
    let cn = unit(samples(params, n, |y| params.elliptic_at(y).cn));
    let psi = unit(samples(params, n, |y| params.real_profile(y)));
    im.oracle_errors.insert("lambda0_dn".into(), (im.eigenvalues[0] + 0.5 * b1 * b1).abs());
    im.oracle_errors.insert("lambda1_cn".into(), (im.eigenvalues[1] + 0.5 * b2 * b2).abs());
    im.oracle_errors.insert("lambda2_zero".into(), im.eigenvalues[2].abs());
    im.oracle_errors.insert("dn_vector".into(), max_diff(&dn, &im.eigenvectors[0]));
    im.oracle_errors.insert("cn_vector".into(), max_diff(&cn, &im.eigenvectors[1]));
    im.oracle_errors.insert("kernel_vector".into(), max_diff(&psi, &im.eigenvectors[2]));

    if r.negative_count != 1 {
        let k = r.negative_count;
        return Err(r.fail(format!("expected exactly 1 negative eigenvalue, found {k}")));
    }
    if r.eigenvalues[1].abs() > ZERO_TOL || r.oracle_errors["kernel_vector"] > VECTOR_TOL {
        return Err(r.fail("second eigenvalue is not the translation zero mode"));
    }
    if r.oracle_errors["lambda2_third"] > VALUE_TOL {
        let v = r.eigenvalues[2];
        return Err(r.fail(format!("third eigenvalue {v} differs from 3(1+c²) − 3β₁²/2 = {lam2_r}")));
    }
    if im.negative_count != 2 {
        let k = im.negative_count;
        return Err(im.fail(format!("expected exactly 2 negative eigenvalues, found {k}")));
    }
    for (key, what) in [("lambda0_dn", "−β₁²/2"), ("lambda1_cn", "−β₂²/2")] {
        if im.oracle_errors[key] > VALUE_TOL {
            return Err(im.fail(format!("negative eigenvalue misses {what}")));
        }
    }
    for key in ["dn_vector", "cn_vector"] {
        if im.oracle_errors[key] > VECTOR_TOL {
            return Err(im.fail(format!("eigenvector check {key} failed")));
        }
    }
    if im.eigenvalues[2].abs() > ZERO_TOL || im.oracle_errors["kernel_vector"] > VECTOR_TOL {
        return Err(im.fail("third eigenvalue is not the phase zero mode"));
    }
    Ok(ComplexSpectra { real_block: r, imag_block: im })
}

/// Spectrum of a dnoidal or cnoidal linearisation with the kernel oracle
/// recorded; no counts are asserted.
pub fn superluminal_spectrum(params: &WaveParams, n: usize, m: usize) -> Result<SpectrumReport> {
    let label = match params.family {
        Family::DnSuperluminal => HillLabel::Dn,
        Family::CnSuperluminal => HillLabel::Cn,
        other => return Err(Error::domain(format!("{other} is not a superluminal family"))),
    };
    let spec = build_hill(params, label, n)?;
    let matrix: SymMatrix = spec.matrix()?;
    let mut r = eigensolve(&matrix, m.min(n), label.name())?;
    let deriv = samples(params, n, |y| params.real_profile_dx(y));
    let applied = spec.apply(&deriv)?;
    let norm = deriv.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let defect = applied.iter().fold(0.0f64, |a, x| a.max(x.abs())) / norm;
    r.oracle_errors.insert("kernel_residual".into(), defect);
    let sigma_kernel =
        if label == HillLabel::Dn { 4.0 + params.kappa.powi(2) } else { 1.0 + 4.0 * params.kappa.powi(2) };
    r.oracle_errors.insert("kernel_sigma".into(), sigma_lambda_map(params, label, sigma_kernel).abs());
    Ok(r)
}
