//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything runs on the arithmetic-geometric mean of `(1, k')`. `K` and `E`
//! come from the AGM limit and the Gauss-Legendre correction sum; `sn`, `cn`,
//! `dn` come from the backward phase recursion.
//!
//! Callers that know `k' = √(1−k²)` in closed form (the wave families do)
//! should build the [`Modulus`] with [`Modulus::with_complement`], which keeps
//! full relative accuracy in `k'` when `k` is within a few ulps of 1.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const AGM_REL_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 40;
const SERIES_CUTOFF: f64 = 1e-3;

/// Elliptic modulus `k ∈ [0, 1]` together with its complement `k' = √(1−k²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    k: f64,
    kp: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::domain(format!("elliptic modulus k = {k} is outside [0, 1]")));
        }
        Ok(Self { k, kp: ((1.0 - k) * (1.0 + k)).sqrt() })
    }

    /// Builds a modulus from `k` and an independently computed complement.
    pub fn with_complement(k: f64, kp: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) || !(0.0..=1.0).contains(&kp) {
            return Err(Error::domain(format!("modulus pair (k, k') = ({k}, {kp}) is outside [0, 1]²")));
        }
        if (k * k + kp * kp - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("k² + k'² = {} differs from 1", k * k + kp * kp)));
        }
        Ok(Self { k, kp })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// The complementary modulus `k'`.
    pub fn kp(&self) -> f64 {
        self.kp
    }

    pub fn complete_k(&self) -> Result<f64> {
        if self.kp == 0.0 {
            return Err(Error::domain("K(k) diverges at k = 1"));
        }
        if self.k < SERIES_CUTOFF {
            return Ok(k_series(self.k));
        }
        Ok(Agm::run(self.k, self.kp).complete_k())
    }

    pub fn complete_e(&self) -> f64 {
        if self.kp == 0.0 {
            return 1.0;
        }
        if self.k < SERIES_CUTOFF {
            return e_series(self.k);
        }
        let agm = Agm::run(self.k, self.kp);
        agm.complete_e(agm.complete_k())
    }

    pub fn derivatives(&self) -> Result<EllipticEval> {
        if self.k == 0.0 || self.kp == 0.0 {
            return Err(Error::domain(format!("K'(k), E'(k) are singular at k = {}", self.k)));
        }
        let k = self.k;
        if k < SERIES_CUTOFF {
            let k2 = k * k;
            return Ok(EllipticEval {
                k: k_series(k),
                e: e_series(k),
                dk: FRAC_PI_2 * k * (0.5 + k2 * (9.0 / 16.0 + k2 * 75.0 / 128.0)),
                de: -FRAC_PI_2 * k * (0.5 + k2 * (3.0 / 16.0 + k2 * 15.0 / 128.0)),
            });
        }
        let agm = Agm::run(k, self.kp);
        let kk = agm.complete_k();
        let ee = agm.complete_e(kk);
        let kp2 = self.kp * self.kp;
        Ok(EllipticEval { k: kk, e: ee, dk: (ee - kp2 * kk) / (k * kp2), de: (ee - kk) / k })
    }

    pub fn sncndn(&self, u: f64) -> SnCnDn {
        if self.kp == 0.0 {
            let sech = 1.0 / u.cosh();
            return SnCnDn { sn: u.tanh(), cn: sech, dn: sech };
        }
        if self.k == 0.0 {
            return SnCnDn { sn: u.sin(), cn: u.cos(), dn: 1.0 };
        }
        let agm = Agm::run(self.k, self.kp);
        let quarter = agm.complete_k();
        let u = reduce(u, 4.0 * quarter);

        let n = agm.len - 1;
        let mut phi = 2f64.powi(n as i32) * agm.a[n] * u;
        for j in (1..=n).rev() {
            phi = 0.5 * (phi + (agm.c[j] / agm.a[j] * phi.sin()).asin());
        }
        let (sn, cn) = phi.sin_cos();
        // 1 − k²sn² = cn² + k'²sn² has no cancellation, unlike the textbook form.
        let dn = (cn * cn + self.kp * self.kp * sn * sn).sqrt();
        SnCnDn { sn, cn, dn }
    }
}

/// `K`, `E` and their derivatives with respect to the modulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticEval {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "dK")]
    pub dk: f64,
    #[serde(rename = "dE")]
    pub de: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnCnDn {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl SnCnDn {
    /// `(d/du sn, d/du cn, d/du dn)`.
    pub fn derivatives(&self, k: f64) -> (f64, f64, f64) {
        (self.cn * self.dn, -self.sn * self.dn, -k * k * self.sn * self.cn)
    }

    /// Second derivatives with respect to the argument.
    pub fn second_derivatives(&self, k: f64) -> (f64, f64, f64) {
        let k2 = k * k;
        let (s, c, d) = (self.sn, self.cn, self.dn);
        (-s * (d * d + k2 * c * c), -c * (d * d - k2 * s * s), -k2 * d * (c * c - s * s))
    }
}

/// `K(k)` for `0 ≤ k < 1`.
pub fn complete_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("K(k) requires 0 ≤ k < 1, got k = {k}")));
    }
    Modulus::new(k)?.complete_k()
}

/// `E(k)` for `0 ≤ k ≤ 1`.
pub fn complete_e(k: f64) -> Result<f64> {
    Ok(Modulus::new(k)?.complete_e())
}

/// `K`, `E`, `dK/dk`, `dE/dk` for `0 < k < 1`.
pub fn elliptic_derivatives(k: f64) -> Result<EllipticEval> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(format!("elliptic derivatives require 0 < k < 1, got k = {k}")));
    }
    Modulus::new(k)?.derivatives()
}

pub fn jacobi_sncndn(u: f64, k: f64) -> Result<SnCnDn> {
    if !u.is_finite() {
        return Err(Error::domain(format!("sn/cn/dn argument u = {u} is not finite")));
    }
    Ok(Modulus::new(k)?.sncndn(u))
}

fn k_series(k: f64) -> f64 {
    let k2 = k * k;
    FRAC_PI_2 * (1.0 + k2 * (0.25 + k2 * (9.0 / 64.0 + k2 * 25.0 / 256.0)))
}

fn e_series(k: f64) -> f64 {
    let k2 = k * k;
    FRAC_PI_2 * (1.0 - k2 * (0.25 + k2 * (3.0 / 64.0 + k2 * 5.0 / 256.0)))
}

/// Shift `u` into `[−p/2, p/2]`.
fn reduce(u: f64, p: f64) -> f64 {
    if u.abs() <= 0.5 * p {
        return u;
    }
    u - p * (u / p).round()
}

struct Agm {
    a: [f64; AGM_MAX_ITER + 1],
    c: [f64; AGM_MAX_ITER + 1],
    len: usize,
}

impl Agm {
    fn run(k: f64, kp: f64) -> Self {
        let mut a = [0.0; AGM_MAX_ITER + 1];
        let mut c = [0.0; AGM_MAX_ITER + 1];
        a[0] = 1.0;
        c[0] = k;
        let mut b = kp;
        let mut len = 1;
        // At least one step so the phase recursion always has a level to descend.
        while len <= AGM_MAX_ITER {
            let n = len - 1;
            let an = a[n];
            a[len] = 0.5 * (an + b);
            c[len] = c[n] * c[n] / (4.0 * a[len]);
            b = (an * b).sqrt();
            len += 1;
            if (a[len - 1] - b).abs() <= AGM_REL_TOL * a[len - 1] {
                break;
            }
        }
        Self { a, c, len }
    }

    fn complete_k(&self) -> f64 {
        PI / (2.0 * self.a[self.len - 1])
    }

    fn complete_e(&self, kk: f64) -> f64 {
        let mut sum = 0.0;
        let mut w = 0.5;
        for n in 0..self.len {
            sum += w * self.c[n] * self.c[n];
            w *= 2.0;
        }
        kk * (1.0 - sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use proptest::prelude::*;

    fn k_oracle(k: f64) -> f64 {
        integrate(|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-15)
    }

    fn e_oracle(k: f64) -> f64 {
        integrate(|t: f64| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-15)
    }

    #[test]
    fn endpoint_values() {
        assert_eq!(complete_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(complete_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(complete_e(1.0).unwrap(), 1.0);
        assert!(complete_k(0.999999).unwrap() > 7.0);
    }

    #[test]
    fn domain_errors() {
        assert!(complete_k(1.0).is_err());
        assert!(complete_k(-0.1).is_err());
        assert!(complete_e(1.1).is_err());
        assert!(elliptic_derivatives(0.0).is_err());
        assert!(elliptic_derivatives(1.0).is_err());
        assert!(jacobi_sncndn(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn half_modulus_against_quadrature() {
        // Frozen from the adaptive Gauss-Kronrod oracle.
        let k = complete_k(0.5).unwrap();
        let e = complete_e(0.5).unwrap();
        assert!((k - k_oracle(0.5)).abs() < 1e-12);
        assert!((e - e_oracle(0.5)).abs() < 1e-12);
        assert!((k - 1.685_750_354_812_596).abs() < 1e-13);
        assert!((e - 1.467_462_209_339_427).abs() < 1e-13);
    }

    #[test]
    fn quadrature_agreement_across_range() {
        for i in 0..=40 {
            let k = 0.99 * i as f64 / 40.0;
            assert!((complete_k(k).unwrap() - k_oracle(k)).abs() < 1e-13, "K at {k}");
            assert!((complete_e(k).unwrap() - e_oracle(k)).abs() < 1e-13, "E at {k}");
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        let below = elliptic_derivatives(SERIES_CUTOFF * (1.0 - 1e-13)).unwrap();
        let above = elliptic_derivatives(SERIES_CUTOFF * (1.0 + 1e-13)).unwrap();
        assert!((below.k - above.k).abs() < 1e-14);
        assert!((below.e - above.e).abs() < 1e-14);
        assert!((below.dk - above.dk).abs() < 1e-12);
        assert!((below.de - above.de).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-6;
        let ev = elliptic_derivatives(0.6).unwrap();
        let fd_k = (complete_k(0.6 + h).unwrap() - complete_k(0.6 - h).unwrap()) / (2.0 * h);
        let fd_e = (complete_e(0.6 + h).unwrap() - complete_e(0.6 - h).unwrap()) / (2.0 * h);
        assert!(((ev.dk - fd_k) / fd_k).abs() < 1e-6);
        assert!(((ev.de - fd_e) / fd_e).abs() < 1e-6);
    }

    #[test]
    fn derivative_vanishes_at_zero() {
        let ev = elliptic_derivatives(1e-6).unwrap();
        assert!((ev.dk / (PI * 1e-6 / 4.0) - 1.0).abs() < 1e-9);
        assert!(ev.dk > 0.0 && ev.de < 0.0);
    }

    #[test]
    fn special_moduli() {
        for &u in &[-20.0, -3.0, -0.1, 0.0, 0.7, 5.0, 20.0] {
            let s = jacobi_sncndn(u, 1.0).unwrap();
            assert!((s.sn - f64::tanh(u)).abs() < 1e-12);
            let s = jacobi_sncndn(u, 0.0).unwrap();
            assert!((s.sn - u.sin()).abs() < 1e-15);
            assert!((s.cn - u.cos()).abs() < 1e-15);
            assert_eq!(s.dn, 1.0);
        }
        for &k in &[0.0, 0.3, 0.9, 0.999999, 1.0] {
            assert_eq!(jacobi_sncndn(0.0, k).unwrap(), SnCnDn { sn: 0.0, cn: 1.0, dn: 1.0 });
        }
    }

    #[test]
    fn tabulated_values() {
        // sn, cn, dn at u = 0.5, k = 0.5 (frozen from the quadrature-inverted amplitude).
        let s = jacobi_sncndn(0.5, 0.5).unwrap();
        let amp = amplitude_by_quadrature(0.5, 0.5);
        assert!((s.sn - amp.sin()).abs() < 1e-13);
        assert!((s.cn - amp.cos()).abs() < 1e-13);
        assert!((s.sn - 0.475_082_936_028_536).abs() < 1e-12);
    }

    /// Inverts `u = F(φ, k)` by Newton on the quadrature-evaluated incomplete integral.
    fn amplitude_by_quadrature(u: f64, k: f64) -> f64 {
        let mut phi = u;
        for _ in 0..50 {
            let f = integrate(|t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-15);
            let step = (f - u) * (1.0 - k * k * phi.sin().powi(2)).sqrt();
            phi -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        phi
    }

    #[test]
    fn spectral_ode_residuals() {
        use crate::grid::PeriodicGrid;
        let k = 0.8;
        let m = Modulus::new(k).unwrap();
        let period = 4.0 * m.complete_k().unwrap();
        let grid = PeriodicGrid::new(256, period).unwrap();
        let xs = grid.points();
        let vals: Vec<SnCnDn> = xs.iter().map(|&u| m.sncndn(u)).collect();
        let sn: Vec<f64> = vals.iter().map(|v| v.sn).collect();
        let cn: Vec<f64> = vals.iter().map(|v| v.cn).collect();
        let dn: Vec<f64> = vals.iter().map(|v| v.dn).collect();
        let (dsn, dcn, ddn) = (grid.derivative_real(&sn), grid.derivative_real(&cn), grid.derivative_real(&dn));
        let k2 = k * k;
        for i in 0..xs.len() {
            let r1 = dsn[i].powi(2) - (1.0 - sn[i].powi(2)) * (1.0 - k2 * sn[i].powi(2));
            let r2 = dcn[i].powi(2) - (1.0 - cn[i].powi(2)) * (1.0 - k2 + k2 * cn[i].powi(2));
            let r3 = ddn[i].powi(2) - (dn[i].powi(2) - 1.0) * (1.0 - k2 - dn[i].powi(2));
            assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9 && r3.abs() < 1e-9, "i = {i}");
        }
    }

    #[test]
    fn sums_and_products_increase() {
        let mut prev = (0.0, 0.0);
        for i in 0..200 {
            let k = i as f64 / 200.0;
            let (kk, ee) = (complete_k(k).unwrap(), complete_e(k).unwrap());
            assert!(ee <= kk);
            if i > 0 {
                assert!(kk + ee > prev.0 && kk * ee > prev.1, "k = {k}");
            }
            prev = (kk + ee, kk * ee);
        }
    }

    #[test]
    fn complement_builder_rejects_inconsistent_pair() {
        assert!(Modulus::with_complement(0.6, 0.8).is_ok());
        assert!(Modulus::with_complement(0.6, 0.7).is_err());
    }

    proptest! {
        #[test]
        fn pythagorean_identities(u in -50.0f64..50.0, k in 0.0f64..=1.0) {
            let s = jacobi_sncndn(u, k).unwrap();
            prop_assert!((s.sn * s.sn + s.cn * s.cn - 1.0).abs() <= 1e-12);
            prop_assert!((s.dn * s.dn + k * k * s.sn * s.sn - 1.0).abs() <= 1e-12);
            prop_assert!(s.sn.abs() <= 1.0 && s.cn.abs() <= 1.0 && s.dn <= 1.0);
            prop_assert!(s.dn >= ((1.0 - k) * (1.0 + k)).sqrt() - 1e-15);
        }

        #[test]
        fn parity_and_periods(u in -10.0f64..10.0, k in 0.0f64..0.999) {
            let m = Modulus::new(k).unwrap();
            let kk = m.complete_k().unwrap();
            let (p, n) = (m.sncndn(u), m.sncndn(-u));
            prop_assert!((p.sn + n.sn).abs() <= 1e-12);
            prop_assert!((p.cn - n.cn).abs() <= 1e-12);
            prop_assert!((p.dn - n.dn).abs() <= 1e-12);
            let q = m.sncndn(u + 4.0 * kk);
            prop_assert!((q.sn - p.sn).abs() <= 1e-11 && (q.cn - p.cn).abs() <= 1e-11);
            let h = m.sncndn(u + 2.0 * kk);
            prop_assert!((h.dn - p.dn).abs() <= 1e-11);
        }

        #[test]
        fn monotone_in_modulus(k in 0.0f64..0.99, dk in 1e-6f64..1e-2) {
            prop_assert!(complete_k(k + dk).unwrap() > complete_k(k).unwrap());
            prop_assert!(complete_e(k + dk).unwrap() < complete_e(k).unwrap());
        }

        #[test]
        fn derivative_signs(k in 1e-6f64..0.999) {
            let ev = elliptic_derivatives(k).unwrap();
            prop_assert!(ev.dk > 0.0 && ev.de < 0.0);
            prop_assert!(ev.e < ev.k);
        }
    }
}
