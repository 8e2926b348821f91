//! The four explicit periodic wave families and their period-matching problem.
//!
//! Each family is parameterised by one amplitude (`β₁` for dn, sn and the
//! complex branch, `β₂` for cn) and the speed `c`; the period map in that
//! amplitude is strictly monotone, so [`solve_family`] is a plain bisection.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{Modulus, SnCnDn};
use crate::error::{Error, Result};

/// Endpoints of the amplitude interval are pulled inside by this much.
const BRACKET_INSET: f64 = 1e-9;
const BISECTION_MAX_ITER: usize = 200;
const KAPPA_CEILING: f64 = 1.0 - 1e-10;
const PERIOD_REL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "dn")]
    DnSuperluminal,
    #[serde(rename = "cn")]
    CnSuperluminal,
    #[serde(rename = "sn-subluminal")]
    SnSubluminal,
    #[serde(rename = "sn-complex")]
    SnComplexStanding,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::DnSuperluminal, Family::CnSuperluminal, Family::SnSubluminal, Family::SnComplexStanding];

    pub fn name(self) -> &'static str {
        match self {
            Family::DnSuperluminal => "dn",
            Family::CnSuperluminal => "cn",
            Family::SnSubluminal => "sn-subluminal",
            Family::SnComplexStanding => "sn-complex",
        }
    }

    pub fn is_complex(self) -> bool {
        self == Family::SnComplexStanding
    }

    pub fn is_superluminal(self) -> bool {
        matches!(self, Family::DnSuperluminal | Family::CnSuperluminal)
    }

    /// `ω_sl = c²−1`, `ω_sb = 1−c²` or `ω_c = 1+c²`.
    pub fn omega(self, c: f64) -> f64 {
        match self {
            Family::DnSuperluminal | Family::CnSuperluminal => (c - 1.0) * (c + 1.0),
            Family::SnSubluminal => (1.0 - c) * (1.0 + c),
            Family::SnComplexStanding => 1.0 + c * c,
        }
    }

    /// Open interval of the amplitude parameter at speed `c`.
    pub fn amplitude_range(self, c: f64) -> (f64, f64) {
        match self {
            Family::DnSuperluminal | Family::SnSubluminal => (1.0, SQRT_2),
            Family::CnSuperluminal => (SQRT_2, f64::INFINITY),
            Family::SnComplexStanding => {
                let w = self.omega(c);
                (w.sqrt(), (2.0 * w).sqrt())
            }
        }
    }

    fn check_speed_regime(self, c: f64) -> Result<()> {
        let ok = c.is_finite()
            && match self {
                Family::DnSuperluminal | Family::CnSuperluminal => c.abs() > 1.0,
                Family::SnSubluminal => c.abs() < 1.0,
                Family::SnComplexStanding => true,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("speed c = {c} is outside the {self} regime")))
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown family '{s}' (expected dn, cn, sn-subluminal, sn-complex)")))
    }
}

/// Admissible speeds `|c| ∈ (lo, hi)` for one family on one period.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedInterval {
    pub family: Family,
    pub period: f64,
    pub lo: f64,
    pub hi: f64,
    /// Strict lower bound on `c²`; may be negative, in which case `c = 0` is admitted.
    lo_sq: f64,
}

impl SpeedInterval {
    pub fn contains(&self, c: f64) -> bool {
        let c2 = c * c;
        c.is_finite() && c2 > self.lo_sq && c.abs() < self.hi
    }

    pub fn admits_zero(&self) -> bool {
        self.lo_sq < 0.0
    }
}

impl fmt::Display for SpeedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hi.is_infinite() {
            write!(f, "({}, ∞)", self.lo)
        } else {
            write!(f, "({}, {})", self.lo, self.hi)
        }
    }
}

pub fn admissible_speeds(family: Family, period: f64) -> Result<SpeedInterval> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::domain(format!("period L = {period} must be positive and finite")));
    }
    let r = period / (2.0 * PI);
    let (lo_sq, hi) = match family {
        Family::DnSuperluminal => (1.0, (1.0 + 2.0 * r * r).sqrt()),
        Family::CnSuperluminal => (1.0, f64::INFINITY),
        Family::SnSubluminal => (1.0 - r * r, 1.0),
        Family::SnComplexStanding => (1.0 / (r * r) - 1.0, f64::INFINITY),
    };
    Ok(SpeedInterval { family, period, lo: lo_sq.max(0.0).sqrt(), hi, lo_sq })
}

/// One point on a wave-family curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveParams {
    pub family: Family,
    pub c: f64,
    #[serde(rename = "L")]
    pub period: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub kappa: f64,
    pub ell: f64,
    pub omega: f64,
    #[serde(rename = "A")]
    pub integration_constant: f64,
}

/// `(√a − b)(√a + b)`, i.e. `a − b²` without cancellation near `b² = a`.
fn diff_sq(root: f64, b: f64) -> f64 {
    (root - b) * (root + b)
}

/// Modulus, `κ'`, `ℓ` and the partner amplitude for a given amplitude parameter.
struct Shape {
    beta1: f64,
    beta2: f64,
    kappa: f64,
    kp: f64,
    ell: f64,
}

fn shape(family: Family, beta: f64, c: f64) -> Shape {
    let w = family.omega(c);
    match family {
        Family::DnSuperluminal => {
            let b2 = diff_sq(SQRT_2, beta).sqrt();
            let kappa = (2.0 * diff_sq(1.0, beta).abs()).sqrt() / beta;
            Shape { beta1: beta, beta2: b2, kappa, kp: b2 / beta, ell: beta / (2.0 * w).sqrt() }
        }
        Family::CnSuperluminal => {
            let b1 = diff_sq(beta, SQRT_2).sqrt();
            let denom = (2.0 * (beta - 1.0) * (beta + 1.0)).sqrt();
            Shape {
                beta1: b1,
                beta2: beta,
                kappa: beta / denom,
                kp: b1 / denom,
                ell: ((beta - 1.0) * (beta + 1.0) / w).sqrt(),
            }
        }
        Family::SnSubluminal => {
            let b2 = diff_sq(SQRT_2, beta).sqrt();
            Shape {
                beta1: beta,
                beta2: b2,
                kappa: b2 / beta,
                kp: (2.0 * diff_sq(beta, 1.0)).sqrt() / beta,
                ell: beta / (2.0 * w).sqrt(),
            }
        }
        Family::SnComplexStanding => {
            let b2 = diff_sq((2.0 * w).sqrt(), beta).sqrt();
            Shape {
                beta1: beta,
                beta2: b2,
                kappa: b2 / beta,
                kp: (2.0 * diff_sq(beta, w.sqrt())).sqrt() / beta,
                ell: beta / SQRT_2,
            }
        }
    }
}

/// Period of the wave as a function of the period-map prefactor and `K(κ)`.
fn period_from_shape(family: Family, s: &Shape) -> Result<f64> {
    let kk = Modulus::with_complement(s.kappa, s.kp)?.complete_k()?;
    // 2K or 4K divided by ℓ.
    let quarter_periods = if family == Family::DnSuperluminal { 2.0 } else { 4.0 };
    Ok(quarter_periods * kk / s.ell)
}

/// Fundamental period for amplitude parameter `beta` at speed `c`.
pub fn period_of(family: Family, beta: f64, c: f64) -> Result<f64> {
    family.check_speed_regime(c)?;
    let (lo, hi) = family.amplitude_range(c);
    if !(beta > lo && beta < hi) {
        return Err(Error::domain(format!(
            "amplitude {beta} is outside ({lo}, {hi}) for the {family} family at c = {c}"
        )));
    }
    period_from_shape(family, &shape(family, beta, c))
}

/// Solves `T(β) = L` for the unique amplitude on the family's curve.
pub fn solve_family(family: Family, period: f64, c: f64) -> Result<WaveParams> {
    let interval = admissible_speeds(family, period)?;
    if !interval.contains(c) {
        let hint = if family == Family::SnSubluminal && c == 0.0 && !interval.admits_zero() {
            format!("; c = 0 requires L > 2π (got L = {period}), where the admissible range is (0, 1)")
        } else if family.is_superluminal() && c.abs() <= 1.0 {
            "; superluminal waves require |c| > 1".to_string()
        } else {
            String::new()
        };
        return Err(Error::Regime { family, c, period, interval, hint });
    }

    let (lo, hi) = family.amplitude_range(c);
    let inset = |x: f64| BRACKET_INSET * x.max(1.0);
    let mut a = lo + inset(lo);
    let mut b = if hi.is_finite() { hi - inset(hi) } else { upper_bracket(family, c, period, lo)? };
    let f = |beta: f64| period_of(family, beta, c).map(|t| t - period);
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa.signum() == fb.signum() {
        return Err(Error::Convergence(format!(
            "period map does not bracket L = {period} on [{a}, {b}] for {family} at c = {c}"
        )));
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    // Run to the resolution of binary64 rather than a fixed width: near κ → 1
    // the period map is steep enough that a 1e-14 bracket misses the 1e-10 target.
    for _ in 0..BISECTION_MAX_ITER {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 {
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }

    let params = WaveParams::from_amplitude(family, best.0, c, period);
    if params.kappa > KAPPA_CEILING {
        return Err(Error::Convergence(format!(
            "solution modulus κ = {} is too close to 1 for {family} at L = {period}, c = {c}",
            params.kappa
        )));
    }
    let achieved = period + best.1;
    if (achieved - period).abs() > PERIOD_REL_TOL * period {
        return Err(Error::Convergence(format!(
            "period round-trip {achieved} misses L = {period} for {family} at c = {c}"
        )));
    }
    Ok(params)
}

/// Grows the cn amplitude until the period drops below `L`.
fn upper_bracket(family: Family, c: f64, period: f64, lo: f64) -> Result<f64> {
    let mut b = 2.0 * lo;
    for _ in 0..200 {
        if period_of(family, b, c)? < period {
            return Ok(b);
        }
        b *= 2.0;
    }
    Err(Error::Convergence(format!("no upper amplitude bracket for {family} at L = {period}")))
}

impl WaveParams {
    /// Builds the full parameter set from the amplitude parameter, with `L` taken as given.
    pub fn from_amplitude(family: Family, beta: f64, c: f64, period: f64) -> Self {
        let s = shape(family, beta, c);
        let b12 = s.beta1 * s.beta1 * s.beta2 * s.beta2;
        let integration_constant = match family {
            Family::CnSuperluminal | Family::SnComplexStanding => 0.25 * b12,
            Family::DnSuperluminal | Family::SnSubluminal => -0.25 * b12,
        };
        Self {
            family,
            c,
            period,
            beta1: s.beta1,
            beta2: s.beta2,
            kappa: s.kappa,
            ell: s.ell,
            omega: family.omega(c),
            integration_constant,
        }
    }

    /// The amplitude the period map is parameterised by.
    pub fn amplitude_parameter(&self) -> f64 {
        match self.family {
            Family::CnSuperluminal => self.beta2,
            _ => self.beta1,
        }
    }

    /// Peak value of the profile.
    pub fn peak(&self) -> f64 {
        match self.family {
            Family::DnSuperluminal => self.beta1,
            _ => self.beta2,
        }
    }

    /// `κ'` computed from the amplitudes, which stays accurate as `κ → 1`.
    fn complement_from_betas(&self) -> f64 {
        let (b1, b2) = (self.beta1, self.beta2);
        match self.family {
            Family::DnSuperluminal => b2 / b1,
            Family::CnSuperluminal => b1 / (b1 * b1 + b2 * b2).sqrt(),
            Family::SnSubluminal | Family::SnComplexStanding => ((b1 - b2) * (b1 + b2)).max(0.0).sqrt() / b1,
        }
    }

    pub fn modulus(&self) -> Modulus {
        let kp = self.complement_from_betas();
        Modulus::with_complement(self.kappa, kp)
            .or_else(|_| Modulus::new(self.kappa))
            .unwrap_or_else(|_| Modulus::new(self.kappa.clamp(0.0, 1.0)).expect("clamped modulus"))
    }

    /// The real shape function: dn, cn or sn of `u` scaled by the peak.
    fn shape_at(&self, m: &Modulus, u: f64) -> (f64, f64, f64) {
        let s = m.sncndn(u);
        let k = m.k();
        let (d1, d2) = (s.derivatives(k), s.second_derivatives(k));
        let a = self.peak();
        match self.family {
            Family::DnSuperluminal => (a * s.dn, a * d1.2, a * d2.2),
            Family::CnSuperluminal => (a * s.cn, a * d1.1, a * d2.1),
            Family::SnSubluminal | Family::SnComplexStanding => (a * s.sn, a * d1.0, a * d2.0),
        }
    }

    /// Co-moving coordinate reduced to `[0, L)`, so profiles are exactly periodic.
    fn comoving(&self, x: f64, t: f64) -> f64 {
        let y = if self.family.is_complex() { x } else { x - self.c * t };
        y.rem_euclid(self.period)
    }

    fn phase(&self, t: f64) -> Complex64 {
        if self.family.is_complex() {
            Complex64::from_polar(1.0, self.c * t)
        } else {
            Complex64::new(1.0, 0.0)
        }
    }

    /// Real profile `φ(y)` in the co-moving frame (or `ψ` for the standing wave).
    pub fn real_profile(&self, y: f64) -> f64 {
        self.shape_at(&self.modulus(), self.ell * y.rem_euclid(self.period)).0
    }

    pub fn real_profile_dx(&self, y: f64) -> f64 {
        self.ell * self.shape_at(&self.modulus(), self.ell * y.rem_euclid(self.period)).1
    }

    pub fn profile(&self, x: f64, t: f64) -> Complex64 {
        let u = self.ell * self.comoving(x, t);
        self.phase(t) * self.shape_at(&self.modulus(), u).0
    }

    pub fn profile_dx(&self, x: f64, t: f64) -> Complex64 {
        let u = self.ell * self.comoving(x, t);
        self.phase(t) * (self.ell * self.shape_at(&self.modulus(), u).1)
    }

    /// `∂ₜ` of the exact solution.
    pub fn profile_dt(&self, x: f64, t: f64) -> Complex64 {
        if self.family.is_complex() {
            Complex64::new(0.0, self.c) * self.profile(x, t)
        } else {
            -self.c * self.profile_dx(x, t)
        }
    }

    /// Samples `(φ, ∂ₜφ)` at `t = 0` on `x_j = jL/N`.
    pub fn sample(&self, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let h = self.period / n as f64;
        (0..n)
            .map(|j| {
                let x = j as f64 * h;
                (self.profile(x, 0.0), self.profile_dt(x, 0.0))
            })
            .unzip()
    }

    /// Right-hand side of `(φ')² = Q(φ)` with the stored integration constant.
    pub fn turning_polynomial(&self, z: f64) -> f64 {
        let a = self.integration_constant;
        let f = z.powi(4) - 2.0 * z * z - 4.0 * a;
        match self.family {
            Family::DnSuperluminal | Family::CnSuperluminal => -f / (2.0 * self.omega),
            Family::SnSubluminal => f / (2.0 * self.omega),
            Family::SnComplexStanding => 0.5 * (z.powi(4) - 2.0 * self.omega * z * z + 4.0 * a),
        }
    }

    /// `dQ/dA`, constant in `φ`.
    fn turning_polynomial_slope(&self) -> f64 {
        match self.family {
            Family::DnSuperluminal | Family::CnSuperluminal => 2.0 / self.omega,
            Family::SnSubluminal => -2.0 / self.omega,
            Family::SnComplexStanding => 2.0,
        }
    }

    /// `ℓ` and the modulus recomputed from `β₁`, `β₂` and `c` alone.
    fn shape_from_betas(&self) -> (f64, Modulus) {
        let (b1, b2) = (self.beta1, self.beta2);
        let (s1, s2) = (b1 * b1, b2 * b2);
        let w = self.family.omega(self.c);
        let (ell, k, kp) = match self.family {
            Family::DnSuperluminal => ((s1 / (2.0 * w)).sqrt(), ((s1 - s2) / s1).max(0.0).sqrt(), b2 / b1),
            Family::CnSuperluminal => {
                let r = (s1 + s2).sqrt();
                (((s1 + s2) / (2.0 * w)).sqrt(), b2 / r, b1 / r)
            }
            Family::SnSubluminal => (b1 / (2.0 * w).sqrt(), b2 / b1, ((s1 - s2).max(0.0)).sqrt() / b1),
            Family::SnComplexStanding => (b1 / SQRT_2, b2 / b1, ((s1 - s2).max(0.0)).sqrt() / b1),
        };
        let m = Modulus::with_complement(k.min(1.0), kp.min(1.0))
            .or_else(|_| Modulus::new(k.clamp(0.0, 1.0)))
            .expect("clamped modulus");
        (ell, m)
    }

    /// Max ODE residual over `n` samples of one period.
    ///
    /// The profile is rebuilt from the amplitudes and speed, so an inconsistent
    /// parameter set shows up as a nonzero residual.
    pub fn ode_residual(&self, n_samples: usize) -> Result<f64> {
        if n_samples < 16 {
            return Err(Error::domain(format!("ode_residual needs at least 16 samples, got {n_samples}")));
        }
        let (ell, m) = self.shape_from_betas();
        let c2 = self.c * self.c;
        let h = self.period / n_samples as f64;
        let mut worst: f64 = 0.0;
        for j in 0..n_samples {
            let (phi, _, d2u) = self.shape_at(&m, ell * j as f64 * h);
            let d2 = ell * ell * d2u;
            let nl = phi - phi.powi(3);
            let r = match self.family {
                Family::DnSuperluminal | Family::CnSuperluminal => (c2 - 1.0) * d2 - nl,
                Family::SnSubluminal => -(1.0 - c2) * d2 - nl,
                Family::SnComplexStanding => d2 + (1.0 + c2) * phi - phi.powi(3),
            };
            worst = worst.max(r.abs());
        }
        Ok(worst)
    }

    /// Max deviation of `(φ')²` from the quartic `Q(φ)` over `n` samples.
    pub fn quadrature_residual(&self, n_samples: usize) -> Result<f64> {
        if n_samples < 16 {
            return Err(Error::domain(format!("quadrature_residual needs at least 16 samples, got {n_samples}")));
        }
        let h = self.period / n_samples as f64;
        Ok((0..n_samples)
            .map(|j| {
                let y = j as f64 * h;
                (self.real_profile_dx(y).powi(2) - self.turning_polynomial(self.real_profile(y))).abs()
            })
            .fold(0.0, f64::max))
    }

    /// Least-squares estimate of `A` from sampled `(φ, φ')`.
    pub fn fit_integration_constant(&self, n_samples: usize) -> f64 {
        let mut probe = *self;
        probe.integration_constant = 0.0;
        let g = self.turning_polynomial_slope();
        let h = self.period / n_samples as f64;
        let sum: f64 = (0..n_samples)
            .map(|j| {
                let y = j as f64 * h;
                (self.real_profile_dx(y).powi(2) - probe.turning_polynomial(self.real_profile(y))) / g
            })
            .sum();
        sum / n_samples as f64
    }

    /// Checks the algebraic relations between the stored fields.
    pub fn validate(&self) -> Result<()> {
        let expected = WaveParams::from_amplitude(self.family, self.amplitude_parameter(), self.c, self.period);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        let fields = [
            ("beta1", self.beta1, expected.beta1),
            ("beta2", self.beta2, expected.beta2),
            ("kappa", self.kappa, expected.kappa),
            ("ell", self.ell, expected.ell),
            ("omega", self.omega, expected.omega),
            ("A", self.integration_constant, expected.integration_constant),
        ];
        for (name, got, want) in fields {
            if !close(got, want) {
                return Err(Error::domain(format!("{name} = {got} is inconsistent (expected {want})")));
            }
        }
        let t = period_of(self.family, self.amplitude_parameter(), self.c)?;
        if (t - self.period).abs() > PERIOD_REL_TOL * self.period {
            return Err(Error::domain(format!("period {t} does not match L = {}", self.period)));
        }
        Ok(())
    }

    /// The unit-speed sn/cn/dn triple at the scaled coordinate, for operators
    /// that need the bare elliptic functions.
    pub fn elliptic_at(&self, y: f64) -> SnCnDn {
        self.modulus().sncndn(self.ell * y.rem_euclid(self.period))
    }
}

/// Maps `(u_c, u_β) ∈ [0,1]²` to an admissible `(L, c)` whose solution has a
/// well-conditioned modulus: the speed is drawn from a fixed range and `L` is
/// the period at an amplitude inside the central 90% of its interval.
pub fn sample_admissible(family: Family, u_c: f64, u_beta: f64) -> (f64, f64) {
    let (c_lo, c_hi) = match family {
        Family::DnSuperluminal | Family::CnSuperluminal => (1.05, 3.0),
        Family::SnSubluminal => (0.0, 0.95),
        Family::SnComplexStanding => (0.0, 3.0),
    };
    let c = c_lo + u_c.clamp(0.0, 1.0) * (c_hi - c_lo);
    let (lo, hi) = family.amplitude_range(c);
    let hi = if hi.is_finite() { hi } else { 3.0 * lo };
    let beta = lo + (0.05 + 0.9 * u_beta.clamp(0.0, 1.0)) * (hi - lo);
    let period = period_of(family, beta, c).expect("sampled amplitude lies inside its interval");
    (period, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::complete_k;
    use proptest::prelude::*;

    const FOUR_PI: f64 = 4.0 * PI;
    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            let json = serde_json::to_string(&f).unwrap();
            assert_eq!(json, format!("\"{}\"", f.name()));
        }
        assert!("kink".parse::<Family>().is_err());
    }

    #[test]
    fn interval_examples() {
        let sn = admissible_speeds(Family::SnSubluminal, FOUR_PI).unwrap();
        assert_eq!((sn.lo, sn.hi), (0.0, 1.0));
        assert!(sn.contains(0.0));
        let dn = admissible_speeds(Family::DnSuperluminal, TWO_PI).unwrap();
        assert_eq!(dn.lo, 1.0);
        assert!((dn.hi - 3f64.sqrt()).abs() < 1e-15);
        let cx = admissible_speeds(Family::SnComplexStanding, PI).unwrap();
        assert!((cx.lo - 3f64.sqrt()).abs() < 1e-14);
        assert!(cx.hi.is_infinite());
        let cx = admissible_speeds(Family::SnComplexStanding, 0.5 * PI).unwrap();
        assert!((cx.lo - 15f64.sqrt()).abs() < 1e-14);
        assert!(admissible_speeds(Family::CnSuperluminal, 0.0).is_err());
        assert!(admissible_speeds(Family::CnSuperluminal, -1.0).is_err());
    }

    #[test]
    fn zero_speed_needs_long_period() {
        assert!(!admissible_speeds(Family::SnSubluminal, TWO_PI).unwrap().contains(0.0));
        assert!(admissible_speeds(Family::SnSubluminal, TWO_PI + 1e-9).unwrap().contains(0.0));
        assert!(admissible_speeds(Family::SnComplexStanding, TWO_PI + 1e-9).unwrap().contains(0.0));
        match solve_family(Family::SnSubluminal, TWO_PI, 0.0) {
            Err(e @ Error::Regime { .. }) => assert!(e.to_string().contains("(0, 1)")),
            other => panic!("expected regime error, got {other:?}"),
        }
    }

    #[test]
    fn superluminal_rejects_slow_speeds() {
        assert!(matches!(solve_family(Family::DnSuperluminal, TWO_PI, 0.5), Err(Error::Regime { .. })));
        assert!(matches!(solve_family(Family::CnSuperluminal, TWO_PI, 1.0), Err(Error::Regime { .. })));
    }

    #[test]
    fn stationary_snoidal_four_pi() {
        let p = solve_family(Family::SnSubluminal, FOUR_PI, 0.0).unwrap();
        assert!(p.beta1 > 1.0 && p.beta1 < SQRT_2);
        let kk = complete_k(p.kappa).unwrap();
        assert!((4.0 * SQRT_2 / p.beta1 * kk - FOUR_PI).abs() < 1e-10 * FOUR_PI);
        p.validate().unwrap();
        // Frozen from the bisection; the period identity above is the oracle.
        assert!((p.beta1 - 1.046_200_688_768_47).abs() < 1e-8, "beta1 = {}", p.beta1);
    }

    #[test]
    fn dnoidal_two_pi() {
        let p = solve_family(Family::DnSuperluminal, TWO_PI, 1.2).unwrap();
        let k2 = 2.0 * (p.beta1 * p.beta1 - 1.0) / (p.beta1 * p.beta1);
        assert!((p.kappa * p.kappa - k2).abs() < 1e-14);
        let t = 2.0 * (2.0 * 0.44f64).sqrt() / p.beta1 * complete_k(p.kappa).unwrap();
        assert!((t - TWO_PI).abs() < 1e-10 * TWO_PI);
    }

    #[test]
    fn period_limits_at_small_modulus() {
        let c: f64 = 1.3;
        let w = c * c - 1.0;
        let dn = period_of(Family::DnSuperluminal, 1.0 + 1e-10, c).unwrap();
        assert!((dn - PI * (2.0 * w).sqrt()).abs() < 1e-8);
        let c: f64 = 0.4;
        let sn = period_of(Family::SnSubluminal, SQRT_2 - 1e-12, c).unwrap();
        assert!((sn - TWO_PI * (1.0 - c * c).sqrt()).abs() < 1e-8);
        let c: f64 = 0.7;
        let wc = 1.0 + c * c;
        let cx = period_of(Family::SnComplexStanding, (2.0 * wc).sqrt() * (1.0 - 1e-13), c).unwrap();
        assert!((cx - TWO_PI / wc.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn period_of_rejects_out_of_range() {
        assert!(period_of(Family::SnSubluminal, 0.9, 0.5).is_err());
        assert!(period_of(Family::SnSubluminal, 1.2, 1.5).is_err());
        assert!(period_of(Family::CnSuperluminal, 1.2, 1.5).is_err());
        assert!(period_of(Family::DnSuperluminal, 1.2, 0.5).is_err());
    }

    #[test]
    fn profile_anchor_values() {
        let sn = solve_family(Family::SnSubluminal, FOUR_PI, 0.5).unwrap();
        assert!(sn.profile(0.5 * 2.0, 2.0).norm() < 1e-15);
        let dn = solve_family(Family::DnSuperluminal, TWO_PI, 1.2).unwrap();
        assert!((dn.profile(1.2 * 3.0, 3.0).re - dn.beta1).abs() < 1e-14);
        let cx = solve_family(Family::SnComplexStanding, TWO_PI, 1.0).unwrap();
        let z = cx.profile(0.3, 0.9);
        assert!((z.arg() - 0.9).abs() < 1e-14 || (z.arg() - 0.9 + PI).abs() < 1e-14);
    }

    #[test]
    fn residuals_small_for_all_families() {
        let cases = [
            (Family::DnSuperluminal, TWO_PI, 1.2),
            (Family::CnSuperluminal, TWO_PI, 1.5),
            (Family::SnSubluminal, FOUR_PI, 0.5),
            (Family::SnComplexStanding, TWO_PI, 1.0),
        ];
        for (fam, l, c) in cases {
            let p = solve_family(fam, l, c).unwrap();
            let scale = p.beta1.powi(3).max(1.0);
            assert!(p.ode_residual(256).unwrap() <= 1e-8 * scale, "{fam}");
            assert!(p.quadrature_residual(256).unwrap() <= 1e-8, "{fam}");
        }
    }

    #[test]
    fn corrupted_amplitude_is_detected() {
        for (fam, l, c) in [
            (Family::SnSubluminal, FOUR_PI, 0.5),
            (Family::DnSuperluminal, TWO_PI, 1.2),
            (Family::CnSuperluminal, TWO_PI, 1.5),
            (Family::SnComplexStanding, TWO_PI, 1.0),
        ] {
            let mut p = solve_family(fam, l, c).unwrap();
            p.beta1 += 1e-3;
            assert!(p.ode_residual(256).unwrap() > 1e-4, "{fam}");
            assert!(p.validate().is_err());
        }
    }

    #[test]
    fn dn_integration_constant_from_fit() {
        let p = solve_family(Family::DnSuperluminal, TWO_PI, 1.2).unwrap();
        let a = p.fit_integration_constant(256);
        assert!((-4.0 * a - p.beta1.powi(2) * p.beta2.powi(2)).abs() < 1e-10);
        assert!(-a > 0.0 && -a < 0.25);
    }

    #[test]
    fn turning_points_are_roots() {
        let dn = solve_family(Family::DnSuperluminal, TWO_PI, 1.2).unwrap();
        assert!(dn.turning_polynomial(dn.beta1).abs() < 1e-10);
        let sn = solve_family(Family::SnSubluminal, FOUR_PI, 0.5).unwrap();
        let top = sn.real_profile(sn.period / 4.0);
        assert!(sn.turning_polynomial(top).abs() < 1e-10);
    }

    #[test]
    fn kink_limit() {
        let p = solve_family(Family::SnSubluminal, 40.0, 0.0).unwrap();
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            assert!((p.real_profile(x) - (x / SQRT_2).tanh()).abs() < 1e-3, "x = {x}");
        }
    }

    #[test]
    fn kappa_slope_formula() {
        for i in 0..=20 {
            let b = 1.05 + 0.35 * i as f64 / 20.0;
            let h = 1e-6;
            let kap = |b: f64| shape(Family::SnSubluminal, b, 0.3).kappa;
            let fd = (kap(b + h) - kap(b - h)) / (2.0 * h);
            let exact = -2.0 / (b * b * (2.0 - b * b).sqrt());
            assert!(((fd - exact) / exact).abs() < 1e-6);
        }
    }

    #[test]
    fn amplitude_slopes_in_speed() {
        for &c in &[0.1, 0.4, 0.7, 0.9] {
            let a = solve_family(Family::SnSubluminal, FOUR_PI, c).unwrap().beta1;
            let b = solve_family(Family::SnSubluminal, FOUR_PI, c + 1e-3).unwrap().beta1;
            assert!(b < a);
        }
        for &c in &[0.2, 1.0, 2.0] {
            let a = solve_family(Family::SnComplexStanding, TWO_PI, c).unwrap().beta1;
            let b = solve_family(Family::SnComplexStanding, TWO_PI, c + 1e-3).unwrap().beta1;
            assert!(b > a);
        }
    }

    #[test]
    fn curves_are_continuous() {
        let base = solve_family(Family::SnSubluminal, FOUR_PI, 0.5).unwrap().beta1;
        let mut prev = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let d = (solve_family(Family::SnSubluminal, FOUR_PI, 0.5 + h).unwrap().beta1 - base).abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn negative_speed_mirrors_positive() {
        let p = solve_family(Family::SnSubluminal, FOUR_PI, 0.5).unwrap();
        let q = solve_family(Family::SnSubluminal, FOUR_PI, -0.5).unwrap();
        assert_eq!(p.beta1, q.beta1);
        assert_eq!(p.profile(1.0, 2.0), q.profile(1.0, -2.0));
        assert!(q.ode_residual(64).unwrap() < 1e-8);
    }

    #[test]
    fn json_uses_flat_keys() {
        let p = solve_family(Family::CnSuperluminal, TWO_PI, 1.5).unwrap();
        let v: serde_json::Value = serde_json::to_value(p).unwrap();
        let mut keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["A", "L", "beta1", "beta2", "c", "ell", "family", "kappa", "omega"]);
        let back: WaveParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    fn monotone_sign(fam: Family) -> f64 {
        if fam == Family::DnSuperluminal {
            1.0
        } else {
            -1.0
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solve_round_trips(fam_ix in 0usize..4, uc in 0.0f64..1.0, ub in 0.0f64..1.0) {
            let fam = Family::ALL[fam_ix];
            let (l, c) = sample_admissible(fam, uc, ub);
            let p = solve_family(fam, l, c).unwrap();
            let t = period_of(fam, p.amplitude_parameter(), c).unwrap();
            prop_assert!((t - l).abs() <= 1e-10 * l);
            prop_assert!(p.ode_residual(128).unwrap() <= 1e-8 * p.beta1.powi(3).max(1.0));
            prop_assert!((p.profile(0.37 + l, 0.2) - p.profile(0.37, 0.2)).norm() <= 1e-10);
        }

        #[test]
        fn period_maps_are_monotone(fam_ix in 0usize..4, u in 0.01f64..0.99) {
            let fam = Family::ALL[fam_ix];
            let c = match fam {
                Family::DnSuperluminal => 1.2,
                Family::CnSuperluminal => 1.5,
                Family::SnSubluminal => 0.5,
                Family::SnComplexStanding => 1.0,
            };
            let (lo, hi) = fam.amplitude_range(c);
            let hi = if hi.is_finite() { hi } else { 6.0 };
            let b = lo + u * (hi - lo);
            let h = 1e-6 * (hi - lo);
            let slope = (period_of(fam, b + h, c).unwrap() - period_of(fam, b - h, c).unwrap()) / (2.0 * h);
            prop_assert!(slope * monotone_sign(fam) > 0.0);
        }
    }
}
