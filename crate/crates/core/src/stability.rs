//! The scalar function `d(c)` along the snoidal curves and the resulting
//! stability classification.
//!
//! `d'(c)` is `−c` times a closed-form elliptic-integral expression (the
//! momentum integral for the real wave, the charge integral for the standing
//! wave); `d''(c)` is a central difference of `d'`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::PeriodicGrid;
use crate::spectral::{block_operator, build_hill, eigensolve, odd_projection, BlockKind, HillLabel};
use crate::wave_families::{admissible_speeds, solve_family, Family, WaveParams};

/// Grid size for the spectral counts inside [`classify`].
pub const CLASSIFY_N: usize = 128;
const RICHARDSON_REL_TOL: f64 = 1e-4;

fn ke(p: &WaveParams) -> Result<(f64, f64)> {
    let m = p.modulus();
    Ok((m.complete_k()?, m.complete_e()))
}

/// `∫₀ᴸ (φ')²` for the sub-luminal snoidal wave: `(32K/3L)(E + (1−β₁²)K)`.
pub fn momentum_integral_sn(c: f64, period: f64) -> Result<f64> {
    let p = solve_family(Family::SnSubluminal, period, c)?;
    let (k, e) = ke(&p)?;
    Ok(32.0 * k / (3.0 * period) * (e + (1.0 - p.beta1 * p.beta1) * k))
}

/// `∫₀ᴸ ψ²` for the standing snoidal wave: `(32/L)(K−E)K`.
pub fn charge_integral_complex(c: f64, period: f64) -> Result<f64> {
    let p = solve_family(Family::SnComplexStanding, period, c)?;
    let (k, e) = ke(&p)?;
    Ok(32.0 / period * (k - e) * k)
}

/// The same integrals by the rectangle rule on `n` grid points.
pub fn integral_by_grid(family: Family, c: f64, period: f64, n: usize) -> Result<f64> {
    let p = solve_family(family, period, c)?;
    let grid = PeriodicGrid::new(n, period)?;
    let vals: Vec<f64> = match family {
        Family::SnSubluminal => grid.points().iter().map(|&x| p.real_profile_dx(x).powi(2)).collect(),
        Family::SnComplexStanding => grid.points().iter().map(|&x| p.real_profile(x).powi(2)).collect(),
        other => return Err(Error::UnsupportedFamily(other)),
    };
    Ok(grid.integrate(&vals))
}

pub fn d_prime(family: Family, c: f64, period: f64) -> Result<f64> {
    match family {
        Family::SnSubluminal => Ok(-c * momentum_integral_sn(c, period)?),
        Family::SnComplexStanding => Ok(-c * charge_integral_complex(c, period)?),
        other => Err(Error::UnsupportedFamily(other)),
    }
}

/// `d''(c)` with the step and its halved-step Richardson companion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondDerivative {
    pub value: f64,
    pub half_step_value: f64,
    pub h: f64,
}

impl SecondDerivative {
    pub fn relative_change(&self) -> f64 {
        ((self.value - self.half_step_value) / self.half_step_value).abs()
    }

    pub fn is_consistent(&self) -> bool {
        self.relative_change() <= RICHARDSON_REL_TOL
    }
}

/// Default stencil: `1e-4` times the interval width (or `max(1, |c|)` when the
/// interval is unbounded), shrunk to stay inside the admissible interval.
pub fn default_step(family: Family, c: f64, period: f64) -> Result<f64> {
    let iv = admissible_speeds(family, period)?;
    let width = if iv.hi.is_finite() { iv.hi - if iv.admits_zero() { 0.0 } else { iv.lo } } else { c.abs().max(1.0) };
    let mut h = 1e-4 * width;
    let room_hi = iv.hi - c.abs();
    let room_lo = if iv.admits_zero() { f64::INFINITY } else { c.abs() - iv.lo };
    h = h.min(0.25 * room_hi).min(0.25 * room_lo);
    Ok(h)
}

fn stencil_check(family: Family, c: f64, period: f64, h: f64) -> Result<()> {
    let iv = admissible_speeds(family, period)?;
    for x in [c - h, c + h] {
        if !iv.contains(x) {
            return Err(Error::Regime {
                family,
                c: x,
                period,
                interval: iv,
                hint: format!("; the d'' stencil c ± {h} leaves the admissible interval"),
            });
        }
    }
    Ok(())
}

fn central(f: &dyn Fn(f64) -> Result<f64>, c: f64, h: f64) -> Result<f64> {
    Ok((f(c + h)? - f(c - h)?) / (2.0 * h))
}

pub fn d_second(family: Family, c: f64, period: f64, h: f64) -> Result<f64> {
    Ok(d_second_checked(family, c, period, h)?.value)
}

pub fn d_second_checked(family: Family, c: f64, period: f64, h: f64) -> Result<SecondDerivative> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("stencil step h = {h} must be positive")));
    }
    if family.is_superluminal() {
        return Err(Error::UnsupportedFamily(family));
    }
    stencil_check(family, c, period, h)?;
    let f = |x: f64| d_prime(family, x, period);
    Ok(SecondDerivative { value: central(&f, c, h)?, half_step_value: central(&f, c, 0.5 * h)?, h })
}

/// `d''(c)` from differentiating grid quadratures instead of the closed forms.
pub fn d_second_by_grid(family: Family, c: f64, period: f64, h: f64, n: usize) -> Result<f64> {
    stencil_check(family, c, period, h)?;
    let f = |x: f64| Ok(-x * integral_by_grid(family, x, period, n)?);
    central(&f, c, h)
}

/// `3β₂²/(4+3β₂²)` for the stationary snoidal wave of period `L`.
pub fn coercivity_constant(period: f64) -> Result<f64> {
    let p = solve_family(Family::SnSubluminal, period, 0.0)?;
    let b = 3.0 * p.beta2 * p.beta2;
    Ok(b / (4.0 + b))
}

/// Outcome of testing `⟨Lυ, υ⟩ ≥ λ²‖υ‖²_{H¹}` on random odd functions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoercivityCheck {
    pub constant: f64,
    /// `min ⟨Lυ,υ⟩ − λ²‖υ‖²_{H¹}` over samples normalised to `‖υ‖_{H¹} = 1`.
    pub min_margin: f64,
    /// Smallest observed ratio `⟨Lυ,υ⟩ / ‖υ‖²_{H¹}`.
    pub min_ratio: f64,
    pub samples: usize,
}

/// Random odd band-limited trial functions `Σ aₘ sin(2πmx/L)`, `m ≤ modes`.
pub fn coercivity_margin(period: f64, n: usize, samples: usize, modes: usize, seed: u64) -> Result<CoercivityCheck> {
    if modes == 0 || modes >= n / 2 {
        return Err(Error::domain(format!("band limit {modes} must lie in 1..{}", n / 2)));
    }
    let constant = coercivity_constant(period)?;
    let p = solve_family(Family::SnSubluminal, period, 0.0)?;
    let op = build_hill(&p, HillLabel::SnReal, n)?;
    let grid = PeriodicGrid::new(n, period)?;
    let xs = grid.points();
    let h = grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut min_margin, mut min_ratio) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..samples {
        let coeffs: Vec<f64> = (1..=modes).map(|m| rng.gen_range(-1.0..1.0) / m as f64).collect();
        let v: Vec<f64> = xs
            .iter()
            .map(|&x| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * (2.0 * std::f64::consts::PI * (j + 1) as f64 * x / period).sin())
                    .sum()
            })
            .collect();
        let lv = op.apply(&v)?;
        let form = h * v.iter().zip(&lv).map(|(a, b)| a * b).sum::<f64>();
        let dv = grid.derivative_real(&v);
        let h1 = h * v.iter().zip(&dv).map(|(a, b)| a * a + b * b).sum::<f64>();
        min_margin = min_margin.min((form - constant * h1) / h1);
        min_ratio = min_ratio.min(form / h1);
    }
    Ok(CoercivityCheck { constant, min_margin, min_ratio, samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unstable,
    StableOddSector,
    StableOddSectorComplex,
    Unclassified,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Unstable => "Unstable",
            Verdict::StableOddSector => "StableOddSector",
            Verdict::StableOddSectorComplex => "StableOddSectorComplex",
            Verdict::Unclassified => "Unclassified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub family: Family,
    pub c: f64,
    #[serde(rename = "L")]
    pub period: f64,
    pub d_prime: Option<f64>,
    pub d_second: Option<f64>,
    pub n_restricted: usize,
    pub p_dsecond: usize,
    pub verdict: Verdict,
    /// Coercivity constant, reported for the stationary real wave.
    pub coercivity: Option<f64>,
}

impl StabilityReport {
    pub const CSV_HEADER: &'static str = "family,c,L,d_prime,d_second,n_restricted,verdict";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.family,
            self.c,
            self.period,
            opt(self.d_prime),
            opt(self.d_second),
            self.n_restricted,
            self.verdict.name()
        )
    }
}

fn negatives(m: &crate::linalg::SymMatrix, label: &str) -> Result<usize> {
    Ok(eigensolve(m, 1, label)?.negative_count)
}

pub fn classify(family: Family, c: f64, period: f64) -> Result<StabilityReport> {
    let p = solve_family(family, period, c)?;
    if family.is_superluminal() {
        let label = if family == Family::DnSuperluminal { HillLabel::Dn } else { HillLabel::Cn };
        let m = build_hill(&p, label, CLASSIFY_N)?.matrix()?;
        return Ok(StabilityReport {
            family,
            c,
            period,
            d_prime: None,
            d_second: None,
            n_restricted: negatives(&m, label.name())?,
            p_dsecond: 0,
            verdict: Verdict::Unclassified,
            coercivity: None,
        });
    }

    let dp = d_prime(family, c, period)?;
    let dd = d_second(family, c, period, default_step(family, c, period)?)?;
    let p_dsecond = usize::from(dd > 0.0);
    let (n_restricted, verdict, coercivity) = match family {
        Family::SnSubluminal if c == 0.0 => {
            let m = build_hill(&p, HillLabel::SnReal, CLASSIFY_N)?.matrix()?;
            let n = negatives(&odd_projection(&m, 1), "L_sn_real/odd")?;
            let v = if n == p_dsecond { Verdict::StableOddSector } else { Verdict::Unclassified };
            (n, v, Some(coercivity_constant(period)?))
        }
        Family::SnSubluminal => {
            let m = build_hill(&p, HillLabel::SnReal, CLASSIFY_N)?.matrix()?;
            let n = negatives(&m, "L_sn_real")?;
            let v = if (n + p_dsecond) % 2 == 1 { Verdict::Unstable } else { Verdict::Unclassified };
            (n, v, None)
        }
        _ => {
            let r = build_hill(&p, HillLabel::SnR, CLASSIFY_N)?.matrix()?;
            let i = build_hill(&p, HillLabel::SnI, CLASSIFY_N)?.matrix()?;
            let n = negatives(&odd_projection(&block_operator(&r, c, BlockKind::Real), 2), "L_sn_R/odd")?
                + negatives(&odd_projection(&block_operator(&i, c, BlockKind::Imag), 2), "L_sn_I/odd")?;
            let v = if n == p_dsecond { Verdict::StableOddSectorComplex } else { Verdict::Unclassified };
            (n, v, None)
        }
    };
    Ok(StabilityReport {
        family,
        c,
        period,
        d_prime: Some(dp),
        d_second: Some(dd),
        n_restricted,
        p_dsecond,
        verdict,
        coercivity,
    })
}
