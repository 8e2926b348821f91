//! Numeric flag values: plain decimals or multiples of π (`4pi`, `0.5π`, `pi`).

use std::f64::consts::PI;

pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let body = t.strip_suffix("pi").or_else(|| t.strip_suffix('π'));
    let value = match body {
        Some(m) => {
            let m = m.trim_end_matches('*');
            let mult = match m {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => m.parse::<f64>().map_err(|_| format!("invalid multiple of pi: '{s}'"))?,
            };
            mult * PI
        }
        None => t.parse::<f64>().map_err(|_| format!("invalid number: '{s}'"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("number must be finite: '{s}'"))
    }
}

/// `lo:hi:n`, `n` equally spaced points including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpeedGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl SpeedGrid {
    pub fn points(&self) -> Vec<f64> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<SpeedGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected lo:hi:n, got '{s}'"));
    };
    let n: usize = n.trim().parse().map_err(|_| format!("invalid point count in '{s}'"))?;
    if n == 0 {
        return Err("the speed grid is empty".into());
    }
    let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
    if n > 1 && !(lo < hi) {
        return Err(format!("grid needs lo < hi, got '{s}'"));
    }
    Ok(SpeedGrid { lo, hi, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_and_pi_multiples() {
        assert_eq!(parse_number("0.5").unwrap(), 0.5);
        assert_eq!(parse_number("4pi").unwrap(), 4.0 * PI);
        assert_eq!(parse_number("4*pi").unwrap(), 4.0 * PI);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("-pi").unwrap(), -PI);
        assert_eq!(parse_number("0.5π").unwrap(), 0.5 * PI);
        assert_eq!(parse_number("1e-3").unwrap(), 1e-3);
        assert!(parse_number("4p").is_err());
        assert!(parse_number("xpi").is_err());
        assert!(parse_number("inf").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("0.1:0.9:9").unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 9);
        assert!((pts[4] - 0.5).abs() < 1e-15);
        assert_eq!(pts[8], 0.9);
        assert_eq!(parse_grid("1:1:1").unwrap().points(), vec![1.0]);
        assert!(parse_grid("0.1:0.9:0").is_err());
        assert!(parse_grid("0.9:0.1:3").is_err());
        assert!(parse_grid("0.1:0.9").is_err());
    }
}
