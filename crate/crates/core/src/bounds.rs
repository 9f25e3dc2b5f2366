//! Constants parameterizing a run: the area constant `C`, the scale `δ` and the
//! weight budget `W = ⌊K(C + 1)⌋`.
//!
//! The bounds are open (`C > max{C', 2π(2g − 2)}`, `δ < min{δ₁, δ₀/8}`);
//! a margin factor turns them into concrete values.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MARGIN: f64 = 0.99;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("{name} must be positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("genus must be at least 1")]
    Genus,
    #[error("margin must lie strictly between 0 and 1, got {0}")]
    Margin(f64),
    #[error("K must exceed 1, got {0}")]
    KTooSmall(f64),
    #[error("budget {0} does not fit an integer weight")]
    Overflow(f64),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed bounds config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

fn positive(name: &'static str, value: f64) -> Result<f64, BoundsError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BoundsError::NotPositive { name, value })
    }
}

fn check_margin(margin: f64) -> Result<f64, BoundsError> {
    if margin > 0.0 && margin < 1.0 {
        Ok(margin)
    } else {
        Err(BoundsError::Margin(margin))
    }
}

/// `max{C', 2π(2g − 2)} · (1 + (1 − margin))`.
pub fn area_constant(genus: u32, sweepout_max_area: f64, margin: f64) -> Result<f64, BoundsError> {
    if genus == 0 {
        return Err(BoundsError::Genus);
    }
    let c_prime = positive("sweepout_max_area", sweepout_max_area)?;
    let margin = check_margin(margin)?;
    let surface_term = 2.0 * PI * (2.0 * genus as f64 - 2.0);
    Ok(c_prime.max(surface_term) * (2.0 - margin))
}

/// `margin · min{δ₁, δ₀/8}`.
pub fn delta_constant(
    injectivity_radius: f64,
    compression_floor: f64,
    margin: f64,
) -> Result<f64, BoundsError> {
    let d0 = positive("injectivity_radius", injectivity_radius)?;
    let d1 = positive("compression_diameter_floor", compression_floor)?;
    Ok(check_margin(margin)? * d1.min(d0 / 8.0))
}

/// `⌊K(C + 1)⌋`.
pub fn weight_budget(k: f64, c: f64) -> Result<usize, BoundsError> {
    if !k.is_finite() || k <= 1.0 {
        return Err(BoundsError::KTooSmall(k));
    }
    let c = positive("C", c)?;
    let w = (k * (c + 1.0)).floor();
    if w >= usize::MAX as f64 {
        return Err(BoundsError::Overflow(w));
    }
    Ok(w as usize)
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

/// Geometric inputs, read from a TOML `key = value` file or given as flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub genus: u32,
    pub sweepout_max_area: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub injectivity_radius: f64,
    pub compression_diameter_floor: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    #[serde(rename = "C")]
    pub c: f64,
    pub delta: f64,
    #[serde(rename = "W")]
    pub w: usize,
}

impl BoundsConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn compute(&self) -> Result<Bounds, BoundsError> {
        let c = area_constant(self.genus, self.sweepout_max_area, self.margin)?;
        let delta = delta_constant(
            self.injectivity_radius,
            self.compression_diameter_floor,
            self.margin,
        )?;
        let w = weight_budget(self.k, c)?;
        Ok(Bounds { c, delta, w })
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn area_examples() {
        let c = area_constant(2, 1.0, DEFAULT_MARGIN).unwrap();
        assert!((c - 4.0 * PI * 1.01).abs() < 1e-9);
        assert!((c - 12.692).abs() < 1e-3);
        assert!((area_constant(1, 5.0, DEFAULT_MARGIN).unwrap() - 5.05).abs() < 1e-9);
        assert!((area_constant(3, 1.0, DEFAULT_MARGIN).unwrap() - 8.0 * PI * 1.01).abs() < 1e-9);
    }

    #[test]
    fn delta_examples() {
        assert!((delta_constant(8.0, 2.0, DEFAULT_MARGIN).unwrap() - 0.99).abs() < 1e-12);
        assert!((delta_constant(0.8, 10.0, DEFAULT_MARGIN).unwrap() - 0.099).abs() < 1e-12);
        assert!((delta_constant(16.0, 2.0, DEFAULT_MARGIN).unwrap() - 0.99 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn budget_examples() {
        let c = area_constant(2, 1.0, DEFAULT_MARGIN).unwrap();
        assert_eq!(weight_budget(2.0, c), Ok(27));
        assert_eq!(weight_budget(1.5, 1.0), Ok(3));
        assert_eq!(weight_budget(1.0, 1.0), Err(BoundsError::KTooSmall(1.0)));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            area_constant(0, 1.0, DEFAULT_MARGIN),
            Err(BoundsError::Genus)
        );
        assert!(area_constant(2, -1.0, DEFAULT_MARGIN).is_err());
        assert!(area_constant(2, 1.0, 1.0).is_err());
        assert!(delta_constant(0.0, 1.0, DEFAULT_MARGIN).is_err());
        assert!(weight_budget(2.0, f64::NAN).is_err());
    }

    #[test]
    fn config_file() {
        let cfg = BoundsConfig::parse(
            "genus = 2\nsweepout_max_area = 1.0\nK = 2.0\ninjectivity_radius = 8.0\ncompression_diameter_floor = 2.0\n",
        )
        .unwrap();
        assert_eq!(cfg.margin, DEFAULT_MARGIN);
        let b = cfg.compute().unwrap();
        assert_eq!(b.w, 27);
        assert!((b.delta - 0.99).abs() < 1e-12);
        assert!(BoundsConfig::parse("genus = 2\n").is_err());
        assert!(BoundsConfig::parse("genus = 2\nbogus = 1\n").is_err());
    }

    proptest! {
        #[test]
        fn strict_bounds(g in 1u32..20, cp in 0.01f64..500.0, d0 in 0.01f64..50.0, d1 in 0.01f64..50.0, m in 0.5f64..0.999) {
            let c = area_constant(g, cp, m).unwrap();
            prop_assert!(c > cp.max(2.0 * PI * (2.0 * g as f64 - 2.0)));
            prop_assert!(delta_constant(d0, d1, m).unwrap() < d1.min(d0 / 8.0));
        }

        #[test]
        fn budget_is_monotone(k in 1.001f64..10.0, c in 0.01f64..100.0, dk in 0.0f64..5.0, dc in 0.0f64..5.0) {
            let w = weight_budget(k, c).unwrap();
            prop_assert!(w <= weight_budget(k, c + 1.0).unwrap());
            prop_assert!(w <= weight_budget(k + dk, c + dc).unwrap());
        }
    }
}
