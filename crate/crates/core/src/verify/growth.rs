use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of a quantity truncated at increasing radii, stored as `ln R` so
/// that radii like `2^(2^32)` stay representable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationSweep {
    pub quantity: String,
    pub ln_radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl TruncationSweep {
    pub fn new(quantity: impl Into<String>, ln_radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ln_radii.len() != values.len() {
            return Err(Error::InvalidParameter(format!("{} radii but {} values", ln_radii.len(), values.len())));
        }
        if ln_radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("sweep radii must increase".into()));
        }
        Ok(TruncationSweep { quantity: quantity.into(), ln_radii, values })
    }

    /// Sweep over the default octave radii `{8, ..., 256}`.
    pub fn octaves(quantity: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let radii = (3..3 + values.len()).map(|j| j as f64 * std::f64::consts::LN_2).collect();
        TruncationSweep::new(quantity, radii, values)
    }

    pub fn increments(&self) -> Vec<f64> {
        let scale = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        self.values
            .windows(2)
            .map(|w| {
                let d = (w[1] - w[0]).abs();
                if d <= 1e-12 * scale {
                    0.0
                } else {
                    d
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrowthClass {
    Convergent,
    LogDivergent,
    PolyDivergent,
    Undecided,
}

impl GrowthClass {
    pub fn is_divergent(&self) -> bool {
        matches!(self, GrowthClass::LogDivergent | GrowthClass::PolyDivergent)
    }
}

/// Convergent: all increments vanish, or the last increment is at most half
/// the previous one. LogDivergent: every increment within `[0.5, 2]` of the
/// median. PolyDivergent: the last two increment ratios are at least 1.
pub fn classify_growth(s: &TruncationSweep) -> Result<GrowthClass> {
    if s.values.len() < 4 {
        return Err(Error::TooFewPoints { need: 4, got: s.values.len() });
    }
    let inc = s.increments();
    let n = inc.len();
    let (last, prev) = (inc[n - 1], inc[n - 2]);
    if last == 0.0 || last <= 0.5 * prev {
        return Ok(GrowthClass::Convergent);
    }
    let mut sorted = inc.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[n / 2];
    if median > 0.0 && inc.iter().all(|&d| d >= 0.5 * median && d <= 2.0 * median) {
        return Ok(GrowthClass::LogDivergent);
    }
    let ratio = |a: f64, b: f64| if a == 0.0 { f64::INFINITY } else { b / a };
    if ratio(inc[n - 3], prev) >= 1.0 && ratio(prev, last) >= 1.0 {
        return Ok(GrowthClass::PolyDivergent);
    }
    Ok(GrowthClass::Undecided)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(v: &[f64]) -> GrowthClass {
        classify_growth(&TruncationSweep::octaves("q", v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(class(&[1.0, 1.5, 1.75, 1.875, 1.9375]), GrowthClass::Convergent);
        assert_eq!(class(&[1.0, 2.0, 3.0, 4.0, 5.0]), GrowthClass::LogDivergent);
        assert_eq!(class(&[1.0, 1.0, 1.0, 1.0]), GrowthClass::Convergent);
        assert_eq!(class(&[1.0, 2.0, 4.0, 8.0, 16.0]), GrowthClass::PolyDivergent);
        assert_eq!(class(&[1.0, 2.0, 2.1, 2.8, 3.3]), GrowthClass::Undecided);
    }

    #[test]
    fn too_few_points() {
        let s = TruncationSweep::octaves("q", vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(classify_growth(&s), Err(Error::TooFewPoints { need: 4, got: 3 })));
    }
}
