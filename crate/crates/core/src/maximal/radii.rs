use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusPreset {
    /// `2^{j/4} h`, `j = 0, 1, ...`
    #[default]
    QuarterOctave,
    /// `j h / 4`, `j = 1, 2, ...`
    Dense,
}

impl FromStr for RadiusPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quarter-octave" => Ok(RadiusPreset::QuarterOctave),
            "dense" => Ok(RadiusPreset::Dense),
            _ => Err(Error::InvalidParameter(format!("unknown radius preset `{s}`"))),
        }
    }
}

impl fmt::Display for RadiusPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadiusPreset::QuarterOctave => "quarter-octave",
            RadiusPreset::Dense => "dense",
        })
    }
}

/// Radii for ball averages, or scales for kernel dilations.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSet {
    radii: Vec<f64>,
    include_single_cell: bool,
    local_only: bool,
}

impl RadiusSet {
    /// `radii` must be positive and strictly increasing; local sets stop at 1.
    pub fn new(radii: Vec<f64>, include_single_cell: bool, local_only: bool) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyRadiusSet);
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidRadii("radii must be positive and finite".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRadii("radii must be strictly increasing".into()));
        }
        if local_only && *radii.last().unwrap() > 1.0 {
            return Err(Error::InvalidRadii("local radii must not exceed 1".into()));
        }
        Ok(RadiusSet { radii, include_single_cell, local_only })
    }

    pub fn quarter_octave(spec: &GridSpec, local: bool) -> Self {
        let cap = cap(spec, local);
        let h = spec.step();
        let radii = (0..).map(|j: i32| h * (j as f64 / 4.0).exp2()).take_while(|&r| r <= cap).collect();
        RadiusSet { radii, include_single_cell: true, local_only: local }
    }

    pub fn dense(spec: &GridSpec, local: bool) -> Self {
        let cap = cap(spec, local);
        let q = spec.step() / 4.0;
        let radii = (1..).map(|j: u64| j as f64 * q).take_while(|&r| r <= cap).collect();
        RadiusSet { radii, include_single_cell: true, local_only: local }
    }

    pub fn preset(spec: &GridSpec, preset: RadiusPreset, local: bool) -> Self {
        match preset {
            RadiusPreset::QuarterOctave => RadiusSet::quarter_octave(spec, local),
            RadiusPreset::Dense => RadiusSet::dense(spec, local),
        }
    }

    /// Drops radii below `min`.
    pub fn at_least(&self, min: f64) -> Result<Self> {
        let radii = self.radii.iter().copied().filter(|&r| r >= min).collect();
        RadiusSet::new(radii, self.include_single_cell, self.local_only)
    }

    /// Drops radii above `max`.
    pub fn at_most(&self, max: f64) -> Result<Self> {
        let radii = self.radii.iter().copied().filter(|&r| r <= max).collect();
        RadiusSet::new(radii, self.include_single_cell, self.local_only)
    }

    pub fn with_single_cell(mut self, on: bool) -> Self {
        self.include_single_cell = on;
        self
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn include_single_cell(&self) -> bool {
        self.include_single_cell
    }

    pub fn local_only(&self) -> bool {
        self.local_only
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

fn cap(spec: &GridSpec, local: bool) -> f64 {
    if local {
        1.0
    } else {
        spec.diameter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_sets() {
        let s = GridSpec::new(1, 4, 16).unwrap();
        for local in [false, true] {
            for p in [RadiusPreset::QuarterOctave, RadiusPreset::Dense] {
                let r = RadiusSet::preset(&s, p, local);
                assert!(RadiusSet::new(r.radii().to_vec(), true, local).is_ok());
            }
        }
    }

    #[test]
    fn local_quarter_octave_ends_at_one() {
        let s = GridSpec::new(2, 4, 64).unwrap();
        let r = RadiusSet::quarter_octave(&s, true);
        assert_eq!(r.radii()[0], 1.0 / 64.0);
        assert_eq!(*r.radii().last().unwrap(), 1.0);
        assert_eq!(r.len(), 25);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(RadiusSet::new(vec![], true, false), Err(Error::EmptyRadiusSet)));
        assert!(RadiusSet::new(vec![1.0, 1.0], true, false).is_err());
        assert!(RadiusSet::new(vec![0.5, 2.0], true, true).is_err());
        assert!(RadiusSet::new(vec![-0.5], true, false).is_err());
    }
}
