//! Executable experiments: truncation sweeps for finiteness, ratio bands for
//! two-sided comparisons, and exact inequality checks.

pub mod bands;
mod exact;
mod experiments;
mod growth;
mod report;
mod sweeps;

use std::time::Instant;

pub use exact::{brute_dyadic_max, dyadic_exactness, level_checks, level_grid, stein_inequality_suite, LevelCheck};
pub use experiments::{
    consistency, far_atoms, global_h1, global_hlog, hl_oracle, local_h1, local_hlog, membership, omega, psi_calculus,
    psi_tail, ATOM_INDICES,
};
pub use growth::{classify_growth, GrowthClass, TruncationSweep};
pub use report::{write_csv, write_json, write_plot_data, Declared, Report, ReportPoint, Verdict};
pub use sweeps::{classify_condition, condition_on_grid, condition_sweep, membership_of, truncate, OCTAVE_RADII};

use crate::error::{Error, Result};
use crate::maximal::{KernelProfile, RadiusPreset};
use crate::operators::ThetaProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub count: usize,
    pub theta: ThetaProfile,
    pub kernel: KernelProfile,
    pub radii: RadiusPreset,
    /// base grid resolution, cells per unit length
    pub m_base: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            count: 100,
            theta: ThetaProfile::Box,
            kernel: KernelProfile::Bump,
            radii: RadiusPreset::QuarterOctave,
            m_base: 64,
        }
    }
}

pub const SUITES: [&str; 12] = [
    "hl-oracle",
    "dyadic",
    "stein-inequality",
    "psi-calculus",
    "psi-tail",
    "local-h1",
    "global-h1",
    "omega",
    "membership",
    "local-hlog",
    "global-hlog",
    "consistency",
];

/// Runs a named suite, or every suite for `all`. Deterministic given the config.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<Report>> {
    if name == "all" {
        let mut out = Vec::new();
        for s in SUITES {
            out.extend(run_suite(s, cfg)?);
        }
        return Ok(out);
    }
    let start = Instant::now();
    let mut reports = match name {
        "hl-oracle" => vec![hl_oracle(cfg)?],
        "dyadic" => vec![dyadic_exactness(cfg.count, 64, cfg.seed)?],
        "stein-inequality" => vec![stein_inequality_suite(cfg.count, cfg.seed)],
        "psi-calculus" => psi_calculus(),
        "psi-tail" => vec![psi_tail(4.0)?],
        "local-h1" => local_h1(cfg)?,
        "global-h1" => global_h1(cfg)?,
        "omega" => omega()?,
        "membership" => vec![membership(cfg)?],
        "local-hlog" => local_hlog(cfg)?,
        "global-hlog" => global_hlog(cfg)?,
        "consistency" => vec![consistency(cfg)?],
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    let elapsed = start.elapsed().as_secs_f64() / reports.len().max(1) as f64;
    for r in &mut reports {
        r.runtime_s = elapsed;
    }
    Ok(reports)
}
