use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::family::Family;
use crate::error::{Error, Result};
use crate::functionals::{MusielakKind, MusielakSpec};

pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "L1")]
    L1,
    /// `sum_k ∫|f_k|(1 + ln+(|f_k|/mu_k))`
    #[serde(rename = "LlogL-local")]
    LlogLLocal,
    /// `sum_k mu_k ln+(1/mu_k)`
    #[serde(rename = "amalgam")]
    Amalgam,
    #[serde(rename = "stein")]
    Stein,
    #[serde(rename = "eqloglog")]
    EqLogLog,
    #[serde(rename = "loglog")]
    LogLog,
    /// `∫|f| / ln(e+|x|)`
    #[serde(rename = "weightedL1")]
    WeightedL1,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::L1,
        Condition::LlogLLocal,
        Condition::Amalgam,
        Condition::Stein,
        Condition::EqLogLog,
        Condition::LogLog,
        Condition::WeightedL1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Condition::L1 => "L1",
            Condition::LlogLLocal => "LlogL-local",
            Condition::Amalgam => "amalgam",
            Condition::Stein => "stein",
            Condition::EqLogLog => "eqloglog",
            Condition::LogLog => "loglog",
            Condition::WeightedL1 => "weightedL1",
        }
    }

    /// Pointwise functional for conditions that are plain integrals.
    pub fn functional(&self) -> Option<MusielakSpec> {
        let kind = match self {
            Condition::L1 => MusielakKind::L1,
            Condition::Stein => MusielakKind::SteinGlobal,
            Condition::EqLogLog => MusielakKind::EqLogLog,
            Condition::LogLog => MusielakKind::LogLogGlobal,
            Condition::WeightedL1 => MusielakKind::WeightedL1,
            Condition::LlogLLocal | Condition::Amalgam => return None,
        };
        Some(MusielakSpec::new(kind))
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCondition(s.to_string()))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    Finite,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub membership: Membership,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub id: String,
    pub dim: usize,
    #[serde(flatten)]
    pub family: Family,
    pub ground_truth: BTreeMap<Condition, Flag>,
}

impl TestFunction {
    pub fn new(id: impl Into<String>, family: Family, dim: usize) -> Self {
        let ground_truth = Condition::ALL.into_iter().map(|c| (c, ground_truth(&family, dim, c))).collect();
        TestFunction { id: id.into(), dim, family, ground_truth }
    }

    pub fn flag(&self, condition: &str) -> Result<Membership> {
        let c: Condition = condition.parse()?;
        Ok(self.ground_truth[&c].membership)
    }

    pub fn all_finite(&self) -> bool {
        self.ground_truth.values().all(|f| f.membership == Membership::Finite)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<TestFunction>,
}

impl Catalog {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Catalog = serde_json::from_str(s)?;
        if c.version != CATALOG_VERSION {
            return Err(Error::Spec { field: "version".into(), msg: format!("unsupported version {}", c.version) });
        }
        Ok(c)
    }
}

/// The one-dimensional catalog at non-critical parameters.
pub fn catalog() -> Catalog {
    let entries = [
        ("spike_t64", Family::Spike { t: 64.0 }),
        ("spike_t1024", Family::Spike { t: 1024.0 }),
        ("double_spike_t64_k3", Family::DoubleSpike { t: 64.0, k: 3 }),
        ("translated_spike_t16_k37", Family::TranslatedSpike { t: 16.0, k: 37 }),
        ("cube_indicator_k5", Family::CubeIndicator { k: 5 }),
        ("heavy_tail_a1.5", Family::HeavyTail { alpha: 1.5 }),
        ("heavy_tail_a3", Family::HeavyTail { alpha: 3.0 }),
        ("slow_tail_b1.25", Family::SlowTail { beta: 1.25 }),
        ("slow_tail_b1.75", Family::SlowTail { beta: 1.75 }),
        ("slow_tail_b2.5", Family::SlowTail { beta: 2.5 }),
        ("slow_tail_b3", Family::SlowTail { beta: 3.0 }),
        ("paper_example", Family::PaperExample),
        ("lacunary_p2", Family::LacunarySum { p: 2.0 }),
        ("lacunary_p3", Family::LacunarySum { p: 3.0 }),
    ];
    Catalog {
        version: CATALOG_VERSION,
        entries: entries.into_iter().map(|(id, f)| TestFunction::new(id, f, 1)).collect(),
    }
}

/// Closed-form classification of `family` against `condition` in dimension `dim`.
pub fn ground_truth(family: &Family, dim: usize, condition: Condition) -> Flag {
    let n = dim as f64;
    let flag = |finite: bool, provenance: String| Flag {
        membership: if finite { Membership::Finite } else { Membership::Divergent },
        provenance,
    };
    match *family {
        Family::Spike { t } if condition == Condition::Stein => {
            flag(true, format!("closed form: ∫ t chi (1 + ln t) = 1 + ln t = {:.6}", 1.0 + t.ln()))
        }
        Family::Spike { .. }
        | Family::DoubleSpike { .. }
        | Family::TranslatedSpike { .. }
        | Family::CubeIndicator { .. }
        | Family::Interval { .. }
        | Family::Zero => {
            flag(true, "bounded with compact support: every integrand is bounded on a bounded set".into())
        }
        Family::HeavyTail { alpha } if alpha > n => flag(
            true,
            format!("tail (1+r)^-{alpha} with {alpha} > n = {dim}: r^(n-1-alpha) times powers of ln r is integrable"),
        ),
        Family::HeavyTail { alpha } => {
            flag(false, format!("tail (1+r)^-{alpha} with {alpha} <= n = {dim}: ∫ r^(n-1-alpha) dr diverges"))
        }
        Family::SlowTail { beta } => power_log_flag(condition, beta),
        Family::PaperExample => power_log_flag(condition, 1.0),
        Family::LacunarySum { p } => lacunary_flag(condition, p),
    }
}

/// Tails `r^-n L^-beta`, `L = ln r`: with `dr/r = dL` each condition reduces to
/// `∫ L^(gamma) dL`, finite iff `gamma < -1`.
fn power_log_flag(condition: Condition, beta: f64) -> Flag {
    let (gamma, why) = match condition {
        Condition::L1 => (-beta, "|f| ~ r^-n L^-beta"),
        Condition::LlogLLocal => (-beta, "|f_k|/mu_k -> 1, so the local sum is comparable to ∫|f|"),
        Condition::Amalgam => (1.0 - beta, "mu_k ln(1/mu_k) ~ n r^-n L^(1-beta)"),
        Condition::Stein => (1.0 - beta, "ln+|x| adds one power of L"),
        Condition::EqLogLog => (-beta, "ln(e+|f|) < ln(e+|x|) far out, so the integrand is |f|"),
        Condition::LogLog => (-beta, "ln ln(e+|x|) adds a factor ln L, which moves no threshold"),
        Condition::WeightedL1 => (-beta - 1.0, "1/ln(e+|x|) removes one power of L"),
    };
    let finite = gamma < -1.0;
    Flag {
        membership: if finite { Membership::Finite } else { Membership::Divergent },
        provenance: format!("{why}: ∫ L^{gamma} dL {}", if finite { "converges" } else { "diverges" }),
    }
}

/// `c_m = m^-p` on `Q_{2^m}`, `ln|k| = m ln 2`.
fn lacunary_flag(condition: Condition, p: f64) -> Flag {
    let (q, why) = match condition {
        Condition::L1 | Condition::LlogLLocal | Condition::EqLogLog => (p, "sum m^-p"),
        Condition::Amalgam => (p, "sum p m^-p ln m"),
        Condition::Stein => (p - 1.0, "sum m^-p (1 + m ln 2)"),
        Condition::LogLog => (p, "sum m^-p (1 + ln ln(e + 2^m))"),
        Condition::WeightedL1 => (p + 1.0, "sum m^-p / ln(e + 2^m)"),
    };
    let finite = q > 1.0;
    Flag {
        membership: if finite { Membership::Finite } else { Membership::Divergent },
        provenance: format!("{why}: behaves like sum m^-{q}, {}", if finite { "converges" } else { "diverges" }),
    }
}
