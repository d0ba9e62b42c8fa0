//! Analytic test functions with closed-form classification against each
//! integrability condition, plus seeded random generators for property tests.

mod catalog;
mod family;
pub mod random;

pub use catalog::{catalog, ground_truth, Catalog, Condition, Flag, Membership, TestFunction, CATALOG_VERSION};
pub use family::{Family, FunctionSpec};

use crate::error::Result;
use crate::grid::{GridSpec, SampledFunction};

pub fn materialize(tf: &TestFunction, g: &GridSpec) -> Result<SampledFunction> {
    tf.family.materialize(g)
}
