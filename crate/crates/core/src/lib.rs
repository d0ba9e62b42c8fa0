//! Maximal operators, Musielak-Orlicz functionals, unit-cube decompositions and
//! cancellation operators on piecewise-constant grid functions in one and two
//! dimensions, together with the experiment harness that checks them.

pub mod decomp;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod maximal;
pub mod operators;
pub mod par;
mod quad;
pub mod testlib;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{CubeIndex, GridSpec, Point, SampledFunction, TailDescriptor};
