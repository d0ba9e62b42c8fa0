//! Hardy-Littlewood, local, dyadic and smooth maximal operators.

mod atom;
mod ball;
mod dyadic;
mod kernel;
mod radii;
mod smooth;

pub use atom::{atom_weighted_norm, WeightedNorm};
pub use ball::{ball_average, hl_max, local_max, local_max_with};
pub use dyadic::{dyadic_max, dyadic_max_restricted, dyadic_max_values, DyadicConstant};
pub use kernel::{BumpKernel, KernelProfile};
pub use radii::{RadiusPreset, RadiusSet};
pub use smooth::{convolve, smooth_local_max, smooth_max};
