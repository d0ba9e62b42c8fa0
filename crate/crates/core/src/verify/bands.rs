//! Ratio bands calibrated once at the default configuration and then frozen.

/// `||M^loc spike||_1 / local sum`, maximal width over `t = 2^2..2^12`
/// (calibrated 1.11)
pub const LOCAL_H1_WIDTH: f64 = 4.0;
/// same ratio for the unit cube indicator (calibrated 1.5)
pub const LOCAL_H1_CUBE: (f64, f64) = (1.2, 1.8);
/// `∫ psi(x, M^loc spike) / eqloglog(spike)` over `t = 2^4..2^20`
/// (calibrated [0.601, 0.667])
pub const LOCAL_HLOG: (f64, f64) = (0.5, 0.8);
