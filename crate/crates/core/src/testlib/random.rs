//! Seeded random step functions. Values are dyadic rationals, so grid sums
//! and integrals of these functions are exact in floating point.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{GridSpec, SampledFunction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonnegative integer cell values, at least one positive.
pub fn random_step_counts<R: Rng>(rng: &mut R, cells: usize, max: u32) -> Vec<u64> {
    loop {
        let sparse = rng.gen_bool(0.5);
        let v: Vec<u64> =
            (0..cells).map(|_| if sparse && rng.gen_bool(0.7) { 0 } else { rng.gen_range(0..=max) as u64 }).collect();
        if v.iter().any(|&x| x > 0) {
            return v;
        }
    }
}

/// Signed values `j / 256`, `|j| <= 1024`, on up to `max_cubes` random unit cubes.
pub fn random_dyadic_function<R: Rng>(rng: &mut R, spec: GridSpec, max_cubes: usize) -> Result<SampledFunction> {
    let cubes = spec.cubes();
    let mut values = vec![0.0; spec.len()];
    let count = rng.gen_range(1..=max_cubes.max(1));
    for _ in 0..count {
        let k = cubes[rng.gen_range(0..cubes.len())];
        let signed = rng.gen_bool(0.5);
        for i in spec.cube_cells(&k) {
            if rng.gen_bool(0.6) {
                let j = rng.gen_range(0..=1024) as f64;
                let s = if signed && rng.gen_bool(0.5) { -1.0 } else { 1.0 };
                values[i] = s * j / 256.0;
            }
        }
    }
    SampledFunction::new(spec, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_dyadic() {
        let g = GridSpec::new(1, 8, 16).unwrap();
        let a = random_dyadic_function(&mut rng(3), g, 4).unwrap();
        let b = random_dyadic_function(&mut rng(3), g, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|v| (v * 256.0).fract() == 0.0));
        let c = random_step_counts(&mut rng(1), 16, 9);
        assert!(c.iter().any(|&x| x > 0) && c.iter().all(|&x| x <= 9));
    }
}
