//! Seeded random contexts and cell-flip noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{default_names, FormalContext};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A ChaCha stream keyed by `(seed, key)`. Distinct keys give independent
/// streams, so work split across threads stays schedule independent.
pub fn keyed_rng(seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomContextSpec {
    pub n_objects: usize,
    pub n_attributes: usize,
    /// Probability of a cross in each cell.
    pub density: f64,
    pub seed: u64,
}

impl RandomContextSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_objects == 0 || self.n_attributes == 0 {
            return Err(Error::InvalidParameter(format!(
                "random context dimensions must be positive (got {}x{})",
                self.n_objects, self.n_attributes
            )));
        }
        check_probability("density", self.density)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    /// Probability that any single cell is flipped.
    pub rate: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        check_probability("noise rate", self.rate)
    }
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{what} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Each cell is an independent Bernoulli(`density`) draw, row-major, from a
/// stream keyed by the seed.
pub fn generate_random_context(spec: &RandomContextSpec) -> Result<FormalContext> {
    spec.validate()?;
    let mut rng = keyed_rng(spec.seed, 0);
    let rows = (0..spec.n_objects)
        .map(|_| {
            let mut row = BitSet::new(spec.n_attributes);
            for m in 0..spec.n_attributes {
                if rng.gen_bool(spec.density) {
                    row.insert(m);
                }
            }
            row
        })
        .collect();
    FormalContext::new(
        default_names("g", spec.n_objects),
        default_names("m", spec.n_attributes),
        rows,
    )
}

/// Flips each cell independently with probability `spec.rate`. Names are kept.
pub fn apply_noise(ctx: &FormalContext, spec: &NoiseSpec) -> Result<FormalContext> {
    spec.validate()?;
    let mut rng = keyed_rng(spec.seed, 1);
    let rows = ctx
        .rows()
        .iter()
        .map(|row| {
            let mut row = row.clone();
            for m in 0..ctx.n_attributes() {
                if rng.gen_bool(spec.rate) {
                    row.toggle(m);
                }
            }
            row
        })
        .collect();
    FormalContext::new(
        ctx.object_names().to_vec(),
        ctx.attribute_names().to_vec(),
        rows,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::block_diagonal;

    fn spec(density: f64, seed: u64) -> RandomContextSpec {
        RandomContextSpec {
            n_objects: 40,
            n_attributes: 10,
            density,
            seed,
        }
    }

    #[test]
    fn extreme_densities() {
        assert_eq!(generate_random_context(&spec(0.0, 1)).unwrap().ones(), 0);
        assert_eq!(generate_random_context(&spec(1.0, 1)).unwrap().ones(), 400);
    }

    #[test]
    fn density_within_four_sigma() {
        let sigma = (0.3f64 * 0.7 / 400.0).sqrt();
        for seed in 0..20 {
            let d = generate_random_context(&spec(0.3, seed)).unwrap().density();
            assert!((d - 0.3).abs() <= 4.0 * sigma, "seed {seed}: density {d}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_random_context(&spec(0.25, 7)).unwrap();
        let b = generate_random_context(&spec(0.25, 7)).unwrap();
        let c = generate_random_context(&spec(0.25, 8)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(generate_random_context(&spec(1.5, 0)).is_err());
        let mut s = spec(0.5, 0);
        s.n_objects = 0;
        assert!(generate_random_context(&s).is_err());
        let ctx = generate_random_context(&spec(0.5, 0)).unwrap();
        assert!(apply_noise(
            &ctx,
            &NoiseSpec {
                rate: -0.1,
                seed: 0
            }
        )
        .is_err());
    }

    #[test]
    fn noise_extremes() {
        let ctx = generate_random_context(&spec(0.4, 3)).unwrap();
        assert_eq!(
            apply_noise(&ctx, &NoiseSpec { rate: 0.0, seed: 9 }).unwrap(),
            ctx
        );
        assert_eq!(
            apply_noise(&ctx, &NoiseSpec { rate: 1.0, seed: 9 }).unwrap(),
            ctx.complement()
        );
    }

    #[test]
    fn noise_flip_count_within_four_sigma() {
        let zero = FormalContext::from_matrix(&vec![vec![false; 6]; 300]).unwrap();
        let sigma = (1800.0f64 * 0.05 * 0.95).sqrt();
        for seed in 0..10 {
            let flipped = apply_noise(&zero, &NoiseSpec { rate: 0.05, seed })
                .unwrap()
                .ones();
            assert!(
                (flipped as f64 - 90.0).abs() <= 4.0 * sigma,
                "seed {seed}: {flipped}"
            );
        }
    }

    #[test]
    fn noise_is_deterministic_and_keeps_names() {
        let ctx = block_diagonal(2, 10, 3);
        let s = NoiseSpec {
            rate: 0.2,
            seed: 42,
        };
        let a = apply_noise(&ctx, &s).unwrap();
        assert_eq!(a, apply_noise(&ctx, &s).unwrap());
        assert_eq!(a.object_names(), ctx.object_names());
        assert_eq!(a.attribute_names(), ctx.attribute_names());
    }
}
