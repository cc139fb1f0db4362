use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{normalize_performance, EntitySet, Error, Performance, Result};

/// Fewest samples accepted from the random distributions.
pub const MIN_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub enum DistributionKind {
    /// Flat Dirichlet over the probability simplex of `(tn, fp, fn, tp)`.
    UniformAll,
    /// `p_tp` uniform on `[0, prior]` and `p_fp` uniform on `[0, 1 - prior]`,
    /// independently; the other two components follow.
    UniformFixedPrior { prior_pos: f64 },
    /// The entities themselves, each once.
    Empirical(EntitySet),
}

/// Where the performances of a behavior tile come from.
#[derive(Clone, Debug, PartialEq)]
pub struct PerformanceDistribution {
    pub kind: DistributionKind,
    pub samples: usize,
    pub seed: u64,
}

impl PerformanceDistribution {
    pub fn uniform_all(samples: usize, seed: u64) -> Self {
        Self {
            kind: DistributionKind::UniformAll,
            samples,
            seed,
        }
    }

    pub fn uniform_fixed_prior(prior_pos: f64, samples: usize, seed: u64) -> Self {
        Self {
            kind: DistributionKind::UniformFixedPrior { prior_pos },
            samples,
            seed,
        }
    }

    pub fn empirical(entities: EntitySet) -> Self {
        let samples = entities.len();
        Self {
            kind: DistributionKind::Empirical(entities),
            samples,
            seed: 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DistributionKind::UniformAll => "uniform-all",
            DistributionKind::UniformFixedPrior { .. } => "uniform-fixed-prior",
            DistributionKind::Empirical(_) => "empirical",
        }
    }

    /// Draws the performances. Random kinds are a pure function of
    /// `(samples, seed)`.
    pub fn draw(&self) -> Result<Vec<Performance>> {
        if let DistributionKind::Empirical(set) = &self.kind {
            return Ok(set.performances());
        }
        if self.samples < MIN_SAMPLES {
            return Err(Error::TooFewSamples {
                got: self.samples,
                min: MIN_SAMPLES,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut unit = move || (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        match self.kind {
            DistributionKind::UniformAll => (0..self.samples)
                .map(|_| {
                    let mut e = [0.0; 4];
                    for x in &mut e {
                        // 1 - u lies in (0, 1], so the logarithm is finite.
                        *x = -libm::log(1.0 - unit());
                    }
                    normalize_performance(e[0], e[1], e[2], e[3])
                })
                .collect(),
            DistributionKind::UniformFixedPrior { prior_pos } => {
                if !(0.0..=1.0).contains(&prior_pos) {
                    return Err(Error::OutOfRange {
                        name: "prior_pos",
                        value: prior_pos,
                    });
                }
                let neg = 1.0 - prior_pos;
                (0..self.samples)
                    .map(|_| {
                        let tp = unit() * prior_pos;
                        let fp = unit() * neg;
                        Performance::new(neg - fp, fp, prior_pos - tp, tp)
                    })
                    .collect()
            }
            DistributionKind::Empirical(_) => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_seeded() {
        let d = PerformanceDistribution::uniform_all(200, 7);
        let x = d.draw().unwrap();
        assert_eq!(x, d.draw().unwrap());
        assert_ne!(
            x,
            PerformanceDistribution::uniform_all(200, 8).draw().unwrap()
        );
    }

    #[test]
    fn uniform_all_mean_is_a_quarter() {
        let x = PerformanceDistribution::uniform_all(20_000, 3)
            .draw()
            .unwrap();
        for k in 0..4 {
            let mean = x.iter().map(|p| p.to_array()[k]).sum::<f64>() / x.len() as f64;
            assert!((mean - 0.25).abs() < 0.01, "component {k}: {mean}");
        }
    }

    #[test]
    fn fixed_prior_keeps_prior() {
        let prior = 0.124227;
        let x = PerformanceDistribution::uniform_fixed_prior(prior, 500, 1)
            .draw()
            .unwrap();
        assert!(x.iter().all(|p| (p.prior_pos() - prior).abs() < 1e-15));
        let mean_tp = x.iter().map(|p| p.tp()).sum::<f64>() / 500.0;
        assert!((mean_tp - prior / 2.0).abs() < 0.01);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(
            PerformanceDistribution::uniform_all(99, 0).draw(),
            Err(Error::TooFewSamples {
                got: 99,
                min: MIN_SAMPLES
            })
        );
    }
}
