//! Finite-count sampling, Poissonian error bars and a two-parameter noise model.
//!
//! Sampling uses ChaCha8 seeded with `seed_from_u64(seed)`; `stream` selects an
//! independent ChaCha stream so sweep rows can be drawn in parallel without
//! sharing a generator. Multinomial draws are built from sequential binomials
//! (`rand_distr::Binomial`) in outcome order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::toolbox::DecomposedDistribution;

/// Accepted deviation of a distribution's sum from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Detector counts from `total_shots` trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub counts: Vec<u64>,
    pub total_shots: u64,
    pub seed: u64,
}

impl CountTable {
    /// Relative frequencies `count / total`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.total_shots as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// A plug-in estimate with its one-sigma error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn check_distribution(dist: &[f64]) -> Result<()> {
    if dist.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("distribution"));
    }
    if let Some(&p) = dist.iter().find(|&&p| p < -NORMALIZATION_TOL) {
        return Err(Error::NegativeProbability(p));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::Unnormalized(total));
    }
    Ok(())
}

/// Multinomial counts for `dist` on stream 0.
pub fn sample_counts(dist: &[f64], n_shots: u64, seed: u64) -> Result<CountTable> {
    sample_counts_stream(dist, n_shots, seed, 0)
}

/// Multinomial counts for `dist` on ChaCha stream `stream`.
pub fn sample_counts_stream(
    dist: &[f64],
    n_shots: u64,
    seed: u64,
    stream: u64,
) -> Result<CountTable> {
    if n_shots == 0 {
        return Err(Error::ZeroShots);
    }
    check_distribution(dist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let clamped: Vec<f64> = dist.iter().map(|p| p.max(0.0)).collect();
    let mut mass: f64 = clamped.iter().sum();
    let mut left = n_shots;
    let mut counts = Vec::with_capacity(dist.len());
    for (i, &p) in clamped.iter().enumerate() {
        let k = if left == 0 {
            0
        } else if i + 1 == clamped.len() {
            left
        } else {
            let q = if mass > 0.0 {
                (p / mass).clamp(0.0, 1.0)
            } else {
                0.0
            };
            Binomial::new(left, q)
                .expect("probability clamped to [0, 1]")
                .sample(&mut rng)
        };
        counts.push(k);
        left -= k;
        mass -= p;
    }
    Ok(CountTable {
        counts,
        total_shots: n_shots,
        seed,
    })
}

/// `√count` per outcome, with 1 for empty outcomes.
pub fn poisson_error(c: &CountTable) -> Vec<f64> {
    c.counts
        .iter()
        .map(|&k| if k == 0 { 1.0 } else { (k as f64).sqrt() })
        .collect()
}

/// Per-outcome probability estimates `count/total ± σ/total`.
pub fn probability_estimates(c: &CountTable) -> Vec<Estimate> {
    let n = c.total_shots as f64;
    c.counts
        .iter()
        .zip(poisson_error(c))
        .map(|(&k, e)| Estimate {
            value: k as f64 / n,
            error: e / n,
        })
        .collect()
}

/// Total-variation distance `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Reduced fringe visibility and wave/particle dephasing.
///
/// Interference contributions are scaled by `visibility · (1 − dephase)`;
/// `dephase = 1` yields the incoherent mixture's statistics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    visibility: f64,
    dephase: f64,
}

impl NoiseModel {
    pub const IDEAL: Self = Self {
        visibility: 1.0,
        dephase: 0.0,
    };

    pub fn new(visibility: f64, dephase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&visibility) {
            return Err(Error::NoiseRange("visibility"));
        }
        if !(0.0..=1.0).contains(&dephase) {
            return Err(Error::NoiseRange("dephase"));
        }
        Ok(Self {
            visibility,
            dephase,
        })
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }

    pub fn dephase(&self) -> f64 {
        self.dephase
    }

    /// Overall factor on interference terms.
    pub fn contrast(&self) -> f64 {
        self.visibility * (1.0 - self.dephase)
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::IDEAL
    }
}

/// `incoherent + V(1 − d) · interference`.
pub fn apply_noise(d: &DecomposedDistribution, m: NoiseModel) -> Vec<f64> {
    let k = m.contrast();
    d.incoherent
        .iter()
        .zip(&d.interference)
        .map(|(a, b)| a + k * b)
        .collect()
}

/// Witnesses that can be read off a count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `|P_1 − P_2|` on a four-outcome table.
    Coherence,
    /// `P_22' − P_21'` on a sixteen-outcome row-major table.
    Entanglement,
}

impl Witness {
    fn outcomes(self) -> (usize, usize, usize) {
        match self {
            Witness::Coherence => (4, 0, 1),
            Witness::Entanglement => (16, 5, 4),
        }
    }
}

/// Plug-in witness estimate with the Poissonian errors of its two counts added in quadrature.
pub fn estimate_witness(c: &CountTable, w: Witness) -> Result<Estimate> {
    if c.total_shots == 0 {
        return Err(Error::ZeroShots);
    }
    let (needed, i, j) = w.outcomes();
    if c.counts.len() != needed {
        return Err(Error::WitnessOutcomes {
            needed,
            got: c.counts.len(),
        });
    }
    let n = c.total_shots as f64;
    let e = poisson_error(c);
    let diff = (c.counts[i] as f64 - c.counts[j] as f64) / n;
    let value = match w {
        Witness::Coherence => diff.abs(),
        Witness::Entanglement => diff,
    };
    Ok(Estimate {
        value,
        error: e[i].hypot(e[j]) / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_outcome() {
        let c = sample_counts(&[1.0, 0.0, 0.0, 0.0], 1234, 7).unwrap();
        assert_eq!(c.counts, vec![1234, 0, 0, 0]);
        let c = sample_counts(&[0.0, 0.0, 1.0, 0.0], 10, 7).unwrap();
        assert_eq!(c.counts, vec![0, 0, 10, 0]);
    }

    #[test]
    fn uniform_counts_within_five_sigma() {
        let c = sample_counts(&[0.25; 4], 100_000, 42).unwrap();
        let sigma = (100_000.0f64 * 0.25 * 0.75).sqrt();
        for k in &c.counts {
            assert!((*k as f64 - 25_000.0).abs() < 5.0 * sigma);
        }
        assert_eq!(c.counts.iter().sum::<u64>(), 100_000);
    }

    #[test]
    fn seed_determinism() {
        let d = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(sample_counts(&d, 5000, 9), sample_counts(&d, 5000, 9));
        assert_ne!(
            sample_counts(&d, 5000, 9).unwrap().counts,
            sample_counts_stream(&d, 5000, 9, 1).unwrap().counts
        );
    }

    #[test]
    fn bad_input_rejected() {
        assert!(matches!(
            sample_counts(&[0.5, 0.4], 10, 0),
            Err(Error::Unnormalized(_))
        ));
        assert!(matches!(
            sample_counts(&[1.5, -0.5], 10, 0),
            Err(Error::NegativeProbability(_))
        ));
        assert_eq!(sample_counts(&[1.0], 0, 0).unwrap_err(), Error::ZeroShots);
    }

    #[test]
    fn error_convention() {
        let c = CountTable {
            counts: vec![10_000, 0, 4, 1],
            total_shots: 10_005,
            seed: 0,
        };
        assert_eq!(poisson_error(&c), vec![100.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn exact_counts_give_exact_witness() {
        let mut counts = vec![0; 16];
        counts[5] = 9;
        counts[4] = 1;
        counts[0] = 22;
        let c = CountTable {
            counts,
            total_shots: 32,
            seed: 0,
        };
        let w = estimate_witness(&c, Witness::Entanglement).unwrap();
        assert_eq!(w.value, 0.25);
        assert!(matches!(
            estimate_witness(&c, Witness::Coherence),
            Err(Error::WitnessOutcomes { needed: 4, got: 16 })
        ));
    }

    #[test]
    fn noise_ranges() {
        assert!(NoiseModel::new(1.1, 0.0).is_err());
        assert!(NoiseModel::new(0.5, -0.1).is_err());
        let d = DecomposedDistribution {
            incoherent: vec![0.5, 0.5],
            interference: vec![0.2, -0.2],
        };
        assert_eq!(apply_noise(&d, NoiseModel::IDEAL), vec![0.7, 0.3]);
        let m = NoiseModel::new(0.5, 0.5).unwrap();
        assert_eq!(apply_noise(&d, m), vec![0.55, 0.45]);
        let m = NoiseModel::new(1.0, 1.0).unwrap();
        assert_eq!(apply_noise(&d, m), vec![0.5, 0.5]);
    }
}
