use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::quantum::Distribution;
use crate::{tol, Error, Result};

/// Shot counts per basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counts {
    n_bits: usize,
    counts: Vec<u64>,
}

impl Counts {
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of shots whose bits satisfy every `(qubit, value)` constraint.
    pub fn matching(&self, constraints: &[(usize, u8)]) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                constraints.iter().all(|&(q, v)| {
                    let bit = (i >> (self.n_bits - 1 - q)) & 1;
                    bit as u8 == v
                })
            })
            .map(|(_, c)| c)
            .sum()
    }

    pub fn merge(&mut self, other: &Counts) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Multinomial draw of `shots` outcomes from `dist`, driven by `rng`.
pub fn sample_counts<R: Rng + ?Sized>(dist: &Distribution, shots: u64, rng: &mut R) -> Result<Counts> {
    let total: f64 = dist.probs().iter().sum();
    if (total - 1.0).abs() > tol::DISTRIBUTION {
        return Err(Error::NotNormalizedDistribution(total));
    }
    let mut counts = vec![0u64; dist.probs().len()];
    let mut left = shots;
    let mut mass = total;
    // chain of conditional binomials
    for (i, &p) in dist.probs().iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == counts.len() || mass <= 0.0 {
            counts[i] = left;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(left, q)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        counts[i] = k;
        left -= k;
        mass -= p;
    }
    Ok(Counts {
        n_bits: dist.n_bits(),
        counts,
    })
}

/// Seeded multinomial draw; the same seed always yields the same counts.
pub fn sample_shots(dist: &Distribution, shots: u64, seed: u64) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::domain("shots", "must be at least 1"));
    }
    sample_counts(dist, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}
