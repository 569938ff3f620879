use super::{check_qubit, check_qubit_count, mask};
use crate::{tol, Error, Result};

/// Probability distribution over the `2^n` computational basis strings.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    n_bits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and unit sum (within 1e-9).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let len = probs.len();
        let n_bits = len.trailing_zeros() as usize;
        if !len.is_power_of_two() {
            return Err(Error::Dimension { len, n_qubits: n_bits });
        }
        check_qubit_count(n_bits)?;
        if let Some(&p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::Probability {
                field: "distribution entry".into(),
                value: p,
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol::DISTRIBUTION {
            return Err(Error::NotNormalizedDistribution(total));
        }
        Ok(Self { n_bits, probs })
    }

    pub(crate) fn from_raw(n_bits: usize, probs: Vec<f64>) -> Self {
        Self { n_bits, probs }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Basis index rendered as `q0 q1 …` bits.
    pub fn bitstring(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.n_bits)
    }

    /// Probability that `bit` reads `value`.
    pub fn marginal(&self, bit: usize, value: u8) -> Result<f64> {
        check_qubit(bit, self.n_bits)?;
        let m = mask(self.n_bits, bit);
        let want = if value == 1 { m } else { 0 };
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m == want)
            .map(|(_, p)| p)
            .sum())
    }

    /// Joint probability that `a` reads `va` and `b` reads `vb`.
    pub fn joint(&self, a: usize, va: u8, b: usize, vb: u8) -> Result<f64> {
        check_qubit(a, self.n_bits)?;
        check_qubit(b, self.n_bits)?;
        let (ma, mb) = (mask(self.n_bits, a), mask(self.n_bits, b));
        let wa = if va == 1 { ma } else { 0 };
        let wb = if vb == 1 { mb } else { 0 };
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(i, _)| i & ma == wa && i & mb == wb)
            .map(|(_, p)| p)
            .sum())
    }

    /// Flips `bit` with probability `flip`, independently of everything else.
    pub fn with_bit_flip(&self, bit: usize, flip: f64) -> Result<Self> {
        check_qubit(bit, self.n_bits)?;
        let m = mask(self.n_bits, bit);
        let probs = (0..self.probs.len())
            .map(|i| (1.0 - flip) * self.probs[i] + flip * self.probs[i ^ m])
            .collect();
        Ok(Self {
            n_bits: self.n_bits,
            probs,
        })
    }
}
