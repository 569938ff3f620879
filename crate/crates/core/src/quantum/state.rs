use num_complex::Complex64;

use super::{
    check_outcome, check_qubit, check_qubit_count, for_each_pair, mask, DensityMatrix,
    Distribution, GateOp,
};
use crate::{tol, Error, Result};

/// Normalized pure state of 1–4 qubits, qubit 0 as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1 << n_qubits;
        if index >= dim {
            return Err(Error::domain("index", format!("{index} >= {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm
    /// must be 1 within the composed-sequence tolerance.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        let n_qubits = len.trailing_zeros() as usize;
        if !len.is_power_of_two() {
            return Err(Error::Dimension { len, n_qubits });
        }
        check_qubit_count(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitude"));
        }
        let s = Self { n_qubits, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > tol::COMPOSED {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|self⟩ ⊗ |other⟩`; `other`'s qubits are appended after ours.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        check_qubit_count(self.n_qubits + other.n_qubits)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        })
    }

    pub fn apply_gate(&self, gate: &GateOp) -> Result<Self> {
        gate.validate(self.n_qubits)?;
        let m = gate.kind.block();
        let mut amps = self.amps.clone();
        for_each_pair(self.n_qubits, gate.target, gate.control, |i0, i1| {
            let (a, b) = (amps[i0], amps[i1]);
            amps[i0] = m[0][0] * a + m[0][1] * b;
            amps[i1] = m[1][0] * a + m[1][1] * b;
        });
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("amplitude after gate"));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        let data = self
            .amps
            .iter()
            .flat_map(|a| self.amps.iter().map(move |b| a * b.conj()))
            .collect();
        DensityMatrix::from_raw(self.n_qubits, data)
    }

    /// Born-rule distribution over computational basis strings.
    pub fn measure_probabilities(&self) -> Distribution {
        Distribution::from_raw(self.n_qubits, self.amps.iter().map(|a| a.norm_sqr()).collect())
    }

    /// Probability that measuring `qubit` yields `outcome`.
    pub fn outcome_probability(&self, qubit: usize, outcome: u8) -> Result<f64> {
        check_qubit(qubit, self.n_qubits)?;
        check_outcome(outcome)?;
        let m = mask(self.n_qubits, qubit);
        let want = if outcome == 1 { m } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Conditions on `qubit` reading `outcome` and removes that qubit.
    ///
    /// Returns the renormalized state of the remaining qubits together with
    /// the branch probability.
    pub fn post_select(&self, qubit: usize, outcome: u8) -> Result<(Self, f64)> {
        let p = self.outcome_probability(qubit, outcome)?;
        if p < tol::IMPOSSIBLE_BRANCH {
            return Err(Error::ImpossibleBranch {
                qubit,
                outcome,
                probability: p,
            });
        }
        let n = self.n_qubits - 1;
        check_qubit_count(n)?;
        let m = mask(self.n_qubits, qubit);
        let want = if outcome == 1 { m } else { 0 };
        // Bits above the removed qubit shift down by one position.
        let low = m - 1;
        let scale = 1.0 / p.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            if i & m == want {
                let j = ((i >> 1) & !low) | (i & low);
                amps[j] = a * scale;
            }
        }
        Ok((Self { n_qubits: n, amps }, p))
    }
}
