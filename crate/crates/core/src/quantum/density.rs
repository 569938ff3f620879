use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    check_outcome, check_qubit, check_qubit_count, for_each_pair, mask, Distribution, GateOp,
};
use crate::{tol, Error, Result};

/// Projector `|b⟩⟨b|` on a single qubit; `P_0`/`P_1` double as detectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Projector {
    pub target: usize,
    pub outcome: u8,
}

impl Projector {
    pub fn new(target: usize, outcome: u8) -> Result<Self> {
        check_outcome(outcome)?;
        Ok(Self { target, outcome })
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        if self.outcome == 0 {
            [[1.0, 0.0], [0.0, 0.0]]
        } else {
            [[0.0, 0.0], [0.0, 1.0]]
        }
    }
}

/// Density operator over 1–4 qubits, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub(crate) fn from_raw(n_qubits: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * n_qubits));
        Self { n_qubits, data }
    }

    /// Builds a density matrix from row-major entries and checks the
    /// Hermitian, unit-trace and PSD invariants.
    pub fn from_entries(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if data.len() != 1 << (2 * n_qubits) {
            return Err(Error::Dimension {
                len: data.len(),
                n_qubits,
            });
        }
        let rho = Self { n_qubits, data };
        rho.validate()?;
        Ok(rho)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1 << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        // Tr[ρ²] = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| {
            // symmetrize away rounding so the Hermitian solver sees exact input
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Hermitian within 1e-12, unit trace within 1e-12, eigenvalues ≥ −1e-10.
    pub fn validate(&self) -> Result<()> {
        if self.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix entry"));
        }
        let h = self.hermiticity_defect();
        if h > tol::ALGEBRAIC {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {h:e})")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol::ALGEBRAIC {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < tol::PSD {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Reduced state on `keep`, tracing out every other qubit.
    ///
    /// Kept qubits are renumbered in ascending order of their original index.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        for w in keep.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit(w[0]));
            }
        }
        for &q in &keep {
            check_qubit(q, self.n_qubits)?;
        }
        let n = self.n_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();

        // Scatter the bits of a compact index onto the given qubit positions.
        let scatter = |bits: usize, qubits: &[usize]| -> usize {
            qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                if bits & (1 << (qubits.len() - 1 - pos)) != 0 {
                    acc | mask(n, q)
                } else {
                    acc
                }
            })
        };

        let out_dim = 1 << k;
        let mut data = vec![Complex64::new(0.0, 0.0); out_dim * out_dim];
        for a in 0..out_dim {
            let ra = scatter(a, &keep);
            for b in 0..out_dim {
                let rb = scatter(b, &keep);
                data[a * out_dim + b] = (0..1usize << traced.len())
                    .map(|t| {
                        let rt = scatter(t, &traced);
                        self.get(ra | rt, rb | rt)
                    })
                    .sum();
            }
        }
        Ok(Self { n_qubits: k, data })
    }

    /// `Tr[ρ P]`, clamped to `[0, 1]` once the imaginary part is checked.
    pub fn expectation(&self, proj: &Projector) -> Result<f64> {
        check_qubit(proj.target, self.n_qubits)?;
        let m = mask(self.n_qubits, proj.target);
        let want = if proj.outcome == 1 { m } else { 0 };
        let z: Complex64 = (0..self.dim())
            .filter(|i| i & m == want)
            .map(|i| self.get(i, i))
            .sum();
        if z.im.abs() > tol::IMAG_GUARD {
            return Err(Error::ImaginaryExpectation(z.im));
        }
        Ok(z.re.clamp(0.0, 1.0))
    }

    /// `U ρ U†`.
    pub fn apply_gate(&self, gate: &GateOp) -> Result<Self> {
        gate.validate(self.n_qubits)?;
        let n = self.n_qubits;
        let d = self.dim();
        let m = gate.kind.block();
        let mut data = self.data.clone();
        // U from the left acts on row indices, column by column
        for col in 0..d {
            for_each_pair(n, gate.target, gate.control, |i0, i1| {
                let (a, b) = (data[i0 * d + col], data[i1 * d + col]);
                data[i0 * d + col] = m[0][0] * a + m[0][1] * b;
                data[i1 * d + col] = m[1][0] * a + m[1][1] * b;
            });
        }
        // U† from the right acts on column indices with the conjugated block
        for row in 0..d {
            for_each_pair(n, gate.target, gate.control, |j0, j1| {
                let (a, b) = (data[row * d + j0], data[row * d + j1]);
                data[row * d + j0] = a * m[0][0].conj() + b * m[0][1].conj();
                data[row * d + j1] = a * m[1][0].conj() + b * m[1][1].conj();
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("density matrix after gate"));
        }
        Ok(Self { n_qubits: n, data })
    }

    /// Depolarizing channel of strength `p` on `qubits`:
    /// `ρ ↦ (1−p) ρ + p · Tr_S[ρ] ⊗ I_S / 2^|S|`.
    pub fn depolarize(&self, qubits: &[usize], p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Probability {
                field: "depolarizing strength".into(),
                value: p,
            });
        }
        for &q in qubits {
            check_qubit(q, self.n_qubits)?;
        }
        if p == 0.0 || qubits.is_empty() {
            return Ok(self.clone());
        }
        let n = self.n_qubits;
        let d = self.dim();
        let s_mask = qubits.iter().fold(0, |acc, &q| acc | mask(n, q));
        let weight = 1.0 / (1u32 << qubits.len()) as f64;
        // every sub-mask of s_mask, i.e. every assignment of the channel qubits
        let assignments: Vec<usize> = (0..=s_mask).filter(|x| x & !s_mask == 0).collect();

        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut z = self.get(i, j) * (1.0 - p);
                if i & s_mask == j & s_mask {
                    let (ri, rj) = (i & !s_mask, j & !s_mask);
                    let reduced: Complex64 =
                        assignments.iter().map(|&b| self.get(ri | b, rj | b)).sum();
                    z += reduced * (p * weight);
                }
                data[i * d + j] = z;
            }
        }
        Ok(Self { n_qubits: n, data })
    }

    /// Computational-basis outcome distribution (the diagonal).
    pub fn measure_probabilities(&self) -> Distribution {
        let probs = (0..self.dim()).map(|i| self.get(i, i).re.max(0.0)).collect();
        Distribution::from_raw(self.n_qubits, probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::StateVector;
    use std::f64::consts::PI;

    fn bell() -> StateVector {
        StateVector::zero(2)
            .unwrap()
            .apply_gate(&GateOp::hadamard(0))
            .unwrap()
            .apply_gate(&GateOp::cnot(0, 1))
            .unwrap()
    }

    #[test]
    fn projector_is_idempotent() {
        for b in 0..2 {
            let p = Projector::new(0, b).unwrap().matrix();
            for i in 0..2 {
                for j in 0..2 {
                    let pp: f64 = (0..2).map(|k| p[i][k] * p[k][j]).sum();
                    assert!((pp - p[i][j]).abs() < 1e-12);
                }
            }
        }
        assert!(Projector::new(0, 2).is_err());
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell().to_density().partial_trace(&[0]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        for (a, b) in rho.entries().iter().zip(mixed.entries()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((rho.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_marginal_is_factor() {
        let s = StateVector::basis(2, 0b01).unwrap();
        let r0 = s.to_density().partial_trace(&[0]).unwrap();
        assert!((r0.get(0, 0).re - 1.0).abs() < 1e-12);
        let r1 = s.to_density().partial_trace(&[1]).unwrap();
        assert!((r1.get(1, 1).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_errors() {
        let rho = bell().to_density();
        assert!(matches!(rho.partial_trace(&[]), Err(Error::EmptyKeepSet)));
        assert!(matches!(rho.partial_trace(&[1, 1]), Err(Error::DuplicateQubit(1))));
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::QubitOutOfRange { .. })
        ));
        let full = rho.partial_trace(&[1, 0]).unwrap();
        assert_eq!(full, rho);
    }

    #[test]
    fn expectation_values() {
        let p0 = Projector::new(0, 0).unwrap();
        let zero = StateVector::zero(1).unwrap().to_density();
        assert_eq!(zero.expectation(&p0).unwrap(), 1.0);
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((mixed.expectation(&p0).unwrap() - 0.5).abs() < 1e-12);
        assert!(mixed.expectation(&Projector::new(1, 0).unwrap()).is_err());
    }

    #[test]
    fn imaginary_expectation_is_flagged() {
        let mut data = vec![Complex64::new(0.0, 0.0); 4];
        data[0] = Complex64::new(1.0, 1e-6);
        let rho = DensityMatrix::from_raw(1, data);
        assert!(matches!(
            rho.expectation(&Projector::new(0, 0).unwrap()),
            Err(Error::ImaginaryExpectation(_))
        ));
    }

    #[test]
    fn validation_catches_bad_matrices() {
        let c = |r| Complex64::new(r, 0.0);
        assert!(DensityMatrix::from_entries(1, vec![c(0.5), c(0.0), c(0.0), c(0.5)]).is_ok());
        // trace 2
        assert!(DensityMatrix::from_entries(1, vec![c(1.0), c(0.0), c(0.0), c(1.0)]).is_err());
        // eigenvalues 1.5, -0.5
        assert!(DensityMatrix::from_entries(1, vec![c(0.5), c(1.0), c(1.0), c(0.5)]).is_err());
        // not Hermitian
        assert!(DensityMatrix::from_entries(1, vec![c(0.5), c(0.1), c(0.0), c(0.5)]).is_err());
    }

    #[test]
    fn gate_conjugation_matches_pure_evolution() {
        let s = StateVector::zero(2).unwrap();
        let gates = [
            GateOp::hadamard(0),
            GateOp::phase(0, 0.7),
            GateOp::rot_y(1, PI / 3.0),
            GateOp::controlled_hadamard(1, 0),
        ];
        let mut psi = s.clone();
        let mut rho = s.to_density();
        for g in &gates {
            psi = psi.apply_gate(g).unwrap();
            rho = rho.apply_gate(g).unwrap();
        }
        for (a, b) in rho.entries().iter().zip(psi.to_density().entries()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn full_depolarization_is_the_fixed_point() {
        let rho = StateVector::zero(1)
            .unwrap()
            .apply_gate(&GateOp::hadamard(0))
            .unwrap()
            .to_density()
            .depolarize(&[0], 1.0)
            .unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        for (a, b) in rho.entries().iter().zip(mixed.entries()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(rho.depolarize(&[0], 1.5).is_err());
    }

    #[test]
    fn depolarizing_one_qubit_leaves_the_other_marginal() {
        let rho = bell().to_density().depolarize(&[0], 0.3).unwrap();
        rho.validate().unwrap();
        let before = bell().to_density().partial_trace(&[1]).unwrap();
        let after = rho.partial_trace(&[1]).unwrap();
        for (a, b) in before.entries().iter().zip(after.entries()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
