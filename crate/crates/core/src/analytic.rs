//! Closed-form detector intensities, the local hidden-variable model and
//! fringe visibility.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{build_ea_qdce, PARTNER, SYSTEM};
use crate::quantum::{check_outcome, DensityMatrix, Projector};
use crate::{Error, Result};

/// Detection probabilities at detectors `D_0` and `D_1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityPair {
    pub e0: f64,
    pub e1: f64,
}

impl IntensityPair {
    /// Reads both detectors off the system qubit of `rho`.
    pub fn from_system(rho: &DensityMatrix) -> Result<Self> {
        let sys = if rho.n_qubits() == 1 {
            rho.clone()
        } else {
            rho.partial_trace(&[SYSTEM])?
        };
        Ok(Self {
            e0: sys.expectation(&Projector::new(0, 0)?)?,
            e1: sys.expectation(&Projector::new(0, 1)?)?,
        })
    }

    pub fn scaled(self, k: f64) -> Self {
        Self {
            e0: self.e0 * k,
            e1: self.e1 * k,
        }
    }
}

/// Single-ancilla intensities for ancilla state `cos α|0⟩ + sin α|1⟩`:
/// a `cos²α` mixture of the flat particle response and a `sin²α` mixture
/// of the `cos²(φ/2)` wave fringe.
pub fn qm_single(alpha: f64, phi: f64) -> IntensityPair {
    let (sa, ca) = alpha.sin_cos();
    let (sh, ch) = (phi / 2.0).sin_cos();
    IntensityPair {
        e0: ca * ca / 2.0 + sa * sa * ch * ch,
        e1: ca * ca / 2.0 + sa * sa * sh * sh,
    }
}

/// The entangled-ancilla closed forms exactly as they were printed:
///
/// * branch 0: `cos²(α/4) + sin²α · cos²(φ/2) / 2`
/// * branch 1: `sin²(α/4) + cos²α · cos²(φ/2) / 2`
///
/// These do not agree with simulating the circuit (at `α = φ = 0`, branch 0
/// gives 1.0 where the circuit gives 0.5 conditional / 0.25 joint). They are
/// kept only so reports can show the discrepancy; use
/// [`qm_entangled_simulated`] for actual predictions.
pub fn qm_entangled_as_printed(alpha: f64, phi: f64, branch: u8) -> Result<f64> {
    check_outcome(branch)?;
    let c2 = (phi / 2.0).cos().powi(2);
    Ok(if branch == 0 {
        (alpha / 4.0).cos().powi(2) + alpha.sin().powi(2) * c2 / 2.0
    } else {
        (alpha / 4.0).sin().powi(2) + alpha.cos().powi(2) * c2 / 2.0
    })
}

/// Entangled-ancilla prediction for one post-selected branch of the partner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledIntensity {
    /// Intensities given the partner read `branch`; they sum to 1.
    pub conditional: IntensityPair,
    /// `conditional × branch_prob`.
    pub joint: IntensityPair,
    pub branch_prob: f64,
}

/// Simulates the entangled-ancilla circuit and post-selects the partner qubit.
pub fn qm_entangled_simulated(alpha: f64, phi: f64, branch: u8) -> Result<EntangledIntensity> {
    let state = build_ea_qdce(phi, alpha).simulate()?;
    let (rest, branch_prob) = state.post_select(PARTNER, branch)?;
    let conditional = IntensityPair::from_system(&rest.to_density())?;
    Ok(EntangledIntensity {
        conditional,
        joint: conditional.scaled(branch_prob),
        branch_prob,
    })
}

/// Hidden-variable intensity `1/4 + cos²(φ/2)/2`. It has no `α` dependence.
pub fn hv_intensity(phi: f64) -> f64 {
    0.25 + (phi / 2.0).cos().powi(2) / 2.0
}

/// Wave or particle character, fixed before detection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Behavior {
    /// Open interferometer: both detectors equally likely.
    Particle,
    /// Closed interferometer: `P(D_0) = cos²(φ/2)`.
    Wave,
}

/// One draw of the hidden-variable model.
///
/// `lambda1` is the pre-existing value of the ancilla's outcome. The
/// partner's own variable is independent of it and does not enter the
/// detector statistics, so it is not represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HvSample {
    pub lambda1: u8,
    pub behavior: Behavior,
}

impl HvSample {
    pub fn new(lambda1: u8) -> Result<Self> {
        check_outcome(lambda1)?;
        let behavior = if lambda1 == 0 {
            Behavior::Particle
        } else {
            Behavior::Wave
        };
        Ok(Self { lambda1, behavior })
    }

    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let lambda1 = rng.random_range(0..2u8);
        Self::new(lambda1).expect("0 or 1")
    }

    /// `P(D_0 | λ)`.
    pub fn detector_zero_probability(&self, phi: f64) -> f64 {
        match self.behavior {
            Behavior::Particle => 0.5,
            Behavior::Wave => (phi / 2.0).cos().powi(2),
        }
    }
}

/// Empirical `D_0` rate of the hidden-variable model over `n_samples` draws.
pub fn hv_monte_carlo(phi: f64, n_samples: u64, seed: u64) -> Result<f64> {
    if n_samples == 0 {
        return Err(Error::domain("n_samples", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..n_samples {
        let sample = HvSample::draw(&mut rng);
        if rng.random_bool(sample.detector_zero_probability(phi)) {
            hits += 1;
        }
    }
    Ok(hits as f64 / n_samples as f64)
}

/// Fringe visibility `(E_max − E_min) / (E_max + E_min)` of an intensity curve.
///
/// An all-zero curve has visibility 0.
pub fn visibility(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.is_empty() {
        return Err(Error::Empty("visibility curve"));
    }
    if let Some(&(_, e)) = curve.iter().find(|(_, e)| !(0.0..=1.0).contains(e)) {
        return Err(Error::Probability {
            field: "intensity".into(),
            value: e,
        });
    }
    let (lo, hi) = curve
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, e)| {
            (lo.min(e), hi.max(e))
        });
    if hi + lo == 0.0 {
        return Ok(0.0);
    }
    Ok((hi - lo) / (hi + lo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_qdce;
    use std::f64::consts::PI;

    #[test]
    fn qm_single_examples() {
        for k in 0..10 {
            let p = qm_single(0.0, k as f64 * 0.7);
            assert!((p.e0 - 0.5).abs() < 1e-15 && (p.e1 - 0.5).abs() < 1e-15);
        }
        let p = qm_single(PI / 2.0, PI);
        assert!(p.e0.abs() < 1e-15 && (p.e1 - 1.0).abs() < 1e-15);
        let p = qm_single(PI / 3.0, PI / 3.0);
        assert!((p.e0 - 0.6875).abs() < 1e-12 && (p.e1 - 0.3125).abs() < 1e-12);
    }

    #[test]
    fn qm_single_matches_circuit_on_grid() {
        for i in 0..16 {
            for j in 0..16 {
                let alpha = i as f64 * PI / 30.0;
                let phi = j as f64 * 2.0 * PI / 15.0;
                let rho = build_qdce(phi, alpha).simulate().unwrap().to_density();
                let sim = IntensityPair::from_system(&rho).unwrap();
                let cf = qm_single(alpha, phi);
                assert!((sim.e0 - cf.e0).abs() < 1e-10 && (sim.e1 - cf.e1).abs() < 1e-10);
                assert!((cf.e0 + cf.e1 - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn as_printed_values() {
        assert_eq!(qm_entangled_as_printed(0.0, 0.0, 0).unwrap(), 1.0);
        assert_eq!(qm_entangled_as_printed(0.0, 0.0, 1).unwrap(), 0.5);
        assert!(qm_entangled_as_printed(0.0, 0.0, 2).is_err());
    }

    #[test]
    fn simulated_entangled_at_origin_differs_from_printed() {
        let r = qm_entangled_simulated(0.0, 0.0, 0).unwrap();
        assert!((r.conditional.e0 - 0.5).abs() < 1e-12);
        assert!((r.joint.e0 - 0.25).abs() < 1e-12);
        assert!((r.branch_prob - 0.5).abs() < 1e-12);
    }

    #[test]
    fn simulated_entangled_branch_laws() {
        for k in 0..9 {
            let phi = k as f64 * PI / 4.0;
            let b0 = qm_entangled_simulated(0.0, phi, 0).unwrap();
            let b1 = qm_entangled_simulated(0.0, phi, 1).unwrap();
            assert!((b0.conditional.e0 - 0.5).abs() < 1e-12);
            assert!((b1.conditional.e0 - (phi / 2.0).cos().powi(2)).abs() < 1e-12);
            assert!((b1.conditional.e1 - (phi / 2.0).sin().powi(2)).abs() < 1e-12);
            for alpha in [0.1, 0.7, 1.3] {
                let b0 = qm_entangled_simulated(alpha, phi, 0).unwrap();
                let b1 = qm_entangled_simulated(alpha, phi, 1).unwrap();
                let total = IntensityPair::from_system(
                    &build_ea_qdce(phi, alpha).simulate().unwrap().to_density(),
                )
                .unwrap();
                assert!((b0.joint.e0 + b1.joint.e0 - total.e0).abs() < 1e-12);
                assert!((b0.branch_prob + b1.branch_prob - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn alpha_dependence_that_hv_lacks() {
        let diff = (0..64)
            .map(|k| k as f64 * 2.0 * PI / 63.0)
            .map(|phi| {
                let a = qm_entangled_simulated(0.0, phi, 0).unwrap().conditional.e0;
                let b = qm_entangled_simulated(PI / 4.0, phi, 0).unwrap().conditional.e0;
                (a - b).abs()
            })
            .fold(0.0, f64::max);
        assert!(diff > 0.05);
    }

    #[test]
    fn hv_intensity_values() {
        assert_eq!(hv_intensity(0.0), 0.75);
        assert!((hv_intensity(PI) - 0.25).abs() < 1e-16);
        assert!((hv_intensity(PI / 2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hv_sample_behavior_follows_lambda() {
        assert_eq!(HvSample::new(0).unwrap().behavior, Behavior::Particle);
        assert_eq!(HvSample::new(1).unwrap().behavior, Behavior::Wave);
        assert!(HvSample::new(2).is_err());
    }

    #[test]
    fn hv_monte_carlo_single_draw_and_errors() {
        let v = hv_monte_carlo(0.3, 1, 9).unwrap();
        assert!(v == 0.0 || v == 1.0);
        assert!(hv_monte_carlo(0.3, 0, 9).is_err());
        assert_eq!(hv_monte_carlo(1.0, 1000, 5).unwrap(), hv_monte_carlo(1.0, 1000, 5).unwrap());
    }

    #[test]
    fn hv_monte_carlo_converges() {
        let n = 1_000_000;
        for (phi, seed) in [(0.0, 1), (PI, 2)] {
            let p = hv_intensity(phi);
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            let est = hv_monte_carlo(phi, n, seed).unwrap();
            assert!((est - p).abs() <= 3.0 * sigma, "φ={phi}: {est} vs {p}");
        }
    }

    #[test]
    fn visibility_extremes() {
        let grid: Vec<f64> = (0..256).map(|k| k as f64 * 2.0 * PI / 256.0).collect();
        let curve = |alpha: f64| -> Vec<(f64, f64)> {
            grid.iter().map(|&p| (p, qm_single(alpha, p).e0)).collect()
        };
        assert!(visibility(&curve(0.0)).unwrap().abs() < 1e-12);
        assert!((visibility(&curve(PI / 2.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((visibility(&curve(PI / 4.0)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn visibility_edge_cases() {
        assert!(matches!(visibility(&[]), Err(Error::Empty(_))));
        assert_eq!(visibility(&[(0.0, 0.0), (1.0, 0.0)]).unwrap(), 0.0);
        assert!(visibility(&[(0.0, 1.5)]).is_err());
    }
}
