use rayon::prelude::*;

use crate::analytic::{hv_intensity, qm_entangled_as_printed, qm_entangled_simulated};
use crate::{Error, Result};

/// QM and HV intensities at one `(α, φ, branch)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub alpha: f64,
    pub phi: f64,
    pub branch: u8,
    /// Simulated `D_0` intensity given the partner read `branch`.
    pub qm_e0: f64,
    pub qm_joint_e0: f64,
    pub branch_prob: f64,
    pub hv_e0: f64,
    /// The as-printed closed form, for the discrepancy report only.
    pub printed_e0: f64,
}

impl ComparisonRow {
    pub fn divergence(&self) -> f64 {
        (self.qm_e0 - self.hv_e0).abs()
    }
}

/// Largest QM/HV gap over φ for one `(α, branch)` curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub branch: u8,
    pub max_divergence: f64,
    pub at_phi: f64,
}

/// As-printed entangled closed form against simulation at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrintedDiscrepancy {
    pub alpha: f64,
    pub phi: f64,
    pub branch: u8,
    pub printed: f64,
    pub conditional: f64,
    pub joint: f64,
}

impl PrintedDiscrepancy {
    pub fn at(alpha: f64, phi: f64, branch: u8) -> Result<Self> {
        let sim = qm_entangled_simulated(alpha, phi, branch)?;
        Ok(Self {
            alpha,
            phi,
            branch,
            printed: qm_entangled_as_printed(alpha, phi, branch)?,
            conditional: sim.conditional.e0,
            joint: sim.joint.e0,
        })
    }

    /// True when the printed value matches neither simulated reading.
    pub fn is_discrepant(&self, tol: f64) -> bool {
        (self.printed - self.conditional).abs() > tol && (self.printed - self.joint).abs() > tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// α-major, then φ, then branch.
    pub rows: Vec<ComparisonRow>,
    pub summaries: Vec<AlphaSummary>,
    /// Checked at `α = φ = 0`, branch 0.
    pub discrepancy: PrintedDiscrepancy,
}

impl Comparison {
    /// The `(φ, e0)` curve for one `(α, branch)`; `hv` picks the HV column.
    pub fn curve(&self, alpha: f64, branch: u8, hv: bool) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.alpha.to_bits() == alpha.to_bits() && r.branch == branch)
            .map(|r| (r.phi, if hv { r.hv_e0 } else { r.qm_e0 }))
            .collect()
    }

    pub fn summary(&self, alpha: f64, branch: u8) -> Option<&AlphaSummary> {
        self.summaries
            .iter()
            .find(|s| s.alpha.to_bits() == alpha.to_bits() && s.branch == branch)
    }
}

/// Entangled-ancilla QM intensities (both branches) against the
/// α-independent hidden-variable prediction on an `α × φ` grid.
pub fn compare_qm_hv(alpha_values: &[f64], phi_grid: &[f64]) -> Result<Comparison> {
    if alpha_values.is_empty() {
        return Err(Error::Empty("alpha values"));
    }
    if phi_grid.is_empty() {
        return Err(Error::Empty("phi grid"));
    }
    let points: Vec<(f64, f64, u8)> = alpha_values
        .iter()
        .flat_map(|&a| phi_grid.iter().flat_map(move |&p| [(a, p, 0), (a, p, 1)]))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(alpha, phi, branch)| {
            let sim = qm_entangled_simulated(alpha, phi, branch)?;
            Ok(ComparisonRow {
                alpha,
                phi,
                branch,
                qm_e0: sim.conditional.e0,
                qm_joint_e0: sim.joint.e0,
                branch_prob: sim.branch_prob,
                hv_e0: hv_intensity(phi),
                printed_e0: qm_entangled_as_printed(alpha, phi, branch)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut summaries = Vec::new();
    for &alpha in alpha_values {
        for branch in 0..2u8 {
            let best = rows
                .iter()
                .filter(|r| r.alpha.to_bits() == alpha.to_bits() && r.branch == branch)
                .fold(None::<&ComparisonRow>, |best, r| match best {
                    Some(b) if b.divergence() >= r.divergence() => Some(b),
                    _ => Some(r),
                })
                .expect("phi grid is non-empty");
            summaries.push(AlphaSummary {
                alpha,
                branch,
                max_divergence: best.divergence(),
                at_phi: best.phi,
            });
        }
    }
    Ok(Comparison {
        rows,
        summaries,
        discrepancy: PrintedDiscrepancy::at(0.0, 0.0, 0)?,
    })
}
