//! Sweep driver, shot sampling, device noise and the QM/HV comparison.

mod compare;
mod noise;
mod sampling;
mod sweep;

pub use compare::{compare_qm_hv, AlphaSummary, Comparison, ComparisonRow, PrintedDiscrepancy};
pub use noise::{apply_noise, apply_readout_error, NoiseModel, QubitNoise};
pub use sampling::{sample_counts, sample_shots, Counts};
pub use sweep::{
    alpha_grid, periodic_phi_grid, phi_grid, run_sweep, visibility_by_alpha, IntensityRecord,
    Mode, SweepConfig, VisibilityPoint, DEFAULT_PHI_STEPS, DEFAULT_REPETITIONS, DEFAULT_SHOTS,
};
