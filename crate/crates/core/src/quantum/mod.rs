//! Dense complex linear algebra on registers of one to four qubits.

mod density;
mod distribution;
mod gate;
mod state;

pub use density::{DensityMatrix, Projector};
pub use distribution::Distribution;
pub use gate::{GateKind, GateOp, Matrix2};
pub use state::StateVector;

pub use num_complex::Complex64;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 4;

pub(crate) fn check_qubit_count(n_qubits: usize) -> crate::Result<()> {
    if (1..=MAX_QUBITS).contains(&n_qubits) {
        Ok(())
    } else {
        Err(crate::Error::QubitCount(n_qubits))
    }
}

pub(crate) fn check_qubit(qubit: usize, n_qubits: usize) -> crate::Result<()> {
    if qubit < n_qubits {
        Ok(())
    } else {
        Err(crate::Error::QubitOutOfRange { qubit, n_qubits })
    }
}

pub(crate) fn check_outcome(outcome: u8) -> crate::Result<()> {
    if outcome <= 1 {
        Ok(())
    } else {
        Err(crate::Error::domain("outcome", format!("{outcome} is not a bit")))
    }
}

/// Bit mask of `qubit` inside a basis index (qubit 0 is the MSB).
#[inline]
pub(crate) fn mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Visits every `(i0, i1)` index pair that differs only in the target bit
/// (`i0` has it clear), restricted to indices where the control bit is set.
pub(crate) fn for_each_pair(
    n_qubits: usize,
    target: usize,
    control: Option<usize>,
    mut f: impl FnMut(usize, usize),
) {
    let t = mask(n_qubits, target);
    let c = control.map_or(0, |c| mask(n_qubits, c));
    for i0 in 0..1usize << n_qubits {
        if i0 & t == 0 && i0 & c == c {
            f(i0, i0 | t);
        }
    }
}
