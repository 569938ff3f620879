use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::check_qubit;
use crate::{Error, Result};

/// Row-major 2×2 complex matrix.
pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The gate set needed by the delayed-choice circuits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    Hadamard,
    /// `diag(1, e^{iφ})`, the phase shifter.
    Phase(f64),
    /// Real rotation with `|0⟩ ↦ cos α|0⟩ + sin α|1⟩`.
    ///
    /// This is `exp(-iασ_y)` in the usual convention, i.e. a half-angle
    /// rotation by `2α` on the Bloch sphere. The state it prepares is what
    /// matters, so the operator is defined by that action.
    RotY(f64),
    /// Controlled NOT.
    Cnot,
    /// Controlled Hadamard, the quantum-controlled second beam splitter.
    ControlledHadamard,
    /// Generic single-qubit rotation in the hardware `U3(θ, φ, λ)` form.
    U3 { theta: f64, phi: f64, lambda: f64 },
}

impl GateKind {
    pub fn is_controlled(&self) -> bool {
        matches!(self, GateKind::Cnot | GateKind::ControlledHadamard)
    }

    /// The 2×2 block that acts on the target (when the control is set).
    pub fn block(&self) -> Matrix2 {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match *self {
            GateKind::Hadamard | GateKind::ControlledHadamard => [[h, h], [h, -h]],
            GateKind::Phase(phi) => [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, phi)]],
            GateKind::RotY(alpha) => {
                let (s, c) = alpha.sin_cos();
                [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ]
            }
            GateKind::Cnot => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::U3 { theta, phi, lambda } => {
                let (s, c) = (theta / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
                    [
                        Complex64::from_polar(s, phi),
                        Complex64::from_polar(c, phi + lambda),
                    ],
                ]
            }
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Phase(p) | GateKind::RotY(p) => vec![p],
            GateKind::U3 { theta, phi, lambda } => vec![theta, phi, lambda],
            _ => Vec::new(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            GateKind::Hadamard => "hadamard",
            GateKind::Phase(_) => "phase",
            GateKind::RotY(_) => "rot_y",
            GateKind::Cnot => "cnot",
            GateKind::ControlledHadamard => "controlled_hadamard",
            GateKind::U3 { .. } => "u3",
        }
    }
}

/// A gate bound to register positions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "GateRecord", try_from = "GateRecord")]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
}

impl GateOp {
    pub fn hadamard(target: usize) -> Self {
        Self::single(GateKind::Hadamard, target)
    }

    pub fn phase(target: usize, phi: f64) -> Self {
        Self::single(GateKind::Phase(phi), target)
    }

    pub fn rot_y(target: usize, alpha: f64) -> Self {
        Self::single(GateKind::RotY(alpha), target)
    }

    pub fn u3(target: usize, theta: f64, phi: f64, lambda: f64) -> Self {
        Self::single(GateKind::U3 { theta, phi, lambda }, target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cnot,
            target,
            control: Some(control),
        }
    }

    pub fn controlled_hadamard(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::ControlledHadamard,
            target,
            control: Some(control),
        }
    }

    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            control: None,
        }
    }

    /// Qubits touched by the gate, control first.
    pub fn qubits(&self) -> Vec<usize> {
        self.control.into_iter().chain([self.target]).collect()
    }

    /// Checks indices and parameters against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        check_qubit(self.target, n_qubits)?;
        if self.kind.is_controlled() != self.control.is_some() {
            return Err(Error::domain(
                "controls",
                format!("{} takes {} control(s)", self.kind.name(), self.kind.is_controlled() as u8),
            ));
        }
        if let Some(c) = self.control {
            check_qubit(c, n_qubits)?;
            if c == self.target {
                return Err(Error::ControlIsTarget(c));
            }
        }
        if self.kind.params().iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("gate parameter"));
        }
        Ok(())
    }

    /// Row-major unitary on the gate's own qubits (control is the high bit),
    /// 2×2 for single-qubit gates and 4×4 for controlled ones.
    pub fn local_matrix(&self) -> Vec<Complex64> {
        let b = self.kind.block();
        if self.control.is_none() {
            return vec![b[0][0], b[0][1], b[1][0], b[1][1]];
        }
        let mut m = vec![ZERO; 16];
        m[0] = ONE;
        m[5] = ONE;
        for r in 0..2 {
            for c in 0..2 {
                m[(2 + r) * 4 + 2 + c] = b[r][c];
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    targets: Vec<usize>,
    controls: Vec<usize>,
    params: Vec<f64>,
}

impl From<GateOp> for GateRecord {
    fn from(op: GateOp) -> Self {
        Self {
            kind: op.kind.name().to_owned(),
            targets: vec![op.target],
            controls: op.control.into_iter().collect(),
            params: op.kind.params(),
        }
    }
}

impl TryFrom<GateRecord> for GateOp {
    type Error = Error;

    fn try_from(r: GateRecord) -> Result<Self> {
        let p = &r.params;
        let arity = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(Error::domain("params", format!("{} expects {n} parameter(s)", r.kind)))
            }
        };
        let kind = match r.kind.as_str() {
            "hadamard" => arity(0).map(|_| GateKind::Hadamard),
            "phase" => arity(1).map(|_| GateKind::Phase(p[0])),
            "rot_y" => arity(1).map(|_| GateKind::RotY(p[0])),
            "cnot" => arity(0).map(|_| GateKind::Cnot),
            "controlled_hadamard" => arity(0).map(|_| GateKind::ControlledHadamard),
            "u3" => arity(3).map(|_| GateKind::U3 {
                theta: p[0],
                phi: p[1],
                lambda: p[2],
            }),
            other => Err(Error::domain("kind", format!("unknown gate `{other}`"))),
        }?;
        let [target] = r.targets[..] else {
            return Err(Error::domain("targets", "exactly one target expected"));
        };
        let control = match r.controls[..] {
            [] => None,
            [c] => Some(c),
            _ => return Err(Error::domain("controls", "at most one control expected")),
        };
        Ok(GateOp {
            kind,
            target,
            control,
        })
    }
}
