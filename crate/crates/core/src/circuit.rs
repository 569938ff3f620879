//! Circuit representation and the two delayed-choice circuit builders.
//!
//! Qubit roles are fixed across both schemes: qubit 0 is the system (the
//! photon path), qubit 1 the ancilla controlling the second beam splitter,
//! and in the entangled scheme qubit 2 is the ancilla's EPR partner.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::quantum::{check_qubit_count, GateOp, StateVector};
use crate::{Error, Result};

pub const SYSTEM: usize = 0;
pub const ANCILLA: usize = 1;
pub const PARTNER: usize = 2;

/// Which delayed-choice variant a circuit or sweep belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    /// Single quantum-controlled ancilla, two qubits.
    #[serde(rename = "QDCE")]
    Qdce,
    /// Ancilla entangled with a partner qubit that is rotated late.
    #[serde(rename = "EA-QDCE")]
    EaQdce,
}

impl Scheme {
    pub fn n_qubits(self) -> usize {
        match self {
            Scheme::Qdce => 2,
            Scheme::EaQdce => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Qdce => "QDCE",
            Scheme::EaQdce => "EA-QDCE",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "QDCE" => Ok(Scheme::Qdce),
            "EA-QDCE" => Ok(Scheme::EaQdce),
            other => Err(Error::domain("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

/// Provenance of a builder-produced circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitMeta {
    pub scheme: Scheme,
    pub alpha: f64,
    pub phi: f64,
    /// Device qubits the logical qubits were mapped to, if known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub physical_qubits: Vec<u32>,
}

/// Ordered gate list on a fixed register. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawCircuit")]
pub struct Circuit {
    n_qubits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<CircuitMeta>,
    ops: Vec<GateOp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    n_qubits: usize,
    #[serde(default)]
    meta: Option<CircuitMeta>,
    ops: Vec<GateOp>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        let mut c = Circuit::new(raw.n_qubits)?;
        for op in raw.ops {
            c.push(op)?;
        }
        if let Some(meta) = raw.meta {
            if meta.scheme.n_qubits() != c.n_qubits {
                return Err(Error::domain(
                    "n_qubits",
                    format!("{} circuits have {} qubits", meta.scheme, meta.scheme.n_qubits()),
                ));
            }
            c.meta = Some(meta);
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        Ok(Self {
            n_qubits,
            meta: None,
            ops: Vec::new(),
        })
    }

    pub fn push(&mut self, op: GateOp) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn meta(&self) -> Option<&CircuitMeta> {
        self.meta.as_ref()
    }

    pub fn scheme(&self) -> Option<Scheme> {
        self.meta.as_ref().map(|m| m.scheme)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Applies the ops left to right to `|0…0⟩`.
    pub fn simulate(&self) -> Result<StateVector> {
        self.ops
            .iter()
            .try_fold(StateVector::zero(self.n_qubits)?, |s, op| s.apply_gate(op))
    }
}

/// Single-ancilla delayed choice: beam splitter and phase shifter on the
/// system, the ancilla rotated to `cos α|0⟩ + sin α|1⟩`, and a controlled
/// Hadamard acting as the quantum beam splitter.
pub fn build_qdce(phi: f64, alpha: f64) -> Circuit {
    let ops = vec![
        GateOp::hadamard(SYSTEM),
        GateOp::phase(SYSTEM, phi),
        GateOp::rot_y(ANCILLA, alpha),
        GateOp::controlled_hadamard(ANCILLA, SYSTEM),
    ];
    Circuit {
        n_qubits: 2,
        meta: Some(CircuitMeta {
            scheme: Scheme::Qdce,
            alpha,
            phi,
            physical_qubits: Vec::new(),
        }),
        ops,
    }
}

/// Entangled-ancilla delayed choice: the ancilla is half of an EPR pair and
/// the rotation by `α` is applied to its partner only after the ancilla has
/// controlled the beam splitter.
pub fn build_ea_qdce(phi: f64, alpha: f64) -> Circuit {
    let ops = vec![
        GateOp::hadamard(ANCILLA),
        GateOp::cnot(ANCILLA, PARTNER),
        GateOp::hadamard(SYSTEM),
        GateOp::phase(SYSTEM, phi),
        GateOp::controlled_hadamard(ANCILLA, SYSTEM),
        GateOp::rot_y(PARTNER, alpha),
    ];
    Circuit {
        n_qubits: 3,
        meta: Some(CircuitMeta {
            scheme: Scheme::EaQdce,
            alpha,
            phi,
            // ibmq_16_melbourne q[8], q[9], q[10]
            physical_qubits: vec![8, 9, 10],
        }),
        ops,
    }
}

pub fn build(scheme: Scheme, phi: f64, alpha: f64) -> Circuit {
    match scheme {
        Scheme::Qdce => build_qdce(phi, alpha),
        Scheme::EaQdce => build_ea_qdce(phi, alpha),
    }
}
