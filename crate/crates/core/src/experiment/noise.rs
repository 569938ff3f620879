use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::quantum::{DensityMatrix, Distribution, GateOp, StateVector};
use crate::{Error, Result};

const MELBOURNE: &str = include_str!("../../data/melbourne_q8_q9_q10.json");

/// Calibration data for one logical qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct QubitNoise {
    /// Depolarizing strength applied after every single-qubit gate.
    pub gate_error: f64,
    /// Symmetric readout bit-flip probability.
    pub readout_error: f64,
    /// Carried for provenance; not simulated.
    pub t1_us: Option<f64>,
    /// Carried for provenance; not simulated.
    pub t2_us: Option<f64>,
    pub physical: Option<u32>,
}

impl QubitNoise {
    pub fn new(gate_error: f64, readout_error: f64) -> Self {
        Self {
            gate_error,
            readout_error,
            t1_us: None,
            t2_us: None,
            physical: None,
        }
    }
}

/// Per-gate depolarizing rates and readout errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "NoiseFile", try_from = "NoiseFile")]
pub struct NoiseModel {
    pub device: Option<String>,
    pub per_qubit: BTreeMap<usize, QubitNoise>,
    /// Two-qubit depolarizing strength keyed by `(control, target)`.
    pub cnot_error: BTreeMap<(usize, usize), f64>,
}

impl NoiseModel {
    /// Every rate zero on qubits `0..n_qubits`, and on all ordered pairs.
    pub fn noiseless(n_qubits: usize) -> Self {
        let per_qubit = (0..n_qubits).map(|q| (q, QubitNoise::new(0.0, 0.0))).collect();
        let cnot_error = (0..n_qubits)
            .flat_map(|c| (0..n_qubits).filter(move |&t| t != c).map(move |t| ((c, t), 0.0)))
            .collect();
        Self {
            device: None,
            per_qubit,
            cnot_error,
        }
    }

    /// ibmq_16_melbourne calibration for physical qubits 8, 9, 10, mapped to
    /// logical qubits 0, 1, 2.
    pub fn melbourne() -> Self {
        serde_json::from_str(MELBOURNE).expect("bundled noise model is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let check = |field: String, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(Error::Probability { field, value })
            }
        };
        for (q, n) in &self.per_qubit {
            check(format!("qubits[{q}].gate_error"), n.gate_error)?;
            check(format!("qubits[{q}].readout_error"), n.readout_error)?;
        }
        for ((c, t), &e) in &self.cnot_error {
            check(format!("cnot_error[{c}->{t}]"), e)?;
        }
        Ok(())
    }

    /// Depolarizing strength that follows `op`.
    pub fn gate_error(&self, op: &GateOp) -> Result<f64> {
        match op.control {
            Some(c) => self
                .cnot_error
                .get(&(c, op.target))
                .copied()
                .ok_or_else(|| Error::MissingNoise(format!("two-qubit gate {c}->{}", op.target))),
            None => self
                .per_qubit
                .get(&op.target)
                .map(|n| n.gate_error)
                .ok_or_else(|| Error::MissingNoise(format!("qubit {}", op.target))),
        }
    }

    /// Checks that every qubit and gate of `circuit` has calibration data.
    pub fn covers(&self, circuit: &Circuit) -> Result<()> {
        for q in 0..circuit.n_qubits() {
            if !self.per_qubit.contains_key(&q) {
                return Err(Error::MissingNoise(format!("qubit {q}")));
            }
        }
        for op in circuit.ops() {
            self.gate_error(op)?;
        }
        Ok(())
    }
}

/// Evolves `|0…0⟩⟨0…0|` through `circuit`, following each gate with a
/// depolarizing channel on the qubits it touched.
pub fn apply_noise(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    noise.validate()?;
    noise.covers(circuit)?;
    let mut rho = StateVector::zero(circuit.n_qubits())?.to_density();
    for op in circuit.ops() {
        rho = rho.apply_gate(op)?.depolarize(&op.qubits(), noise.gate_error(op)?)?;
    }
    Ok(rho)
}

/// Flips each measured bit independently with its readout error. Bits with
/// no calibration entry are read perfectly.
pub fn apply_readout_error(dist: &Distribution, noise: &NoiseModel) -> Distribution {
    (0..dist.n_bits()).fold(dist.clone(), |d, q| {
        let r = noise.per_qubit.get(&q).map_or(0.0, |n| n.readout_error);
        d.with_bit_flip(q, r).expect("bit index in range")
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    device: Option<String>,
    qubits: Vec<QubitEntry>,
    #[serde(default)]
    cnot_error: Vec<PairEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitEntry {
    qubit: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    physical: Option<u32>,
    gate_error: f64,
    readout_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t1_us: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t2_us: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    control: usize,
    target: usize,
    error: f64,
}

impl From<NoiseModel> for NoiseFile {
    fn from(m: NoiseModel) -> Self {
        Self {
            device: m.device,
            qubits: m
                .per_qubit
                .into_iter()
                .map(|(qubit, n)| QubitEntry {
                    qubit,
                    physical: n.physical,
                    gate_error: n.gate_error,
                    readout_error: n.readout_error,
                    t1_us: n.t1_us,
                    t2_us: n.t2_us,
                })
                .collect(),
            cnot_error: m
                .cnot_error
                .into_iter()
                .map(|((control, target), error)| PairEntry {
                    control,
                    target,
                    error,
                })
                .collect(),
        }
    }
}

impl TryFrom<NoiseFile> for NoiseModel {
    type Error = Error;

    fn try_from(f: NoiseFile) -> Result<Self> {
        let mut per_qubit = BTreeMap::new();
        for q in f.qubits {
            let entry = QubitNoise {
                gate_error: q.gate_error,
                readout_error: q.readout_error,
                t1_us: q.t1_us,
                t2_us: q.t2_us,
                physical: q.physical,
            };
            if per_qubit.insert(q.qubit, entry).is_some() {
                return Err(Error::domain("qubits", format!("qubit {} listed twice", q.qubit)));
            }
        }
        let mut cnot_error = BTreeMap::new();
        for p in f.cnot_error {
            if p.control == p.target {
                return Err(Error::domain("cnot_error", "control equals target"));
            }
            if cnot_error.insert((p.control, p.target), p.error).is_some() {
                return Err(Error::domain(
                    "cnot_error",
                    format!("pair {}->{} listed twice", p.control, p.target),
                ));
            }
        }
        let m = NoiseModel {
            device: f.device,
            per_qubit,
            cnot_error,
        };
        m.validate()?;
        Ok(m)
    }
}
