// Copyright 2026 The photonic-shor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Lowering of H/CZ qubit circuits onto dual-rail coupler networks.
//!
//! Qubit `i` owns rails `(2i, 2i + 1)`. Every `H` becomes a 1/2
//! reflectivity coupler across the qubit's rails. Every `CZ(c, t)` becomes
//! three 1/3 reflectivity couplers: one joining the two "1" rails, and one
//! from each "0" rail into its own fresh vacuum ancilla, appended after all
//! rails in gate order. Conditioned on one photon per qubit and empty
//! ancillas, the gadget applies `CZ / 3` (up to a global sign), so each
//! gate succeeds with probability 1/9.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{apply_unitary, FockError, OccupationVector, PhotonicState};
use crate::matrix::ComplexMatrix;
use crate::photonics::{
    network_unitary, postselect, Coupler, CouplerConvention, CouplerNetwork, PhotonicsError, PostselectedResult,
    RailPair,
};

pub const CIRCUIT_FORMAT_VERSION: u32 = 1;

/// Reflectivity realizing a Hadamard.
pub const HADAMARD_REFLECTIVITY: f64 = 0.5;
/// Reflectivity of all three couplers of the CZ gadget.
pub const CZ_REFLECTIVITY: f64 = 1.0 / 3.0;
/// Post-selection success probability of one CZ gadget.
pub const CZ_SUCCESS_PROBABILITY: f64 = 1.0 / 9.0;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("unsupported gate kind {0:?}")]
    UnsupportedGate(String),
    #[error("gate {kind} expects {expected} operand(s), got {found}")]
    Arity {
        kind: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown qubit {0:?}")]
    UnknownQubit(String),
    #[error("qubit index {index} out of range for {count} qubits")]
    QubitOutOfRange { index: usize, count: usize },
    #[error("CZ operands must be distinct, got {0:?} twice")]
    RepeatedOperand(String),
    #[error("duplicate qubit label {0:?}")]
    DuplicateLabel(String),
    #[error("{labels} qubit labels but {bits} initial bits")]
    InitialBitsLength { labels: usize, bits: usize },
    #[error("initial bit {0} is not 0 or 1")]
    InvalidBit(u8),
    #[error("circuit qubits {circuit:?} do not match network rails {network:?}")]
    RailMismatch { circuit: Vec<String>, network: Vec<String> },
    #[error("network is not a single two-qubit CZ gadget")]
    NotAGadget,
    #[error("unsupported circuit document version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Photonics(#[from] PhotonicsError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("malformed circuit document: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    Cz(usize, usize),
}

/// An initial computational basis state followed by H and CZ gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitCircuit {
    qubit_labels: Vec<String>,
    initial_bits: Vec<bool>,
    gates: Vec<Gate>,
}

impl QubitCircuit {
    pub fn new(qubit_labels: Vec<String>, initial_bits: Vec<bool>, gates: Vec<Gate>) -> Result<Self, CompileError> {
        let mut seen = BTreeSet::new();
        for label in &qubit_labels {
            if !seen.insert(label.as_str()) {
                return Err(CompileError::DuplicateLabel(label.clone()));
            }
        }
        if qubit_labels.len() != initial_bits.len() {
            return Err(CompileError::InitialBitsLength {
                labels: qubit_labels.len(),
                bits: initial_bits.len(),
            });
        }
        let count = qubit_labels.len();
        let check = |index: usize| {
            if index < count {
                Ok(())
            } else {
                Err(CompileError::QubitOutOfRange { index, count })
            }
        };
        for gate in &gates {
            match *gate {
                Gate::H(q) => check(q)?,
                Gate::Cz(c, t) => {
                    check(c)?;
                    check(t)?;
                    if c == t {
                        return Err(CompileError::RepeatedOperand(qubit_labels[c].clone()));
                    }
                }
            }
        }
        Ok(QubitCircuit {
            qubit_labels,
            initial_bits,
            gates,
        })
    }

    pub fn qubit_labels(&self) -> &[String] {
        &self.qubit_labels
    }

    pub fn initial_bits(&self) -> &[bool] {
        &self.initial_bits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_labels.len()
    }

    pub fn cz_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cz(..))).count()
    }

    pub fn h_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::H(_))).count()
    }

    pub fn qubit_index(&self, label: &str) -> Option<usize> {
        self.qubit_labels.iter().position(|l| l == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitDoc::from(self)).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CompileError> {
        let doc: CircuitDoc = serde_json::from_str(text)?;
        QubitCircuit::try_from(doc)
    }
}

/// The compiled order-finding circuit for N = 15, a = 2 on qubits
/// `(x1, x2, f1, f2)` starting from `|0001>`.
///
/// Each argument qubit is paired with one function qubit by an
/// `H H · CZ · H` block, which leaves `(|00> + |11>)/√2` on `(x1, f1)` and
/// `(|01> + |10>)/√2` on `(x2, f2)`.
pub fn shor15_circuit() -> QubitCircuit {
    let labels = ["x1", "x2", "f1", "f2"].map(String::from).to_vec();
    let (x1, x2, f1, f2) = (0, 1, 2, 3);
    let gates = vec![
        Gate::H(x1),
        Gate::H(f1),
        Gate::Cz(x1, f1),
        Gate::H(f1),
        Gate::H(x2),
        Gate::H(f2),
        Gate::Cz(x2, f2),
        Gate::H(f2),
    ];
    QubitCircuit::new(labels, vec![false, false, false, true], gates).expect("valid circuit")
}

/// A lowered network with the bookkeeping needed to check it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweringReport {
    pub network: CouplerNetwork,
    /// `(1/9)^gadget_count`
    pub expected_success_probability: f64,
    pub gadget_count: usize,
}

pub fn lower(circuit: &QubitCircuit) -> LoweringReport {
    lower_with(circuit, CouplerConvention::RealSigned)
}

/// Lowers `circuit` with every coupler in the given phase convention.
pub fn lower_with(circuit: &QubitCircuit, convention: CouplerConvention) -> LoweringReport {
    let qubits = circuit.qubit_count();
    let rails: Vec<RailPair> = (0..qubits)
        .map(|q| RailPair {
            zero: 2 * q,
            one: 2 * q + 1,
        })
        .collect();
    let mut next_ancilla = 2 * qubits;
    let mut ancillas = BTreeSet::new();
    let mut couplers = Vec::with_capacity(circuit.gates.len() * 3);
    let mut gadget_count = 0;

    for gate in &circuit.gates {
        match *gate {
            Gate::H(q) => couplers.push(Coupler::new(rails[q].zero, rails[q].one, HADAMARD_REFLECTIVITY)),
            Gate::Cz(c, t) => {
                let (anc_c, anc_t) = (next_ancilla, next_ancilla + 1);
                next_ancilla += 2;
                ancillas.extend([anc_c, anc_t]);
                gadget_count += 1;
                // Orientation fixes the real_signed signs: the control "0"
                // rail stays with +1/√3, the target "0" rail with -1/√3 and
                // the coincidence on the "1" rails with +1/3.
                couplers.push(Coupler::new(rails[c].zero, anc_c, CZ_REFLECTIVITY));
                couplers.push(Coupler::new(rails[c].one, rails[t].one, CZ_REFLECTIVITY));
                couplers.push(Coupler::new(anc_t, rails[t].zero, CZ_REFLECTIVITY));
            }
        }
    }
    for c in &mut couplers {
        c.convention = convention;
    }

    let rail_map: IndexMap<String, RailPair> = circuit.qubit_labels.iter().cloned().zip(rails).collect();
    let metadata = format!(
        "dual-rail lowering: {} qubits, {} H couplers, {} CZ gadgets",
        qubits,
        circuit.h_count(),
        gadget_count
    );
    let network = CouplerNetwork::new(next_ancilla, couplers, rail_map, ancillas, metadata)
        .expect("lowering produces a valid network");
    LoweringReport {
        network,
        expected_success_probability: CZ_SUCCESS_PROBABILITY.powi(gadget_count as i32),
        gadget_count,
    }
}

/// One photon in rail `initial_bits[q]` of every qubit, vacuum elsewhere.
pub fn input_state(circuit: &QubitCircuit, net: &CouplerNetwork) -> Result<PhotonicState, CompileError> {
    let network_labels: Vec<&String> = net.rail_map().keys().collect();
    let circuit_labels: Vec<&String> = circuit.qubit_labels.iter().collect();
    if network_labels != circuit_labels {
        return Err(CompileError::RailMismatch {
            circuit: circuit.qubit_labels.clone(),
            network: net.rail_map().keys().cloned().collect(),
        });
    }
    let mut counts = vec![0u32; net.mode_count()];
    for (pair, &bit) in net.rail_map().values().zip(&circuit.initial_bits) {
        counts[if bit { pair.one } else { pair.zero }] = 1;
    }
    Ok(PhotonicState::basis(OccupationVector::new(counts)))
}

/// Runs the full photonic path: lower, prepare, evolve, post-select.
pub fn simulate_lowered(
    circuit: &QubitCircuit,
    convention: CouplerConvention,
) -> Result<(LoweringReport, PostselectedResult), CompileError> {
    let report = lower_with(circuit, convention);
    let input = input_state(circuit, &report.network)?;
    let unitary = network_unitary(&report.network)?;
    let output = apply_unitary(&unitary, &input)?;
    let result = postselect(&output, &report.network)?;
    Ok((report, result))
}

/// Post-selected transfer amplitudes of a single CZ gadget.
///
/// `amplitudes[(out, in)]` is the raw (not renormalized) amplitude of
/// logical output `out` for logical input `in`, with the first qubit of the
/// rail map as bit 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CzTruthTable {
    pub amplitudes: ComplexMatrix,
    pub success_probabilities: [f64; 4],
}

impl CzTruthTable {
    /// Largest elementwise deviation from `(1/3) · diag(1, 1, 1, -1)` after
    /// removing the global phase of the `|00>` entry.
    pub fn deviation_from_ideal(&self) -> f64 {
        let reference = self.amplitudes[(0, 0)];
        if reference.norm() == 0.0 {
            return f64::INFINITY;
        }
        let phase = reference / reference.norm();
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let ideal = match (i == j, i) {
                    (true, 3) => -CZ_REFLECTIVITY,
                    (true, _) => CZ_REFLECTIVITY,
                    _ => 0.0,
                };
                let got = self.amplitudes[(i, j)] / phase;
                worst = worst.max((got - Complex64::new(ideal, 0.0)).norm());
            }
        }
        worst
    }
}

pub fn cz_truth_table(net: &CouplerNetwork) -> Result<CzTruthTable, CompileError> {
    if net.qubit_count() != 2 || net.ancilla_modes().len() != 2 || net.couplers().len() != 3 {
        return Err(CompileError::NotAGadget);
    }
    let unitary = network_unitary(net)?;
    let pattern = net.postselection_pattern();
    let mut amplitudes = ComplexMatrix::zeros(4, 4);
    let mut success_probabilities = [0.0; 4];
    for input in 0..4 {
        let state = PhotonicState::basis(pattern.occupation_for(input, net.mode_count()));
        let out = postselect(&apply_unitary(&unitary, &state)?, net)?;
        success_probabilities[input] = out.success_probability;
        for (occ, amp) in out.raw_state.iter() {
            if let Some(logical) = pattern.logical_index(occ) {
                amplitudes[(logical, input)] = *amp;
            }
        }
    }
    Ok(CzTruthTable {
        amplitudes,
        success_probabilities,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateDoc {
    pub kind: String,
    pub targets: Vec<String>,
}

/// Wire form of a [`QubitCircuit`]; gate operands are qubit labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub version: u32,
    pub qubits: Vec<String>,
    pub initial_bits: Vec<u8>,
    pub gates: Vec<GateDoc>,
}

impl From<&QubitCircuit> for CircuitDoc {
    fn from(c: &QubitCircuit) -> Self {
        let label = |q: usize| c.qubit_labels[q].clone();
        CircuitDoc {
            version: CIRCUIT_FORMAT_VERSION,
            qubits: c.qubit_labels.clone(),
            initial_bits: c.initial_bits.iter().map(|&b| u8::from(b)).collect(),
            gates: c
                .gates
                .iter()
                .map(|g| match *g {
                    Gate::H(q) => GateDoc {
                        kind: "H".into(),
                        targets: vec![label(q)],
                    },
                    Gate::Cz(a, b) => GateDoc {
                        kind: "CZ".into(),
                        targets: vec![label(a), label(b)],
                    },
                })
                .collect(),
        }
    }
}

impl TryFrom<CircuitDoc> for QubitCircuit {
    type Error = CompileError;

    fn try_from(doc: CircuitDoc) -> Result<Self, CompileError> {
        if doc.version != CIRCUIT_FORMAT_VERSION {
            return Err(CompileError::UnsupportedVersion(doc.version));
        }
        let bits = doc
            .initial_bits
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(CompileError::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index = |label: &str| {
            doc.qubits
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| CompileError::UnknownQubit(label.to_string()))
        };
        let mut gates = Vec::with_capacity(doc.gates.len());
        for g in &doc.gates {
            let expected = match g.kind.as_str() {
                "H" => 1,
                "CZ" => 2,
                other => return Err(CompileError::UnsupportedGate(other.to_string())),
            };
            if g.targets.len() != expected {
                return Err(CompileError::Arity {
                    kind: g.kind.clone(),
                    expected,
                    found: g.targets.len(),
                });
            }
            gates.push(match expected {
                1 => Gate::H(index(&g.targets[0])?),
                _ => Gate::Cz(index(&g.targets[0])?, index(&g.targets[1])?),
            });
        }
        QubitCircuit::new(doc.qubits, bits, gates)
    }
}
