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

//! Dense state-vector reference simulator for H/CZ circuits.
//!
//! Basis index `i` has qubit `q` in state `(i >> q) & 1`: the first qubit
//! of a circuit is the least significant bit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::compiler::{Gate, QubitCircuit};
use crate::outcome::{BitString, OutcomeDistribution};

pub const MAX_ORACLE_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} qubits exceeds the oracle limit of {MAX_ORACLE_QUBITS}")]
    TooManyQubits(usize),
    #[error("no qubits selected for measurement")]
    EmptySubset,
    #[error("qubit {index} out of range for {count} qubits")]
    QubitOutOfRange { index: usize, count: usize },
    #[error("qubit {0} selected twice")]
    DuplicateQubit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    qubit_labels: Vec<String>,
    amplitudes: Vec<Complex64>,
}

impl QubitState {
    pub fn basis(qubit_labels: Vec<String>, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubit_labels.len()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        QubitState {
            qubit_labels,
            amplitudes,
        }
    }

    /// Wraps dense amplitudes. Panics unless there are `2^labels` of them.
    pub fn from_amplitudes(qubit_labels: Vec<String>, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), 1 << qubit_labels.len(), "amplitude count");
        QubitState {
            qubit_labels,
            amplitudes,
        }
    }

    pub fn qubit_labels(&self) -> &[String] {
        &self.qubit_labels
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_labels.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mask = 1 << q;
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | mask];
                self.amplitudes[i] = (a + b) * s;
                self.amplitudes[i | mask] = (a - b) * s;
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    pub fn apply(&mut self, gate: Gate) {
        match gate {
            Gate::H(q) => self.apply_h(q),
            Gate::Cz(a, b) => self.apply_cz(a, b),
        }
    }
}

/// Runs `circuit` from its initial computational basis state.
pub fn statevector_run(circuit: &QubitCircuit) -> Result<QubitState, OracleError> {
    let n = circuit.qubit_count();
    if n > MAX_ORACLE_QUBITS {
        return Err(OracleError::TooManyQubits(n));
    }
    let start = circuit
        .initial_bits()
        .iter()
        .enumerate()
        .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
    let mut state = QubitState::basis(circuit.qubit_labels().to_vec(), start);
    for &gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}

/// Outcome probabilities of measuring `measured` (summing over the rest).
///
/// Outcome strings put the last listed qubit leftmost, so the first listed
/// qubit is the least significant bit.
pub fn marginal_distribution(state: &QubitState, measured: &[usize]) -> Result<OutcomeDistribution, OracleError> {
    if measured.is_empty() {
        return Err(OracleError::EmptySubset);
    }
    let count = state.qubit_count();
    for (i, &q) in measured.iter().enumerate() {
        if q >= count {
            return Err(OracleError::QubitOutOfRange { index: q, count });
        }
        if measured[..i].contains(&q) {
            return Err(OracleError::DuplicateQubit(q));
        }
    }
    let mut probs = vec![0.0f64; 1 << measured.len()];
    for (i, amp) in state.amplitudes.iter().enumerate() {
        let local = measured
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &q)| acc | ((i >> q & 1) << bit));
        probs[local] += amp.norm_sqr();
    }
    let map: BTreeMap<BitString, f64> = probs
        .into_iter()
        .enumerate()
        .map(|(i, p)| (BitString::from_index(i, measured.len()), p))
        .collect();
    Ok(OutcomeDistribution::new(map).expect("state vector is normalized"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("q{i}")).collect()
    }

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn empty_circuit_is_basis_state() {
        let c = QubitCircuit::new(labels(1), vec![false], vec![]).unwrap();
        let s = statevector_run(&c).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn hadamard_on_zero() {
        let c = QubitCircuit::new(labels(1), vec![false], vec![Gate::H(0)]).unwrap();
        let s = statevector_run(&c).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in s.amplitudes() {
            assert!((a - Complex64::new(h, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn bell_pair_marginal() {
        let c = QubitCircuit::new(
            labels(2),
            vec![false, false],
            vec![Gate::H(0), Gate::H(1), Gate::Cz(0, 1), Gate::H(1)],
        )
        .unwrap();
        let s = statevector_run(&c).unwrap();
        let m = marginal_distribution(&s, &[0]).unwrap();
        assert!((m.probability(&bits("0")) - 0.5).abs() < 1e-12);
        assert!((m.probability(&bits("1")) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basis_state_full_measurement_is_point_mass() {
        let c = QubitCircuit::new(labels(3), vec![true, false, true], vec![]).unwrap();
        let s = statevector_run(&c).unwrap();
        let m = marginal_distribution(&s, &[0, 1, 2]).unwrap();
        assert_eq!(m.probability(&bits("101")), 1.0);
        // Reordering the measured list reorders the string.
        let m = marginal_distribution(&s, &[1, 0]).unwrap();
        assert_eq!(m.probability(&bits("10")), 1.0);
    }

    #[test]
    fn marginal_errors() {
        let s = QubitState::basis(labels(2), 0);
        assert_eq!(marginal_distribution(&s, &[]), Err(OracleError::EmptySubset));
        assert_eq!(
            marginal_distribution(&s, &[2]),
            Err(OracleError::QubitOutOfRange { index: 2, count: 2 })
        );
        assert_eq!(marginal_distribution(&s, &[1, 1]), Err(OracleError::DuplicateQubit(1)));
    }

    #[test]
    fn too_many_qubits() {
        let c = QubitCircuit::new(labels(13), vec![false; 13], vec![]).unwrap();
        assert_eq!(statevector_run(&c), Err(OracleError::TooManyQubits(13)));
    }
}
