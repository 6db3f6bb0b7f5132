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

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use photonic_shor::compiler::{Gate, QubitCircuit};
use photonic_shor::fock::{enumerate_basis, ModeUnitary, PhotonicState};
use photonic_shor::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
    ComplexMatrix::from_rows(&rows)
}

/// Orthonormalizes the columns of a complex Gaussian matrix (QR by
/// modified Gram-Schmidt).
pub fn random_unitary(m: usize, rng: &mut impl Rng) -> ModeUnitary {
    let g = random_matrix(m, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..m).map(|j| (0..m).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..m {
        for k in 0..j {
            let proj: Complex64 = (0..m).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            let (done, rest) = cols.split_at_mut(j);
            for (x, v) in rest[0].iter_mut().zip(&done[k]) {
                *x -= proj * v;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    let rows: Vec<Vec<Complex64>> = (0..m).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect();
    ModeUnitary::new(ComplexMatrix::from_rows(&rows)).expect("orthonormal columns")
}

/// Sum over all permutations of the product of selected entries.
pub fn naive_permanent(a: &ComplexMatrix) -> Complex64 {
    fn go(a: &ComplexMatrix, row: usize, used: &mut Vec<bool>) -> Complex64 {
        if row == a.rows() {
            return Complex64::new(1.0, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for col in 0..a.cols() {
            if !used[col] {
                used[col] = true;
                total += a[(row, col)] * go(a, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
    go(a, 0, &mut vec![false; a.cols()])
}

/// Normalized random superposition over a random subset of the sector.
pub fn random_state(m: usize, n: u32, rng: &mut impl Rng) -> PhotonicState {
    let basis = enumerate_basis(m, n).unwrap();
    let mut terms = Vec::new();
    for occ in basis {
        if rng.random_bool(0.6) {
            terms.push((occ, gaussian(rng)));
        }
    }
    let state = if terms.is_empty() {
        PhotonicState::basis(enumerate_basis(m, n).unwrap().remove(0))
    } else {
        PhotonicState::from_terms(m, n, terms).unwrap()
    };
    state.scaled(Complex64::new(state.norm_sqr().sqrt().recip(), 0.0))
}

/// Random H/CZ circuit on 1..=4 qubits with at most three CZ gates whose
/// qubit pairs form a forest.
pub fn random_forest_circuit(rng: &mut impl Rng) -> QubitCircuit {
    let qubits = rng.random_range(1..=4usize);
    let mut parent: Vec<usize> = (0..qubits).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    let max_cz = if qubits < 2 { 0 } else { rng.random_range(0..=3usize) };
    let mut gates = Vec::new();
    let mut cz = 0;
    let len = rng.random_range(0..=10usize);
    for _ in 0..len {
        if cz < max_cz && rng.random_bool(0.4) {
            let a = rng.random_range(0..qubits);
            let b = rng.random_range(0..qubits);
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                gates.push(Gate::Cz(a, b));
                cz += 1;
                continue;
            }
        }
        gates.push(Gate::H(rng.random_range(0..qubits)));
    }
    let labels = (0..qubits).map(|i| format!("q{i}")).collect();
    let bits = (0..qubits).map(|_| rng.random_bool(0.5)).collect();
    QubitCircuit::new(labels, bits, gates).unwrap()
}

/// Largest elementwise distance between `a` and `b` after aligning the
/// global phase on the largest entry of `b`.
pub fn phase_aligned_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .unwrap();
    if a[idx].norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = (b[idx] / a[idx]) / (b[idx] / a[idx]).norm();
    a.iter().zip(b).map(|(x, y)| (x * phase - y).norm()).fold(0.0, f64::max)
}
