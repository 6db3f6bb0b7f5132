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

//! Bosonic Fock-space states and their evolution through linear optics.
//!
//! A photon entering mode `j` of a network with single-photon transfer
//! matrix `U` leaves in mode `i` with amplitude `U[i][j]`. For `n` photons
//! the transition amplitude between occupation patterns `S` and `T` is
//!
//! ```text
//! <T| U |S> = perm(U[T, S]) / sqrt(prod S_k! * prod T_k!)
//! ```
//!
//! where `U[T, S]` repeats row `i` `T_i` times and column `j` `S_j` times.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::ComplexMatrix;

/// Upper bound on the basis size `enumerate_basis` will materialize.
pub const DEFAULT_BASIS_CAP: u128 = 10_000_000;

/// Largest matrix order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 20;

/// Amplitudes smaller than this are dropped after every evolution.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

const UNITARITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("mode count must be at least 1")]
    NoModes,
    #[error("basis of {photon_number} photons in {mode_count} modes exceeds the cap of {cap} states")]
    CapacityExceeded {
        mode_count: usize,
        photon_number: u32,
        cap: u128,
    },
    #[error("permanent needs a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("permanent of order {0} exceeds the supported maximum of {MAX_PERMANENT_ORDER}")]
    PermanentTooLarge(usize),
    #[error("dimension mismatch: expected {expected} modes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("occupation carries {found} photons, state holds {expected}")]
    PhotonNumberMismatch { expected: u32, found: u32 },
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
}

/// Photon count per mode; the label of a Fock basis state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationVector(Vec<u32>);

impl OccupationVector {
    pub fn new(counts: Vec<u32>) -> Self {
        OccupationVector(counts)
    }

    /// Vacuum on `mode_count` modes.
    pub fn vacuum(mode_count: usize) -> Self {
        OccupationVector(vec![0; mode_count])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn photon_number(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Mode index of every photon, in ascending mode order. A mode holding
    /// `k` photons appears `k` times.
    pub fn photon_modes(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(mode, &k)| std::iter::repeat_n(mode, k as usize))
            .collect()
    }

    /// `prod_k counts[k]!`
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&k| factorial(k)).product()
    }
}

impl From<Vec<u32>> for OccupationVector {
    fn from(counts: Vec<u32>) -> Self {
        OccupationVector(counts)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Number of ways to place `photon_number` bosons in `mode_count` modes,
/// `C(n + m - 1, n)`, or `None` on `u128` overflow.
pub fn basis_size(mode_count: usize, photon_number: u32) -> Option<u128> {
    if mode_count == 0 {
        return Some(0);
    }
    let n = u128::from(photon_number);
    let m = mode_count as u128;
    // C(n + m - 1, n) built incrementally keeps every partial result integral.
    let mut acc: u128 = 1;
    for i in 1..=n {
        acc = acc.checked_mul(m - 1 + i)? / i;
    }
    Some(acc)
}

/// All occupation vectors with `photon_number` photons in `mode_count`
/// modes, in descending lexicographic order (the first mode is filled
/// first), so `(2, 1)` yields `[(1,0), (0,1)]`.
pub fn enumerate_basis(mode_count: usize, photon_number: u32) -> Result<Vec<OccupationVector>, FockError> {
    enumerate_basis_with_cap(mode_count, photon_number, DEFAULT_BASIS_CAP)
}

pub fn enumerate_basis_with_cap(
    mode_count: usize,
    photon_number: u32,
    cap: u128,
) -> Result<Vec<OccupationVector>, FockError> {
    if mode_count == 0 {
        return Err(FockError::NoModes);
    }
    let size = basis_size(mode_count, photon_number)
        .filter(|&s| s <= cap)
        .ok_or(FockError::CapacityExceeded {
            mode_count,
            photon_number,
            cap,
        })?;
    let mut out = Vec::with_capacity(size as usize);
    let mut current = vec![0u32; mode_count];
    fill_modes(&mut current, 0, photon_number, &mut out);
    debug_assert_eq!(out.len() as u128, size);
    Ok(out)
}

fn fill_modes(current: &mut [u32], mode: usize, remaining: u32, out: &mut Vec<OccupationVector>) {
    if mode + 1 == current.len() {
        current[mode] = remaining;
        out.push(OccupationVector(current.to_vec()));
        current[mode] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        current[mode] = k;
        fill_modes(current, mode + 1, remaining - k, out);
    }
    current[mode] = 0;
}

/// Permanent by Ryser's formula, visiting column subsets in Gray-code
/// order so each step updates the row sums with a single column.
/// Cost is `O(2^n * n)`.
pub fn permanent(matrix: &ComplexMatrix) -> Result<Complex64, FockError> {
    if !matrix.is_square() {
        return Err(FockError::NonSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    let n = matrix.rows();
    if n > MAX_PERMANENT_ORDER {
        return Err(FockError::PermanentTooLarge(n));
    }
    Ok(ryser(matrix))
}

fn ryser(a: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut subset_odd = false;
    for k in 1u64..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let added = gray & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += a[(i, col)];
            } else {
                *s -= a[(i, col)];
            }
        }
        subset_odd = !subset_odd;
        let prod: Complex64 = row_sums.iter().product();
        if subset_odd {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

/// Single-photon transfer matrix of a linear-optical network.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary(ComplexMatrix);

impl ModeUnitary {
    /// Wraps `matrix`, rejecting it if `U†U` deviates from the identity by
    /// more than `1e-10` in any entry.
    pub fn new(matrix: ComplexMatrix) -> Result<Self, FockError> {
        let defect = matrix.unitarity_defect();
        if defect > UNITARITY_TOLERANCE {
            return Err(FockError::NotUnitary(defect));
        }
        Ok(ModeUnitary(matrix))
    }

    pub fn identity(mode_count: usize) -> Self {
        ModeUnitary(ComplexMatrix::identity(mode_count))
    }

    pub fn mode_count(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.0.unitarity_defect()
    }

    /// `self · other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &ModeUnitary) -> ModeUnitary {
        ModeUnitary(&self.0 * &other.0)
    }
}

/// Sparse superposition of Fock basis states with a fixed mode count and
/// photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonicState {
    mode_count: usize,
    photon_number: u32,
    amplitudes: BTreeMap<OccupationVector, Complex64>,
}

impl PhotonicState {
    /// The zero vector in the given sector.
    pub fn empty(mode_count: usize, photon_number: u32) -> Self {
        PhotonicState {
            mode_count,
            photon_number,
            amplitudes: BTreeMap::new(),
        }
    }

    /// A single basis state with amplitude 1.
    pub fn basis(occupation: OccupationVector) -> Self {
        let mut state = Self::empty(occupation.mode_count(), occupation.photon_number());
        state.amplitudes.insert(occupation, Complex64::new(1.0, 0.0));
        state
    }

    /// Builds a state from `(occupation, amplitude)` terms. Repeated
    /// occupations accumulate.
    pub fn from_terms<I>(mode_count: usize, photon_number: u32, terms: I) -> Result<Self, FockError>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut state = Self::empty(mode_count, photon_number);
        for (occ, amp) in terms {
            state.check_occupation(&occ)?;
            *state.amplitudes.entry(occ).or_default() += amp;
        }
        Ok(state)
    }

    fn check_occupation(&self, occ: &OccupationVector) -> Result<(), FockError> {
        if occ.mode_count() != self.mode_count {
            return Err(FockError::DimensionMismatch {
                expected: self.mode_count,
                found: occ.mode_count(),
            });
        }
        if occ.photon_number() != self.photon_number {
            return Err(FockError::PhotonNumberMismatch {
                expected: self.photon_number,
                found: occ.photon_number(),
            });
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.amplitudes.get(occ).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Sum of squared amplitude magnitudes.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Keeps only the terms for which `keep` returns true.
    pub fn filtered<F>(&self, mut keep: F) -> PhotonicState
    where
        F: FnMut(&OccupationVector) -> bool,
    {
        PhotonicState {
            mode_count: self.mode_count,
            photon_number: self.photon_number,
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|(occ, _)| keep(occ))
                .map(|(occ, amp)| (occ.clone(), *amp))
                .collect(),
        }
    }

    /// Largest elementwise amplitude difference over the union of both
    /// supports.
    pub fn max_abs_diff(&self, other: &PhotonicState) -> f64 {
        let keys = self.amplitudes.keys().chain(other.amplitudes.keys());
        keys.map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: Complex64) -> PhotonicState {
        PhotonicState {
            mode_count: self.mode_count,
            photon_number: self.photon_number,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(occ, amp)| (occ.clone(), amp * factor))
                .collect(),
        }
    }
}

/// Evolves `state` through the network described by `unitary`.
///
/// Output amplitudes are computed per output basis state (in parallel);
/// each one sums over the input terms in their fixed map order, so the
/// result does not depend on the number of worker threads.
pub fn apply_unitary(unitary: &ModeUnitary, state: &PhotonicState) -> Result<PhotonicState, FockError> {
    let m = unitary.mode_count();
    if m != state.mode_count() {
        return Err(FockError::DimensionMismatch {
            expected: m,
            found: state.mode_count(),
        });
    }
    let n = state.photon_number();
    if n as usize > MAX_PERMANENT_ORDER {
        return Err(FockError::PermanentTooLarge(n as usize));
    }
    let inputs: Vec<(Vec<usize>, Complex64)> = state
        .iter()
        .map(|(occ, amp)| (occ.photon_modes(), amp / occ.factorial_product().sqrt()))
        .collect();
    if inputs.is_empty() {
        return Ok(PhotonicState::empty(m, n));
    }
    let basis = enumerate_basis(m, n)?;
    let u = unitary.matrix();
    let amplitudes: BTreeMap<OccupationVector, Complex64> = basis
        .into_par_iter()
        .filter_map(|target| {
            let rows = target.photon_modes();
            let norm = target.factorial_product().sqrt();
            let mut amp = Complex64::new(0.0, 0.0);
            for (cols, weight) in &inputs {
                amp += weight * ryser(&u.select(&rows, cols));
            }
            let amp = amp / norm;
            (amp.norm() >= PRUNE_THRESHOLD).then_some((target, amp))
        })
        .collect();
    Ok(PhotonicState {
        mode_count: m,
        photon_number: n,
        amplitudes,
    })
}

/// Wire form of a [`PhotonicState`]: a term list in basis-map order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonicStateDoc {
    pub mode_count: usize,
    pub photon_number: u32,
    pub amplitudes: Vec<AmplitudeTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTerm {
    pub occupation: OccupationVector,
    pub re: f64,
    pub im: f64,
}

impl From<&PhotonicState> for PhotonicStateDoc {
    fn from(state: &PhotonicState) -> Self {
        PhotonicStateDoc {
            mode_count: state.mode_count,
            photon_number: state.photon_number,
            amplitudes: state
                .iter()
                .map(|(occ, amp)| AmplitudeTerm {
                    occupation: occ.clone(),
                    re: amp.re,
                    im: amp.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PhotonicStateDoc> for PhotonicState {
    type Error = FockError;

    fn try_from(doc: PhotonicStateDoc) -> Result<Self, FockError> {
        PhotonicState::from_terms(
            doc.mode_count,
            doc.photon_number,
            doc.amplitudes
                .into_iter()
                .map(|t| (t.occupation, Complex64::new(t.re, t.im))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(v: &[u32]) -> OccupationVector {
        OccupationVector::new(v.to_vec())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn beam_splitter(eta: f64) -> ModeUnitary {
        let r = eta.sqrt();
        let t = (1.0 - eta).sqrt();
        ModeUnitary::new(ComplexMatrix::from_real_rows(&[[r, t], [t, -r]])).unwrap()
    }

    #[test]
    fn basis_single_photon_two_modes() {
        assert_eq!(enumerate_basis(2, 1).unwrap(), vec![occ(&[1, 0]), occ(&[0, 1])]);
    }

    #[test]
    fn basis_single_mode() {
        assert_eq!(enumerate_basis(1, 3).unwrap(), vec![occ(&[3])]);
    }

    #[test]
    fn basis_chip_sector_size() {
        // C(15, 4) = 15*14*13*12 / 24
        let expected = 15 * 14 * 13 * 12 / 24;
        assert_eq!(expected, 1365);
        let basis = enumerate_basis(12, 4).unwrap();
        assert_eq!(basis.len(), expected);
        assert!(basis.windows(2).all(|w| w[0] > w[1]), "descending lexicographic");
        assert!(basis.iter().all(|o| o.photon_number() == 4));
    }

    #[test]
    fn basis_vacuum_sector() {
        assert_eq!(enumerate_basis(3, 0).unwrap(), vec![occ(&[0, 0, 0])]);
    }

    #[test]
    fn basis_rejects_zero_modes() {
        assert_eq!(enumerate_basis(0, 2), Err(FockError::NoModes));
    }

    #[test]
    fn basis_capacity_error() {
        let err = enumerate_basis(100, 10).unwrap_err();
        assert!(matches!(err, FockError::CapacityExceeded { .. }));
        assert!(enumerate_basis_with_cap(4, 2, 9).is_err());
        assert_eq!(enumerate_basis_with_cap(4, 2, 10).unwrap().len(), 10);
    }

    #[test]
    fn permanent_identity_and_swap() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(permanent(&id).unwrap(), c(1.0, 0.0));
        let swap = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(permanent(&swap).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn permanent_all_ones_is_factorial() {
        let ones = ComplexMatrix::from_real_rows(&[[1.0; 3]; 3]);
        assert!((permanent(&ones).unwrap() - c(6.0, 0.0)).norm() < 1e-14);
        let ones = ComplexMatrix::from_real_rows(&[[1.0; 6]; 6]);
        assert!((permanent(&ones).unwrap() - c(720.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn permanent_of_empty_matrix_is_one() {
        assert_eq!(permanent(&ComplexMatrix::zeros(0, 0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn permanent_rejects_non_square_and_oversized() {
        assert_eq!(
            permanent(&ComplexMatrix::zeros(2, 3)),
            Err(FockError::NonSquare { rows: 2, cols: 3 })
        );
        assert_eq!(
            permanent(&ComplexMatrix::zeros(21, 21)),
            Err(FockError::PermanentTooLarge(21))
        );
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let state =
            PhotonicState::from_terms(3, 2, [(occ(&[1, 1, 0]), c(0.6, 0.0)), (occ(&[0, 0, 2]), c(0.0, 0.8))]).unwrap();
        let out = apply_unitary(&ModeUnitary::identity(3), &state).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.max_abs_diff(&state) < 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let out = apply_unitary(&beam_splitter(0.5), &PhotonicState::basis(occ(&[1, 1]))).unwrap();
        assert_eq!(out.amplitude(&occ(&[1, 1])), c(0.0, 0.0));
        assert!((out.amplitude(&occ(&[2, 0])).norm_sqr() - 0.5).abs() < 1e-12);
        assert!((out.amplitude(&occ(&[0, 2])).norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_third_coupler_coincidence_amplitude() {
        let out = apply_unitary(&beam_splitter(1.0 / 3.0), &PhotonicState::basis(occ(&[1, 1]))).unwrap();
        // r*(-r) + t*t = -1/3 + 2/3
        assert!((out.amplitude(&occ(&[1, 1])) - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let state = PhotonicState::basis(occ(&[1, 0, 0]));
        assert_eq!(
            apply_unitary(&ModeUnitary::identity(2), &state),
            Err(FockError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn from_terms_rejects_wrong_sector() {
        let err = PhotonicState::from_terms(2, 1, [(occ(&[1, 1]), c(1.0, 0.0))]).unwrap_err();
        assert_eq!(err, FockError::PhotonNumberMismatch { expected: 1, found: 2 });
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(ModeUnitary::new(m), Err(FockError::NotUnitary(_))));
    }

    #[test]
    fn doc_round_trip() {
        let state =
            PhotonicState::from_terms(2, 2, [(occ(&[2, 0]), c(0.1, 0.2)), (occ(&[0, 2]), c(-0.3, 0.0))]).unwrap();
        let json = serde_json::to_string(&PhotonicStateDoc::from(&state)).unwrap();
        let back: PhotonicStateDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(PhotonicState::try_from(back).unwrap(), state);
    }
}
