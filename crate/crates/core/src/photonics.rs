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

//! Directional couplers, their composition into a chip network, and
//! post-selected readout of dual-rail qubits.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{FockError, ModeUnitary, OccupationVector, PhotonicState};
use crate::matrix::ComplexMatrix;
use crate::outcome::BitString;

/// Current version of the network document.
pub const NETWORK_FORMAT_VERSION: u32 = 1;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum PhotonicsError {
    #[error("reflectivity {0} is outside [0, 1]")]
    InvalidReflectivity(f64),
    #[error("mode {mode} is out of range for a {mode_count}-mode network")]
    ModeOutOfRange { mode: usize, mode_count: usize },
    #[error("coupler joins mode {0} to itself")]
    SameMode(usize),
    #[error("mode {0} is assigned more than once across rails and ancillas")]
    ModeReused(usize),
    #[error("mode {0} is neither a rail nor an ancilla")]
    ModeUnassigned(usize),
    #[error("state carries {found} photons but the network encodes {expected} qubits")]
    PhotonNumberMismatch { expected: u32, found: u32 },
    #[error("unsupported network document version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("malformed network document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Phase convention of a coupler's 2x2 transfer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplerConvention {
    /// `[[√η, √(1−η)], [√(1−η), −√η]]`; a Hadamard at η = 1/2.
    #[default]
    RealSigned,
    /// `[[√η, i√(1−η)], [i√(1−η), √η]]`.
    SymmetricPhase,
}

/// A directional coupler between two waveguide modes.
///
/// `reflectivity` is the probability that a photon stays in its input
/// mode. Under [`CouplerConvention::RealSigned`] the orientation matters:
/// the photon staying in `mode_b` picks up a sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupler {
    pub mode_a: usize,
    pub mode_b: usize,
    pub reflectivity: f64,
    pub convention: CouplerConvention,
}

impl Coupler {
    pub fn new(mode_a: usize, mode_b: usize, reflectivity: f64) -> Self {
        Coupler {
            mode_a,
            mode_b,
            reflectivity,
            convention: CouplerConvention::RealSigned,
        }
    }

    pub fn with_convention(mut self, convention: CouplerConvention) -> Self {
        self.convention = convention;
        self
    }
}

/// The 2x2 transfer matrix of `c`, acting on `(mode_a, mode_b)` in that order.
pub fn coupler_unitary(c: &Coupler) -> Result<ComplexMatrix, PhotonicsError> {
    let eta = c.reflectivity;
    if !(0.0..=1.0).contains(&eta) {
        return Err(PhotonicsError::InvalidReflectivity(eta));
    }
    let r = eta.sqrt();
    let t = (1.0 - eta).sqrt();
    Ok(match c.convention {
        CouplerConvention::RealSigned => ComplexMatrix::from_real_rows(&[[r, t], [t, -r]]),
        CouplerConvention::SymmetricPhase => {
            let rr = Complex64::new(r, 0.0);
            let it = Complex64::new(0.0, t);
            ComplexMatrix::from_rows(&[[rr, it], [it, rr]])
        }
    })
}

fn check_coupler_modes(c: &Coupler, mode_count: usize) -> Result<(), PhotonicsError> {
    for mode in [c.mode_a, c.mode_b] {
        if mode >= mode_count {
            return Err(PhotonicsError::ModeOutOfRange { mode, mode_count });
        }
    }
    if c.mode_a == c.mode_b {
        return Err(PhotonicsError::SameMode(c.mode_a));
    }
    Ok(())
}

/// Embeds `c` into the identity on `mode_count` modes.
pub fn embed(c: &Coupler, mode_count: usize) -> Result<ModeUnitary, PhotonicsError> {
    check_coupler_modes(c, mode_count)?;
    let block = coupler_unitary(c)?;
    let mut m = ComplexMatrix::identity(mode_count);
    let idx = [c.mode_a, c.mode_b];
    for (i, &row) in idx.iter().enumerate() {
        for (j, &col) in idx.iter().enumerate() {
            m[(row, col)] = block[(i, j)];
        }
    }
    Ok(ModeUnitary::new(m)?)
}

/// The two modes carrying a dual-rail qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct RailPair {
    /// Photon here means logical 0.
    pub zero: usize,
    /// Photon here means logical 1.
    pub one: usize,
}

impl From<[usize; 2]> for RailPair {
    fn from([zero, one]: [usize; 2]) -> Self {
        RailPair { zero, one }
    }
}

impl From<RailPair> for [usize; 2] {
    fn from(p: RailPair) -> Self {
        [p.zero, p.one]
    }
}

/// An ordered list of couplers over `mode_count` waveguides together with
/// the dual-rail qubit assignment and the ancilla (vacuum) modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplerNetwork {
    mode_count: usize,
    couplers: Vec<Coupler>,
    rail_map: IndexMap<String, RailPair>,
    ancilla_modes: BTreeSet<usize>,
    metadata: String,
}

impl CouplerNetwork {
    /// Validates that every coupler is well formed and that rails and
    /// ancillas partition `0..mode_count`.
    pub fn new(
        mode_count: usize,
        couplers: Vec<Coupler>,
        rail_map: IndexMap<String, RailPair>,
        ancilla_modes: BTreeSet<usize>,
        metadata: impl Into<String>,
    ) -> Result<Self, PhotonicsError> {
        for c in &couplers {
            check_coupler_modes(c, mode_count)?;
            if !(0.0..=1.0).contains(&c.reflectivity) {
                return Err(PhotonicsError::InvalidReflectivity(c.reflectivity));
            }
        }
        let mut seen = vec![false; mode_count];
        let assigned = rail_map
            .values()
            .flat_map(|p| [p.zero, p.one])
            .chain(ancilla_modes.iter().copied());
        for mode in assigned {
            let slot = seen
                .get_mut(mode)
                .ok_or(PhotonicsError::ModeOutOfRange { mode, mode_count })?;
            if *slot {
                return Err(PhotonicsError::ModeReused(mode));
            }
            *slot = true;
        }
        if let Some(mode) = seen.iter().position(|&s| !s) {
            return Err(PhotonicsError::ModeUnassigned(mode));
        }
        Ok(CouplerNetwork {
            mode_count,
            couplers,
            rail_map,
            ancilla_modes,
            metadata: metadata.into(),
        })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn couplers(&self) -> &[Coupler] {
        &self.couplers
    }

    pub fn rail_map(&self) -> &IndexMap<String, RailPair> {
        &self.rail_map
    }

    pub fn ancilla_modes(&self) -> &BTreeSet<usize> {
        &self.ancilla_modes
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn qubit_count(&self) -> usize {
        self.rail_map.len()
    }

    /// A copy with every coupler switched to `convention`.
    pub fn with_convention(&self, convention: CouplerConvention) -> CouplerNetwork {
        let mut net = self.clone();
        for c in &mut net.couplers {
            c.convention = convention;
        }
        net
    }

    pub fn postselection_pattern(&self) -> PostselectionPattern {
        PostselectionPattern {
            rails: self.rail_map.values().copied().collect(),
            ancillas: self.ancilla_modes.iter().copied().collect(),
        }
    }

    /// Versioned JSON document of the network.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetworkDoc::from(self)).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PhotonicsError> {
        let doc: NetworkDoc = serde_json::from_str(text)?;
        CouplerNetwork::try_from(doc)
    }
}

/// Ordered product of the embedded couplers; later couplers multiply on
/// the left.
pub fn network_unitary(net: &CouplerNetwork) -> Result<ModeUnitary, PhotonicsError> {
    let m = net.mode_count;
    let mut acc = ComplexMatrix::identity(m);
    // Left-multiplying by an embedded 2x2 block only mixes rows a and b.
    for c in &net.couplers {
        let b = coupler_unitary(c)?;
        let (ra, rb) = (c.mode_a, c.mode_b);
        for col in 0..m {
            let xa = acc[(ra, col)];
            let xb = acc[(rb, col)];
            acc[(ra, col)] = b[(0, 0)] * xa + b[(0, 1)] * xb;
            acc[(rb, col)] = b[(1, 0)] * xa + b[(1, 1)] * xb;
        }
    }
    Ok(ModeUnitary::new(acc)?)
}

/// Detection pattern accepted by post-selection: exactly one photon on
/// each qubit's rail pair and none in any ancilla.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostselectionPattern {
    rails: Vec<RailPair>,
    ancillas: Vec<usize>,
}

impl PostselectionPattern {
    /// Total photon number of every accepted pattern.
    pub fn photon_number(&self) -> u32 {
        self.rails.len() as u32
    }

    pub fn qubit_count(&self) -> usize {
        self.rails.len()
    }

    /// Logical basis index of an accepted occupation (qubit `q` is bit
    /// `q`), or `None` if the occupation is rejected.
    pub fn logical_index(&self, occ: &OccupationVector) -> Option<usize> {
        let counts = occ.counts();
        if self.ancillas.iter().any(|&a| counts[a] != 0) {
            return None;
        }
        let mut index = 0usize;
        for (q, pair) in self.rails.iter().enumerate() {
            match (counts[pair.zero], counts[pair.one]) {
                (1, 0) => {}
                (0, 1) => index |= 1 << q,
                _ => return None,
            }
        }
        Some(index)
    }

    /// The occupation encoding logical basis `index`.
    pub fn occupation_for(&self, index: usize, mode_count: usize) -> OccupationVector {
        let mut counts = vec![0u32; mode_count];
        for (q, pair) in self.rails.iter().enumerate() {
            let mode = if index >> q & 1 == 1 { pair.one } else { pair.zero };
            counts[mode] = 1;
        }
        OccupationVector::new(counts)
    }
}

/// Dense qubit-register amplitudes indexed by basis number, qubit 0 the
/// least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalState {
    pub qubit_labels: Vec<String>,
    pub amplitudes: Vec<Complex64>,
}

impl LogicalState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_labels.len()
    }

    /// Nonzero amplitudes keyed by register bit string (highest qubit
    /// leftmost).
    pub fn terms(&self) -> Vec<(BitString, Complex64)> {
        let width = self.qubit_count();
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, &a)| (BitString::from_index(i, width), a))
            .collect()
    }
}

/// Result of post-selecting an evolved chip state.
#[derive(Debug, Clone, PartialEq)]
pub struct PostselectedResult {
    pub success_probability: f64,
    /// Renormalized logical state; `None` when no amplitude survived.
    pub logical_state: Option<LogicalState>,
    pub raw_state: PhotonicState,
}

/// Keeps the occupations matching the network's post-selection pattern
/// and maps them to logical basis states (photon in rail "1" is bit 1).
pub fn postselect(state: &PhotonicState, net: &CouplerNetwork) -> Result<PostselectedResult, PhotonicsError> {
    if state.mode_count() != net.mode_count() {
        return Err(FockError::DimensionMismatch {
            expected: net.mode_count(),
            found: state.mode_count(),
        }
        .into());
    }
    let pattern = net.postselection_pattern();
    if state.photon_number() != pattern.photon_number() {
        return Err(PhotonicsError::PhotonNumberMismatch {
            expected: pattern.photon_number(),
            found: state.photon_number(),
        });
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << pattern.qubit_count()];
    let mut kept = 0.0;
    for (occ, amp) in state.iter() {
        if let Some(index) = pattern.logical_index(occ) {
            amplitudes[index] = *amp;
            kept += amp.norm_sqr();
        }
    }
    let logical_state = (kept > 0.0).then(|| {
        let scale = kept.sqrt().recip();
        let state = LogicalState {
            qubit_labels: net.rail_map().keys().cloned().collect(),
            amplitudes: amplitudes.iter().map(|a| a * scale).collect(),
        };
        debug_assert!((state.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        state
    });
    Ok(PostselectedResult {
        success_probability: kept,
        logical_state,
        raw_state: state.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplerDoc {
    pub a: usize,
    pub b: usize,
    pub eta: f64,
    pub convention: CouplerConvention,
}

/// Wire form of a [`CouplerNetwork`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub version: u32,
    pub mode_count: usize,
    pub couplers: Vec<CouplerDoc>,
    pub rail_map: IndexMap<String, RailPair>,
    pub ancillas: Vec<usize>,
    #[serde(default)]
    pub metadata: String,
}

impl From<&CouplerNetwork> for NetworkDoc {
    fn from(net: &CouplerNetwork) -> Self {
        NetworkDoc {
            version: NETWORK_FORMAT_VERSION,
            mode_count: net.mode_count,
            couplers: net
                .couplers
                .iter()
                .map(|c| CouplerDoc {
                    a: c.mode_a,
                    b: c.mode_b,
                    eta: c.reflectivity,
                    convention: c.convention,
                })
                .collect(),
            rail_map: net.rail_map.clone(),
            ancillas: net.ancilla_modes.iter().copied().collect(),
            metadata: net.metadata.clone(),
        }
    }
}

impl TryFrom<NetworkDoc> for CouplerNetwork {
    type Error = PhotonicsError;

    fn try_from(doc: NetworkDoc) -> Result<Self, PhotonicsError> {
        if doc.version != NETWORK_FORMAT_VERSION {
            return Err(PhotonicsError::UnsupportedVersion(doc.version));
        }
        let couplers = doc
            .couplers
            .into_iter()
            .map(|c| Coupler {
                mode_a: c.a,
                mode_b: c.b,
                reflectivity: c.eta,
                convention: c.convention,
            })
            .collect();
        let ancillas: BTreeSet<usize> = doc.ancillas.iter().copied().collect();
        if ancillas.len() != doc.ancillas.len() {
            let mut seen = BTreeSet::new();
            let dup = doc.ancillas.iter().find(|a| !seen.insert(**a)).copied().unwrap_or(0);
            return Err(PhotonicsError::ModeReused(dup));
        }
        CouplerNetwork::new(doc.mode_count, couplers, doc.rail_map, ancillas, doc.metadata)
    }
}
