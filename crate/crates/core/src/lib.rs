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

//! Exact and sampled simulation of a compiled Shor-15 linear-optical chip.
//!
//! The crate follows the computation end to end:
//!
//! - [`compiler`] lowers an H/CZ qubit circuit to a network of directional
//!   couplers with dual-rail qubits and post-selected CZ gadgets,
//! - [`photonics`] turns couplers into mode unitaries and post-selects the
//!   chip output,
//! - [`fock`] evolves multi-photon Fock states through a mode unitary using
//!   matrix permanents,
//! - [`qubit_oracle`] is an independent state-vector simulator used as
//!   ground truth,
//! - [`shor_classical`] does the order finding and factor extraction,
//! - [`experiment`] ties it together with shot-noise sampling and fidelity.

pub mod compiler;
pub mod experiment;
pub mod fock;
pub mod matrix;
pub mod outcome;
pub mod photonics;
pub mod qubit_oracle;
pub mod shor_classical;

pub use num_complex::Complex64;
