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

//! End-to-end Shor-15 chip pipeline: exact post-selected distribution,
//! shot-noise emulation of the coincidence counts, fidelity, and per-outcome
//! classification.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compiler::{self, shor15_circuit, CompileError, QubitCircuit};
use crate::outcome::{BitString, OutcomeDistribution};
use crate::photonics::CouplerConvention;
use crate::qubit_oracle::{marginal_distribution, statevector_run, OracleError, QubitState};
use crate::shor_classical::{
    classify_and_factor, invert_bit_order, Classification, FactoringInstance, ShorError, ShorRunResult,
};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Coincidence rate times integration time: 100 Hz for 30 s.
pub const DEFAULT_SHOTS: u64 = 3000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("post-selection removed every amplitude")]
    NothingSurvived,
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Shor(#[from] ShorError),
}

/// Index of the argument qubits `(x1, x2)` in [`shor15_circuit`].
const ARGUMENT_QUBITS: [usize; 2] = [0, 1];

/// Maps a measured `(x1, x2)` marginal key (`"x2 x1"`) to the readout label
/// `x2 x1 x0`, with the redundant `x0` fixed to 0.
///
/// The detectors record the argument register in qubit order
/// `(x0, x1, x2)`; the label is that record with its bit order inverted.
pub fn readout_label(argument_key: &BitString) -> BitString {
    let b = argument_key.bits();
    let (x2, x1) = (b[0], b[1]);
    let register = BitString::new(vec![false, x1, x2]);
    invert_bit_order(&register)
}

fn label_distribution(state: &QubitState) -> Result<OutcomeDistribution, ExperimentError> {
    let marginal = marginal_distribution(state, &ARGUMENT_QUBITS)?;
    Ok(marginal.map_outcomes(readout_label))
}

/// Exact chip output over readout labels plus the overall post-selection
/// probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChipDistribution {
    pub distribution: OutcomeDistribution,
    pub postselection_probability: f64,
}

pub fn exact_chip_distribution() -> Result<ChipDistribution, ExperimentError> {
    exact_chip_distribution_with(CouplerConvention::RealSigned)
}

/// Runs the lowered Shor-15 chip exactly under `convention`.
pub fn exact_chip_distribution_with(convention: CouplerConvention) -> Result<ChipDistribution, ExperimentError> {
    let circuit = shor15_circuit();
    let (_, result) = compiler::simulate_lowered(&circuit, convention)?;
    let logical = result.logical_state.ok_or(ExperimentError::NothingSurvived)?;
    let state = QubitState::from_amplitudes(logical.qubit_labels, logical.amplitudes);
    Ok(ChipDistribution {
        distribution: label_distribution(&state)?,
        postselection_probability: result.success_probability,
    })
}

/// The ideal readout distribution from the state-vector oracle.
pub fn ideal_distribution() -> Result<OutcomeDistribution, ExperimentError> {
    ideal_distribution_for(&shor15_circuit())
}

fn ideal_distribution_for(circuit: &QubitCircuit) -> Result<OutcomeDistribution, ExperimentError> {
    label_distribution(&statevector_run(circuit)?)
}

/// Multinomial outcome counts from a seeded generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledCounts {
    pub counts: BTreeMap<BitString, u64>,
    pub total_shots: u64,
    pub seed: u64,
}

impl SampledCounts {
    /// Relative frequencies as a distribution.
    pub fn frequencies(&self) -> OutcomeDistribution {
        let map = self
            .counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / self.total_shots as f64))
            .collect();
        OutcomeDistribution::new(map).expect("counts sum to total_shots")
    }
}

/// Draws `shots` outcomes from `dist` as a sequence of conditional
/// binomials over the outcomes in label order. Identical seeds give
/// identical counts.
pub fn sample_counts(dist: &OutcomeDistribution, shots: u64, seed: u64) -> Result<SampledCounts, ExperimentError> {
    if shots == 0 {
        return Err(ExperimentError::NoShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcomes: Vec<(&BitString, f64)> = dist.iter().collect();
    let mut remaining_shots = shots;
    let mut remaining_mass: f64 = outcomes.iter().map(|(_, p)| p).sum();
    let mut counts = BTreeMap::new();
    for (i, (outcome, p)) in outcomes.iter().enumerate() {
        let drawn = if i + 1 == outcomes.len() {
            remaining_shots
        } else if remaining_shots == 0 || remaining_mass <= 0.0 {
            0
        } else {
            let q = (p / remaining_mass).clamp(0.0, 1.0);
            Binomial::new(remaining_shots, q)
                .expect("probability clamped to [0, 1]")
                .sample(&mut rng)
        };
        remaining_shots -= drawn;
        remaining_mass -= p;
        counts.insert((*outcome).clone(), drawn);
    }
    Ok(SampledCounts {
        counts,
        total_shots: shots,
        seed,
    })
}

/// Classical (Bhattacharyya) fidelity `(Σ √(p_i q_i))²`.
pub fn classical_fidelity(p: &OutcomeDistribution, q: &OutcomeDistribution) -> f64 {
    let overlap: f64 = p.iter().map(|(k, pk)| (pk * q.probability(k)).sqrt()).sum();
    (overlap * overlap).clamp(0.0, 1.0)
}

/// Fidelity of sampled frequencies against `ideal` for each seed in
/// `seeds`, in seed order. Seeds run in parallel.
pub fn fidelity_sweep(
    source: &OutcomeDistribution,
    ideal: &OutcomeDistribution,
    shots: u64,
    seeds: std::ops::Range<u64>,
) -> Result<Vec<f64>, ExperimentError> {
    seeds
        .into_par_iter()
        .map(|seed| {
            let sampled = sample_counts(source, shots, seed)?;
            Ok(classical_fidelity(&sampled.frequencies(), ideal))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeClassification {
    pub outcome: BitString,
    pub exact_probability: f64,
    pub sampled_count: u64,
    pub result: ShorRunResult,
}

/// Everything one simulated experiment produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: u32,
    pub instance: FactoringInstance,
    pub exact_distribution: OutcomeDistribution,
    pub ideal_distribution: OutcomeDistribution,
    pub sampled: SampledCounts,
    /// Sampled frequencies against the ideal distribution.
    pub fidelity: f64,
    pub postselection_probability: f64,
    pub classifications: Vec<OutcomeClassification>,
    /// Exact probability mass of outcomes that yield the factors.
    pub success_probability: f64,
    pub sampled_success_fraction: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exact simulation, sampling, fidelity, and classification of every
/// outcome with nonzero exact probability.
pub fn run_full_report(shots: u64, seed: u64) -> Result<ExperimentReport, ExperimentError> {
    if shots == 0 {
        return Err(ExperimentError::NoShots);
    }
    let chip = exact_chip_distribution()?;
    let ideal = ideal_distribution()?;
    let sampled = sample_counts(&chip.distribution, shots, seed)?;
    let fidelity = classical_fidelity(&sampled.frequencies(), &ideal);
    let instance = FactoringInstance::shor15();

    let mut classifications = Vec::new();
    let mut success_probability = 0.0;
    let mut success_shots = 0;
    for (outcome, p) in chip.distribution.iter() {
        if p < 1e-12 {
            continue;
        }
        let result = classify_and_factor(&instance, outcome)?;
        let count = sampled.counts.get(outcome).copied().unwrap_or(0);
        if result.classification == Classification::Success {
            success_probability += p;
            success_shots += count;
        }
        classifications.push(OutcomeClassification {
            outcome: outcome.clone(),
            exact_probability: p,
            sampled_count: count,
            result,
        });
    }

    Ok(ExperimentReport {
        version: REPORT_FORMAT_VERSION,
        instance,
        exact_distribution: chip.distribution,
        ideal_distribution: ideal,
        sampled_success_fraction: success_shots as f64 / shots as f64,
        sampled,
        fidelity,
        postselection_probability: chip.postselection_probability,
        classifications,
        success_probability,
    })
}

/// Bar chart of sampled frequencies over all readout labels with the ideal
/// distribution as a dashed line.
pub fn render_svg(report: &ExperimentReport) -> String {
    use std::fmt::Write;

    let width = report.instance.argument_bits() as usize;
    let labels: Vec<BitString> = (0..1usize << width).map(|i| BitString::from_index(i, width)).collect();
    let freqs = report.sampled.frequencies();
    let (w, h) = (480.0, 300.0);
    let (left, right, top, bottom) = (50.0, 20.0, 30.0, 40.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;
    let y_max = 0.5;
    let slot = plot_w / labels.len() as f64;
    let y = |p: f64| top + plot_h * (1.0 - (p / y_max).min(1.0));

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" text-anchor="middle">fidelity {:.4} ({} shots, seed {})</text>"#,
        w / 2.0,
        report.fidelity,
        report.sampled.total_shots,
        report.sampled.seed
    );
    for tick in [0.0, 0.1, 0.2, 0.3, 0.4, 0.5] {
        let _ = writeln!(
            svg,
            r#"<line x1="{left}" y1="{0:.2}" x2="{1}" y2="{0:.2}" stroke="lightgray"/><text x="{2}" y="{3:.2}" text-anchor="end">{tick:.1}</text>"#,
            y(tick),
            w - right,
            left - 6.0,
            y(tick) + 4.0
        );
    }
    let mut ideal_path = String::new();
    for (i, label) in labels.iter().enumerate() {
        let x0 = left + slot * i as f64;
        let p = freqs.probability(label);
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"/>"#,
            x0 + slot * 0.2,
            y(p),
            slot * 0.6,
            top + plot_h - y(p)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            x0 + slot / 2.0,
            h - bottom + 18.0
        );
        let ideal = report.ideal_distribution.probability(label);
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(
            ideal_path,
            "{cmd}{:.2},{:.2} L{:.2},{:.2} ",
            x0,
            y(ideal),
            x0 + slot,
            y(ideal)
        );
    }
    let _ = writeln!(
        svg,
        r#"<path d="{}" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="6,4"/>"#,
        ideal_path.trim_end()
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{left}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        top + plot_h,
        w - right
    );
    svg.push_str("</svg>\n");
    svg
}
