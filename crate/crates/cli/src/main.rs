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

//! Command-line front end for the photonic Shor-15 simulator.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use photonic_shor::compiler::{lower, QubitCircuit};
use photonic_shor::experiment::{render_svg, run_full_report, DEFAULT_SEED, DEFAULT_SHOTS};
use photonic_shor::fock::{apply_unitary, OccupationVector, PhotonicState, PhotonicStateDoc};
use photonic_shor::outcome::BitString;
use photonic_shor::photonics::{network_unitary, postselect, CouplerNetwork};
use photonic_shor::qubit_oracle::{marginal_distribution, statevector_run};
use photonic_shor::shor_classical::{classify_and_factor, find_order_bruteforce, FactoringInstance};
use photonic_shor::Complex64;

/// Version stamped on every document printed to stdout.
const DOCUMENT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "photonic-shor",
    version,
    about = "Compile, simulate and post-process the photonic Shor-15 chip"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower a qubit circuit document to a coupler network document.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evolve a dual-rail input through a coupler network.
    Simulate {
        #[arg(long)]
        network: PathBuf,
        /// One bit per qubit, qubit 0 (first in the rail map) rightmost.
        #[arg(long)]
        input_bits: String,
        /// Keep only valid dual-rail, vacuum-ancilla outputs.
        #[arg(long)]
        postselect: bool,
    },
    /// Run the full Shor-15 experiment and print the report.
    RunShor15 {
        #[arg(long, default_value_t = DEFAULT_SHOTS)]
        shots: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classical post-processing of a readout, or the brute-force order.
    Factor {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        a: u64,
        /// Readout label, most significant register bit leftmost.
        #[arg(long, conflicts_with = "order_oracle", required_unless_present = "order_oracle")]
        outcome: Option<String>,
        #[arg(long)]
        order_oracle: bool,
    },
    /// Ideal state-vector amplitudes and marginals of a circuit.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_circuit(path: &Path) -> Result<QubitCircuit> {
    QubitCircuit::from_json(&read(path)?).with_context(|| format!("invalid circuit document {}", path.display()))
}

fn amplitude_terms(amplitudes: &[Complex64], width: usize) -> Vec<Value> {
    amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(i, a)| {
            json!({
                "bits": BitString::from_index(i, width).to_string(),
                "re": a.re,
                "im": a.im,
                "probability": a.norm_sqr(),
            })
        })
        .collect()
}

fn compile(circuit: &Path, out: &Path) -> Result<Value> {
    let circuit = load_circuit(circuit)?;
    let report = lower(&circuit);
    write(out, &report.network.to_json())?;
    Ok(json!({
        "version": DOCUMENT_VERSION,
        "network": out.display().to_string(),
        "mode_count": report.network.mode_count(),
        "coupler_count": report.network.couplers().len(),
        "gadget_count": report.gadget_count,
        "expected_success_probability": report.expected_success_probability,
    }))
}

fn simulate(network: &Path, input_bits: &str, keep_valid: bool) -> Result<Value> {
    let net = CouplerNetwork::from_json(&read(network)?)
        .with_context(|| format!("invalid network document {}", network.display()))?;
    let bits: BitString = input_bits
        .parse()
        .with_context(|| format!("invalid --input-bits {input_bits:?}"))?;
    if bits.len() != net.qubit_count() {
        bail!(
            "--input-bits has {} bits but the network has {} qubits",
            bits.len(),
            net.qubit_count()
        );
    }
    let register = bits.reversed();
    let mut counts = vec![0u32; net.mode_count()];
    for (pair, &bit) in net.rail_map().values().zip(register.bits()) {
        counts[if bit { pair.one } else { pair.zero }] = 1;
    }
    let input = PhotonicState::basis(OccupationVector::new(counts));
    let output = apply_unitary(&network_unitary(&net)?, &input)?;
    let mut doc = json!({
        "version": DOCUMENT_VERSION,
        "input_bits": bits.to_string(),
        "qubits": net.rail_map().keys().collect::<Vec<_>>(),
    });
    if keep_valid {
        let result = postselect(&output, &net)?;
        doc["success_probability"] = json!(result.success_probability);
        doc["logical_state"] = match &result.logical_state {
            Some(state) => json!(amplitude_terms(&state.amplitudes, state.qubit_count())),
            None => Value::Null,
        };
    } else {
        doc["output_state"] = serde_json::to_value(PhotonicStateDoc::from(&output))?;
    }
    Ok(doc)
}

fn run_shor15(shots: u64, seed: u64, report_path: Option<&Path>, svg_path: Option<&Path>) -> Result<Value> {
    let report = run_full_report(shots, seed)?;
    if let Some(path) = report_path {
        write(path, &report.to_json())?;
    }
    if let Some(path) = svg_path {
        write(path, &render_svg(&report))?;
    }
    Ok(serde_json::to_value(&report)?)
}

fn factor(modulus: u64, a: u64, outcome: Option<&str>) -> Result<Value> {
    let Some(outcome) = outcome else {
        let inst = FactoringInstance::new(modulus, a, 1)?;
        return Ok(json!({
            "version": DOCUMENT_VERSION,
            "modulus": modulus,
            "base": a,
            "order": find_order_bruteforce(&inst),
        }));
    };
    let outcome: BitString = outcome
        .parse()
        .with_context(|| format!("invalid --outcome {outcome:?}"))?;
    let inst = FactoringInstance::new(modulus, a, outcome.len() as u32)?;
    let result = classify_and_factor(&inst, &outcome)?;
    let mut doc = json!({ "version": DOCUMENT_VERSION, "modulus": modulus, "base": a });
    if let (Value::Object(fields), Value::Object(extra)) = (&mut doc, serde_json::to_value(&result)?) {
        fields.extend(extra);
    }
    Ok(doc)
}

fn oracle(circuit: &Path) -> Result<Value> {
    let circuit = load_circuit(circuit)?;
    let state = statevector_run(&circuit)?;
    let marginals: serde_json::Map<String, Value> = circuit
        .qubit_labels()
        .iter()
        .enumerate()
        .map(|(q, label)| {
            Ok((
                label.clone(),
                serde_json::to_value(marginal_distribution(&state, &[q])?)?,
            ))
        })
        .collect::<Result<_>>()?;
    let all: Vec<usize> = (0..circuit.qubit_count()).collect();
    Ok(json!({
        "version": DOCUMENT_VERSION,
        "qubits": circuit.qubit_labels(),
        "amplitudes": amplitude_terms(state.amplitudes(), circuit.qubit_count()),
        "distribution": marginal_distribution(&state, &all)?,
        "marginals": marginals,
    }))
}

fn run(cli: Cli) -> Result<Value> {
    match cli.command {
        Command::Compile { circuit, out } => compile(&circuit, &out),
        Command::Simulate {
            network,
            input_bits,
            postselect,
        } => simulate(&network, &input_bits, postselect),
        Command::RunShor15 {
            shots,
            seed,
            report,
            svg,
        } => run_shor15(shots, seed, report.as_deref(), svg.as_deref()),
        Command::Factor {
            modulus, a, outcome, ..
        } => factor(modulus, a, outcome.as_deref()),
        Command::Oracle { circuit } => oracle(&circuit),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
            match writeln!(io::stdout().lock(), "{text}") {
                Err(err) if err.kind() != io::ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write output: {err}");
                    ExitCode::FAILURE
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
