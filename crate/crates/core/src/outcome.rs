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

//! Measurement outcome labels and probability distributions over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OutcomeError {
    #[error("invalid bit string {0:?}: only '0' and '1' are allowed")]
    InvalidBits(String),
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("probability {value} for outcome {outcome} is outside [0, 1]")]
    OutOfRange { outcome: String, value: f64 },
    #[error("outcome {outcome} has width {found}, expected {expected}")]
    WidthMismatch {
        outcome: String,
        expected: usize,
        found: usize,
    },
}

/// A written string of bits, character 0 first.
///
/// Register readouts built with [`BitString::from_index`] put the highest
/// qubit leftmost, so qubit 0 is the least significant bit of
/// [`BitString::value`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    /// `width` bits of `index`, most significant first.
    pub fn from_index(index: usize, width: usize) -> Self {
        BitString((0..width).rev().map(|q| index >> q & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The string read as a binary number, leftmost character most
    /// significant.
    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn reversed(&self) -> BitString {
        BitString(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = OutcomeError;

    fn from_str(s: &str) -> Result<Self, OutcomeError> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(OutcomeError::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Probabilities over outcome bit strings. Outcomes absent from the map
/// have probability zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeDistribution {
    probabilities: BTreeMap<BitString, f64>,
}

impl OutcomeDistribution {
    /// Validates that every value lies in `[0, 1]` and that the values sum
    /// to 1 within `1e-9`.
    pub fn new(probabilities: BTreeMap<BitString, f64>) -> Result<Self, OutcomeError> {
        for (outcome, &p) in &probabilities {
            if !(0.0..=1.0 + NORMALIZATION_TOLERANCE).contains(&p) {
                return Err(OutcomeError::OutOfRange {
                    outcome: outcome.to_string(),
                    value: p,
                });
            }
        }
        let total: f64 = probabilities.values().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(OutcomeError::NotNormalized(total));
        }
        Ok(OutcomeDistribution { probabilities })
    }

    /// All mass on one outcome.
    pub fn point_mass(outcome: BitString) -> Self {
        OutcomeDistribution {
            probabilities: BTreeMap::from([(outcome, 1.0)]),
        }
    }

    /// Equal mass on each listed outcome.
    pub fn uniform<I: IntoIterator<Item = BitString>>(outcomes: I) -> Self {
        let outcomes: Vec<BitString> = outcomes.into_iter().collect();
        let p = 1.0 / outcomes.len() as f64;
        OutcomeDistribution {
            probabilities: outcomes.into_iter().map(|o| (o, p)).collect(),
        }
    }

    pub fn probability(&self, outcome: &BitString) -> f64 {
        self.probabilities.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, f64)> {
        self.probabilities.iter().map(|(k, &v)| (k, v))
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &BitString> {
        self.probabilities.keys()
    }

    pub fn total(&self) -> f64 {
        self.probabilities.values().sum()
    }

    /// Relabels every outcome; labels mapping to the same key accumulate.
    pub fn map_outcomes<F: FnMut(&BitString) -> BitString>(&self, mut f: F) -> Self {
        let mut out: BTreeMap<BitString, f64> = BTreeMap::new();
        for (k, &v) in &self.probabilities {
            *out.entry(f(k)).or_default() += v;
        }
        OutcomeDistribution { probabilities: out }
    }
}
