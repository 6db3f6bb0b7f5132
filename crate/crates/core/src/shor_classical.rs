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

//! Classical side of order finding: turning a phase readout into a
//! candidate order, validating it, and extracting factors with Euclid's
//! algorithm.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::outcome::BitString;

/// Moduli above this are rejected so every product fits a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShorError {
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("modulus {0} must lie in [3, 2^31]")]
    ModulusOutOfRange(u64),
    #[error("base {a} must satisfy 1 < a < {n}")]
    BaseOutOfRange { a: u64, n: u64 },
    #[error("base {a} shares the factor {common} with {n}")]
    NotCoprime { a: u64, n: u64, common: u64 },
    #[error("argument register width {0} must lie in [1, 62]")]
    RegisterWidth(u32),
    #[error("outcome {outcome} has {found} bits, expected {expected}")]
    OutcomeWidth {
        outcome: String,
        expected: u32,
        found: usize,
    },
    #[error("repeat count must be at least 1")]
    NoRepeats,
    #[error("success probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

/// Euclid's algorithm.
pub fn gcd(u: u64, v: u64) -> Result<u64, ShorError> {
    if u == 0 && v == 0 {
        return Err(ShorError::GcdOfZeros);
    }
    let (mut a, mut b) = (u, v);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Ok(a)
}

/// `a^z mod n` by square-and-multiply.
pub fn modexp(a: u64, z: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let n = u128::from(n);
    let mut base = u128::from(a) % n;
    let mut exp = z;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        exp >>= 1;
    }
    acc as u64
}

/// The number to factor, the chosen base, and the width of the argument
/// register read out by the quantum routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoringInstance {
    n: u64,
    a: u64,
    argument_bits: u32,
}

impl FactoringInstance {
    pub fn new(n: u64, a: u64, argument_bits: u32) -> Result<Self, ShorError> {
        if !(3..=MAX_MODULUS).contains(&n) {
            return Err(ShorError::ModulusOutOfRange(n));
        }
        if a <= 1 || a >= n {
            return Err(ShorError::BaseOutOfRange { a, n });
        }
        let common = gcd(a, n)?;
        if common != 1 {
            return Err(ShorError::NotCoprime { a, n, common });
        }
        if !(1..=62).contains(&argument_bits) {
            return Err(ShorError::RegisterWidth(argument_bits));
        }
        Ok(FactoringInstance { n, a, argument_bits })
    }

    /// N = 15, a = 2, three argument bits (x2 x1 x0).
    pub fn shor15() -> Self {
        FactoringInstance::new(15, 2, 3).expect("valid instance")
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.a
    }

    pub fn argument_bits(&self) -> u32 {
        self.argument_bits
    }
}

/// Least `r >= 1` with `a^r ≡ 1 (mod N)`, by direct search.
pub fn find_order_bruteforce(inst: &FactoringInstance) -> u64 {
    let (a, n) = (inst.a, inst.n);
    let mut value = a % n;
    let mut r = 1;
    while value != 1 {
        value = value * a % n;
        r += 1;
    }
    r
}

/// Reverses the bit string. Converts between the readout label (most
/// significant argument qubit leftmost) and register order (`x0` first).
pub fn invert_bit_order(raw: &BitString) -> BitString {
    raw.reversed()
}

/// Candidate order from a phase readout `k / 2^m`: the denominator of the
/// last continued-fraction convergent whose denominator stays below
/// `modulus`. `k = 0` carries no information and yields `None`.
pub fn order_candidate(k: u64, m: u32, modulus: u64) -> Option<u64> {
    if k == 0 {
        return None;
    }
    let (mut num, mut den) = (k, 1u64 << m);
    // Convergent denominators q_i = a_i q_{i-1} + q_{i-2}.
    let (mut q_prev, mut q) = (1u64, 0u64);
    let mut best = None;
    while den != 0 {
        let term = num / den;
        (num, den) = (den, num % den);
        let next = term.checked_mul(q).and_then(|x| x.checked_add(q_prev))?;
        (q_prev, q) = (q, next);
        if q >= modulus {
            break;
        }
        best = Some(q);
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Success,
    TrivialOrInvalidOrder,
    InherentFailure,
}

/// Classical post-processing of one readout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorRunResult {
    /// Readout label, `x_{m-1} ... x1 x0`.
    pub raw_outcome: BitString,
    pub phase_numerator: u64,
    pub candidate_order: Option<u64>,
    pub classification: Classification,
    /// `(p, q)` with `p <= q` and `p * q = N`. Trivial outcomes report
    /// `(1, N)`.
    pub factors: Option<(u64, u64)>,
}

/// Full classical pipeline for one readout label.
///
/// The label is inverted back to register order and read as
/// `k = Σ x_i 2^i`. A candidate order is accepted only if it really is a
/// period of `a^z mod N`, is even, and `a^{r/2} ≢ -1 (mod N)`; the factors
/// then come from `gcd(N, a^{r/2} ± 1)`.
pub fn classify_and_factor(inst: &FactoringInstance, raw_outcome: &BitString) -> Result<ShorRunResult, ShorError> {
    if raw_outcome.len() != inst.argument_bits as usize {
        return Err(ShorError::OutcomeWidth {
            outcome: raw_outcome.to_string(),
            expected: inst.argument_bits,
            found: raw_outcome.len(),
        });
    }
    let register = invert_bit_order(raw_outcome);
    let k = register
        .bits()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
    let (n, a) = (inst.n, inst.a);

    let mut result = ShorRunResult {
        raw_outcome: raw_outcome.clone(),
        phase_numerator: k,
        candidate_order: None,
        classification: Classification::InherentFailure,
        factors: None,
    };
    if k == 0 {
        return Ok(result);
    }
    result.candidate_order = order_candidate(k, inst.argument_bits, n);
    result.classification = Classification::TrivialOrInvalidOrder;
    result.factors = Some((1, n));

    let Some(r) = result.candidate_order else {
        return Ok(result);
    };
    if modexp(a, r, n) != 1 || r % 2 == 1 {
        return Ok(result);
    }
    let half = modexp(a, r / 2, n);
    if half == n - 1 {
        return Ok(result);
    }
    // half == 1 gives gcd(N, 0) = N, which is filtered out as trivial.
    let nontrivial = [half + n - 1, half + 1]
        .into_iter()
        .map(|x| gcd(n, x % n).expect("n is nonzero"))
        .find(|&d| d > 1 && d < n);
    if let Some(d) = nontrivial {
        let (p, q) = (d.min(n / d), d.max(n / d));
        result.classification = Classification::Success;
        result.factors = Some((p, q));
    }
    Ok(result)
}

/// Probability that at least one of `n` independent runs succeeds.
pub fn repeat_success_rate(n: u32, single_run_success: f64) -> Result<f64, ShorError> {
    if n == 0 {
        return Err(ShorError::NoRepeats);
    }
    if !(0.0..=1.0).contains(&single_run_success) {
        return Err(ShorError::InvalidProbability(single_run_success));
    }
    let exponent = i32::try_from(n).unwrap_or(i32::MAX);
    Ok(1.0 - (1.0 - single_run_success).powi(exponent))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(15, 3), Ok(3));
        assert_eq!(gcd(15, 5), Ok(5));
        assert_eq!(gcd(7, 1), Ok(1));
        assert_eq!(gcd(0, 9), Ok(9));
        assert_eq!(gcd(0, 0), Err(ShorError::GcdOfZeros));
    }

    #[test]
    fn modexp_examples() {
        assert_eq!(modexp(2, 4, 15), 1);
        assert_eq!(modexp(2, 2, 15), 4);
        assert_eq!(modexp(7, 0, 15), 1);
        assert_eq!(modexp(3, 200, 1 << 31), {
            let mut v = 1u128;
            for _ in 0..200 {
                v = v * 3 % (1u128 << 31);
            }
            v as u64
        });
    }

    #[test]
    fn orders() {
        assert_eq!(find_order_bruteforce(&FactoringInstance::new(15, 2, 3).unwrap()), 4);
        assert_eq!(find_order_bruteforce(&FactoringInstance::new(15, 4, 3).unwrap()), 2);
        assert_eq!(find_order_bruteforce(&FactoringInstance::new(3, 2, 3).unwrap()), 2);
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            FactoringInstance::new(15, 3, 3),
            Err(ShorError::NotCoprime { common: 3, .. })
        ));
        assert!(matches!(
            FactoringInstance::new(15, 1, 3),
            Err(ShorError::BaseOutOfRange { .. })
        ));
        assert!(matches!(
            FactoringInstance::new(15, 15, 3),
            Err(ShorError::BaseOutOfRange { .. })
        ));
        assert!(matches!(
            FactoringInstance::new((1 << 31) + 1, 2, 3),
            Err(ShorError::ModulusOutOfRange(_))
        ));
        assert!(matches!(
            FactoringInstance::new(15, 2, 0),
            Err(ShorError::RegisterWidth(0))
        ));
    }

    #[test]
    fn bit_inversion() {
        assert_eq!(invert_bit_order(&bits("011")), bits("110"));
        assert_eq!(invert_bit_order(&bits("000")), bits("000"));
        assert_eq!(invert_bit_order(&bits("010")), bits("010"));
    }

    #[test]
    fn order_candidates_for_three_bits() {
        assert_eq!(order_candidate(2, 3, 15), Some(4));
        assert_eq!(order_candidate(6, 3, 15), Some(4));
        assert_eq!(order_candidate(4, 3, 15), Some(2));
        assert_eq!(order_candidate(0, 3, 15), None);
    }

    #[test]
    fn order_candidate_matches_fraction_enumeration() {
        // For m = 3 every k/8 is representable with a denominator below 15,
        // so the candidate is the smallest q with some p/q = k/8.
        for k in 1..8u64 {
            let smallest = (1..15u64).find(|&q| (0..=q).any(|p| p * 8 == k * q)).unwrap();
            assert_eq!(order_candidate(k, 3, 15), Some(smallest), "k = {k}");
        }
    }

    #[test]
    fn order_candidate_truncates_at_modulus() {
        // 3/8 with modulus 5: convergents 0/1, 1/2, 1/3, 3/8 -> last below 5 is 3.
        assert_eq!(order_candidate(3, 3, 5), Some(3));
        // 1/8 with modulus 5: convergents 0/1, 1/8 -> only the trivial 1.
        assert_eq!(order_candidate(1, 3, 5), Some(1));
    }

    #[test]
    fn classification_of_chip_outcomes() {
        let inst = FactoringInstance::shor15();
        let r = classify_and_factor(&inst, &bits("010")).unwrap();
        assert_eq!(r.classification, Classification::Success);
        assert_eq!(
            (r.phase_numerator, r.candidate_order, r.factors),
            (2, Some(4), Some((3, 5)))
        );

        let r = classify_and_factor(&inst, &bits("110")).unwrap();
        assert_eq!(r.classification, Classification::Success);
        assert_eq!(
            (r.phase_numerator, r.candidate_order, r.factors),
            (6, Some(4), Some((3, 5)))
        );

        let r = classify_and_factor(&inst, &bits("100")).unwrap();
        assert_eq!(r.classification, Classification::TrivialOrInvalidOrder);
        assert_eq!(
            (r.phase_numerator, r.candidate_order, r.factors),
            (4, Some(2), Some((1, 15)))
        );

        let r = classify_and_factor(&inst, &bits("000")).unwrap();
        assert_eq!(r.classification, Classification::InherentFailure);
        assert_eq!((r.candidate_order, r.factors), (None, None));
    }

    #[test]
    fn classification_rejects_wrong_width() {
        let inst = FactoringInstance::shor15();
        assert!(matches!(
            classify_and_factor(&inst, &bits("10")),
            Err(ShorError::OutcomeWidth {
                expected: 3,
                found: 2,
                ..
            })
        ));
    }

    #[test]
    fn repeat_success() {
        assert_eq!(repeat_success_rate(1, 0.5), Ok(0.5));
        assert_eq!(repeat_success_rate(3, 0.5), Ok(0.875));
        assert_eq!(repeat_success_rate(7, 1.0), Ok(1.0));
        assert_eq!(repeat_success_rate(0, 0.5), Err(ShorError::NoRepeats));
        assert!(repeat_success_rate(2, 1.5).is_err());
    }

    #[test]
    fn result_serializes_with_snake_case_classification() {
        let r = classify_and_factor(&FactoringInstance::shor15(), &bits("100")).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(
            json.contains("\"classification\":\"trivial_or_invalid_order\""),
            "{json}"
        );
        assert!(json.contains("\"raw_outcome\":\"100\""));
    }
}
