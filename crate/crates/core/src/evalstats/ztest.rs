//! One-tailed z-test for `H0: P <= p0` against `H1: P > p0` on binary
//! survey responses, with bootstrap estimates of the mean and deviation.
//!
//! Each replicate draws `sample_size` responses with replacement and records
//! the replicate mean and population standard deviation. The test uses the
//! averages over all replicates:
//!
//! ```text
//! z = (mean - p0) / (std / sqrt(sample_size)),   p = 1 - Φ(z)
//! ```
//!
//! Randomness comes from ChaCha20 seeded through `SeedableRng::seed_from_u64`;
//! indices are drawn from raw 64-bit outputs with Lemire's multiply-shift
//! rejection method, so results are reproducible from the seed alone.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::normal::normal_sf;

/// Identifier of the resampling generator, recorded in every result.
pub const RNG_ALGORITHM: &str = "chacha20+lemire-u64";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is degenerate: standard deviation is zero")]
    Degenerate,
    #[error("sample is empty")]
    EmptySample,
    #[error("response {0} is not 0 or 1")]
    NonBinary(u8),
    #[error("{name} must be at least 1")]
    ZeroCount { name: &'static str },
    #[error("unknown survey question `{0}`")]
    UnknownQuestion(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Question {
    Organization,
    Comprehensiveness,
    Informativeness,
    Preference,
}

impl Question {
    pub const ALL: [Question; 4] = [
        Question::Organization,
        Question::Comprehensiveness,
        Question::Informativeness,
        Question::Preference,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Question::Organization => "organization",
            Question::Comprehensiveness => "comprehensiveness",
            Question::Informativeness => "informativeness",
            Question::Preference => "preference",
        }
    }
}

impl core::str::FromStr for Question {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Question::ALL
            .into_iter()
            .find(|q| q.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| StatsError::UnknownQuestion(s.to_string()))
    }
}

/// Binary responses to one survey question; 1 means the prototype was
/// preferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySample {
    pub question: Question,
    responses: Vec<u8>,
}

impl SurveySample {
    pub fn new(question: Question, responses: Vec<u8>) -> Result<Self, StatsError> {
        if let Some(&bad) = responses.iter().find(|&&r| r > 1) {
            return Err(StatsError::NonBinary(bad));
        }
        Ok(SurveySample { question, responses })
    }

    /// `ones` ones followed by `n - ones` zeros.
    pub fn with_counts(question: Question, ones: usize, n: usize) -> Self {
        let mut responses = alloc::vec![0u8; n];
        responses[..ones.min(n)].fill(1);
        SurveySample { question, responses }
    }

    pub fn responses(&self) -> &[u8] {
        &self.responses
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    pub fn proportion(&self) -> f64 {
        self.responses.iter().map(|&r| r as f64).sum::<f64>() / self.responses.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTestResult {
    pub z: f64,
    pub p_value: f64,
    /// Average replicate mean.
    pub mean: f64,
    /// Average replicate population standard deviation.
    pub std: f64,
    /// Replicate size.
    pub n: usize,
    pub repeats: usize,
    pub seed: u64,
    pub rng: String,
}

impl ZTestResult {
    pub fn rejects_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// `z = (p_hat - p0) / (sqrt(p_hat (1 - p_hat)) / sqrt(n))`.
pub fn ztest_closed_form(p_hat: f64, p0: f64, n: usize) -> Result<f64, StatsError> {
    if n == 0 {
        return Err(StatsError::ZeroCount { name: "n" });
    }
    if !(p_hat > 0.0 && p_hat < 1.0) {
        return Err(StatsError::Degenerate);
    }
    let sigma = libm::sqrt(p_hat * (1.0 - p_hat));
    Ok((p_hat - p0) / (sigma / libm::sqrt(n as f64)))
}

/// Unbiased integer in `[0, n)`; `n > 0`.
fn bounded(rng: &mut impl RngCore, n: u64) -> u64 {
    let mut m = u128::from(rng.next_u64()) * u128::from(n);
    if (m as u64) < n {
        let threshold = n.wrapping_neg() % n;
        while (m as u64) < threshold {
            m = u128::from(rng.next_u64()) * u128::from(n);
        }
    }
    (m >> 64) as u64
}

pub fn bootstrap_ztest(
    sample: &SurveySample,
    p0: f64,
    sample_size: usize,
    repeats: usize,
    seed: u64,
) -> Result<ZTestResult, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if sample_size == 0 {
        return Err(StatsError::ZeroCount { name: "sample_size" });
    }
    if repeats == 0 {
        return Err(StatsError::ZeroCount { name: "repeats" });
    }
    let data = sample.responses();
    let len = data.len() as u64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    let mut mean_sum = 0.0;
    let mut std_sum = 0.0;
    for _ in 0..repeats {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..sample_size {
            let x = data[bounded(&mut rng, len) as usize] as f64;
            sum += x;
            sum_sq += x * x;
        }
        let m = sum / sample_size as f64;
        let var = (sum_sq / sample_size as f64 - m * m).max(0.0);
        mean_sum += m;
        std_sum += libm::sqrt(var);
    }
    let mean = mean_sum / repeats as f64;
    let std = std_sum / repeats as f64;
    if std == 0.0 {
        return Err(StatsError::Degenerate);
    }
    let z = (mean - p0) / (std / libm::sqrt(sample_size as f64));
    Ok(ZTestResult {
        z,
        p_value: normal_sf(z).clamp(0.0, 1.0),
        mean,
        std,
        n: sample_size,
        repeats,
        seed,
        rng: RNG_ALGORITHM.to_string(),
    })
}
