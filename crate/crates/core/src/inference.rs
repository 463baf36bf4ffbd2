//! Turning repeated z-basis measurements of an approximate solution state
//! into an assignment.
//!
//! Each qubit of the exact target reads its solution value with the known
//! bias `p = (1 + sin θ)/2`, independently of the others, so per-qubit
//! majority votes over `R` runs behave like `n` coins of known bias.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use statrs::function::factorial::ln_binomial;
use thiserror::Error;

use crate::sat::{Assignment, SatError, SatInstance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("repetition count must be odd and positive, got {0}")]
    EvenRepetitions(u64),
    #[error("bias must lie in (1/2, 1], got {0}")]
    BiasOutOfRange(f64),
    #[error("need at least {needed} runs, have {got}")]
    TooFewRuns { needed: u64, got: u64 },
    #[error("n must be at least 2, got {0}")]
    TooFewQubits(usize),
    #[error("theta must lie in (0, pi/2], got {0}")]
    ThetaOutOfRange(f64),
    #[error("measurement has {got} bits, tally has {n}")]
    WidthMismatch { n: usize, got: usize },
    #[error("qubit {qubit}: {ones} ones exceeds {runs} runs")]
    BadCount { qubit: usize, ones: u64, runs: u64 },
    #[error(transparent)]
    Sat(#[from] SatError),
}

/// Bias towards the solution value for a perfect target at `theta`.
pub fn bias(theta: f64) -> f64 {
    0.5 * (1.0 + theta.sin())
}

fn check_theta(theta: f64) -> Result<(), InferenceError> {
    if theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12 {
        Ok(())
    } else {
        Err(InferenceError::ThetaOutOfRange(theta))
    }
}

fn check_bias(p: f64) -> Result<(), InferenceError> {
    if p > 0.5 && p <= 1.0 {
        Ok(())
    } else {
        Err(InferenceError::BiasOutOfRange(p))
    }
}

/// Probability that a majority vote over an odd number `runs` of throws
/// of a coin with bias `p` picks the wrong side.
pub fn p_wrong_exact(runs: u64, p: f64) -> Result<f64, InferenceError> {
    if runs.is_multiple_of(2) {
        return Err(InferenceError::EvenRepetitions(runs));
    }
    check_bias(p)?;
    if p == 1.0 {
        return Ok(0.0);
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let half = (runs - 1) / 2;
    Ok((0..=half)
        .map(|i| (ln_binomial(runs, i) + i as f64 * lp + (runs - i) as f64 * lq).exp())
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianEstimate {
    pub p_wrong: f64,
    pub g: f64,
    /// False when `runs·(1-p) <= 5`, where the normal approximation is poor.
    pub valid: bool,
}

/// Normal approximation `erfc(G)/2` with `G = (p - 1/2)√R / √(2p(1-p))`.
pub fn p_wrong_gaussian(runs: u64, p: f64) -> Result<GaussianEstimate, InferenceError> {
    check_bias(p)?;
    let g = (p - 0.5) * (runs as f64).sqrt() / (2.0 * p * (1.0 - p)).sqrt();
    Ok(GaussianEstimate {
        p_wrong: 0.5 * erfc(g),
        g,
        valid: runs as f64 * (1.0 - p) > 5.0,
    })
}

/// Smallest odd `R` with `p_wrong_exact(R, bias(θ)) < 1/n`.
pub fn required_repetitions(n: usize, theta: f64) -> Result<u64, InferenceError> {
    if n < 2 {
        return Err(InferenceError::TooFewQubits(n));
    }
    check_theta(theta)?;
    let p = bias(theta).min(1.0);
    let target = 1.0 / n as f64;
    let mut r = 1;
    while p_wrong_exact(r, p)? >= target {
        r += 2;
    }
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementTally {
    runs: u64,
    ones: Vec<u64>,
}

impl MeasurementTally {
    pub fn new(n: usize) -> Self {
        MeasurementTally {
            runs: 0,
            ones: vec![0; n],
        }
    }

    pub fn from_counts(runs: u64, ones: Vec<u64>) -> Result<Self, InferenceError> {
        if let Some((qubit, &o)) = ones.iter().enumerate().find(|(_, &o)| o > runs) {
            return Err(InferenceError::BadCount { qubit, ones: o, runs });
        }
        Ok(MeasurementTally { runs, ones })
    }

    pub fn n(&self) -> usize {
        self.ones.len()
    }

    pub fn runs(&self) -> u64 {
        self.runs
    }

    pub fn ones(&self) -> &[u64] {
        &self.ones
    }

    pub fn record(&mut self, a: &Assignment) -> Result<(), InferenceError> {
        if a.len() != self.n() {
            return Err(InferenceError::WidthMismatch {
                n: self.n(),
                got: a.len(),
            });
        }
        self.runs += 1;
        for (o, &b) in self.ones.iter_mut().zip(&a.bits) {
            *o += b as u64;
        }
        Ok(())
    }

    /// Tally with qubits reordered: qubit `i` of the result is qubit
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        MeasurementTally {
            runs: self.runs,
            ones: perm.iter().map(|&i| self.ones[i]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inference {
    pub assignment: Assignment,
    /// Posterior probability that each majority call is right, given the
    /// known bias and even prior odds.
    pub confidence: Vec<f64>,
}

pub fn infer_assignment(tally: &MeasurementTally, theta: f64) -> Result<Inference, InferenceError> {
    if tally.runs.is_multiple_of(2) {
        return Err(InferenceError::EvenRepetitions(tally.runs));
    }
    check_theta(theta)?;
    let p = bias(theta).min(1.0);
    let r = tally.runs as i64;
    let mut bits = Vec::with_capacity(tally.n());
    let mut confidence = Vec::with_capacity(tally.n());
    for &ones in &tally.ones {
        bits.push(2 * ones as i64 > r);
        let margin = (2 * ones as i64 - r).unsigned_abs() as i32;
        let conf = if p >= 1.0 {
            1.0
        } else {
            1.0 / (1.0 + ((1.0 - p) / p).powi(margin))
        };
        confidence.push(conf);
    }
    Ok(Inference {
        assignment: Assignment::new(bits),
        confidence,
    })
}

/// Qubits whose observed asymmetry `|ones/R - 1/2|` sits more than
/// `z_threshold` standard errors below the expected `sin θ / 2`.
pub fn detect_ambiguous(tally: &MeasurementTally, theta: f64, z_threshold: f64) -> Result<Vec<usize>, InferenceError> {
    if tally.runs < 3 {
        return Err(InferenceError::TooFewRuns {
            needed: 3,
            got: tally.runs,
        });
    }
    check_theta(theta)?;
    let p = bias(theta).min(1.0);
    let r = tally.runs as f64;
    let se = (p * (1.0 - p) / r).sqrt();
    let expected = 0.5 * theta.sin();
    Ok(tally
        .ones
        .iter()
        .enumerate()
        .filter(|(_, &o)| {
            let asym = (o as f64 / r - 0.5).abs();
            asym < expected - z_threshold * se
        })
        .map(|(i, _)| i)
        .collect())
}

/// One step of the multi-solution reduction: fixes the most ambiguous
/// flagged variable towards its majority outcome (TRUE on an exact tie).
/// Returns `None` when nothing is flagged.
pub fn reduce_ambiguous(
    instance: &SatInstance,
    tally: &MeasurementTally,
    theta: f64,
    z_threshold: f64,
) -> Result<Option<(usize, bool, SatInstance)>, InferenceError> {
    let flagged = detect_ambiguous(tally, theta, z_threshold)?;
    let r = tally.runs as f64;
    let Some(&var) = flagged.iter().min_by(|&&a, &&b| {
        let da = (tally.ones[a] as f64 / r - 0.5).abs();
        let db = (tally.ones[b] as f64 / r - 0.5).abs();
        da.total_cmp(&db)
    }) else {
        return Ok(None);
    };
    let value = 2 * tally.ones[var] >= tally.runs;
    Ok(Some((var, value, instance.assign_and_simplify(var, value)?)))
}
