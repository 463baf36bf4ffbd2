//! Real-amplitude n-qubit register.
//!
//! Amplitude index bit `i` is the z-basis value of qubit `i`, so index 0 is
//! |00…0⟩ and an [`Assignment`]'s index addresses its basis state directly.

mod check;
mod fidelity;
mod noise;
mod snapshot;

pub use check::{CheckKernel, CheckOutcome, DEFAULT_PASS_FLOOR};
pub use fidelity::{fidelity_subspace, gram_matrix, MAX_CONDITION};
pub use noise::{NoiseMode, RotationNoise};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use thiserror::Error;

use crate::exec::{for_each_chunk_mut, for_each_group_chunk, map_chunks, sum_chunks, Exec};
use crate::sat::Assignment;

/// Hard cap on register width (2^26 doubles = 512 MiB).
pub const MAX_QUBITS: usize = 26;

#[derive(Debug, Error)]
pub enum RebitError {
    #[error("{n} qubits need {bytes} bytes of amplitudes; the limit is {limit} qubits")]
    Capacity { n: usize, limit: usize, bytes: u128 },
    #[error("register needs at least one qubit")]
    Empty,
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("clause must have 1 to 3 literals, got {0}")]
    ClauseLength(usize),
    #[error("clause repeats variable {0}")]
    RepeatedVariable(usize),
    #[error("clause check annihilates the state (p_pass = {p_pass:e})")]
    CertainFailure { p_pass: f64 },
    #[error("state was aborted by a failed check")]
    Aborted,
    #[error("theta {0} outside [0, pi/2]")]
    ThetaOutOfRange(f64),
    #[error("assignment has {got} bits for a {n}-qubit register")]
    AssignmentWidth { n: usize, got: usize },
    #[error("subspace fidelity needs at least one solution")]
    NoSolutions,
    #[error("solutions {0} and {1} are identical")]
    DuplicateSolutions(usize, usize),
    #[error("Gram matrix is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The product state `⊗_i Y(L_i θ)|+⟩` encoding `assignment`
/// (L_i = -1 for TRUE, +1 for FALSE).
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpec {
    pub assignment: Assignment,
    pub theta: f64,
}

impl TargetSpec {
    pub fn new(assignment: Assignment, theta: f64) -> Result<Self, RebitError> {
        if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(RebitError::ThetaOutOfRange(theta));
        }
        Ok(TargetSpec { assignment, theta })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Single-qubit amplitudes `(⟨0|, ⟨1|)` of qubit `i`: TRUE gives
    /// (cos φ, sin φ), FALSE gives (sin φ, cos φ), with φ = (2θ + π)/4.
    pub fn qubit_amps(&self, i: usize) -> [f64; 2] {
        let (s, c) = qubit_phi(self.theta).sin_cos();
        if self.assignment.bits[i] {
            [c, s]
        } else {
            [s, c]
        }
    }
}

fn qubit_phi(theta: f64) -> f64 {
    (2.0 * theta + std::f64::consts::PI) / 4.0
}

/// Elements of `[Y(θ)]`: (cos θ/2, sin θ/2).
#[inline]
pub(crate) fn y_cs(angle: f64) -> (f64, f64) {
    let (s, c) = (0.5 * angle).sin_cos();
    (c, s)
}

/// Zero-bit insertion layout for kernels that act on a few qubits at once.
#[derive(Clone, Debug)]
pub(crate) struct GroupLayout {
    pub(crate) sorted: Vec<usize>,
    /// Offsets of the local basis states; local bit `l` is `qubits[l]`.
    pub(crate) offsets: Vec<usize>,
    pub(crate) groups: usize,
}

impl GroupLayout {
    pub(crate) fn new(n: usize, qubits: &[usize]) -> Self {
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        let offsets = (0..1usize << qubits.len())
            .map(|j| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| j >> l & 1 == 1)
                    .map(|(_, q)| 1usize << q)
                    .sum()
            })
            .collect();
        GroupLayout {
            sorted,
            offsets,
            groups: 1usize << (n - qubits.len()),
        }
    }

    #[inline(always)]
    pub(crate) fn base(&self, mut g: usize) -> usize {
        for &q in &self.sorted {
            g = ((g >> q) << (q + 1)) | (g & ((1 << q) - 1));
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RebitState {
    n: usize,
    amps: Vec<f64>,
    exec: Exec,
    aborted: bool,
}

impl RebitState {
    fn check_width(n: usize) -> Result<(), RebitError> {
        if n == 0 {
            return Err(RebitError::Empty);
        }
        if n > MAX_QUBITS {
            return Err(RebitError::Capacity {
                n,
                limit: MAX_QUBITS,
                bytes: (1u128 << n) * 8,
            });
        }
        Ok(())
    }

    /// |++…+⟩.
    pub fn init_plus(n: usize) -> Result<Self, RebitError> {
        Self::check_width(n)?;
        let a = (0.5f64).powf(n as f64 / 2.0);
        Ok(RebitState {
            n,
            amps: vec![a; 1 << n],
            exec: Exec::default(),
            aborted: false,
        })
    }

    pub fn basis(n: usize, index: u64) -> Result<Self, RebitError> {
        Self::check_width(n)?;
        let mut amps = vec![0.0; 1 << n];
        amps[index as usize] = 1.0;
        Ok(RebitState {
            n,
            amps,
            exec: Exec::default(),
            aborted: false,
        })
    }

    /// Wraps raw amplitudes without renormalizing. Length must be a power
    /// of two within the width limit.
    pub fn from_amplitudes(amps: Vec<f64>) -> Result<Self, RebitError> {
        if !amps.len().is_power_of_two() {
            return Err(RebitError::Snapshot(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        Self::check_width(n)?;
        Ok(RebitState {
            n,
            amps,
            exec: Exec::default(),
            aborted: false,
        })
    }

    /// Materializes the target product state.
    pub fn target_state(spec: &TargetSpec) -> Result<Self, RebitError> {
        let n = spec.n();
        Self::check_width(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        amps.push(1.0);
        for i in 0..n {
            let [t0, t1] = spec.qubit_amps(i);
            let half = amps.len();
            amps.extend_from_within(..);
            amps[..half].iter_mut().for_each(|a| *a *= t0);
            amps[half..].iter_mut().for_each(|a| *a *= t1);
        }
        Ok(RebitState {
            n,
            amps,
            exec: Exec::default(),
            aborted: false,
        })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn is_aborted(&self) -> bool {
        self.aborted
    }

    pub(crate) fn mark_aborted(&mut self) {
        self.aborted = true;
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [f64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        let amps = &self.amps;
        sum_chunks(self.exec, amps.len(), |r| amps[r].iter().map(|a| a * a).sum())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn renormalize(&mut self) {
        let scale = 1.0 / self.norm();
        for_each_chunk_mut(self.exec, &mut self.amps, |_, c| c.iter_mut().for_each(|a| *a *= scale));
    }

    /// Applies `Y(angle) = [[cos θ/2, sin θ/2], [-sin θ/2, cos θ/2]]` to
    /// `qubit`, after perturbing the angle if noise is given.
    pub fn apply_y(
        &mut self,
        qubit: usize,
        angle: f64,
        mut noise: Option<&mut RotationNoise>,
    ) -> Result<(), RebitError> {
        if qubit >= self.n {
            return Err(RebitError::QubitOutOfRange { qubit, n: self.n });
        }
        let angle = noise::perturb(&mut noise, angle);
        let (c, s) = y_cs(angle);
        let layout = GroupLayout::new(self.n, &[qubit]);
        let stride = 1usize << qubit;
        for_each_group_chunk(self.exec, &mut self.amps, layout.groups, |amps, r| {
            for g in r {
                let i = layout.base(g);
                // SAFETY: group g owns exactly {i, i + stride}.
                unsafe {
                    let a0 = amps.get(i);
                    let a1 = amps.get(i + stride);
                    amps.set(i, c * a0 + s * a1);
                    amps.set(i + stride, -s * a0 + c * a1);
                }
            }
        });
        Ok(())
    }

    /// Zeroes every amplitude whose bits on `qubits` are all zero.
    pub(crate) fn zero_all_clear(&mut self, qubits: &[usize]) {
        let layout = GroupLayout::new(self.n, qubits);
        for_each_group_chunk(self.exec, &mut self.amps, layout.groups, |amps, r| {
            for g in r {
                // SAFETY: group bases are distinct indices.
                unsafe { amps.set(layout.base(g), 0.0) }
            }
        });
    }

    /// `⟨θ_spec|Ψ⟩` in one pass, without materializing the target.
    pub fn overlap(&self, spec: &TargetSpec) -> Result<f64, RebitError> {
        if spec.n() != self.n {
            return Err(RebitError::AssignmentWidth {
                n: self.n,
                got: spec.n(),
            });
        }
        let low_bits = self.n.min(12);
        let table = |qubits: std::ops::Range<usize>| {
            let mut t = vec![1.0];
            for i in qubits {
                let [t0, t1] = spec.qubit_amps(i);
                let half = t.len();
                t.extend_from_within(..);
                t[..half].iter_mut().for_each(|a| *a *= t0);
                t[half..].iter_mut().for_each(|a| *a *= t1);
            }
            t
        };
        let low = table(0..low_bits);
        let high = table(low_bits..self.n);
        let low_mask = (1usize << low_bits) - 1;
        let amps = &self.amps;
        Ok(sum_chunks(self.exec, amps.len(), |r| {
            r.map(|z| amps[z] * low[z & low_mask] * high[z >> low_bits]).sum()
        }))
    }

    pub fn fidelity_usa(&self, spec: &TargetSpec) -> Result<f64, RebitError> {
        Ok(self.overlap(spec)?.powi(2))
    }

    /// Chunk-level cumulative probabilities for sampling.
    fn chunk_masses(&self) -> Vec<f64> {
        let amps = &self.amps;
        map_chunks(self.exec, amps.len(), |r| amps[r].iter().map(|a| a * a).sum())
    }

    fn sample_with(&self, masses: &[f64], total: f64, rng: &mut impl Rng) -> u64 {
        let mut u = rng.random::<f64>() * total;
        let chunk_len = crate::exec::CHUNK_LEN;
        for (c, &m) in masses.iter().enumerate() {
            if u < m || c + 1 == masses.len() {
                let start = c * chunk_len;
                let end = (start + chunk_len).min(self.amps.len());
                let mut last_nonzero = start;
                for z in start..end {
                    let p = self.amps[z] * self.amps[z];
                    if p > 0.0 {
                        last_nonzero = z;
                    }
                    if u < p {
                        return z as u64;
                    }
                    u -= p;
                }
                return last_nonzero as u64;
            }
            u -= m;
        }
        unreachable!("masses is never empty")
    }

    /// Measures every qubit in the z basis. The register is consumed.
    pub fn measure_all(self, rng: &mut impl Rng) -> Assignment {
        let masses = self.chunk_masses();
        let total = masses.iter().sum();
        Assignment::from_index(self.n, self.sample_with(&masses, total, rng))
    }

    /// `count` independent z-basis measurements of copies of this state.
    pub fn sample_assignments(&self, count: usize, rng: &mut impl Rng) -> Vec<Assignment> {
        let masses = self.chunk_masses();
        let total: f64 = masses.iter().sum();
        (0..count)
            .map(|_| Assignment::from_index(self.n, self.sample_with(&masses, total, rng)))
            .collect()
    }
}
