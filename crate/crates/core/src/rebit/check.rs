//! Clause-check projections.
//!
//! A check on literals with signs s_l rotates each clause qubit by
//! `Y(s_l θ - π/2)`, which carries that qubit's fail state to |0⟩, removes
//! the all-|0⟩ component of the clause qubits, then undoes the rotations
//! with `Y(π/2 - s_l θ)`. The fused kernel below does all of that in one
//! sweep over each 2^k-amplitude group: with pre-rotation row weights `w`,
//! post-rotation column `u` and residual rotation `R = Post·Pre`, a group
//! `a` becomes `R a - (w·a) u`. Without noise `R = I` and `u = w`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use super::noise::{self, RotationNoise};
use super::{y_cs, GroupLayout, RebitError, RebitState};
use crate::exec::{for_each_group_chunk, map_chunks};
use crate::sat::Clause;

/// Pass probabilities below this are treated as certain failure.
pub const DEFAULT_PASS_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckOutcome {
    Pass(f64),
    Fail(f64),
}

impl CheckOutcome {
    pub fn passed(self) -> bool {
        matches!(self, CheckOutcome::Pass(_))
    }

    pub fn p_pass(self) -> f64 {
        match self {
            CheckOutcome::Pass(p) | CheckOutcome::Fail(p) => p,
        }
    }
}

/// A clause check with its rotation angles already drawn.
#[derive(Clone, Debug)]
pub struct CheckKernel {
    layout: GroupLayout,
    size: usize,
    w: [f64; 8],
    u: [f64; 8],
    residual: Option<Vec<(f64, f64)>>,
}

fn validate(state_n: usize, clause: &Clause) -> Result<Vec<usize>, RebitError> {
    let k = clause.len();
    if !(1..=3).contains(&k) {
        return Err(RebitError::ClauseLength(k));
    }
    let qubits: Vec<usize> = clause.literals.iter().map(|l| l.var).collect();
    for (i, &q) in qubits.iter().enumerate() {
        if q >= state_n {
            return Err(RebitError::QubitOutOfRange { qubit: q, n: state_n });
        }
        if qubits[..i].contains(&q) {
            return Err(RebitError::RepeatedVariable(q));
        }
    }
    Ok(qubits)
}

impl CheckKernel {
    /// Draws both physical rotations per literal from `noise` (pre, then
    /// post, in literal order).
    pub fn new(
        n: usize,
        clause: &Clause,
        theta: f64,
        mut noise: Option<&mut RotationNoise>,
    ) -> Result<Self, RebitError> {
        let qubits = validate(n, clause)?;
        let k = qubits.len();
        let mut pre = Vec::with_capacity(k);
        let mut post = Vec::with_capacity(k);
        let mut noisy = false;
        for lit in &clause.literals {
            let phys = lit.sign() * theta;
            let phys_pre = noise::perturb(&mut noise, phys);
            let phys_post = noise::perturb(&mut noise, phys);
            noisy |= phys_pre != phys_post;
            pre.push(phys_pre - FRAC_PI_2);
            post.push(FRAC_PI_2 - phys_post);
        }
        let size = 1usize << k;
        let mut w = [0.0; 8];
        let mut u = [0.0; 8];
        for j in 0..size {
            w[j] = (0..k)
                .map(|l| {
                    let (c, s) = y_cs(pre[l]);
                    if j >> l & 1 == 1 {
                        s
                    } else {
                        c
                    }
                })
                .product();
            u[j] = (0..k)
                .map(|l| {
                    let (c, s) = y_cs(post[l]);
                    if j >> l & 1 == 1 {
                        -s
                    } else {
                        c
                    }
                })
                .product();
        }
        let residual = noisy.then(|| (0..k).map(|l| y_cs(pre[l] + post[l])).collect());
        Ok(CheckKernel {
            layout: GroupLayout::new(n, &qubits),
            size,
            w,
            u,
            residual,
        })
    }

    /// (fail mass, squared norm) of `state`.
    pub fn fail_mass(&self, state: &RebitState) -> (f64, f64) {
        match self.size {
            8 => self.fail_mass_k::<3, 8>(state),
            4 => self.fail_mass_k::<2, 4>(state),
            _ => self.fail_mass_k::<1, 2>(state),
        }
    }

    fn fail_mass_k<const K: usize, const S: usize>(&self, state: &RebitState) -> (f64, f64) {
        let amps = state.amplitudes();
        let sorted: [usize; K] = self.layout.sorted[..].try_into().expect("clause width");
        let offsets: [usize; S] = self.layout.offsets[..].try_into().expect("clause width");
        let w: [f64; S] = self.w[..S].try_into().expect("clause width");
        let parts = map_chunks(state.exec(), self.layout.groups, |r| {
            let mut fail = 0.0;
            let mut norm = 0.0;
            for g in r {
                let base = insert_zero_bits(g, &sorted);
                let v: [f64; S] = std::array::from_fn(|j| amps[base + offsets[j]]);
                let mut v0 = 0.0;
                for j in 0..S {
                    v0 += w[j] * v[j];
                    norm += v[j] * v[j];
                }
                fail += v0 * v0;
            }
            (fail, norm)
        });
        parts.into_iter().fold((0.0, 0.0), |(f, n), (pf, pn)| (f + pf, n + pn))
    }

    /// Conditional pass probability given the current (possibly slightly
    /// unnormalized) state.
    pub fn pass_probability(&self, state: &RebitState) -> f64 {
        let (fail, norm) = self.fail_mass(state);
        ((norm - fail) / norm).max(0.0)
    }

    /// Applies the projection and rescales by `scale`.
    fn project(&self, state: &mut RebitState, scale: f64) {
        match self.size {
            8 => self.project_k::<3, 8>(state, scale),
            4 => self.project_k::<2, 4>(state, scale),
            _ => self.project_k::<1, 2>(state, scale),
        }
    }

    fn project_k<const K: usize, const S: usize>(&self, state: &mut RebitState, scale: f64) {
        let sorted: [usize; K] = self.layout.sorted[..].try_into().expect("clause width");
        let offsets: [usize; S] = self.layout.offsets[..].try_into().expect("clause width");
        let w: [f64; S] = self.w[..S].try_into().expect("clause width");
        let u: [f64; S] = std::array::from_fn(|j| self.u[j] * scale);
        let residual = self.residual.as_deref();
        let exec = state.exec();
        for_each_group_chunk(exec, state.amps_mut(), self.layout.groups, |amps, r| {
            for g in r {
                let base = insert_zero_bits(g, &sorted);
                // SAFETY: each group owns its `S` offsets from `base`.
                let mut v: [f64; S] = std::array::from_fn(|j| unsafe { amps.get(base + offsets[j]) });
                let mut v0 = 0.0;
                for j in 0..S {
                    v0 += w[j] * v[j];
                }
                if let Some(res) = residual {
                    for (l, &(c, s)) in res.iter().enumerate() {
                        let bit = 1 << l;
                        for j in (0..S).filter(|j| j & bit == 0) {
                            let (a0, a1) = (v[j], v[j | bit]);
                            v[j] = c * a0 + s * a1;
                            v[j | bit] = -s * a0 + c * a1;
                        }
                    }
                }
                for j in 0..S {
                    // SAFETY: as above.
                    unsafe { amps.set(base + offsets[j], v[j] * scale - v0 * u[j]) };
                }
            }
        });
    }
}

#[inline(always)]
fn insert_zero_bits<const K: usize>(mut g: usize, sorted: &[usize; K]) -> usize {
    for &q in sorted {
        g = ((g >> q) << (q + 1)) | (g & ((1 << q) - 1));
    }
    g
}

impl RebitState {
    /// Probability that a noiseless check of `clause` at `theta` passes.
    pub fn check_pass_probability(&self, clause: &Clause, theta: f64) -> Result<f64, RebitError> {
        Ok(CheckKernel::new(self.n(), clause, theta, None)?.pass_probability(self))
    }

    /// Conditioned-on-pass check: projects out the fail component,
    /// renormalizes and returns the pass probability.
    pub fn clause_check_pass(
        &mut self,
        clause: &Clause,
        theta: f64,
        noise: Option<&mut RotationNoise>,
    ) -> Result<f64, RebitError> {
        self.clause_check_pass_with_floor(clause, theta, noise, DEFAULT_PASS_FLOOR)
    }

    pub fn clause_check_pass_with_floor(
        &mut self,
        clause: &Clause,
        theta: f64,
        noise: Option<&mut RotationNoise>,
        floor: f64,
    ) -> Result<f64, RebitError> {
        if self.is_aborted() {
            return Err(RebitError::Aborted);
        }
        let kernel = CheckKernel::new(self.n(), clause, theta, noise)?;
        let (fail, norm) = kernel.fail_mass(self);
        let kept = norm - fail;
        let p_pass = (kept / norm).max(0.0);
        if p_pass < floor || kept <= 0.0 {
            return Err(RebitError::CertainFailure { p_pass });
        }
        kernel.project(self, 1.0 / kept.sqrt());
        Ok(p_pass)
    }

    /// Samples the ancilla outcome. On a pass the state is projected as in
    /// [`RebitState::clause_check_pass`]; on a fail it is marked aborted and
    /// left otherwise untouched.
    pub fn clause_check_sample(
        &mut self,
        clause: &Clause,
        theta: f64,
        noise: Option<&mut RotationNoise>,
        rng: &mut impl Rng,
    ) -> Result<CheckOutcome, RebitError> {
        if self.is_aborted() {
            return Err(RebitError::Aborted);
        }
        let kernel = CheckKernel::new(self.n(), clause, theta, noise)?;
        let (fail, norm) = kernel.fail_mass(self);
        let kept = norm - fail;
        let p_pass = (kept / norm).clamp(0.0, 1.0);
        let draw: f64 = rng.random();
        if draw < p_pass && p_pass >= DEFAULT_PASS_FLOOR && kept > 0.0 {
            kernel.project(self, 1.0 / kept.sqrt());
            Ok(CheckOutcome::Pass(p_pass))
        } else {
            self.mark_aborted();
            Ok(CheckOutcome::Fail(p_pass))
        }
    }

    /// Unfused reference: explicit frame rotations, masked zeroing and
    /// inverse rotations as separate sweeps. Same angle draws as the fused
    /// kernel.
    pub fn clause_check_rotated_frame(
        &mut self,
        clause: &Clause,
        theta: f64,
        mut noise: Option<&mut RotationNoise>,
    ) -> Result<f64, RebitError> {
        let qubits = validate(self.n(), clause)?;
        let mut post = Vec::with_capacity(qubits.len());
        for lit in &clause.literals {
            let phys = lit.sign() * theta;
            let phys_pre = noise::perturb(&mut noise, phys);
            let phys_post = noise::perturb(&mut noise, phys);
            self.apply_y(lit.var, phys_pre - FRAC_PI_2, None)?;
            post.push((lit.var, FRAC_PI_2 - phys_post));
        }
        let before = self.norm_sqr();
        self.zero_all_clear(&qubits);
        let after = self.norm_sqr();
        if after <= 0.0 || after / before < DEFAULT_PASS_FLOOR {
            return Err(RebitError::CertainFailure { p_pass: after / before });
        }
        for (q, angle) in post {
            self.apply_y(q, angle, None)?;
        }
        self.renormalize();
        Ok(after / before)
    }
}
