//! Fidelity with the span of several solution-encoding product states.
//!
//! The targets are independent but not orthogonal: ⟨θ_i|θ_j⟩ = (cos θ)^d
//! with d the Hamming distance. With v_j = ⟨θ_j|Ψ⟩ and Gram matrix M, the
//! in-span component has squared norm vᵀ M⁻¹ v.

use nalgebra::{DMatrix, DVector};

use super::{RebitError, RebitState, TargetSpec};
use crate::sat::Assignment;

/// Largest accepted Gram condition number.
pub const MAX_CONDITION: f64 = 1e12;

pub fn gram_matrix(solutions: &[Assignment], theta: f64) -> DMatrix<f64> {
    let c = theta.cos();
    let m = solutions.len();
    DMatrix::from_fn(m, m, |i, j| c.powi(solutions[i].hamming(&solutions[j]) as i32))
}

pub fn fidelity_subspace(state: &RebitState, solutions: &[Assignment], theta: f64) -> Result<f64, RebitError> {
    if solutions.is_empty() {
        return Err(RebitError::NoSolutions);
    }
    for i in 0..solutions.len() {
        for j in 0..i {
            if solutions[i] == solutions[j] {
                return Err(RebitError::DuplicateSolutions(j, i));
            }
        }
    }
    let m = gram_matrix(solutions, theta);
    let eig = m.clone().symmetric_eigenvalues();
    let (lo, hi) = eig
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| (lo.min(e), hi.max(e.abs())));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(RebitError::IllConditioned { condition });
    }
    let v = solutions
        .iter()
        .map(|a| state.overlap(&TargetSpec::new(a.clone(), theta)?))
        .collect::<Result<Vec<f64>, _>>()?;
    let v = DVector::from_vec(v);
    let chol = m.cholesky().ok_or(RebitError::IllConditioned { condition })?;
    let c = chol.solve(&v);
    Ok(v.dot(&c))
}
