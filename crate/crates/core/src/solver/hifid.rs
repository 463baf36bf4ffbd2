use super::trajectory::{run_trajectory_with, solution_fidelity, TrajectoryOptions};
use super::{Schedule, SolverError};
use crate::rebit::{RebitState, RotationNoise};
use crate::sat::{generate_instance, Assignment, GenConfig, SatInstance};

pub const DEFAULT_HIFID_THRESHOLD: f64 = 0.999;
pub const DEFAULT_HIFID_CAP: u64 = 100_000;

/// Passed checks at constant θ until the fidelity with the solution span
/// first reaches `threshold`.
pub fn n_hifid(
    instance: &SatInstance,
    solutions: &[Assignment],
    theta: f64,
    threshold: f64,
    cap: u64,
) -> Result<u64, SolverError> {
    n_hifid_noisy(instance, solutions, theta, threshold, cap, None)
}

pub fn n_hifid_noisy(
    instance: &SatInstance,
    solutions: &[Assignment],
    theta: f64,
    threshold: f64,
    cap: u64,
    noise: Option<&mut RotationNoise>,
) -> Result<u64, SolverError> {
    if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(SolverError::BadSchedule(format!("theta = {theta} outside (0, pi/2]")));
    }
    if solutions.is_empty() {
        return Err(SolverError::NoSolutions);
    }
    let start = RebitState::init_plus(instance.n())?;
    if solution_fidelity(&start, solutions, theta)?.is_some_and(|f| f >= threshold) {
        return Ok(0);
    }
    let schedule = Schedule::Constant { theta, checks: cap };
    let options = TrajectoryOptions {
        solutions: Some(solutions),
        ..TrajectoryOptions::default()
    };
    let mut best = 0.0f64;
    let (ledger, _) = run_trajectory_with(instance, &schedule, &options, noise, |r| {
        let f = r.fidelity.unwrap_or(0.0);
        best = best.max(f);
        f >= threshold
    })?;
    match ledger.records.last() {
        Some(r) if r.fidelity.is_some_and(|f| f >= threshold) => Ok(r.check_index),
        _ => Err(SolverError::Diverged {
            checks: ledger.records.len() as u64,
            best_fidelity: best,
        }),
    }
}

/// Nearest-rank quantile of `values` (`q` in [0, 1]).
pub fn quantile(values: &[u64], q: f64) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    Some(v[rank - 1])
}

/// N_full default: the 99.9th percentile of N_hiFid over `pilot` fresh
/// unique-solution instances at the same (n, θ).
pub fn default_n_full(n: usize, theta: f64, pilot: usize, seed: u64, config: &GenConfig) -> Result<u64, SolverError> {
    let mut counts = Vec::with_capacity(pilot);
    for i in 0..pilot as u64 {
        let inst = generate_instance(n, seed.wrapping_add(i), Some(1), config)?;
        let sols = inst
            .count_solutions(1, config.exhaustive_limit)?
            .solutions
            .unwrap_or_default();
        counts.push(n_hifid(
            &inst,
            &sols,
            theta,
            DEFAULT_HIFID_THRESHOLD,
            DEFAULT_HIFID_CAP,
        )?);
    }
    quantile(&counts, 0.999).ok_or(SolverError::NoSolutions)
}
