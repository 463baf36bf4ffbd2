use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::trajectory::run_sampled_on;
use super::{SampledOutcome, Schedule, SolverError};
use crate::inference::{infer_assignment, MeasurementTally};
use crate::rebit::RotationNoise;
use crate::sat::{Assignment, SatInstance};

/// Bookkeeping shared by solved and unsolved reports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Physical attempts, aborted or not.
    pub tries: u64,
    /// Attempts that passed every check.
    pub successful_runs: u64,
    /// Clause checks across all attempts, including the failing check of
    /// each abort.
    pub total_checks: u64,
    /// Abort position of each aborted attempt, in order.
    pub abort_indices: Vec<u64>,
    /// Successful runs whose measurement did not satisfy the instance.
    pub bad_measurements: u64,
    /// Per-qubit tallies (sculpting only).
    pub tally: Option<MeasurementTally>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub assignment: Assignment,
    #[serde(flatten)]
    pub stats: SolveStats,
}

fn check_theta0(theta0: f64) -> Result<(), SolverError> {
    if theta0 > 0.0 && theta0 <= FRAC_PI_2 + 1e-12 {
        Ok(())
    } else {
        Err(SolverError::BadSchedule(format!("theta0 = {theta0} outside (0, pi/2]")))
    }
}

/// Repeats sampled runs of `schedule` (which must end at π/2) until a run
/// passes every check and its measurement satisfies the instance.
pub fn solve_adiabatic(
    instance: &SatInstance,
    schedule: &Schedule,
    mut noise: Option<&mut RotationNoise>,
    rng: &mut impl Rng,
    try_cap: u64,
) -> Result<SolveResult, SolverError> {
    if (schedule.terminal_theta() - FRAC_PI_2).abs() > 1e-12 {
        return Err(SolverError::BadSchedule(format!(
            "{} does not end at pi/2",
            schedule.label()
        )));
    }
    let start = Instant::now();
    let clauses = instance.check_clauses();
    let full = schedule.total_checks(clauses.len());
    let mut stats = SolveStats::default();
    while stats.tries < try_cap {
        stats.tries += 1;
        match run_sampled_on(&clauses, instance.n(), schedule, noise.as_deref_mut(), rng)? {
            SampledOutcome::Abort { check_index } => {
                stats.total_checks += check_index;
                stats.abort_indices.push(check_index);
            }
            SampledOutcome::Success(state) => {
                stats.total_checks += full;
                stats.successful_runs += 1;
                let a = state.measure_all(rng);
                if instance.evaluate(&a)? {
                    stats.wall_time = start.elapsed();
                    return Ok(SolveResult { assignment: a, stats });
                }
                stats.bad_measurements += 1;
            }
        }
    }
    stats.wall_time = start.elapsed();
    Err(SolverError::Unsolved(Box::new(stats)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SculptParams {
    pub theta0: f64,
    /// Passed checks that make a run successful.
    pub n_full: u64,
    /// Successful runs allowed before giving up.
    pub max_runs: u64,
    /// Physical attempts allowed before giving up.
    pub try_cap: u64,
}

/// Prepare-and-measure at fixed θ0, voting per qubit over successful runs
/// until the majority assignment satisfies the instance.
pub fn solve_sculpt(
    instance: &SatInstance,
    params: &SculptParams,
    mut noise: Option<&mut RotationNoise>,
    rng: &mut impl Rng,
) -> Result<SolveResult, SolverError> {
    check_theta0(params.theta0)?;
    let start = Instant::now();
    let clauses = instance.check_clauses();
    let schedule = Schedule::Constant {
        theta: params.theta0,
        checks: params.n_full,
    };
    let mut tally = MeasurementTally::new(instance.n());
    let mut stats = SolveStats::default();
    while stats.successful_runs < params.max_runs && stats.tries < params.try_cap {
        stats.tries += 1;
        match run_sampled_on(&clauses, instance.n(), &schedule, noise.as_deref_mut(), rng)? {
            SampledOutcome::Abort { check_index } => {
                stats.total_checks += check_index;
                stats.abort_indices.push(check_index);
            }
            SampledOutcome::Success(state) => {
                stats.total_checks += params.n_full;
                stats.successful_runs += 1;
                tally.record(&state.measure_all(rng))?;
                if tally.runs().is_multiple_of(2) {
                    continue;
                }
                let guess = infer_assignment(&tally, params.theta0)?.assignment;
                if instance.evaluate(&guess)? {
                    stats.tally = Some(tally);
                    stats.wall_time = start.elapsed();
                    return Ok(SolveResult {
                        assignment: guess,
                        stats,
                    });
                }
                stats.bad_measurements += 1;
            }
        }
    }
    stats.tally = Some(tally);
    stats.wall_time = start.elapsed();
    Err(SolverError::Unsolved(Box::new(stats)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HybridParams {
    pub theta0: f64,
    pub hold: u64,
    pub ramp: u64,
    pub try_cap: u64,
}

impl HybridParams {
    /// Even split of `cycles` between hold and ramp (extra cycle to the ramp).
    pub fn even_split(theta0: f64, cycles: u64, try_cap: u64) -> Self {
        HybridParams {
            theta0,
            hold: cycles / 2,
            ramp: cycles - cycles / 2,
            try_cap,
        }
    }

    pub fn schedule(&self) -> Schedule {
        Schedule::Stepped {
            theta0: self.theta0,
            hold: self.hold,
            ramp: self.ramp,
        }
    }
}

/// Sculpt at θ0, then ramp linearly to π/2 and measure once.
pub fn solve_hybrid(
    instance: &SatInstance,
    params: &HybridParams,
    noise: Option<&mut RotationNoise>,
    rng: &mut impl Rng,
) -> Result<SolveResult, SolverError> {
    check_theta0(params.theta0)?;
    solve_adiabatic(instance, &params.schedule(), noise, rng, params.try_cap)
}
