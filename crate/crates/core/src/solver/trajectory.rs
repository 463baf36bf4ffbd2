use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CheckRecord, Schedule, SolverError, TrajectoryLedger};
use crate::exec::Exec;
use crate::rebit::{fidelity_subspace, CheckOutcome, RebitError, RebitState, RotationNoise, TargetSpec};
use crate::sat::{Assignment, Clause, SatInstance};

/// One scheduled clause check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub check_index: u64,
    pub cycle: u64,
    pub clause_id: usize,
    pub theta: f64,
}

/// Walks a schedule over `n_clauses` clauses in fixed order, or in a fresh
/// seeded permutation each cycle when `reshuffle` is set.
pub struct Walk {
    schedule: Schedule,
    n_clauses: usize,
    total: u64,
    next: u64,
    order: Vec<usize>,
    reshuffle: Option<ChaCha8Rng>,
    theta: f64,
}

impl Walk {
    pub fn new(schedule: Schedule, n_clauses: usize, reshuffle_seed: Option<u64>) -> Result<Self, SolverError> {
        schedule.validate()?;
        if n_clauses == 0 {
            return Err(SolverError::NoClauses);
        }
        Ok(Walk {
            total: schedule.total_checks(n_clauses),
            schedule,
            n_clauses,
            next: 0,
            order: (0..n_clauses).collect(),
            reshuffle: reshuffle_seed.map(ChaCha8Rng::seed_from_u64),
            theta: 0.0,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for Walk {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        if self.next >= self.total {
            return None;
        }
        let pos = (self.next % self.n_clauses as u64) as usize;
        let cycle = self.next / self.n_clauses as u64 + 1;
        if pos == 0 {
            if let Some(rng) = &mut self.reshuffle {
                self.order.shuffle(rng);
            }
            self.theta = self.schedule.theta(cycle).ok()?;
        }
        self.next += 1;
        Some(Step {
            check_index: self.next,
            cycle,
            clause_id: self.order[pos],
            theta: self.theta,
        })
    }
}

/// Fidelity against the solution span at `theta`. `None` when the Gram
/// matrix is too ill-conditioned to invert.
pub fn solution_fidelity(state: &RebitState, solutions: &[Assignment], theta: f64) -> Result<Option<f64>, SolverError> {
    if let [only] = solutions {
        let spec = TargetSpec::new(only.clone(), theta)?;
        return Ok(Some(state.fidelity_usa(&spec)?));
    }
    match fidelity_subspace(state, solutions, theta) {
        Ok(f) => Ok(Some(f)),
        Err(RebitError::IllConditioned { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug, Default)]
pub struct TrajectoryOptions<'a> {
    /// Known solutions; enables the fidelity column.
    pub solutions: Option<&'a [Assignment]>,
    pub reshuffle_seed: Option<u64>,
    pub exec: Exec,
}

/// Conditioned run: every check takes the pass branch. `stop` sees each
/// record and ends the run early by returning true. Returns the ledger and
/// the final register.
pub fn run_trajectory_with(
    instance: &SatInstance,
    schedule: &Schedule,
    options: &TrajectoryOptions<'_>,
    mut noise: Option<&mut RotationNoise>,
    mut stop: impl FnMut(&CheckRecord) -> bool,
) -> Result<(TrajectoryLedger, RebitState), SolverError> {
    let clauses = instance.check_clauses();
    let walk = Walk::new(*schedule, clauses.len(), options.reshuffle_seed)?;
    let mut state = RebitState::init_plus(instance.n())?.with_exec(options.exec);
    let mut ledger = TrajectoryLedger {
        records: Vec::with_capacity(walk.total().min(1 << 20) as usize),
        truncated: false,
    };
    let mut cum = 1.0;
    for step in walk {
        let p_pass = match state.clause_check_pass(&clauses[step.clause_id], step.theta, noise.as_deref_mut()) {
            Ok(p) => p,
            Err(RebitError::CertainFailure { .. }) => {
                ledger.truncated = true;
                break;
            }
            Err(e) => return Err(e.into()),
        };
        cum *= p_pass;
        let fidelity = match options.solutions {
            Some(sols) => solution_fidelity(&state, sols, step.theta)?,
            None => None,
        };
        let record = CheckRecord {
            check_index: step.check_index,
            cycle: step.cycle,
            clause_id: step.clause_id,
            theta: step.theta,
            p_pass,
            cum_success: cum,
            fidelity,
        };
        ledger.records.push(record);
        if stop(&record) {
            break;
        }
    }
    Ok((ledger, state))
}

pub fn run_trajectory_deterministic(
    instance: &SatInstance,
    schedule: &Schedule,
    solutions: Option<&[Assignment]>,
) -> Result<TrajectoryLedger, SolverError> {
    let options = TrajectoryOptions {
        solutions,
        ..TrajectoryOptions::default()
    };
    Ok(run_trajectory_with(instance, schedule, &options, None, |_| false)?.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SampledOutcome {
    Success(RebitState),
    Abort { check_index: u64 },
}

/// One physical attempt: each check samples its ancilla and the run stops
/// at the first failure.
pub fn run_trajectory_sampled(
    instance: &SatInstance,
    schedule: &Schedule,
    noise: Option<&mut RotationNoise>,
    rng: &mut impl Rng,
) -> Result<SampledOutcome, SolverError> {
    let clauses = instance.check_clauses();
    run_sampled_on(&clauses, instance.n(), schedule, noise, rng)
}

pub(crate) fn run_sampled_on(
    clauses: &[Clause],
    n: usize,
    schedule: &Schedule,
    mut noise: Option<&mut RotationNoise>,
    rng: &mut impl Rng,
) -> Result<SampledOutcome, SolverError> {
    let walk = Walk::new(*schedule, clauses.len(), None)?;
    let mut state = RebitState::init_plus(n)?;
    for step in walk {
        let out = state.clause_check_sample(&clauses[step.clause_id], step.theta, noise.as_deref_mut(), rng)?;
        if let CheckOutcome::Fail(_) = out {
            return Ok(SampledOutcome::Abort {
                check_index: step.check_index,
            });
        }
    }
    Ok(SampledOutcome::Success(state))
}
