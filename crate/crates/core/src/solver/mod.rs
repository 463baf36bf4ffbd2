//! θ schedules, conditioned and sampled trajectories, expected-cost
//! accounting and the three solver strategies (adiabatic-like ramps,
//! fixed-θ sculpting with majority voting, and the stepped hybrid).

mod hifid;
mod ledger;
mod schedule;
mod solve;
mod trajectory;

pub use hifid::{default_n_full, n_hifid, n_hifid_noisy, quantile, DEFAULT_HIFID_CAP, DEFAULT_HIFID_THRESHOLD};
pub use ledger::{expected_cost, expected_cost_for, CheckRecord, CostSummary, TrajectoryLedger};
pub use schedule::{schedule_theta, Schedule};
pub use solve::{solve_adiabatic, solve_hybrid, solve_sculpt, HybridParams, SculptParams, SolveResult, SolveStats};
pub use trajectory::{
    run_trajectory_deterministic, run_trajectory_sampled, run_trajectory_with, solution_fidelity, SampledOutcome, Step,
    TrajectoryOptions, Walk,
};

use thiserror::Error;

use crate::inference::InferenceError;
use crate::rebit::RebitError;
use crate::sat::SatError;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cycle {cycle} out of range (schedule length {len:?})")]
    CycleOutOfRange { cycle: u64, len: Option<u64> },
    #[error("invalid schedule: {0}")]
    BadSchedule(String),
    #[error("instance has no clauses to check")]
    NoClauses,
    #[error("ledger was truncated by a certain failure")]
    TruncatedLedger,
    #[error("success probability is zero")]
    ZeroSuccess,
    #[error("solutions must be known for this operation")]
    NoSolutions,
    #[error("fidelity threshold not reached within {checks} checks (best {best_fidelity})")]
    Diverged { checks: u64, best_fidelity: f64 },
    #[error("unsolved after {} tries ({} clause checks)", .0.tries, .0.total_checks)]
    Unsolved(Box<SolveStats>),
    #[error(transparent)]
    Rebit(#[from] RebitError),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
}
