use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::SolverError;

/// How θ evolves over clause-check cycles. Angles are in radians; cycles
/// are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Fixed θ for a total of `checks` clause checks (may end mid-cycle).
    Constant { theta: f64, checks: u64 },
    /// θ_c = (π/2)·c/c_tot
    Linear { cycles: u64 },
    /// θ_c = (π/2)·√(c/c_tot)
    Sqrt { cycles: u64 },
    /// θ0 for `hold` cycles, then a linear ramp reaching π/2 after `ramp` more.
    Stepped { theta0: f64, hold: u64, ramp: u64 },
}

impl Schedule {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: &str| Err(SolverError::BadSchedule(msg.to_string()));
        match *self {
            Schedule::Constant { theta, .. } if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta) => {
                bad("constant theta outside [0, pi/2]")
            }
            Schedule::Linear { cycles: 0 } | Schedule::Sqrt { cycles: 0 } => bad("ramp needs at least one cycle"),
            Schedule::Stepped { theta0, .. } if !(0.0..=FRAC_PI_2 + 1e-12).contains(&theta0) => {
                bad("theta0 outside [0, pi/2]")
            }
            Schedule::Stepped { hold: 0, ramp: 0, .. } => bad("stepped schedule is empty"),
            _ => Ok(()),
        }
    }

    /// Number of cycles, or `None` for [`Schedule::Constant`] whose length
    /// is counted in checks.
    pub fn cycles(&self) -> Option<u64> {
        match *self {
            Schedule::Constant { .. } => None,
            Schedule::Linear { cycles } | Schedule::Sqrt { cycles } => Some(cycles),
            Schedule::Stepped { hold, ramp, .. } => Some(hold + ramp),
        }
    }

    /// Checks in one complete run over `num_clauses` clauses.
    pub fn total_checks(&self, num_clauses: usize) -> u64 {
        match *self {
            Schedule::Constant { checks, .. } => checks,
            _ => self.cycles().unwrap_or(0) * num_clauses as u64,
        }
    }

    pub fn theta(&self, cycle: u64) -> Result<f64, SolverError> {
        if cycle == 0 {
            return Err(SolverError::CycleOutOfRange {
                cycle,
                len: self.cycles(),
            });
        }
        if let Some(len) = self.cycles() {
            if cycle > len {
                return Err(SolverError::CycleOutOfRange { cycle, len: Some(len) });
            }
        }
        Ok(match *self {
            Schedule::Constant { theta, .. } => theta,
            Schedule::Linear { cycles } => FRAC_PI_2 * cycle as f64 / cycles as f64,
            Schedule::Sqrt { cycles } => FRAC_PI_2 * (cycle as f64 / cycles as f64).sqrt(),
            Schedule::Stepped { theta0, hold, ramp } => {
                if cycle <= hold {
                    theta0
                } else {
                    theta0 + (FRAC_PI_2 - theta0) * (cycle - hold) as f64 / ramp as f64
                }
            }
        })
    }

    /// θ at the last cycle.
    pub fn terminal_theta(&self) -> f64 {
        match *self {
            Schedule::Constant { theta, .. } => theta,
            Schedule::Stepped { theta0, ramp: 0, .. } => theta0,
            _ => FRAC_PI_2,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Schedule::Constant { theta, checks } => format!("constant(theta={theta:.6},checks={checks})"),
            Schedule::Linear { cycles } => format!("linear({cycles})"),
            Schedule::Sqrt { cycles } => format!("sqrt({cycles})"),
            Schedule::Stepped { theta0, hold, ramp } => {
                format!("stepped(theta0={theta0:.6},hold={hold},ramp={ramp})")
            }
        }
    }
}

/// Free-function form of [`Schedule::theta`].
pub fn schedule_theta(schedule: &Schedule, cycle: u64) -> Result<f64, SolverError> {
    schedule.theta(cycle)
}
