use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Schedule, SolverError};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// 1-based position in the run.
    pub check_index: u64,
    pub cycle: u64,
    /// Index into the instance's check clauses.
    pub clause_id: usize,
    pub theta: f64,
    pub p_pass: f64,
    pub cum_success: f64,
    pub fidelity: Option<f64>,
}

/// Pass probabilities along a trajectory that is conditioned on passing
/// every check.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLedger {
    pub records: Vec<CheckRecord>,
    /// Set when a check annihilated the state; the failing check is not
    /// recorded.
    pub truncated: bool,
}

impl TrajectoryLedger {
    pub fn p_success(&self) -> f64 {
        self.records.last().map_or(1.0, |r| r.cum_success)
    }

    /// Probability that a run aborts exactly at check `i` (1-based), for
    /// every recorded check.
    pub fn p_fail(&self) -> Vec<f64> {
        let mut prev = 1.0;
        self.records
            .iter()
            .map(|r| {
                let f = prev * (1.0 - r.p_pass);
                prev = r.cum_success;
                f
            })
            .collect()
    }

    pub fn final_fidelity(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.fidelity)
    }

    /// Fidelity at the end of each complete cycle.
    pub fn cycle_end_fidelities(&self) -> Vec<(u64, f64)> {
        let mut out: Vec<(u64, f64)> = Vec::new();
        for (i, r) in self.records.iter().enumerate() {
            let last_of_cycle = self.records.get(i + 1).is_none_or(|next| next.cycle != r.cycle);
            if let (true, Some(f)) = (last_of_cycle, r.fidelity) {
                out.push((r.cycle, f));
            }
        }
        out
    }

    /// CSV with columns check_index, cycle, clause_id, theta, p_pass,
    /// cum_success, fidelity (empty when not recorded).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_index,cycle,clause_id,theta,p_pass,cum_success,fidelity\n");
        for r in &self.records {
            let fid = r.fidelity.map(|f| format!("{f:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{:e},{:e},{:e},{}",
                r.check_index, r.cycle, r.clause_id, r.theta, r.p_pass, r.cum_success, fid
            );
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub n_checks_success: u64,
    pub p_success: f64,
    /// Σ i · p_fail(i)
    pub f: f64,
    pub expected_tries: f64,
    /// N + F / P
    pub c_total: f64,
    /// N + F·(sec²(θ/2))^n, reported for constant schedules only.
    pub c_total_approx: Option<f64>,
}

/// Expected clause checks until the first successful run.
pub fn expected_cost(ledger: &TrajectoryLedger) -> Result<CostSummary, SolverError> {
    if ledger.truncated {
        return Err(SolverError::TruncatedLedger);
    }
    let p = ledger.p_success();
    if p <= 0.0 {
        return Err(SolverError::ZeroSuccess);
    }
    let f: f64 = ledger
        .p_fail()
        .iter()
        .zip(&ledger.records)
        .map(|(pf, r)| r.check_index as f64 * pf)
        .sum();
    let n = ledger.records.len() as u64;
    Ok(CostSummary {
        n_checks_success: n,
        p_success: p,
        f,
        expected_tries: 1.0 / p,
        c_total: n as f64 + f / p,
        c_total_approx: None,
    })
}

/// [`expected_cost`] plus the constant-θ approximation for `n` qubits.
pub fn expected_cost_for(ledger: &TrajectoryLedger, schedule: &Schedule, n: usize) -> Result<CostSummary, SolverError> {
    let mut summary = expected_cost(ledger)?;
    if let Schedule::Constant { theta, .. } = schedule {
        let sec2 = 1.0 / (0.5 * theta).cos().powi(2);
        summary.c_total_approx = Some(summary.n_checks_success as f64 + summary.f * sec2.powi(n as i32));
    }
    Ok(summary)
}
