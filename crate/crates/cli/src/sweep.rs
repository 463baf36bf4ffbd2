//! Grid sweeps over instances, schedules and fixed-θ fidelity runs.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use qsat_core::rebit::RotationNoise;
use qsat_core::sat::{generate_instance, Assignment, GenConfig, SatInstance};
use qsat_core::solver::{expected_cost_for, n_hifid_noisy, run_trajectory_deterministic, Schedule, SolverError};
use serde::Serialize;

use crate::config::SweepConfig;
use crate::meta::{instance_hash, Meta};

/// Seed of instance `index` at size `n`, derived from the master seed.
pub fn instance_seed(master: u64, n: usize, index: u64) -> u64 {
    // splitmix64 finalizer over the packed key
    let mut z = master ^ ((n as u64) << 40) ^ index;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Prepared {
    n: usize,
    index: u64,
    seed: u64,
    hash: String,
    instance: SatInstance,
    solutions: Option<Vec<Assignment>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CostRow {
    pub n: usize,
    pub instance: u64,
    pub instance_seed: u64,
    pub instance_hash: String,
    pub schedule: String,
    pub checks_per_run: u64,
    pub p_success: f64,
    pub f: f64,
    pub expected_tries: f64,
    pub c_total: f64,
    pub c_total_approx: Option<f64>,
    pub final_fidelity: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub n: usize,
    pub instance: u64,
    pub instance_hash: String,
    pub schedule: String,
    pub check_index: u64,
    pub cycle: u64,
    pub theta: f64,
    pub p_pass: f64,
    pub cum_success: f64,
    /// Running Σ i·p_fail(i): the failing-run share of the cost so far.
    pub cum_fail_cost: f64,
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HifidRow {
    pub n: usize,
    pub instance: u64,
    pub instance_hash: String,
    pub theta_frac: f64,
    pub theta: f64,
    pub noise_cap: f64,
    pub n_hifid: Option<u64>,
    pub best_fidelity: Option<f64>,
}

#[derive(Debug, Default)]
pub struct SweepOutput {
    pub costs: Vec<CostRow>,
    pub traces: Vec<TraceRow>,
    pub hifid: Vec<HifidRow>,
}

enum Task<'a> {
    Cost(&'a Prepared, &'a Schedule),
    Hifid(&'a Prepared, f64, usize, f64),
}

enum TaskOut {
    Cost(CostRow, Vec<TraceRow>),
    Hifid(HifidRow),
}

fn prepare(cfg: &SweepConfig) -> Result<Vec<Prepared>> {
    let gen = GenConfig {
        exhaustive_limit: cfg.instances.exhaustive_limit,
        ..GenConfig::default()
    };
    let needs_solutions = cfg.hifid.is_some() || cfg.output.traces;
    let mut out = Vec::new();
    for &n in &cfg.instances.n {
        for index in 0..cfg.instances.count {
            let seed = instance_seed(cfg.seed, n, index);
            let instance = generate_instance(n, seed, cfg.instances.target_ns, &gen)
                .with_context(|| format!("generating n={n} instance {index}"))?;
            let solutions = if needs_solutions && n <= gen.exhaustive_limit {
                instance.count_solutions(usize::MAX, gen.exhaustive_limit)?.solutions
            } else {
                None
            };
            out.push(Prepared {
                n,
                index,
                seed,
                hash: instance_hash(&instance),
                instance,
                solutions,
            });
        }
    }
    Ok(out)
}

fn run_cost(p: &Prepared, schedule: &Schedule, traces: bool) -> Result<TaskOut> {
    let sols = p.solutions.as_deref().filter(|s| traces && !s.is_empty());
    let ledger = run_trajectory_deterministic(&p.instance, schedule, sols)?;
    let label = schedule.label();
    let mut row = CostRow {
        n: p.n,
        instance: p.index,
        instance_seed: p.seed,
        instance_hash: p.hash.clone(),
        schedule: label.clone(),
        checks_per_run: schedule.total_checks(p.instance.check_clauses().len()),
        p_success: ledger.p_success(),
        f: f64::NAN,
        expected_tries: f64::INFINITY,
        c_total: f64::INFINITY,
        c_total_approx: None,
        final_fidelity: ledger.final_fidelity(),
        note: String::new(),
    };
    match expected_cost_for(&ledger, schedule, p.n) {
        Ok(c) => {
            row.f = c.f;
            row.expected_tries = c.expected_tries;
            row.c_total = c.c_total;
            row.c_total_approx = c.c_total_approx;
        }
        Err(SolverError::TruncatedLedger) => row.note = "unsatisfiable: certain failure".into(),
        Err(SolverError::ZeroSuccess) => row.note = "zero success probability".into(),
        Err(e) => return Err(e.into()),
    }
    let mut trace = Vec::new();
    if traces {
        let mut cum_fail = 0.0;
        for (r, pf) in ledger.records.iter().zip(ledger.p_fail()) {
            cum_fail += r.check_index as f64 * pf;
            trace.push(TraceRow {
                n: p.n,
                instance: p.index,
                instance_hash: p.hash.clone(),
                schedule: label.clone(),
                check_index: r.check_index,
                cycle: r.cycle,
                theta: r.theta,
                p_pass: r.p_pass,
                cum_success: r.cum_success,
                cum_fail_cost: cum_fail,
                fidelity: r.fidelity,
            });
        }
    }
    Ok(TaskOut::Cost(row, trace))
}

fn run_hifid(cfg: &SweepConfig, p: &Prepared, frac: f64, cap_index: usize, cap: f64) -> Result<TaskOut> {
    let h = cfg.hifid.as_ref().expect("hifid task without section");
    let theta = frac * FRAC_PI_2;
    let sols = p
        .solutions
        .as_deref()
        .filter(|s| !s.is_empty())
        .with_context(|| format!("n={} instance {}: fidelity runs need known solutions", p.n, p.index))?;
    let mut noise = (cap > 0.0).then(|| RotationNoise::with_stream(cap, h.noise_mode, p.seed, cap_index as u64 + 1));
    let (n_hifid, best) = match n_hifid_noisy(&p.instance, sols, theta, h.threshold, h.cap, noise.as_mut()) {
        Ok(k) => (Some(k), None),
        Err(SolverError::Diverged { best_fidelity, .. }) => (None, Some(best_fidelity)),
        Err(e) => return Err(e.into()),
    };
    Ok(TaskOut::Hifid(HifidRow {
        n: p.n,
        instance: p.index,
        instance_hash: p.hash.clone(),
        theta_frac: frac,
        theta,
        noise_cap: cap,
        n_hifid,
        best_fidelity: best,
    }))
}

fn execute(cfg: &SweepConfig, tasks: &[Task<'_>]) -> Vec<Result<TaskOut>> {
    let run = |t: &Task<'_>| match *t {
        Task::Cost(p, s) => run_cost(p, s, cfg.output.traces),
        Task::Hifid(p, frac, i, cap) => run_hifid(cfg, p, frac, i, cap),
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        tasks.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        tasks.iter().map(run).collect()
    }
}

/// Runs every grid point. Rows come back in task order, which is sorted by
/// (n, instance, schedule or θ, noise) regardless of scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let prepared = prepare(cfg)?;
    let mut tasks = Vec::new();
    for p in &prepared {
        for s in &cfg.schedule {
            tasks.push(Task::Cost(p, s));
        }
        if let Some(h) = &cfg.hifid {
            for &frac in &h.theta_fracs {
                for (i, &cap) in h.noise_caps.iter().enumerate() {
                    tasks.push(Task::Hifid(p, frac, i, cap));
                }
            }
        }
    }
    let mut out = SweepOutput::default();
    for r in execute(cfg, &tasks) {
        match r? {
            TaskOut::Cost(row, trace) => {
                out.costs.push(row);
                out.traces.extend(trace);
            }
            TaskOut::Hifid(row) => out.hifid.push(row),
        }
    }
    Ok(out)
}

fn write_csv<T: Serialize>(path: &Path, meta: &Meta, echo: &str, rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    meta.write_comment(&mut buf, echo)?;
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    std::fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct Summary<'a> {
    meta: &'a Meta,
    instances: usize,
    cost_rows: usize,
    hifid_rows: usize,
    /// Median C_total per (n, schedule).
    median_c_total: BTreeMap<String, f64>,
    /// Upper median N_hiFid per (n, θ fraction, noise cap), over converged runs.
    median_n_hifid: BTreeMap<String, Option<u64>>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    match v.len() {
        0 => f64::NAN,
        m if m % 2 == 1 => v[m / 2],
        m => 0.5 * (v[m / 2 - 1] + v[m / 2]),
    }
}

/// Writes costs.csv, hifid.csv, traces.csv (when enabled) and summary.json.
pub fn write_outputs(dir: &Path, cfg: &SweepConfig, meta: &Meta, out: &SweepOutput) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let echo = cfg.echo()?;
    if !cfg.schedule.is_empty() {
        write_csv(&dir.join("costs.csv"), meta, &echo, &out.costs)?;
    }
    if cfg.output.traces {
        write_csv(&dir.join("traces.csv"), meta, &echo, &out.traces)?;
    }
    if cfg.hifid.is_some() {
        write_csv(&dir.join("hifid.csv"), meta, &echo, &out.hifid)?;
    }

    let mut costs: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in &out.costs {
        costs
            .entry(format!("n={} {}", r.n, r.schedule))
            .or_default()
            .push(r.c_total);
    }
    let mut hif: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for r in &out.hifid {
        let e = hif
            .entry(format!("n={} theta_frac={} noise={}", r.n, r.theta_frac, r.noise_cap))
            .or_default();
        e.extend(r.n_hifid);
    }
    let summary = Summary {
        meta,
        instances: cfg.instances.n.len() * cfg.instances.count as usize,
        cost_rows: out.costs.len(),
        hifid_rows: out.hifid.len(),
        median_c_total: costs.into_iter().map(|(k, v)| (k, median(v))).collect(),
        median_n_hifid: hif
            .into_iter()
            .map(|(k, mut v)| {
                v.sort_unstable();
                (k, v.get(v.len() / 2).copied())
            })
            .collect(),
    };
    let mut f = std::fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut f, &summary)?;
    writeln!(f)?;
    Ok(())
}
