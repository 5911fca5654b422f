//! The ε-sweep: one compressible run per ε against a shared QG trajectory,
//! relative energy sampled on a fixed time grid.

use std::path::Path;

use rayon::prelude::*;
use rossby_core::acoustic::{acoustic_evolve, AcousticState};
use rossby_core::diagnostics::{
    build_ansatz, convergence_metrics, relative_energy, RelEnergyRecord, ResidualAverager,
    RunSeries,
};
use rossby_core::euler::{init_ill_prepared, ConservativeState, IllPreparedData};
use rossby_core::fields::ScalarField;
use rossby_core::qg::{qg_energy, qg_enstrophy};

use crate::config::ExperimentConfig;
use crate::report::{self, MetricRow, QgSummary, RunStatus, RunSummary, SweepSummary, Table};
use crate::runs::{self, euler_row, euler_snapshot, split_initial_data, substeps};
use crate::{data, LabError};

/// Everything one ε-run produced, including partial output after a failure.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub epsilon: f64,
    pub dt: f64,
    pub steps: usize,
    pub records: Vec<RelEnergyRecord>,
    pub euler: Table,
    pub weak_residuals: (f64, f64),
    pub final_state: Option<ConservativeState>,
    pub error: Option<String>,
}

impl RunOutput {
    pub fn diagnostics_table(&self) -> Table {
        let mut t = Table::new(&report::DIAGNOSTICS_HEADER);
        for r in &self.records {
            t.push(&[
                self.epsilon,
                r.time,
                r.e_total,
                r.e_kinetic,
                r.e_potential,
                r.div_residual,
                r.balance_residual,
            ]);
        }
        t
    }
}

/// One ε; never fails outright, errors end up in `RunOutput::error`.
pub fn run_epsilon(
    config: &ExperimentConfig,
    d: &IllPreparedData,
    trajectory: &[ScalarField],
    epsilon: f64,
) -> RunOutput {
    let interval = config.sample_interval();
    let (steps, dt) = substeps(interval, config.dt_rule.nominal(epsilon));
    let mut out = RunOutput {
        epsilon,
        dt,
        steps: 0,
        records: Vec::new(),
        euler: Table::new(&report::EULER_HEADER),
        weak_residuals: (f64::NAN, f64::NAN),
        final_state: None,
        error: None,
    };
    let mut averager = ResidualAverager::new();
    let result = drive(config, d, trajectory, epsilon, steps, dt, &mut out, &mut averager);
    match averager.residuals() {
        Ok(r) => out.weak_residuals = r,
        Err(e) if result.is_ok() => out.error = Some(e.to_string()),
        Err(_) => {}
    }
    if let Err(e) = result {
        out.error = Some(e.to_string());
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn drive(
    config: &ExperimentConfig,
    d: &IllPreparedData,
    trajectory: &[ScalarField],
    epsilon: f64,
    steps: usize,
    dt: f64,
    out: &mut RunOutput,
    averager: &mut ResidualAverager,
) -> Result<(), LabError> {
    let solver = runs::solver(config)?;
    let law = solver.law;
    let stepper = solver.stepper(*d.grid(), epsilon, dt)?;
    let (_, acoustic0) = split_initial_data(d, epsilon)?;
    let mut state = init_ill_prepared(d, epsilon)?;
    let record = |state: &ConservativeState, q: &ScalarField| -> Result<RelEnergyRecord, LabError> {
        let wave: AcousticState = acoustic_evolve(&acoustic0, state.time)?;
        let ansatz = build_ansatz(q, &wave, epsilon)?;
        Ok(relative_energy(state, &ansatz, &law)?)
    };
    out.records.push(record(&state, &trajectory[0])?);
    out.euler.push(&euler_row(&solver, &state, dt)?);
    averager.push(state.time, &state.m, &state.sigma())?;
    let interval = config.sample_interval();
    for (i, q) in trajectory.iter().enumerate().skip(1) {
        for _ in 0..steps {
            let next = stepper.step(&state);
            match next {
                Ok(s) => state = s,
                Err(e) => {
                    out.final_state = Some(state);
                    return Err(e.into());
                }
            }
            out.steps += 1;
            averager.push(state.time, &state.m, &state.sigma())?;
        }
        state.time = i as f64 * interval;
        out.records.push(record(&state, q)?);
        out.euler.push(&euler_row(&solver, &state, dt)?);
    }
    out.final_state = Some(state);
    Ok(())
}

fn eps_dir(out: &Path, epsilon: f64) -> std::path::PathBuf {
    out.join(format!("eps_{epsilon}"))
}

/// Runs every ε on a bounded pool and writes all output below `out`.
pub fn run_convergence_sweep(config: &ExperimentConfig, out: &Path) -> Result<SweepSummary, LabError> {
    config.validate()?;
    let d = data::from_config(config)?;
    let u0 = d.velocity()?;
    let q0 = rossby_core::qg::solve_initial_elliptic(&u0, &d.s0)?;
    let (trajectory, qg_dt) = runs::qg_trajectory(config, &q0)?;
    let qg_table = runs::qg_table(config, &trajectory)?;
    qg_table.write(&out.join("qg.csv"))?;
    let last = trajectory.last().expect("trajectory holds q0");
    let drift = |a: f64, b: f64| if a == 0.0 { b.abs() } else { ((b - a) / a).abs() };
    let qg = QgSummary {
        dt: qg_dt,
        energy_drift: drift(qg_energy(&q0)?, qg_energy(last)?),
        enstrophy_drift: drift(qg_enstrophy(&q0)?, qg_enstrophy(last)?),
    };

    let workers = config
        .workers
        .unwrap_or_else(|| config.epsilons.len().min(rayon::current_num_threads()).max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::Pool(e.to_string()))?;
    let outputs: Vec<RunOutput> = pool.install(|| {
        config
            .epsilons
            .par_iter()
            .map(|&eps| run_epsilon(config, &d, &trajectory, eps))
            .collect()
    });

    let solver = runs::solver(config)?;
    let mut all = Table::new(&report::DIAGNOSTICS_HEADER);
    let mut summaries = Vec::with_capacity(outputs.len());
    let mut series = Vec::new();
    let fingerprint = config.fingerprint();
    for o in &outputs {
        let dir = eps_dir(out, o.epsilon);
        let diag = o.diagnostics_table();
        diag.write(&dir.join("diagnostics.csv"))?;
        o.euler.write(&dir.join("euler.csv"))?;
        if let Some(s) = &o.final_state {
            euler_snapshot(&dir.join("final.rlab"), s)?;
        }
        all.extend(&diag);
        let initial = init_ill_prepared(&d, o.epsilon)
            .ok()
            .and_then(|s| solver.total_energy(&s).ok());
        summaries.push(RunSummary {
            epsilon: o.epsilon,
            status: if o.error.is_none() { RunStatus::Ok } else { RunStatus::Failed },
            error: o.error.clone(),
            dt: o.dt,
            steps: o.steps,
            hyperdiffusion: config.hyperdiffusion,
            records: o.records.len(),
            final_time: o.records.last().map_or(0.0, |r| r.time),
            sup_energy: o.records.iter().map(|r| r.e_total).reduce(f64::max),
            initial_total_energy: initial,
        });
        if o.error.is_none() {
            series.push(RunSeries {
                epsilon: o.epsilon,
                horizon: config.horizon,
                fingerprint: fingerprint.clone(),
                records: o.records.clone(),
                weak_residuals: o.weak_residuals,
            });
        }
    }
    all.write(&out.join("diagnostics.csv"))?;

    let (metrics, metrics_error) = if series.len() >= 2 {
        match convergence_metrics(&series) {
            Ok(rows) => (rows.into_iter().map(metric_row).collect(), None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        }
    } else {
        (Vec::new(), None)
    };
    let summary = SweepSummary {
        config: config.clone(),
        failed: summaries.iter().any(|s| s.status == RunStatus::Failed),
        runs: summaries,
        qg,
        metrics,
        metrics_error,
    };
    report::write_file(&out.join("summary.json"), summary.to_json().as_bytes())?;
    Ok(summary)
}

fn metric_row(r: rossby_core::diagnostics::ConvergenceRow) -> MetricRow {
    MetricRow {
        epsilon: r.epsilon,
        sup_energy: r.sup_energy,
        mean_div_residual: r.mean_div_residual,
        mean_balance_residual: r.mean_balance_residual,
        weak_div_residual: r.weak_div_residual,
        weak_balance_residual: r.weak_balance_residual,
        energy_ratio: r.energy_ratio,
        weak_div_ratio: r.weak_div_ratio,
        weak_balance_ratio: r.weak_balance_ratio,
    }
}
