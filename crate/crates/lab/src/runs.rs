//! Single-system runs behind the `run-*` and `probe-decay` subcommands.

use std::path::Path;

use rossby_core::acoustic::{
    acoustic_energy, acoustic_evolve, dispersive_decay_probe, freespace_acoustic_probe,
    recurrence_horizon, AcousticState, RadialData,
};
use rossby_core::euler::{init_ill_prepared, ConservativeState, EulerSolver, IllPreparedData};
use rossby_core::fields::{perp_gradient, Grid2, ScalarField, Snapshot};
use rossby_core::qg::{
    mean_potential_vorticity, potential_vorticity, qg_energy, qg_enstrophy, qg_evolve,
    solve_initial_elliptic, QgState,
};
use rossby_core::PressureLaw;

use crate::config::ExperimentConfig;
use crate::report::{self, Table};
use crate::{data, LabError};

pub fn grid(config: &ExperimentConfig) -> Result<Grid2, LabError> {
    Ok(Grid2::new(config.grid.n, config.grid.length)?)
}

pub fn solver(config: &ExperimentConfig) -> Result<EulerSolver, LabError> {
    Ok(EulerSolver {
        hyperdiffusion: config.hyperdiffusion,
        ..EulerSolver::with_law(PressureLaw::new(config.gamma)?)
    })
}

/// Steps per sampling interval and the resulting step size.
pub fn substeps(interval: f64, nominal: f64) -> (usize, f64) {
    let steps = ((interval / nominal) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    (steps, interval / steps as f64)
}

/// Geostrophic part `q0` and the acoustic remainder `(s0 − q0, u0 − ∇⊥q0)`.
pub fn split_initial_data(
    d: &IllPreparedData,
    epsilon: f64,
) -> Result<(ScalarField, AcousticState), LabError> {
    let u0 = d.velocity()?;
    let q0 = solve_initial_elliptic(&u0, &d.s0)?;
    let acoustic = AcousticState::new(
        d.s0.sub(&q0)?,
        u0.sub(&perp_gradient(&q0)?)?,
        epsilon,
    )?;
    Ok((q0, acoustic))
}

fn snapshot_due(config: &ExperimentConfig, sample: usize) -> bool {
    let Some(every) = config.snapshot_interval else {
        return false;
    };
    let h = config.sample_interval();
    let slot = |i: usize| ((i as f64 * h) / every + 1e-9).floor() as i64;
    sample == 0 || slot(sample) != slot(sample - 1)
}

fn write_snapshot(path: &Path, fields: Vec<(&str, ScalarField)>) -> Result<(), LabError> {
    let snap = Snapshot::new(fields.into_iter().map(|(n, f)| (n.to_string(), f)).collect())?;
    report::write_file(path, &snap.to_bytes())
}

pub fn euler_snapshot(path: &Path, state: &ConservativeState) -> Result<(), LabError> {
    write_snapshot(
        path,
        vec![
            ("rho", state.rho.clone()),
            ("m_x", state.m.x().clone()),
            ("m_y", state.m.y().clone()),
        ],
    )
}

pub fn euler_row(solver: &EulerSolver, state: &ConservativeState, dt: f64) -> Result<[f64; 5], LabError> {
    Ok([
        state.time,
        state.mass(),
        solver.total_energy(state)?,
        state.min_rho(),
        state.cfl(dt)?,
    ])
}

/// Compressible run at one ε; returns the table written to `euler.csv`.
pub fn run_euler(config: &ExperimentConfig, epsilon: f64, out: &Path) -> Result<Table, LabError> {
    let solver = solver(config)?;
    let d = data::from_config(config)?;
    let interval = config.sample_interval();
    let (steps, dt) = substeps(interval, config.dt_rule.nominal(epsilon));
    let stepper = solver.stepper(*d.grid(), epsilon, dt)?;
    let mut state = init_ill_prepared(&d, epsilon)?;
    let mut table = Table::new(&report::EULER_HEADER);
    table.push(&euler_row(&solver, &state, dt)?);
    if snapshot_due(config, 0) {
        euler_snapshot(&out.join("euler_0000.rlab"), &state)?;
    }
    let mut result = Ok(());
    'outer: for i in 1..=config.sample_count() {
        for _ in 0..steps {
            match stepper.step(&state) {
                Ok(s) => state = s,
                Err(e) => {
                    result = Err(e.into());
                    break 'outer;
                }
            }
        }
        state.time = i as f64 * interval;
        table.push(&euler_row(&solver, &state, dt)?);
        if snapshot_due(config, i) {
            euler_snapshot(&out.join(format!("euler_{i:04}.rlab")), &state)?;
        }
    }
    table.write(&out.join("euler.csv"))?;
    euler_snapshot(&out.join("euler_final.rlab"), &state)?;
    result.map(|_| table)
}

/// QG trajectory sampled at the record times, starting from `q0`.
pub fn qg_trajectory(
    config: &ExperimentConfig,
    q0: &ScalarField,
) -> Result<(Vec<ScalarField>, f64), LabError> {
    let interval = config.sample_interval();
    let (steps, dt) = substeps(interval, config.qg_dt);
    let mut out = Vec::with_capacity(config.sample_count() + 1);
    let mut state = QgState::new(q0.clone());
    out.push(q0.clone());
    for i in 1..=config.sample_count() {
        state = qg_evolve(&state, dt, steps)?;
        state.time = i as f64 * interval;
        out.push(state.q.clone());
    }
    Ok((out, dt))
}

pub fn qg_table(config: &ExperimentConfig, trajectory: &[ScalarField]) -> Result<Table, LabError> {
    let h = config.sample_interval();
    let mut table = Table::new(&report::QG_HEADER);
    for (i, q) in trajectory.iter().enumerate() {
        table.push(&[
            i as f64 * h,
            qg_energy(q)?,
            qg_enstrophy(q)?,
            mean_potential_vorticity(q)?,
        ]);
    }
    Ok(table)
}

pub fn run_qg(config: &ExperimentConfig, out: &Path) -> Result<Table, LabError> {
    let d = data::from_config(config)?;
    let q0 = solve_initial_elliptic(&d.velocity()?, &d.s0)?;
    let (traj, _) = qg_trajectory(config, &q0)?;
    let table = qg_table(config, &traj)?;
    table.write(&out.join("qg.csv"))?;
    for (i, q) in traj.iter().enumerate() {
        if snapshot_due(config, i) {
            write_snapshot(
                &out.join(format!("qg_{i:04}.rlab")),
                vec![("q", q.clone()), ("zeta", potential_vorticity(q)?)],
            )?;
        }
    }
    let last = traj.last().expect("trajectory holds q0");
    write_snapshot(
        &out.join("qg_final.rlab"),
        vec![("q", last.clone()), ("zeta", potential_vorticity(last)?)],
    )?;
    Ok(table)
}

/// Exact acoustic evolution of the acoustic part of the configured data.
pub fn run_acoustic(config: &ExperimentConfig, epsilon: f64, out: &Path) -> Result<Table, LabError> {
    let d = data::from_config(config)?;
    let (_, initial) = split_initial_data(&d, epsilon)?;
    let horizon = recurrence_horizon(initial.grid(), epsilon);
    let h = config.sample_interval();
    let mut table = Table::new(&report::ACOUSTIC_HEADER);
    for i in 0..=config.sample_count() {
        let t = i as f64 * h;
        let st = acoustic_evolve(&initial, t)?;
        table.push_flagged(
            &[t, acoustic_energy(&st)?, st.s.max_abs(), st.w.max_norm()],
            t > horizon,
        );
        if snapshot_due(config, i) {
            write_snapshot(
                &out.join(format!("acoustic_{i:04}.rlab")),
                vec![("s", st.s.clone()), ("w_x", st.w.x().clone()), ("w_y", st.w.y().clone())],
            )?;
        }
    }
    table.write(&out.join("acoustic.csv"))?;
    Ok(table)
}

/// Free-space oracle and torus probe for a radial Gaussian potential.
/// Returns `(torus, freespace)` tables.
pub fn probe_decay(
    config: &ExperimentConfig,
    epsilon: f64,
    out: &Path,
) -> Result<(Table, Table), LabError> {
    let p = &config.probe;
    let radial = RadialData::gaussian_potential(p.amplitude, p.width)?;
    let mut free = Table::new(&report::FREESPACE_HEADER);
    for &tau in &p.taus {
        let extent = radial.support_radius() + tau;
        let pts: Vec<[f64; 2]> = (0..p.points)
            .map(|i| [extent * i as f64 / (p.points - 1) as f64, 0.0])
            .collect();
        let vals = freespace_acoustic_probe(&radial, tau, &pts, p.tolerance)?;
        let sup_s = vals.iter().map(|v| v.s.abs()).fold(0.0, f64::max);
        let sup_w = vals.iter().map(|v| v.w_norm()).fold(0.0, f64::max);
        free.push(&[tau, sup_s, sup_w]);
    }
    free.write(&out.join("freespace.csv"))?;

    let grid = grid(config)?;
    let c = grid.length() / 2.0;
    let phi = ScalarField::from_fn(grid, |x, y| radial.phi0((x - c).hypot(y - c)));
    let times: Vec<f64> = p.taus.iter().map(|t| t * epsilon).collect();
    let samples = dispersive_decay_probe(&ScalarField::zeros(grid), &phi, epsilon, &times)?;
    let mut torus = Table::new(&report::ACOUSTIC_HEADER);
    for s in samples {
        torus.push_flagged(&[s.time, s.energy, s.sup_s, s.sup_w], s.beyond_recurrence);
    }
    torus.write(&out.join("decay.csv"))?;
    Ok((torus, free))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substeps_fit_interval() {
        assert_eq!(substeps(0.02, 0.0025), (8, 0.0025));
        let (n, dt) = substeps(0.02, 0.003);
        assert_eq!(n, 7);
        assert!(dt <= 0.003);
        assert_eq!(substeps(0.02, 1.0).0, 1);
    }

    #[test]
    fn balanced_data_has_no_acoustic_part() {
        let grid = Grid2::new(32, 2.0 * std::f64::consts::PI).unwrap();
        let q = ScalarField::from_fn(grid, |x, y| (x + y).cos());
        let d = IllPreparedData::new(q.clone(), perp_gradient(&q).unwrap(), ScalarField::zeros(grid))
            .unwrap();
        let (q0, ac) = split_initial_data(&d, 0.1).unwrap();
        assert!(q0.max_abs_diff(&q).unwrap() < 1e-13);
        assert!(ac.s.max_abs() < 1e-13 && ac.w.max_norm() < 1e-13);
    }
}
