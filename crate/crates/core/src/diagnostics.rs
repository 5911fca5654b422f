//! Relative energy of a compressible state against the
//! geostrophic-plus-acoustic ansatz, limit-balance residuals and the
//! cross-ε summary.

use thiserror::Error;

use crate::acoustic::AcousticState;
use crate::euler::ConservativeState;
use crate::fields::{perp_gradient, FieldError, ScalarField, Spectrum, VecField2};
use crate::thermo::{PressureLaw, ThermoError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error("epsilon mismatch: {left} vs {right}")]
    Epsilon { left: f64, right: f64 },
    #[error("ansatz density has minimum {0}; must stay positive")]
    AnsatzDensity(f64),
    #[error("runs are not comparable: {0}")]
    Mismatch(String),
    #[error("need at least two runs, got {0}")]
    TooFewRuns(usize),
}

fn same_epsilon(a: f64, b: f64) -> Result<(), DiagnosticsError> {
    if a == b {
        Ok(())
    } else {
        Err(DiagnosticsError::Epsilon { left: a, right: b })
    }
}

/// `r = 1 + ε(q + s)`, `U = ∇⊥q + w`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelEnergyAnsatz {
    pub r: ScalarField,
    pub u: VecField2,
    pub epsilon: f64,
}

pub fn build_ansatz(
    q: &ScalarField,
    acoustic: &AcousticState,
    epsilon: f64,
) -> Result<RelEnergyAnsatz, DiagnosticsError> {
    same_epsilon(acoustic.epsilon, epsilon)?;
    q.grid().same_as(acoustic.grid())?;
    let r = q.zip_map(&acoustic.s, |q, s| 1.0 + epsilon * (q + s))?;
    let min = r.min();
    if min.is_nan() || min <= 0.0 {
        return Err(DiagnosticsError::AnsatzDensity(min));
    }
    let u = perp_gradient(q)?.add(&acoustic.w)?;
    Ok(RelEnergyAnsatz { r, u, epsilon })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelEnergyRecord {
    pub time: f64,
    pub e_total: f64,
    pub e_kinetic: f64,
    pub e_potential: f64,
    /// `‖div m‖₂`
    pub div_residual: f64,
    /// `‖ω×m + ∇ρ⁽¹⁾‖₂`
    pub balance_residual: f64,
}

/// `‖div m‖₂` and `‖ω×m + ∇σ‖₂`.
pub fn limit_residuals(m: &VecField2, sigma: &ScalarField) -> Result<(f64, f64), DiagnosticsError> {
    sigma.grid().same_as(m.grid())?;
    let mx = Spectrum::forward(m.x())?;
    let my = Spectrum::forward(m.y())?;
    let s = Spectrum::forward(sigma)?;
    let div = mx.dx().add(&my.dy())?;
    let bx = my.scale(-1.0).add(&s.dx())?;
    let by = mx.add(&s.dy())?;
    Ok((div.energy().sqrt(), (bx.energy() + by.energy()).sqrt()))
}

/// `E = ∫ ½ρ|m/ρ − U|² + ε⁻² D(ρ, r) dx` together with the limit residuals.
pub fn relative_energy(
    state: &ConservativeState,
    ansatz: &RelEnergyAnsatz,
    law: &PressureLaw,
) -> Result<RelEnergyRecord, DiagnosticsError> {
    same_epsilon(state.epsilon, ansatz.epsilon)?;
    state.grid().same_as(ansatz.r.grid())?;
    let e2 = state.epsilon * state.epsilon;
    let (rho, r) = (state.rho.values(), ansatz.r.values());
    let (mx, my) = (state.m.x().values(), state.m.y().values());
    let (ux, uy) = (ansatz.u.x().values(), ansatz.u.y().values());
    let (mut kinetic, mut potential) = (0.0, 0.0);
    for i in 0..rho.len() {
        let dx = mx[i] / rho[i] - ux[i];
        let dy = my[i] / rho[i] - uy[i];
        kinetic += 0.5 * rho[i] * (dx * dx + dy * dy);
        potential += law.relative_pressure_potential(rho[i], r[i])?;
    }
    let area = state.grid().cell_area();
    let e_kinetic = kinetic * area;
    let e_potential = potential * area / e2;
    let (div_residual, balance_residual) = limit_residuals(&state.m, &state.sigma())?;
    Ok(RelEnergyRecord {
        time: state.time,
        e_total: e_kinetic + e_potential,
        e_kinetic,
        e_potential,
        div_residual,
        balance_residual,
    })
}

/// C² cutoff in the density: 1 on `[3/4, 5/4]`, 0 outside `(1/2, 3/2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CutoffPsi;

impl CutoffPsi {
    pub const PLATEAU: (f64, f64) = (0.75, 1.25);
    pub const SUPPORT: (f64, f64) = (0.5, 1.5);

    pub fn eval(&self, rho: f64) -> f64 {
        let (a, b) = Self::SUPPORT;
        let (c, d) = Self::PLATEAU;
        if rho <= a || rho >= b {
            0.0
        } else if rho < c {
            smoothstep((rho - a) / (c - a))
        } else if rho <= d {
            1.0
        } else {
            smoothstep((b - rho) / (b - d))
        }
    }
}

/// `6t⁵ − 15t⁴ + 10t³`
fn smoothstep(t: f64) -> f64 {
    t * t * t * (t * (6.0 * t - 15.0) + 10.0)
}

/// `([h]_ess, [h]_res) = (ψ(ρ)h, (1−ψ(ρ))h)`
pub fn essential_residual_split(
    h: &ScalarField,
    rho: &ScalarField,
) -> Result<(ScalarField, ScalarField), DiagnosticsError> {
    let psi = CutoffPsi;
    let ess = h.zip_map(rho, |h, r| psi.eval(r) * h)?;
    let res = h.sub(&ess)?;
    Ok((ess, res))
}

/// Running time average of `m` and `σ` by the trapezoid rule. The norms of
/// the averaged fields measure the limit identities in the weak sense.
#[derive(Debug, Clone)]
pub struct ResidualAverager {
    last: Option<(f64, VecField2, ScalarField)>,
    sum_m: Option<VecField2>,
    sum_sigma: Option<ScalarField>,
    start: f64,
    span: f64,
}

impl Default for ResidualAverager {
    fn default() -> Self {
        Self::new()
    }
}

impl ResidualAverager {
    pub fn new() -> Self {
        Self {
            last: None,
            sum_m: None,
            sum_sigma: None,
            start: 0.0,
            span: 0.0,
        }
    }

    pub fn push(&mut self, time: f64, m: &VecField2, sigma: &ScalarField) -> Result<(), DiagnosticsError> {
        if let Some((t0, m0, s0)) = &self.last {
            let h = 0.5 * (time - t0);
            let dm = m0.add(m)?.scale(h);
            let mut ds = s0.add(sigma)?;
            ds = ds.scale(h);
            self.sum_m = Some(match self.sum_m.take() {
                Some(acc) => acc.add(&dm)?,
                None => dm,
            });
            self.sum_sigma = Some(match self.sum_sigma.take() {
                Some(acc) => acc.add(&ds)?,
                None => ds,
            });
            self.span = time - self.start;
        } else {
            self.start = time;
        }
        self.last = Some((time, m.clone(), sigma.clone()));
        Ok(())
    }

    /// `(‖div m̄‖₂, ‖ω×m̄ + ∇σ̄‖₂)`; a single sample is its own average.
    pub fn residuals(&self) -> Result<(f64, f64), DiagnosticsError> {
        match (&self.sum_m, &self.sum_sigma, &self.last) {
            (Some(m), Some(s), _) if self.span > 0.0 => {
                limit_residuals(&m.scale(1.0 / self.span), &s.scale(1.0 / self.span))
            }
            (_, _, Some((_, m, s))) => limit_residuals(m, s),
            _ => Ok((0.0, 0.0)),
        }
    }
}

/// Everything recorded for one ε.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSeries {
    pub epsilon: f64,
    pub horizon: f64,
    /// Describes data, grid and numerics; equal for comparable runs.
    pub fingerprint: String,
    pub records: Vec<RelEnergyRecord>,
    /// Norms of the time-averaged `div m` and `ω×m + ∇σ`.
    pub weak_residuals: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub sup_energy: f64,
    /// Time average of `‖div m‖₂`.
    pub mean_div_residual: f64,
    /// Time average of `‖ω×m + ∇σ‖₂`.
    pub mean_balance_residual: f64,
    pub weak_div_residual: f64,
    pub weak_balance_residual: f64,
    /// Ratios against the previous row; `None` for the first.
    pub energy_ratio: Option<f64>,
    pub weak_div_ratio: Option<f64>,
    pub weak_balance_ratio: Option<f64>,
}

fn time_mean(records: &[RelEnergyRecord], f: impl Fn(&RelEnergyRecord) -> f64) -> f64 {
    match records {
        [] => 0.0,
        [only] => f(only),
        _ => {
            let span = records[records.len() - 1].time - records[0].time;
            let sum: f64 = records
                .windows(2)
                .map(|w| 0.5 * (f(&w[0]) + f(&w[1])) * (w[1].time - w[0].time))
                .sum();
            if span > 0.0 {
                sum / span
            } else {
                f(&records[0])
            }
        }
    }
}

fn ratio(cur: f64, prev: f64) -> f64 {
    if cur == prev {
        1.0
    } else {
        cur / prev
    }
}

/// Per-ε suprema, time averages and consecutive reduction ratios, in the
/// order the runs are given.
pub fn convergence_metrics(runs: &[RunSeries]) -> Result<Vec<ConvergenceRow>, DiagnosticsError> {
    if runs.len() < 2 {
        return Err(DiagnosticsError::TooFewRuns(runs.len()));
    }
    let first = &runs[0];
    for run in &runs[1..] {
        if run.horizon != first.horizon {
            return Err(DiagnosticsError::Mismatch(format!(
                "horizon {} vs {}",
                run.horizon, first.horizon
            )));
        }
        if run.fingerprint != first.fingerprint {
            return Err(DiagnosticsError::Mismatch(format!(
                "configuration '{}' vs '{}'",
                run.fingerprint, first.fingerprint
            )));
        }
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(runs.len());
    for run in runs {
        if run.records.is_empty() {
            return Err(DiagnosticsError::Mismatch(format!(
                "run at epsilon {} has no records",
                run.epsilon
            )));
        }
        let sup_energy = run.records.iter().map(|r| r.e_total).fold(0.0, f64::max);
        let mut row = ConvergenceRow {
            epsilon: run.epsilon,
            sup_energy,
            mean_div_residual: time_mean(&run.records, |r| r.div_residual),
            mean_balance_residual: time_mean(&run.records, |r| r.balance_residual),
            weak_div_residual: run.weak_residuals.0,
            weak_balance_residual: run.weak_residuals.1,
            energy_ratio: None,
            weak_div_ratio: None,
            weak_balance_ratio: None,
        };
        if let Some(prev) = rows.last() {
            row.energy_ratio = Some(ratio(row.sup_energy, prev.sup_energy));
            row.weak_div_ratio = Some(ratio(row.weak_div_residual, prev.weak_div_residual));
            row.weak_balance_ratio = Some(ratio(row.weak_balance_residual, prev.weak_balance_residual));
        }
        rows.push(row);
    }
    Ok(rows)
}
