//! Quasi-geostrophic limit dynamics
//!
//! ```text
//! ω×v + ∇q = 0,   v = ∇⊥q,
//! ∂ₜ(Δq − q) + ∇⊥q · ∇(Δq) = 0,
//! ```
//!
//! evolved in potential-vorticity form `ζ = Δq − q` with classical RK4 and
//! exact Helmholtz inversion `q̂ = −ζ̂/(1+|k|²)` at every stage.

use num_complex::Complex64;
use thiserror::Error;

use crate::fields::{perp_gradient, FieldError, Grid2, ScalarField, Spectrum, VecField2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("time step must be positive and finite, got {0}")]
    TimeStep(f64),
    #[error("CFL number {cfl:.4} exceeds {limit} (max |v| = {max_speed:.4}, dt = {dt})")]
    Cfl {
        cfl: f64,
        limit: f64,
        max_speed: f64,
        dt: f64,
    },
}

/// Advective CFL bound `max|v| dt / Δx`.
pub const CFL_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct QgState {
    pub q: ScalarField,
    pub time: f64,
}

impl QgState {
    pub fn new(q: ScalarField) -> Self {
        Self { q, time: 0.0 }
    }
}

/// Solves `−Δq₀ + q₀ = s₀ − curl u₀` mode by mode.
///
/// The right-hand side is the projection of the data `(s₀, u₀)` onto the
/// geostrophic kernel `{(q, ∇⊥q)}` of the acoustic operator; for balanced
/// data `s₀ = q`, `u₀ = ∇⊥q` it returns `q` itself. Only the rotational part
/// of `u₀` enters, so `u₀ = v₀ + ∇Φ₀` and `v₀` give the same `q₀`.
pub fn solve_initial_elliptic(u0: &VecField2, s0: &ScalarField) -> Result<ScalarField, QgError> {
    s0.grid().same_as(u0.grid())?;
    let s = Spectrum::forward(s0)?;
    let ux = Spectrum::forward(u0.x())?;
    let uy = Spectrum::forward(u0.y())?;
    let curl = uy.dx().add(&ux.dy().scale(-1.0))?;
    let rhs = s.add(&curl.scale(-1.0))?;
    Ok(rhs
        .map_modes(|kx, ky, c| c / (1.0 + kx * kx + ky * ky))
        .to_field())
}

/// `ζ = Δq − q`
pub fn potential_vorticity(q: &ScalarField) -> Result<ScalarField, QgError> {
    let qh = Spectrum::forward(q)?;
    Ok(zeta_from_q(&qh).to_field())
}

/// `v = ∇⊥q`
pub fn qg_velocity(q: &ScalarField) -> Result<VecField2, QgError> {
    Ok(perp_gradient(q)?)
}

fn zeta_from_q(qh: &Spectrum) -> Spectrum {
    qh.map_modes(|kx, ky, c| -(1.0 + kx * kx + ky * ky) * c)
}

fn q_from_zeta(zh: &Spectrum) -> Spectrum {
    zh.map_modes(|kx, ky, c| -c / (1.0 + kx * kx + ky * ky))
}

/// `∂ₜζ̂ = −P[∇⊥q · ∇Δq]` with `P` the two-thirds truncation.
fn rhs_spectral(qh: &Spectrum) -> Spectrum {
    let vx = qh.dy().scale(-1.0).to_field();
    let vy = qh.dx().to_field();
    let lap = qh.laplacian();
    let gx = lap.dx().to_field();
    let gy = lap.dy().to_field();
    let adv: Vec<f64> = vx
        .values()
        .iter()
        .zip(vy.values())
        .zip(gx.values().iter().zip(gy.values()))
        .map(|((a, b), (c, d))| -(a * c + b * d))
        .collect();
    let adv = ScalarField::from_values_unchecked(*qh.grid(), adv);
    Spectrum::forward(&adv)
        .expect("products of finite fields are finite")
        .dealiased()
}

/// `∂ₜζ = −dealias(∇⊥q · ∇Δq)`
pub fn qg_rhs(q: &ScalarField) -> Result<ScalarField, QgError> {
    let qh = Spectrum::forward(q)?;
    Ok(rhs_spectral(&qh).to_field())
}

pub fn cfl_number(q: &ScalarField, dt: f64) -> Result<f64, QgError> {
    let v = qg_velocity(q)?;
    Ok(v.max_norm() * dt / q.grid().spacing())
}

/// One classical RK4 step on `ζ`.
pub fn qg_step(state: &QgState, dt: f64) -> Result<QgState, QgError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(QgError::TimeStep(dt));
    }
    let qh = Spectrum::forward(&state.q)?;
    let vmax = {
        let vx = qh.dy().to_field();
        let vy = qh.dx().to_field();
        vx.zip_map(&vy, |a, b| a * a + b * b)?.max().sqrt()
    };
    let cfl = vmax * dt / state.q.grid().spacing();
    if cfl > CFL_LIMIT {
        return Err(QgError::Cfl {
            cfl,
            limit: CFL_LIMIT,
            max_speed: vmax,
            dt,
        });
    }
    let z0 = zeta_from_q(&qh);
    let stage = |z: &Spectrum| rhs_spectral(&q_from_zeta(z));
    let axpy = |z: &Spectrum, k: &Spectrum, h: f64| -> Spectrum {
        let mut out = z.clone();
        for (o, c) in out.coeffs_mut().iter_mut().zip(k.coeffs()) {
            *o += c * h;
        }
        out
    };
    let k1 = stage(&z0);
    let k2 = stage(&axpy(&z0, &k1, dt / 2.0));
    let k3 = stage(&axpy(&z0, &k2, dt / 2.0));
    let k4 = stage(&axpy(&z0, &k3, dt));
    let mut z1 = z0.clone();
    for (i, z) in z1.coeffs_mut().iter_mut().enumerate() {
        let incr: Complex64 = k1.coeffs()[i]
            + 2.0 * k2.coeffs()[i]
            + 2.0 * k3.coeffs()[i]
            + k4.coeffs()[i];
        *z += incr * (dt / 6.0);
    }
    Ok(QgState {
        q: q_from_zeta(&z1).to_field(),
        time: state.time + dt,
    })
}

/// Advances by `steps` RK4 steps of size `dt`.
pub fn qg_evolve(state: &QgState, dt: f64, steps: usize) -> Result<QgState, QgError> {
    let mut s = state.clone();
    for _ in 0..steps {
        s = qg_step(&s, dt)?;
    }
    Ok(s)
}

/// `∫ (|∇q|² + q²)/2 dx`
pub fn qg_energy(q: &ScalarField) -> Result<f64, QgError> {
    let qh = Spectrum::forward(q)?;
    Ok(0.5 * (qh.energy() + qh.dx().energy() + qh.dy().energy()))
}

/// `∫ ζ² dx`
pub fn qg_enstrophy(q: &ScalarField) -> Result<f64, QgError> {
    Ok(zeta_from_q(&Spectrum::forward(q)?).energy())
}

/// Mean of `ζ` over the torus.
pub fn mean_potential_vorticity(q: &ScalarField) -> Result<f64, QgError> {
    Ok(potential_vorticity(q)?.mean())
}

/// Zero field on `grid` as a QG state.
pub fn rest(grid: Grid2) -> QgState {
    QgState::new(ScalarField::zeros(grid))
}
