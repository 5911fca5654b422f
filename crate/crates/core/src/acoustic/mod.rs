//! Rotating acoustic system
//!
//! ```text
//! ε ∂ₜ s + div w = 0,
//! ε ∂ₜ w + ω×w + ∇s = 0,
//! ```
//!
//! solved exactly mode by mode. The wave field `w` starts as a gradient
//! `∇Φ₀` but is evolved as a general vector field, since `ω×w` feeds a
//! solenoidal part back in.

mod freespace;
mod modal;

use num_complex::Complex64;
use thiserror::Error;

use crate::fields::{gradient, FieldError, Grid2, ScalarField, Spectrum, VecField2};

pub use freespace::{freespace_acoustic_probe, ProbeValue, RadialData};
pub use modal::{
    acoustic_mode_matrix, identity, matmul, matvec, mode_frequency, mode_propagator, mode_symbol,
    Mat3, ModeProjectors,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AcousticError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("scale parameter must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("evolution time must be finite, got {0}")]
    Time(f64),
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("invalid probe input: {0}")]
    Probe(String),
}

fn check_epsilon(epsilon: f64) -> Result<(), AcousticError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(AcousticError::Epsilon(epsilon))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcousticState {
    pub s: ScalarField,
    pub w: VecField2,
    pub epsilon: f64,
    pub time: f64,
}

impl AcousticState {
    pub fn new(s: ScalarField, w: VecField2, epsilon: f64) -> Result<Self, AcousticError> {
        check_epsilon(epsilon)?;
        s.grid().same_as(w.grid())?;
        Ok(Self {
            s,
            w,
            epsilon,
            time: 0.0,
        })
    }

    /// Initial data `s₀`, `w = ∇Φ₀`.
    pub fn from_potential(
        s0: ScalarField,
        phi0: &ScalarField,
        epsilon: f64,
    ) -> Result<Self, AcousticError> {
        let w = gradient(phi0)?;
        Self::new(s0, w, epsilon)
    }

    pub fn zeros(grid: Grid2, epsilon: f64) -> Result<Self, AcousticError> {
        Self::new(ScalarField::zeros(grid), VecField2::zeros(grid), epsilon)
    }

    pub fn grid(&self) -> &Grid2 {
        self.s.grid()
    }
}

/// Fourier coefficients of `(s, w₁, w₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalState {
    pub components: [Spectrum; 3],
}

impl ModalState {
    pub fn forward(
        s: &ScalarField,
        wx: &ScalarField,
        wy: &ScalarField,
    ) -> Result<Self, FieldError> {
        s.grid().same_as(wx.grid())?;
        s.grid().same_as(wy.grid())?;
        Ok(Self {
            components: [
                Spectrum::forward(s)?,
                Spectrum::forward(wx)?,
                Spectrum::forward(wy)?,
            ],
        })
    }

    pub fn to_fields(&self) -> (ScalarField, ScalarField, ScalarField) {
        let [a, b, c] = &self.components;
        (a.to_field(), b.to_field(), c.to_field())
    }

    pub fn grid(&self) -> &Grid2 {
        self.components[0].grid()
    }

    /// `∫ (|a|² + |b|² + |c|²)/2 dx`
    pub fn energy(&self) -> f64 {
        0.5 * self.components.iter().map(Spectrum::energy).sum::<f64>()
    }
}

/// Per-mode matrices `exp(t M(k)/ε)` for a fixed `t`, optionally combined
/// with a scalar damping factor per mode.
#[derive(Debug, Clone)]
pub struct ModalPropagator {
    grid: Grid2,
    matrices: Vec<Mat3>,
}

impl ModalPropagator {
    pub fn new(grid: Grid2, epsilon: f64, t: f64) -> Result<Self, AcousticError> {
        Self::with_damping(grid, epsilon, t, |_| 1.0)
    }

    /// `damping(|k|²)` multiplies every component of mode `k`.
    pub fn with_damping(
        grid: Grid2,
        epsilon: f64,
        t: f64,
        damping: impl Fn(f64) -> f64,
    ) -> Result<Self, AcousticError> {
        check_epsilon(epsilon)?;
        if !t.is_finite() {
            return Err(AcousticError::Time(t));
        }
        let n = grid.n();
        let mut matrices = Vec::with_capacity(grid.len());
        for iy in 0..n {
            let ky = grid.wavenumber(iy);
            for ix in 0..n {
                let kx = grid.wavenumber(ix);
                let mut e = mode_propagator([kx, ky], epsilon, t);
                let d = damping(kx * kx + ky * ky);
                if d != 1.0 {
                    for row in e.iter_mut() {
                        for c in row.iter_mut() {
                            *c *= d;
                        }
                    }
                }
                matrices.push(e);
            }
        }
        Ok(Self { grid, matrices })
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn matrix(&self, index: usize) -> &Mat3 {
        &self.matrices[index]
    }

    pub fn apply(&self, state: &mut ModalState) -> Result<(), FieldError> {
        self.grid.same_as(state.grid())?;
        let [a, b, c] = &mut state.components;
        let (a, b, c) = (a.coeffs_mut(), b.coeffs_mut(), c.coeffs_mut());
        for (i, m) in self.matrices.iter().enumerate() {
            let v: [Complex64; 3] = matvec(m, [a[i], b[i], c[i]]);
            a[i] = v[0];
            b[i] = v[1];
            c[i] = v[2];
        }
        Ok(())
    }
}

/// Exact evolution over time `t` (negative `t` runs backwards).
pub fn acoustic_evolve(state: &AcousticState, t: f64) -> Result<AcousticState, AcousticError> {
    if !t.is_finite() {
        return Err(AcousticError::Time(t));
    }
    let mut modal = ModalState::forward(&state.s, state.w.x(), state.w.y())?;
    ModalPropagator::new(*state.grid(), state.epsilon, t)?.apply(&mut modal)?;
    let (s, wx, wy) = modal.to_fields();
    Ok(AcousticState {
        s,
        w: VecField2::new(wx, wy)?,
        epsilon: state.epsilon,
        time: state.time + t,
    })
}

/// `∫ (s² + |w|²)/2 dx`, computed from the Fourier coefficients.
pub fn acoustic_energy(state: &AcousticState) -> Result<f64, AcousticError> {
    Ok(ModalState::forward(&state.s, state.w.x(), state.w.y())?.energy())
}

/// Largest group speed `|k|/√(1+|k|²)` over the lattice, in fast time.
pub fn max_group_speed(grid: &Grid2) -> f64 {
    let k = grid.max_axis_wavenumber() * std::f64::consts::SQRT_2;
    k / (1.0 + k * k).sqrt()
}

/// Physical time before a wave packet launched from a point can wrap around
/// the torus and interfere with itself: `ε (L/2) / max group speed`.
pub fn recurrence_horizon(grid: &Grid2, epsilon: f64) -> f64 {
    epsilon * 0.5 * grid.length() / max_group_speed(grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySample {
    pub time: f64,
    pub energy: f64,
    pub sup_s: f64,
    pub sup_w: f64,
    /// Set when `time` lies past the torus recurrence horizon; the value is
    /// still reported but no longer reflects free-space dispersion.
    pub beyond_recurrence: bool,
}

/// Sup-norms of `s` and `w` at the requested times for data `(s₀, ∇Φ₀)`.
pub fn dispersive_decay_probe(
    s0: &ScalarField,
    phi0: &ScalarField,
    epsilon: f64,
    sample_times: &[f64],
) -> Result<Vec<DecaySample>, AcousticError> {
    let initial = AcousticState::from_potential(s0.clone(), phi0, epsilon)?;
    let horizon = recurrence_horizon(initial.grid(), epsilon);
    let modal = ModalState::forward(&initial.s, initial.w.x(), initial.w.y())?;
    sample_times
        .iter()
        .map(|&t| {
            let mut m = modal.clone();
            ModalPropagator::new(*initial.grid(), epsilon, t)?.apply(&mut m)?;
            let (s, wx, wy) = m.to_fields();
            let w = VecField2::new(wx, wy)?;
            Ok(DecaySample {
                time: t,
                energy: m.energy(),
                sup_s: s.max_abs(),
                sup_w: w.max_norm(),
                beyond_recurrence: t > horizon,
            })
        })
        .collect()
}
