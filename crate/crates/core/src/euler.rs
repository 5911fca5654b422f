//! Scaled rotating compressible Euler system
//!
//! ```text
//! ∂ₜρ + div m = 0
//! ∂ₜm + div(m⊗m/ρ) + ε⁻²∇p(ρ) + ε⁻¹ ω×m = 0
//! ```
//!
//! Written for `σ = (ρ−1)/ε` and `m`, the stiff part is exactly the acoustic
//! generator `M(k)/ε` and is propagated mode by mode. What remains is the
//! advective flux and the nonlinear pressure remainder
//! `p(ρ) − p(1) − p'(1)(ρ−1)`, both O(1) for `ρ = 1 + O(ε)`, advanced with
//! Heun's method inside a Strang splitting.

use num_complex::Complex64;
use thiserror::Error;

use crate::acoustic::{mode_propagator, AcousticError, Mat3, ModalPropagator, ModalState};
use crate::fields::{divergence, gradient, FieldError, Grid2, ScalarField, Spectrum, VecField2};
use crate::thermo::{PressureLaw, ThermoError};

/// Advective CFL bound `max|m/ρ| dt / Δx`.
pub const CFL_LIMIT: f64 = 0.5;
pub const DEFAULT_DENSITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EulerError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error(transparent)]
    Acoustic(#[from] AcousticError),
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("time step must be positive and finite, got {0}")]
    TimeStep(f64),
    #[error("initial density 1 + ε s0 has minimum {min_rho} at ε = {epsilon}")]
    InitialDensity { epsilon: f64, min_rho: f64 },
    #[error("v0 is not divergence free (max |div v0| = {max_div:e})")]
    Divergence { max_div: f64 },
    #[error("CFL number {cfl:.4} exceeds {limit} at t = {}", state.time)]
    Cfl {
        cfl: f64,
        limit: f64,
        state: Box<ConservativeState>,
    },
    #[error("density {min_rho:e} fell below floor {floor:e} at t = {}", state.time)]
    DensityFloor {
        min_rho: f64,
        floor: f64,
        state: Box<ConservativeState>,
    },
    #[error("non-finite values in the solution at t = {}", state.time)]
    Blowup { state: Box<ConservativeState> },
}

fn check_epsilon(epsilon: f64) -> Result<(), EulerError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(EulerError::Epsilon(epsilon))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservativeState {
    pub rho: ScalarField,
    pub m: VecField2,
    pub epsilon: f64,
    pub time: f64,
}

impl ConservativeState {
    pub fn new(rho: ScalarField, m: VecField2, epsilon: f64) -> Result<Self, EulerError> {
        check_epsilon(epsilon)?;
        rho.grid().same_as(m.grid())?;
        rho.check_finite()?;
        m.check_finite()?;
        Ok(Self {
            rho,
            m,
            epsilon,
            time: 0.0,
        })
    }

    /// `(ρ, m) = (1, 0)`
    pub fn rest(grid: Grid2, epsilon: f64) -> Result<Self, EulerError> {
        Self::new(ScalarField::constant(grid, 1.0), VecField2::zeros(grid), epsilon)
    }

    pub fn grid(&self) -> &Grid2 {
        self.rho.grid()
    }

    /// `ρ⁽¹⁾ = (ρ − 1)/ε`
    pub fn sigma(&self) -> ScalarField {
        let e = self.epsilon;
        self.rho.map(|r| (r - 1.0) / e)
    }

    pub fn velocity(&self) -> Result<VecField2, EulerError> {
        Ok(VecField2::new(
            self.m.x().zip_map(&self.rho, |a, r| a / r)?,
            self.m.y().zip_map(&self.rho, |a, r| a / r)?,
        )?)
    }

    pub fn mass(&self) -> f64 {
        self.rho.integral()
    }

    pub fn min_rho(&self) -> f64 {
        self.rho.min()
    }

    /// `max|m/ρ| dt / Δx`
    pub fn cfl(&self, dt: f64) -> Result<f64, EulerError> {
        Ok(self.velocity()?.max_norm() * dt / self.grid().spacing())
    }
}

/// Ill-prepared datum `(s0, u0 = v0 + ∇Φ0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IllPreparedData {
    pub s0: ScalarField,
    pub v0: VecField2,
    pub phi0: ScalarField,
}

impl IllPreparedData {
    pub fn new(s0: ScalarField, v0: VecField2, phi0: ScalarField) -> Result<Self, EulerError> {
        s0.grid().same_as(v0.grid())?;
        s0.grid().same_as(phi0.grid())?;
        let max_div = divergence(&v0)?.max_abs();
        if max_div > 1e-12 * v0.max_norm().max(1.0) {
            return Err(EulerError::Divergence { max_div });
        }
        phi0.check_finite()?;
        Ok(Self { s0, v0, phi0 })
    }

    pub fn zeros(grid: Grid2) -> Self {
        Self {
            s0: ScalarField::zeros(grid),
            v0: VecField2::zeros(grid),
            phi0: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid2 {
        self.s0.grid()
    }

    /// `u0 = v0 + ∇Φ0`
    pub fn velocity(&self) -> Result<VecField2, EulerError> {
        Ok(self.v0.add(&gradient(&self.phi0)?)?)
    }
}

/// `ρ = 1 + ε s0`, `m = ρ (v0 + ∇Φ0)`.
pub fn init_ill_prepared(
    data: &IllPreparedData,
    epsilon: f64,
) -> Result<ConservativeState, EulerError> {
    check_epsilon(epsilon)?;
    let rho = data.s0.map(|s| 1.0 + epsilon * s);
    let min_rho = rho.min();
    if min_rho.is_nan() || min_rho <= 0.0 {
        return Err(EulerError::InitialDensity { epsilon, min_rho });
    }
    let m = data.velocity()?.mul_scalar(&rho)?;
    ConservativeState::new(rho, m, epsilon)
}

/// `exp(dt M(k)/ε)` acting on `(σ̂, m̂₁, m̂₂)`.
pub fn fast_propagator(k: [f64; 2], epsilon: f64, dt: f64) -> Mat3 {
    mode_propagator(k, epsilon, dt)
}

/// Slow tendencies; the `σ` part is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowTendency {
    pub sigma: ScalarField,
    pub m: VecField2,
}

/// Advection and pressure-remainder parts of the momentum tendency.
#[derive(Debug, Clone, PartialEq)]
pub struct SlowParts {
    pub advection: VecField2,
    pub pressure: VecField2,
}

/// Spectral momentum tendency `[−P div(m⊗m/ρ) − ε⁻²∇ P R(ρ)]`.
fn slow_spectral(
    law: &PressureLaw,
    epsilon: f64,
    rho: &ScalarField,
    m: &VecField2,
    nonlinear: bool,
) -> Result<[Spectrum; 4], EulerError> {
    let grid = *rho.grid();
    if !nonlinear {
        return Ok([
            Spectrum::zeros(grid),
            Spectrum::zeros(grid),
            Spectrum::zeros(grid),
            Spectrum::zeros(grid),
        ]);
    }
    let (mx, my) = (m.x().values(), m.y().values());
    let r = rho.values();
    let n = grid.len();
    let (mut fxx, mut fxy, mut fyy, mut rem) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        fxx[i] = mx[i] * mx[i] / r[i];
        fxy[i] = mx[i] * my[i] / r[i];
        fyy[i] = my[i] * my[i] / r[i];
        rem[i] = law.pressure_remainder(r[i] - 1.0) / (epsilon * epsilon);
    }
    let fxx = Spectrum::forward(&ScalarField::from_values(grid, fxx)?)?;
    let fxy = Spectrum::forward(&ScalarField::from_values(grid, fxy)?)?;
    let fyy = Spectrum::forward(&ScalarField::from_values(grid, fyy)?)?;
    let rem = Spectrum::forward(&ScalarField::from_values(grid, rem)?)?.dealiased();
    let adv_x = fxx.dx().add(&fxy.dy())?.dealiased().scale(-1.0);
    let adv_y = fxy.dx().add(&fyy.dy())?.dealiased().scale(-1.0);
    Ok([adv_x, adv_y, rem.dx().scale(-1.0), rem.dy().scale(-1.0)])
}

fn floor_check(
    rho: &ScalarField,
    floor: f64,
    dump: impl FnOnce() -> ConservativeState,
) -> Result<(), EulerError> {
    let min_rho = rho.min();
    if min_rho.is_nan() || rho.values().iter().any(|v| !v.is_finite()) {
        return Err(EulerError::Blowup {
            state: Box::new(dump()),
        });
    }
    if min_rho < floor {
        return Err(EulerError::DensityFloor {
            min_rho,
            floor,
            state: Box::new(dump()),
        });
    }
    Ok(())
}

/// Advection and pressure-remainder parts of the slow momentum tendency.
pub fn slow_parts(state: &ConservativeState, law: &PressureLaw) -> Result<SlowParts, EulerError> {
    floor_check(&state.rho, DEFAULT_DENSITY_FLOOR, || state.clone())?;
    let [ax, ay, px, py] = slow_spectral(law, state.epsilon, &state.rho, &state.m, true)?;
    Ok(SlowParts {
        advection: VecField2::new(ax.to_field(), ay.to_field())?,
        pressure: VecField2::new(px.to_field(), py.to_field())?,
    })
}

/// `(0, −P div(m⊗m/ρ) − ε⁻²∇ P[p(ρ) − p(1) − p'(1)(ρ−1)])` with `P` the
/// two-thirds truncation.
pub fn slow_rhs(state: &ConservativeState, law: &PressureLaw) -> Result<SlowTendency, EulerError> {
    let parts = slow_parts(state, law)?;
    Ok(SlowTendency {
        sigma: ScalarField::zeros(*state.grid()),
        m: parts.advection.add(&parts.pressure)?,
    })
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerSolver {
    pub law: PressureLaw,
    pub density_floor: f64,
    /// Coefficient `ν` of the optional `ν|k|⁸` damping.
    pub hyperdiffusion: f64,
    /// With `false` only the stiff linear part is advanced.
    pub nonlinear: bool,
}

impl Default for EulerSolver {
    fn default() -> Self {
        Self {
            law: PressureLaw::default(),
            density_floor: DEFAULT_DENSITY_FLOOR,
            hyperdiffusion: 0.0,
            nonlinear: true,
        }
    }
}

impl EulerSolver {
    pub fn with_law(law: PressureLaw) -> Self {
        Self {
            law,
            ..Self::default()
        }
    }

    /// Precomputes the half-step propagators for `(grid, ε, dt)`.
    pub fn stepper(&self, grid: Grid2, epsilon: f64, dt: f64) -> Result<EulerStepper, EulerError> {
        check_epsilon(epsilon)?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(EulerError::TimeStep(dt));
        }
        let nu = self.hyperdiffusion;
        let half = ModalPropagator::with_damping(grid, epsilon, dt / 2.0, |k2| {
            if nu == 0.0 {
                1.0
            } else {
                (-nu * k2.powi(4) * dt / 2.0).exp()
            }
        })?;
        Ok(EulerStepper {
            solver: *self,
            epsilon,
            dt,
            half,
        })
    }

    /// `∫ ½|m|²/ρ + ε⁻² D(ρ, 1) dx`
    pub fn total_energy(&self, state: &ConservativeState) -> Result<f64, EulerError> {
        total_energy(state, &self.law)
    }
}

/// A configured Strang stepper for one `(grid, ε, dt)`.
#[derive(Debug, Clone)]
pub struct EulerStepper {
    solver: EulerSolver,
    epsilon: f64,
    dt: f64,
    half: ModalPropagator,
}

impl EulerStepper {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, state: &ConservativeState) -> Result<ConservativeState, EulerError> {
        if state.epsilon != self.epsilon {
            return Err(EulerError::Epsilon(state.epsilon));
        }
        let grid = *state.grid();
        self.half.grid().same_as(&grid)?;
        let eps = self.epsilon;
        let dt = self.dt;
        let floor = self.solver.density_floor;
        floor_check(&state.rho, floor, || state.clone())?;
        let cfl = state.cfl(dt)?;
        if cfl > CFL_LIMIT {
            return Err(EulerError::Cfl {
                cfl,
                limit: CFL_LIMIT,
                state: Box::new(state.clone()),
            });
        }

        let mut modal = ModalState::forward(&state.sigma(), state.m.x(), state.m.y())?;
        self.half.apply(&mut modal)?;

        if self.solver.nonlinear {
            let to_state = |modal: &ModalState| -> Result<(ScalarField, VecField2), EulerError> {
                let (s, mx, my) = modal.to_fields();
                Ok((s.map(|v| 1.0 + eps * v), VecField2::new(mx, my)?))
            };
            let dump = |rho: &ScalarField, m: &VecField2| ConservativeState {
                rho: rho.clone(),
                m: m.clone(),
                epsilon: eps,
                time: state.time,
            };
            let slow = |rho: &ScalarField, m: &VecField2| -> Result<[Spectrum; 2], EulerError> {
                let [ax, ay, px, py] = slow_spectral(&self.solver.law, eps, rho, m, true)?;
                Ok([ax.add(&px)?, ay.add(&py)?])
            };

            let (rho, m) = to_state(&modal)?;
            floor_check(&rho, floor, || dump(&rho, &m))?;
            let k1 = slow(&rho, &m)?;
            let mut predictor = modal.clone();
            for (c, k) in predictor.components[1..].iter_mut().zip(&k1) {
                axpy(c, k, dt);
            }
            let (_, m_star) = to_state(&predictor)?;
            m_star.check_finite().map_err(|_| EulerError::Blowup {
                state: Box::new(dump(&rho, &m_star)),
            })?;
            let k2 = slow(&rho, &m_star)?;
            for ((c, a), b) in modal.components[1..].iter_mut().zip(&k1).zip(&k2) {
                axpy(c, a, dt / 2.0);
                axpy(c, b, dt / 2.0);
            }
        }

        self.half.apply(&mut modal)?;
        let (s, mx, my) = modal.to_fields();
        let rho = s.map(|v| 1.0 + eps * v);
        let m = VecField2::new(mx, my)?;
        let next = ConservativeState {
            rho,
            m,
            epsilon: eps,
            time: state.time + dt,
        };
        if next.m.check_finite().is_err() {
            return Err(EulerError::Blowup {
                state: Box::new(next),
            });
        }
        floor_check(&next.rho, floor, || next.clone())?;
        Ok(next)
    }
}

fn axpy(y: &mut Spectrum, x: &Spectrum, h: f64) {
    for (a, b) in y.coeffs_mut().iter_mut().zip(x.coeffs()) {
        *a += *b * Complex64::from(h);
    }
}

/// One Strang step with default settings.
pub fn euler_step(state: &ConservativeState, dt: f64) -> Result<ConservativeState, EulerError> {
    EulerSolver::default()
        .stepper(*state.grid(), state.epsilon, dt)?
        .step(state)
}

/// `∫ ½|m|²/ρ + ε⁻² D(ρ, 1) dx`, with `D` the Bregman distance of the
/// pressure potential.
pub fn total_energy(state: &ConservativeState, law: &PressureLaw) -> Result<f64, EulerError> {
    let e2 = state.epsilon * state.epsilon;
    let (mx, my, r) = (state.m.x().values(), state.m.y().values(), state.rho.values());
    let mut sum = 0.0;
    for i in 0..r.len() {
        let kinetic = 0.5 * (mx[i] * mx[i] + my[i] * my[i]) / r[i];
        sum += kinetic + law.relative_pressure_potential(r[i], 1.0)? / e2;
    }
    Ok(sum * state.grid().cell_area())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use nalgebra::{Complex, Matrix3};

    use super::*;
    use crate::acoustic::{acoustic_evolve, acoustic_mode_matrix, AcousticState};
    use crate::fields::perp_gradient;

    fn g(n: usize) -> Grid2 {
        Grid2::new(n, 2.0 * PI).unwrap()
    }

    #[test]
    fn zero_data_gives_rest_state() {
        let st = init_ill_prepared(&IllPreparedData::zeros(g(16)), 0.1).unwrap();
        assert_eq!(st.rho.min(), 1.0);
        assert_eq!(st.rho.max(), 1.0);
        assert_eq!(st.m.max_norm(), 0.0);
    }

    #[test]
    fn affine_density_construction() {
        let grid = g(32);
        let s0 = ScalarField::from_fn(grid, |x, _| x.cos());
        let data = IllPreparedData::new(s0.clone(), VecField2::zeros(grid), ScalarField::zeros(grid))
            .unwrap();
        let st = init_ill_prepared(&data, 0.1).unwrap();
        assert!((st.rho.min() - 0.9).abs() < 1e-15);
        assert!((st.rho.max() - 1.1).abs() < 1e-15);
        assert!(st.sigma().max_abs_diff(&s0).unwrap() < 1e-14);
    }

    #[test]
    fn nonpositive_density_reports_epsilon() {
        let grid = g(16);
        let s0 = ScalarField::from_fn(grid, |x, _| 20.0 * x.cos());
        let data = IllPreparedData::new(s0, VecField2::zeros(grid), ScalarField::zeros(grid)).unwrap();
        match init_ill_prepared(&data, 0.2) {
            Err(e @ EulerError::InitialDensity { .. }) => assert!(e.to_string().contains("0.2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn divergent_v0_rejected() {
        let grid = g(16);
        let v0 = VecField2::from_fn(grid, |x, _| (x.sin(), 0.0));
        assert!(matches!(
            IllPreparedData::new(ScalarField::zeros(grid), v0, ScalarField::zeros(grid)),
            Err(EulerError::Divergence { .. })
        ));
    }

    #[test]
    fn fast_propagator_is_exponentiated_symbol() {
        let k = [2.0, -3.0];
        let (eps, dt) = (0.05, 0.013);
        let e = fast_propagator(k, eps, dt);
        assert_eq!(fast_propagator(k, eps, 0.0), crate::acoustic::identity());
        // truncated Taylor series of exp(dt A) with scaling and squaring
        let a = acoustic_mode_matrix(k, eps);
        let am = Matrix3::from_fn(|i, j| Complex::new(a[i][j].re, a[i][j].im) * (dt / 1024.0));
        let mut term: Matrix3<Complex<f64>> = Matrix3::identity();
        let mut sum = Matrix3::identity();
        for j in 1..20 {
            term = term * am / Complex::from(j as f64);
            sum += term;
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((sum[(i, j)] - e[i][j]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn fast_propagator_is_unitary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let k = [rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0)];
            let e = fast_propagator(k, rng.gen_range(0.01..1.0), rng.gen_range(0.0..5.0));
            let m = Matrix3::from_fn(|i, j| e[i][j]);
            for s in m.singular_values().iter() {
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rest_state_has_no_tendency_and_is_fixed() {
        let st = ConservativeState::rest(g(16), 0.1).unwrap();
        let rhs = slow_rhs(&st, &PressureLaw::default()).unwrap();
        assert_eq!(rhs.m.max_norm(), 0.0);
        assert_eq!(rhs.sigma.max_abs(), 0.0);
        let next = euler_step(&st, 0.7).unwrap();
        assert!(next.rho.max_abs_diff(&st.rho).unwrap() < 1e-15);
        assert!(next.m.max_norm() < 1e-15);
    }

    #[test]
    fn advection_matches_finite_differences() {
        // m = ∇⊥cos x = (0, −sin x) is a steady shear flow; use a 2-D field
        let n = 512;
        let h = 2.0 * PI / n as f64;
        let mfun = |x: f64, y: f64| (-(2.0 * y).sin() * 0.5, -x.sin() + 0.3 * (x + y).cos());
        let flux = |x: f64, y: f64| {
            let (a, b) = mfun(x, y);
            [a * a, a * b, b * b]
        };
        let d = |x: f64, y: f64, dir: (f64, f64), c: usize| {
            let at = |s: f64| flux(x + s * dir.0 * h, y + s * dir.1 * h)[c];
            (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
        };
        let grid = g(64);
        let st = ConservativeState::new(
            ScalarField::constant(grid, 1.0),
            VecField2::from_fn(grid, mfun),
            0.1,
        )
        .unwrap();
        let parts = slow_parts(&st, &PressureLaw::default()).unwrap();
        assert_eq!(parts.pressure.max_norm(), 0.0);
        for &(ix, iy) in &[(16usize, 16usize), (3, 50), (41, 9)] {
            let (x, y) = grid.coords(ix, iy);
            let ax = -(d(x, y, (1.0, 0.0), 0) + d(x, y, (0.0, 1.0), 1));
            let ay = -(d(x, y, (1.0, 0.0), 1) + d(x, y, (0.0, 1.0), 2));
            assert!((parts.advection.x().get(ix, iy) - ax).abs() < 1e-6);
            assert!((parts.advection.y().get(ix, iy) - ay).abs() < 1e-6);
        }
        // a pure shear m = ∇⊥cos x is advection free
        let shear = ConservativeState::new(
            ScalarField::constant(grid, 1.0),
            perp_gradient(&ScalarField::from_fn(grid, |x, _| x.cos())).unwrap(),
            0.1,
        )
        .unwrap();
        assert!(slow_rhs(&shear, &PressureLaw::default()).unwrap().m.max_norm() < 1e-13);
    }

    #[test]
    fn pressure_remainder_is_order_one() {
        let grid = g(32);
        let sigma = ScalarField::from_fn(grid, |x, y| x.cos() + 0.5 * (x - y).sin());
        for gamma in [2.0, 1.4] {
            let law = PressureLaw::new(gamma).unwrap();
            let size = |eps: f64| {
                let st = ConservativeState::new(
                    sigma.map(|s| 1.0 + eps * s),
                    VecField2::zeros(grid),
                    eps,
                )
                .unwrap();
                slow_parts(&st, &law).unwrap().pressure.max_norm()
            };
            let sizes: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&e| size(e)).collect();
            for w in sizes.windows(2) {
                let ratio = w[0].max(w[1]) / w[0].min(w[1]);
                assert!(ratio <= 1.2, "gamma {gamma}: {sizes:?}");
            }
        }
    }

    #[test]
    fn linear_part_is_the_acoustic_generator() {
        let grid = g(32);
        let eps = 0.05;
        let s = ScalarField::from_fn(grid, |x, y| (x + y).cos() * 0.3 + (3.0 * y).sin() * 0.1);
        let w = VecField2::from_fn(grid, |x, y| ((2.0 * y).sin() * 0.2, (x - y).cos() * 0.1));
        let st = ConservativeState::new(s.map(|v| 1.0 + eps * v), w.clone(), eps).unwrap();
        let solver = EulerSolver {
            nonlinear: false,
            ..EulerSolver::default()
        };
        let dt = 0.01;
        let stepper = solver.stepper(grid, eps, dt).unwrap();
        let mut cur = st;
        for _ in 0..20 {
            cur = stepper.step(&cur).unwrap();
        }
        let exact = acoustic_evolve(&AcousticState::new(s, w, eps).unwrap(), 20.0 * dt).unwrap();
        assert!(cur.sigma().max_abs_diff(&exact.s).unwrap() < 1e-11);
        assert!(cur.m.max_abs_diff(&exact.w).unwrap() < 1e-11);
    }

    #[test]
    fn cfl_and_floor_violations_carry_state() {
        let grid = g(16);
        let st = ConservativeState::new(
            ScalarField::constant(grid, 1.0),
            VecField2::from_fn(grid, |_, _| (10.0, 0.0)),
            0.1,
        )
        .unwrap();
        match euler_step(&st, 1.0) {
            Err(EulerError::Cfl { cfl, state, .. }) => {
                assert!(cfl > 0.5);
                assert_eq!(*state, st);
            }
            other => panic!("unexpected {other:?}"),
        }
        let thin = ConservativeState::new(
            ScalarField::constant(grid, 1e-8),
            VecField2::zeros(grid),
            0.1,
        )
        .unwrap();
        assert!(matches!(
            euler_step(&thin, 0.01),
            Err(EulerError::DensityFloor { .. })
        ));
        assert!(matches!(euler_step(&st, -0.1), Err(EulerError::TimeStep(_))));
    }

    #[test]
    fn energy_of_simple_states() {
        let grid = g(16);
        let law = PressureLaw::default();
        let rest = ConservativeState::rest(grid, 0.3).unwrap();
        assert_eq!(total_energy(&rest, &law).unwrap(), 0.0);
        // γ = 2: D(1+ε, 1) = ε²/2, so the scaled potential energy is L²/2
        let eps = 0.1;
        let st = ConservativeState::new(
            ScalarField::constant(grid, 1.0 + eps),
            VecField2::zeros(grid),
            eps,
        )
        .unwrap();
        let e = total_energy(&st, &law).unwrap();
        assert!((e - 2.0 * PI * PI).abs() < 1e-10);
    }
}
