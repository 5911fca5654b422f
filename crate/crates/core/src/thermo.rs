//! Isentropic barotropic pressure law `p(ρ) = ρ^γ/γ`, normalized so that
//! `p'(1) = P''(1) = 1`, with its pressure potential and Bregman distance.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("adiabatic exponent must lie in (1, 3], got {0}")]
    Gamma(f64),
    #[error("density must be nonnegative, got {0}")]
    NegativeDensity(f64),
    #[error("reference density must be positive, got {0}")]
    NonPositiveReference(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    gamma: f64,
}

impl Default for PressureLaw {
    fn default() -> Self {
        Self { gamma: 2.0 }
    }
}

/// `(1+x)^γ − 1 − γx`, accurate for small `|x|`.
fn power_bregman(gamma: f64, x: f64) -> f64 {
    if x.abs() < 1e-3 {
        // binomial series Σ_{j≥2} C(γ, j) x^j; x^9 is below 1e-27
        let mut coeff = gamma * (gamma - 1.0) / 2.0;
        let mut power = x * x;
        let mut sum = coeff * power;
        for j in 3..9 {
            coeff *= (gamma - (j - 1) as f64) / j as f64;
            power *= x;
            sum += coeff * power;
        }
        sum
    } else {
        libm::expm1(gamma * libm::log1p(x)) - gamma * x
    }
}

impl PressureLaw {
    pub fn new(gamma: f64) -> Result<Self, ThermoError> {
        if !(gamma > 1.0 && gamma <= 3.0) {
            return Err(ThermoError::Gamma(gamma));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `(p(ρ), p'(ρ)) = (ρ^γ/γ, ρ^{γ−1})`
    pub fn pressure(&self, rho: f64) -> Result<(f64, f64), ThermoError> {
        if rho < 0.0 || rho.is_nan() {
            return Err(ThermoError::NegativeDensity(rho));
        }
        let g = self.gamma;
        Ok((rho.powf(g) / g, rho.powf(g - 1.0)))
    }

    /// `P(ρ) = ρ ∫₁^ρ p(z)/z² dz = (ρ^γ − ρ) / (γ(γ−1))`
    pub fn pressure_potential(&self, rho: f64) -> Result<f64, ThermoError> {
        if rho < 0.0 || rho.is_nan() {
            return Err(ThermoError::NegativeDensity(rho));
        }
        let g = self.gamma;
        Ok((rho.powf(g) - rho) / (g * (g - 1.0)))
    }

    /// `P'(ρ) = (γ ρ^{γ−1} − 1) / (γ(γ−1))`
    pub fn pressure_potential_prime(&self, rho: f64) -> f64 {
        let g = self.gamma;
        (g * rho.powf(g - 1.0) - 1.0) / (g * (g - 1.0))
    }

    /// `P''(ρ) = ρ^{γ−2} = p'(ρ)/ρ`
    pub fn pressure_potential_second(&self, rho: f64) -> f64 {
        rho.powf(self.gamma - 2.0)
    }

    /// Bregman distance `P(ρ) − P'(r)(ρ − r) − P(r)`, nonnegative and zero
    /// only at `ρ = r`. Evaluated without cancellation near `ρ = r`.
    pub fn relative_pressure_potential(&self, rho: f64, r: f64) -> Result<f64, ThermoError> {
        if r.is_nan() || r <= 0.0 {
            return Err(ThermoError::NonPositiveReference(r));
        }
        if rho < 0.0 || rho.is_nan() {
            return Err(ThermoError::NegativeDensity(rho));
        }
        let g = self.gamma;
        let x = (rho - r) / r;
        // the linear part −ρ/(γ(γ−1)) of P cancels exactly
        Ok(r.powf(g) * power_bregman(g, x) / (g * (g - 1.0)))
    }

    /// Nonlinear pressure remainder `p(1+δ) − p(1) − p'(1) δ`.
    pub fn pressure_remainder(&self, delta: f64) -> f64 {
        power_bregman(self.gamma, delta) / self.gamma
    }
}
