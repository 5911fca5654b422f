//! Initial data from presets and mode lists.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rossby_core::euler::{EulerError, IllPreparedData};
use rossby_core::fields::{perp_gradient, FieldError, Grid2, ScalarField, Spectrum};

use crate::config::{Bump, ExperimentConfig, InitialDataConfig, Mode, Preset};

/// The reference experiment: two geostrophic modes and one small potential
/// bump that launches the acoustic waves.
pub fn reference_data() -> InitialDataConfig {
    InitialDataConfig {
        q: vec![
            Mode { k: [1, 0], amplitude: 0.6, phase: 0.0 },
            Mode { k: [1, 2], amplitude: 0.3, phase: 0.5 * PI },
        ],
        phi0_bumps: vec![Bump { center: [PI, PI], width: 0.6, amplitude: 0.1 }],
        ..InitialDataConfig::preset(Preset::Explicit)
    }
}

fn random_data(grid: Grid2, seed: u64, count: usize, amplitude: f64) -> InitialDataConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kmax = (grid.n() as i64 / 3).min(4);
    let mut q = Vec::with_capacity(count);
    while q.len() < count {
        let k = [rng.gen_range(-kmax..=kmax), rng.gen_range(-kmax..=kmax)];
        if k == [0, 0] {
            continue;
        }
        q.push(Mode {
            k,
            amplitude: amplitude * rng.gen_range(0.2..1.0),
            phase: rng.gen_range(0.0..2.0 * PI),
        });
    }
    let l = grid.length();
    let bump = Bump {
        center: [rng.gen_range(0.0..l), rng.gen_range(0.0..l)],
        width: 0.1 * l,
        amplitude: amplitude / 3.0,
    };
    InitialDataConfig {
        q,
        phi0_bumps: vec![bump],
        ..InitialDataConfig::preset(Preset::Explicit)
    }
}

/// Expands presets into an explicit recipe.
pub fn resolve(config: &ExperimentConfig) -> InitialDataConfig {
    let d = &config.initial_data;
    match d.preset {
        Preset::Zero => InitialDataConfig::preset(Preset::Explicit),
        Preset::Reference => reference_data(),
        Preset::Random => {
            let grid = Grid2::new(config.grid.n, config.grid.length).expect("validated grid");
            random_data(
                grid,
                config.seed,
                d.random_modes.unwrap_or(4),
                d.random_amplitude.unwrap_or(0.3),
            )
        }
        Preset::Explicit => d.clone(),
    }
}

fn mode_sum(grid: Grid2, modes: &[Mode]) -> ScalarField {
    let c = 2.0 * PI / grid.length();
    ScalarField::from_fn(grid, |x, y| {
        modes
            .iter()
            .map(|m| m.amplitude * (c * (m.k[0] as f64 * x + m.k[1] as f64 * y) + m.phase).cos())
            .sum()
    })
}

/// Periodised Gaussians, truncated to the dealiased band with zero mean.
fn bumps(grid: Grid2, bumps: &[Bump]) -> Result<ScalarField, FieldError> {
    let l = grid.length();
    let raw = ScalarField::from_fn(grid, |x, y| {
        let mut v = 0.0;
        for b in bumps {
            for i in -1..=1 {
                for j in -1..=1 {
                    let dx = x - b.center[0] + i as f64 * l;
                    let dy = y - b.center[1] + j as f64 * l;
                    v += b.amplitude * (-(dx * dx + dy * dy) / (2.0 * b.width * b.width)).exp();
                }
            }
        }
        v
    });
    let mut spec = Spectrum::forward(&raw)?.dealiased();
    spec.coeffs_mut()[0] = 0.0.into();
    Ok(spec.to_field())
}

/// `s0 = q + s_extra`, `v0 = ∇⊥q`, `Φ0 = modes + bumps`.
pub fn build(grid: Grid2, recipe: &InitialDataConfig) -> Result<IllPreparedData, EulerError> {
    let q = mode_sum(grid, &recipe.q);
    let s0 = q.add(&mode_sum(grid, &recipe.s_extra))?;
    let phi0 = mode_sum(grid, &recipe.phi0).add(&bumps(grid, &recipe.phi0_bumps)?)?;
    IllPreparedData::new(s0, perp_gradient(&q)?, phi0)
}

pub fn from_config(config: &ExperimentConfig) -> Result<IllPreparedData, EulerError> {
    let grid = Grid2::new(config.grid.n, config.grid.length)?;
    build(grid, &resolve(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rossby_core::fields::divergence;

    fn grid() -> Grid2 {
        Grid2::new(64, 2.0 * PI).unwrap()
    }

    #[test]
    fn reference_data_is_mean_free_and_balanced() {
        let d = build(grid(), &reference_data()).unwrap();
        assert!(d.s0.mean().abs() < 1e-14);
        assert!(d.phi0.mean().abs() < 1e-14);
        assert!(divergence(&d.v0).unwrap().max_abs() < 1e-12);
        assert!(d.phi0.max() > 0.05);
    }

    #[test]
    fn random_data_depends_only_on_seed() {
        let a = random_data(grid(), 3, 5, 0.3);
        let b = random_data(grid(), 3, 5, 0.3);
        let c = random_data(grid(), 4, 5, 0.3);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.q.len(), 5);
    }

    #[test]
    fn single_mode_values() {
        let g = grid();
        let f = mode_sum(g, &[Mode { k: [1, 0], amplitude: 2.0, phase: 0.0 }]);
        assert!((f.get(0, 0) - 2.0).abs() < 1e-15);
        assert!((f.get(32, 0) + 2.0).abs() < 1e-14);
    }
}
