use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::{FieldError, Grid2, ScalarField};

struct Plan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

thread_local! {
    // One planner and scratch buffer per thread and grid size.
    static PLANS: RefCell<HashMap<usize, Plan>> = RefCell::new(HashMap::new());
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized 2-D DFT in place (row-major, `n × n`).
fn fft2(data: &mut [Complex64], n: usize, inverse: bool) {
    PLANS.with(|plans| {
        let mut plans = plans.borrow_mut();
        let plan = plans.entry(n).or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let forward = planner.plan_fft_forward(n);
            let inverse = planner.plan_fft_inverse(n);
            let len = forward
                .get_inplace_scratch_len()
                .max(inverse.get_inplace_scratch_len());
            Plan {
                forward,
                inverse,
                scratch: vec![Complex64::new(0.0, 0.0); len],
            }
        });
        let fft = if inverse {
            plan.inverse.clone()
        } else {
            plan.forward.clone()
        };
        fft.process_with_scratch(data, &mut plan.scratch);
        transpose(data, n);
        fft.process_with_scratch(data, &mut plan.scratch);
        transpose(data, n);
    });
}

/// Fourier coefficients of a real field, laid out like the samples
/// (`iy * n + ix`, FFT slot order on each axis).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid2,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid2) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Forward transform. Rejects non-finite samples.
    pub fn forward(field: &ScalarField) -> Result<Self, FieldError> {
        field.check_finite()?;
        let grid = *field.grid();
        let mut coeffs: Vec<Complex64> = field
            .values()
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        fft2(&mut coeffs, grid.n(), false);
        Ok(Self { grid, coeffs })
    }

    /// Inverse transform, keeping the real part.
    pub fn to_field(&self) -> ScalarField {
        let n = self.grid.n();
        let mut data = self.coeffs.clone();
        fft2(&mut data, n, true);
        let norm = 1.0 / self.grid.len() as f64;
        let values = data.iter().map(|c| c.re * norm).collect();
        ScalarField::from_values_unchecked(self.grid, values)
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of signed mode `(mx, my)`, if representable.
    pub fn mode(&self, mx: i64, my: i64) -> Option<Complex64> {
        let ix = self.grid.slot(mx)?;
        let iy = self.grid.slot(my)?;
        Some(self.coeffs[iy * self.grid.n() + ix])
    }

    /// Applies `f(kx, ky, c)` to every coefficient.
    pub fn map_modes(&self, f: impl Fn(f64, f64, Complex64) -> Complex64) -> Self {
        let n = self.grid.n();
        let mut out = self.clone();
        for iy in 0..n {
            let ky = self.grid.wavenumber(iy);
            for ix in 0..n {
                let kx = self.grid.wavenumber(ix);
                let c = &mut out.coeffs[iy * n + ix];
                *c = f(kx, ky, *c);
            }
        }
        out
    }

    pub fn dx(&self) -> Self {
        self.map_modes(|kx, _, c| Complex64::new(0.0, kx) * c)
    }

    pub fn dy(&self) -> Self {
        self.map_modes(|_, ky, c| Complex64::new(0.0, ky) * c)
    }

    pub fn laplacian(&self) -> Self {
        self.map_modes(|kx, ky, c| -(kx * kx + ky * ky) * c)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Spectrum) -> Result<Self, FieldError> {
        self.grid.same_as(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Zeroes every mode with `|j| > n/3` on either axis, and the Nyquist slots.
    pub fn dealias_in_place(&mut self) {
        let n = self.grid.n();
        let cut = self.grid.dealias_cutoff();
        for iy in 0..n {
            let my = self.grid.mode_index(iy).abs();
            for ix in 0..n {
                let mx = self.grid.mode_index(ix).abs();
                if mx > cut || my > cut {
                    self.coeffs[iy * n + ix] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    pub fn dealiased(mut self) -> Self {
        self.dealias_in_place();
        self
    }

    /// `∫ f² dx` from the coefficients (Parseval).
    pub fn energy(&self) -> f64 {
        let npts = self.grid.len() as f64;
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.area() / (npts * npts)
    }
}
