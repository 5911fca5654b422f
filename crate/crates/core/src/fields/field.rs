use super::{FieldError, Grid2};

/// Real samples of a scalar quantity on a [`Grid2`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid2,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid2) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Samples `f(x, y)` at every grid point.
    pub fn from_fn(grid: Grid2, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..n {
            for ix in 0..n {
                let (x, y) = grid.coords(ix, iy);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Grid2, values: Vec<f64>) -> Result<Self, FieldError> {
        if values.len() != grid.len() {
            return Err(FieldError::Length {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let field = Self { grid, values };
        field.check_finite()?;
        Ok(field)
    }

    pub(crate) fn from_values_unchecked(grid: Grid2, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.n() + ix]
    }

    pub fn check_finite(&self) -> Result<(), FieldError> {
        match self.values.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(index) => Err(FieldError::NonFinite {
                index,
                value: self.values[index],
            }),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(
        &self,
        other: &ScalarField,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, FieldError> {
        self.grid.same_as(&other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self, FieldError> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self, FieldError> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Result<Self, FieldError> {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: f64, other: &ScalarField) -> Result<(), FieldError> {
        self.grid.same_as(&other.grid)?;
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Periodic trapezoidal integral over the torus.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(∫ f² dx)^{1/2}`
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64, FieldError> {
        self.grid.same_as(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Horizontal vector field with two scalar components on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VecField2 {
    x: ScalarField,
    y: ScalarField,
}

impl VecField2 {
    pub fn new(x: ScalarField, y: ScalarField) -> Result<Self, FieldError> {
        x.grid.same_as(&y.grid)?;
        Ok(Self { x, y })
    }

    pub fn zeros(grid: Grid2) -> Self {
        Self {
            x: ScalarField::zeros(grid),
            y: ScalarField::zeros(grid),
        }
    }

    pub fn from_fn(grid: Grid2, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        Self {
            x: ScalarField::from_fn(grid, |x, y| f(x, y).0),
            y: ScalarField::from_fn(grid, |x, y| f(x, y).1),
        }
    }

    pub fn grid(&self) -> &Grid2 {
        self.x.grid()
    }

    pub fn x(&self) -> &ScalarField {
        &self.x
    }

    pub fn y(&self) -> &ScalarField {
        &self.y
    }

    pub fn into_components(self) -> (ScalarField, ScalarField) {
        (self.x, self.y)
    }

    pub fn check_finite(&self) -> Result<(), FieldError> {
        self.x.check_finite()?;
        self.y.check_finite()
    }

    pub fn add(&self, other: &VecField2) -> Result<Self, FieldError> {
        Ok(Self {
            x: self.x.add(&other.x)?,
            y: self.y.add(&other.y)?,
        })
    }

    pub fn sub(&self, other: &VecField2) -> Result<Self, FieldError> {
        Ok(Self {
            x: self.x.sub(&other.x)?,
            y: self.y.sub(&other.y)?,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            x: self.x.scale(factor),
            y: self.y.scale(factor),
        }
    }

    /// Componentwise product with a scalar field.
    pub fn mul_scalar(&self, s: &ScalarField) -> Result<Self, FieldError> {
        Ok(Self {
            x: self.x.mul(s)?,
            y: self.y.mul(s)?,
        })
    }

    pub fn dot(&self, other: &VecField2) -> Result<ScalarField, FieldError> {
        self.x.mul(&other.x)?.add(&self.y.mul(&other.y)?)
    }

    pub fn norm_sq(&self) -> ScalarField {
        self.x
            .zip_map(&self.y, |a, b| a * a + b * b)
            .expect("components share a grid")
    }

    /// Action of `ω×` with `ω = (0, 0, 1)`: `(a₁, a₂) ↦ (−a₂, a₁)`.
    pub fn rotate(&self) -> Self {
        Self {
            x: self.y.scale(-1.0),
            y: self.x.clone(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().integral().sqrt()
    }

    /// Pointwise maximum of `|a|`.
    pub fn max_norm(&self) -> f64 {
        self.norm_sq().max().sqrt()
    }

    pub fn max_abs_diff(&self, other: &VecField2) -> Result<f64, FieldError> {
        Ok(self
            .x
            .max_abs_diff(&other.x)?
            .max(self.y.max_abs_diff(&other.y)?))
    }
}
