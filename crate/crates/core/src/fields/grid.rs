use std::f64::consts::PI;

use super::FieldError;

/// Uniform periodic grid on the square torus `[0, L)²`.
///
/// Samples are stored row-major: index `iy * n + ix`, with `x = ix * L / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    n: usize,
    length: f64,
}

impl Default for Grid2 {
    fn default() -> Self {
        Self {
            n: 128,
            length: 2.0 * PI,
        }
    }
}

impl Grid2 {
    pub fn new(n: usize, length: f64) -> Result<Self, FieldError> {
        if n < 16 || !n.is_power_of_two() {
            return Err(FieldError::InvalidGrid(format!(
                "points per axis must be a power of two >= 16, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(FieldError::InvalidGrid(format!(
                "side length must be positive and finite, got {length}"
            )));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of samples, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    pub fn area(&self) -> f64 {
        self.length * self.length
    }

    pub fn coords(&self, ix: usize, iy: usize) -> (f64, f64) {
        let h = self.spacing();
        (ix as f64 * h, iy as f64 * h)
    }

    /// Signed mode index for FFT slot `j`; the Nyquist slot maps to `n/2`.
    pub fn mode_index(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    pub fn is_nyquist(&self, j: usize) -> bool {
        j == self.n / 2
    }

    /// Wavenumber `2π j / L` of FFT slot `j`. The Nyquist slot has no partner
    /// of opposite sign, so it is assigned wavenumber zero and every derivative
    /// annihilates it.
    pub fn wavenumber(&self, j: usize) -> f64 {
        if self.is_nyquist(j) {
            0.0
        } else {
            2.0 * PI * self.mode_index(j) as f64 / self.length
        }
    }

    /// FFT slot holding signed mode `m`, if it is representable.
    pub fn slot(&self, m: i64) -> Option<usize> {
        let n = self.n as i64;
        if m.abs() >= n / 2 {
            return None;
        }
        Some(m.rem_euclid(n) as usize)
    }

    /// Largest non-Nyquist wavenumber magnitude along one axis.
    pub fn max_axis_wavenumber(&self) -> f64 {
        2.0 * PI * (self.n / 2 - 1) as f64 / self.length
    }

    /// Largest `|j|` retained by the two-thirds rule.
    pub fn dealias_cutoff(&self) -> i64 {
        // keep |j| <= n/3 (strictly below 2/3 of n/2 when n is not divisible by 3)
        (self.n / 3) as i64
    }

    pub fn same_as(&self, other: &Grid2) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::GridMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid2::new(8, 1.0).is_err());
        assert!(Grid2::new(48, 1.0).is_err());
        assert!(Grid2::new(32, 0.0).is_err());
        assert!(Grid2::new(32, f64::NAN).is_err());
        assert!(Grid2::new(16, 1.0).is_ok());
    }

    #[test]
    fn lattice_is_symmetric() {
        let g = Grid2::new(32, 3.0).unwrap();
        for j in 0..32 {
            let k = g.wavenumber(j);
            let partner = (32 - j) % 32;
            assert_eq!(g.wavenumber(partner), -k);
        }
        assert_eq!(g.wavenumber(16), 0.0);
    }

    #[test]
    fn slots_round_trip() {
        let g = Grid2::new(16, 1.0).unwrap();
        for m in -7..=7 {
            let s = g.slot(m).unwrap();
            assert_eq!(g.mode_index(s), m);
        }
        assert!(g.slot(8).is_none());
    }
}
