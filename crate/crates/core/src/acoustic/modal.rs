use num_complex::Complex64;

/// Dense complex 3×3 matrix acting on `(ŝ, ŵ₁, ŵ₂)`.
pub type Mat3 = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Mat3 {
    [[ONE, ZERO, ZERO], [ZERO, ONE, ZERO], [ZERO, ZERO, ONE]]
}

pub fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    out
}

pub fn matvec(a: &Mat3, v: [Complex64; 3]) -> [Complex64; 3] {
    let mut out = [ZERO; 3];
    for (o, row) in out.iter_mut().zip(a) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

fn lincomb(terms: &[(Complex64, &Mat3)]) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for (c, m) in terms {
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] += *c * m[i][j];
            }
        }
    }
    out
}

/// Fourier symbol `M(k)` of the rotating acoustic generator (before the
/// `1/ε` scaling):
///
/// ```text
/// M = [[0, −ik₁, −ik₂], [−ik₁, 0, 1], [−ik₂, −1, 0]]
/// ```
///
/// `M` is skew-adjoint with eigenvalues `0, ±i√(1+|k|²)`.
pub fn mode_symbol(k: [f64; 2]) -> Mat3 {
    let ik1 = Complex64::new(0.0, k[0]);
    let ik2 = Complex64::new(0.0, k[1]);
    [[ZERO, -ik1, -ik2], [-ik1, ZERO, ONE], [-ik2, -ONE, ZERO]]
}

/// `M(k)/ε`
pub fn acoustic_mode_matrix(k: [f64; 2], epsilon: f64) -> Mat3 {
    let m = mode_symbol(k);
    lincomb(&[(Complex64::new(1.0 / epsilon, 0.0), &m)])
}

/// Angular frequency `√(1+|k|²)` of the oscillating branches, in fast time.
pub fn mode_frequency(k: [f64; 2]) -> f64 {
    (1.0 + k[0] * k[0] + k[1] * k[1]).sqrt()
}

/// Spectral projectors of `M(k)` onto the eigenvalues `0`, `+iΩ`, `−iΩ`.
#[derive(Debug, Clone, Copy)]
pub struct ModeProjectors {
    pub frequency: f64,
    pub zero: Mat3,
    pub plus: Mat3,
    pub minus: Mat3,
}

impl ModeProjectors {
    pub fn new(k: [f64; 2]) -> Self {
        let m = mode_symbol(k);
        let m2 = matmul(&m, &m);
        let omega = mode_frequency(k);
        let w2 = omega * omega;
        let i_omega = Complex64::new(0.0, omega);
        let id = identity();
        // Lagrange interpolation on the three distinct eigenvalues
        let zero = lincomb(&[(ONE, &id), (Complex64::new(1.0 / w2, 0.0), &m2)]);
        let scale = Complex64::new(-0.5 / w2, 0.0);
        let plus = lincomb(&[(scale, &m2), (scale * i_omega, &m)]);
        let minus = lincomb(&[(scale, &m2), (-scale * i_omega, &m)]);
        Self {
            frequency: omega,
            zero,
            plus,
            minus,
        }
    }

    /// `P₀ + e^{iΩs} P₊ + e^{−iΩs} P₋` at fast time `s`.
    pub fn exp(&self, fast_time: f64) -> Mat3 {
        let phase = Complex64::from_polar(1.0, self.frequency * fast_time);
        lincomb(&[(ONE, &self.zero), (phase, &self.plus), (phase.conj(), &self.minus)])
    }
}

/// `exp(t M(k)/ε)` from the eigen-decomposition of `M(k)`.
pub fn mode_propagator(k: [f64; 2], epsilon: f64, t: f64) -> Mat3 {
    ModeProjectors::new(k).exp(t / epsilon)
}
