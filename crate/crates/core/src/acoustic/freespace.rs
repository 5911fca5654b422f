//! Free-space (unbounded plane) solution of the rotating acoustic system for
//! radially symmetric data, by adaptive quadrature of its Fourier–Hankel
//! representation. Unlike the torus solver it has no recurrence, so it is the
//! reference for dispersive decay.
//!
//! For data `s₀(r)`, `w₀ = ∇Φ₀(r)` with Hankel transforms `Ŝ(κ)`, `Φ̂(κ)` and
//! `Ω = √(1+κ²)`, the solution at fast time `τ` is
//!
//! ```text
//! ŝ(τ) = (1 + κ² cos Ωτ) Ŝ/Ω² + κ² sin(Ωτ) Φ̂/Ω
//! w    = ∇A + ∇⊥B,
//! Â(τ) = cos(Ωτ) Φ̂ − sin(Ωτ) Ŝ/Ω
//! B̂(τ) = (1 − cos Ωτ) Ŝ/Ω² − sin(Ωτ) Φ̂/Ω
//! ```
//!
//! The stationary `Ŝ/Ω²` terms are the geostrophic component of the data.

use std::f64::consts::PI;

use super::AcousticError;

type Profile = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial profiles of `s₀` and `Φ₀`, both vanishing for `r > support_radius`.
pub struct RadialData {
    s0: Profile,
    phi0: Profile,
    support_radius: f64,
}

impl RadialData {
    pub fn new(
        s0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phi0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_radius: f64,
    ) -> Result<Self, AcousticError> {
        if !(support_radius.is_finite() && support_radius > 0.0) {
            return Err(AcousticError::Probe(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        Ok(Self {
            s0: Box::new(s0),
            phi0: Box::new(phi0),
            support_radius,
        })
    }

    /// Pure potential data `s₀ = 0`, `Φ₀(r) = amplitude · exp(−r²/(2 width²))`,
    /// truncated where the Gaussian drops below `1e-16` of its peak.
    pub fn gaussian_potential(amplitude: f64, width: f64) -> Result<Self, AcousticError> {
        let support = width * (2.0 * 16.0 * std::f64::consts::LN_10).sqrt();
        Self::new(
            |_| 0.0,
            move |r| amplitude * (-r * r / (2.0 * width * width)).exp(),
            support,
        )
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn s0(&self, r: f64) -> f64 {
        (self.s0)(r)
    }

    pub fn phi0(&self, r: f64) -> f64 {
        (self.phi0)(r)
    }
}

/// Value of `s` and `w` at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeValue {
    pub s: f64,
    pub w: [f64; 2],
}

impl ProbeValue {
    pub fn w_norm(&self) -> f64 {
        self.w[0].hypot(self.w[1])
    }
}

/// Chebyshev interpolant on `[0, k_max]`.
struct Chebyshev {
    k_max: f64,
    coeffs: Vec<f64>,
}

impl Chebyshev {
    fn fit(k_max: f64, samples: &[f64]) -> Self {
        let n = samples.len();
        let mut coeffs = vec![0.0; n];
        for (m, c) in coeffs.iter_mut().enumerate() {
            let sum: f64 = samples
                .iter()
                .enumerate()
                .map(|(j, f)| f * (PI * m as f64 * (j as f64 + 0.5) / n as f64).cos())
                .sum();
            *c = 2.0 * sum / n as f64;
        }
        coeffs[0] *= 0.5;
        Self { k_max, coeffs }
    }

    fn nodes(k_max: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let x = (PI * (j as f64 + 0.5) / n as f64).cos();
                0.5 * k_max * (x + 1.0)
            })
            .collect()
    }

    fn tail(&self) -> f64 {
        let n = self.coeffs.len();
        self.coeffs[n - 4..].iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn eval(&self, k: f64) -> f64 {
        let x = 2.0 * k / self.k_max - 1.0;
        // Clenshaw recurrence
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }
}

/// Splits `[a, b]` into panels no wider than `width` and sums adaptive
/// double-exponential quadratures. Returns `(integral, error estimate)`.
fn panel_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, width: f64, tol: f64) -> (f64, f64) {
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let per_panel = tol / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let out = quadrature::integrate(&f, lo, lo + h, per_panel);
        total += out.integral;
        err += out.error_estimate;
    }
    (total, err)
}

/// `2π ∫₀^R f(r) J₀(κr) r dr`
fn hankel(f: &dyn Fn(f64) -> f64, radius: f64, k: f64, tol: f64) -> (f64, f64) {
    let (v, e) = panel_integrate(
        |r| f(r) * libm::j0(k * r) * r,
        0.0,
        radius,
        PI / (k + 1.0),
        tol / (2.0 * PI),
    );
    (2.0 * PI * v, 2.0 * PI * e)
}

struct Transforms {
    s: Chebyshev,
    phi: Chebyshev,
}

const MAX_WAVENUMBER: f64 = 400.0;
const MAX_NODES: usize = 1024;

impl Transforms {
    fn build(data: &RadialData, tol: f64) -> Result<Self, AcousticError> {
        let radius = data.support_radius;
        let inner_tol = tol * 1e-3;
        let pair = |k: f64| -> Result<(f64, f64), AcousticError> {
            let (a, ea) = hankel(&*data.s0, radius, k, inner_tol);
            let (b, eb) = hankel(&*data.phi0, radius, k, inner_tol);
            let err = ea.max(eb);
            if err > inner_tol * 10.0 {
                return Err(AcousticError::Quadrature {
                    achieved: err,
                    requested: inner_tol,
                });
            }
            Ok((a, b))
        };

        // Cutoff: first κ past which both transforms stay negligible.
        let step = (0.25 / radius).min(0.25);
        let (s_peak, phi_peak) = pair(0.0)?;
        let mut peak = s_peak.abs().max(phi_peak.abs());
        let mut k = 0.0;
        let mut quiet = 0usize;
        let k_max = loop {
            k += step;
            if k > MAX_WAVENUMBER {
                return Err(AcousticError::Quadrature {
                    achieved: f64::NAN,
                    requested: tol,
                });
            }
            let (a, b) = pair(k)?;
            let m = a.abs().max(b.abs());
            peak = peak.max(m);
            if m < 1e-14 * peak.max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet as f64 * step >= 1.0 {
                    break k;
                }
            } else {
                quiet = 0;
            }
        };

        let mut n = 32;
        loop {
            let nodes = Chebyshev::nodes(k_max, n);
            let mut s_vals = Vec::with_capacity(n);
            let mut phi_vals = Vec::with_capacity(n);
            for &k in &nodes {
                let (a, b) = pair(k)?;
                s_vals.push(a);
                phi_vals.push(b);
            }
            let s = Chebyshev::fit(k_max, &s_vals);
            let phi = Chebyshev::fit(k_max, &phi_vals);
            let tail = s.tail().max(phi.tail());
            if tail <= 1e-12 * peak || n >= MAX_NODES {
                if tail > tol {
                    return Err(AcousticError::Quadrature {
                        achieved: tail,
                        requested: tol,
                    });
                }
                return Ok(Self { s, phi });
            }
            n *= 2;
        }
    }
}

/// Evaluates the free-space solution at fast time `tau = t/ε` and the given
/// points (relative to the centre of symmetry), to absolute accuracy `tol`.
pub fn freespace_acoustic_probe(
    data: &RadialData,
    tau: f64,
    points: &[[f64; 2]],
    tol: f64,
) -> Result<Vec<ProbeValue>, AcousticError> {
    if !tau.is_finite() {
        return Err(AcousticError::Time(tau));
    }
    if points.len() > 64 {
        return Err(AcousticError::Probe(format!(
            "at most 64 evaluation points, got {}",
            points.len()
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(AcousticError::Probe(format!("tolerance must be positive, got {tol}")));
    }
    let tr = Transforms::build(data, tol)?;
    let k_max = tr.s.k_max;
    let spectra = |k: f64| {
        let s_hat = tr.s.eval(k);
        let phi_hat = tr.phi.eval(k);
        let omega = (1.0 + k * k).sqrt();
        let (sin, cos) = (omega * tau).sin_cos();
        let k2 = k * k;
        let s_tau = (1.0 + k2 * cos) * s_hat / (omega * omega) + k2 * sin * phi_hat / omega;
        let a = cos * phi_hat - sin * s_hat / omega;
        let b = (1.0 - cos) * s_hat / (omega * omega) - sin * phi_hat / omega;
        (s_tau, a, b)
    };

    points
        .iter()
        .map(|p| {
            let r = p[0].hypot(p[1]);
            let width = PI / (tau.abs() + r + 1.0);
            let part_tol = tol * 2.0 * PI / 3.0;
            let (s, e1) = panel_integrate(
                |k| spectra(k).0 * libm::j0(k * r) * k,
                0.0,
                k_max,
                width,
                part_tol,
            );
            let (wr, e2) = if r > 0.0 {
                panel_integrate(
                    |k| -spectra(k).1 * libm::j1(k * r) * k * k,
                    0.0,
                    k_max,
                    width,
                    part_tol,
                )
            } else {
                (0.0, 0.0)
            };
            let (wt, e3) = if r > 0.0 {
                panel_integrate(
                    |k| -spectra(k).2 * libm::j1(k * r) * k * k,
                    0.0,
                    k_max,
                    width,
                    part_tol,
                )
            } else {
                (0.0, 0.0)
            };
            let achieved = (e1 + e2 + e3) / (2.0 * PI);
            if achieved > tol {
                return Err(AcousticError::Quadrature {
                    achieved,
                    requested: tol,
                });
            }
            let norm = 1.0 / (2.0 * PI);
            let (er, et) = if r > 0.0 {
                ([p[0] / r, p[1] / r], [-p[1] / r, p[0] / r])
            } else {
                ([0.0, 0.0], [0.0, 0.0])
            };
            Ok(ProbeValue {
                s: norm * s,
                w: [
                    norm * (wr * er[0] + wt * et[0]),
                    norm * (wr * er[1] + wt * et[1]),
                ],
            })
        })
        .collect()
}
