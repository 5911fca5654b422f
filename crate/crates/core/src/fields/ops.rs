//! Exact spectral differential operators on band-limited periodic fields.

use super::{FieldError, ScalarField, Spectrum, VecField2};

/// Forward then inverse transform.
pub fn transform_roundtrip(f: &ScalarField) -> Result<ScalarField, FieldError> {
    Ok(Spectrum::forward(f)?.to_field())
}

pub fn gradient(f: &ScalarField) -> Result<VecField2, FieldError> {
    let fh = Spectrum::forward(f)?;
    VecField2::new(fh.dx().to_field(), fh.dy().to_field())
}

/// `∇⊥f = (−∂_y f, ∂_x f)`
pub fn perp_gradient(f: &ScalarField) -> Result<VecField2, FieldError> {
    let fh = Spectrum::forward(f)?;
    VecField2::new(fh.dy().scale(-1.0).to_field(), fh.dx().to_field())
}

pub fn divergence(v: &VecField2) -> Result<ScalarField, FieldError> {
    let ax = Spectrum::forward(v.x())?;
    let ay = Spectrum::forward(v.y())?;
    Ok(ax.dx().add(&ay.dy())?.to_field())
}

/// Horizontal curl `∂_x a₂ − ∂_y a₁`.
pub fn curl_h(v: &VecField2) -> Result<ScalarField, FieldError> {
    let ax = Spectrum::forward(v.x())?;
    let ay = Spectrum::forward(v.y())?;
    Ok(ay.dx().add(&ax.dy().scale(-1.0))?.to_field())
}

pub fn laplacian(f: &ScalarField) -> Result<ScalarField, FieldError> {
    Ok(Spectrum::forward(f)?.laplacian().to_field())
}

/// Two-thirds rule truncation.
pub fn dealias(f: &ScalarField) -> Result<ScalarField, FieldError> {
    Ok(Spectrum::forward(f)?.dealiased().to_field())
}
