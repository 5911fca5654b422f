//! Numerical laboratory for the joint low Mach / low Rossby limit of the
//! rotating compressible Euler system on a periodic square.
//!
//! The crate solves three systems on a shared pseudo-spectral grid:
//!
//! * [`euler`]: the scaled compressible system with singular pressure and
//!   Coriolis terms, integrated by Strang splitting with exact propagation
//!   of the stiff linear part;
//! * [`acoustic`]: the linear rotating acoustic (Poincaré) system, solved
//!   exactly per Fourier mode;
//! * [`qg`]: the quasi-geostrophic limit equation for the stream function.
//!
//! [`diagnostics`] compares the compressible solution against the
//! QG-plus-acoustic ansatz through the relative energy functional.

pub mod fields;
pub mod acoustic;
pub mod diagnostics;
pub mod euler;
pub mod qg;
pub mod thermo;

pub use fields::{FieldError, Grid2, ScalarField, Spectrum, VecField2};
pub use thermo::{PressureLaw, ThermoError};
