//! Dirac boundary integral equations for time-harmonic eddy current
//! scattering by axisymmetric conductors of genus 0 and 1.

pub mod blocks;
pub mod cauchy;
pub mod density;
pub mod dirac;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod gmres;
pub mod incident;
pub mod kernel;
pub mod mie;
pub mod neumann;
pub mod quad;
pub mod specfun;

pub use error::{AxiError, Result};
