//! Dirac boundary integral equations for the Maxwell transmission problem:
//! parameter sets, the assembled system with its augmentations, and the
//! quasi-static limits used to study null spaces.

pub mod augment;
pub mod limit;
pub mod params;
pub mod system;

pub use augment::{AugmentationId, AugmentationTerm};
pub use params::{ParameterSet, Variant, Wavenumbers};
pub use system::{AssembledSystem, CauchyPair, SolveReport, SystemConfig};
