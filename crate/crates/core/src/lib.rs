//! Exact spectra and wavefunctions of a Dirac particle in the homogeneous
//! magnetic field analogue on the 3-sphere, together with independent
//! numerical oracles that check every closed form.
//!
//! Units: the curvature radius is 1 throughout; `B` is the dimensionless
//! field strength and `M` the dimensionless mass. The physical radius only
//! appears in [`spectra::flat_limit_scan`].

pub mod error;
pub mod field;
pub mod geometry;
pub mod hyp2f1;
pub mod oracle;
pub mod separation;
pub mod spectra;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use field::{FieldParams, TwiceM};
pub use oracle::GridSpec;
pub use separation::BranchChoice;
pub use spectra::{QuantumNumbers, SpectrumRecord};
pub use wavefunctions::{RVariant, ZVariant};
