//! Exact computation for systems of mod-p linear forms restricted to an
//! alphabet cube `S^n ⊆ F_p^n`.
//!
//! The crate computes satisfying-set densities and joint distributions
//! exactly, evaluates Fourier coefficients and their bias bounds, produces
//! machine-checkable density-bound certificates (an equidistributed
//! subfamily, or a ball containing a large sunflower), and generates the
//! standard example systems together with verified reports of the
//! properties they exhibit.

pub mod cli;
pub mod constructions;
pub mod density;
pub mod error;
pub mod forms;
pub mod fourier;
pub mod fp;
pub mod structure;

pub use error::{Error, Result};
pub use forms::{Condition, ConditionSystem, LinearForm};
pub use fp::{Alphabet, Modulus, ResidueSet, TargetSet};

/// Default cap on projective/affine coefficient-vector enumerations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;
