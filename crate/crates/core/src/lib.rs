pub mod analytic;
pub mod bessel;
pub mod cli;
pub mod continuum;
pub mod error;
pub mod evolution;
pub mod fmt;
pub mod hardy;
pub mod lattice;
pub mod scaled;

pub use error::{Error, Result};
pub use lattice::{Envelope, LatticeSignal, NormKind};
pub use scaled::ComplexScaled;
