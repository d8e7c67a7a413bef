//! Critical exponents, limit curves and positivity for Anosov representations
//! of surface groups.

pub mod cartan;
pub mod cones;
pub mod critexp;
pub mod doubling;
pub mod error;
pub mod flags;
pub mod hypdisc;
pub mod limitgeom;
pub mod reps;
pub mod tpos;
pub mod words;

pub use error::{Error, Result};
