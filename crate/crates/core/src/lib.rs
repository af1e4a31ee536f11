//! Exact arithmetic in totally real fields and effective geometry of Hilbert
//! modular varieties: cusp stabilizers, toroidal resolutions, hyperbolic
//! volume estimates and positivity thresholds.

pub mod congruence;
pub mod cusps;
pub mod error;
pub mod hyperbolic;
pub mod interval;
pub mod linalg;
pub mod numberfield;
pub mod poly;
pub mod rational;
pub mod thresholds;
pub mod toroidal;
pub mod verify;

pub use error::{Error, Result};
