//! Homological computations over finite-dimensional linear categories presented
//! by quivers with relations.

pub mod bimod;
pub mod error;
pub mod evidence;
pub mod exactlin;
pub mod matrixcat;
pub mod quiver;

pub use error::{Error, Result};
pub mod modcat;
pub mod pathcat;
pub mod sie;
