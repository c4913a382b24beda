pub mod adic;
pub mod error;
pub mod hilbert;
pub mod sparse;

pub use error::{Error, Result};
pub mod shifts;
pub mod coeff;
pub mod cuntz;
pub mod harness;
