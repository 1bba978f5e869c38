pub mod error;
pub mod specfun;
pub mod quad;
pub mod repcore;
pub mod coherent;
pub mod actionangle;
pub mod hilbert;
pub mod physapp;
pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
