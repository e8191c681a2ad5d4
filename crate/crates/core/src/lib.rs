//! Fourth-order compact finite differences for two-dimensional
//! convection–diffusion–reaction equations with mixed derivatives,
//! with θ-weighted time stepping, von Neumann analysis and a
//! stream-function/vorticity Navier–Stokes driver.

pub mod analysis;
pub mod assembly;
pub mod error;
pub mod exec;
pub mod grid;
pub mod navier_stokes;
pub mod operators;
pub mod output;
pub mod problems;
pub mod solver;
pub mod study;

pub use error::{Error, Result};
pub use exec::Execution;
