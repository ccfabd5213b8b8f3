//! Exact computations around simple current extensions of V_L^+ for
//! 2-elementary totally even lattices: binary codes, lattices in a scaled
//! frame, quadratic spaces over F2, module labels and their characters.

pub mod classify;
pub mod codes;
pub mod error;
pub mod f2core;
pub mod lattice;
pub mod leechlab;
pub mod qspace;
pub mod voamod;
pub mod qseries;

pub use error::{Error, Result};
