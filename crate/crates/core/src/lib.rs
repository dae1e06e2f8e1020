//! Rainbow numbers of Z_n for `a1 x1 + a2 x2 + a3 x3 = b`.
//!
//! Closed forms live in [`formulas`], the exhaustive oracle in [`search`], and the explicit
//! rainbow-free colorings in [`constructions`]. The [`cli`] module backs the `rainbow-zn`
//! binary.

pub mod characterize;
pub mod cli;
pub mod coloring;
pub mod constructions;
pub mod equation;
pub mod error;
pub mod formulas;
pub mod modring;
pub mod search;

pub use coloring::{Coloring, RainbowReport};
pub use equation::{Equation, SolutionTriple};
pub use error::{Error, Result};
pub use formulas::{Provenance, RbResult};
pub use modring::Modulus;
pub use search::{SearchConfig, WitnessPolicy};
